//! Machine-word modular arithmetic: u64/u128 mulmod and powmod, Montgomery
//! form for 128-bit moduli, deterministic Miller-Rabin, integer roots and a
//! prime sieve. Everything here is branch-deterministic so factorizations
//! and censuses reproduce bit-for-bit.

/// Multiply-mod for u64 via a 128-bit intermediate.
#[inline]
pub fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Square-and-multiply powmod for u64.
pub fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    base %= m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Full 256-bit product of two u128 values as (hi, lo).
#[inline]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let a_lo = a as u64 as u128;
    let a_hi = a >> 64;
    let b_lo = b as u64 as u128;
    let b_hi = b >> 64;

    let ll = a_lo * b_lo;
    let lh = a_lo * b_hi;
    let hl = a_hi * b_lo;
    let hh = a_hi * b_hi;

    let mid = lh.wrapping_add(hl);
    let mid_carry = (mid < lh) as u128; // worth 2^192

    let lo = ll.wrapping_add(mid << 64);
    let lo_carry = (lo < ll) as u128;

    let hi = hh
        .wrapping_add(mid >> 64)
        .wrapping_add(mid_carry << 64)
        .wrapping_add(lo_carry);
    (hi, lo)
}

/// Montgomery arithmetic for an odd modulus n < 2^127.
///
/// Used by the 128-bit Miller-Rabin and Pollard-Brent paths; values at the
/// scales this crate factors (|T| up to ~10^24) fit comfortably.
#[derive(Clone, Copy)]
pub struct Mont128 {
    pub n: u128,
    ninv: u128, // -n^{-1} mod 2^128
    r1: u128,   // R mod n
    r2: u128,   // R^2 mod n
}

impl Mont128 {
    pub fn new(n: u128) -> Self {
        debug_assert!(n & 1 == 1 && n > 1 && n < (1u128 << 127));
        // Newton-Hensel inverse of n mod 2^128.
        let mut inv = n; // correct mod 2^3 for odd n? start from n works mod 2^2; iterate enough
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        debug_assert_eq!(n.wrapping_mul(inv), 1);
        let ninv = inv.wrapping_neg();
        let r1 = n.wrapping_neg() % n; // 2^128 mod n
        let mut r2 = r1;
        for _ in 0..128 {
            r2 = Self::addmod(r2, r2, n);
        }
        Mont128 { n, ninv, r1, r2 }
    }

    #[inline]
    fn addmod(a: u128, b: u128, n: u128) -> u128 {
        let (r, overflow) = a.overflowing_add(b);
        if overflow || r >= n {
            r.wrapping_sub(n)
        } else {
            r
        }
    }

    /// REDC: given t = hi*2^128 + lo < n*2^128, return t / 2^128 mod n.
    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.ninv);
        let (mn_hi, _mn_lo) = mul_wide(m, self.n);
        // lo + low(m*n) == 0 mod 2^128, carrying exactly when lo != 0.
        let carry = (lo != 0) as u128;
        let (r, overflow) = hi.overflowing_add(mn_hi);
        let (r, overflow2) = r.overflowing_add(carry);
        if overflow || overflow2 || r >= self.n {
            r.wrapping_sub(self.n)
        } else {
            r
        }
    }

    #[inline]
    pub fn to_mont(&self, x: u128) -> u128 {
        let (hi, lo) = mul_wide(x % self.n, self.r2);
        self.redc(hi, lo)
    }

    #[inline]
    pub fn from_mont(&self, x: u128) -> u128 {
        self.redc(0, x)
    }

    #[inline]
    pub fn one(&self) -> u128 {
        self.r1
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        Self::addmod(a, b, self.n)
    }

    /// base^exp in Montgomery form (base already in Montgomery form).
    pub fn pow(&self, base: u128, mut exp: u128) -> u128 {
        let mut acc = self.one();
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }
}

/// Plain powmod for u128 moduli (odd or even) via Montgomery / fallback.
pub fn powmod_u128(base: u128, exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    if m <= u64::MAX as u128 {
        let m64 = m as u64;
        let mut acc = 1u64 % m64;
        let mut b = (base % m) as u64;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod_u64(acc, b, m64);
            }
            b = mulmod_u64(b, b, m64);
            e >>= 1;
        }
        return acc as u128;
    }
    if m & 1 == 1 {
        let mont = Mont128::new(m);
        return mont.from_mont(mont.pow(mont.to_mont(base), exp));
    }
    // Even 128-bit modulus: shift-add mulmod (cold path).
    let mulmod = |a: u128, b: u128| -> u128 {
        let mut a = a % m;
        let mut b = b % m;
        let mut acc = 0u128;
        while b > 0 {
            if b & 1 == 1 {
                acc = Mont128::addmod(acc, a, m);
            }
            a = Mont128::addmod(a, a, m);
            b >>= 1;
        }
        acc
    };
    let mut acc = 1u128 % m;
    let mut b = base % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    acc
}

/// Witness set proving primality for every x < 2^64
/// (Sorenson-Webster: the first 12 primes are enough below 3.3*10^24).
pub const MR_WITNESSES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mr_witness_u64(n: u64, a: u64) -> bool {
    // returns true if n passes the strong-pseudoprime test to base a
    let a = a % n;
    if a == 0 {
        return true;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = powmod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    MR_WITNESSES_U64.iter().all(|&a| mr_witness_u64(n, a))
}

fn mr_witness_u128(mont: &Mont128, n: u128, a: u128) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let am = mont.to_mont(a);
    let one = mont.one();
    let minus_one = n - one; // -R mod n
    let mut x = mont.pow(am, d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = mont.mul(x, x);
        if x == minus_one {
            return true;
        }
    }
    false
}

/// Primality for u128: deterministic below 2^64; for larger inputs a strong
/// test with `rounds` fixed prime bases (error < 4^-rounds for random
/// composites, and the bases are deterministic so verdicts reproduce).
pub fn is_prime_u128(n: u128, rounds: u32) -> bool {
    if n <= u64::MAX as u128 {
        return is_prime_u64(n as u64);
    }
    if n & 1 == 0 {
        return false;
    }
    let mont = Mont128::new(n);
    let mut count = 0u32;
    for &a in SMALL_PRIME_BASES.iter() {
        if count >= rounds {
            break;
        }
        if !mr_witness_u128(&mont, n, a as u128) {
            return false;
        }
        count += 1;
    }
    true
}

/// First 64 primes, used as deterministic Miller-Rabin bases above 2^64.
pub const SMALL_PRIME_BASES: [u64; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293,
    307, 311,
];

/// Floor square root.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    // fix up float error
    while x > 0 && x.checked_mul(x).map_or(true, |v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |v| v <= n) {
        x += 1;
    }
    x
}

/// Floor k-th root of n (k >= 1).
pub fn iroot_u128(n: u128, k: u32) -> u128 {
    assert!(k >= 1);
    if k == 1 || n < 2 {
        return n;
    }
    if k == 2 {
        return isqrt_u128(n);
    }
    let mut x = (n as f64).powf(1.0 / k as f64) as u128 + 1;
    while x > 0 && checked_pow_u128(x, k).map_or(true, |v| v > n) {
        x -= 1;
    }
    while checked_pow_u128(x + 1, k).map_or(false, |v| v <= n) {
        x += 1;
    }
    x
}

fn checked_pow_u128(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// If n = m^k for some k >= 2, returns (m, k) with k maximal prime... largest k.
pub fn perfect_power_u128(n: u128) -> Option<(u128, u32)> {
    if n < 4 {
        return None;
    }
    let max_k = 128 - n.leading_zeros();
    for k in (2..=max_k).rev() {
        let r = iroot_u128(n, k);
        if r >= 2 && checked_pow_u128(r, k) == Some(n) {
            return Some((r, k));
        }
    }
    None
}

/// All primes < bound by a plain Eratosthenes sieve.
pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound <= 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2usize;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &is_p)| if is_p { Some(i as u64) } else { None })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn mul_wide_matches_bigint() {
        let cases = [
            (0u128, 0u128),
            (u128::MAX, u128::MAX),
            (u128::MAX, 2),
            (1u128 << 127, 3),
            (0xdead_beef_dead_beef_dead_beef_dead_beef, 0x1234_5678_9abc_def0_1234_5678_9abc_def0),
        ];
        for &(a, b) in &cases {
            let (hi, lo) = mul_wide(a, b);
            let expect = BigUint::from(a) * BigUint::from(b);
            let got = (BigUint::from(hi) << 128) + BigUint::from(lo);
            assert_eq!(got, expect, "mul_wide({a}, {b})");
        }
    }

    #[test]
    fn mont_roundtrip_and_mul() {
        for &n in &[
            3u128,
            0xffff_ffff_ffff_ffc5, // large u64 prime
            (1u128 << 89) - 1,     // Mersenne prime 2^89-1
            10u128.pow(24) + 7,    // odd, composite
        ] {
            let mont = Mont128::new(n);
            for &x in &[0u128, 1, 2, n - 1, 12345, n / 2] {
                assert_eq!(mont.from_mont(mont.to_mont(x)), x % n);
            }
            let a = 0x1234_5678_9abc_def0u128 % n;
            let b = (n - 1) % n;
            let got = mont.from_mont(mont.mul(mont.to_mont(a), mont.to_mont(b)));
            let expect = (BigUint::from(a) * BigUint::from(b)) % BigUint::from(n);
            assert_eq!(BigUint::from(got), expect);
        }
    }

    #[test]
    fn powmod_examples() {
        assert_eq!(powmod_u64(2, 10, 1000), 24);
        assert_eq!(powmod_u64(5, 0, 7), 1);
        // hand oracle by repeated squaring: 5^2=8, 5^4=13, 5^8=16; 5^10=5^8*5^2=16*8=128=9 mod 17
        assert_eq!(powmod_u64(5, 10, 17), 9);
        assert_eq!(
            powmod_u128(3, 1000, (1u128 << 89) - 1),
            {
                let m = BigUint::from((1u128 << 89) - 1u128);
                let e = BigUint::from(3u8).modpow(&BigUint::from(1000u32), &m);
                let mut v = 0u128;
                for d in e.to_u64_digits().iter().rev() {
                    v = (v << 64) | *d as u128;
                }
                v
            }
        );
    }

    #[test]
    fn primality_small_and_large() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(151));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(3381));
        // Carmichael numbers must not fool the test.
        assert!(!is_prime_u64(561));
        assert!(!is_prime_u64(41041));
        // Known 64-bit prime.
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        // 2^89-1 is prime; 2^89+1 is not.
        assert!(is_prime_u128((1u128 << 89) - 1, 40));
        assert!(!is_prime_u128((1u128 << 89) + 1, 40));
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        let trial = |n: u64| {
            if n < 2 {
                return false;
            }
            let mut d = 2u64;
            while d * d <= n {
                if n % d == 0 {
                    return false;
                }
                d += 1;
            }
            true
        };
        for n in 0..2000u64 {
            assert_eq!(is_prime_u64(n), trial(n), "n={n}");
        }
    }

    #[test]
    fn roots_and_powers() {
        assert_eq!(isqrt_u128(0), 0);
        assert_eq!(isqrt_u128(15), 3);
        assert_eq!(isqrt_u128(16), 4);
        assert_eq!(iroot_u128(10u128.pow(16), 4), 10_000);
        assert_eq!(iroot_u128(10u128.pow(16), 5), 1584); // 10^3.2 = 1584.89...
        assert_eq!(perfect_power_u128(256), Some((2, 8)));
        assert_eq!(perfect_power_u128(3381), None);
        assert_eq!(perfect_power_u128(7u128.pow(2)), Some((7, 2)));
    }

    #[test]
    fn sieve_counts() {
        let p = primes_below(10_000);
        assert_eq!(p.len(), 1229);
        assert_eq!(p[0], 2);
        assert_eq!(*p.last().unwrap(), 9973);
    }
}
