//! Pollard rho with Brent's cycle detection, on u64 and on u128 via
//! Montgomery form. The polynomial offset c steps through 1, 2, 3, ... on
//! retry so a given input always factors the same way.

use super::small::{gcd_u128, gcd_u64, mulmod_u64, Mont128};

const BATCH: u64 = 128;

#[inline]
fn addmod_u64(a: u64, b: u64, n: u64) -> u64 {
    let (r, overflow) = a.overflowing_add(b);
    if overflow || r >= n {
        r.wrapping_sub(n)
    } else {
        r
    }
}

/// One Brent attempt on odd composite n with offset c. Returns a nontrivial
/// factor or None when the walk degenerates for this c.
pub fn brent_u64(n: u64, c: u64) -> Option<u64> {
    debug_assert!(n & 1 == 1 && n > 3);
    let c = c % n;
    let mut y: u64 = 2;
    let mut r: u64 = 1;
    let mut q: u64 = 1;
    let mut g: u64 = 1;
    let mut x = y;
    let mut ys = y;
    let step = |v: u64| addmod_u64(mulmod_u64(v, v, n), c, n);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = BATCH.min(r - k);
            for _ in 0..lim {
                y = step(y);
                q = mulmod_u64(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += lim;
        }
        r <<= 1;
    }
    if g == n {
        // backtrack one step at a time
        loop {
            ys = step(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

/// Brent on a 128-bit odd composite, iterating in Montgomery form.
/// gcd(q*R^k mod n, n) = gcd(q, n) for odd n, so the Montgomery residues can
/// feed the gcd accumulator directly.
pub fn brent_u128(n: u128, c: u128) -> Option<u128> {
    debug_assert!(n & 1 == 1 && n > 3);
    let mont = Mont128::new(n);
    let c = mont.to_mont(c % n);
    let mut y = mont.to_mont(2);
    let mut r: u64 = 1;
    let mut q = mont.one();
    let mut g: u128 = 1;
    let mut x = y;
    let mut ys = y;
    let step = |v: u128| mont.add(mont.mul(v, v), c);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = BATCH.min(r - k);
            for _ in 0..lim {
                y = step(y);
                q = mont.mul(q, x.abs_diff(y));
            }
            g = gcd_u128(mont.from_mont(q), n);
            k += lim;
        }
        r <<= 1;
    }
    if g == n {
        loop {
            ys = step(ys);
            g = gcd_u128(mont.from_mont(x.abs_diff(ys)), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

/// Split an odd composite, retrying with c = 1, 2, 3, ... until a factor
/// falls out.
pub fn split_u128(n: u128) -> u128 {
    if n <= u64::MAX as u128 {
        let n64 = n as u64;
        for c in 1u64.. {
            if let Some(f) = brent_u64(n64, c) {
                return f as u128;
            }
        }
        unreachable!()
    }
    for c in 1u128.. {
        if let Some(f) = brent_u128(n, c) {
            return f;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_semiprimes() {
        let f = split_u128(3_756_953 * 2_738_921);
        assert!(f == 3_756_953 || f == 2_738_921);

        // two ~31-bit primes
        let p = 2_147_483_647u128; // 2^31-1
        let q = 2_147_483_629u128;
        let f = split_u128(p * q);
        assert!(f == p || f == q);

        // above 2^64: 2^89-1 (prime) times a 10-digit prime
        let big = ((1u128 << 89) - 1) * 1_000_000_007;
        let f = split_u128(big);
        assert!(big % f == 0 && f != 1 && f != big);
    }

    #[test]
    fn splits_prime_squares() {
        let p = 1_000_003u128;
        let f = split_u128(p * p);
        assert_eq!(f, p);
    }
}
