//! Exact integer kernel: primality, deterministic factorization, squarefree
//! verdicts, radicals and squarefree parts. Everything downstream (census
//! membership, bad-pair scans, abc quality) leans on this module, so the
//! factorizer certifies the primality of every leaf it emits.

mod rho;
mod small;

pub use small::{
    is_prime_u128, is_prime_u64, iroot_u128, isqrt_u128, mulmod_u64, powmod_u128, powmod_u64,
    primes_below, Mont128, MR_WITNESSES_U64,
};

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::OnceLock;

/// Default trial-division bound before cycle finding takes over.
pub const DEFAULT_TRIAL_BOUND: u64 = 10_000;

/// Default Miller-Rabin rounds for inputs at or above 2^64 (below 2^64 the
/// fixed witness set is deterministic and the round count is irrelevant).
pub const DEFAULT_MR_ROUNDS: u32 = 40;

/// Sign and sorted prime powers of a nonzero integer; zero is representable
/// as sign 0 with no factors but is never produced by [`factorize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    sign: i8,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// The representation of zero (sign 0, empty factor list).
    pub fn zero() -> Self {
        Factorization { sign: 0, factors: Vec::new() }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Prime powers in strictly increasing prime order.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Reconstructs sign * prod p_i^{e_i}.
    pub fn value(&self) -> BigInt {
        if self.sign == 0 {
            return BigInt::zero();
        }
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        let sign = if self.sign < 0 { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(sign, acc)
    }

    /// True when no exponent exceeds 1 (units are squarefree).
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// Product of the distinct primes; 1 for units.
    pub fn radical(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, _)| acc * p)
    }

    /// Splits |value| = |d| * m^2 with d squarefree, returning (d, m) where
    /// d carries the sign of the value.
    pub fn squarefree_part(&self) -> (BigInt, BigUint) {
        let mut d = BigUint::one();
        let mut m = BigUint::one();
        for (p, e) in &self.factors {
            if e % 2 == 1 {
                d *= p;
            }
            m *= p.pow(e / 2);
        }
        let sign = if self.sign < 0 { Sign::Minus } else { Sign::Plus };
        (BigInt::from_biguint(sign, d), m)
    }

    /// Largest prime whose square divides the value, if any.
    pub fn square_prime_above(&self, threshold: &BigUint) -> Option<&BigUint> {
        self.factors
            .iter()
            .rev()
            .find(|(p, e)| *e >= 2 && p > threshold)
            .map(|(p, _)| p)
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        write!(f, "{}1", if self.sign < 0 { "-" } else { "+" })?;
        for (p, e) in &self.factors {
            if *e == 1 {
                write!(f, " * {p}")?;
            } else {
                write!(f, " * {p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Reusable factorization state: the sieved prime list up to the trial bound
/// and its primorial, which lets one big-int gcd pick out every small prime
/// dividing the input instead of 1229 trial divisions.
pub struct FactorContext {
    trial_bound: u64,
    primes: Vec<u64>,
    primorial: BigUint,
    mr_rounds: u32,
}

impl FactorContext {
    pub fn new(trial_bound: u64, mr_rounds: u32) -> Self {
        let trial_bound = trial_bound.max(4);
        let primes = primes_below(trial_bound);
        let mut primorial = BigUint::one();
        for &p in &primes {
            primorial *= BigUint::from(p);
        }
        FactorContext { trial_bound, primes, primorial, mr_rounds }
    }

    pub fn trial_bound(&self) -> u64 {
        self.trial_bound
    }

    pub fn is_prime(&self, x: &BigUint) -> bool {
        is_prime_big(x, self.mr_rounds)
    }
}

impl Default for FactorContext {
    fn default() -> Self {
        FactorContext::new(DEFAULT_TRIAL_BOUND, DEFAULT_MR_ROUNDS)
    }
}

fn default_context() -> &'static FactorContext {
    static CTX: OnceLock<FactorContext> = OnceLock::new();
    CTX.get_or_init(FactorContext::default)
}

/// base^exponent mod modulus, with the result normalized into [0, modulus).
pub fn powmod(base: &BigInt, exponent: &BigUint, modulus: &BigInt) -> Result<BigInt> {
    if modulus < &BigInt::from(2) {
        return Err(Error::InvalidArgument(format!(
            "powmod requires modulus >= 2, got {modulus}"
        )));
    }
    let r = base.modpow(&BigInt::from_biguint(Sign::Plus, exponent.clone()), modulus);
    // BigInt::modpow already floors into [0, modulus) for positive moduli.
    debug_assert!(!r.is_negative() && &r < modulus);
    Ok(r)
}

/// Primality test: deterministic for x < 2^64 via the fixed witness set,
/// Miller-Rabin with `DEFAULT_MR_ROUNDS` fixed prime bases above that.
pub fn is_prime(x: &BigUint) -> bool {
    is_prime_big(x, DEFAULT_MR_ROUNDS)
}

fn is_prime_big(x: &BigUint, rounds: u32) -> bool {
    if let Some(v) = to_u128(x) {
        return is_prime_u128(v, rounds);
    }
    mr_biguint(x, rounds)
}

fn to_u128(x: &BigUint) -> Option<u128> {
    let digits = x.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => Some(digits[0] as u128),
        2 => Some((digits[1] as u128) << 64 | digits[0] as u128),
        _ => None,
    }
}

fn mr_biguint(n: &BigUint, rounds: u32) -> bool {
    let two = BigUint::from(2u8);
    if n < &two {
        return false;
    }
    if n.is_even() {
        return n == &two;
    }
    let n_minus_1 = n - 1u8;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for (i, &a) in small::SMALL_PRIME_BASES.iter().enumerate() {
        if i as u32 >= rounds {
            break;
        }
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exact deterministic factorization of a nonzero integer.
pub fn factorize(x: &BigInt) -> Result<Factorization> {
    factorize_with(x, default_context())
}

/// As [`factorize`] but with a caller-supplied context (trial bound, rounds).
pub fn factorize_with(x: &BigInt, ctx: &FactorContext) -> Result<Factorization> {
    if x.is_zero() {
        return Err(Error::InvalidArgument("cannot factorize 0".into()));
    }
    let sign: i8 = if x.is_negative() { -1 } else { 1 };
    let mag = x.magnitude().clone();
    let factors = if let Some(m) = to_u128(&mag) {
        factor_u128(m, ctx)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect()
    } else {
        factor_biguint(mag, ctx)
    };
    let fz = Factorization { sign, factors };
    debug_assert_eq!(fz.value(), *x);
    Ok(fz)
}

fn factor_u128(mut m: u128, ctx: &FactorContext) -> Vec<(u128, u32)> {
    let mut out: Vec<(u128, u32)> = Vec::new();
    if m == 1 {
        return out;
    }
    // One gcd with the primorial finds every prime below the trial bound
    // that divides m; only those get division loops.
    let mut g = {
        let r = &ctx.primorial % BigUint::from(m);
        to_u128(&r).map(|r| small::gcd_u128(r, m)).unwrap_or(1)
    };
    if g > 1 {
        for &p in &ctx.primes {
            if g == 1 {
                break;
            }
            let p128 = p as u128;
            if g % p128 == 0 {
                g /= p128;
                let mut e = 0u32;
                while m % p128 == 0 {
                    m /= p128;
                    e += 1;
                }
                out.push((p128, e));
            }
        }
    }
    if m > 1 {
        let mut stack = vec![m];
        let mut leaves: Vec<u128> = Vec::new();
        while let Some(c) = stack.pop() {
            // No factor below the trial bound survives, so anything under
            // bound^2 is prime outright.
            let bound2 = (ctx.trial_bound as u128).saturating_mul(ctx.trial_bound as u128);
            if c < bound2 || is_prime_u128(c, ctx.mr_rounds) {
                leaves.push(c);
                continue;
            }
            if let Some((root, k)) = small::perfect_power_u128(c) {
                for f in factor_u128_cofactor(root, ctx) {
                    for _ in 0..k {
                        leaves.push(f);
                    }
                }
                continue;
            }
            let f = rho::split_u128(c);
            stack.push(f);
            stack.push(c / f);
        }
        leaves.sort_unstable();
        for leaf in leaves {
            match out.iter_mut().find(|(p, _)| *p == leaf) {
                Some((_, e)) => *e += 1,
                None => out.push((leaf, 1)),
            }
        }
    }
    out.sort_unstable_by_key(|&(p, _)| p);
    out
}

/// Factor a cofactor known to be coprime to all trial primes.
fn factor_u128_cofactor(c: u128, ctx: &FactorContext) -> Vec<u128> {
    let mut leaves = Vec::new();
    let mut stack = vec![c];
    let bound2 = (ctx.trial_bound as u128).saturating_mul(ctx.trial_bound as u128);
    while let Some(c) = stack.pop() {
        if c == 1 {
            continue;
        }
        if c < bound2 || is_prime_u128(c, ctx.mr_rounds) {
            leaves.push(c);
            continue;
        }
        let f = rho::split_u128(c);
        stack.push(f);
        stack.push(c / f);
    }
    leaves
}

/// Slow exact path for magnitudes beyond u128 (beyond the supported desk
/// scale, but kept correct): trial division then big-int Brent.
fn factor_biguint(mut m: BigUint, ctx: &FactorContext) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for &p in &ctx.primes {
        let p = BigUint::from(p);
        if m.is_one() {
            break;
        }
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    if !m.is_one() {
        let mut stack = vec![m];
        let mut leaves: Vec<BigUint> = Vec::new();
        while let Some(c) = stack.pop() {
            if let Some(v) = to_u128(&c) {
                for f in factor_u128_cofactor(v, ctx) {
                    leaves.push(BigUint::from(f));
                }
                continue;
            }
            if mr_biguint(&c, ctx.mr_rounds) {
                leaves.push(c);
                continue;
            }
            let f = brent_biguint(&c);
            stack.push(&c / &f);
            stack.push(f);
        }
        leaves.sort();
        for leaf in leaves {
            match out.iter_mut().find(|(p, _)| *p == leaf) {
                Some((_, e)) => *e += 1,
                None => out.push((leaf, 1)),
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn brent_biguint(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let two = BigUint::from(2u8);
    for c in 1u64.. {
        let c = BigUint::from(c);
        let step = |v: &BigUint| (v * v + &c) % n;
        let mut x = two.clone();
        let mut y = step(&x);
        loop {
            let d = if x > y { (&x - &y).gcd(n) } else { (&y - &x).gcd(n) };
            if d == *n {
                break; // retry with next c
            }
            if d > one {
                return d;
            }
            x = step(&x);
            y = step(&step(&y));
        }
    }
    unreachable!()
}

/// True iff no prime square divides x (sign ignored; units are squarefree).
pub fn is_squarefree(x: &BigInt) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::InvalidArgument(
            "0 is divisible by every prime square".into(),
        ));
    }
    Ok(factorize(x)?.is_squarefree())
}

/// Product of the distinct primes dividing |x|; radical(+-1) = 1.
pub fn radical(x: &BigInt) -> Result<BigUint> {
    Ok(factorize(x)?.radical())
}

/// x = d * m^2 with |d| squarefree and sign(d) = sign(x).
pub fn squarefree_part(x: &BigInt) -> Result<(BigInt, BigUint)> {
    Ok(factorize(x)?.squarefree_part())
}

#[cfg(test)]
mod tests;
