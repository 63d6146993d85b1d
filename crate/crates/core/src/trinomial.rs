//! The central objects for f(t) = t^n + a*t + b with n odd:
//! the discriminant form T(a,b) = (n-1)^(n-1) a^n + n^n b^(n-1), the mirror
//! product H(a,b) = T(a,b)*T(-a,b), the Osada coprimality predicate, and a
//! sound decision procedure for irreducibility over Q.

use crate::error::{Error, Result};
use crate::fp_poly::FpPoly;
use crate::integers::{factorize, is_prime_u64};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Default number of degree-pattern primes tried before the exact fallback.
pub const DEFAULT_PRIME_BUDGET: u32 = 8;

/// The triple (n, a, b) defining f(t) = t^n + a*t + b, n odd and >= 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trinomial {
    pub n: u32,
    pub a: i64,
    pub b: i64,
}

impl Trinomial {
    pub fn new(n: u32, a: i64, b: i64) -> Result<Self> {
        if n < 5 || n % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "trinomial degree must be odd and >= 5, got {n}"
            )));
        }
        Ok(Trinomial { n, a, b })
    }

    /// As [`Trinomial::new`] but additionally requiring n = 1 mod 4, the
    /// regime where D_f = T(a,b) and census membership is meaningful.
    pub fn new_census(n: u32, a: i64, b: i64) -> Result<Self> {
        let t = Self::new(n, a, b)?;
        if n % 4 != 1 {
            return Err(Error::InvalidArgument(format!(
                "census trinomials need n = 1 mod 4, got {n}"
            )));
        }
        Ok(t)
    }

    /// Whether D_f = T(a,b) holds for this degree (n = 1 mod 4).
    pub fn disc_is_t(&self) -> bool {
        self.n % 4 == 1
    }

    pub fn disc(&self) -> BigInt {
        disc_t(self.n, self.a, self.b)
    }

    pub fn mirror_product(&self) -> BigInt {
        mirror_product_h(self.n, self.a, self.b)
    }

    pub fn osada(&self) -> bool {
        osada_coprime(self.n, self.a, self.b)
    }
}

/// T(a,b) = (n-1)^(n-1) a^n + n^n b^(n-1), exactly.
pub fn disc_t(n: u32, a: i64, b: i64) -> BigInt {
    let n_big = BigInt::from(n);
    let n1 = BigInt::from(n - 1);
    n1.pow(n - 1) * BigInt::from(a).pow(n) + n_big.pow(n) * BigInt::from(b).pow(n - 1)
}

/// H(a,b) = T(a,b) * T(-a,b).
pub fn mirror_product_h(n: u32, a: i64, b: i64) -> BigInt {
    disc_t(n, a, b) * disc_t(n, -a, b)
}

/// The closed form n^(2n) b^(2(n-1)) - (n-1)^(2(n-1)) a^(2n); equals
/// [`mirror_product_h`] for odd n and is kept as the independent route for
/// cross-checks.
pub fn mirror_product_closed_form(n: u32, a: i64, b: i64) -> BigInt {
    let n_big = BigInt::from(n);
    let n1 = BigInt::from(n - 1);
    n_big.pow(2 * n) * BigInt::from(b).pow(2 * (n - 1)) - n1.pow(2 * (n - 1)) * BigInt::from(a).pow(2 * n)
}

/// gcd((n-1)a, nb) = 1 on absolute values; false when either product is 0.
pub fn osada_coprime(n: u32, a: i64, b: i64) -> bool {
    let x = (n as u128 - 1) * a.unsigned_abs() as u128;
    let y = n as u128 * b.unsigned_abs() as u128;
    if x == 0 || y == 0 {
        return false;
    }
    gcd_u128(x, y) == 1
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// A monic integer polynomial, lowest-degree coefficient first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(
            coeffs.last().map_or(false, |c| c.is_one()),
            "IntPoly must be monic"
        );
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The monomial t.
    pub fn t() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn linear(root: i64) -> Self {
        Self::from_i64(&[-root, 1])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exact division test against t^n + a*t + b.
    pub fn divides_trinomial(&self, n: u32, a: i64, b: i64) -> bool {
        let d = self.degree();
        if d == 0 {
            return true;
        }
        if d > n as usize {
            return false;
        }
        if let Some(small) = self.try_coeffs_i128() {
            if let Some(result) = divides_trinomial_i128(&small, n, a, b) {
                return result;
            }
        }
        // long division of the sparse trinomial; divisor is monic
        let mut rem = vec![BigInt::zero(); n as usize + 1];
        rem[0] = BigInt::from(b);
        rem[1] += BigInt::from(a);
        rem[n as usize] += BigInt::one();
        for i in (d..=n as usize).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = std::mem::take(&mut rem[i]);
            for (j, c) in self.coeffs.iter().enumerate().take(d) {
                let delta = &q * c;
                rem[i - d + j] -= delta;
            }
        }
        rem.iter().all(|c| c.is_zero())
    }

    fn try_coeffs_i128(&self) -> Option<Vec<i128>> {
        self.coeffs.iter().map(|c| i128::try_from(c).ok()).collect()
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "t")?,
                1 => write!(f, "{mag}*t")?,
                _ if mag.is_one() => write!(f, "t^{i}")?,
                _ => write!(f, "{mag}*t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// i128 long division; None on overflow (caller falls back to big ints).
fn divides_trinomial_i128(divisor: &[i128], n: u32, a: i64, b: i64) -> Option<bool> {
    let d = divisor.len() - 1;
    let mut rem = vec![0i128; n as usize + 1];
    rem[0] = b as i128;
    rem[1] += a as i128;
    rem[n as usize] += 1;
    for i in (d..=n as usize).rev() {
        let q = rem[i];
        if q == 0 {
            continue;
        }
        rem[i] = 0;
        for (j, &c) in divisor.iter().enumerate().take(d) {
            let delta = q.checked_mul(c)?;
            rem[i - d + j] = rem[i - d + j].checked_sub(delta)?;
        }
    }
    Some(rem.iter().all(|&c| c == 0))
}

/// How an [`IrreducibilityVerdict::Irreducible`] was certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// f mod p is irreducible for this prime.
    Prime(u64),
    /// The bounded-coefficient factor search exhausted without a hit.
    ExhaustiveSearch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrreducibilityVerdict {
    Irreducible(Certificate),
    /// A monic integer factor of degree < n that divides f exactly.
    Reducible(IntPoly),
    /// Only possible when the exact fallback is disabled.
    Unresolved { primes_tried: u32 },
}

impl IrreducibilityVerdict {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, IrreducibilityVerdict::Irreducible(_))
    }

    pub fn is_reducible(&self) -> bool {
        matches!(self, IrreducibilityVerdict::Reducible(_))
    }
}

/// Decides irreducibility of t^n + a*t + b over Q. Sound in both directions
/// whenever it does not return Unresolved:
///
/// 1. b = 0 gives the factor t.
/// 2. Rational-root test over the divisors of b.
/// 3. Degree patterns mod up to `prime_budget` primes (p not dividing
///    2n(n-1), squarefree reduction): a pattern {n} certifies irreducibility;
///    otherwise the feasible proper factor degrees are intersected.
/// 4. Exact bounded-coefficient factor search over the degrees that survive
///    (none survive = irreducible).
pub fn irreducible_over_q(n: u32, a: i64, b: i64, prime_budget: u32) -> IrreducibilityVerdict {
    irreducible_over_q_with(n, a, b, prime_budget, true)
}

/// As [`irreducible_over_q`]; `exact_fallback = false` permits Unresolved.
pub fn irreducible_over_q_with(
    n: u32,
    a: i64,
    b: i64,
    prime_budget: u32,
    exact_fallback: bool,
) -> IrreducibilityVerdict {
    debug_assert!(n >= 5 && n % 2 == 1);
    if b == 0 {
        return IrreducibilityVerdict::Reducible(IntPoly::t());
    }
    if let Some(root) = rational_root(n, a, b) {
        return IrreducibilityVerdict::Reducible(IntPoly::linear(root));
    }

    // Feasible proper factor degrees as a bitset; bit d set = degree d still
    // possible. Dedekind: any integer factor degree is a subset sum of the
    // pattern at every squarefree prime.
    let all_proper: u64 = ((1u64 << n) - 2) & !(1 << 0);
    let mut feasible = all_proper;
    let mut tried = 0u32;
    let non_sf_is_global = disc_t(n, a, b).is_zero();

    if !non_sf_is_global {
        let excluded = 2 * n as u64 * (n as u64 - 1);
        let mut p = 2u64;
        while tried < prime_budget {
            if is_prime_u64(p) && excluded % p != 0 {
                if let Some(pattern) = squarefree_pattern(n, a, b, p) {
                    tried += 1;
                    if pattern == [n] {
                        return IrreducibilityVerdict::Irreducible(Certificate::Prime(p));
                    }
                    feasible &= subset_sums(&pattern);
                }
            }
            p += 1;
        }
    }

    if !exact_fallback {
        return IrreducibilityVerdict::Unresolved { primes_tried: tried };
    }

    // Only degrees <= n/2 need searching: factorizations come in
    // complementary pairs and the feasible set is closed under d -> n-d.
    let degrees: Vec<u32> = (1..=n / 2).filter(|d| feasible >> d & 1 == 1).collect();
    match factor_search_degrees(n, a, b, &degrees) {
        Some(g) => IrreducibilityVerdict::Reducible(g),
        None => IrreducibilityVerdict::Irreducible(Certificate::ExhaustiveSearch),
    }
}

fn subset_sums(pattern: &[u32]) -> u64 {
    let mut mask = 1u64; // sum 0
    for &d in pattern {
        mask |= mask << d;
    }
    mask
}

/// Degree pattern of f mod p if the reduction is squarefree, else None.
fn squarefree_pattern(n: u32, a: i64, b: i64, p: u64) -> Option<Vec<u32>> {
    let f = FpPoly::trinomial(p, n, a, b).ok()?;
    let g = f.gcd(&f.derivative()).ok()?;
    if g.degree() != Some(0) {
        return None;
    }
    f.degree_pattern().ok()
}

/// Integer root of t^n + a*t + b among the divisors of b, smallest |r| first
/// (ties: positive first) so results are deterministic.
fn rational_root(n: u32, a: i64, b: i64) -> Option<i64> {
    debug_assert!(b != 0);
    for d in signed_divisors(b) {
        if eval_trinomial(n, a, b, d).is_zero() {
            return Some(d);
        }
    }
    None
}

fn eval_trinomial(n: u32, a: i64, b: i64, x: i64) -> BigInt {
    // i128 fast path with checked arithmetic, spilling to BigInt
    let mut pow: i128 = 1;
    let mut ok = true;
    for _ in 0..n {
        match pow.checked_mul(x as i128) {
            Some(v) => pow = v,
            None => {
                ok = false;
                break;
            }
        }
    }
    if ok {
        if let Some(v) = pow
            .checked_add(a as i128 * x as i128)
            .and_then(|v| v.checked_add(b as i128))
        {
            return BigInt::from(v);
        }
    }
    BigInt::from(x).pow(n) + BigInt::from(a) * BigInt::from(x) + BigInt::from(b)
}

/// All divisors of |b| with both signs, ordered by |d| then sign.
fn signed_divisors(b: i64) -> Vec<i64> {
    let mag = BigInt::from(b.unsigned_abs());
    let f = factorize(&mag).expect("b != 0");
    let mut divs: Vec<u64> = vec![1];
    for (p, e) in f.factors() {
        let p: u64 = p.try_into().expect("divisor fits u64");
        let prev = divs.clone();
        let mut pk = 1u64;
        for _ in 0..*e {
            pk *= p;
            divs.extend(prev.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    let mut out = Vec::with_capacity(divs.len() * 2);
    for d in divs {
        out.push(d as i64);
        out.push(-(d as i64));
    }
    out
}

/// Mignotte-style uniform coefficient bound 2^d * sqrt(1 + a^2 + b^2).
fn coefficient_bound(d: u32, a: i64, b: i64) -> i64 {
    let norm_sq = 1.0 + (a as f64) * (a as f64) + (b as f64) * (b as f64);
    (2f64.powi(d as i32) * norm_sq.sqrt()).ceil() as i64
}

/// Searches for a monic integer factor of t^n + a*t + b of degree <= dmax.
/// Constant terms run over the signed divisors of b; the remaining
/// coefficients range within the Mignotte-style bound; candidates are
/// checked by exact polynomial remainder.
pub fn exact_factor_search(n: u32, a: i64, b: i64, dmax: u32) -> Result<Option<IntPoly>> {
    if b == 0 {
        return Err(Error::InvalidArgument(
            "factor search requires b != 0 (t divides f when b = 0)".into(),
        ));
    }
    if dmax < 1 || dmax > n / 2 {
        return Err(Error::InvalidArgument(format!(
            "dmax must lie in 1..={} for n = {n}, got {dmax}",
            n / 2
        )));
    }
    let degrees: Vec<u32> = (1..=dmax).collect();
    Ok(factor_search_degrees(n, a, b, &degrees))
}

fn factor_search_degrees(n: u32, a: i64, b: i64, degrees: &[u32]) -> Option<IntPoly> {
    if degrees.is_empty() {
        return None;
    }
    let divisors = signed_divisors(b);
    for &d in degrees {
        match d {
            1 => {
                for &v in &divisors {
                    // t + v divides iff -v is a root
                    if eval_trinomial(n, a, b, -v).is_zero() {
                        return Some(IntPoly::linear(-v));
                    }
                }
            }
            2 => {
                // For monic t^2 + u*t + v dividing t^n + a*t + b (n odd,
                // b != 0) both u and v must divide b, so the Mignotte window
                // shrinks to divisor pairs.
                for &v in &divisors {
                    for &u in &divisors {
                        if quadratic_divides(n, a, b, u, v) {
                            return Some(IntPoly::from_i64(&[v, u, 1]));
                        }
                    }
                }
            }
            _ => {
                let bound = coefficient_bound(d, a, b);
                let mut mid = vec![-bound; (d - 1) as usize];
                'outer: loop {
                    for &v in &divisors {
                        let mut coeffs: Vec<i64> = Vec::with_capacity(d as usize + 1);
                        coeffs.push(v);
                        coeffs.extend_from_slice(&mid);
                        coeffs.push(1);
                        let g = IntPoly::from_i64(&coeffs);
                        if g.divides_trinomial(n, a, b) {
                            return Some(g);
                        }
                    }
                    // odometer over the middle coefficients
                    let mut i = 0;
                    loop {
                        if i == mid.len() {
                            break 'outer;
                        }
                        if mid[i] < bound {
                            mid[i] += 1;
                            break;
                        }
                        mid[i] = -bound;
                        i += 1;
                    }
                }
            }
        }
    }
    None
}

/// Remainder test for t^2 + u*t + v against t^n + a*t + b via the linear
/// recurrence t^(k+1) = (beta_k - u*alpha_k) t - v*alpha_k.
fn quadratic_divides(n: u32, a: i64, b: i64, u: i64, v: i64) -> bool {
    let mut alpha = BigInt::one(); // t^1 coefficients
    let mut beta = BigInt::zero();
    let (ub, vb) = (BigInt::from(u), BigInt::from(v));
    for _ in 1..n {
        let new_alpha = &beta - &ub * &alpha;
        beta = -(&vb * &alpha);
        alpha = new_alpha;
    }
    alpha + BigInt::from(a) == BigInt::zero() && beta + BigInt::from(b) == BigInt::zero()
}
