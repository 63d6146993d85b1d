//! Dense polynomial arithmetic over F_p (p < 2^31) and the exhaustive census
//! of irreducible trinomials t^n + a*t + b over all (a, b) in F_p^2.

use crate::error::{Error, Result};
use crate::integers::is_prime_u64;
use serde::Serialize;

/// A polynomial over F_p, lowest-degree coefficient first, no trailing
/// zeros; the zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

/// Largest supported modulus: coefficient products must fit in a double word.
pub const MAX_MODULUS: u64 = 1 << 31;

impl FpPoly {
    /// Builds a polynomial from signed coefficients (lowest degree first),
    /// reducing mod p and trimming trailing zeros.
    pub fn new(p: u64, coeffs: &[i64]) -> Result<Self> {
        if p < 2 || p >= MAX_MODULUS {
            return Err(Error::InvalidArgument(format!(
                "modulus must satisfy 2 <= p < 2^31, got {p}"
            )));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidArgument(format!("modulus {p} is not prime")));
        }
        let mut c: Vec<u64> = coeffs
            .iter()
            .map(|&x| (x.rem_euclid(p as i64)) as u64)
            .collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Ok(FpPoly { p, coeffs: c })
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly { p, coeffs: vec![1] }
    }

    /// The monomial t.
    pub fn x(p: u64) -> Self {
        FpPoly { p, coeffs: vec![0, 1] }
    }

    /// The trinomial t^n + a*t + b reduced mod p.
    pub fn trinomial(p: u64, n: u32, a: i64, b: i64) -> Result<Self> {
        let mut coeffs = vec![0i64; n as usize + 1];
        coeffs[0] = b.rem_euclid(p as i64);
        coeffs[1] += a.rem_euclid(p as i64);
        coeffs[n as usize] += 1;
        FpPoly::new(p, &coeffs)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    fn trim(mut coeffs: Vec<u64>, p: u64) -> FpPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    fn check_same_modulus(&self, other: &FpPoly) -> Result<()> {
        if self.p != other.p {
            return Err(Error::InvalidArgument(format!(
                "mismatched moduli {} and {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(other)?;
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = (a + b) % p;
        }
        Ok(Self::trim(out, p))
    }

    pub fn sub(&self, other: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(other)?;
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = (a + p - b) % p;
        }
        Ok(Self::trim(out, p))
    }

    /// Schoolbook product; degrees here never exceed a few dozen.
    pub fn mul(&self, other: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(other)?;
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            return Ok(FpPoly::zero(p));
        }
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += (a * b) as u128;
            }
        }
        let out = out.into_iter().map(|v| (v % p as u128) as u64).collect();
        Ok(Self::trim(out, p))
    }

    /// Remainder of self divided by a nonzero divisor.
    pub fn rem(&self, divisor: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(divisor)?;
        if divisor.is_zero() {
            return Err(Error::InvalidArgument("division by zero polynomial".into()));
        }
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok(self.clone());
        }
        let lead_inv = inv_mod(*divisor.coeffs.last().unwrap(), p);
        let mut rem = self.coeffs.clone();
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = c * lead_inv % p;
            rem[i] = 0;
            for (j, &dc) in divisor.coeffs.iter().enumerate().take(dd) {
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + p - q * dc % p) % p;
            }
        }
        rem.truncate(dd);
        Ok(Self::trim(rem, p))
    }

    /// Monic gcd (by convention gcd(0, g) = monic g).
    pub fn gcd(&self, other: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Scales so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> FpPoly {
        match self.coeffs.last() {
            None | Some(&1) => self.clone(),
            Some(&lead) => {
                let inv = inv_mod(lead, self.p);
                let coeffs = self.coeffs.iter().map(|&c| c * inv % self.p).collect();
                FpPoly { p: self.p, coeffs }
            }
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect();
        Self::trim(coeffs, p)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        let x = x % p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + c) % p;
        }
        acc
    }

    /// (self * g) mod (m, p); m must have degree >= 1.
    pub fn mul_mod(&self, g: &FpPoly, m: &FpPoly) -> Result<FpPoly> {
        self.check_same_modulus(g)?;
        self.check_same_modulus(m)?;
        if m.degree().map_or(true, |d| d < 1) {
            return Err(Error::InvalidArgument(
                "modulus polynomial must have degree >= 1".into(),
            ));
        }
        self.mul(g)?.rem(m)
    }

    /// self^e mod (m, p) by square and multiply.
    pub fn pow_mod(&self, mut e: u64, m: &FpPoly) -> Result<FpPoly> {
        let mut acc = FpPoly::one(self.p).rem(m)?;
        let mut base = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m)?;
            }
            base = base.mul_mod(&base, m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// t^(p^k) mod (self, p) via k successive p-th powerings.
    pub fn frobenius_power(&self, k: u32) -> Result<FpPoly> {
        if !self.is_monic() || self.degree().map_or(true, |d| d < 1) {
            return Err(Error::InvalidArgument(
                "frobenius_power requires a monic polynomial of degree >= 1".into(),
            ));
        }
        let mut x = FpPoly::x(self.p).rem(self)?;
        for _ in 0..k {
            x = x.pow_mod(self.p, self)?;
        }
        Ok(x)
    }

    /// Rabin's criterion: monic f of degree n is irreducible iff
    /// t^(p^n) = t mod f and gcd(t^(p^(n/q)) - t, f) = 1 for every prime q | n.
    pub fn is_irreducible(&self) -> Result<bool> {
        if !self.is_monic() {
            return Err(Error::InvalidArgument(
                "irreducibility test requires a monic polynomial".into(),
            ));
        }
        let n = self.degree().unwrap_or(0);
        if n == 0 {
            return Err(Error::InvalidArgument(
                "irreducibility test requires degree >= 1".into(),
            ));
        }
        if n == 1 {
            return Ok(true);
        }
        let x = FpPoly::x(self.p).rem(self)?;
        let checkpoints: Vec<usize> = prime_divisors(n as u64)
            .into_iter()
            .map(|q| n / q as usize)
            .collect();
        let mut frob = x.clone(); // t^(p^i) after i steps, starting at i=0
        for i in 1..=n {
            frob = frob.pow_mod(self.p, self)?;
            if checkpoints.contains(&i) {
                let g = frob.sub(&x)?.gcd(self)?;
                if g.degree() != Some(0) {
                    return Ok(false);
                }
            }
        }
        Ok(frob == x)
    }

    /// Multiset of factor degrees (ascending) via distinct-degree splitting.
    /// Requires self monic and squarefree mod p.
    pub fn degree_pattern(&self) -> Result<Vec<u32>> {
        if !self.is_monic() || self.degree().map_or(true, |d| d < 1) {
            return Err(Error::InvalidArgument(
                "degree_pattern requires a monic polynomial of degree >= 1".into(),
            ));
        }
        let deriv_gcd = self.gcd(&self.derivative())?;
        if deriv_gcd.degree() != Some(0) {
            return Err(Error::Precondition(format!(
                "degree_pattern requires a squarefree polynomial; gcd(f, f') has degree {:?}",
                deriv_gcd.degree()
            )));
        }
        let mut pattern = Vec::new();
        let mut w = self.clone();
        let x = FpPoly::x(self.p);
        let mut frob = x.rem(&w)?;
        let mut d = 0u32;
        while let Some(deg_w) = w.degree() {
            if deg_w == 0 {
                break;
            }
            d += 1;
            if 2 * d as usize > deg_w {
                // whatever is left is a single irreducible factor
                pattern.push(deg_w as u32);
                break;
            }
            frob = frob.pow_mod(self.p, &w)?;
            let g = frob.sub(&x.rem(&w)?)?.gcd(&w)?;
            if let Some(deg_g) = g.degree() {
                if deg_g > 0 {
                    for _ in 0..(deg_g as u32 / d) {
                        pattern.push(d);
                    }
                    w = w.div_exact(&g)?;
                    frob = frob.rem(&w)?;
                }
            }
        }
        pattern.sort_unstable();
        debug_assert_eq!(
            pattern.iter().sum::<u32>() as usize,
            self.degree().unwrap()
        );
        Ok(pattern)
    }

    /// Exact quotient by a known divisor.
    fn div_exact(&self, divisor: &FpPoly) -> Result<FpPoly> {
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = inv_mod(*divisor.coeffs.last().unwrap(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(dd)];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let q = c * lead_inv % p;
            quot[i - dd] = q;
            rem[i] = 0;
            for (j, &dc) in divisor.coeffs.iter().enumerate().take(dd) {
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + p - q * dc % p) % p;
            }
        }
        debug_assert!(rem.iter().all(|&c| c == 0), "div_exact had a remainder");
        Ok(Self::trim(quot, p))
    }
}

impl std::fmt::Display for FpPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "t")?,
                1 => write!(f, "{c}*t")?,
                _ if c == 1 => write!(f, "t^{i}")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime here; Fermat inverse is plenty
    crate::integers::powmod_u64(a, p - 2, p)
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// One row of the F_p census of t^n + a*t + b over all p^2 pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeCensusRow {
    pub p: u64,
    pub n: u32,
    /// Count of irreducible trinomials.
    pub t_p: u64,
    /// Count of reducible ones; t_p + s_p = p^2 always.
    pub s_p: u64,
    /// n*t_p - p^2; the deviation t_p - p^2/n equals dev_num / n.
    pub dev_num: i128,
    /// Whether p does not divide 2n(n-1) (the regime where the p^2/n law holds).
    pub hypothesis_ok: bool,
    /// max over nonzero a of |n*count_a - p| (per-a deviation times n).
    pub max_a_dev_num: i128,
    /// a values (including a = 0) where |count_a - p/n| > 4*sqrt(p);
    /// reported, never silently dropped.
    pub per_a_violations: Vec<u64>,
    /// Irreducible count of the degenerate a = 0 row (binomials t^n + b).
    pub count_a0: u64,
}

impl PrimeCensusRow {
    /// deviation = t_p - p^2/n.
    pub fn deviation(&self) -> f64 {
        self.dev_num as f64 / self.n as f64
    }

    /// deviation / p^(3/2).
    pub fn normalized_deviation(&self) -> f64 {
        self.deviation() / (self.p as f64).powf(1.5)
    }
}

/// Exhaustively classifies all p^2 trinomials t^n + a*t + b over F_p.
///
/// For each fixed a the b values admitting a root are sieved out first
/// (b = -(t0^n + a t0) as t0 runs over F_p); survivors carry no linear
/// factor and are irreducible iff no factor of degree <= n/2 shows up in
/// the Frobenius gcd ladder.
pub fn trinomial_census(n: u32, p: u64) -> Result<PrimeCensusRow> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "census needs odd n >= 5, got {n}"
        )));
    }
    if p >= MAX_MODULUS {
        return Err(Error::UnsupportedRange(format!(
            "census supports p < 2^31, got {p}"
        )));
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("p = {p} is not prime")));
    }
    let partial = census_chunk(n, p, 0, p)?;
    Ok(finish_census(n, p, partial))
}

/// Per-a census over a_lo <= a < a_hi; merged by [`merge_census_chunks`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CensusChunk {
    pub t_p: u64,
    pub max_a_dev_num: i128,
    pub per_a_violations: Vec<u64>,
    pub count_a0: Option<u64>,
}

pub fn census_chunk(n: u32, p: u64, a_lo: u64, a_hi: u64) -> Result<CensusChunk> {
    let mut chunk = CensusChunk::default();
    let mut root_hit = vec![false; p as usize];
    let half = (n / 2) as usize;
    for a in a_lo..a_hi {
        root_hit.iter_mut().for_each(|v| *v = false);
        for t0 in 0..p {
            // b = -(t0^n + a*t0) mod p
            let v = (crate::integers::powmod_u64(t0, n as u64, p) + a * t0 % p) % p;
            root_hit[((p - v) % p) as usize] = true;
        }
        let mut count_a = 0u64;
        for (b, &hit) in root_hit.iter().enumerate() {
            if hit {
                continue;
            }
            let f = FpPoly::trinomial(p, n, a as i64, b as i64)?;
            if survivor_is_irreducible(&f, half)? {
                count_a += 1;
            }
        }
        chunk.t_p += count_a;
        let dev = n as i128 * count_a as i128 - p as i128;
        if a != 0 {
            chunk.max_a_dev_num = chunk.max_a_dev_num.max(dev.abs());
        } else {
            chunk.count_a0 = Some(count_a);
        }
        // |count_a - p/n| > 4*sqrt(p)  <=>  dev^2 > 16 n^2 p
        if dev * dev > 16 * (n as i128) * (n as i128) * p as i128 {
            chunk.per_a_violations.push(a);
        }
    }
    Ok(chunk)
}

/// Irreducibility for a monic f already known to have no root in F_p:
/// walk t^(p^d) for d = 2..n/2 and look for a common factor.
fn survivor_is_irreducible(f: &FpPoly, half: usize) -> Result<bool> {
    let x = FpPoly::x(f.modulus()).rem(f)?;
    let mut frob = x.pow_mod(f.modulus(), f)?; // t^p mod f
    for _ in 2..=half {
        frob = frob.pow_mod(f.modulus(), f)?;
        let g = frob.sub(&x)?.gcd(f)?;
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn merge_census_chunks(chunks: impl IntoIterator<Item = CensusChunk>) -> CensusChunk {
    let mut acc = CensusChunk::default();
    for c in chunks {
        acc.t_p += c.t_p;
        acc.max_a_dev_num = acc.max_a_dev_num.max(c.max_a_dev_num);
        acc.per_a_violations.extend(c.per_a_violations);
        if c.count_a0.is_some() {
            acc.count_a0 = c.count_a0;
        }
    }
    acc.per_a_violations.sort_unstable();
    acc
}

fn finish_census(n: u32, p: u64, chunk: CensusChunk) -> PrimeCensusRow {
    let total = p as u128 * p as u128;
    PrimeCensusRow {
        p,
        n,
        t_p: chunk.t_p,
        s_p: (total - chunk.t_p as u128) as u64,
        dev_num: n as i128 * chunk.t_p as i128 - total as i128,
        hypothesis_ok: (2 * n as u64 * (n as u64 - 1)) % p != 0,
        max_a_dev_num: chunk.max_a_dev_num,
        per_a_violations: chunk.per_a_violations,
        count_a0: chunk.count_a0.unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, coeffs: &[i64]) -> FpPoly {
        FpPoly::new(p, coeffs).unwrap()
    }

    #[test]
    fn mul_mod_examples() {
        // t * t mod (t^2+1) over F_3 = -1 = 2
        let t = FpPoly::x(3);
        let m = poly(3, &[1, 0, 1]);
        assert_eq!(t.mul_mod(&t, &m).unwrap(), poly(3, &[2]));

        // identity: 1 * h mod m = h mod m
        let one = FpPoly::one(5);
        let h = poly(5, &[4, 3, 2, 1]);
        let m5 = poly(5, &[1, 1, 1]);
        assert_eq!(one.mul_mod(&h, &m5).unwrap(), h.rem(&m5).unwrap());

        // (t+1)(t+2) mod (t^2+t+1) over F_5: t^2+3t+2 = (t^2+t+1) + (2t+1)
        let f = poly(5, &[1, 1]);
        let g = poly(5, &[2, 1]);
        assert_eq!(f.mul_mod(&g, &m5).unwrap(), poly(5, &[1, 2]));

        // mismatched moduli
        let f3 = poly(3, &[1, 1]);
        assert!(f3.mul_mod(&g, &m5).is_err());
    }

    #[test]
    fn frobenius_examples() {
        // t^3 mod (t^2+1) over F_3 = -t = 2t
        let m = poly(3, &[1, 0, 1]);
        assert_eq!(m.frobenius_power(1).unwrap(), poly(3, &[0, 2]));

        // t^5 mod t over F_5 = 0
        let t = FpPoly::x(5);
        assert_eq!(t.frobenius_power(1).unwrap(), FpPoly::zero(5));

        // t^(2^5) mod (t^5+t+1) over F_2, cross-checked by 32 plain squarings
        let f = poly(2, &[1, 1, 0, 0, 0, 1]);
        let direct = f.frobenius_power(5).unwrap();
        // 5 successive squarings give t^(2^5)
        let mut oracle = FpPoly::x(2);
        for _ in 0..5 {
            oracle = oracle.mul_mod(&oracle, &f).unwrap();
        }
        assert_eq!(direct, oracle);
    }

    #[test]
    fn irreducibility_examples() {
        // t^5+t+1 = (t^2+t+1)(t^3+t^2+1) over F_2
        let f = poly(2, &[1, 1, 0, 0, 0, 1]);
        assert!(!f.is_irreducible().unwrap());
        let lhs = poly(2, &[1, 1, 1]).mul(&poly(2, &[1, 0, 1, 1])).unwrap();
        assert_eq!(lhs, f);

        // t^2+1 over F_3: -1 is a non-residue mod 3
        assert!(poly(3, &[1, 0, 1]).is_irreducible().unwrap());

        // t^5+2t+1 over F_3 vs brute force over all monic divisors of degree <= 2
        let g = poly(3, &[1, 2, 0, 0, 0, 1]);
        let mut has_factor = false;
        for c0 in 0..3i64 {
            for c1 in 0..3i64 {
                let lin = poly(3, &[c0, 1]);
                if g.rem(&lin).unwrap().is_zero() {
                    has_factor = true;
                }
                let quad = poly(3, &[c0, c1, 1]);
                if g.rem(&quad).unwrap().is_zero() {
                    has_factor = true;
                }
            }
        }
        assert_eq!(g.is_irreducible().unwrap(), !has_factor);

        // non-monic input is rejected
        assert!(poly(5, &[1, 0, 2]).is_irreducible().is_err());
    }

    #[test]
    fn degree_pattern_examples() {
        let f = poly(2, &[1, 1, 0, 0, 0, 1]);
        assert_eq!(f.degree_pattern().unwrap(), vec![2, 3]);

        // irreducible f gives {n}
        assert_eq!(poly(3, &[1, 0, 1]).degree_pattern().unwrap(), vec![2]);

        // t^2 - 1 = (t-1)(t+1) over F_5
        assert_eq!(poly(5, &[-1, 0, 1]).degree_pattern().unwrap(), vec![1, 1]);

        // non-squarefree input is a precondition violation
        let sq = poly(5, &[1, 2, 1]); // (t+1)^2
        assert!(matches!(sq.degree_pattern(), Err(Error::Precondition(_))));
    }

    #[test]
    fn pattern_agrees_with_rabin_exhaustively() {
        // all squarefree monic f of degree 2..=6 over small fields
        for &p in &[2u64, 3, 5] {
            for deg in 2usize..=6 {
                let count = (p as u64).pow(deg as u32);
                for code in 0..count {
                    let mut coeffs = vec![0i64; deg + 1];
                    let mut c = code;
                    for slot in coeffs.iter_mut().take(deg) {
                        *slot = (c % p) as i64;
                        c /= p;
                    }
                    coeffs[deg] = 1;
                    let f = poly(p, &coeffs);
                    if f.gcd(&f.derivative()).unwrap().degree() != Some(0) {
                        continue;
                    }
                    let pat = f.degree_pattern().unwrap();
                    assert_eq!(
                        f.is_irreducible().unwrap(),
                        pat == vec![deg as u32],
                        "p={p} f={f}"
                    );
                }
            }
        }
    }

    #[test]
    fn census_f2_has_no_irreducible_quintics_of_trinomial_shape() {
        let row = trinomial_census(5, 2).unwrap();
        assert_eq!(row.t_p, 0);
        assert_eq!(row.s_p, 4);
        assert!(!row.hypothesis_ok); // 2 | 40
    }

    #[test]
    fn census_partition_and_chunking() {
        for &p in &[3u64, 7, 13] {
            let row = trinomial_census(5, p).unwrap();
            assert_eq!(row.t_p + row.s_p, p * p);

            // chunked runs merge to the same totals
            let mid = p / 2;
            let merged = merge_census_chunks([
                census_chunk(5, p, 0, mid).unwrap(),
                census_chunk(5, p, mid, p).unwrap(),
            ]);
            assert_eq!(merged.t_p, row.t_p);
            assert_eq!(merged.max_a_dev_num, row.max_a_dev_num);
            assert_eq!(merged.per_a_violations, row.per_a_violations);
        }
    }

    #[test]
    fn census_matches_per_pair_oracle() {
        for &p in &[3u64, 7] {
            let mut oracle = 0u64;
            for a in 0..p {
                for b in 0..p {
                    let f = FpPoly::trinomial(p, 5, a as i64, b as i64).unwrap();
                    if f.is_irreducible().unwrap() {
                        oracle += 1;
                    }
                }
            }
            let row = trinomial_census(5, p).unwrap();
            assert_eq!(row.t_p, oracle, "p={p}");
        }
    }

    #[test]
    fn census_rejects_bad_inputs() {
        assert!(trinomial_census(4, 7).is_err());
        assert!(trinomial_census(5, 6).is_err());
        assert!(matches!(
            trinomial_census(5, 1 << 31),
            Err(Error::UnsupportedRange(_))
        ));
    }
}
