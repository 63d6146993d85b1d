//! Local densities of H(a,b) = T(a,b)*T(-a,b): counts of roots mod p and
//! mod p^2, their multiplicative assembly, and the small-prime sieve that
//! predicts M1 against exact enumeration.

use crate::error::{Error, Result};
use crate::integers::{is_prime_u64, powmod_u64, primes_below};
use serde::Serialize;

/// Largest prime admitted by the mod-p^2 enumerations.
pub const MAX_RHO_P2_PRIME: u64 = 10_000;

/// H(a,b) mod m via the closed form n^(2n) b^(2(n-1)) - (n-1)^(2(n-1)) a^(2n).
#[inline]
fn h_mod(n: u32, a: i64, b: u64, m: u64) -> u64 {
    let a_mod = a.rem_euclid(m as i64) as u64;
    let pos = powmod_u64(n as u64, 2 * n as u64, m) * powmod_u64(b, 2 * (n as u64 - 1), m) % m;
    let neg = powmod_u64(n as u64 - 1, 2 * (n as u64 - 1), m) * powmod_u64(a_mod, 2 * n as u64, m) % m;
    (pos + m - neg) % m
}

/// rho_a(p): number of b mod p with H(a,b) = 0 mod p, by direct enumeration.
pub fn rho_p(n: u32, a: i64, p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("p = {p} is not prime")));
    }
    Ok((0..p).filter(|&b| h_mod(n, a, b, p) == 0).count() as u64)
}

/// Number of b mod p^2 with H(a,b) = 0 mod p^2, by direct enumeration.
pub fn rho_p2(n: u32, a: i64, p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("p = {p} is not prime")));
    }
    if p > MAX_RHO_P2_PRIME {
        return Err(Error::UnsupportedRange(format!(
            "rho_p2 enumerates p^2 residues and requires p <= {MAX_RHO_P2_PRIME}, got {p}"
        )));
    }
    let m = p * p;
    Ok((0..m).filter(|&b| h_mod(n, a, b, m) == 0).count() as u64)
}

/// rho_a(l) for squarefree l as the product of rho_a(p) over p | l.
pub fn rho_squarefree_l(n: u32, a: i64, l: u64) -> Result<u64> {
    if l == 0 {
        return Err(Error::InvalidArgument("l must be positive".into()));
    }
    let mut rest = l;
    let mut product = 1u64;
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            rest /= d;
            if rest % d == 0 {
                return Err(Error::InvalidArgument(format!("l = {l} is not squarefree")));
            }
            product *= rho_p(n, a, d)?;
        }
        d += 1;
    }
    if rest > 1 {
        product *= rho_p(n, a, rest)?;
    }
    Ok(product)
}

/// One prime of a [`DensityProfile`].
#[derive(Debug, Clone, Serialize)]
pub struct DensityRow {
    pub p: u64,
    pub rho_p: u64,
    pub rho_p2: u64,
    /// p divides 2*a*n*(n-1): the clean degree/Hensel arguments need not apply.
    pub degenerate: bool,
    /// Every root of H(a, .) mod p is simple (nonzero formal derivative).
    pub simple_roots: bool,
}

impl DensityRow {
    /// Hensel stability: the count mod p^2 matches the count mod p.
    pub fn hensel_stable(&self) -> bool {
        self.rho_p2 == self.rho_p
    }
}

/// rho values over a prime list, with the sieve product prod (1 - rho_p2/p^2).
#[derive(Debug, Clone, Serialize)]
pub struct DensityProfile {
    pub n: u32,
    pub a: i64,
    pub rows: Vec<DensityRow>,
    pub sieve_product: f64,
}

/// Profile over all primes p <= p_max.
pub fn density_profile(n: u32, a: i64, p_max: u64) -> Result<DensityProfile> {
    let mut rows = Vec::new();
    let mut product = 1.0;
    for p in primes_below(p_max + 1) {
        let row = density_row(n, a, p)?;
        product *= 1.0 - row.rho_p2 as f64 / (p * p) as f64;
        rows.push(row);
    }
    Ok(DensityProfile { n, a, rows, sieve_product: product })
}

fn density_row(n: u32, a: i64, p: u64) -> Result<DensityRow> {
    let rp = rho_p(n, a, p)?;
    let rp2 = rho_p2(n, a, p)?;
    let degenerate = (2 * (a.rem_euclid(p as i64) as u64) % p * (n as u64 % p) % p
        * ((n as u64 - 1) % p))
        % p
        == 0;
    // d/db H = 2(n-1) n^(2n) b^(2n-3); a root b is simple iff that is nonzero
    let simple_roots = (0..p)
        .filter(|&b| h_mod(n, a, b, p) == 0)
        .all(|b| {
            let deriv = 2 * (n as u64 - 1) % p * powmod_u64(n as u64, 2 * n as u64, p) % p
                * powmod_u64(b, 2 * n as u64 - 3, p)
                % p;
            deriv != 0
        });
    Ok(DensityRow { p, rho_p: rp, rho_p2: rp2, degenerate, simple_roots })
}

/// The sieve prime set for a box with |b| lower bound B: all primes up to
/// ln(B), never smaller than {2, 3, 5, 7}.
pub fn sieve_primes(b_min: u64) -> Vec<u64> {
    let ln_b = (b_min.max(2) as f64).ln();
    let cutoff = (ln_b.floor() as u64).max(7);
    primes_below(cutoff + 1)
}

/// prod over the given primes of (1 - rho_p2(n,a,p)/p^2).
pub fn sieve_density_product(n: u32, a: i64, primes: &[u64]) -> Result<f64> {
    let mut product = 1.0;
    for &p in primes {
        let r = rho_p2(n, a, p)?;
        product *= 1.0 - r as f64 / (p * p) as f64;
    }
    Ok(product)
}

/// Sieve prediction for M1: sum over A <= a <= 2A of
/// 2B * prod_{p <= ln B} (1 - rho_p2(n,a,p)/p^2).
pub fn predicted_m1(n: u32, a_min: u64, b_min: u64) -> Result<f64> {
    if a_min < 2 || b_min < 2 {
        return Err(Error::InvalidArgument("need A, B >= 2".into()));
    }
    let primes = sieve_primes(b_min);
    let mut total = 0.0;
    for a in a_min..=2 * a_min {
        total += 2.0 * b_min as f64 * sieve_density_product(n, a as i64, &primes)?;
    }
    Ok(total)
}

/// Exact count of pairs with A <= a <= 2A, B <= |b| <= 2B such that no prime
/// p <= ln B has p^2 | H(a,b). Per-prime residue filtering, no factorization.
pub fn empirical_m1(n: u32, a_min: u64, b_min: u64) -> Result<u64> {
    if a_min < 2 || b_min < 2 {
        return Err(Error::InvalidArgument("need A, B >= 2".into()));
    }
    let pairs = (a_min as u128 + 1) * 2 * (b_min as u128 + 1);
    if pairs > 100_000_000 {
        return Err(Error::UnsupportedRange(format!(
            "box of {pairs} pairs exceeds the 10^8 enumeration guard"
        )));
    }
    let primes = sieve_primes(b_min);
    let window = (b_min + 1) as usize; // b in [B, 2B] and in [-2B, -B]
    let mut total = 0u64;
    let mut blocked = vec![false; 2 * window];
    for a in a_min..=2 * a_min {
        blocked.iter_mut().for_each(|v| *v = false);
        for &p in &primes {
            let m = p * p;
            for r in 0..m {
                if h_mod(n, a as i64, r, m) != 0 {
                    continue;
                }
                // positive window [B, 2B] at offset 0
                let mut b = b_min + (r + m - b_min % m) % m;
                while b <= 2 * b_min {
                    blocked[(b - b_min) as usize] = true;
                    b += m;
                }
                // negative window [-2B, -B] at offset `window`:
                // b = -(2B) + k congruent to r mod m
                let lo = -(2 * b_min as i64);
                let shift = (r as i64 - lo).rem_euclid(m as i64);
                let mut b = lo + shift;
                while b <= -(b_min as i64) {
                    blocked[window + (b - lo) as usize] = true;
                    b += m as i64;
                }
            }
        }
        total += blocked.iter().filter(|&&v| !v).count() as u64;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: count roots of H mod m by evaluating T(a,b)T(-a,b) directly.
    fn rho_oracle(n: u32, a: i64, m: u64) -> u64 {
        use crate::trinomial::mirror_product_h;
        use num_integer::Integer;
        use num_traits::Zero;
        (0..m)
            .filter(|&b| {
                mirror_product_h(n, a, b as i64)
                    .mod_floor(&num_bigint::BigInt::from(m))
                    .is_zero()
            })
            .count() as u64
    }

    #[test]
    fn rho_p_examples() {
        // (5,1,11): H = 0 mod 11 reduces to b^8 = 9 mod 11
        assert_eq!(rho_p(5, 1, 11).unwrap(), 2);
        assert_eq!(rho_p(5, 1, 11).unwrap(), rho_oracle(5, 1, 11));

        // (5,1,3): b^8 = 1 mod 3 has b in {1,2}
        assert_eq!(rho_p(5, 1, 3).unwrap(), 2);
        assert_eq!(rho_p(5, 1, 3).unwrap(), rho_oracle(5, 1, 3));

        // (5,3,17): b^8 = -1 mod 17 has exactly the 8 elements of order 16
        assert_eq!(rho_p(5, 3, 17).unwrap(), 8);
        assert_eq!(rho_p(5, 3, 17).unwrap(), rho_oracle(5, 3, 17));

        assert!(rho_p(5, 1, 10).is_err());
    }

    #[test]
    fn rho_p2_examples() {
        assert_eq!(rho_p2(5, 1, 3).unwrap(), rho_oracle(5, 1, 9));
        // simple roots lift uniquely: (5,1,11) stays 2
        assert_eq!(rho_p2(5, 1, 11).unwrap(), 2);
        // rho_p = 0 forces rho_p2 = 0
        for p in [2u64, 3, 5, 7, 11, 13] {
            for a in 0..6i64 {
                if rho_p(5, a, p).unwrap() == 0 {
                    assert_eq!(rho_p2(5, a, p).unwrap(), 0, "a={a} p={p}");
                }
            }
        }
        assert!(matches!(
            rho_p2(5, 1, 10_007),
            Err(Error::UnsupportedRange(_))
        ));
    }

    #[test]
    fn rho_multiplicative() {
        // l = 1: empty product
        assert_eq!(rho_squarefree_l(5, 1, 1).unwrap(), 1);
        // (5,1,33) = rho(3) * rho(11) = 4, and matches CRT enumeration
        assert_eq!(rho_squarefree_l(5, 1, 33).unwrap(), 4);
        assert_eq!(rho_squarefree_l(5, 1, 33).unwrap(), rho_oracle(5, 1, 33));
        // prime l equals rho_p
        assert_eq!(
            rho_squarefree_l(5, 1, 11).unwrap(),
            rho_p(5, 1, 11).unwrap()
        );
        // exhaustive CRT cross-check on the spec's moduli
        for &l in &[6u64, 15, 33, 35] {
            for a in 0..=20i64 {
                assert_eq!(
                    rho_squarefree_l(5, a, l).unwrap(),
                    rho_oracle(5, a, l),
                    "a={a} l={l}"
                );
            }
        }
        assert!(rho_squarefree_l(5, 1, 12).is_err());
    }

    #[test]
    fn rho_degree_bound() {
        // rho_p <= 2(n-1) whenever p does not divide 2*a*n*(n-1)
        let n = 5u32;
        for p in primes_below(200) {
            for a in 1..=50i64 {
                if (2 * a as u64 % p) * (n as u64 % p) % p * ((n as u64 - 1) % p) % p == 0 {
                    continue;
                }
                let r = rho_p(n, a, p).unwrap();
                assert!(r <= 2 * (n as u64 - 1), "rho({n},{a},{p}) = {r}");
                assert!(r <= p);
            }
        }
    }

    #[test]
    fn rho_p2_bounded_by_p_rho_p() {
        for p in [2u64, 3, 5, 7, 11, 13, 17] {
            for a in 0..=12i64 {
                let r1 = rho_p(5, a, p).unwrap();
                let r2 = rho_p2(5, a, p).unwrap();
                assert!(r2 <= p * r1, "a={a} p={p}: {r2} > {p}*{r1}");
            }
        }
    }

    #[test]
    fn hensel_stability_on_simple_roots() {
        for p in primes_below(50) {
            for a in 1..=20i64 {
                let row = density_row(5, a, p).unwrap();
                if !row.degenerate && row.simple_roots {
                    assert!(
                        row.hensel_stable(),
                        "expected rho_p2 = rho_p at a={a} p={p}: {row:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn sieve_prime_floor() {
        // ln(3000) is about 8.0; the floor set {2,3,5,7} must always appear
        assert_eq!(sieve_primes(3000), vec![2, 3, 5, 7]);
        assert_eq!(sieve_primes(2), vec![2, 3, 5, 7]);
        // a huge B pulls in more primes
        assert!(sieve_primes(u64::MAX).contains(&43));
    }

    #[test]
    fn sieve_product_sanity() {
        // no roots anywhere: full density, product exactly 1
        let primes = sieve_primes(100);
        if let Some(a) = (2..60i64).find(|&a| {
            primes.iter().all(|&p| rho_p2(5, a, p).unwrap() == 0)
        }) {
            assert_eq!(sieve_density_product(5, a, &primes).unwrap(), 1.0);
        }
        // a single prime p = 2 with one bad residue mod 4 gives 3/4
        if let Some(a) = (2..60i64).find(|&a| rho_p2(5, a, 2).unwrap() == 1) {
            assert_eq!(sieve_density_product(5, a, &[2]).unwrap(), 0.75);
        }
        // predicted_m1 is the per-a sum of 2B * product
        let (a_min, b_min) = (3u64, 50u64);
        let mut manual = 0.0;
        for a in a_min..=2 * a_min {
            manual += 2.0
                * b_min as f64
                * sieve_density_product(5, a as i64, &sieve_primes(b_min)).unwrap();
        }
        assert!((predicted_m1(5, a_min, b_min).unwrap() - manual).abs() < 1e-9);
    }

    #[test]
    fn empirical_m1_small_box_oracle() {
        // brute force over the box using exact big-int H
        use crate::trinomial::mirror_product_h;
        use num_integer::Integer;
        use num_traits::Zero;
        let (n, a_min, b_min) = (5u32, 2u64, 10u64);
        let primes = sieve_primes(b_min);
        let mut expect = 0u64;
        for a in a_min..=2 * a_min {
            for b in (-(2 * b_min as i64)..=-(b_min as i64)).chain(b_min as i64..=2 * b_min as i64)
            {
                let h = mirror_product_h(n, a as i64, b);
                let clean = primes.iter().all(|&p| {
                    !h.mod_floor(&num_bigint::BigInt::from(p * p)).is_zero()
                });
                if clean {
                    expect += 1;
                }
            }
        }
        assert_eq!(empirical_m1(n, a_min, b_min).unwrap(), expect);
    }

    #[test]
    fn empirical_m1_rejects_oversized_boxes() {
        assert!(matches!(
            empirical_m1(5, 1 << 20, 1 << 20),
            Err(Error::UnsupportedRange(_))
        ));
    }

    #[test]
    fn profile_product() {
        let profile = density_profile(5, 1, 11).unwrap();
        assert_eq!(profile.rows.len(), 5); // 2,3,5,7,11
        let manual: f64 = profile
            .rows
            .iter()
            .map(|r| 1.0 - r.rho_p2 as f64 / (r.p * r.p) as f64)
            .product();
        assert!((profile.sieve_product - manual).abs() < 1e-12);
        assert_eq!(profile.rows[4].rho_p, 2); // p = 11 row
    }
}
