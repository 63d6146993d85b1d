use super::*;
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fz(x: i128) -> Factorization {
    factorize(&BigInt::from(x)).unwrap()
}

fn parts(f: &Factorization) -> Vec<(u128, u32)> {
    f.factors()
        .iter()
        .map(|(p, e)| (p.to_string().parse().unwrap(), *e))
        .collect()
}

#[test]
fn powmod_examples() {
    let pm = |b: i64, e: u64, m: i64| {
        powmod(&BigInt::from(b), &BigUint::from(e), &BigInt::from(m))
            .unwrap()
            .to_string()
    };
    assert_eq!(pm(2, 10, 1000), "24");
    assert_eq!(pm(5, 0, 7), "1");
    assert_eq!(pm(5, 10, 17), "9");
    // negative base normalizes into [0, m)
    assert_eq!(pm(-2, 3, 5), "2");
    assert!(powmod(&BigInt::from(2), &BigUint::from(3u8), &BigInt::from(1)).is_err());
    assert!(powmod(&BigInt::from(2), &BigUint::from(3u8), &BigInt::from(-7)).is_err());
}

#[test]
fn is_prime_examples() {
    assert!(is_prime(&BigUint::from(2u8)));
    assert!(!is_prime(&BigUint::from(3381u32))); // 3 | 3381
    assert!(is_prime(&BigUint::from(151u32))); // trial division to 12 finds nothing
    assert!(!is_prime(&BigUint::from(0u8)));
    assert!(!is_prime(&BigUint::from(1u8)));
}

#[test]
fn is_prime_above_u128() {
    let m521 = (BigUint::from(1u8) << 521) - 1u8;
    assert!(is_prime(&m521));
    let c521 = (BigUint::from(1u8) << 521) + 1u8;
    assert!(!is_prime(&c521));
}

#[test]
fn factorize_examples() {
    assert_eq!(parts(&fz(3381)), vec![(3, 1), (7, 2), (23, 1)]);
    assert_eq!(fz(3381).sign(), 1);
    assert_eq!(parts(&fz(2869)), vec![(19, 1), (151, 1)]);
    let neg = fz(-256);
    assert_eq!(neg.sign(), -1);
    assert_eq!(parts(&neg), vec![(2, 8)]);
    assert_eq!(neg.value(), BigInt::from(-256));
    assert_eq!(parts(&fz(1)), vec![]);
    assert_eq!(fz(-1).sign(), -1);
}

#[test]
fn factorize_rejects_zero() {
    assert!(factorize(&BigInt::from(0)).is_err());
    assert!(is_squarefree(&BigInt::from(0)).is_err());
    assert!(radical(&BigInt::from(0)).is_err());
    assert!(squarefree_part(&BigInt::from(0)).is_err());
}

#[test]
fn factorize_beyond_u128() {
    // 1009 * (2^127 - 1): magnitude needs the big-int entry path.
    let m127: BigUint = (BigUint::from(1u8) << 127) - 1u8;
    let x = BigInt::from(1009u32) * BigInt::from(m127.clone());
    let f = factorize(&x).unwrap();
    assert_eq!(f.factors().len(), 2);
    assert_eq!(f.factors()[0], (BigUint::from(1009u32), 1));
    assert_eq!(f.factors()[1], (m127, 1));
    assert_eq!(f.value(), x);
}

#[test]
fn squarefree_examples() {
    assert!(is_squarefree(&BigInt::from(2869)).unwrap());
    assert!(!is_squarefree(&BigInt::from(3381)).unwrap()); // 7^2 | 3381
    assert!(is_squarefree(&BigInt::from(-1)).unwrap());
}

#[test]
fn radical_examples() {
    assert_eq!(radical(&BigInt::from(256)).unwrap(), BigUint::from(2u8));
    assert_eq!(radical(&BigInt::from(3381)).unwrap(), BigUint::from(483u32));
    // T(1,1) * T(-1,1) = 3381 * 2869
    assert_eq!(
        radical(&BigInt::from(9_700_089)).unwrap(),
        BigUint::from(1_385_727u32)
    );
    assert_eq!(radical(&BigInt::from(-1)).unwrap(), BigUint::from(1u8));
}

#[test]
fn squarefree_part_examples() {
    let sp = |x: i64| {
        let (d, m) = squarefree_part(&BigInt::from(x)).unwrap();
        (d.to_string(), m.to_string())
    };
    assert_eq!(sp(12), ("3".into(), "2".into()));
    assert_eq!(sp(-18), ("-2".into(), "3".into()));
    assert_eq!(sp(3381), ("69".into(), "7".into()));
    assert_eq!(sp(1), ("1".into(), "1".into()));
}

#[test]
fn roundtrip_100k_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7d15c0de);
    for _ in 0..100_000 {
        let x: u64 = rng.random_range(2..=1_000_000_000_000);
        let big = BigInt::from(x);
        let f = factorize(&big).unwrap();
        assert_eq!(f.value(), big, "roundtrip failed for {x}");
        for (p, _) in f.factors() {
            assert!(is_prime(p), "non-prime leaf {p} for {x}");
        }
    }
}

#[test]
fn squarefree_agrees_with_sieve_to_1e6() {
    const N: usize = 1_000_000;
    let mut sf = vec![true; N + 1];
    let mut p = 2usize;
    while p * p <= N {
        let q = p * p;
        let mut j = q;
        while j <= N {
            sf[j] = false;
            j += q;
        }
        p += 1;
    }
    for x in 1..=N {
        let f = factorize(&BigInt::from(x)).unwrap();
        let all_one = f.factors().iter().all(|(_, e)| *e == 1);
        assert_eq!(all_one, sf[x], "x={x}");
        assert_eq!(f.is_squarefree(), sf[x], "x={x}");
    }
    // sign is ignored
    assert_eq!(is_squarefree(&BigInt::from(-4)).unwrap(), false);
    assert_eq!(is_squarefree(&BigInt::from(-30)).unwrap(), true);
}

#[test]
fn radical_multiplicative_on_coprime_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut tested = 0;
    while tested < 500 {
        let x: u64 = rng.random_range(2..=1_000_000_000);
        let y: u64 = rng.random_range(2..=1_000_000_000);
        let (bx, by) = (BigInt::from(x), BigInt::from(y));
        if num_integer::Integer::gcd(&bx, &by) != BigInt::from(1) {
            continue;
        }
        let lhs = radical(&(&bx * &by)).unwrap();
        let rhs = radical(&bx).unwrap() * radical(&by).unwrap();
        assert_eq!(lhs, rhs, "x={x} y={y}");
        tested += 1;
    }
}

#[test]
fn squarefree_part_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let mag: i128 = rng.random_range(1..=1_000_000_000_000);
        let x = if rng.random_range(0..2) == 0 { mag } else { -mag };
        let big = BigInt::from(x);
        let (d, m) = squarefree_part(&big).unwrap();
        let m = BigInt::from(m);
        assert_eq!(&d * &m * &m, big, "x={x}");
        assert!(is_squarefree(&d).unwrap(), "x={x}");
        assert_eq!(d.is_negative(), x < 0);
    }
}

#[test]
fn display_format() {
    assert_eq!(fz(3381).to_string(), "+1 * 3 * 7^2 * 23");
    assert_eq!(fz(-256).to_string(), "-1 * 2^8");
    assert_eq!(Factorization::zero().to_string(), "0");
}
