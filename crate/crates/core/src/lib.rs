//! Counting machinery for trinomials f(t) = t^n + a*t + b with n odd:
//! exact discriminants T(a,b), rigorous irreducibility over Q and F_p,
//! squarefree verdicts through integer factorization, local densities with
//! the small-prime sieve, and resumable box censuses that measure the
//! density of irreducible-with-squarefree-discriminant pairs.

pub mod census;
pub mod density;
pub mod error;
pub mod fp_poly;
pub mod integers;
pub mod trinomial;

pub use error::{Error, Result};
