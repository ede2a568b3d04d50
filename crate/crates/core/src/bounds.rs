//! Exact union bounds on the failure probability of one random product sample.
//!
//! Both bounds are evaluated as big rationals: the geometric factor
//! `(1 − 2^−p)^m` underflows `f64` long before the certified `m` is reached,
//! and certification needs a strict `< 1` comparison.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

/// `(1 − 2^−p)^m` as an exact rational.
fn miss_probability(p: usize, m: usize) -> BigRational {
    let numer = num_traits::pow(pow2(p) - BigInt::one(), m);
    BigRational::new(numer, pow2(p * m))
}

/// Union bound on the probability that the product sample over a base with
/// `k` vertices fails to be `n`-saturated:
///
/// `C((m+1)k, n−1) · 2^(n−1) · (1 − 2^−(n−1))^m`
pub fn failure_bound_a(n: usize, k: usize, m: usize) -> BigRational {
    assert!(n >= 1 && k >= 1, "failure_bound_a needs n >= 1 and k >= 1");
    let p = n - 1;
    let sets = binomial(BigInt::from((m + 1) * k), BigInt::from(p));
    BigRational::from_integer(sets * pow2(p)) * miss_probability(p, m)
}

/// Union bound on the probability that the lifting condition fails:
///
/// `Σ_{p=1}^{n−1} k^(p+1) · (m+1)^p · (1 − 2^−p)^m`
///
/// counting a base vertex, an ordered `p`-tuple of its (closed) neighbors with
/// repeats, and a copy index per tuple entry. Each of the `m` copies `l ≥ 1`
/// of the base vertex succeeds independently with probability at least `2^−p`.
pub fn failure_bound_b(n: usize, k: usize, m: usize) -> BigRational {
    assert!(n >= 1 && k >= 1, "failure_bound_b needs n >= 1 and k >= 1");
    let k = BigInt::from(k);
    let copies = BigInt::from(m + 1);
    (1..n).fold(BigRational::zero(), |acc, p| {
        let configs = num_traits::pow(k.clone(), p + 1) * num_traits::pow(copies.clone(), p);
        acc + BigRational::from_integer(configs) * miss_probability(p, m)
    })
}

/// `failure_bound_a + failure_bound_b`.
pub fn combined_bound(n: usize, k: usize, m: usize) -> BigRational {
    failure_bound_a(n, k, m) + failure_bound_b(n, k, m)
}

/// True when the combined bound at `m` is strictly below one, so a single
/// sample succeeds with positive probability.
pub fn is_certified(n: usize, k: usize, m: usize) -> bool {
    m >= 1 && combined_bound(n, k, m) < BigRational::one()
}

/// Smallest `m ≥ 1` whose combined failure bound is strictly below one.
pub fn minimal_certified_m(n: usize, k: usize) -> usize {
    assert!(k >= n, "minimal_certified_m needs k >= n");
    // Both bounds decay geometrically, so this loop terminates.
    (1..)
        .find(|&m| is_certified(n, k, m))
        .expect("unbounded range")
}
