//! Exact Bernoulli numbers, binomials and factorials.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactalg::{qi, Rational};

/// `n!` as an exact rational.
pub fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * qi(k))
}

/// The binomial coefficient `C(n, k)` (zero for `k > n`).
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli numbers `B_0 … B_n` with `B_1 = −1/2`, from
/// `Σ_{k=0}^{m} C(m+1, k) B_k = 0`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        let mut s = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += Rational::from_integer(binomial(m + 1, k)) * bk;
        }
        b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// The Bernoulli number `B_n` (with `B_1 = −1/2`).
pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().unwrap()
}
