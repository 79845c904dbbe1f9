//! Named moulds: `U_{2i}`, `U₁`, the Bernoulli mould `T̂₀₁` and the constant mould `C`.

use std::collections::BTreeMap;

use crate::exactalg::{Poly, RatFun, Rational, Scalar};
use crate::mouldcore::{Mould, Side};

use super::numbers::{bernoulli_table, binomial, factorial};

/// `U_{2i}`: `u₁^{2i}` in depth 1 and zero in every other depth.
pub fn build_u(two_i: u32, max_depth: usize) -> Mould {
    assert!(two_i.is_multiple_of(2), "U_k is defined for even k only");
    Mould::from_components(Side::U, max_depth, Scalar::zero(), [(1, RatFun::from_poly(Poly::var(1, 0).pow(two_i)))])
}

/// `U₁`: `−u₁` in depth 1.
pub fn build_u1(max_depth: usize) -> Mould {
    Mould::from_components(Side::U, max_depth, Scalar::zero(), [(1, RatFun::from_poly(Poly::var(1, 0).neg()))])
}

/// The depth-`r` component `(B_r/r!) Σ_{i=1}^r (−1)^{i−1} C(r−1,i−1) u_i`
/// for `r ≥ 2` (zero in depth 1).
pub fn that01_component(r: usize, bernoulli_r: &Rational) -> Poly {
    let mut p = Poly::zero(r);
    if r < 2 {
        return p;
    }
    let lead = bernoulli_r / factorial(r);
    for i in 1..=r {
        let sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
        let c = &lead * Rational::from_integer(binomial(r - 1, i - 1) * sign);
        p.add_assign(&Poly::var(r, i - 1).scale_rational(&c));
    }
    p
}

/// The Bernoulli mould `T̂₀₁`, nonzero exactly at even depths `≥ 2`.
pub fn build_that01(max_depth: usize) -> Mould {
    let b = bernoulli_table(max_depth.max(1));
    Mould::from_components(
        Side::U,
        max_depth,
        Scalar::zero(),
        (2..=max_depth).map(|r| (r, RatFun::from_poly(that01_component(r, &b[r])))),
    )
}

/// A constant mould `(c_r)_{r ≥ 0}`, with `c₀ = c₁ = 0`; absent entries are zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CorrectionSpec {
    constants: BTreeMap<usize, Scalar>,
}

impl CorrectionSpec {
    /// All constants zero (the strict case).
    pub fn strict() -> Self {
        CorrectionSpec::default()
    }

    /// Builds a constant mould from its entries; entries at depths 0 and 1 must vanish.
    pub fn new(entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut constants = BTreeMap::new();
        for (r, c) in entries {
            assert!(r >= 2 || c.is_zero(), "c_0 and c_1 are forced to vanish");
            if !c.is_zero() {
                constants.insert(r, c);
            }
        }
        CorrectionSpec { constants }
    }

    pub fn get(&self, r: usize) -> Scalar {
        self.constants.get(&r).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_strict(&self) -> bool {
        self.constants.is_empty()
    }

    /// Nonzero entries in increasing depth.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.constants.iter().map(|(r, c)| (*r, c))
    }

    /// Keeps only depths `≤ max_depth`.
    pub fn truncate(&self, max_depth: usize) -> Self {
        CorrectionSpec::new(self.constants.range(..=max_depth).map(|(r, c)| (*r, c.clone())))
    }
}

/// The constant mould with `c_r = ζ(r)/r` for odd `r ≥ 3` (up to `max_depth`).
pub fn build_const_mould_c(max_depth: usize) -> CorrectionSpec {
    CorrectionSpec::new(
        (3..=max_depth)
            .step_by(2)
            .map(|r| (r, Scalar::zeta(r as u32).scale(&Rational::new(1.into(), (r as i64).into())))),
    )
}
