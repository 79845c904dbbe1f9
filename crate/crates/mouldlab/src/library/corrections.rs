//! Closed-form Fay correction moulds: the flexion formula for `Darit(ΔM)·R`,
//! the correction of `T̂₀₁` transported by the constant mould, step-by-step
//! propagation through `exp(Darit)`, and the correction of a `mu`-exponential.

use num_traits::One;

use crate::checks::{check_alternal, check_circ_neutral, check_push_invariant, Mode};
use crate::error::{Error, Result};
use crate::exactalg::{qi, LinearMap, Poly, RatFun, Rational, Scalar};
use crate::flexion::{darit_apply_mould, flexion_substitution, mu_exp, Decomposition, Flexion};
use crate::mouldcore::{dar_inv, delta_inv, fay, maps, swap, Mould, Side};

use super::builders::CorrectionSpec;
use super::numbers::factorial;

/// The Fay correction of `P' = arat(M)·R'` (equivalently of `Darit(ΔM)·R`),
/// from the correction `C_{R'}` of `R' = dar⁻¹R` and the constants `c_i`
/// of `M`. In depth `r ≥ 2`:
///
/// `Σ_{w=abc, a≠∅, b≠∅} (C_{R'}(a⌉c) − C_{R'}(a⌈c)) M(b)
///   + Σ_{i=2}^{r−1} i·c_i (R'(u₂…u_{r−i+1}) − R'(u_{i+1}…u_r))`,
///
/// where `a⌈c` is plain `a` when `c = ∅`.
pub fn thm32_correction(m: &Mould, constants: &CorrectionSpec, r: &Mould, c_rprime: &Mould) -> Result<Mould> {
    m.expect_u()?;
    r.expect_u()?;
    c_rprime.expect_u()?;
    let d = m.max_depth().min(r.max_depth()).min(c_rprime.max_depth());
    let rp = dar_inv(r)?;
    let mut out = Mould::zero(Side::U, d);
    for depth in 2..=d {
        let mut terms = Vec::new();
        for dec in Decomposition::enumerate(depth).into_iter().filter(|dec| dec.i >= 1) {
            let mb = m.component(dec.b_len());
            let cq = c_rprime.component(depth - dec.b_len());
            if mb.is_zero() || cq.is_zero() {
                continue;
            }
            let mb = mb.substitute(&maps::slice(dec.b_len(), dec.i, depth))?;
            let left = cq.substitute(&flexion_substitution(Flexion::AbsorbIntoA, dec)?)?;
            let right = cq.substitute(&flexion_substitution(Flexion::AbsorbIntoC, dec)?)?;
            terms.push(left.sub(&right).mul(&mb));
        }
        for i in 2..depth {
            let ic = constants.get(i).scale(&qi(i as i64));
            let low = rp.component(depth - i);
            if ic.is_zero() || low.is_zero() {
                continue;
            }
            let head = low.substitute(&maps::slice(depth - i, 1, depth))?;
            let tail = low.substitute(&maps::slice(depth - i, i, depth))?;
            terms.push(head.sub(&tail).scale(&ic));
        }
        out.set(depth, RatFun::sum(depth, terms));
    }
    Ok(out)
}

/// [`thm32_correction`] after verifying its hypotheses: `M` alternal and
/// push-invariant, `swap M + C` circ-neutral with exactly the given
/// constants, and `R` even in depth 1.
pub fn thm32_correction_checked(m: &Mould, constants: &CorrectionSpec, r: &Mould, c_rprime: &Mould) -> Result<Mould> {
    if !check_alternal(m)?.holds() {
        return Err(Error::HypothesisViolation("M is not alternal".into()));
    }
    if !check_push_invariant(m)?.holds() {
        return Err(Error::HypothesisViolation("M is not push-invariant".into()));
    }
    let circ = check_circ_neutral(&swap(m)?, Mode::Corrected)?;
    if !circ.holds() || circ.constants() != constants.truncate(m.max_depth()) {
        return Err(Error::HypothesisViolation("swap M + C is not circ-neutral for the given constants".into()));
    }
    if r.max_depth() >= 1 {
        let r1 = r.component(1);
        let flipped = r1.substitute(&LinearMap::new(1, vec![vec![-1]]))?;
        if !flipped.equals(&r1)? {
            return Err(Error::HypothesisViolation("R is not even in depth 1".into()));
        }
    }
    thm32_correction(m, constants, r, c_rprime)
}

/// The depth-`r` Fay correction of `T̂₀₁` transported by the constant mould
/// `c_i = ζ(i)/i`: zero for even `r`; for odd `r`,
/// `ζ(r)(u₂+⋯+u_r) + Σ_{i=3, i odd}^{r−1} ζ(i)(T̂'₀₁(u₂…u_{r−i+1}) − T̂'₀₁(u_{i+1}…u_r))`.
pub fn thm34_correction(r: usize, that01_prime: &Mould) -> Result<RatFun> {
    if r < 2 {
        return Err(Error::Inapplicable("the correction is defined for r >= 2".into()));
    }
    if r.is_multiple_of(2) {
        return Ok(RatFun::zero(r));
    }
    if that01_prime.max_depth() + 3 < r {
        return Err(Error::Inapplicable(format!(
            "depth {r} needs the Bernoulli mould through depth {}",
            r - 3
        )));
    }
    let mut tail = vec![1; r];
    tail[0] = 0;
    let mut terms = vec![RatFun::from_poly(Poly::linear(&tail).scale(&Scalar::zeta(r as u32)))];
    for i in (3..r).step_by(2) {
        let t = that01_prime.component(r - i);
        if t.is_zero() {
            continue;
        }
        let head = t.substitute(&maps::slice(r - i, 1, r))?;
        let back = t.substitute(&maps::slice(r - i, i, r))?;
        terms.push(head.sub(&back).scale(&Scalar::zeta(i as u32)));
    }
    Ok(RatFun::sum(r, terms))
}

/// Result of step-by-step propagation of Fay corrections through `exp(Darit(N))`.
#[derive(Clone, Debug)]
pub struct Propagation {
    /// `R_n = Darit(N)ⁿ·R`.
    pub moulds: Vec<Mould>,
    /// `C_n`, the Fay correction of `R_n' = dar⁻¹R_n`.
    pub corrections: Vec<Mould>,
    /// `Σ_n C_n / n!`, the Fay correction of `Σ_n R_n / n!`.
    pub total: Mould,
}

/// Iterates the flexion correction formula: `R_{n+1} = Darit(N)·R_n` and
/// `C_{n+1}` from `(Δ⁻¹N, constants, R_n, C_n)`, for `n < order`.
pub fn grouplike_fay_propagate(
    n: &Mould,
    constants: &CorrectionSpec,
    r: &Mould,
    c_rprime: &Mould,
    order: usize,
) -> Result<Propagation> {
    let m = delta_inv(n)?;
    let mut moulds = vec![r.clone()];
    let mut corrections = vec![c_rprime.clone()];
    let mut total = c_rprime.clone();
    for k in 1..=order {
        let prev_r = &moulds[k - 1];
        let prev_c = &corrections[k - 1];
        let next_c = thm32_correction(&m, constants, prev_r, prev_c)?;
        let next_r = darit_apply_mould(n, prev_r)?;
        total = total.add(&next_c.scale(&Scalar::from_rational(Rational::one() / factorial(k))))?;
        moulds.push(next_r);
        corrections.push(next_c);
    }
    Ok(Propagation { moulds, corrections, total })
}

/// The Fay correction of `exp(P')` given the correction `C_{P'}` of
/// `P' = dar⁻¹P`: `C_{P'} + F(P'')` with `P'' = exp(P') − 1 − P'`, the sum of
/// all products of at least two factors `P'`.
pub fn exp_fay_correction(p: &Mould, c_pprime: &Mould) -> Result<Mould> {
    let pp = dar_inv(p)?;
    let unit = Mould::unit(Side::U, pp.max_depth());
    let multi = mu_exp(&pp)?.sub(&unit)?.sub(&pp)?;
    c_pprime.add(&fay(&multi)?)
}
