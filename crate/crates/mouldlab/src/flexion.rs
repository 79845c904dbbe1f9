//! Flexion calculus: word decompositions, the flexion substitutions, the
//! derivation `arat`, its conjugate `Darit`, the bracket `Dari`, the
//! exponentiated `Darit` action and the `mu`-exponential and logarithm.

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::{unit, LinearMap, RatFun, Rational, Scalar};
use crate::mouldcore::{dar, dar_inv, delta_inv, maps, mu, Mould, MouldA, Side};
use crate::library::numbers::factorial;

/// A decomposition `w = abc` of a word of length `r`, with
/// `a = (x₁…x_i)`, `b = (x_{i+1}…x_j)`, `c = (x_{j+1}…x_r)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub i: usize,
    pub j: usize,
    pub r: usize,
}

impl Decomposition {
    pub fn new(i: usize, j: usize, r: usize) -> Result<Self> {
        if i > j || j > r {
            return Err(Error::InvalidDecomposition { i, j, r });
        }
        Ok(Decomposition { i, j, r })
    }

    pub fn b_len(&self) -> usize {
        self.j - self.i
    }

    /// All decompositions with `b ≠ ∅` and `ac ≠ ∅`.
    pub fn enumerate(r: usize) -> Vec<Decomposition> {
        let mut out = Vec::new();
        for i in 0..r {
            for j in i + 1..=r {
                if !(i == 0 && j == r) {
                    out.push(Decomposition { i, j, r });
                }
            }
        }
        out
    }
}

/// The four flexions of a decomposition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Flexion {
    /// `a⌉c`: the last letter of `a` absorbs the sum of `b`; plain `c` if `a = ∅`.
    AbsorbIntoA,
    /// `a⌈c`: the first letter of `c` absorbs the sum of `b`; plain `a` if `c = ∅`.
    AbsorbIntoC,
    /// `⌊b` on `v` variables: subtract the last letter of `a` from each letter of `b`.
    LeftFloorB,
    /// `b⌋` on `v` variables: subtract the first letter of `c` from each letter of `b`.
    RightFloorB,
}

fn sum_range(r: usize, from: usize, to: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    for c in &mut v[from..to] {
        *c = 1;
    }
    v
}

/// The argument list realizing a flexion, as a substitution into the
/// variables of the whole word.
pub fn flexion_substitution(kind: Flexion, d: Decomposition) -> Result<LinearMap> {
    let Decomposition { i, j, r } = Decomposition::new(d.i, d.j, d.r)?;
    let e = |k: usize| unit(r, k);
    let args: Vec<Vec<i64>> = match kind {
        Flexion::AbsorbIntoA => {
            if i == 0 {
                (j..r).map(e).collect()
            } else {
                let mut v: Vec<Vec<i64>> = (0..i - 1).map(e).collect();
                v.push(sum_range(r, i - 1, j));
                v.extend((j..r).map(e));
                v
            }
        }
        Flexion::AbsorbIntoC => {
            if j == r {
                (0..i).map(e).collect()
            } else {
                let mut v: Vec<Vec<i64>> = (0..i).map(e).collect();
                v.push(sum_range(r, i, j + 1));
                v.extend((j + 1..r).map(e));
                v
            }
        }
        Flexion::LeftFloorB => (i..j)
            .map(|k| {
                let mut v = e(k);
                if i > 0 {
                    v[i - 1] -= 1;
                }
                v
            })
            .collect(),
        Flexion::RightFloorB => (i..j)
            .map(|k| {
                let mut v = e(k);
                if j < r {
                    v[j] -= 1;
                }
                v
            })
            .collect(),
    };
    if args.is_empty() {
        return Err(Error::InvalidDecomposition { i, j, r });
    }
    Ok(LinearMap::new(r, args))
}

/// `(arat(M)·Q)(w) = Σ_{w=abc, b≠∅, ac≠∅} (Q(a⌉c) − Q(a⌈c)) M(b)`.
pub fn arat_apply(m: &Mould, q: &Mould) -> Result<Mould> {
    m.expect_u()?;
    q.expect_u()?;
    let d = m.max_depth().min(q.max_depth());
    let mut out = Mould::zero(Side::U, d);
    for r in 2..=d {
        let mut terms = Vec::new();
        for dec in Decomposition::enumerate(r) {
            let mb = m.component(dec.b_len());
            let qc = q.component(r - dec.b_len());
            if mb.is_zero() || qc.is_zero() {
                continue;
            }
            let mb = mb.substitute(&maps::slice(dec.b_len(), dec.i, r))?;
            let left = qc.substitute(&flexion_substitution(Flexion::AbsorbIntoA, dec)?)?;
            let right = qc.substitute(&flexion_substitution(Flexion::AbsorbIntoC, dec)?)?;
            terms.push(left.sub(&right).mul(&mb));
        }
        out.set(r, RatFun::sum(r, terms));
    }
    Ok(out)
}

fn require_ari(n: &Mould) -> Result<()> {
    if !n.empty_value().is_zero() {
        return Err(Error::BadEmptyValue { expected: "0".into(), found: n.empty_value().to_string() });
    }
    Ok(())
}

/// `Darit(N)·R`: on the generator part `q·a` gives `q·N`; on the mould part
/// applies `dar ∘ arat(Δ⁻¹N) ∘ dar⁻¹`.
pub fn darit_apply(n: &Mould, r: &MouldA) -> Result<MouldA> {
    n.expect_u()?;
    require_ari(n)?;
    let m = delta_inv(n)?;
    let mut body = dar(&arat_apply(&m, &dar_inv(&r.body)?)?)?;
    if !r.a_coeff.is_zero() {
        body = body.add(&n.scale(&r.a_coeff))?;
    }
    Ok(MouldA::from_mould(body))
}

/// `Darit(N)·R` for a plain mould `R`.
pub fn darit_apply_mould(n: &Mould, r: &Mould) -> Result<Mould> {
    Ok(darit_apply(n, &MouldA::from_mould(r.clone()))?.body)
}

/// `Dari(A,B) = Darit(A)·B − Darit(B)·A`.
pub fn dari_bracket(a: &Mould, b: &Mould) -> Result<Mould> {
    darit_apply_mould(a, b)?.sub(&darit_apply_mould(b, a)?)
}

/// `Σ_{n=0}^{order} (1/n!) Darit(N)ⁿ·R`, failing with `OrderInsufficient`
/// when the next term of the series is nonzero within the truncation.
pub fn darit_exp_apply(n: &Mould, r: &MouldA, order: usize) -> Result<MouldA> {
    let mut term = r.clone();
    let mut acc = r.clone();
    for k in 1..=order {
        term = darit_apply(n, &term)?;
        acc = acc.add(&term.scale(&Scalar::from_rational(Rational::one() / factorial(k))))?;
    }
    let next = darit_apply(n, &term)?;
    if !next.is_zero() {
        let depth = next.body.min_depth().unwrap_or(0);
        return Err(Error::OrderInsufficient { order, depth });
    }
    Ok(acc)
}

/// `exp(P) = Σ_n Pⁿ/n!` for the `mu` product; requires `P(∅) = 0`.
pub fn mu_exp(p: &Mould) -> Result<Mould> {
    if !p.empty_value().is_zero() {
        return Err(Error::BadEmptyValue { expected: "0".into(), found: p.empty_value().to_string() });
    }
    let mut acc = Mould::unit(p.side(), p.max_depth());
    let mut power = Mould::unit(p.side(), p.max_depth());
    for k in 1..=p.max_depth() {
        power = mu(&power, p)?;
        if power.is_zero() {
            break;
        }
        acc = acc.add(&power.scale(&Scalar::from_rational(Rational::one() / factorial(k))))?;
    }
    Ok(acc)
}

/// `log(G) = Σ_{n≥1} (−1)^{n+1} (G−1)ⁿ/n` for the `mu` product; requires `G(∅) = 1`.
pub fn mu_log(g: &Mould) -> Result<Mould> {
    if !g.empty_value().is_one() {
        return Err(Error::BadEmptyValue { expected: "1".into(), found: g.empty_value().to_string() });
    }
    let x = g.sub(&Mould::unit(g.side(), g.max_depth()))?;
    let mut acc = Mould::zero(g.side(), g.max_depth());
    let mut power = Mould::unit(g.side(), g.max_depth());
    for k in 1..=g.max_depth() {
        power = mu(&power, &x)?;
        if power.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc = acc.add(&power.scale(&Scalar::frac(sign, k as i64)))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_one_boundary_cases() {
        let d = Decomposition::new(1, 2, 3).unwrap();
        assert_eq!(flexion_substitution(Flexion::AbsorbIntoA, d).unwrap().images, vec![vec![1, 1, 0], vec![0, 0, 1]]);
        assert_eq!(flexion_substitution(Flexion::AbsorbIntoC, d).unwrap().images, vec![vec![1, 0, 0], vec![0, 1, 1]]);
        // a = ∅, b = (u1, u2), c = (u3, u4).
        let d = Decomposition::new(0, 2, 4).unwrap();
        assert_eq!(flexion_substitution(Flexion::AbsorbIntoA, d).unwrap().images, vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        assert_eq!(flexion_substitution(Flexion::AbsorbIntoC, d).unwrap().images, vec![vec![1, 1, 1, 0], vec![0, 0, 0, 1]]);
        // a = (u1, u2), b = (u3, u4), c = ∅.
        let d = Decomposition::new(2, 4, 4).unwrap();
        assert_eq!(flexion_substitution(Flexion::AbsorbIntoA, d).unwrap().images, vec![vec![1, 0, 0, 0], vec![0, 1, 1, 1]]);
        assert_eq!(flexion_substitution(Flexion::AbsorbIntoC, d).unwrap().images, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
    }

    #[test]
    fn v_side_floors() {
        let d = Decomposition::new(1, 3, 4).unwrap();
        assert_eq!(flexion_substitution(Flexion::LeftFloorB, d).unwrap().images, vec![vec![-1, 1, 0, 0], vec![-1, 0, 1, 0]]);
        assert_eq!(flexion_substitution(Flexion::RightFloorB, d).unwrap().images, vec![vec![0, 1, 0, -1], vec![0, 0, 1, -1]]);
    }

    #[test]
    fn invalid_decompositions() {
        assert!(Decomposition::new(2, 1, 3).is_err());
        assert!(Decomposition::new(0, 4, 3).is_err());
        assert_eq!(Decomposition::enumerate(2).len(), 2);
        assert_eq!(Decomposition::enumerate(3).len(), 5);
    }
}
