//! Exact linear-algebra synthesis of model moulds with prescribed constants.
//!
//! For every block `(r, w)` the unknown is a homogeneous polynomial `F_r` of
//! degree `w − r` in `r` variables (the depth-`r`, weight-`w` part of a
//! polynomial mould). The solver imposes on `M_r = Δ⁻¹F_r`: alternality,
//! push-invariance, and `Σ_k circ^k swap(M_r) = −r·c_r`. Nonzero constants
//! can only be carried by blocks with `w = 2r + 1`, where `M_r` has degree 0.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{qi, LinearForm, Mono, Poly, RatFun, Rational, Scalar, ZetaMonomial};
use crate::mouldcore::{maps, Mould, Side};

use super::builders::CorrectionSpec;

/// Blocks `(depth, weight)`; at most one block per depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisProfile {
    pub blocks: Vec<(usize, usize)>,
    pub max_depth: usize,
}

impl SynthesisProfile {
    pub fn new(blocks: Vec<(usize, usize)>, max_depth: usize) -> Self {
        SynthesisProfile { blocks, max_depth }
    }
}

/// All exponent vectors of total degree `deg` in `r` variables, in a fixed order.
fn monomials(r: usize, deg: u16) -> Vec<Vec<u16>> {
    fn rec(r: usize, left: u16, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == r - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(r, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, deg, &mut Vec::new(), &mut out);
    out
}

/// Incremental row-echelon form of an augmented rational system `A x = b`.
struct Echelon {
    n: usize,
    rows: Vec<(usize, Vec<Rational>, Rational)>,
    inconsistent: bool,
}

impl Echelon {
    fn new(n: usize) -> Self {
        Echelon { n, rows: Vec::new(), inconsistent: false }
    }

    fn push(&mut self, mut row: Vec<Rational>, mut rhs: Rational) {
        for (p, prow, prhs) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let f = row[*p].clone();
            for (x, y) in row.iter_mut().zip(prow.iter()).skip(*p) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            rhs -= &f * prhs;
        }
        match row.iter().position(|x| !x.is_zero()) {
            None => {
                if !rhs.is_zero() {
                    self.inconsistent = true;
                }
            }
            Some(p) => {
                let inv = Rational::one() / &row[p];
                for x in row.iter_mut().skip(p) {
                    *x *= &inv;
                }
                rhs *= &inv;
                self.rows.push((p, row, rhs));
            }
        }
    }

    /// Particular solution (free variables zero) and a null-space basis.
    fn solve(&self) -> (Vec<Rational>, Vec<Vec<Rational>>) {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|(p, _, _)| *p);
        // Back-substitute to reduced form.
        for k in (0..rows.len()).rev() {
            let (p, prow, prhs) = rows[k].clone();
            for (_, row, rhs) in rows.iter_mut().take(k) {
                if row[p].is_zero() {
                    continue;
                }
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(prow.iter()).skip(p) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
                *rhs -= &f * &prhs;
            }
        }
        let pivots: Vec<usize> = rows.iter().map(|(p, _, _)| *p).collect();
        let free: Vec<usize> = (0..self.n).filter(|c| !pivots.contains(c)).collect();
        let mut particular = vec![Rational::zero(); self.n];
        for (p, _, rhs) in &rows {
            particular[*p] = rhs.clone();
        }
        let null = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.n];
                v[f] = Rational::one();
                for (p, row, _) in &rows {
                    v[*p] = -row[f].clone();
                }
                v
            })
            .collect();
        (particular, null)
    }
}

/// Adds the equations `Σ_t x_t P_t = rhs` coefficientwise.
fn add_polynomial_equations(ech: &mut Echelon, polys: &[Poly], rhs: &Poly) {
    let mut rows: BTreeMap<Mono, (Vec<Rational>, Rational)> = BTreeMap::new();
    let n = polys.len();
    for (t, p) in polys.iter().enumerate() {
        for (m, c) in p.terms() {
            let entry = rows.entry(m.clone()).or_insert_with(|| (vec![Rational::zero(); n], Rational::zero()));
            entry.0[t] += c.as_rational().expect("rational coefficients");
        }
    }
    for (m, c) in rhs.terms() {
        let entry = rows.entry(m.clone()).or_insert_with(|| (vec![Rational::zero(); n], Rational::zero()));
        entry.1 += c.as_rational().expect("rational coefficients");
    }
    for (_, (row, b)) in rows {
        ech.push(row, b);
    }
}

fn delta_inv_component(f: &RatFun) -> Result<RatFun> {
    let r = f.arity();
    let mut g = f.clone();
    for i in 0..r {
        g = g.div_linear(&crate::exactalg::unit(r, i))?;
    }
    g.div_linear(&vec![1; r])
}

/// The solution space of one block, in coordinates over `basis`.
struct BlockSolution {
    /// Particular solution for the constant `c_r = 1` (if one was requested).
    particular: Option<Vec<Rational>>,
    /// Basis of the homogeneous solutions.
    null: Vec<Vec<Rational>>,
    /// Exponent vectors of the unknown monomials.
    basis: Vec<Vec<u16>>,
}

/// Solves one block of the system.
fn solve_block(r: usize, weight: usize, with_constant: bool) -> Result<BlockSolution> {
    if weight < r {
        return Err(Error::Infeasible(format!("weight {weight} below depth {r}")));
    }
    let basis = monomials(r, (weight - r) as u16);
    let n = basis.len();
    let unknowns: Vec<Poly> = basis.iter().map(|e| Poly::from_terms(r, [(e.clone(), Scalar::one())])).collect();
    let mut homogeneous = Echelon::new(n);
    let mut inhomogeneous = Echelon::new(n);
    let zero = Poly::zero(r);
    // Alternality (of F, equivalently of Δ⁻¹F since u₁⋯u_r(u₁+⋯+u_r) is symmetric).
    for i in 1..r {
        let perms = maps::shuffles(i, r);
        let polys: Vec<Poly> = unknowns
            .iter()
            .map(|p| {
                let mut acc = Poly::zero(r);
                for perm in &perms {
                    acc.add_assign(&p.substitute(&maps::permutation(perm)).unwrap());
                }
                acc
            })
            .collect();
        add_polynomial_equations(&mut homogeneous, &polys, &zero);
        add_polynomial_equations(&mut inhomogeneous, &polys, &zero);
    }
    // Push-invariance (the Δ factor is push-invariant).
    let push = maps::push_u(r);
    let polys: Vec<Poly> = unknowns.iter().map(|p| p.sub(&p.substitute(&push).unwrap())).collect();
    add_polynomial_equations(&mut homogeneous, &polys, &zero);
    add_polynomial_equations(&mut inhomogeneous, &polys, &zero);
    // Circ-neutrality of swap(Δ⁻¹F) up to −r·c_r.
    let swap = maps::swap_u_to_v(r);
    let circ = maps::circ(r);
    let sums: Vec<RatFun> = unknowns
        .iter()
        .map(|p| {
            let s = delta_inv_component(&RatFun::from_poly(p.clone()))?.substitute(&swap)?;
            let rot = (0..r).map(|k| s.substitute(&circ.power(k))).collect::<Result<Vec<_>>>()?;
            Ok(RatFun::sum(r, rot))
        })
        .collect::<Result<_>>()?;
    let mut lcm: Vec<(LinearForm, u32)> = Vec::new();
    for s in &sums {
        for (f, m) in s.den() {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some(entry) => entry.1 = entry.1.max(*m),
                None => lcm.push((f.clone(), *m)),
            }
        }
    }
    let lift = |s: &RatFun| {
        let mut n = s.num().clone();
        for (f, m) in &lcm {
            let have = s.den().iter().find(|(g, _)| g == f).map(|(_, k)| *k).unwrap_or(0);
            for _ in have..*m {
                n = n.mul_linear(f.coeffs());
            }
        }
        n
    };
    let polys: Vec<Poly> = sums.iter().map(lift).collect();
    let mut den_poly = Poly::one(r);
    for (f, m) in &lcm {
        for _ in 0..*m {
            den_poly = den_poly.mul_linear(f.coeffs());
        }
    }
    add_polynomial_equations(&mut homogeneous, &polys, &zero);
    add_polynomial_equations(&mut inhomogeneous, &polys, &den_poly.scale_rational(&-qi(r as i64)));
    let (_, null) = homogeneous.solve();
    let particular = if with_constant {
        if inhomogeneous.inconsistent {
            return Err(Error::Infeasible(format!(
                "no alternal push-invariant mould in depth {r}, weight {weight} has the planted constant"
            )));
        }
        Some(inhomogeneous.solve().0)
    } else {
        None
    };
    Ok(BlockSolution { particular, null, basis })
}

/// Synthesizes `M` (a `u`-mould in ARI^Δ) such that `ΔM` is a polynomial
/// supported on the profile's blocks, `M` is alternal and push-invariant, and
/// `swap M + C` is circ-neutral for the planted constants `C`. The random
/// part (a combination of the homogeneous solutions with small integer
/// coefficients) is determined by `seed`.
pub fn synthesize_corrected_mould(profile: &SynthesisProfile, planted: &CorrectionSpec, seed: u64) -> Result<Mould> {
    let mut seen = std::collections::BTreeSet::new();
    for &(r, _) in &profile.blocks {
        if r < 1 || r > profile.max_depth || !seen.insert(r) {
            return Err(Error::Malformed(format!("invalid or repeated block depth {r}")));
        }
    }
    for (r, _) in planted.entries() {
        if !seen.contains(&r) {
            return Err(Error::Infeasible(format!("constant planted in depth {r} without a block")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comps = Vec::new();
    for &(r, w) in &profile.blocks {
        let c = planted.get(r);
        let BlockSolution { particular, null, basis } = solve_block(r, w, !c.is_zero())?;
        let mut coeffs: Vec<Scalar> = vec![Scalar::zero(); basis.len()];
        if let Some(p) = particular {
            for (k, x) in p.iter().enumerate() {
                coeffs[k] += &c.scale(x);
            }
        }
        for v in &null {
            let rho = loop {
                let k: i64 = rng.gen_range(-3..=3);
                if k != 0 {
                    break qi(k);
                }
            };
            for (k, x) in v.iter().enumerate() {
                coeffs[k] += &Scalar::monomial(ZetaMonomial::one(), &rho * x);
            }
        }
        let f = Poly::from_terms(r, basis.into_iter().zip(coeffs));
        comps.push((r, delta_inv_component(&RatFun::from_poly(f))?));
    }
    Ok(Mould::from_components(Side::U, profile.max_depth, Scalar::zero(), comps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(3, 4).len(), 15);
    }

    #[test]
    fn echelon_detects_inconsistency() {
        let mut e = Echelon::new(2);
        e.push(vec![qi(1), qi(1)], qi(1));
        e.push(vec![qi(2), qi(2)], qi(3));
        assert!(e.inconsistent);
    }

    #[test]
    fn echelon_solution_and_null_space() {
        let mut e = Echelon::new(3);
        e.push(vec![qi(1), qi(2), qi(0)], qi(4));
        e.push(vec![qi(0), qi(1), qi(1)], qi(1));
        let (p, null) = e.solve();
        assert_eq!(null.len(), 1);
        assert_eq!(&p[0] + qi(2) * &p[1], qi(4));
        let v = &null[0];
        assert_eq!(&v[0] + qi(2) * &v[1], qi(0));
        assert_eq!(&v[1] + &v[2], qi(0));
    }
}
