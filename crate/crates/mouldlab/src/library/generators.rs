//! Seeded generators for test instances: random polynomial and `ARI^Δ`
//! moulds, the even-in-depth-1 family used as `R` in the correction
//! formula, and the strict family of iterated `Dari` brackets of the
//! depth-1 moulds `U_{2i}`.

use rand::Rng;

use crate::error::Result;
use crate::exactalg::{q, Poly, RatFun, Scalar};
use crate::flexion::dari_bracket;
use crate::mouldcore::{dar, delta_inv, Mould, Side};

use super::builders::build_u;

/// A small nonzero rational `n/d` with `|n| ≤ 4`, `1 ≤ d ≤ 3`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let n: i64 = rng.gen_range(-4..=4);
        if n != 0 {
            let d: i64 = rng.gen_range(1..=3);
            return Scalar::from_rational(q(n, d));
        }
    }
}

/// A random polynomial in `arity` variables with up to `terms` monomials of
/// total degree at most `max_degree`. With `parity = Some(p)` only monomials
/// of degree `≡ p (mod 2)` are drawn.
pub fn random_poly<R: Rng>(rng: &mut R, arity: usize, max_degree: u16, terms: usize, parity: Option<u16>) -> Poly {
    let mut p = Poly::zero(arity);
    for _ in 0..terms {
        let mut left = loop {
            let d = rng.gen_range(0..=max_degree);
            if parity.is_none_or(|par| d % 2 == par) {
                break d;
            }
        };
        let mut exps = vec![0u16; arity];
        if arity > 0 {
            while left > 0 {
                exps[rng.gen_range(0..arity)] += 1;
                left -= 1;
            }
        }
        p.add_assign(&Poly::from_terms(arity, [(exps, random_rational(rng))]));
    }
    p
}

/// A random polynomial mould with zero empty value and components in depths
/// `1..=max_depth`.
pub fn random_poly_mould<R: Rng>(rng: &mut R, side: Side, max_depth: usize, max_degree: u16, terms: usize) -> Mould {
    let comps: Vec<_> = (1..=max_depth)
        .map(|r| (r, RatFun::from_poly(random_poly(rng, r, max_degree, terms, None))))
        .collect();
    Mould::from_components(side, max_depth, Scalar::zero(), comps)
}

/// `Δ⁻¹` of a random polynomial mould: a random element of `ARI^Δ`.
pub fn random_ari_delta_mould<R: Rng>(rng: &mut R, max_depth: usize, max_degree: u16, terms: usize) -> Result<Mould> {
    delta_inv(&random_poly_mould(rng, Side::U, max_depth, max_degree, terms))
}

/// `R = dar Q` for a random polynomial mould `Q` whose depth-1 part is odd,
/// so that `R` is even in depth 1.
pub fn random_even_depth1_mould<R: Rng>(rng: &mut R, max_depth: usize, max_degree: u16, terms: usize) -> Result<Mould> {
    let mut q = random_poly_mould(rng, Side::U, max_depth, max_degree, terms);
    if max_depth >= 1 {
        let odd = random_poly(rng, 1, max_degree.max(1), terms, Some(1));
        q.set(1, RatFun::from_poly(odd));
    }
    dar(&q)
}

/// One member of the strict test family.
#[derive(Clone, Debug)]
pub struct BracketInstance {
    /// Bracket expression, e.g. `[U4,[U4,U6]]`.
    pub label: String,
    /// Polynomial degree of the bracket (the depth-graded weight of `N`).
    pub degree: u32,
    /// The bracket `N` itself.
    pub n: Mould,
}

/// All nonzero right-nested brackets `[U_{a₁},[U_{a₂},…,[U_{a_{k−1}},U_{a_k}]]]`
/// of `U₂,…,U_8` with `2 ≤ k ≤ max_depth` and polynomial degree at most
/// `max_degree`, in a canonical order (by depth, then label). Scalar
/// multiples of an earlier member are skipped.
pub fn dari_bracket_family(max_depth: usize, max_degree: u32) -> Result<Vec<BracketInstance>> {
    let gens: Vec<(String, u32, Mould)> = [2u32, 4, 6, 8]
        .iter()
        .map(|&k| (format!("U{k}"), k, build_u(k, max_depth)))
        .collect();
    let mut level: Vec<(String, u32, Mould)> = gens.clone();
    let mut out: Vec<BracketInstance> = Vec::new();
    for _ in 2..=max_depth {
        let mut next = Vec::new();
        for (gl, gd, g) in &gens {
            for (xl, xd, x) in &level {
                let degree = gd + xd - 1;
                if degree > max_degree || (xl.starts_with('U') && gl >= xl) {
                    continue;
                }
                let n = dari_bracket(g, x)?;
                if n.is_zero() || out.iter().any(|b| b.degree == degree && proportional(&b.n, &n)) {
                    continue;
                }
                let label = format!("[{gl},{xl}]");
                out.push(BracketInstance { label: label.clone(), degree, n: n.clone() });
                next.push((label, degree, n));
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    Ok(out)
}

/// Whether `b = λ·a` for some rational `λ` (both nonzero).
fn proportional(a: &Mould, b: &Mould) -> bool {
    let Some(d) = a.min_depth() else { return false };
    if b.min_depth() != Some(d) {
        return false;
    }
    let (fa, fb) = (a.component(d), b.component(d));
    let (Some(pa), Some(pb)) = (fa.num().terms().next(), fb.num().terms().next()) else {
        return false;
    };
    let (Some(ca), Some(cb)) = (pa.1.as_rational(), pb.1.as_rational()) else {
        return false;
    };
    if fa.den() != fb.den() {
        return false;
    }
    a.scale(&Scalar::from_rational(cb / ca)).equals(b)
}
