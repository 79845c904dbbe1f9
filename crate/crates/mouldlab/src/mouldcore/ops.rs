//! The elementary mould operators.

use crate::error::{Error, Result};
use crate::exactalg::{RatFun, Scalar};

use super::maps;
use super::mould::{Mould, Side};

fn all_ones(r: usize) -> Vec<i64> {
    vec![1; r]
}

/// Multiplies the depth-`r` component by `u_1⋯u_r`.
pub fn dar(a: &Mould) -> Result<Mould> {
    a.expect_side(Side::U)?;
    a.map_components(|r, f| {
        let mut g = f.clone();
        for i in 0..r {
            g = g.mul_linear(&crate::exactalg::unit(r, i));
        }
        Ok(g)
    })
}

/// Divides the depth-`r` component by `u_1⋯u_r`.
pub fn dar_inv(a: &Mould) -> Result<Mould> {
    a.expect_side(Side::U)?;
    a.map_components(|r, f| {
        let mut g = f.clone();
        for i in 0..r {
            g = g.div_linear(&crate::exactalg::unit(r, i))?;
        }
        Ok(g)
    })
}

/// Multiplies the depth-`r` component by `u_1+⋯+u_r`.
pub fn dur(a: &Mould) -> Result<Mould> {
    a.expect_side(Side::U)?;
    a.map_components(|r, f| Ok(f.mul_linear(&all_ones(r))))
}

/// Divides the depth-`r` component by `u_1+⋯+u_r`.
pub fn dur_inv(a: &Mould) -> Result<Mould> {
    a.expect_side(Side::U)?;
    a.map_components(|r, f| f.div_linear(&all_ones(r)))
}

/// `Δ = dar·dur`.
pub fn delta(a: &Mould) -> Result<Mould> {
    dur(&dar(a)?)
}

/// `Δ⁻¹ = dar⁻¹·dur⁻¹`.
pub fn delta_inv(a: &Mould) -> Result<Mould> {
    dur_inv(&dar_inv(a)?)
}

fn reduce_power(power: i64, order: usize) -> usize {
    power.rem_euclid(order as i64) as usize
}

/// `push_u` iterated `power` times (negative powers invert).
pub fn push_u(a: &Mould, power: i64) -> Result<Mould> {
    a.expect_side(Side::U)?;
    a.substitute(|r| maps::push_u(r).power(reduce_power(power, r + 1)))
}

/// `push_v` iterated `power` times (negative powers invert).
pub fn push_v(b: &Mould, power: i64) -> Result<Mould> {
    b.expect_side(Side::V)?;
    b.substitute(|r| maps::push_v(r).power(reduce_power(power, r + 1)))
}

/// Cyclic rotation of the `v` variables iterated `power` times.
pub fn circ(b: &Mould, power: i64) -> Result<Mould> {
    b.expect_side(Side::V)?;
    b.substitute(|r| maps::circ(r).power(reduce_power(power, r)))
}

/// The swap, taking `u`-moulds to `v`-moulds and back; an involution.
pub fn swap(a: &Mould) -> Result<Mould> {
    let out = match a.side() {
        Side::U => a.substitute(maps::swap_u_to_v)?,
        Side::V => a.substitute(maps::swap_v_to_u)?,
    };
    Ok(out.relabel(a.side().flip()))
}

/// The Fay operator, applied depthwise; in depth 1 it is `B(u₁)+B(−u₁)`.
pub fn fay(b: &Mould) -> Result<Mould> {
    b.expect_side(Side::U)?;
    let mut out = b.map_components(|r, f| {
        let terms = maps::fay_terms(r)
            .iter()
            .map(|m| f.substitute(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(RatFun::sum(r, terms))
    })?;
    out.set_empty_value(Scalar::zero());
    Ok(out)
}

/// `mu(A,B)(u₁…u_r) = Σ_{i=0}^{r} A(u₁…u_i) B(u_{i+1}…u_r)`.
pub fn mu(a: &Mould, b: &Mould) -> Result<Mould> {
    a.same_side(b)?;
    let d = a.max_depth().min(b.max_depth());
    let mut out = Mould::zero(a.side(), d);
    out.set_empty_value(a.empty_value() * b.empty_value());
    for r in 1..=d {
        let mut terms = Vec::new();
        for i in 0..=r {
            let ai = a.component(i);
            let bi = b.component(r - i);
            if ai.is_zero() || bi.is_zero() {
                continue;
            }
            let left = if i == 0 {
                RatFun::constant(r, a.empty_value().clone())
            } else {
                ai.embed(0, r)
            };
            let right = if i == r {
                RatFun::constant(r, b.empty_value().clone())
            } else {
                bi.embed(i, r)
            };
            terms.push(left.mul(&right));
        }
        out.set(r, RatFun::sum(r, terms));
    }
    Ok(out)
}

/// `lu(A,B) = mu(A,B) − mu(B,A)`.
pub fn lu(a: &Mould, b: &Mould) -> Result<Mould> {
    mu(a, b)?.sub(&mu(b, a)?)
}

/// The shuffle sum `A(sh((x₁…x_i),(x_{i+1}…x_r)))` of a depth-`r` function.
pub fn shuffle_sum(f: &RatFun, i: usize) -> Result<RatFun> {
    let r = f.arity();
    let terms = maps::shuffles(i, r)
        .iter()
        .map(|p| f.substitute(&maps::permutation(p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatFun::sum(r, terms))
}

/// An element `q·a + M` of the extension of ARI by the formal generator `a`,
/// with bracket rule `lu(Q, a) = dur Q`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MouldA {
    pub a_coeff: Scalar,
    pub body: Mould,
}

impl MouldA {
    pub fn from_mould(body: Mould) -> Self {
        MouldA { a_coeff: Scalar::zero(), body }
    }

    /// The generator `a` itself.
    pub fn generator(max_depth: usize) -> Self {
        MouldA { a_coeff: Scalar::one(), body: Mould::zero(Side::U, max_depth) }
    }

    pub fn max_depth(&self) -> usize {
        self.body.max_depth()
    }

    pub fn add(&self, other: &MouldA) -> Result<MouldA> {
        Ok(MouldA { a_coeff: &self.a_coeff + &other.a_coeff, body: self.body.add(&other.body)? })
    }

    pub fn sub(&self, other: &MouldA) -> Result<MouldA> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> MouldA {
        MouldA { a_coeff: &self.a_coeff * s, body: self.body.scale(s) }
    }

    pub fn is_zero(&self) -> bool {
        self.a_coeff.is_zero() && self.body.is_zero()
    }

    pub fn equals(&self, other: &MouldA) -> bool {
        self.a_coeff == other.a_coeff && self.body.equals(&other.body)
    }

    /// `lu(p·a + M, q·a + N) = lu(M,N) + q·dur M − p·dur N`.
    pub fn lu(&self, other: &MouldA) -> Result<MouldA> {
        if self.body.side() != Side::U || other.body.side() != Side::U {
            return Err(Error::SideMismatch { expected: "u", found: "v" });
        }
        let mut body = lu(&self.body, &other.body)?;
        if !other.a_coeff.is_zero() {
            body = body.add(&dur(&self.body)?.scale(&other.a_coeff))?;
        }
        if !self.a_coeff.is_zero() {
            body = body.sub(&dur(&other.body)?.scale(&self.a_coeff))?;
        }
        Ok(MouldA::from_mould(body))
    }

    pub fn render(&self) -> String {
        if self.a_coeff.is_zero() {
            self.body.render()
        } else {
            format!("a-coefficient: {}\n{}", self.a_coeff, self.body.render())
        }
    }
}

impl From<Mould> for MouldA {
    fn from(m: Mould) -> Self {
        MouldA::from_mould(m)
    }
}
