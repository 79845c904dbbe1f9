use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{LinearMap, RatFun, Scalar};

/// Which family of variables a mould is written in: the `u` variables of the
/// original mould or the `v` variables of its swap.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    U,
    V,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::U => "u",
            Side::V => "v",
        }
    }

    pub fn var(self) -> char {
        match self {
            Side::U => 'u',
            Side::V => 'v',
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::U => Side::V,
            Side::V => Side::U,
        }
    }
}

/// A mould truncated at `max_depth`: an empty-word value and one rational
/// function of `r` variables for every depth `1 ≤ r ≤ max_depth`. Absent
/// components are zero; depths beyond `max_depth` are undefined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mould {
    empty: Scalar,
    comps: BTreeMap<usize, RatFun>,
    max_depth: usize,
    side: Side,
}

impl Mould {
    /// The zero mould.
    pub fn zero(side: Side, max_depth: usize) -> Self {
        Mould { empty: Scalar::zero(), comps: BTreeMap::new(), max_depth, side }
    }

    /// The unit for `mu`: empty value 1, zero in every positive depth.
    pub fn unit(side: Side, max_depth: usize) -> Self {
        Mould { empty: Scalar::one(), ..Mould::zero(side, max_depth) }
    }

    /// Builds a mould from components; components beyond `max_depth` are dropped.
    pub fn from_components(
        side: Side,
        max_depth: usize,
        empty: Scalar,
        comps: impl IntoIterator<Item = (usize, RatFun)>,
    ) -> Self {
        let mut m = Mould { empty, ..Mould::zero(side, max_depth) };
        for (r, f) in comps {
            if r <= max_depth {
                m.set(r, f);
            }
        }
        m
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn empty_value(&self) -> &Scalar {
        &self.empty
    }

    pub fn set_empty_value(&mut self, s: Scalar) {
        self.empty = s;
    }

    /// Sets the depth-`r` component (which must have arity `r`).
    pub fn set(&mut self, r: usize, f: RatFun) {
        assert!(r >= 1, "depth 0 is the empty value");
        assert_eq!(f.arity(), r, "component arity must equal its depth");
        assert!(r <= self.max_depth, "depth {r} beyond truncation {}", self.max_depth);
        if f.is_zero() {
            self.comps.remove(&r);
        } else {
            self.comps.insert(r, f);
        }
    }

    /// The depth-`r` component (zero if absent). Panics beyond truncation.
    pub fn component(&self, r: usize) -> RatFun {
        assert!(r <= self.max_depth, "depth {r} beyond truncation {}", self.max_depth);
        if r == 0 {
            return RatFun::constant(0, self.empty.clone());
        }
        self.comps.get(&r).cloned().unwrap_or_else(|| RatFun::zero(r))
    }

    pub fn get(&self, r: usize) -> Option<&RatFun> {
        self.comps.get(&r)
    }

    /// Nonzero components in increasing depth.
    pub fn components(&self) -> impl Iterator<Item = (usize, &RatFun)> {
        self.comps.iter().map(|(r, f)| (*r, f))
    }

    /// Smallest depth ≥ 1 with a nonzero component.
    pub fn min_depth(&self) -> Option<usize> {
        self.comps.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.empty.is_zero() && self.comps.is_empty()
    }

    /// Lowers the truncation bound.
    pub fn truncate(&self, max_depth: usize) -> Mould {
        let d = max_depth.min(self.max_depth);
        Mould {
            empty: self.empty.clone(),
            comps: self.comps.range(..=d).map(|(r, f)| (*r, f.clone())).collect(),
            max_depth: d,
            side: self.side,
        }
    }

    /// The same data reinterpreted on the other side (no substitution).
    pub(crate) fn relabel(mut self, side: Side) -> Mould {
        self.side = side;
        self
    }

    pub(crate) fn expect_side(&self, side: Side) -> Result<()> {
        if self.side != side {
            return Err(Error::SideMismatch { expected: side.name(), found: self.side.name() });
        }
        Ok(())
    }

    pub(crate) fn expect_u(&self) -> Result<()> {
        self.expect_side(Side::U)
    }

    pub(crate) fn same_side(&self, other: &Mould) -> Result<()> {
        other.expect_side(self.side)
    }

    /// Applies `f` to every depth `1..=max_depth` (including zero components).
    pub fn map_depths(&self, f: impl Fn(usize, &RatFun) -> Result<RatFun>) -> Result<Mould> {
        let mut out = Mould { empty: self.empty.clone(), ..Mould::zero(self.side, self.max_depth) };
        for r in 1..=self.max_depth {
            out.set(r, f(r, &self.component(r))?);
        }
        Ok(out)
    }

    /// Applies `f` to the nonzero components only (for linear maps sending 0 to 0).
    pub fn map_components(&self, f: impl Fn(usize, &RatFun) -> Result<RatFun>) -> Result<Mould> {
        let mut out = Mould { empty: self.empty.clone(), ..Mould::zero(self.side, self.max_depth) };
        for (r, g) in &self.comps {
            out.set(*r, f(*r, g)?);
        }
        Ok(out)
    }

    /// Substitutes the depth-`r` component by `maps(r)`.
    pub fn substitute(&self, maps: impl Fn(usize) -> LinearMap) -> Result<Mould> {
        self.map_components(|r, f| f.substitute(&maps(r)))
    }

    pub fn add(&self, other: &Mould) -> Result<Mould> {
        self.same_side(other)?;
        let d = self.max_depth.min(other.max_depth);
        let mut out = Mould { empty: &self.empty + &other.empty, ..Mould::zero(self.side, d) };
        for r in 1..=d {
            match (self.comps.get(&r), other.comps.get(&r)) {
                (Some(a), Some(b)) => out.set(r, a.add(b)),
                (Some(a), None) => out.set(r, a.clone()),
                (None, Some(b)) => out.set(r, b.clone()),
                (None, None) => {}
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Mould) -> Result<Mould> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mould {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, s: &Scalar) -> Mould {
        Mould {
            empty: &self.empty * s,
            comps: self
                .comps
                .iter()
                .map(|(r, f)| (*r, f.scale(s)))
                .filter(|(_, f)| !f.is_zero())
                .collect(),
            max_depth: self.max_depth,
            side: self.side,
        }
    }

    /// Sum of many moulds of the same side.
    pub fn sum<'a>(side: Side, max_depth: usize, items: impl IntoIterator<Item = &'a Mould>) -> Result<Mould> {
        let mut acc = Mould::zero(side, max_depth);
        for m in items {
            acc = acc.add(m)?;
        }
        Ok(acc)
    }

    /// Exact equality at every depth up to the smaller truncation.
    pub fn equals(&self, other: &Mould) -> bool {
        if self.side != other.side || self.empty != other.empty {
            return false;
        }
        let d = self.max_depth.min(other.max_depth);
        (1..=d).all(|r| self.component(r).equals(&other.component(r)).unwrap_or(false))
    }

    /// Canonical text: one line per nonzero depth.
    pub fn render(&self) -> String {
        let mut lines = Vec::new();
        if !self.empty.is_zero() {
            lines.push(format!("depth 0: {}", self.empty));
        }
        for r in 1..=self.max_depth {
            let f = self.component(r);
            lines.push(format!("depth {r}: {}", f.render(self.side.var())));
        }
        lines.join("\n")
    }
}

impl fmt::Display for Mould {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
