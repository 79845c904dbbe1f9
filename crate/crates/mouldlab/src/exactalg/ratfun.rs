//! Rational functions whose denominators are products of integer linear forms.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::poly::{LinearForm, LinearMap, Poly};
use super::scalar::{Rational, Scalar};
use crate::error::{Error, Result};

/// `num / Π den`, with the denominator a multiset of normalized linear forms
/// stored as sorted `(form, multiplicity)` pairs. After construction no
/// denominator form divides the numerator, and zero has an empty denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFun {
    num: Poly,
    den: Vec<(LinearForm, u32)>,
}

fn merge_den(a: &[(LinearForm, u32)], b: &[(LinearForm, u32)], combine: fn(u32, u32) -> u32) -> Vec<(LinearForm, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push((a[i].0.clone(), combine(a[i].1, 0)));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0.clone(), combine(0, b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0.clone(), combine(a[i].1, b[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    out.retain(|(_, m)| *m > 0);
    out
}

fn multiplicity(den: &[(LinearForm, u32)], f: &LinearForm) -> u32 {
    den.binary_search_by(|(g, _)| g.cmp(f)).map(|i| den[i].1).unwrap_or(0)
}

impl RatFun {
    pub fn zero(arity: usize) -> Self {
        RatFun { num: Poly::zero(arity), den: Vec::new() }
    }

    pub fn one(arity: usize) -> Self {
        RatFun::from_poly(Poly::one(arity))
    }

    pub fn constant(arity: usize, c: Scalar) -> Self {
        RatFun::from_poly(Poly::constant(arity, c))
    }

    pub fn from_poly(num: Poly) -> Self {
        RatFun { num, den: Vec::new() }
    }

    /// Builds `num / Π forms`, normalizing every form and cancelling.
    pub fn new(num: Poly, forms: &[Vec<i64>]) -> Result<Self> {
        let mut r = RatFun::from_poly(num);
        for f in forms {
            r = r.div_linear(f)?;
        }
        Ok(r)
    }

    pub fn arity(&self) -> usize {
        self.num.arity()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &[(LinearForm, u32)] {
        &self.den
    }

    /// Denominator forms listed with repetition.
    pub fn den_forms(&self) -> Vec<LinearForm> {
        self.den
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f.clone(), *m as usize))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_empty().then_some(&self.num)
    }

    /// Returns the value if the rational function is a constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Cancels denominator forms dividing the numerator until none does.
    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let mut kept = Vec::with_capacity(self.den.len());
        for (f, m) in std::mem::take(&mut self.den) {
            let mut left = m;
            while left > 0 {
                match self.num.divide_by_linear_form(&f) {
                    Some(q) => {
                        self.num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                kept.push((f, left));
            }
        }
        self.den = kept;
        self
    }

    /// Divides by the (unnormalized, nonzero) linear form with the given coefficients.
    pub fn div_linear(&self, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() != self.arity() {
            return Err(Error::ArityMismatch(coeffs.len(), self.arity()));
        }
        let (form, k) = LinearForm::normalize(coeffs).ok_or(Error::DenominatorVanishes)?;
        if self.is_zero() {
            return Ok(self.clone());
        }
        let num = self.num.scale_rational(&Rational::new(BigInt::one(), BigInt::from(k)));
        if let Some(q) = num.divide_by_linear_form(&form) {
            return Ok(RatFun { num: q, den: self.den.clone() });
        }
        let den = merge_den(&self.den, &[(form, 1)], |a, b| a + b);
        Ok(RatFun { num, den })
    }

    /// Multiplies by the linear polynomial with the given coefficients.
    pub fn mul_linear(&self, coeffs: &[i64]) -> Self {
        RatFun { num: self.num.mul_linear(coeffs), den: self.den.clone() }.normalized()
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return RatFun::zero(self.arity());
        }
        RatFun { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        RatFun { num: self.num.mul(p), den: self.den.clone() }.normalized()
    }

    pub fn mul(&self, other: &RatFun) -> Self {
        assert_eq!(self.arity(), other.arity(), "arity mismatch");
        if self.is_zero() || other.is_zero() {
            return RatFun::zero(self.arity());
        }
        let num = self.num.mul(&other.num);
        let den = merge_den(&self.den, &other.den, |a, b| a + b);
        // Only forms contributed by one factor can cancel against the other.
        RatFun { num, den }.normalized()
    }

    pub fn try_add(&self, other: &RatFun) -> Result<Self> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch(self.arity(), other.arity()));
        }
        Ok(self.add(other))
    }

    pub fn add(&self, other: &RatFun) -> Self {
        RatFun::sum(self.arity(), [self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &RatFun) -> Self {
        RatFun::sum(self.arity(), [self.clone(), other.neg()])
    }

    /// Sum of many rational functions over their least common denominator.
    pub fn sum(arity: usize, items: impl IntoIterator<Item = RatFun>) -> Self {
        let items: Vec<RatFun> = items.into_iter().filter(|t| !t.is_zero()).collect();
        for t in &items {
            assert_eq!(t.arity(), arity, "arity mismatch");
        }
        match items.len() {
            0 => return RatFun::zero(arity),
            1 => return items.into_iter().next().unwrap(),
            _ => {}
        }
        let mut lcm: Vec<(LinearForm, u32)> = Vec::new();
        for t in &items {
            lcm = merge_den(&lcm, &t.den, |a, b| a.max(b));
        }
        let mut num = Poly::zero(arity);
        for t in items {
            let mut n = t.num;
            for (f, m) in &lcm {
                let missing = m - multiplicity(&t.den, f);
                for _ in 0..missing {
                    n = n.mul_linear(f.coeffs());
                }
            }
            num.add_assign(&n);
        }
        RatFun { num, den: lcm }.normalized()
    }

    /// Exact equality by cross-multiplication over the common denominator.
    pub fn equals(&self, other: &RatFun) -> Result<bool> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch(self.arity(), other.arity()));
        }
        let lcm = merge_den(&self.den, &other.den, |a, b| a.max(b));
        let lift = |t: &RatFun| {
            let mut n = t.num.clone();
            for (f, m) in &lcm {
                for _ in 0..(m - multiplicity(&t.den, f)) {
                    n = n.mul_linear(f.coeffs());
                }
            }
            n
        };
        Ok(lift(self) == lift(other))
    }

    /// Reinterprets the function in `arity` variables with `x_i ↦ x_{i+offset}`.
    pub fn embed(&self, offset: usize, arity: usize) -> Self {
        RatFun {
            num: self.num.embed(offset, arity),
            den: self.den.iter().map(|(f, m)| (f.embed(offset, arity), *m)).collect(),
        }
    }

    /// Exact composition with a linear substitution.
    pub fn substitute(&self, map: &LinearMap) -> Result<Self> {
        let mut num = self.num.substitute(map)?;
        if num.is_zero() {
            // Still check denominators to report illegal specializations.
            for (f, _) in &self.den {
                if LinearForm::normalize(&f.substitute(map)).is_none() {
                    return Err(Error::DenominatorVanishes);
                }
            }
            return Ok(RatFun::zero(map.out_arity));
        }
        let mut den: Vec<(LinearForm, u32)> = Vec::new();
        let mut factor = BigInt::one();
        for (f, m) in &self.den {
            let (g, k) = LinearForm::normalize(&f.substitute(map)).ok_or(Error::DenominatorVanishes)?;
            factor *= BigInt::from(k).pow(*m);
            den = merge_den(&den, &[(g, *m)], |a, b| a + b);
        }
        if !factor.is_one() {
            num = num.scale_rational(&Rational::new(BigInt::one(), factor));
        }
        Ok(RatFun { num, den }.normalized())
    }

    /// Canonical rendering, e.g. `(u1 - u2)/(12*u1*u2)`.
    pub fn render(&self, var: char) -> String {
        if self.den.is_empty() {
            return self.num.render(var);
        }
        let mut num = self.num.clone();
        let mut den_parts = Vec::new();
        if let Some(l) = num.rational_denominator_lcm() {
            if !l.is_one() {
                num = num.scale_rational(&Rational::from_integer(l.clone()));
                den_parts.push(l.to_string());
            }
        }
        let mut forms: Vec<&(LinearForm, u32)> = self.den.iter().collect();
        forms.sort_by_key(|(f, _)| {
            let support = f.coeffs().iter().filter(|&&c| c != 0).count();
            (support, std::cmp::Reverse(f.coeffs().to_vec()))
        });
        for (f, m) in forms {
            let body = f.render(var);
            let nonzero = f.coeffs().iter().filter(|&&c| c != 0).count();
            let atom = if nonzero > 1 { format!("({body})") } else { body };
            if *m == 1 {
                den_parts.push(atom);
            } else {
                den_parts.push(format!("{atom}^{m}"));
            }
        }
        let ns = num.render(var);
        let ns = if num.num_terms() > 1 || ns.starts_with('-') { format!("({ns})") } else { ns };
        format!("{ns}/({})", den_parts.join("*"))
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render('u'))
    }
}
