//! The coefficient ring ℚ[ζ₃, ζ₅, ζ₇, …] with the odd zeta values treated as
//! free commutative symbols.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational numbers.
pub type Rational = BigRational;

/// Builds the rational `n/d`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A monomial in the zeta symbols: sorted `(index, exponent)` pairs with
/// positive exponents. The empty monomial is `1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ZetaMonomial(Vec<(u32, u32)>);

impl ZetaMonomial {
    pub fn one() -> Self {
        ZetaMonomial(Vec::new())
    }

    /// The symbol ζ(k). Only odd `k ≥ 3` are meaningful in this ring.
    pub fn zeta(k: u32) -> Self {
        assert!(k >= 3 && k % 2 == 1, "zeta symbols exist only for odd k >= 3, got {k}");
        ZetaMonomial(vec![(k, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    /// Builds a monomial from arbitrary `(index, exponent)` pairs.
    pub fn from_factors(factors: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut m = ZetaMonomial::one();
        for (k, e) in factors {
            if e > 0 {
                m = m.mul(&ZetaMonomial(vec![(k, e)]));
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        ZetaMonomial(out)
    }
}

impl fmt::Display for ZetaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (n, (k, e)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "z{k}")?;
            } else {
                write!(f, "z{k}^{e}")?;
            }
        }
        Ok(())
    }
}

/// An element of ℚ[ζ₃, ζ₅, …]: a sorted list of zeta monomials with nonzero
/// rational coefficients. The zero scalar is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Scalar {
    terms: Vec<(ZetaMonomial, Rational)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Scalar::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::monomial(ZetaMonomial::one(), r)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(qi(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::from_rational(q(n, d))
    }

    /// The symbol ζ(k) for odd `k ≥ 3`.
    pub fn zeta(k: u32) -> Self {
        Scalar::monomial(ZetaMonomial::zeta(k), Rational::one())
    }

    pub fn monomial(m: ZetaMonomial, c: Rational) -> Self {
        if c.is_zero() {
            Scalar::zero()
        } else {
            Scalar { terms: vec![(m, c)] }
        }
    }

    /// Builds a scalar from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (ZetaMonomial, Rational)>) -> Self {
        let mut acc = Scalar::zero();
        for (m, c) in terms {
            acc += &Scalar::monomial(m, c);
        }
        acc
    }

    pub fn terms(&self) -> &[(ZetaMonomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Returns the value if the scalar involves no zeta symbol.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Multiplies by a rational number.
    pub fn scale(&self, r: &Rational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    fn merge(&self, other: &Scalar, negate_other: bool) -> Scalar {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &Rational| if negate_other { -c } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Less => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((mb.clone(), sign(cb)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Scalar { terms: out }
    }

    fn add_in_place(&mut self, other: &Scalar, negate_other: bool) {
        // Fast path: both purely rational.
        if self.terms.len() == 1
            && other.terms.len() == 1
            && self.terms[0].0 == other.terms[0].0
        {
            if negate_other {
                self.terms[0].1 -= &other.terms[0].1;
            } else {
                self.terms[0].1 += &other.terms[0].1;
            }
            if self.terms[0].1.is_zero() {
                self.terms.clear();
            }
            return;
        }
        *self = self.merge(other, negate_other);
    }

    fn mul_ref(&self, other: &Scalar) -> Scalar {
        if self.terms.len() == 1 && other.terms.len() == 1 {
            let (ma, ca) = &self.terms[0];
            let (mb, cb) = &other.terms[0];
            return Scalar { terms: vec![(ma.mul(mb), ca * cb)] };
        }
        let mut acc = Scalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc += &Scalar::monomial(ma.mul(mb), ca * cb);
            }
        }
        acc
    }

    /// Renders the scalar as a multiplicative prefix for a monomial, e.g.
    /// `(1/12)*`, `z3*`, `-`, `(z3 + z5)*`. Returns `(negative, text)` where
    /// `text` is empty for a unit coefficient.
    pub(crate) fn coefficient_prefix(&self) -> (bool, String) {
        match self.terms.as_slice() {
            [(m, c)] => {
                let neg = c.is_negative();
                let a = c.abs();
                let mut s = String::new();
                if !a.is_one() {
                    if a.is_integer() {
                        s.push_str(&format!("{}*", a.numer()));
                    } else {
                        s.push_str(&format!("({}/{})*", a.numer(), a.denom()));
                    }
                }
                if !m.is_one() {
                    s.push_str(&format!("{m}*"));
                }
                (neg, s)
            }
            _ => (false, format!("({self})*")),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let rat = if a.is_integer() {
                format!("{}", a.numer())
            } else {
                format!("{}/{}", a.numer(), a.denom())
            };
            if m.is_one() {
                write!(f, "{rat}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else if a.is_integer() {
                write!(f, "{rat}*{m}")?;
            } else {
                write!(f, "({rat})*{m}")?;
            }
        }
        Ok(())
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.add_in_place(rhs, false);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.add_in_place(rhs, true);
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.merge(rhs, false)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.merge(rhs, true)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_product_is_free_monomial() {
        let p = &Scalar::zeta(3) * &Scalar::zeta(5);
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].0, ZetaMonomial::from_factors([(3, 1), (5, 1)]));
        assert!(p.terms()[0].1.is_one());
    }

    #[test]
    fn halves_add_to_one() {
        assert!((&Scalar::frac(1, 2) + &Scalar::frac(1, 2)).is_one());
    }

    #[test]
    fn third_of_zeta_times_three() {
        let c3 = Scalar::zeta(3).scale(&q(1, 3));
        assert_eq!(&c3 * &Scalar::from_int(3), Scalar::zeta(3));
    }

    #[test]
    fn cancellation_leaves_empty_map() {
        let s = &(&Scalar::zeta(3) + &Scalar::one()) - &Scalar::zeta(3);
        assert!(s.is_one());
        assert!((&s - &Scalar::one()).is_zero());
    }

    #[test]
    fn display_forms() {
        let s = &Scalar::frac(-1, 2) + &Scalar::zeta(3).scale(&q(1, 3));
        assert_eq!(s.to_string(), "-1/2 + (1/3)*z3");
        assert_eq!((&Scalar::zeta(3) * &Scalar::zeta(3)).to_string(), "z3^2");
    }
}
