//! Sparse multivariate polynomials over [`Scalar`], integer linear forms and
//! linear substitutions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::scalar::{qi, Rational, Scalar};
use crate::error::{Error, Result};

/// An exponent vector. Ordered graded-lexicographically: higher total degree
/// is greater; ties are broken by comparing exponents from the first variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub SmallVec<[u16; 8]>);

impl Mono {
    pub fn one(arity: usize) -> Self {
        Mono(SmallVec::from_elem(0, arity))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A normalized nonzero integer linear form: content 1 and first nonzero
/// coefficient positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LinearForm(Vec<i64>);

impl LinearForm {
    /// Normalizes `coeffs`, returning the form and the integer factor `k`
    /// with `coeffs = k · form`. Returns `None` for the zero vector.
    pub fn normalize(coeffs: &[i64]) -> Option<(LinearForm, i64)> {
        let mut g: i64 = 0;
        for &c in coeffs {
            g = g.gcd(&c);
        }
        if g == 0 {
            return None;
        }
        let first = coeffs.iter().find(|&&c| c != 0).copied().unwrap();
        let k = if first < 0 { -g } else { g };
        Some((LinearForm(coeffs.iter().map(|c| c / k).collect()), k))
    }

    /// Builds a form, panicking if the vector is zero or not normalized.
    pub fn new(coeffs: Vec<i64>) -> Self {
        let (f, k) = LinearForm::normalize(&coeffs).expect("zero linear form");
        assert_eq!(k, 1, "linear form {coeffs:?} is not normalized");
        f
    }

    /// The form `x_{from+1} + … + x_{to}` (0-based half-open `from..to`).
    pub fn partial_sum(arity: usize, from: usize, to: usize) -> Self {
        let mut v = vec![0; arity];
        for c in &mut v[from..to] {
            *c = 1;
        }
        LinearForm::new(v)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Image under a linear substitution, unnormalized.
    pub fn substitute(&self, map: &LinearMap) -> Vec<i64> {
        let mut out = vec![0; map.out_arity];
        for (i, &c) in self.0.iter().enumerate() {
            if c != 0 {
                for (o, &m) in out.iter_mut().zip(map.images[i].iter()) {
                    *o += c * m;
                }
            }
        }
        out
    }

    pub(crate) fn embed(&self, offset: usize, arity: usize) -> LinearForm {
        let mut v = vec![0; arity];
        v[offset..offset + self.0.len()].copy_from_slice(&self.0);
        LinearForm(v)
    }

    pub fn render(&self, var: char) -> String {
        render_linear(&self.0, var)
    }
}

fn render_linear(coeffs: &[i64], var: char) -> String {
    let mut s = String::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else { "+" };
        if s.is_empty() {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        if c.abs() != 1 {
            s.push_str(&format!("{}*", c.abs()));
        }
        s.push_str(&format!("{var}{}", i + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// A linear substitution `x_i ↦ Σ_j images[i][j] y_j` from `images.len()`
/// input variables to `out_arity` output variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap {
    pub out_arity: usize,
    pub images: Vec<Vec<i64>>,
}

impl LinearMap {
    pub fn new(out_arity: usize, images: Vec<Vec<i64>>) -> Self {
        assert!(images.iter().all(|v| v.len() == out_arity));
        LinearMap { out_arity, images }
    }

    pub fn identity(r: usize) -> Self {
        LinearMap::new(r, (0..r).map(|i| unit(r, i)).collect())
    }

    pub fn in_arity(&self) -> usize {
        self.images.len()
    }

    /// The substitution obtained by applying `self` and then substituting the
    /// variables of the result according to `next`.
    pub fn then(&self, next: &LinearMap) -> LinearMap {
        assert_eq!(self.out_arity, next.in_arity());
        let images = self
            .images
            .iter()
            .map(|row| {
                let mut out = vec![0; next.out_arity];
                for (j, &c) in row.iter().enumerate() {
                    if c != 0 {
                        for (o, &m) in out.iter_mut().zip(next.images[j].iter()) {
                            *o += c * m;
                        }
                    }
                }
                out
            })
            .collect();
        LinearMap::new(next.out_arity, images)
    }

    /// `self` applied `k` times (k ≥ 0); requires a square map.
    pub fn power(&self, k: usize) -> LinearMap {
        let mut acc = LinearMap::identity(self.in_arity());
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }
}

/// The unit vector `e_i` of length `r`.
pub fn unit(r: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

/// Sparse polynomial in `arity` variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    arity: usize,
    terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero(arity: usize) -> Self {
        Poly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Scalar) -> Self {
        let mut p = Poly::zero(arity);
        p.add_term(Mono::one(arity), &c);
        p
    }

    pub fn one(arity: usize) -> Self {
        Poly::constant(arity, Scalar::one())
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(arity: usize, i: usize) -> Self {
        let mut m = Mono::one(arity);
        m.0[i] = 1;
        Poly::monomial(m, Scalar::one())
    }

    pub fn monomial(m: Mono, c: Scalar) -> Self {
        let mut p = Poly::zero(m.0.len());
        p.add_term(m, &c);
        p
    }

    /// The polynomial `Σ coeffs[i] x_{i+1}`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let r = coeffs.len();
        let mut p = Poly::zero(r);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut m = Mono::one(r);
                m.0[i] = 1;
                p.add_term(m, &Scalar::from_int(c));
            }
        }
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<u16>, Scalar)>) -> Self {
        let mut p = Poly::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity);
            p.add_term(Mono(SmallVec::from_vec(e)), &c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    /// Returns the constant value if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.terms.keys().next(), self.terms.keys().next_back()) {
            (Some(a), Some(b)) => a.degree() == b.degree(),
            _ => true,
        }
    }

    /// Returns true if every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    pub fn add_term(&mut self, m: Mono, c: &Scalar) {
        debug_assert_eq!(m.0.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Poly) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_arity(other)?;
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_arity(other)?;
        Ok(self.mul(other))
    }

    /// Sum; panics on arity mismatch (use [`Poly::try_add`] for a checked form).
    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let (big, small) = if self.num_terms() >= other.num_terms() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.arity);
        }
        if s.is_one() {
            return self.clone();
        }
        let mut out = Poly::zero(self.arity);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(c * s));
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Poly {
        if r.is_one() {
            return self.clone();
        }
        if r.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(r))).collect(),
        }
    }

    fn from_accumulator(arity: usize, acc: HashMap<Mono, Scalar>) -> Poly {
        Poly {
            arity,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Product; panics on arity mismatch (use [`Poly::try_mul`] for a checked form).
    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.arity);
        }
        let mut acc: HashMap<Mono, Scalar> = HashMap::with_capacity(self.num_terms() * other.num_terms());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += &c;
                    }
                }
            }
        }
        Poly::from_accumulator(self.arity, acc)
    }

    /// Product with the linear polynomial `Σ coeffs[i] x_{i+1}`.
    pub fn mul_linear(&self, coeffs: &[i64]) -> Poly {
        assert_eq!(coeffs.len(), self.arity);
        let mut acc: HashMap<Mono, Scalar> = HashMap::with_capacity(self.num_terms() * 2);
        for (i, &k) in coeffs.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let kq = qi(k);
            for (m, c) in &self.terms {
                let mut mm = m.clone();
                mm.0[i] += 1;
                let c = c.scale(&kq);
                match acc.entry(mm) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += &c;
                    }
                }
            }
        }
        Poly::from_accumulator(self.arity, acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.arity);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reinterprets the polynomial in `arity ≥ self.arity` variables with
    /// variable `x_i` renamed to `x_{i+offset}`.
    pub fn embed(&self, offset: usize, arity: usize) -> Poly {
        assert!(offset + self.arity <= arity);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e: SmallVec<[u16; 8]> = SmallVec::from_elem(0, arity);
                e[offset..offset + self.arity].copy_from_slice(&m.0);
                (Mono(e), c.clone())
            })
            .collect();
        Poly { arity, terms }
    }

    /// Exact composition with a linear substitution.
    pub fn substitute(&self, map: &LinearMap) -> Result<Poly> {
        if map.in_arity() != self.arity {
            return Err(Error::ArityMismatch(map.in_arity(), self.arity));
        }
        let out = map.out_arity;
        let images: Vec<Poly> = map.images.iter().map(|v| Poly::linear(v)).collect();
        let mut cache: HashMap<(usize, u16), Poly> = HashMap::new();
        let mut acc = Poly::zero(out);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(out, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache.entry((i, e)).or_insert_with(|| images[i].pow(e as u32));
                t = t.mul(pw);
                if t.is_zero() {
                    break;
                }
            }
            acc.add_assign(&t);
        }
        Ok(acc)
    }

    /// Exact division by a linear form: returns `q` with `self = L·q`, or
    /// `None` when `L` does not divide `self`.
    pub fn divide_by_linear_form(&self, l: &LinearForm) -> Option<Poly> {
        assert_eq!(l.arity(), self.arity, "arity mismatch");
        if self.is_zero() {
            return Some(Poly::zero(self.arity));
        }
        // Pivot on the first variable with a nonzero coefficient; write
        // L = c·x_k + s and self = Σ_d p_d x_k^d, then divide synthetically.
        let k = l.coeffs().iter().position(|&c| c != 0).unwrap();
        let c_inv = Rational::new(1.into(), l.coeffs()[k].into());
        let mut s_coeffs = l.coeffs().to_vec();
        s_coeffs[k] = 0;
        let s_is_zero = s_coeffs.iter().all(|&c| c == 0);

        let mut layers: BTreeMap<u16, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.0[k];
            let mut mm = m.clone();
            mm.0[k] = 0;
            layers.entry(d).or_insert_with(|| Poly::zero(self.arity)).add_term(mm, c);
        }
        let top = *layers.keys().next_back().unwrap();
        if top == 0 {
            return None;
        }
        // q_{d-1} = (p_d - s·q_d)/c, descending from d = top.
        let mut quotient = Poly::zero(self.arity);
        let mut q_d = Poly::zero(self.arity);
        for d in (1..=top).rev() {
            let mut numer = layers.remove(&d).unwrap_or_else(|| Poly::zero(self.arity));
            if !s_is_zero && !q_d.is_zero() {
                numer = numer.sub(&q_d.mul_linear(&s_coeffs));
            }
            let q_next = numer.scale_rational(&c_inv);
            for (m, c) in &q_next.terms {
                let mut mm = m.clone();
                mm.0[k] = d - 1;
                quotient.add_term(mm, c);
            }
            q_d = q_next;
        }
        let p0 = layers.remove(&0).unwrap_or_else(|| Poly::zero(self.arity));
        let rem = if s_is_zero { p0 } else { p0.sub(&q_d.mul_linear(&s_coeffs)) };
        rem.is_zero().then_some(quotient)
    }

    /// Canonical text rendering with variables `{var}1, {var}2, …`, terms in
    /// descending graded-lexicographic order.
    pub fn render(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (m, c) in self.terms.iter().rev() {
            let (neg, prefix) = c.coefficient_prefix();
            let mono = render_mono(m, var);
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                // Constant term: print the bare coefficient.
                let body = prefix.trim_end_matches('*');
                if body.is_empty() {
                    s.push('1');
                } else {
                    s.push_str(body.trim_start_matches('(').trim_end_matches(')'));
                }
            } else {
                s.push_str(&prefix);
                s.push_str(&mono);
            }
        }
        s
    }

    /// Content of the rational coefficients: the positive lcm of their
    /// denominators, or `None` if some coefficient involves zeta symbols.
    pub(crate) fn rational_denominator_lcm(&self) -> Option<num_bigint::BigInt> {
        let mut l = num_bigint::BigInt::one();
        for c in self.terms.values() {
            let r = c.as_rational()?;
            l = l.lcm(r.denom());
        }
        Some(l)
    }
}

fn render_mono(m: &Mono, var: char) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("{var}{}", i + 1)),
            _ => parts.push(format!("{var}{}^{e}", i + 1)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render('u'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(r: usize, i: usize) -> Poly {
        Poly::var(r, i)
    }

    #[test]
    fn difference_of_squares() {
        let p = u(2, 0).sub(&u(2, 1)).mul(&u(2, 0).add(&u(2, 1)));
        let expect = u(2, 0).pow(2).sub(&u(2, 1).pow(2));
        assert_eq!(p, expect);
    }

    #[test]
    fn add_negation_is_zero() {
        let p = u(2, 0).mul(&u(2, 1)).add(&Poly::one(2));
        assert!(p.add(&p.neg()).is_zero());
    }

    #[test]
    fn scale_by_zeta() {
        let p = u(2, 0).mul(&u(2, 1)).scale(&Scalar::zeta(3));
        assert_eq!(p.render('u'), "z3*u1*u2");
    }

    #[test]
    fn arity_mismatch_is_reported() {
        assert_eq!(u(2, 0).try_add(&u(3, 0)), Err(Error::ArityMismatch(2, 3)));
    }

    #[test]
    fn substitution_example() {
        // u1·u2 under (u1 → −u1, u2 → u1+u2) is −u1² − u1·u2.
        let p = u(2, 0).mul(&u(2, 1));
        let map = LinearMap::new(2, vec![vec![-1, 0], vec![1, 1]]);
        let got = p.substitute(&map).unwrap();
        assert_eq!(got.render('u'), "-u1^2 - u1*u2");
    }

    #[test]
    fn division_examples() {
        let p = u(2, 0).pow(2).sub(&u(2, 1).pow(2));
        let l = LinearForm::new(vec![1, 1]);
        assert_eq!(p.divide_by_linear_form(&l).unwrap(), u(2, 0).sub(&u(2, 1)));
        let s = u(2, 0).add(&u(2, 1));
        assert!(s.divide_by_linear_form(&LinearForm::new(vec![1, 0])).is_none());
        assert!(Poly::zero(2).divide_by_linear_form(&l).unwrap().is_zero());
        assert!(Poly::one(2).divide_by_linear_form(&l).is_none());
    }

    #[test]
    fn normalization_of_forms() {
        let (f, k) = LinearForm::normalize(&[0, -2, 4]).unwrap();
        assert_eq!(f.coeffs(), &[0, 1, -2]);
        assert_eq!(k, -2);
        assert!(LinearForm::normalize(&[0, 0]).is_none());
    }

    #[test]
    fn rendering_order_and_coefficients() {
        let p = u(2, 0).scale(&Scalar::frac(1, 12)).sub(&u(2, 1).scale(&Scalar::frac(1, 12)));
        assert_eq!(p.render('u'), "(1/12)*u1 - (1/12)*u2");
        let c = Poly::constant(2, Scalar::frac(-3, 4)).add(&u(2, 1).pow(2));
        assert_eq!(c.render('v'), "v2^2 - 3/4");
    }

    #[test]
    fn map_composition() {
        let push = LinearMap::new(2, vec![vec![-1, -1], vec![1, 0]]);
        assert_eq!(push.power(3), LinearMap::identity(2));
    }
}
