//! Truncated noncommutative power series in the letters `a, b` or in the
//! letters `c_i = ad(a)^{i−1}(b)`, the map `ma` to polynomial moulds, the
//! conversion from `a, b` words to `c` words on the kernel of `∂`, and the
//! series `t₀₁`.
//!
//! Sign convention: `ad(a)(x) = [x, a]`, so `c₁ = b`, `c₂ = ba − ab` and
//! `c_{i+1} = c_i a − a c_i`. With it, `ma([a, b]) = U₁ = −u₁` and
//! `ma(t₀₁) = −a − ½U₁ + T̂₀₁` with `t₀₁ = −(ad b/(e^{ad b} − 1))(a)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{Poly, RatFun, Rational, Scalar};
use crate::library::numbers::{bernoulli_table, factorial};
use crate::mouldcore::{Mould, MouldA, Side};

/// Which letters a series is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    Ab,
    C,
}

/// A letter: `a`, `b`, or `c_i` with `i ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
    C(u32),
}

impl Letter {
    pub fn weight(self) -> usize {
        match self {
            Letter::A | Letter::B => 1,
            Letter::C(i) => i as usize,
        }
    }

    fn alphabet(self) -> Alphabet {
        match self {
            Letter::C(_) => Alphabet::C,
            _ => Alphabet::Ab,
        }
    }
}

/// A word; the empty word is the unit.
pub type Word = Vec<Letter>;

fn word_weight(w: &[Letter]) -> usize {
    w.iter().map(|l| l.weight()).sum()
}

/// A noncommutative series truncated at `max_weight`.
#[derive(Clone, Debug, PartialEq)]
pub struct NCSeries {
    alphabet: Alphabet,
    terms: BTreeMap<Word, Scalar>,
    max_weight: usize,
}

impl NCSeries {
    pub fn zero(alphabet: Alphabet, max_weight: usize) -> Self {
        NCSeries { alphabet, terms: BTreeMap::new(), max_weight }
    }

    pub fn one(alphabet: Alphabet, max_weight: usize) -> Self {
        Self::word(alphabet, Vec::new(), Scalar::one(), max_weight)
    }

    /// A single letter (its alphabet is the letter's).
    pub fn letter(l: Letter, max_weight: usize) -> Self {
        if let Letter::C(i) = l {
            assert!(i >= 1, "c-letters are indexed from 1");
        }
        Self::word(l.alphabet(), vec![l], Scalar::one(), max_weight)
    }

    /// `coeff · w`, dropped if `w` exceeds the truncation.
    pub fn word(alphabet: Alphabet, w: Word, coeff: Scalar, max_weight: usize) -> Self {
        assert!(w.iter().all(|l| l.alphabet() == alphabet), "letter outside the alphabet");
        let mut s = Self::zero(alphabet, max_weight);
        s.add_term(w, &coeff);
        s
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[Letter]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() || word_weight(&w) > self.max_weight {
            return;
        }
        let vanished = {
            let entry = self.terms.entry(w.clone()).or_insert_with(Scalar::zero);
            *entry += c;
            entry.is_zero()
        };
        if vanished {
            self.terms.remove(&w);
        }
    }

    fn check(&self, other: &NCSeries) -> Result<usize> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(self.max_weight.min(other.max_weight))
    }

    /// Drops all words above `max_weight`.
    pub fn truncate(&self, max_weight: usize) -> Self {
        let mut s = Self::zero(self.alphabet, max_weight.min(self.max_weight));
        for (w, c) in &self.terms {
            s.add_term(w.clone(), c);
        }
        s
    }

    pub fn add(&self, other: &NCSeries) -> Result<NCSeries> {
        let mw = self.check(other)?;
        let mut s = self.truncate(mw);
        for (w, c) in &other.terms {
            s.add_term(w.clone(), c);
        }
        Ok(s)
    }

    pub fn sub(&self, other: &NCSeries) -> Result<NCSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NCSeries {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, s: &Scalar) -> NCSeries {
        let mut out = Self::zero(self.alphabet, self.max_weight);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &(c * s));
        }
        out
    }

    /// Concatenation product, truncated.
    pub fn mul(&self, other: &NCSeries) -> Result<NCSeries> {
        let mw = self.check(other)?;
        let mut out = Self::zero(self.alphabet, mw);
        for (w1, c1) in &self.terms {
            let k1 = word_weight(w1);
            for (w2, c2) in &other.terms {
                if k1 + word_weight(w2) > mw {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// `fg − gf`.
    pub fn bracket(&self, other: &NCSeries) -> Result<NCSeries> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// The derivation `∂` with `∂a = 1`, `∂b = 0` (`a, b` alphabet only).
    pub fn partial_a(&self) -> Result<NCSeries> {
        if self.alphabet != Alphabet::Ab {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = Self::zero(Alphabet::Ab, self.max_weight);
        for (w, c) in &self.terms {
            for (k, l) in w.iter().enumerate() {
                if *l == Letter::A {
                    let mut v = w.clone();
                    v.remove(k);
                    out.add_term(v, c);
                }
            }
        }
        Ok(out)
    }

    /// Parses a series in `a`, `b` (and `c1`, `c2`, … for the `c` alphabet):
    /// sums and differences of terms `[q*]factor…`, where a factor is a
    /// letter, a parenthesized series or a bracket `[x, y]`. Juxtaposition is
    /// concatenation; `q` is an integer or a fraction `n/d`.
    pub fn parse(text: &str, max_weight: usize) -> Result<NCSeries> {
        let mut p = Parser { s: text.as_bytes(), pos: 0, max_weight, alphabet: None };
        let f = p.sum()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Malformed(format!("unexpected input at position {}", p.pos)));
        }
        Ok(f)
    }
}

impl fmt::Display for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let word: String = if w.is_empty() {
                "1".into()
            } else {
                w.iter()
                    .map(|l| match l {
                        Letter::A => "a".to_string(),
                        Letter::B => "b".to_string(),
                        Letter::C(i) => format!("c{i}"),
                    })
                    .collect::<Vec<_>>()
                    .join(if self.alphabet == Alphabet::C { "*" } else { "" })
            };
            let coeff = if c.is_one() {
                String::new()
            } else if c.terms().len() == 1 {
                format!("{c}*")
            } else {
                format!("({c})*")
            };
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{coeff}{word}")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    max_weight: usize,
    alphabet: Option<Alphabet>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Malformed(format!("{what} at position {}", self.pos)))
    }

    fn alphabet(&self) -> Alphabet {
        self.alphabet.unwrap_or(Alphabet::Ab)
    }

    fn sum(&mut self) -> Result<NCSeries> {
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("expected a number"))
    }

    fn term(&mut self) -> Result<NCSeries> {
        let mut coeff = Scalar::one();
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let n = self.number()?;
            let mut q = Rational::from_integer(n.into());
            if self.peek() == Some(b'/') {
                self.pos += 1;
                let d = self.number()?;
                if d == 0 {
                    return self.err("zero denominator");
                }
                q /= Rational::from_integer(d.into());
            }
            coeff = Scalar::from_rational(q);
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else if !matches!(self.peek(), Some(b'a' | b'b' | b'c' | b'(' | b'[')) {
                return Ok(NCSeries::one(self.alphabet(), self.max_weight).scale(&coeff));
            }
        }
        let mut acc: Option<NCSeries> = None;
        while let Some(c) = self.peek() {
            let f = match c {
                b'a' | b'b' | b'c' => self.letter()?,
                b'(' => {
                    self.pos += 1;
                    let f = self.sum()?;
                    self.expect(b')')?;
                    f
                }
                b'[' => {
                    self.pos += 1;
                    let x = self.sum()?;
                    self.expect(b',')?;
                    let y = self.sum()?;
                    self.expect(b']')?;
                    x.bracket(&y)?
                }
                b'*' => {
                    self.pos += 1;
                    continue;
                }
                _ => break,
            };
            acc = Some(match acc {
                None => f,
                Some(a) => a.mul(&f)?,
            });
        }
        match acc {
            Some(a) => Ok(a.scale(&coeff)),
            None => self.err("expected a term"),
        }
    }

    fn letter(&mut self) -> Result<NCSeries> {
        let c = self.s[self.pos];
        self.pos += 1;
        let l = match c {
            b'a' => Letter::A,
            b'b' => Letter::B,
            _ => {
                let i = self.number()?;
                if i == 0 || i > u32::MAX as u64 {
                    return self.err("c-letters are indexed from 1");
                }
                Letter::C(i as u32)
            }
        };
        match self.alphabet {
            None => self.alphabet = Some(l.alphabet()),
            Some(a) if a != l.alphabet() => return Err(Error::AlphabetMismatch),
            _ => {}
        }
        Ok(NCSeries::letter(l, self.max_weight))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }
}

/// The `a, b` expansion of `c_i`.
pub fn c_letter_expansion(i: u32, max_weight: usize) -> NCSeries {
    let a = NCSeries::letter(Letter::A, max_weight);
    let mut c = NCSeries::letter(Letter::B, max_weight);
    for _ in 1..i {
        c = c.bracket(&a).expect("same alphabet");
    }
    c
}

/// Expands a `c`-series into the `a, b` alphabet.
pub fn c_to_ab(f: &NCSeries) -> Result<NCSeries> {
    if f.alphabet != Alphabet::C {
        return Err(Error::AlphabetMismatch);
    }
    let mw = f.max_weight;
    let mut cache: BTreeMap<u32, NCSeries> = BTreeMap::new();
    let mut out = NCSeries::zero(Alphabet::Ab, mw);
    for (w, c) in &f.terms {
        let mut prod = NCSeries::one(Alphabet::Ab, mw);
        for l in w {
            let Letter::C(i) = *l else { unreachable!() };
            let e = cache.entry(i).or_insert_with(|| c_letter_expansion(i, mw));
            prod = prod.mul(e)?;
        }
        out = out.add(&prod.scale(c))?;
    }
    Ok(out)
}

/// The `a`-exponents `(k₁−1, …, k_r−1)` of a word `a^{k₁−1}b⋯a^{k_r−1}b`
/// ending in `b`.
fn b_profile(w: &[Letter]) -> Option<Vec<u32>> {
    if w.last() != Some(&Letter::B) {
        return None;
    }
    let mut out = Vec::new();
    let mut run = 0;
    for l in w {
        match l {
            Letter::A => run += 1,
            _ => {
                out.push(run);
                run = 0;
            }
        }
    }
    Some(out)
}

/// Rewrites a series in the kernel of `∂` in the letters `c_i`. Words ending
/// in `b` are eliminated in decreasing order of their `a`-exponent vectors;
/// the `c`-monomial `c_{k₁}⋯c_{k_r}` has leading word `a^{k₁−1}b⋯a^{k_r−1}b`
/// with coefficient `±1` and otherwise only smaller words.
pub fn ab_to_c(f: &NCSeries) -> Result<NCSeries> {
    if f.alphabet != Alphabet::Ab {
        return Err(Error::AlphabetMismatch);
    }
    if !f.partial_a()?.is_zero() {
        return Err(Error::NotInKernel("∂f ≠ 0".into()));
    }
    let mw = f.max_weight;
    let mut rest = f.clone();
    let mut out = NCSeries::zero(Alphabet::C, mw);
    let mut cache: BTreeMap<u32, NCSeries> = BTreeMap::new();
    loop {
        let lead = rest
            .terms
            .keys()
            .filter_map(|w| b_profile(w).map(|p| (w.len(), p, w.clone())))
            .max_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
        let Some((_, profile, w)) = lead else { break };
        let cw: Word = profile.iter().map(|&e| Letter::C(e + 1)).collect();
        let sign: u32 = profile.iter().sum();
        let mut coeff = rest.coefficient(&w);
        if sign % 2 == 1 {
            coeff = -coeff;
        }
        let mut prod = NCSeries::one(Alphabet::Ab, mw);
        for l in &cw {
            let Letter::C(i) = *l else { unreachable!() };
            let e = cache.entry(i).or_insert_with(|| c_letter_expansion(i, mw));
            prod = prod.mul(e)?;
        }
        rest = rest.sub(&prod.scale(&coeff))?;
        out.add_term(cw, &coeff);
    }
    let constant = rest.coefficient(&[]);
    if !constant.is_zero() {
        out.add_term(Vec::new(), &constant);
        rest = rest.sub(&NCSeries::one(Alphabet::Ab, mw).scale(&constant))?;
    }
    if !rest.is_zero() {
        return Err(Error::NotInKernel(format!("remainder {rest}")));
    }
    Ok(out)
}

/// `ma: c_{k₁}⋯c_{k_r} ↦ u₁^{k₁−1}⋯u_r^{k_r−1}` in depth `r`. The result has
/// `max_depth = max_weight` (depth never exceeds weight).
pub fn ma_map(f: &NCSeries) -> Result<Mould> {
    if f.alphabet != Alphabet::C {
        return Err(Error::AlphabetMismatch);
    }
    let mut by_depth: BTreeMap<usize, Poly> = BTreeMap::new();
    let mut empty = Scalar::zero();
    for (w, c) in &f.terms {
        if w.is_empty() {
            empty += c;
            continue;
        }
        let exps: Vec<u16> = w
            .iter()
            .map(|l| match l {
                Letter::C(i) => (*i - 1) as u16,
                _ => unreachable!(),
            })
            .collect();
        let r = exps.len();
        by_depth.entry(r).or_insert_with(|| Poly::zero(r)).add_assign(&Poly::from_terms(r, [(exps, c.clone())]));
    }
    Ok(Mould::from_components(
        Side::U,
        f.max_weight,
        empty,
        by_depth.into_iter().map(|(r, p)| (r, RatFun::from_poly(p))),
    ))
}

/// `ma` on `a, b` series of the form `q·a + g` with `∂g = 0`: returns
/// `q·a + ma(g)` in `ARI^a`.
pub fn ma_ab(f: &NCSeries) -> Result<MouldA> {
    if f.alphabet != Alphabet::Ab {
        return Err(Error::AlphabetMismatch);
    }
    let q = f.coefficient(&[Letter::A]);
    let g = f.sub(&NCSeries::letter(Letter::A, f.max_weight).scale(&q))?;
    Ok(MouldA { a_coeff: q, body: ma_map(&ab_to_c(&g)?)? })
}

/// `t₀₁ = Σ_{n<max_weight} (B_n/n!) ad(b)ⁿ(−a)`, whose weight-1 term is `−a`
/// and weight-2 term is `½[b, a]`.
pub fn build_t01_nc(max_weight: usize) -> NCSeries {
    let a = NCSeries::letter(Letter::A, max_weight);
    let b = NCSeries::letter(Letter::B, max_weight);
    let bern = bernoulli_table(max_weight);
    let mut term = a.neg();
    let mut out = NCSeries::zero(Alphabet::Ab, max_weight);
    for (n, bn) in bern.iter().enumerate().take(max_weight) {
        if !bn.is_zero() {
            let c: Rational = bn / factorial(n);
            out = out.add(&term.scale(&Scalar::from_rational(c))).expect("same alphabet");
        }
        term = b.bracket(&term).expect("same alphabet");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::q;

    fn ab(s: &str) -> NCSeries {
        NCSeries::parse(s, 8).unwrap()
    }

    #[test]
    fn arithmetic() {
        let a = ab("a");
        assert!(a.bracket(&a).unwrap().is_zero());
        assert_eq!(ab("a").mul(&ab("b")).unwrap(), ab("ab"));
        assert_eq!(ab("[a,b]"), ab("ab - ba"));
        assert_eq!(ab("1/2*ab + 1/2 ab"), ab("ab"));
    }

    #[test]
    fn alphabet_mismatch() {
        let c = NCSeries::letter(Letter::C(2), 5);
        assert!(matches!(ab("a").add(&c), Err(Error::AlphabetMismatch)));
        assert!(matches!(NCSeries::parse("a c2", 5), Err(Error::AlphabetMismatch)));
    }

    #[test]
    fn kernel_conversion() {
        let c2 = NCSeries::letter(Letter::C(2), 8);
        let c3 = NCSeries::letter(Letter::C(3), 8);
        assert_eq!(ab_to_c(&ab("ab - ba")).unwrap(), c2.neg());
        assert_eq!(ab_to_c(&ab("aab - 2aba + baa")).unwrap(), c3);
        assert!(matches!(ab_to_c(&ab("a")), Err(Error::NotInKernel(_))));
    }

    #[test]
    fn ma_of_c_words() {
        let w = NCSeries::parse("c2 c1 c3", 8).unwrap();
        let m = ma_map(&w).unwrap();
        assert_eq!(m.component(3).render('u'), "u1*u3^2");
        let m = ma_map(&NCSeries::letter(Letter::C(1), 3)).unwrap();
        assert_eq!(m.component(1).render('u'), "1");
        assert_eq!(ma_ab(&ab("[a,b]")).unwrap().body.component(1).render('u'), "-u1");
    }

    #[test]
    fn t01_low_weights() {
        let t = build_t01_nc(4);
        assert_eq!(t.coefficient(&[Letter::A]), -Scalar::one());
        assert_eq!(t.coefficient(&[Letter::B, Letter::A]), Scalar::from_rational(q(1, 2)));
        assert_eq!(t.coefficient(&[Letter::A, Letter::B]), Scalar::from_rational(q(-1, 2)));
    }
}
