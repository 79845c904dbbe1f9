//! The expression language: parsing, canonical printing, static side and
//! arity checking, and evaluation.
//!
//! ```text
//! program := 'let' ident '=' program ';' program | sum
//! sum     := product (('+' | '-') product)*
//! product := unary ('*' unary)*
//! unary   := '-' unary | atom
//! atom    := number ['/' number] | ident | ident '[' int ']'
//!          | ident '(' program (',' program)* ')' | '(' program ')'
//! ```
//!
//! Identifiers `z3`, `z5`, … are zeta symbols; `U[2k]`, `U1`, `That01`,
//! `C04` and `a` are builders; other identifiers are `let`-bound names.

use std::collections::HashMap;
use std::fmt;

use mouldlab::checks::fay_defect_mould;
use mouldlab::exactalg::{RatFun, Rational, Scalar};
use mouldlab::flexion::{arat_apply, dari_bracket, darit_apply, darit_exp_apply, mu_exp, mu_log};
use mouldlab::library::{build_const_mould_c, build_that01, build_u, build_u1, thm32_correction, thm34_correction, CorrectionSpec};
use mouldlab::mouldcore::{circ, dar, dar_inv, delta, delta_inv, dur, fay, mu, push_u, push_v, swap, Mould, MouldA, Side};
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Byte range `start..end` in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn to(self, other: Span) -> Span {
        Span { start: self.start, end: other.end }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Errors of the expression language; every variant carries a source span.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DslError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("type error at {span}: {msg}")]
    Type { span: Span, msg: String },
    #[error("evaluation error at {span}: {msg}")]
    Eval { span: Span, msg: String },
}

/// An expression node. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    /// A nonnegative rational literal.
    Num(Rational),
    /// A zeta symbol `zk`.
    Zeta(u32),
    /// A builder name or a `let`-bound name.
    Name(String),
    /// `name[index]`, e.g. `U[4]`.
    Indexed(String, u32),
    Call(String, Vec<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Let(String, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr { kind, span: Span::default() }
    }
}

/// Function names with their accepted argument counts.
pub const FUNCTIONS: &[(&str, usize, usize)] = &[
    ("mu", 2, 2),
    ("lu", 2, 2),
    ("dar", 1, 1),
    ("darinv", 1, 1),
    ("dur", 1, 1),
    ("delta", 1, 1),
    ("deltainv", 1, 1),
    ("pushu", 1, 2),
    ("pushv", 1, 2),
    ("circ", 1, 2),
    ("swap", 1, 1),
    ("fay", 1, 1),
    ("arat", 2, 2),
    ("darit", 2, 2),
    ("dari", 2, 2),
    ("expdarit", 2, 3),
    ("expmu", 1, 1),
    ("logmu", 1, 1),
    ("thm32corr", 3, 4),
    ("thm34corr", 1, 1),
];

/// Builder names usable without arguments.
pub const BUILDERS: &[&str] = &["U1", "That01", "C04", "a"];

fn is_zeta_ident(s: &str) -> Option<u32> {
    let digits = s.strip_prefix('z')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

// ---------------------------------------------------------------- lexing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
    Int(u64),
}

struct Lexer;

impl Lexer {
    fn lex(text: &str) -> Result<Vec<(Tok, Span)>, DslError> {
        let b = text.as_bytes();
        let mut i = 0;
        let mut out = Vec::new();
        while i < b.len() {
            let c = b[i];
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                let read = |i: &mut usize| {
                    let s = *i;
                    while *i < b.len() && b[*i].is_ascii_digit() {
                        *i += 1;
                    }
                    text[s..*i].parse::<num_bigint::BigInt>().unwrap()
                };
                let n = read(&mut i);
                let mut j = i;
                while j < b.len() && b[j].is_ascii_whitespace() {
                    j += 1;
                }
                if j < b.len() && b[j] == b'/' {
                    j += 1;
                    while j < b.len() && b[j].is_ascii_whitespace() {
                        j += 1;
                    }
                    if j >= b.len() || !b[j].is_ascii_digit() {
                        return Err(DslError::Parse { pos: j, msg: "expected a denominator".into() });
                    }
                    i = j;
                    let d = read(&mut i);
                    if d.is_zero() {
                        return Err(DslError::Parse { pos: start, msg: "zero denominator".into() });
                    }
                    out.push((Tok::Num(Rational::new(n, d)), Span { start, end: i }));
                } else {
                    let tok = match n.to_u64() {
                        Some(k) => Tok::Int(k),
                        None => Tok::Num(Rational::from_integer(n)),
                    };
                    out.push((tok, Span { start, end: i }));
                }
            } else if c.is_ascii_alphabetic() || c == b'_' {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), Span { start, end: i }));
            } else if b"+-*(),[];=".contains(&c) {
                out.push((Tok::Sym(c as char), Span { start: i, end: i + 1 }));
                i += 1;
            } else {
                return Err(DslError::Parse { pos: i, msg: format!("unexpected character '{}'", c as char) });
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------- parsing

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    len: usize,
}

/// Parses a program.
pub fn parse_expr(text: &str) -> Result<Expr, DslError> {
    let toks = Lexer::lex(text)?;
    let mut p = Parser { toks, pos: 0, len: text.len() };
    let e = p.program()?;
    if p.pos < p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1.start).unwrap_or(self.len)
    }

    fn error(&self, msg: &str) -> DslError {
        let msg = if self.pos >= self.toks.len() { format!("{msg} (at end of input)") } else { msg.to_string() };
        DslError::Parse { pos: self.here(), msg }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<Span, DslError> {
        if self.eat(c) {
            Ok(self.toks[self.pos - 1].1)
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn program(&mut self) -> Result<Expr, DslError> {
        if let Some(Tok::Ident(kw)) = self.peek() {
            if kw == "let" {
                let start = self.toks[self.pos].1;
                self.pos += 1;
                let name = match self.toks.get(self.pos) {
                    Some((Tok::Ident(n), _)) if n != "let" => n.clone(),
                    _ => return Err(self.error("expected a name after 'let'")),
                };
                self.pos += 1;
                self.expect('=')?;
                let value = self.program()?;
                self.expect(';')?;
                let body = self.program()?;
                let span = start.to(body.span);
                return Ok(Expr { kind: ExprKind::Let(name, Box::new(value), Box::new(body)), span });
            }
        }
        self.sum()
    }

    fn sum(&mut self) -> Result<Expr, DslError> {
        let mut acc = self.product()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym('+')) => '+',
                Some(Tok::Sym('-')) => '-',
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.product()?;
            let span = acc.span.to(rhs.span);
            let kind = if op == '+' {
                ExprKind::Add(Box::new(acc), Box::new(rhs))
            } else {
                ExprKind::Sub(Box::new(acc), Box::new(rhs))
            };
            acc = Expr { kind, span };
        }
    }

    fn product(&mut self) -> Result<Expr, DslError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            let rhs = self.unary()?;
            let span = acc.span.to(rhs.span);
            acc = Expr { kind: ExprKind::Mul(Box::new(acc), Box::new(rhs)), span };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.peek() == Some(&Tok::Sym('-')) {
            let start = self.toks[self.pos].1;
            self.pos += 1;
            let inner = self.unary()?;
            let span = start.to(inner.span);
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), span });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let Some((tok, span)) = self.toks.get(self.pos).cloned() else {
            return Err(self.error("expected an expression"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(q) => Ok(Expr { kind: ExprKind::Num(q), span }),
            Tok::Int(k) => Ok(Expr { kind: ExprKind::Num(Rational::from_integer(k.into())), span }),
            Tok::Sym('(') => {
                let inner = self.program()?;
                let close = self.expect(')')?;
                Ok(Expr { kind: inner.kind, span: span.to(close) })
            }
            Tok::Ident(name) if name == "let" => {
                self.pos -= 1;
                Err(self.error("'let' must be parenthesized here"))
            }
            Tok::Ident(name) => {
                if let Some(k) = is_zeta_ident(&name) {
                    return Ok(Expr { kind: ExprKind::Zeta(k), span });
                }
                if self.eat('[') {
                    let idx = match self.toks.get(self.pos) {
                        Some((Tok::Int(k), _)) if *k <= u32::MAX as u64 => *k as u32,
                        _ => return Err(self.error("expected an integer index")),
                    };
                    self.pos += 1;
                    let close = self.expect(']')?;
                    return Ok(Expr { kind: ExprKind::Indexed(name, idx), span: span.to(close) });
                }
                if self.eat('(') {
                    let mut args = vec![self.program()?];
                    while self.eat(',') {
                        args.push(self.program()?);
                    }
                    let close = self.expect(')')?;
                    return Ok(Expr { kind: ExprKind::Call(name, args), span: span.to(close) });
                }
                Ok(Expr { kind: ExprKind::Name(name), span })
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected an expression"))
            }
        }
    }
}

// ---------------------------------------------------------------- printing

/// Binding strength for parenthesization: let < sum < product < unary < atom.
fn level(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Let(..) => 0,
        ExprKind::Add(..) | ExprKind::Sub(..) => 1,
        ExprKind::Mul(..) => 2,
        ExprKind::Neg(..) => 3,
        _ => 4,
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    if level(e) < min {
        format!("({})", print_expr(e))
    } else {
        print_expr(e)
    }
}

/// Canonical text of an expression; `parse_expr(print_expr(e)) == e`.
pub fn print_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Num(q) => {
            if q.is_integer() {
                q.numer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        }
        ExprKind::Zeta(k) => format!("z{k}"),
        ExprKind::Name(n) => n.clone(),
        ExprKind::Indexed(n, k) => format!("{n}[{k}]"),
        ExprKind::Call(f, args) => {
            format!("{f}({})", args.iter().map(print_expr).collect::<Vec<_>>().join(", "))
        }
        ExprKind::Neg(x) => format!("-{}", wrap(x, 3)),
        ExprKind::Add(l, r) => format!("{} + {}", wrap(l, 1), wrap(r, 2)),
        ExprKind::Sub(l, r) => format!("{} - {}", wrap(l, 1), wrap(r, 2)),
        ExprKind::Mul(l, r) => format!("{} * {}", wrap(l, 2), wrap(r, 3)),
        ExprKind::Let(n, v, b) => format!("let {n} = {}; {}", print_expr(v), print_expr(b)),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_expr(self))
    }
}

// ---------------------------------------------------------------- checking

/// Static type of an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ty {
    Scalar,
    Mould(Side),
    MouldA,
    Constants,
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Scalar => write!(f, "scalar"),
            Ty::Mould(s) => write!(f, "{}-mould", s.name()),
            Ty::MouldA => write!(f, "mould with generator a"),
            Ty::Constants => write!(f, "constant mould"),
        }
    }
}

fn type_err<T>(span: Span, msg: impl Into<String>) -> Result<T, DslError> {
    Err(DslError::Type { span, msg: msg.into() })
}

/// Checks arities and sides; returns the type of the expression.
pub fn typecheck(e: &Expr) -> Result<Ty, DslError> {
    typecheck_in(e, &mut Vec::new())
}

fn typecheck_in(e: &Expr, env: &mut Vec<(String, Ty)>) -> Result<Ty, DslError> {
    let sp = e.span;
    let u = Ty::Mould(Side::U);
    match &e.kind {
        ExprKind::Num(_) => Ok(Ty::Scalar),
        ExprKind::Zeta(k) => {
            if *k >= 3 && k % 2 == 1 {
                Ok(Ty::Scalar)
            } else {
                type_err(sp, format!("z{k} is not a zeta symbol (odd index >= 3 required)"))
            }
        }
        ExprKind::Name(n) => {
            if let Some((_, t)) = env.iter().rev().find(|(m, _)| m == n) {
                return Ok(*t);
            }
            match n.as_str() {
                "U1" | "That01" => Ok(u),
                "C04" => Ok(Ty::Constants),
                "a" => Ok(Ty::MouldA),
                "U" => type_err(sp, "U needs an even index, e.g. U[4]"),
                _ => type_err(sp, format!("unknown name '{n}'")),
            }
        }
        ExprKind::Indexed(n, k) => {
            if n != "U" {
                type_err(sp, format!("'{n}' cannot be indexed"))
            } else if k % 2 != 0 {
                type_err(sp, format!("U[{k}] needs an even index"))
            } else {
                Ok(u)
            }
        }
        ExprKind::Neg(x) => typecheck_in(x, env),
        ExprKind::Add(l, r) | ExprKind::Sub(l, r) => {
            let (tl, tr) = (typecheck_in(l, env)?, typecheck_in(r, env)?);
            match (tl, tr) {
                _ if tl == tr => Ok(tl),
                (Ty::MouldA, Ty::Mould(Side::U)) | (Ty::Mould(Side::U), Ty::MouldA) => Ok(Ty::MouldA),
                _ => type_err(sp, format!("cannot add {tl} and {tr}")),
            }
        }
        ExprKind::Mul(l, r) => {
            let (tl, tr) = (typecheck_in(l, env)?, typecheck_in(r, env)?);
            match (tl, tr) {
                (Ty::Scalar, t) | (t, Ty::Scalar) => Ok(t),
                _ => type_err(sp, format!("cannot multiply {tl} by {tr}; one factor must be a scalar (use mu for products)")),
            }
        }
        ExprKind::Let(n, v, b) => {
            if BUILDERS.contains(&n.as_str()) || is_zeta_ident(n).is_some() || FUNCTIONS.iter().any(|f| f.0 == n) {
                return type_err(sp, format!("'{n}' is reserved"));
            }
            let tv = typecheck_in(v, env)?;
            env.push((n.clone(), tv));
            let tb = typecheck_in(b, env);
            env.pop();
            tb
        }
        ExprKind::Call(f, args) => {
            let Some(&(_, lo, hi)) = FUNCTIONS.iter().find(|x| x.0 == f) else {
                return type_err(sp, format!("unknown function '{f}'"));
            };
            if args.len() < lo || args.len() > hi {
                let want = if lo == hi { lo.to_string() } else { format!("{lo} to {hi}") };
                return type_err(sp, format!("{f} takes {want} arguments, got {}", args.len()));
            }
            let tys = args.iter().map(|a| typecheck_in(a, env)).collect::<Result<Vec<_>, _>>()?;
            let need = |k: usize, ok: &[Ty], what: &str| -> Result<(), DslError> {
                if ok.contains(&tys[k]) {
                    Ok(())
                } else {
                    type_err(args[k].span, format!("{f}: argument {} must be {what}, found {}", k + 1, tys[k]))
                }
            };
            let v = Ty::Mould(Side::V);
            match f.as_str() {
                "mu" | "lu" => {
                    if f == "lu" && (tys[0] == Ty::MouldA || tys[1] == Ty::MouldA) {
                        need(0, &[u, Ty::MouldA], "a u-mould")?;
                        need(1, &[u, Ty::MouldA], "a u-mould")?;
                        return Ok(Ty::MouldA);
                    }
                    need(0, &[u, v], "a mould")?;
                    need(1, &[tys[0]], &format!("a mould on the same side as argument 1 ({})", tys[0]))?;
                    Ok(tys[0])
                }
                "dar" | "darinv" | "dur" | "delta" | "deltainv" | "fay" => {
                    need(0, &[u], "a u-mould")?;
                    Ok(u)
                }
                "pushu" | "pushv" | "circ" => {
                    let side = if f == "pushu" { u } else { v };
                    need(0, &[side], &format!("a {side}"))?;
                    if args.len() == 2 {
                        need(1, &[Ty::Scalar], "an integer power")?;
                    }
                    Ok(side)
                }
                "swap" => match tys[0] {
                    Ty::Mould(s) => Ok(Ty::Mould(s.flip())),
                    _ => {
                        need(0, &[u, v], "a mould")?;
                        unreachable!()
                    }
                },
                "arat" | "dari" => {
                    need(0, &[u], "a u-mould")?;
                    need(1, &[u], "a u-mould")?;
                    Ok(u)
                }
                "darit" | "expdarit" => {
                    need(0, &[u], "a u-mould")?;
                    need(1, &[u, Ty::MouldA], "a u-mould or a mould with generator a")?;
                    if args.len() == 3 {
                        need(2, &[Ty::Scalar], "an integer order")?;
                    }
                    Ok(tys[1])
                }
                "expmu" | "logmu" => {
                    need(0, &[u, v], "a mould")?;
                    Ok(tys[0])
                }
                "thm32corr" => {
                    need(0, &[u], "a u-mould (M)")?;
                    need(1, &[Ty::Constants, Ty::Scalar], "a constant mould (C04, or 0 for the strict case)")?;
                    need(2, &[u], "a u-mould (R)")?;
                    if args.len() == 4 {
                        need(3, &[u], "a u-mould (the correction of R')")?;
                    }
                    Ok(u)
                }
                "thm34corr" => {
                    need(0, &[Ty::Scalar], "an integer depth")?;
                    Ok(u)
                }
                _ => unreachable!("function table and checker agree"),
            }
        }
    }
}

// ---------------------------------------------------------------- evaluation

/// A runtime value.
#[derive(Clone, Debug)]
pub enum Value {
    Scalar(Scalar),
    Mould(Mould),
    MouldA(MouldA),
    Constants(CorrectionSpec),
}

/// Truncation settings of an evaluation.
#[derive(Clone, Copy, Debug)]
pub struct EvalConfig {
    pub max_depth: usize,
    /// Upper bound on builder indices `U[2k]` and on `thm34corr` depths.
    pub max_weight: usize,
}

fn eval_err<T>(span: Span, msg: impl fmt::Display) -> Result<T, DslError> {
    Err(DslError::Eval { span, msg: msg.to_string() })
}

fn lib<T>(span: Span, r: mouldlab::Result<T>) -> Result<T, DslError> {
    r.or_else(|e| eval_err(span, e))
}

/// Type-checks and evaluates a program.
pub fn evaluate(e: &Expr, cfg: &EvalConfig) -> Result<Value, DslError> {
    typecheck(e)?;
    Evaluator { cfg: *cfg, env: HashMap::new() }.eval(e)
}

struct Evaluator {
    cfg: EvalConfig,
    env: HashMap<String, Vec<Value>>,
}

impl Evaluator {
    fn int(&mut self, e: &Expr, min: i64) -> Result<i64, DslError> {
        let Value::Scalar(s) = self.eval(e)? else { return eval_err(e.span, "expected an integer") };
        match s.as_rational() {
            Some(q) if q.is_integer() && q.abs() < Rational::from_integer(1_000_000.into()) => {
                let k = q.to_integer().to_i64().unwrap();
                if k < min {
                    eval_err(e.span, format!("expected an integer >= {min}"))
                } else {
                    Ok(k)
                }
            }
            _ => eval_err(e.span, "expected an integer"),
        }
    }

    fn mould(&mut self, e: &Expr) -> Result<Mould, DslError> {
        match self.eval(e)? {
            Value::Mould(m) => Ok(m),
            _ => eval_err(e.span, "expected a mould"),
        }
    }

    fn eval(&mut self, e: &Expr) -> Result<Value, DslError> {
        let sp = e.span;
        let d = self.cfg.max_depth;
        Ok(match &e.kind {
            ExprKind::Num(q) => Value::Scalar(Scalar::from_rational(q.clone())),
            ExprKind::Zeta(k) => Value::Scalar(Scalar::zeta(*k)),
            ExprKind::Name(n) => {
                if let Some(v) = self.env.get(n).and_then(|s| s.last()) {
                    return Ok(v.clone());
                }
                match n.as_str() {
                    "U1" => Value::Mould(build_u1(d)),
                    "That01" => Value::Mould(build_that01(d)),
                    "C04" => Value::Constants(build_const_mould_c(d)),
                    "a" => Value::MouldA(MouldA::generator(d)),
                    _ => return eval_err(sp, format!("unknown name '{n}'")),
                }
            }
            ExprKind::Indexed(_, k) => {
                if *k as usize > self.cfg.max_weight {
                    return eval_err(sp, format!("U[{k}] exceeds the weight bound {}", self.cfg.max_weight));
                }
                Value::Mould(build_u(*k, d))
            }
            ExprKind::Neg(x) => scale(self.eval(x)?, &-Scalar::one()),
            ExprKind::Add(l, r) | ExprKind::Sub(l, r) => {
                let (a, mut b) = (self.eval(l)?, self.eval(r)?);
                if matches!(e.kind, ExprKind::Sub(..)) {
                    b = scale(b, &-Scalar::one());
                }
                match (a, b) {
                    (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + y),
                    (Value::Mould(x), Value::Mould(y)) => Value::Mould(lib(sp, x.add(&y))?),
                    (Value::Constants(x), Value::Constants(y)) => Value::Constants(CorrectionSpec::new(
                        (2..=d).map(|r| (r, x.get(r) + y.get(r))),
                    )),
                    (x, y) => Value::MouldA(lib(sp, as_a(x).add(&as_a(y)))?),
                }
            }
            ExprKind::Mul(l, r) => match (self.eval(l)?, self.eval(r)?) {
                (Value::Scalar(s), v) | (v, Value::Scalar(s)) => scale(v, &s),
                _ => return eval_err(sp, "one factor must be a scalar"),
            },
            ExprKind::Let(n, v, b) => {
                let value = self.eval(v)?;
                self.env.entry(n.clone()).or_default().push(value);
                let out = self.eval(b);
                self.env.get_mut(n).unwrap().pop();
                out?
            }
            ExprKind::Call(f, args) => self.call(f, args, sp)?,
        })
    }

    fn call(&mut self, f: &str, args: &[Expr], sp: Span) -> Result<Value, DslError> {
        let m = |v: mouldlab::Result<Mould>| lib(sp, v).map(Value::Mould);
        Ok(match f {
            "mu" => {
                let (a, b) = (self.mould(&args[0])?, self.mould(&args[1])?);
                m(mu(&a, &b))?
            }
            "lu" => {
                let (a, b) = (self.eval(&args[0])?, self.eval(&args[1])?);
                let plain = matches!((&a, &b), (Value::Mould(_), Value::Mould(_)));
                let out = lib(sp, as_a(a).lu(&as_a(b)))?;
                if plain {
                    Value::Mould(out.body)
                } else {
                    Value::MouldA(out)
                }
            }
            "dar" => m(dar(&self.mould(&args[0])?))?,
            "darinv" => m(dar_inv(&self.mould(&args[0])?))?,
            "dur" => m(dur(&self.mould(&args[0])?))?,
            "delta" => m(delta(&self.mould(&args[0])?))?,
            "deltainv" => m(delta_inv(&self.mould(&args[0])?))?,
            "pushu" | "pushv" | "circ" => {
                let a = self.mould(&args[0])?;
                let k = if args.len() == 2 { self.int(&args[1], i64::MIN)? } else { 1 };
                match f {
                    "pushu" => m(push_u(&a, k))?,
                    "pushv" => m(push_v(&a, k))?,
                    _ => m(circ(&a, k))?,
                }
            }
            "swap" => m(swap(&self.mould(&args[0])?))?,
            "fay" => m(fay(&self.mould(&args[0])?))?,
            "arat" => {
                let (a, b) = (self.mould(&args[0])?, self.mould(&args[1])?);
                m(arat_apply(&a, &b))?
            }
            "dari" => {
                let (a, b) = (self.mould(&args[0])?, self.mould(&args[1])?);
                m(dari_bracket(&a, &b))?
            }
            "darit" | "expdarit" => {
                let n = self.mould(&args[0])?;
                let r = self.eval(&args[1])?;
                let plain = matches!(r, Value::Mould(_));
                let r = as_a(r);
                let out = if f == "darit" {
                    lib(sp, darit_apply(&n, &r))?
                } else {
                    let order = if args.len() == 3 { self.int(&args[2], 0)? as usize } else { self.cfg.max_depth };
                    lib(sp, darit_exp_apply(&n, &r, order))?
                };
                if plain {
                    Value::Mould(out.body)
                } else {
                    Value::MouldA(out)
                }
            }
            "expmu" => m(mu_exp(&self.mould(&args[0])?))?,
            "logmu" => m(mu_log(&self.mould(&args[0])?))?,
            "thm32corr" => {
                let mm = self.mould(&args[0])?;
                let c = match self.eval(&args[1])? {
                    Value::Constants(c) => c,
                    Value::Scalar(s) if s.is_zero() => CorrectionSpec::strict(),
                    _ => return eval_err(args[1].span, "expected C04 or 0"),
                };
                let r = self.mould(&args[2])?;
                let cr = if args.len() == 4 { self.mould(&args[3])? } else { lib(sp, fay_defect_mould(&r))? };
                m(thm32_correction(&mm, &c, &r, &cr))?
            }
            "thm34corr" => {
                let r = self.int(&args[0], 2)? as usize;
                if r > self.cfg.max_weight {
                    return eval_err(sp, format!("depth {r} exceeds the weight bound {}", self.cfg.max_weight));
                }
                let tp = lib(sp, dar_inv(&build_that01(r.saturating_sub(3).max(1))))?;
                let f: RatFun = lib(sp, thm34_correction(r, &tp))?;
                Value::Mould(Mould::from_components(Side::U, r, Scalar::zero(), [(r, f)]))
            }
            _ => return eval_err(sp, format!("unknown function '{f}'")),
        })
    }
}

fn as_a(v: Value) -> MouldA {
    match v {
        Value::Mould(m) => MouldA::from_mould(m),
        Value::MouldA(m) => m,
        _ => unreachable!("checked by typecheck"),
    }
}

fn scale(v: Value, s: &Scalar) -> Value {
    match v {
        Value::Scalar(x) => Value::Scalar(&x * s),
        Value::Mould(m) => Value::Mould(m.scale(s)),
        Value::MouldA(m) => Value::MouldA(m.scale(s)),
        Value::Constants(c) => Value::Constants(CorrectionSpec::new(c.entries().map(|(r, x)| (r, x * s)).collect::<Vec<_>>())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EvalConfig {
        EvalConfig { max_depth: 3, max_weight: 14 }
    }

    #[test]
    fn parses_documented_examples() {
        assert!(parse_expr("fay(darinv(That01))").is_ok());
        assert!(parse_expr("dari(U[2],U[4])").is_ok());
        match parse_expr("mu(U[2]") {
            Err(DslError::Parse { pos, msg }) => {
                assert_eq!(pos, 7);
                assert!(msg.contains("end of input"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence_and_printing() {
        let e = parse_expr("1/2*U[4] + z3*U[2]-U[6]").unwrap();
        assert_eq!(print_expr(&e), "1/2 * U[4] + z3 * U[2] - U[6]");
        let e = parse_expr("-(U[4] + U[2])").unwrap();
        assert_eq!(print_expr(&e), "-(U[4] + U[2])");
        let e = parse_expr("U[4] - (U[2] - U[6])").unwrap();
        assert_eq!(parse_expr(&print_expr(&e)).unwrap(), e);
        let e = parse_expr("let x = U[4]; mu(x, x)").unwrap();
        assert_eq!(print_expr(&e), "let x = U[4]; mu(x, x)");
    }

    #[test]
    fn side_errors_carry_spans() {
        let e = parse_expr("circ(U[4])").unwrap();
        match typecheck(&e) {
            Err(DslError::Type { span, .. }) => assert_eq!(span, Span { start: 5, end: 9 }),
            other => panic!("{other:?}"),
        }
        assert!(typecheck(&parse_expr("circ(swap(U[4]))").unwrap()).is_ok());
        assert!(typecheck(&parse_expr("mu(U[4], swap(U[4]))").unwrap()).is_err());
        assert!(typecheck(&parse_expr("mu(U[4])").unwrap()).is_err());
        assert!(typecheck(&parse_expr("U[4] * U[4]").unwrap()).is_err());
        assert!(typecheck(&parse_expr("z4 * U[4]").unwrap()).is_err());
    }

    #[test]
    fn evaluates() {
        let Value::Mould(m) = evaluate(&parse_expr("mu(U[2],U[2])").unwrap(), &cfg()).unwrap() else { panic!() };
        assert_eq!(m.component(2).render('u'), "u1^2*u2^2");
        let Value::Mould(m) = evaluate(&parse_expr("lu(U[2], a)").unwrap(), &cfg()).map(|v| match v {
            Value::MouldA(x) => Value::Mould(x.body),
            v => v,
        }).unwrap() else { panic!() };
        assert_eq!(m.component(1).render('u'), "u1^3");
        let Value::Mould(m) = evaluate(&parse_expr("let x = U[4]; 2*x - x").unwrap(), &cfg()).unwrap() else { panic!() };
        assert_eq!(m.component(1).render('u'), "u1^4");
        let Value::Mould(m) = evaluate(&parse_expr("thm34corr(3)").unwrap(), &cfg()).unwrap() else { panic!() };
        assert_eq!(m.component(3).render('u'), "z3*u2 + z3*u3");
    }
}
