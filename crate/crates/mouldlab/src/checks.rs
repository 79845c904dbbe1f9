//! Property checkers with exact witnesses: alternality, push-invariance,
//! circ-neutrality, first alternality, Fay relations, krv_ell membership and
//! the three-way equivalence harness.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{Poly, RatFun, Rational, Scalar};
use crate::library::CorrectionSpec;
use crate::mouldcore::{dar_inv, delta_inv, dur, fay, maps, push_u, shuffle_sum, swap, Mould, Side};
use crate::serial::{constants_to_json, ratfun_to_json, scalar_to_json};

/// Whether relations must hold exactly or up to a constant mould.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Strict,
    Corrected,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        }
    }
}

/// The outcome at one depth.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DepthResult {
    pub verdict: Verdict,
    /// Nonzero residue (always present on failure).
    pub residue: Option<RatFun>,
    /// Extracted constant `c_r` (corrected variants, nonzero only).
    pub constant: Option<Scalar>,
    /// Informational remark (e.g. depth-1 parity, residue shape).
    pub note: Option<String>,
}

impl DepthResult {
    fn holds() -> Self {
        DepthResult { verdict: Verdict::Holds, residue: None, constant: None, note: None }
    }

    fn info(note: String) -> Self {
        DepthResult { note: Some(note), ..DepthResult::holds() }
    }
}

/// A failure witness: the depth, the index set describing the relation
/// (shuffle split, number of rotations, …) and the nonzero residue.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub depth: usize,
    pub relation: String,
    pub indices: Vec<usize>,
    pub residue: RatFun,
    pub side: Side,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckReport {
    pub property: String,
    pub side: Side,
    pub depths: BTreeMap<usize, DepthResult>,
    pub witnesses: Vec<Witness>,
    /// For reports combining several routes: whether the routes agree.
    pub agreement: Option<bool>,
}

impl CheckReport {
    fn new(property: &str, side: Side) -> Self {
        CheckReport { property: property.to_string(), side, depths: BTreeMap::new(), witnesses: Vec::new(), agreement: None }
    }

    fn fail(&mut self, depth: usize, relation: &str, indices: Vec<usize>, residue: RatFun, note: Option<String>) {
        let entry = self.depths.entry(depth).or_insert_with(DepthResult::holds);
        entry.verdict = Verdict::Fails;
        if entry.residue.is_none() {
            entry.residue = Some(residue.clone());
        }
        if note.is_some() {
            entry.note = note;
        }
        self.witnesses.push(Witness { depth, relation: relation.to_string(), indices, residue, side: self.side });
    }

    /// True iff every depth holds and (when several routes were compared) they agree.
    pub fn holds(&self) -> bool {
        self.depths.values().all(|d| d.verdict == Verdict::Holds) && self.agreement != Some(false)
    }

    /// The extracted constants as a constant mould.
    pub fn constants(&self) -> CorrectionSpec {
        CorrectionSpec::new(self.depths.iter().filter_map(|(r, d)| d.constant.clone().map(|c| (*r, c))))
    }

    pub fn to_json(&self) -> Value {
        let var = self.side.var();
        let depths: BTreeMap<String, Value> = self
            .depths
            .iter()
            .map(|(r, d)| {
                let mut o = json!({ "verdict": d.verdict.name() });
                if let Some(res) = &d.residue {
                    o["residue"] = ratfun_to_json(res);
                    o["residue_text"] = Value::String(res.render(var));
                }
                if let Some(c) = &d.constant {
                    o["constant"] = scalar_to_json(c);
                    o["constant_text"] = Value::String(c.to_string());
                }
                if let Some(n) = &d.note {
                    o["note"] = Value::String(n.clone());
                }
                (r.to_string(), o)
            })
            .collect();
        let witnesses: Vec<Value> = self
            .witnesses
            .iter()
            .map(|w| {
                json!({
                    "depth": w.depth,
                    "relation": w.relation,
                    "indices": w.indices,
                    "residue": ratfun_to_json(&w.residue),
                    "residue_text": w.residue.render(w.side.var()),
                })
            })
            .collect();
        let mut v = json!({
            "property": self.property,
            "holds": self.holds(),
            "depths": depths,
            "witnesses": witnesses,
            "constants": constants_to_json(&self.constants()),
        });
        if let Some(a) = self.agreement {
            v["agreement"] = Value::Bool(a);
        }
        v
    }

    pub fn render_text(&self) -> String {
        let mut out = vec![format!("{}: {}", self.property, if self.holds() { "holds" } else { "fails" })];
        for (r, d) in &self.depths {
            let mut line = format!("  depth {r}: {}", d.verdict.name());
            if let Some(c) = &d.constant {
                line.push_str(&format!(", c_{r} = {c}"));
            }
            if let Some(n) = &d.note {
                line.push_str(&format!(" ({n})"));
            }
            out.push(line);
        }
        if let Some(a) = self.agreement {
            out.push(format!("  routes agree: {a}"));
        }
        for w in &self.witnesses {
            out.push(format!(
                "  witness: depth {} {} {:?}: {}",
                w.depth,
                w.relation,
                w.indices,
                w.residue.render(w.side.var())
            ));
        }
        out.join("\n")
    }
}

fn parity_note(f: &RatFun) -> Result<String> {
    let neg = f.substitute(&crate::exactalg::LinearMap::new(1, vec![vec![-1]]))?;
    Ok(if f.is_zero() {
        "depth 1: zero".to_string()
    } else if neg.equals(f)? {
        "depth 1: even".to_string()
    } else if neg.equals(&f.neg())? {
        "depth 1: odd".to_string()
    } else {
        "depth 1: mixed parity".to_string()
    })
}

fn depth_one_info(report: &mut CheckReport, a: &Mould) -> Result<()> {
    if a.max_depth() >= 1 {
        report.depths.insert(1, DepthResult::info(parity_note(&a.component(1))?));
    }
    Ok(())
}

/// Alternality: every shuffle sum `A(sh((x₁…x_i),(x_{i+1}…x_r)))`, `1 ≤ i < r`, vanishes.
pub fn check_alternal(a: &Mould) -> Result<CheckReport> {
    let mut rep = CheckReport::new("alternal", a.side());
    depth_one_info(&mut rep, a)?;
    for r in 2..=a.max_depth() {
        rep.depths.insert(r, DepthResult::holds());
        let f = a.component(r);
        if f.is_zero() {
            continue;
        }
        for i in 1..r {
            let s = shuffle_sum(&f, i)?;
            if !s.is_zero() {
                rep.fail(r, "shuffle", vec![i], s, None);
            }
        }
    }
    Ok(rep)
}

/// Push-invariance `A = push_u A` in every depth `r ≥ 2`.
pub fn check_push_invariant(a: &Mould) -> Result<CheckReport> {
    a.expect_u()?;
    let mut rep = CheckReport::new("push-invariant", Side::U);
    depth_one_info(&mut rep, a)?;
    let pushed = push_u(a, 1)?;
    for r in 2..=a.max_depth() {
        rep.depths.insert(r, DepthResult::holds());
        let res = a.component(r).sub(&pushed.component(r));
        if !res.is_zero() {
            rep.fail(r, "push", vec![1], res, None);
        }
    }
    Ok(rep)
}

/// Classifies a residue that must vanish (strict) or be constant
/// (corrected, with `sum = −r·c_r`).
fn classify_constant(rep: &mut CheckReport, r: usize, relation: &str, indices: Vec<usize>, sum: RatFun, mode: Mode) {
    if sum.is_zero() {
        return;
    }
    match (mode, sum.as_constant()) {
        (Mode::Corrected, Some(c)) => {
            let cr = c.scale(&Rational::new((-1).into(), (r as i64).into()));
            rep.depths.get_mut(&r).unwrap().constant = Some(cr);
        }
        (Mode::Corrected, None) => rep.fail(r, relation, indices, sum, Some("residue is not constant".into())),
        (Mode::Strict, _) => rep.fail(r, relation, indices, sum, None),
    }
}

/// Circ-neutrality of a `v`-mould: the sum of the `r` cyclic rotations
/// vanishes (strict) or equals the constant `−r·c_r` (corrected).
pub fn check_circ_neutral(b: &Mould, mode: Mode) -> Result<CheckReport> {
    b.expect_side(Side::V)?;
    let mut rep = CheckReport::new("circ-neutral", Side::V);
    depth_one_info(&mut rep, b)?;
    for r in 2..=b.max_depth() {
        rep.depths.insert(r, DepthResult::holds());
        let f = b.component(r);
        let terms = (0..r)
            .map(|k| f.substitute(&maps::circ(r).power(k)))
            .collect::<Result<Vec<_>>>()?;
        classify_constant(&mut rep, r, "cyclic-sum", (0..r).collect(), RatFun::sum(r, terms), mode);
    }
    Ok(rep)
}

/// First alternality `B(sh((v₁),(v₂…v_r))) = 0` (strict) or `= −r·c_r` (corrected).
pub fn check_first_alternality(b: &Mould, mode: Mode) -> Result<CheckReport> {
    b.expect_side(Side::V)?;
    let mut rep = CheckReport::new("first-alternality", Side::V);
    depth_one_info(&mut rep, b)?;
    for r in 2..=b.max_depth() {
        rep.depths.insert(r, DepthResult::holds());
        let s = shuffle_sum(&b.component(r), 1)?;
        classify_constant(&mut rep, r, "shuffle", vec![1], s, mode);
    }
    Ok(rep)
}

/// If `f` equals `k·(u₂+⋯+u_r)` for a scalar `k`, returns `k`.
pub fn linear_tail_coefficient(f: &RatFun) -> Option<Scalar> {
    let r = f.arity();
    let p = f.as_poly()?;
    if r < 2 || p.is_zero() {
        return None;
    }
    let k = p.terms().next().map(|(_, c)| c.clone())?;
    let mut tail = vec![1; r];
    tail[0] = 0;
    (Poly::linear(&tail).scale(&k) == *p).then_some(k)
}

/// Shape of a Fay residue.
pub fn fay_shape(f: &RatFun) -> String {
    if f.is_zero() {
        "zero".into()
    } else if linear_tail_coefficient(f).is_some() {
        "multiple of u2+...+ur".into()
    } else if f.as_poly().map(|p| p.is_homogeneous() && p.degree() == Some(1)).unwrap_or(false) {
        "linear".into()
    } else {
        "general".into()
    }
}

/// Classifies the Fay residue `F(B)` of an already-primed mould `B`: zero;
/// or, in corrected mode, exactly `−r·c_r(u₂+⋯+u_r)` with `c_r` extracted.
pub fn fay_relations(b_prime: &Mould, mode: Mode) -> Result<CheckReport> {
    b_prime.expect_u()?;
    let mut rep = CheckReport::new("fay", Side::U);
    let res = fay(b_prime)?;
    if b_prime.max_depth() >= 1 {
        let f1 = res.component(1);
        let note = format!("depth 1 residue {}: {}", fay_shape(&f1), f1.render('u'));
        rep.depths.insert(1, DepthResult::info(note));
    }
    for r in 2..=b_prime.max_depth() {
        let f = res.component(r);
        let mut d = DepthResult::holds();
        if !f.is_zero() {
            d.note = Some(fay_shape(&f));
        }
        rep.depths.insert(r, d);
        if f.is_zero() {
            continue;
        }
        match (mode, linear_tail_coefficient(&f)) {
            (Mode::Corrected, Some(k)) => {
                let entry = rep.depths.get_mut(&r).unwrap();
                entry.constant = Some(k.scale(&Rational::new((-1).into(), (r as i64).into())));
                entry.residue = Some(f);
            }
            _ => rep.fail(r, "fay", (0..=r).collect(), f, None),
        }
    }
    Ok(rep)
}

/// The Fay defect `F(dar⁻¹A)`, classified per depth.
pub fn fay_defect(a: &Mould, mode: Mode) -> Result<CheckReport> {
    let mut rep = fay_relations(&dar_inv(a)?, mode)?;
    rep.property = "fay-defect".into();
    Ok(rep)
}

/// The residue mould `F(dar⁻¹A)`.
pub fn fay_defect_mould(a: &Mould) -> Result<Mould> {
    fay(&dar_inv(a)?)
}

fn merge_into(target: &mut CheckReport, sub: &CheckReport) {
    for (r, d) in &sub.depths {
        let entry = target.depths.entry(*r).or_insert_with(DepthResult::holds);
        if d.verdict == Verdict::Fails {
            entry.verdict = Verdict::Fails;
            if entry.residue.is_none() {
                entry.residue = d.residue.clone();
            }
        }
        if entry.note.is_none() {
            entry.note = d.note.clone();
        }
    }
    for w in &sub.witnesses {
        let mut w = w.clone();
        w.relation = format!("{}:{}", sub.property, w.relation);
        target.witnesses.push(w);
    }
}

/// krv_ell membership of a polynomial mould `F`: `M = Δ⁻¹F` alternal,
/// push-invariant, with `swap M + C` circ-neutral for some constant mould
/// `C`; cross-validated by the Fay route `F(dar⁻¹F) = −r·c_r(u₂+⋯+u_r)`.
pub fn check_krv_ell(f: &Mould) -> Result<CheckReport> {
    f.expect_u()?;
    let m = delta_inv(f)?;
    let alt = check_alternal(&m)?;
    let push = check_push_invariant(&m)?;
    let circ_rep = check_circ_neutral(&swap(&m)?, Mode::Corrected)?;
    let fay_rep = fay_defect(f, Mode::Corrected)?;
    let mut rep = CheckReport::new("krv", Side::U);
    for sub in [&alt, &push, &circ_rep] {
        merge_into(&mut rep, sub);
    }
    for (r, d) in circ_rep.depths.iter() {
        if let Some(c) = &d.constant {
            rep.depths.get_mut(r).unwrap().constant = Some(c.clone());
        }
    }
    let agree = circ_rep.holds() == fay_rep.holds() && circ_rep.constants() == fay_rep.constants();
    rep.agreement = Some(agree);
    if !agree {
        merge_into(&mut rep, &fay_rep);
    }
    Ok(rep)
}

/// The three equivalent conditions (Fay, first alternality, circ-neutrality) and their comparison.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub mode: Mode,
    pub fay: CheckReport,
    pub first_alternality: CheckReport,
    pub circ_neutral: CheckReport,
    /// All three verdicts coincide and all three extracted constant moulds coincide.
    pub agree: bool,
    /// Whether the extracted constants equal the supplied ones (if any).
    pub matches_expected: Option<bool>,
}

impl EquivalenceReport {
    pub fn all_hold(&self) -> bool {
        self.fay.holds() && self.first_alternality.holds() && self.circ_neutral.holds()
    }

    pub fn constants(&self) -> CorrectionSpec {
        self.circ_neutral.constants()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "property": "equiv",
            "mode": match self.mode { Mode::Strict => "strict", Mode::Corrected => "corrected" },
            "agree": self.agree,
            "all_hold": self.all_hold(),
            "routes": {
                "fay": self.fay.to_json(),
                "first_alternality": self.first_alternality.to_json(),
                "circ_neutral": self.circ_neutral.to_json(),
            },
        });
        if let Some(m) = self.matches_expected {
            v["matches_expected"] = Value::Bool(m);
        }
        v
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("equivalence routes agree: {}\n", self.agree);
        for r in [&self.fay, &self.first_alternality, &self.circ_neutral] {
            s.push_str(&r.render_text());
            s.push('\n');
        }
        if let Some(m) = self.matches_expected {
            s.push_str(&format!("constants match expected: {m}\n"));
        }
        s
    }
}

/// Evaluates the three equivalent conditions on an alternal, push-invariant
/// `M`: the Fay relations of `dur M`, first alternality of `swap M`, and
/// circ-neutrality of `swap M`, each up to a constant mould in corrected mode.
pub fn verify_equivalences(m: &Mould, expected: Option<&CorrectionSpec>, mode: Mode) -> Result<EquivalenceReport> {
    m.expect_u()?;
    let alt = check_alternal(m)?;
    let push = check_push_invariant(m)?;
    if !alt.holds() || !push.holds() {
        return Err(Error::Inapplicable(format!(
            "mould is not {}",
            if !alt.holds() { "alternal" } else { "push-invariant" }
        )));
    }
    let fay_rep = fay_relations(&dur(m)?, mode)?;
    let sw = swap(m)?;
    let first = check_first_alternality(&sw, mode)?;
    let circ_rep = check_circ_neutral(&sw, mode)?;
    let verdicts = |rep: &CheckReport| -> Vec<(usize, Verdict)> {
        rep.depths.iter().filter(|(r, _)| **r >= 2).map(|(r, d)| (*r, d.verdict)).collect()
    };
    let agree = verdicts(&fay_rep) == verdicts(&first)
        && verdicts(&first) == verdicts(&circ_rep)
        && fay_rep.constants() == first.constants()
        && first.constants() == circ_rep.constants();
    let matches_expected = expected.map(|c| {
        let c = c.truncate(m.max_depth());
        fay_rep.constants() == c && first.constants() == c && circ_rep.constants() == c
    });
    Ok(EquivalenceReport { mode, fay: fay_rep, first_alternality: first, circ_neutral: circ_rep, agree, matches_expected })
}

/// Recomputes the sum named by a witness, for auditing failure reports.
pub fn replay_witness(a: &Mould, w: &Witness) -> Result<RatFun> {
    let f = a.component(w.depth);
    let r = w.depth;
    match w.relation.as_str() {
        "shuffle" => shuffle_sum(&f, w.indices[0]),
        "push" => Ok(f.sub(&push_u(a, 1)?.component(r))),
        "cyclic-sum" => {
            let terms = (0..r).map(|k| f.substitute(&maps::circ(r).power(k))).collect::<Result<Vec<_>>>()?;
            Ok(RatFun::sum(r, terms))
        }
        "fay" => Ok(fay(&a.truncate(r))?.component(r)),
        other => Err(Error::Malformed(format!("unknown relation {other}"))),
    }
}
