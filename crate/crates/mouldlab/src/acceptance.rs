//! The acceptance suite: ten numbered criteria, each evaluated exactly and
//! reported as pass/fail with human-readable details.
//!
//! Truncation: `max_depth` bounds the depth of generic instances (criteria
//! 3–8, capped at their stated depths); the fixed-depth targets scale with
//! it (criterion 1 uses depth `2·max_depth`, criterion 9 weight
//! `2·max_depth − 1`), so the default depth 5 covers every stated target. A
//! criterion run below its stated coverage is flagged `partial`.

use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::checks::{
    check_push_invariant, fay_defect, fay_defect_mould, verify_equivalences, Mode,
};
use crate::error::Result;
use crate::exactalg::{q, unit, LinearMap, Poly, RatFun, Scalar};
use crate::flexion::{arat_apply, darit_apply, darit_exp_apply, mu_exp};
use crate::library::generators::{
    dari_bracket_family, random_ari_delta_mould, random_even_depth1_mould, random_poly_mould, random_rational,
    BracketInstance,
};
use crate::library::{
    build_const_mould_c, build_that01, build_u1, exp_fay_correction, synthesize_corrected_mould,
    thm32_correction_checked, thm34_correction, CorrectionSpec, SynthesisProfile,
};
use crate::mouldcore::{
    dar, dar_inv, delta, delta_inv, dur, fay, lu, maps, mu, push_u, push_v, swap, Mould, MouldA, Side,
};
use crate::ncseries::{build_t01_nc, ma_ab};

/// Truncation and seed of a suite run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub max_depth: usize,
    pub max_weight: usize,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig { seed: 7, max_depth: 5, max_weight: 14 }
    }
}

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    /// Run below the criterion's stated coverage.
    pub partial: bool,
    pub details: Vec<String>,
}

impl CriterionOutcome {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "title": self.title,
            "passed": self.passed,
            "partial": self.partial,
            "details": self.details,
        })
    }

    /// One summary line, e.g. `[PASS] 2 thm34 table`.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            if self.partial { " (partial)" } else { "" }
        )
    }
}

/// Ids and titles of all criteria.
pub const CRITERIA: [(u32, &str); 10] = [
    (1, "Bernoulli mould satisfies the strict Fay relations"),
    (2, "closed-form corrections for T01 in depths 2..5"),
    (3, "strict equivalences on the Dari-bracket family"),
    (4, "corrected equivalences on synthesized moulds"),
    (5, "flexion correction formula equals brute force"),
    (6, "strict propagation through exp(Darit)"),
    (7, "correction of a mu-exponential"),
    (8, "operator-algebra identities"),
    (9, "noncommutative-series cross-check of T01"),
    (10, "non-reproducible quantities disclosed; runtime budget"),
];

/// Runtime budget of the whole suite at default truncation.
pub const RUNTIME_BUDGET: Duration = Duration::from_secs(600);

struct Ctx {
    passed: bool,
    partial: bool,
    details: Vec<String>,
}

impl Ctx {
    fn new() -> Self {
        Ctx { passed: true, partial: false, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.details.push(format!("{} {what}", if ok { "ok:" } else { "FAILED:" }));
        self.passed &= ok;
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(what.into());
    }

    fn cap(&mut self, wanted: usize, available: usize) -> usize {
        if available < wanted {
            self.partial = true;
            self.note(format!("coverage reduced: {available} instead of {wanted}"));
        }
        wanted.min(available)
    }
}

fn rng(cfg: &AcceptanceConfig, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ stream)
}

/// Runs criterion `id` (1–9). Criterion 10 depends on the measured runtime of
/// the others; see [`disclosure`].
pub fn run_criterion(id: u32, cfg: &AcceptanceConfig) -> CriterionOutcome {
    let title = CRITERIA.iter().find(|(i, _)| *i == id).map(|(_, t)| *t).unwrap_or("unknown criterion");
    let mut ctx = Ctx::new();
    let res = match id {
        1 => criterion1(cfg, &mut ctx),
        2 => criterion2(&mut ctx),
        3 => criterion3(cfg, &mut ctx),
        4 => criterion4(cfg, &mut ctx),
        5 => criterion5(cfg, &mut ctx),
        6 => criterion6(cfg, &mut ctx),
        7 => criterion7(cfg, &mut ctx),
        8 => criterion8(cfg, &mut ctx),
        9 => criterion9(cfg, &mut ctx),
        _ => {
            ctx.check(false, "no such criterion");
            Ok(())
        }
    };
    if let Err(e) = res {
        ctx.check(false, format!("error: {e}"));
    }
    CriterionOutcome { id, title, passed: ctx.passed, partial: ctx.partial, details: ctx.details }
}

/// Criterion 10: lists what this artifact cannot reproduce and checks the
/// measured runtime of criteria 1–9 against [`RUNTIME_BUDGET`].
pub fn disclosure(elapsed: Duration) -> CriterionOutcome {
    let mut ctx = Ctx::new();
    for item in [
        "not reproduced: the elliptic generating series e(tau) and its Fay correction mould",
        "not reproduced: the elliptic associator a(tau) and the group-like A(tau), E(tau)",
        "not reproduced: the depth-4 value displays for the E and log A corrections",
        "replaced by: closed-form corrections (2), equivalences (3, 4), formula-vs-brute-force oracles (5, 6, 7)",
    ] {
        ctx.note(item);
    }
    ctx.check(elapsed <= RUNTIME_BUDGET, "criteria 1-9 ran within the runtime budget");
    CriterionOutcome { id: 10, title: CRITERIA[9].1, passed: ctx.passed, partial: false, details: ctx.details }
}

/// Runs all criteria sequentially, in order.
pub fn run_suite(cfg: &AcceptanceConfig) -> Vec<CriterionOutcome> {
    let start = std::time::Instant::now();
    let mut out: Vec<_> = (1..=9).map(|id| run_criterion(id, cfg)).collect();
    out.push(disclosure(start.elapsed()));
    out
}

fn criterion1(cfg: &AcceptanceConfig, ctx: &mut Ctx) -> Result<()> {
    let d = ctx.cap(10, 2 * cfg.max_depth);
    let t = build_that01(d);
    let rep = fay_defect(&t, Mode::Strict)?;
    let res = fay_defect_mould(&t)?;
    for r in (2..=d).step_by(2) {
        ctx.check(res.component(r).is_zero(), format!("F(T01') vanishes in depth {r}"));
    }
    ctx.check(rep.holds(), format!("strict Fay relations hold in all depths 2..{d}"));
    Ok(())
}

fn criterion2(ctx: &mut Ctx) -> Result<()> {
    let tp = dar_inv(&build_that01(2))?;
    let z3 = Scalar::zeta(3);
    let z5 = Scalar::zeta(5);
    let twelfth = |r: usize, i: usize| -> Result<RatFun> {
        let mut num = vec![0; r];
        num[i] = 1;
        num[i + 1] = -1;
        RatFun::new(Poly::linear(&num).scale_rational(&q(1, 12)), &[unit(r, i), unit(r, i + 1)])
    };
    let expected = [
        (2, RatFun::zero(2)),
        (3, RatFun::from_poly(Poly::linear(&[0, 1, 1]).scale(&z3))),
        (4, RatFun::zero(4)),
        (
            5,
            RatFun::from_poly(Poly::linear(&[0, 1, 1, 1, 1]).scale(&z5))
                .add(&twelfth(5, 1)?.sub(&twelfth(5, 3)?).scale(&z3)),
        ),
    ];
    for (r, want) in expected {
        let got = thm34_correction(r, &tp)?;
        ctx.check(got.equals(&want)?, format!("depth {r}: {}", got.render('u')));
    }
    Ok(())
}

fn strict_family(cfg: &AcceptanceConfig, ctx: &mut Ctx, depth: usize) -> Result<Vec<BracketInstance>> {
    let weight = ctx.cap(14, cfg.max_weight);
    let fam = dari_bracket_family(depth, weight as u32)?;
    ctx.note(format!(
        "family (depth <= {depth}, degree <= {weight}): {}",
        fam.iter().map(|b| b.label.as_str()).collect::<Vec<_>>().join(" ")
    ));
    Ok(fam)
}

fn criterion3(cfg: &AcceptanceConfig, ctx: &mut Ctx) -> Result<()> {
    let depth = ctx.cap(4, cfg.max_depth);
    let fam = strict_family(cfg, ctx, depth)?;
    if !ctx.partial {
        ctx.check(fam.len() >= 6, format!("{} nonzero instances (need 6)", fam.len()));
    }
    for b in &fam {
        let m = delta_inv(&b.n)?;
        let rep = verify_equivalences(&m, Some(&CorrectionSpec::strict()), Mode::Strict)?;
        ctx.check(
            rep.all_hold() && rep.agree && rep.matches_expected == Some(true),
            format!("{}: Fay, first alternality and circ-neutrality hold strictly", b.label),
        );
    }
    Ok(())
}

/// Synthesized corrected moulds: (label, profile, planted constants).
fn corrected_family(cfg: &AcceptanceConfig, ctx: &mut Ctx) -> Result<Vec<(String, Mould, CorrectionSpec)>> {
    let d = cfg.max_depth;
    let c3 = || (3usize, Scalar::zeta(3).scale(&q(1, 3)));
    let mut specs: Vec<(Vec<(usize, usize)>, CorrectionSpec)> = vec![
        (vec![(3, 7)], CorrectionSpec::new([c3()])),
        (vec![(2, 9), (3, 7)], CorrectionSpec::new([(3, Scalar::zeta(5).scale(&q(-2, 1)) + Scalar::from_rational(q(1, 2)))])),
        (vec![(3, 7), (4, 10)], CorrectionSpec::new([c3()])),
    ];
    if ctx.cap(5, d) >= 5 {
        specs.push((vec![(3, 7), (5, 11)], build_const_mould_c(5)));
    }
    let mut out = Vec::new();
    for (k, (blocks, spec)) in specs.into_iter().enumerate() {
        let blocks: Vec<_> = blocks.into_iter().filter(|(r, _)| *r <= d).collect();
        let spec = spec.truncate(d);
        let profile = SynthesisProfile::new(blocks.clone(), d.max(3));
        let m = synthesize_corrected_mould(&profile, &spec, cfg.seed.wrapping_add(k as u64))?.truncate(d);
        let label = format!(
            "synth{blocks:?} c={{{}}}",
            spec.entries().map(|(r, c)| format!("{r}: {c}")).collect::<Vec<_>>().join(", ")
        );
        out.push((label, m, spec));
    }
    Ok(out)
}

fn criterion4(cfg: &AcceptanceConfig, ctx: &mut Ctx) -> Result<()> {
    let fam = corrected_family(cfg, ctx)?;
    ctx.check(fam.len() >= 3, format!("{} synthesized instances", fam.len()));
    for (label, m, spec) in &fam {
        let rep = verify_equivalences(m, Some(spec), Mode::Corrected)?;
        ctx.check(
            rep.all_hold() && rep.agree && rep.matches_expected == Some(true),
            format!("{label}: three corrected conditions hold with identical constants"),
        );
        let res = fay(&dur(m)?)?;
        let shape_ok = (2..=m.max_depth()).all(|r| {
            let mut tail = vec![1; r];
            tail[0] = 0;
            let want = Poly::linear(&tail).scale(&spec.get(r).scale(&q(-(r as i64), 1)));
            res.component(r).equals(&RatFun::from_poly(want)).unwrap_or(false)
        });
        ctx.check(shape_ok, format!("{label}: Fay residue is exactly -r*c_r*(u2+...+ur)"));
    }
    Ok(())
}

fn criterion5(cfg: &AcceptanceConfig, ctx: &mut Ctx) -> Result<()> {
    let d = ctx.cap(4, cfg.max_depth);
    let mut g = rng(cfg, 5);
    let strict = strict_family(cfg, ctx, d)?;
    let corrected = corrected_family(cfg, ctx)?;
    let mut ms: Vec<(String, Mould, CorrectionSpec)> = strict
        .iter()
        .take(3)
        .map(|b| Ok((format!("D^-1{}", b.label), delta_inv(&b.n)?.truncate(d), CorrectionSpec::strict())))
        .collect::<Result<_>>()?;
    ms.extend(corrected.into_iter().take(3).map(|(l, m, c)| (l, m.truncate(d), c.truncate(d))));
    let mut pairs = 0;
    for (k, (label, m, spec)) in ms.iter().enumerate() {
        let rs: Vec<(String, Mould)> = if k % 2 == 0 {
            vec![("T01".into(), build_that01(d)), ("random R".into(), random_even_depth1_mould(&mut g, d, 3, 3)?)]
        } else {
            vec![("random R".into(), random_even_depth1_mould(&mut g, d, 3, 3)?)]
        };
        for (rl, r) in rs {
            let c_rprime = fay_defect_mould(&r)?;
            let formula = thm32_correction_checked(m, spec, &r, &c_rprime)?;
            let oracle = fay_defect_mould(&darit_apply(&delta(m)?, &MouldA::from_mould(r))?.body)?;
            ctx.check(formula.equals(&oracle), format!("M = {label}, R = {rl}: formula equals brute force"));
            pairs += 1;
        }
    }
    ctx.check(pairs >= 5, format!("{pairs} (M, R) pairs"));
    Ok(())
}

fn criterion6(cfg: &AcceptanceConfig, ctx: &mut Ctx) -> Result<()> {
    let d = ctx.cap(5, cfg.max_depth);
    let fam = strict_family(cfg, ctx, d)?;
    let t = MouldA::from_mould(build_that01(d));
    for b in fam.iter().filter(|b| b.n.min_depth().is_some_and(|m| m <= d)).take(3) {
        let n = b.n.truncate(d);
        let e = darit_exp_apply(&n, &t, d)?;
        let res = fay_defect_mould(&e.body)?;
        ctx.check(
            e.a_coeff.is_zero() && (2..=d).all(|r| res.component(r).is_zero()),
            format!("N = {}: exp(Darit(N))*T01 satisfies the strict Fay relations in depths <= {d}", b.label),
        );
    }
    Ok(())
}

fn criterion7(cfg: &AcceptanceConfig, ctx: &mut Ctx) -> Result<()> {
    let d = ctx.cap(4, cfg.max_depth);
    let mut g = rng(cfg, 7);
    for k in 0..4 {
        let p = random_poly_mould(&mut g, Side::U, d, 3, 3);
        let pp = dar_inv(&p)?;
        let c = fay(&pp)?;
        let formula = exp_fay_correction(&p, &c)?;
        let oracle = fay(&mu_exp(&pp)?)?;
        ctx.check(formula.equals(&oracle), format!("random P #{k}: correction equals F(exp(P'))"));
        if d >= 2 {
            let gf = pp.component(1);
            let at = |args: Vec<i64>| gf.substitute(&LinearMap::new(2, vec![args]));
            let three = at(vec![1, 0])?
                .mul(&at(vec![0, 1])?)
                .add(&at(vec![-1, 0])?.mul(&at(vec![1, 1])?))
                .add(&at(vec![0, 1])?.mul(&at(vec![-1, -1])?))
                .scale(&Scalar::from_rational(q(1, 2)));
            let got = formula.component(2).sub(&c.component(2));
            ctx.check(got.equals(&three)?, format!("random P #{k}: depth-2 three-product formula"));
        }
    }
    Ok(())
}

const INSTANCES: usize = 20;

fn criterion8(cfg: &AcceptanceConfig, ctx: &mut Ctx) -> Result<()> {
    let d = ctx.cap(3, cfg.max_depth);
    let mut g = rng(cfg, 8);
    let tally = |ctx: &mut Ctx, name: &str, results: Vec<bool>| {
        let ok = results.iter().filter(|b| **b).count();
        ctx.check(ok == results.len() && results.len() >= INSTANCES, format!("{name}: {ok}/{} instances", results.len()));
    };
    let mut randoms = Vec::new();
    for _ in 0..INSTANCES {
        randoms.push(random_ari_delta_mould(&mut g, d, 3, 2)?);
    }
    let eq = |a: Result<Mould>, b: Result<Mould>| -> Result<bool> { Ok(a?.equals(&b?)) };

    let mut res = Vec::new();
    for a in &randoms {
        res.push(eq(delta(a), dar(&dur(a)?))? && eq(delta(a), dur(&dar(a)?))?);
    }
    tally(ctx, "delta = dar.dur = dur.dar", res);

    let mut res = Vec::new();
    for a in &randoms {
        res.push(eq(swap(&push_u(a, -1)?), push_v(&swap(a)?, 1))?);
    }
    tally(ctx, "swap.push_u^-1 = push_v.swap", res);

    // Push-invariant inputs: combinations of the strict family and synthesized moulds.
    let fam: Vec<Mould> = dari_bracket_family(d, 14)?
        .iter()
        .map(|b| delta_inv(&b.n))
        .collect::<Result<_>>()?;
    let mut res = Vec::new();
    for (k, random) in randoms.iter().enumerate() {
        let a = if k % 2 == 0 {
            random.clone()
        } else {
            let mut m = synthesize_corrected_mould(
                &SynthesisProfile::new(vec![(3.min(d), 7)], d),
                &CorrectionSpec::new([(3.min(d), random_rational(&mut g))].into_iter().filter(|(r, _)| *r >= 3)),
                k as u64,
            )?;
            for f in &fam {
                m = m.add(&f.scale(&random_rational(&mut g)))?;
            }
            m
        };
        let lhs = check_push_invariant(&a)?.holds();
        let sw = swap(&a)?;
        let rhs = push_v(&sw, 1)?.equals(&sw);
        res.push(lhs == rhs && lhs == (k % 2 == 1));
    }
    tally(ctx, "push_u-invariance <=> push_v-invariance of swap", res);

    let mut res = Vec::new();
    for a in &randoms {
        let lhs = swap(&fay(a)?)?;
        let s = swap(a)?;
        let mut ok = true;
        for r in 1..=d {
            let sh = RatFun::sum(
                r,
                maps::shuffles(1, r)
                    .iter()
                    .map(|p| s.component(r).substitute(&maps::permutation(p)))
                    .collect::<Result<Vec<_>>>()?,
            );
            let rhs = s.component(r).add(&sh.substitute(&maps::push_v(r))?);
            ok &= lhs.component(r).equals(&rhs)?;
        }
        res.push(ok);
    }
    tally(ctx, "swap(F(A')) = swap(A') + push_v(swap(A')(sh((v1),(v2..vr))))", res);

    let mut res = Vec::new();
    for a in &randoms {
        let sw = swap(a)?;
        let mut ok = true;
        for r in 1..=d {
            let (f, v) = (a.component(r), sw.component(r));
            let (mut pf, mut cv) = (f.clone(), v.clone());
            for _ in 0..=r {
                pf = pf.substitute(&maps::push_u(r))?;
            }
            for _ in 0..r {
                cv = cv.substitute(&maps::circ(r))?;
            }
            ok &= pf.equals(&f)? && cv.equals(&v)?;
        }
        res.push(ok);
    }
    tally(ctx, "push_u^(r+1) = id and circ^r = id in depth r", res);

    let mut res = Vec::new();
    for a in &randoms {
        res.push(swap(&swap(a)?)?.equals(a));
    }
    tally(ctx, "swap.swap = id", res);

    let mut res = Vec::new();
    for _ in 0..INSTANCES {
        let mut t: Vec<Mould> = (0..3).map(|_| random_ari_delta_mould(&mut g, d, 2, 2)).collect::<Result<_>>()?;
        for m in &mut t {
            m.set_empty_value(random_rational(&mut g));
        }
        res.push(mu(&mu(&t[0], &t[1])?, &t[2])?.equals(&mu(&t[0], &mu(&t[1], &t[2])?)?));
    }
    tally(ctx, "mu associativity", res);

    let mut res = Vec::new();
    for _ in 0..INSTANCES {
        let t: Vec<Mould> = (0..3).map(|_| random_ari_delta_mould(&mut g, d, 2, 2)).collect::<Result<_>>()?;
        let j = lu(&t[0], &lu(&t[1], &t[2])?)?
            .add(&lu(&t[1], &lu(&t[2], &t[0])?)?)?
            .add(&lu(&t[2], &lu(&t[0], &t[1])?)?)?;
        res.push(j.is_zero());
    }
    tally(ctx, "lu Jacobi identity", res);

    let mut res = Vec::new();
    for _ in 0..INSTANCES {
        let m = random_poly_mould(&mut g, Side::U, d, 2, 2);
        let q1 = random_poly_mould(&mut g, Side::U, d, 2, 2);
        let q2 = random_poly_mould(&mut g, Side::U, d, 2, 2);
        let lhs = arat_apply(&m, &lu(&q1, &q2)?)?;
        let rhs = lu(&arat_apply(&m, &q1)?, &q2)?.add(&lu(&q1, &arat_apply(&m, &q2)?)?)?;
        res.push(lhs.equals(&rhs));
    }
    tally(ctx, "arat Leibniz rule for lu", res);

    let mut res_a = Vec::new();
    let mut res_u1 = Vec::new();
    for _ in 0..INSTANCES {
        let n = random_poly_mould(&mut g, Side::U, d, 4, 3);
        res_a.push(darit_apply(&n, &MouldA::generator(d))?.equals(&MouldA::from_mould(n.clone())));
        res_u1.push(darit_apply(&n, &MouldA::from_mould(build_u1(d)))?.is_zero());
    }
    tally(ctx, "Darit(N).a = N", res_a);
    tally(ctx, "Darit(N).U1 = 0", res_u1);

    Ok(())
}

fn criterion9(cfg: &AcceptanceConfig, ctx: &mut Ctx) -> Result<()> {
    let w = ctx.cap(9, 2 * cfg.max_depth - 1);
    let got = ma_ab(&build_t01_nc(w))?;
    let want = MouldA {
        a_coeff: -Scalar::one(),
        body: build_u1(w).scale(&Scalar::from_rational(q(-1, 2))).add(&build_that01(w))?,
    };
    ctx.check(got.a_coeff == want.a_coeff, format!("a-coefficient {}", got.a_coeff));
    for r in 1..=w {
        ctx.check(
            got.body.component(r).equals(&want.body.component(r))?,
            format!("depth {r}: ma(t01) = -1/2 U1 + T01"),
        );
    }
    Ok(())
}
