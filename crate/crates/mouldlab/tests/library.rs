use mouldlab::checks::{fay_defect_mould, verify_equivalences, Mode};
use mouldlab::exactalg::{q, Poly, RatFun, Scalar};
use mouldlab::flexion::{dari_bracket, darit_apply_mould, darit_exp_apply, mu_exp};
use mouldlab::library::generators::{random_even_depth1_mould, random_poly_mould};
use mouldlab::library::{
    bernoulli, build_const_mould_c, build_that01, build_u, build_u1, exp_fay_correction, grouplike_fay_propagate,
    synthesize_corrected_mould, thm32_correction, thm32_correction_checked, thm34_correction, CorrectionSpec,
    SynthesisProfile,
};
use mouldlab::mouldcore::{dar_inv, delta, delta_inv, fay, Mould, MouldA, Side};
use mouldlab::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c3() -> CorrectionSpec {
    CorrectionSpec::new([(3, Scalar::zeta(3).scale(&q(1, 3)))])
}

fn planted(d: usize, seed: u64) -> Mould {
    synthesize_corrected_mould(&SynthesisProfile::new(vec![(3, 7)], d), &c3(), seed).unwrap()
}

fn strict_m(d: usize) -> Mould {
    delta_inv(&dari_bracket(&build_u(4, d), &build_u(6, d)).unwrap()).unwrap()
}

fn linear(coeffs: &[i64], scale: Scalar) -> RatFun {
    RatFun::from_poly(Poly::linear(coeffs).scale(&scale))
}

#[test]
fn bernoulli_numbers() {
    assert_eq!(bernoulli(1), q(-1, 2));
    assert_eq!(bernoulli(2), q(1, 6));
    assert_eq!(bernoulli(4), q(-1, 30));
    assert_eq!(bernoulli(12), q(-691, 2730));
    for n in (3..20).step_by(2) {
        assert_eq!(bernoulli(n), q(0, 1));
    }
}

#[test]
fn named_builders() {
    let u4 = build_u(4, 3);
    assert_eq!(u4.component(1).render('u'), "u1^4");
    assert!(u4.component(2).is_zero() && u4.component(3).is_zero());
    assert_eq!(build_u1(2).component(1).render('u'), "-u1");
    for i in 1..5 {
        assert!(delta_inv(&build_u(2 * i, 3)).unwrap().equals(&build_u(2 * i - 2, 3)));
    }
    let t = build_that01(4);
    assert!(t.component(1).is_zero() && t.component(3).is_zero());
    assert!(t.component(2).equals(&linear(&[1, -1], Scalar::frac(1, 12))).unwrap());
    assert!(t.component(4).equals(&linear(&[1, -3, 3, -1], Scalar::frac(-1, 720))).unwrap());
    let c = build_const_mould_c(7);
    assert_eq!(c.get(3), Scalar::zeta(3).scale(&q(1, 3)));
    assert_eq!(c.get(5), Scalar::zeta(5).scale(&q(1, 5)));
    assert!(c.get(4).is_zero() && c.get(1).is_zero() && c.get(2).is_zero());
}

#[test]
fn thm34_small_depths_and_parity() {
    let tp = dar_inv(&build_that01(4)).unwrap();
    assert!(thm34_correction(2, &tp).unwrap().is_zero());
    assert!(thm34_correction(3, &tp).unwrap().equals(&linear(&[0, 1, 1], Scalar::zeta(3))).unwrap());
    for r in [4, 6, 8] {
        assert!(thm34_correction(r, &tp).unwrap().is_zero(), "depth {r}");
    }
    assert!(matches!(thm34_correction(1, &tp), Err(Error::Inapplicable(_))));
}

#[test]
fn thm34_depth_seven() {
    // ζ7(u2+…+u7) + ζ3(T'(u2..u5) − T'(u4..u7)) + ζ5(T'(u2,u3) − T'(u6,u7))
    let tp = dar_inv(&build_that01(4)).unwrap();
    let t4 = tp.component(4);
    let t2 = tp.component(2);
    let want = linear(&[0, 1, 1, 1, 1, 1, 1], Scalar::zeta(7))
        .add(&t4.embed(1, 7).sub(&t4.embed(3, 7)).scale(&Scalar::zeta(3)))
        .add(&t2.embed(1, 7).sub(&t2.embed(5, 7)).scale(&Scalar::zeta(5)));
    assert!(thm34_correction(7, &tp).unwrap().equals(&want).unwrap());
}

#[test]
fn thm32_strict_examples() {
    let d = 4;
    let m = strict_m(d);
    let t = build_that01(d);
    let zero = Mould::zero(Side::U, d);
    let formula = thm32_correction(&m, &CorrectionSpec::strict(), &t, &zero).unwrap();
    assert!(formula.is_zero());
    let oracle = fay_defect_mould(&darit_apply_mould(&delta(&m).unwrap(), &t).unwrap()).unwrap();
    assert!(oracle.is_zero());
}

#[test]
fn thm32_corrected_examples() {
    let d = 4;
    let m = planted(d, 2);
    let t = build_that01(d);
    let zero = Mould::zero(Side::U, d);
    let formula = thm32_correction_checked(&m, &c3(), &t, &zero).unwrap();
    for r in (2..=d).step_by(2) {
        assert!(formula.component(r).is_zero(), "even depth {r}");
    }
    let oracle = fay_defect_mould(&darit_apply_mould(&delta(&m).unwrap(), &t).unwrap()).unwrap();
    assert!(formula.equals(&oracle));
    let mut g = ChaCha8Rng::seed_from_u64(5);
    let junk = random_poly_mould(&mut g, Side::U, d, 3, 3);
    assert!(matches!(thm32_correction_checked(&junk, &c3(), &t, &zero), Err(Error::HypothesisViolation(_))));
    assert!(matches!(
        thm32_correction_checked(&m, &CorrectionSpec::strict(), &t, &zero),
        Err(Error::HypothesisViolation(_))
    ));
}

#[test]
fn propagation_examples() {
    let d = 4;
    let t = build_that01(d);
    let c = fay_defect_mould(&t).unwrap();
    let p0 = grouplike_fay_propagate(&delta(&strict_m(d)).unwrap(), &CorrectionSpec::strict(), &t, &c, 0).unwrap();
    assert!(p0.total.equals(&c));
    let p = grouplike_fay_propagate(&delta(&strict_m(d)).unwrap(), &CorrectionSpec::strict(), &t, &c, d).unwrap();
    assert!(p.corrections.iter().all(Mould::is_zero));
    let n = delta(&planted(d, 3)).unwrap();
    let r = random_even_depth1_mould(&mut ChaCha8Rng::seed_from_u64(17), d, 3, 3).unwrap();
    let p = grouplike_fay_propagate(&n, &c3(), &r, &fay_defect_mould(&r).unwrap(), d).unwrap();
    let e = darit_exp_apply(&n, &MouldA::from_mould(r), d).unwrap();
    assert!(p.total.equals(&fay_defect_mould(&e.body).unwrap()));
    assert!(!p.total.is_zero());
}

#[test]
fn exp_correction_examples() {
    let zero = Mould::zero(Side::U, 4);
    assert!(exp_fay_correction(&zero, &zero).unwrap().is_zero());
    let mut g = ChaCha8Rng::seed_from_u64(21);
    let p = random_poly_mould(&mut g, Side::U, 2, 3, 3);
    let gf = mu_exp(&dar_inv(&p).unwrap()).unwrap().component(1);
    let at = |args: Vec<i64>| gf.substitute(&mouldlab::exactalg::LinearMap::new(2, vec![args])).unwrap();
    let three = at(vec![1, 0])
        .mul(&at(vec![0, 1]))
        .add(&at(vec![-1, 0]).mul(&at(vec![1, 1])))
        .add(&at(vec![0, 1]).mul(&at(vec![-1, -1])))
        .scale(&Scalar::frac(1, 2));
    let got = exp_fay_correction(&p, &Mould::zero(Side::U, 2)).unwrap();
    assert!(got.component(2).equals(&three).unwrap());
}

#[test]
fn synthesizer_examples() {
    let strict = synthesize_corrected_mould(&SynthesisProfile::new(vec![(2, 9)], 3), &CorrectionSpec::strict(), 4).unwrap();
    assert!(!strict.is_zero());
    let rep = verify_equivalences(&strict, Some(&CorrectionSpec::strict()), Mode::Strict).unwrap();
    assert!(rep.all_hold() && rep.agree);
    let m = planted(3, 8);
    let rep = verify_equivalences(&m, Some(&c3()), Mode::Corrected).unwrap();
    assert!(rep.all_hold() && rep.matches_expected == Some(true));
    let c2 = CorrectionSpec::new([(2, Scalar::one())]);
    assert!(matches!(
        synthesize_corrected_mould(&SynthesisProfile::new(vec![(2, 5)], 2), &c2, 0),
        Err(Error::Infeasible(_))
    ));
    assert!(matches!(
        synthesize_corrected_mould(&SynthesisProfile::new(vec![(2, 9)], 3), &c3(), 0),
        Err(Error::Infeasible(_))
    ));
    assert!(matches!(
        synthesize_corrected_mould(&SynthesisProfile::new(vec![(3, 7), (3, 9)], 3), &c3(), 0),
        Err(Error::Malformed(_))
    ));
    assert!(planted(3, 8).equals(&planted(3, 8)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn exp_correction_matches_direct_fay(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly_mould(&mut g, Side::U, 3, 3, 3);
        let pp = dar_inv(&p).unwrap();
        let c = fay(&pp).unwrap();
        prop_assert!(exp_fay_correction(&p, &c).unwrap().equals(&fay(&mu_exp(&pp).unwrap()).unwrap()));
    }

    #[test]
    fn thm32_matches_brute_force_on_synthesized_moulds(seed in 0u64..4) {
        let m = planted(3, seed);
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let r = random_even_depth1_mould(&mut g, 3, 3, 3).unwrap();
        let c = fay_defect_mould(&r).unwrap();
        let formula = thm32_correction(&m, &c3(), &r, &c).unwrap();
        let oracle = fay_defect_mould(&darit_apply_mould(&delta(&m).unwrap(), &r).unwrap()).unwrap();
        prop_assert!(formula.equals(&oracle));
    }
}
