use mouldlab::checks::{
    check_alternal, check_circ_neutral, check_first_alternality, check_krv_ell, check_push_invariant, fay_defect,
    replay_witness, verify_equivalences, CheckReport, Mode, Verdict,
};
use mouldlab::exactalg::{q, Poly, RatFun, Scalar};
use mouldlab::flexion::dari_bracket;
use mouldlab::library::generators::{random_even_depth1_mould, random_poly_mould};
use mouldlab::library::{build_that01, build_u, synthesize_corrected_mould, CorrectionSpec, SynthesisProfile};
use mouldlab::mouldcore::{delta, delta_inv, mu, swap, Mould, Side};
use mouldlab::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bracket(d: usize) -> Mould {
    dari_bracket(&build_u(4, d), &build_u(6, d)).unwrap()
}

fn c3() -> CorrectionSpec {
    CorrectionSpec::new([(3, Scalar::zeta(3).scale(&q(1, 3)))])
}

fn planted(d: usize) -> Mould {
    synthesize_corrected_mould(&SynthesisProfile::new(vec![(3, 7)], d), &c3(), 1).unwrap()
}

/// Every failing depth carries a nonzero residue and every witness replays.
fn assert_sound(m: &Mould, rep: &CheckReport) {
    for (r, d) in &rep.depths {
        if d.verdict == Verdict::Fails {
            assert!(d.residue.as_ref().is_some_and(|f| !f.is_zero()), "depth {r} fails without residue");
        }
    }
    for w in &rep.witnesses {
        assert!(!w.residue.is_zero());
        if w.relation != "fay" {
            assert!(replay_witness(m, w).unwrap().equals(&w.residue).unwrap(), "{w:?}");
        }
    }
}

#[test]
fn alternality_examples() {
    assert!(check_alternal(&build_u(4, 4)).unwrap().holds());
    assert!(check_alternal(&dari_bracket(&build_u(2, 4), &build_u(4, 4)).unwrap()).unwrap().holds());
    assert!(check_alternal(&bracket(4)).unwrap().holds());
    let m = mu(&build_u(2, 3), &build_u(2, 3)).unwrap();
    let rep = check_alternal(&m).unwrap();
    assert!(!rep.holds());
    let d2 = &rep.depths[&2];
    assert_eq!(d2.verdict, Verdict::Fails);
    let want = Poly::var(2, 0).pow(2).mul(&Poly::var(2, 1).pow(2)).scale(&Scalar::from_int(2));
    assert!(d2.residue.as_ref().unwrap().equals(&RatFun::from_poly(want)).unwrap());
    assert_sound(&m, &rep);
}

#[test]
fn push_invariance_examples() {
    let mut g = ChaCha8Rng::seed_from_u64(3);
    let even = random_even_depth1_mould(&mut g, 1, 4, 3).unwrap();
    assert!(check_push_invariant(&even).unwrap().holds());
    assert!(check_push_invariant(&delta_inv(&bracket(4)).unwrap()).unwrap().holds());
    let random = random_poly_mould(&mut g, Side::U, 3, 3, 3);
    let rep = check_push_invariant(&random).unwrap();
    assert!(!rep.holds());
    assert_sound(&random, &rep);
}

#[test]
fn circ_neutrality_examples() {
    let sw = swap(&delta_inv(&bracket(4)).unwrap()).unwrap();
    let rep = check_circ_neutral(&sw, Mode::Strict).unwrap();
    assert!(rep.holds());
    assert!(rep.constants().is_strict());
    let depth1 = Mould::from_components(Side::V, 1, Scalar::zero(), [(1, RatFun::from_poly(Poly::var(1, 0).pow(3)))]);
    assert!(check_circ_neutral(&depth1, Mode::Strict).unwrap().holds());
    let m = swap(&planted(4)).unwrap();
    let corrected = check_circ_neutral(&m, Mode::Corrected).unwrap();
    assert!(corrected.holds());
    assert_eq!(corrected.constants(), c3());
    let strict = check_circ_neutral(&m, Mode::Strict).unwrap();
    assert!(!strict.holds());
    assert_sound(&m, &strict);
    assert!(check_circ_neutral(&planted(4), Mode::Strict).is_err());
}

#[test]
fn first_alternality_examples() {
    let sw = swap(&delta_inv(&bracket(4)).unwrap()).unwrap();
    assert!(check_first_alternality(&sw, Mode::Strict).unwrap().holds());
    let m = swap(&planted(4)).unwrap();
    let rep = check_first_alternality(&m, Mode::Corrected).unwrap();
    assert!(rep.holds());
    assert_eq!(rep.constants(), c3());
    let strict = check_first_alternality(&m, Mode::Strict).unwrap();
    assert!(!strict.holds());
    assert!(strict.witnesses.iter().all(|w| w.side == Side::V));
    assert_sound(&m, &strict);
}

#[test]
fn fay_defect_examples() {
    assert!(fay_defect(&build_that01(6), Mode::Strict).unwrap().holds());
    assert!(fay_defect(&bracket(4), Mode::Strict).unwrap().holds());
    // For A = ΔM the residue of F(A') is -r*c_r*(u2+...+ur).
    let m = planted(4);
    let rep = fay_defect(&delta(&m).unwrap(), Mode::Corrected).unwrap();
    assert!(rep.holds());
    assert_eq!(rep.constants(), c3());
    assert!(!fay_defect(&delta(&m).unwrap(), Mode::Strict).unwrap().holds());
}

#[test]
fn krv_examples() {
    let f = delta(&delta_inv(&bracket(4)).unwrap()).unwrap();
    let rep = check_krv_ell(&f).unwrap();
    assert!(rep.holds());
    assert_eq!(rep.agreement, Some(true));
    assert!(rep.constants().is_strict());
    assert!(check_krv_ell(&build_u(4, 4)).unwrap().holds());
    let bad = mu(&build_u(2, 3), &build_u(2, 3)).unwrap();
    let rep = check_krv_ell(&bad).unwrap();
    assert!(!rep.holds());
    assert!(!rep.witnesses.is_empty());
    let corrected = check_krv_ell(&delta(&planted(4)).unwrap()).unwrap();
    assert!(corrected.holds());
    assert_eq!(corrected.constants(), c3());
}

#[test]
fn equivalence_examples() {
    let m = delta_inv(&bracket(4)).unwrap();
    let rep = verify_equivalences(&m, Some(&CorrectionSpec::strict()), Mode::Strict).unwrap();
    assert!(rep.all_hold() && rep.agree && rep.matches_expected == Some(true));
    let p = planted(4);
    let rep = verify_equivalences(&p, Some(&c3()), Mode::Corrected).unwrap();
    assert!(rep.all_hold() && rep.agree && rep.matches_expected == Some(true));
    assert_eq!(rep.constants(), c3());
    let mut g = ChaCha8Rng::seed_from_u64(9);
    let perturbed = m.add(&random_poly_mould(&mut g, Side::U, 4, 3, 3)).unwrap();
    assert!(matches!(verify_equivalences(&perturbed, None, Mode::Strict), Err(Error::Inapplicable(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witnesses_replay(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poly_mould(&mut g, Side::U, 3, 3, 3);
        for rep in [check_alternal(&a).unwrap(), check_push_invariant(&a).unwrap()] {
            assert_sound(&a, &rep);
        }
        let b = swap(&a).unwrap();
        for rep in [check_circ_neutral(&b, Mode::Strict).unwrap(), check_first_alternality(&b, Mode::Strict).unwrap()] {
            assert_sound(&b, &rep);
        }
    }

    #[test]
    fn equivalence_verdicts_never_diverge(seed in 0u64..6) {
        let m = synthesize_corrected_mould(&SynthesisProfile::new(vec![(3, 7)], 4), &c3(), seed).unwrap();
        let rep = verify_equivalences(&m, None, Mode::Corrected).unwrap();
        prop_assert!(rep.agree);
        let strict = verify_equivalences(&m, None, Mode::Strict).unwrap();
        prop_assert!(strict.agree);
        prop_assert!(!strict.all_hold());
    }
}
