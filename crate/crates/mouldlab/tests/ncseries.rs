use std::collections::BTreeSet;

use mouldlab::exactalg::{q, Scalar};
use mouldlab::library::generators::random_rational;
use mouldlab::library::{build_that01, build_u1};
use mouldlab::mouldcore::mu;
use mouldlab::ncseries::{ab_to_c, build_t01_nc, c_to_ab, ma_ab, ma_map, Alphabet, Letter, NCSeries, Word};
use mouldlab::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const W: usize = 7;

/// A random c-series whose words have weight at most `content_weight`,
/// truncated at `max_weight`.
fn random_c_series(seed: u64, content_weight: usize, max_weight: usize) -> NCSeries {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let mut f = NCSeries::zero(Alphabet::C, max_weight);
    for _ in 0..g.gen_range(1..5) {
        let mut w: Word = Vec::new();
        let mut weight = 0;
        let len = g.gen_range(1..4);
        while w.len() < len {
            let i = g.gen_range(1..4u32);
            if weight + i as usize > content_weight {
                break;
            }
            weight += i as usize;
            w.push(Letter::C(i));
        }
        let term = NCSeries::word(Alphabet::C, w, random_rational(&mut g), max_weight);
        f = f.add(&term).unwrap();
    }
    f
}

/// All c-words of weight at most `w`.
fn c_words(w: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(Word, usize)> = vec![(Vec::new(), 0)];
    while let Some((word, weight)) = frontier.pop() {
        for i in 1..=(w - weight) as u32 {
            let mut next = word.clone();
            next.push(Letter::C(i));
            out.push(next.clone());
            frontier.push((next, weight + i as usize));
        }
    }
    out
}

#[test]
fn arithmetic_examples() {
    let a = NCSeries::letter(Letter::A, 4);
    let b = NCSeries::letter(Letter::B, 4);
    assert!(a.bracket(&a).unwrap().is_zero());
    assert_eq!(a.mul(&b).unwrap(), NCSeries::word(Alphabet::Ab, vec![Letter::A, Letter::B], Scalar::one(), 4));
    assert_eq!(a.bracket(&b).unwrap(), NCSeries::parse("ab - ba", 4).unwrap());
    let c1 = NCSeries::letter(Letter::C(1), 4);
    assert!(matches!(a.add(&c1), Err(Error::AlphabetMismatch)));
}

#[test]
fn kernel_conversion_examples() {
    // c_i = ad(a)^(i-1)(b) with ad(a)(x) = [x, a], so c2 = ba - ab; this is
    // the convention under which ma([a,b]) = U1 = -u1.
    let c2 = ab_to_c(&NCSeries::parse("ab - ba", 4).unwrap()).unwrap();
    assert_eq!(c2, NCSeries::letter(Letter::C(2), 4).neg());
    assert_eq!(ma_map(&c2).unwrap().component(1).render('u'), "-u1");
    let c3 = ab_to_c(&NCSeries::parse("aab - 2aba + baa", 4).unwrap()).unwrap();
    assert_eq!(c3, NCSeries::letter(Letter::C(3), 4));
    assert!(matches!(ab_to_c(&NCSeries::parse("a", 4).unwrap()), Err(Error::NotInKernel(_))));
}

#[test]
fn ma_examples() {
    let w = NCSeries::word(Alphabet::C, vec![Letter::C(2), Letter::C(1), Letter::C(3)], Scalar::one(), 6);
    assert_eq!(ma_map(&w).unwrap().component(3).render('u'), "u1*u3^2");
    let c1 = NCSeries::letter(Letter::C(1), 3);
    assert_eq!(ma_map(&c1).unwrap().component(1).render('u'), "1");
}

#[test]
fn ma_is_injective_on_c_words() {
    let mut seen = BTreeSet::new();
    for w in c_words(6) {
        let m = ma_map(&NCSeries::word(Alphabet::C, w.clone(), Scalar::one(), 6)).unwrap();
        let key = (w.len(), (1..=6).map(|r| m.component(r).render('u')).collect::<Vec<_>>(), m.empty_value().clone());
        assert!(seen.insert(format!("{key:?}")), "collision at {w:?}");
    }
}

#[test]
fn t01_expansion() {
    let t = build_t01_nc(3);
    assert_eq!(t.coefficient(&[Letter::A]), -Scalar::one());
    let got = ma_ab(&build_t01_nc(7)).unwrap();
    assert_eq!(got.a_coeff, -Scalar::one());
    let want = build_u1(7).scale(&Scalar::from_rational(q(-1, 2))).add(&build_that01(7)).unwrap();
    for r in 1..=7 {
        assert!(got.body.component(r).equals(&want.component(r)).unwrap(), "depth {r}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ab_to_c_is_a_section(seed in any::<u64>()) {
        let f = random_c_series(seed, W, W);
        let ab = c_to_ab(&f).unwrap();
        prop_assert_eq!(ab_to_c(&ab).unwrap(), f.clone());
        prop_assert_eq!(c_to_ab(&ab_to_c(&ab).unwrap()).unwrap(), ab);
    }

    #[test]
    fn ma_is_multiplicative(seed in any::<u64>()) {
        // Factors of weight <= 4 inside a weight-8 truncation: the product is exact.
        let f = random_c_series(seed, 4, 2 * 4);
        let g = random_c_series(seed.wrapping_mul(31).wrapping_add(7), 4, 2 * 4);
        let lhs = ma_map(&f.mul(&g).unwrap()).unwrap();
        let rhs = mu(&ma_map(&f).unwrap(), &ma_map(&g).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn ma_is_linear(seed in any::<u64>()) {
        let f = random_c_series(seed, W, W);
        let g = random_c_series(seed ^ 0xabc, W, W);
        let s = Scalar::frac(-2, 5);
        let lhs = ma_map(&f.scale(&s).add(&g).unwrap()).unwrap();
        let rhs = ma_map(&f).unwrap().scale(&s).add(&ma_map(&g).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs));
    }
}
