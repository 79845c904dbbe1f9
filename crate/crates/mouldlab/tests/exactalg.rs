use mouldlab::exactalg::{q, LinearMap, Poly, RatFun, Scalar};
use mouldlab::library::generators::{random_poly, random_rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ARITY: usize = 3;

fn scalars(seed: u64) -> [Scalar; 3] {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let mut s = || {
        let mut x = random_rational(&mut g);
        if g.gen_bool(0.5) {
            x = x + Scalar::zeta(3).scale(&q(g.gen_range(-3..=3), 1));
        }
        if g.gen_bool(0.3) {
            x = x * Scalar::zeta(5);
        }
        x
    };
    [s(), s(), s()]
}

fn polys(seed: u64) -> [Poly; 3] {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    [0, 1, 2].map(|_| random_poly(&mut g, ARITY, 3, 4, None))
}

fn linear_map(seed: u64, out_arity: usize) -> LinearMap {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    LinearMap::new(out_arity, (0..ARITY).map(|_| (0..out_arity).map(|_| g.gen_range(-2..=2)).collect()).collect())
}

fn nonzero_form(seed: u64) -> Vec<i64> {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let f: Vec<i64> = (0..ARITY).map(|_| g.gen_range(-3..=3)).collect();
        if f.iter().any(|c| *c != 0) {
            return f;
        }
    }
}

proptest! {
    #[test]
    fn scalar_ring_axioms(seed in any::<u64>()) {
        let [a, b, c] = scalars(seed);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
    }

    #[test]
    fn poly_ring_axioms(seed in any::<u64>()) {
        let [a, b, c] = polys(seed);
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&Poly::one(ARITY)), a.clone());
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(seed in any::<u64>(), out_arity in 1usize..5) {
        let [a, b, _] = polys(seed);
        let map = linear_map(seed ^ 0x5eed, out_arity);
        let (fa, fb) = (RatFun::from_poly(a.clone()), RatFun::from_poly(b.clone()));
        let sub = |f: &RatFun| f.substitute(&map).unwrap();
        prop_assert!(sub(&fa.mul(&fb)).equals(&sub(&fa).mul(&sub(&fb))).unwrap());
        prop_assert!(sub(&fa.add(&fb)).equals(&sub(&fa).add(&sub(&fb))).unwrap());
    }

    #[test]
    fn dividing_a_multiple_recovers_the_cofactor(seed in any::<u64>()) {
        let [p, _, _] = polys(seed);
        let form = nonzero_form(seed.rotate_left(17));
        let f = RatFun::from_poly(p.mul_linear(&form)).div_linear(&form).unwrap();
        prop_assert!(f.is_polynomial());
        prop_assert_eq!(f.as_poly().unwrap(), &p);
    }

    #[test]
    fn normalization_is_idempotent_and_preserves_equality(seed in any::<u64>()) {
        let [p, c, _] = polys(seed);
        let l1 = nonzero_form(seed.rotate_left(7));
        let l2 = nonzero_form(seed.rotate_left(29));
        // (p * l1) / (l1 * l2) in unreduced form equals p / l2.
        let f = RatFun::new(p.mul_linear(&l1), &[l1.clone(), l2.clone()]).unwrap();
        let g = RatFun::new(p.clone(), std::slice::from_ref(&l2)).unwrap();
        prop_assert!(f.equals(&g).unwrap());
        let forms: Vec<Vec<i64>> = f
            .den()
            .iter()
            .flat_map(|(l, m)| std::iter::repeat_n(l.coeffs().to_vec(), *m as usize))
            .collect();
        let again = RatFun::new(f.num().clone(), &forms).unwrap();
        prop_assert_eq!(&again, &f);
        // Adding and subtracting the same term is a no-op after normalization.
        let h = RatFun::new(c, &[l1]).unwrap();
        prop_assert!(f.add(&h).sub(&h).equals(&f).unwrap());
    }
}

#[test]
fn equality_examples() {
    let a = RatFun::new(Poly::one(1), &[vec![1]]).unwrap();
    let b = RatFun::new(Poly::var(2, 1), &[vec![1, 0], vec![0, 1]]).unwrap();
    assert!(a.embed(0, 2).equals(&b).unwrap());
    let c = RatFun::new(Poly::one(2), &[vec![0, 1]]).unwrap();
    assert!(!a.embed(0, 2).equals(&c).unwrap());
    assert!(a.equals(&c).is_err());
}
