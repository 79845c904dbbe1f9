use mouldlab::exactalg::Scalar;
use mouldlab::library::generators::{random_ari_delta_mould, random_poly_mould};
use mouldlab::mouldcore::{swap, Side};
use mouldlab::serial::{mould_from_json, mould_to_json};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mould_json_round_trip(seed in any::<u64>()) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let mut a = random_ari_delta_mould(&mut g, 4, 3, 3).unwrap();
        a.set_empty_value(Scalar::zeta(3) + Scalar::frac(1, 7));
        let b = swap(&random_poly_mould(&mut g, Side::U, 3, 3, 3)).unwrap();
        for m in [a, b] {
            let text = serde_json::to_string(&mould_to_json(&m)).unwrap();
            let back = mould_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            prop_assert!(back.equals(&m));
            prop_assert_eq!(back.side(), m.side());
            prop_assert_eq!(back.max_depth(), m.max_depth());
        }
    }
}

#[test]
fn rejects_out_of_range_components() {
    let m = random_poly_mould(&mut ChaCha8Rng::seed_from_u64(1), Side::U, 3, 2, 2);
    let mut j = mould_to_json(&m);
    j["max_depth"] = serde_json::json!(1);
    assert!(mould_from_json(&j).is_err());
}
