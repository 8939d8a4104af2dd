use num_bigint::BigInt;
use proptest::prelude::*;
use spinor_forms::charpoly::{kw_character, spinor_character, SpinorParity};
use spinor_forms::findim::{freudenthal_multiplicities, weyl_dimension, Decomposition};
use spinor_forms::spinor_decomp::{
    e_label, forms_spinor_decomposition, tensor_with_defining, tensor_with_spinor, xi,
};
use spinor_forms::weyl::enumerate;
use spinor_forms::{Half, Weight};

fn dominant(l: usize, max: i64) -> impl Strategy<Value = Weight> {
    proptest::collection::vec(0..=max, l).prop_map(move |f| {
        let c: Vec<Half> = f.into_iter().map(Half::from_int).collect();
        Weight::from_fundamental(&c, l).unwrap()
    })
}

fn in_a(l: usize) -> impl Strategy<Value = Weight> {
    (proptest::collection::vec(0..=2i64, l - 1), -3..=2i64)
        .prop_map(move |(f, last)| {
            let mut c: Vec<Half> = f.into_iter().map(Half::from_int).collect();
            c.push(Half::from_doubled(2 * last + 1));
            Weight::from_fundamental(&c, l).unwrap()
        })
        .prop_filter("in A", Weight::is_in_a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn finite_characters_have_weyl_dimension_and_invariant_support(lam in dominant(3, 2)) {
        let ch = freudenthal_multiplicities(&lam).unwrap();
        prop_assert_eq!(ch.total_mass(), weyl_dimension(&lam).unwrap());
        for (g, _) in enumerate(3).unwrap().step_by(7) {
            for (_, mu, m) in ch.sorted_terms().into_iter().take(20) {
                prop_assert_eq!(&ch.coeff(&g.act(mu)), m);
            }
        }
    }

    #[test]
    fn spinor_tensor_summands_lie_in_a(lam in dominant(4, 3)) {
        let d = tensor_with_spinor(&lam).unwrap();
        prop_assert!(d.labels().all(|l| l.highest_weight().is_in_a()));
        prop_assert!(d.is_multiplicity_free());
    }

    #[test]
    fn defining_tensor_closes_on_a(lam in in_a(4)) {
        let d = tensor_with_defining(&lam).unwrap();
        prop_assert!(!d.is_empty());
        prop_assert!(d.len() <= 8);
        prop_assert!(d.labels().all(|l| l.highest_weight().is_in_a()));
    }

    #[test]
    fn bounded_characters_are_depth_stable(lam in in_a(2), depth in 2u32..6) {
        let short = kw_character(&lam, depth).unwrap();
        let long = kw_character(&lam, depth + 2).unwrap();
        prop_assert_eq!(long.truncate(depth).unwrap(), short);
    }

    #[test]
    fn bounded_multiplicities_stay_below_a_finite_dimension(lam in in_a(2)) {
        // L(λ) is a summand of F(λ+½ϖ_l)⊗𝕊 and 𝕊 is multiplicity free, so
        // that dimension bounds every multiplicity at every depth
        let mut shift = vec![Half::ZERO; 2];
        shift[1] = Half::from_doubled(1);
        let nu = &lam + &Weight::from_fundamental(&shift, 2).unwrap();
        prop_assume!(nu.is_dominant_integral());
        let bound = weyl_dimension(&nu).unwrap();
        let maxima: Vec<BigInt> = [6u32, 8, 10]
            .iter()
            .map(|&d| kw_character(&lam, d).unwrap().max_coefficient())
            .collect();
        prop_assert!(maxima[0] >= BigInt::from(1));
        prop_assert!(maxima[0] <= maxima[1] && maxima[1] <= maxima[2]);
        prop_assert!(maxima[2] <= bound);
    }

    #[test]
    fn spinor_products_commute(nu in dominant(2, 2), depth in 2u32..6) {
        let f = freudenthal_multiplicities(&nu).unwrap();
        let s = spinor_character(2, SpinorParity::Even, depth).unwrap();
        prop_assert_eq!(f.mul(&s, depth).unwrap(), s.mul(&f, depth).unwrap());
    }

    #[test]
    fn decompositions_round_trip_through_json(l in 2usize..6, i in 0usize..12) {
        prop_assume!(i <= 2 * l);
        let d = forms_spinor_decomposition(l, i).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        let back: Decomposition = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, d);
    }
}

#[test]
fn columns_are_self_dual_and_sized_by_the_index_set() {
    for l in 2..=6 {
        for i in 0..=2 * l {
            let d = forms_spinor_decomposition(l, i).unwrap();
            assert_eq!(d, forms_spinor_decomposition(l, 2 * l - i).unwrap());
            let expected = if i <= l { i + 1 } else { 2 * l - i + 1 };
            assert_eq!(d.len(), expected);
        }
        for idx in xi(l) {
            assert!(e_label(l, idx).unwrap().highest_weight().is_in_a());
        }
    }
}
