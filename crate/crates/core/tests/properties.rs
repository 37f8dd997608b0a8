use proptest::prelude::*;

use torus_ech::lattice::{nk_closed_form, NSeq};
use torus_ech::spectral::{
    action_spectrum, cobordism_obstruction, linking_spectrum, Obstruction, RotationMode,
};
use torus_ech::{KnotParams, Rat};

fn coprime_pair() -> impl Strategy<Value = KnotParams> {
    (1i64..14, 1i64..14).prop_filter_map("coprime", |(p, q)| KnotParams::new(p, q).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectra_are_monotone_and_agree(kp in coprime_pair(), k_max in 0u64..400) {
        let action = action_spectrum(&kp, k_max);
        let link = linking_spectrum(&kp, k_max, RotationMode::PqPlusDelta);
        let exact = linking_spectrum(&kp, k_max, RotationMode::ExactPq);
        for k in 0..=k_max as usize {
            prop_assert_eq!(&action[k].ck * &Rat::integer(kp.pq()), link[k].rat.clone());
            prop_assert_eq!(&exact[k].rat, &link[k].rat);
            prop_assert_eq!(&action[k].ck_link, &link[k]);
            if k > 0 {
                prop_assert!(action[k - 1].ck <= action[k].ck);
                prop_assert!(link[k - 1] <= link[k]);
            }
        }
    }

    #[test]
    fn repeats_dominate_weyl_rate(kp in coprime_pair(), n in 1u64..40) {
        prop_assume!(kp.pq() > 1);
        let point = nk_closed_form(&kp, n).unwrap();
        let rate = (2.0 * point.k as f64 / kp.pq() as f64).sqrt();
        prop_assert!(point.repeats as f64 >= rate);
        let mut seq = NSeq::new(kp);
        prop_assert_eq!(seq.repeats(point.k as usize), point.repeats);
    }

    #[test]
    fn self_obstruction_is_always_consistent(kp in coprime_pair(), k_max in 0u64..2000) {
        prop_assert_eq!(cobordism_obstruction(&kp, &kp, k_max), Obstruction::Consistent { k_max });
    }

    #[test]
    fn obstruction_needs_the_volume_condition(a in coprime_pair(), b in coprime_pair()) {
        prop_assume!(a.pq() != b.pq());
        let (big, small) = if a.pq() > b.pq() { (a, b) } else { (b, a) };
        prop_assert_eq!(cobordism_obstruction(&small, &big, 50), Obstruction::NotApplicable);
        prop_assert_ne!(cobordism_obstruction(&big, &small, 50), Obstruction::NotApplicable);
    }
}
