use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sts_core::verification::{random_standard_form, random_sts};
use sts_core::*;

fn ef_agrees_with_separability(sf: &StandardForm) -> bool {
    let ef = entanglement_of_formation(sf).unwrap().ef;
    (ef > 0.0) == !is_separable(sf) && ef >= 0.0
}

#[test]
fn ef_is_positive_exactly_on_entangled_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..100_000 {
        let sf = if k % 2 == 0 {
            standard_form_from_sts(&random_sts(&mut rng)).unwrap()
        } else {
            random_standard_form(&mut rng)
        };
        assert!(ef_agrees_with_separability(&sf), "{sf:?}");
    }
}

#[test]
fn ef_near_the_separability_threshold() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let res = ReservoirConfig::identical(1.0, 0.5).unwrap();
    let mut checked = 0;
    while checked < 500 {
        let sf = standard_form_from_sts(&random_sts(&mut rng)).unwrap();
        let Ok(EsdTime::Finite(t_s)) = esd_time_identical_baths(&sf, 1.0, 0.5) else {
            continue;
        };
        for rel in [-1e-3, -1e-6, -1e-9, -1e-12, 0.0, 1e-12, 1e-6] {
            let t = t_s * (1.0 + rel);
            assert!(ef_agrees_with_separability(&evolve(&sf, &res, t).unwrap().sf));
        }
        // EF keeps decreasing all the way to the threshold
        let efs: Vec<f64> = [1e-3, 1e-5, 1e-7, 1e-9]
            .iter()
            .map(|rel| entanglement_of_formation(&evolve(&sf, &res, t_s * (1.0 - rel)).unwrap().sf).unwrap().ef)
            .collect();
        assert!(efs.windows(2).all(|w| w[1] < w[0]), "{efs:?}");
        checked += 1;
    }
}
