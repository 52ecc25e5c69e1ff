use proptest::prelude::*;
use ris_ssk::analytic::*;
use ris_ssk::channel::NakagamiParams;
use ris_ssk::linkmodel::{greedy_detect, Scheme, SystemConfig};
use ris_ssk::numerics::{binomial, signed_binomial_series};

fn config(n: usize, nr: usize, m: f64, k: f64, gamma: f64) -> SystemConfig {
    SystemConfig::new(n, nr, gamma, k, Scheme::Ssk, NakagamiParams::with_shape(m).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ped_bounded_by_zero_snr_value(n in 2usize..300, nr in 2usize..10, m in 0.5f64..8.0,
                                     k in 0.0f64..0.5, db in -60.0f64..60.0) {
        let c = config(n, nr, m, k, 10f64.powf(db / 10.0));
        let v = ped(&c).unwrap().value;
        prop_assert!(v >= 0.0);
        prop_assert!(v <= ped_zero_snr(nr).unwrap().value + 1e-12);
    }

    #[test]
    fn ped_decreases_with_snr(n in 2usize..128, nr in 2usize..6, m in 0.5f64..6.0,
                              k in 0.0f64..0.3, db in -40.0f64..40.0) {
        let lo = ped(&config(n, nr, m, k, 10f64.powf(db / 10.0))).unwrap().value;
        let hi = ped(&config(n, nr, m, k, 10f64.powf((db + 3.0) / 10.0))).unwrap().value;
        prop_assert!(hi <= lo * (1.0 + 1e-9));
    }

    #[test]
    fn more_branches_more_errors(n in 1usize..128, nr in 2usize..8, m in 0.5f64..6.0,
                                 k in 0.0f64..0.3, db in -30.0f64..20.0) {
        let c = config(n, nr, m, k, 10f64.powf(db / 10.0));
        let a = ped(&c).unwrap().value;
        let b = ped(&c.with_branches(nr + 1).unwrap()).unwrap().value;
        prop_assert!(b >= a * (1.0 - 1e-9));
    }

    #[test]
    fn pairwise_reduction(n in 1usize..300, m in 0.5f64..8.0, k in 0.0f64..0.5, db in -60.0f64..60.0) {
        let c = config(n, 2, m, k, 10f64.powf(db / 10.0));
        prop_assert_eq!(ped_ssk(&c).unwrap().value, pped_ssk(&c).unwrap().value);
    }

    #[test]
    fn union_bound_is_linear(p in 0.0f64..=1.0, e in 1u32..6) {
        let nr = 1usize << e;
        let b = ber_union_bound(p, nr).unwrap();
        prop_assert_eq!(b.value, nr as f64 / 2.0 * p);
        prop_assert_eq!(b.vacuous, b.value > 0.5);
    }

    #[test]
    fn series_of_constant_one_is_one(l in 1u32..=64) {
        // (1 - 1)^L = 0, so Σ_{r>=1} (-1)^{r-1} C(L,r) = 1
        prop_assert_eq!(signed_binomial_series(l, |_| 1.0).unwrap(), 1.0);
    }

    #[test]
    fn binomial_symmetry(n in 0u32..=64, r in 0u32..=64) {
        if r <= n {
            prop_assert_eq!(binomial(n, r).unwrap(), binomial(n, n - r).unwrap());
        }
    }

    #[test]
    fn detector_picks_a_maximum(v in proptest::collection::vec(0.0f64..10.0, 1..32)) {
        let i = greedy_detect(&v).unwrap();
        prop_assert!(v.iter().all(|&x| x <= v[i]));
        prop_assert!(v[..i].iter().all(|&x| x < v[i]));
    }
}

#[test]
fn single_element_exceeds_coin_flip_at_high_snr() {
    // One element gives no coherent gain: interferers carry the same energy as
    // the target, and a near-deterministic |β| loses to the max of L exponentials.
    let zero = ped_zero_snr(5).unwrap().value;
    let lo = ped(&config(1, 5, 4.0, 0.0, 1.0)).unwrap().value;
    let hi = ped(&config(1, 5, 4.0, 0.0, 1e4)).unwrap().value;
    assert!(hi > lo);
    assert!(hi > zero);
    assert!((hi - (1.0 - (1.0 - (-1.0f64).exp()).powi(4))).abs() < 0.05);
}
