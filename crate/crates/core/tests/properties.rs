mod common;

use common::*;
use mbl_superpose::ensemble::make_time_grid;
use mbl_superpose::liom::LiomCouplings;
use mbl_superpose::observables::{saturation_time, saturation_value, TimeSeries};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sites `1..=l` selected by the low bits of `mask`, never empty.
fn keep_set(l: usize, mask: u32) -> Vec<usize> {
    let keep: Vec<usize> = (1..=l).filter(|s| mask >> (s - 1) & 1 == 1).collect();
    if keep.is_empty() {
        vec![1]
    } else {
        keep
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partial_trace_preserves_trace(l in 1usize..=6, mask in any::<u32>(), seed in any::<u64>()) {
        let psi = random_state(l, &mut rng(seed));
        prop_assert!(trace_defect(&psi, &keep_set(l, mask)) < 1e-12);
    }

    #[test]
    fn entropy_ignores_site_labels(l in 2usize..=6, mask in any::<u32>(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let psi = random_state(l, &mut r);
        let mut perm: Vec<usize> = (1..=l).collect();
        perm.shuffle(&mut r);
        prop_assert!(relabel_defect(&psi, &keep_set(l, mask), &perm) < 1e-10);
    }

    #[test]
    fn sigma_z_matches_dense_operator(l in 1usize..=6, site_pick in any::<usize>(), seed in any::<u64>()) {
        let psi = random_state(l, &mut rng(seed));
        prop_assert!(sigma_z_defect(&psi, 1 + site_pick % l) < 1e-12);
    }

    #[test]
    fn schmidt_symmetry_and_entropy_bounds(l in 2usize..=8, seed in any::<u64>()) {
        let psi = random_state(l, &mut rng(seed));
        prop_assert!(schmidt_defect(&psi) < 1e-10);
        prop_assert!(entropy_bound_violation(&psi) < 1e-12);
    }

    #[test]
    fn saturation_value_is_linear(
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        xs in proptest::collection::vec(-1.0f64..1.0, 12),
        ys in proptest::collection::vec(-1.0f64..1.0, 12),
    ) {
        let t: Vec<f64> = (0..12).map(|k| 1.0 + k as f64).collect();
        let combo: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| a * x + b * y).collect();
        let q = |v: &[f64]| saturation_value(&TimeSeries::new("q", t.clone(), v.to_vec()).unwrap(), 2.5, 11.0).unwrap();
        prop_assert!((q(&combo) - (a * q(&xs) + b * q(&ys))).abs() < 1e-12);
    }

    #[test]
    fn robust_saturation_time_shrinks_as_band_widens(
        vals in proptest::collection::vec(0.0f64..1.0, 2..40),
        e1 in 1e-4f64..0.5,
        e2 in 1e-4f64..0.5,
    ) {
        let t: Vec<f64> = (0..vals.len()).map(|k| 0.5 + k as f64).collect();
        let s = TimeSeries::new("s", t, vals.clone()).unwrap();
        let q_sat = vals.iter().sum::<f64>() / vals.len() as f64;
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let narrow = saturation_time(&s, q_sat, lo).unwrap().robust;
        let wide = saturation_time(&s, q_sat, hi).unwrap().robust;
        match (narrow, wide) {
            (Some(n), Some(w)) => prop_assert!(w <= n),
            (Some(_), None) => prop_assert!(false, "wider band lost saturation"),
            _ => {}
        }
    }

    #[test]
    fn time_grid_is_increasing(lo in -3.0f64..3.0, span in 0.1f64..8.0, ppd in 1usize..12) {
        let (t0, t1) = (10f64.powf(lo), 10f64.powf(lo + span));
        let g = make_time_grid(t0, t1, ppd).unwrap();
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(g[0], t0);
        prop_assert_eq!(*g.last().unwrap(), t1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn single_profile_linear_entropy_is_one_minus_purity(l in 2usize..=6, t in 0.0f64..50.0, seed in any::<u64>()) {
        let c = LiomCouplings::sample(l, 1.0, 0.6, &mut rng(seed)).unwrap();
        prop_assert!(linear_entropy_defect(&c, t) < 1e-12);
    }

    #[test]
    fn spectator_couplings_leave_dephasing_alone(l in 3usize..=6, t in 0.0f64..50.0, seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = LiomCouplings::sample(l, 1.0, 0.6, &mut r).unwrap();
        prop_assert!(spectator_coupling_defect(&c, t, &mut r) < 1e-12);
    }

    #[test]
    fn evolution_conserves_norm(l in 2usize..=6, n in 1usize..=3, log_t in -1.0f64..4.0, seed in any::<u64>()) {
        prop_assert!(norm_drift(l, n, 10f64.powf(log_t), &mut rng(seed)) < 1e-10);
    }

    #[test]
    fn hamiltonian_is_hermitian_and_conserves_sz(l in 2usize..=6, seed in any::<u64>()) {
        let (herm, comm) = hamiltonian_defects(l, &mut rng(seed));
        prop_assert!(herm < 1e-12);
        prop_assert!(comm < 1e-12);
    }

    #[test]
    fn success_probability_is_a_probability(l in 2usize..=6, n in 1usize..=5, t in 0.01f64..100.0, seed in any::<u64>()) {
        let (p, at_zero) = success_probabilities(l, n, t, &mut rng(seed));
        prop_assert!(p > 0.0 && p <= 1.0 + 1e-12);
        prop_assert!(at_zero < 1e-12);
    }
}
