use proptest::prelude::*;
use stable_core::doa::{example_catalog, ExampleName};
use stable_core::infdiv::stable_levy;
use stable_core::montecarlo::{
    ecf_distance, empirical_cf, normalized_sums, poisson_integral_samples, simulate_sums, symmetric_grid, SimConfig,
};

#[test]
fn ecf_distance_shrinks_with_more_replicates() {
    let model = example_catalog::<f64>(ExampleName::Pareto { alpha: 0.5, c: 1.0 }).unwrap();
    let grid = symmetric_grid(5.0, 41);
    let mut ratios: Vec<f64> = (0..10)
        .map(|seed| {
            let cfg = SimConfig::new(200, 100_000, 1_000 + seed, grid.clone()).unwrap();
            let sums = normalized_sums(&model, &cfg).unwrap();
            let few = SimConfig::new(200, 1_000, 1_000 + seed, grid.clone()).unwrap();
            assert_eq!(normalized_sums(&model, &few).unwrap(), sums[..1_000]);
            ecf_distance(&sums[..1_000], &model.limit, &grid) / ecf_distance(&sums, &model.limit, &grid)
        })
        .collect();
    ratios.sort_by(f64::total_cmp);
    let median = 0.5 * (ratios[4] + ratios[5]);
    assert!(median >= 3.0, "median ratio {median}");
}

#[test]
fn compensated_integral_has_mean_zero() {
    let levy = stable_levy(1.5, 1.0, 0.3).unwrap();
    let xs = poisson_integral_samples(&levy, true, 10_000, 77).unwrap();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let stderr = (var / n).sqrt();
    assert!(mean.abs() <= 3.0 * stderr, "mean {mean}, stderr {stderr}");
}

#[test]
fn simulation_is_reproducible() {
    for name in [ExampleName::OneOverU, ExampleName::VsqOverW { q: 0.3 }, ExampleName::IntPower { alpha: 1.5 }] {
        let model = example_catalog::<f64>(name).unwrap();
        let cfg = SimConfig::new(50, 2_000, 9, symmetric_grid(3.0, 7)).unwrap();
        let a = simulate_sums(&model, &cfg).unwrap();
        let b = simulate_sums(&model, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        let other = simulate_sums(&model, &SimConfig { seed: 10, ..cfg }).unwrap();
        assert_ne!(a.samples, other.samples);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn empirical_cf_is_conjugate_symmetric(xs in prop::collection::vec(-1e3..1e3_f64, 1..200), t in -50.0..50.0_f64) {
        prop_assert_eq!(empirical_cf(&xs, -t), empirical_cf(&xs, t).conj());
    }

    #[test]
    fn distances_are_nonnegative(seed in 0..1_000u64) {
        let model = example_catalog::<f64>(ExampleName::OneOverExp).unwrap();
        let r = simulate_sums(&model, &SimConfig::new(20, 200, seed, symmetric_grid(2.0, 5)).unwrap()).unwrap();
        prop_assert!(r.ecf_distance >= 0.0 && r.ks_distance >= 0.0);
    }
}
