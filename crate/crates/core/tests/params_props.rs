use num_complex::Complex;
use proptest::prelude::*;
use stable_core::params::{cf, convert, iid_sum_law, negate};
use stable_core::{Convention, StableParams};

const GENERAL: [Convention; 6] =
    [Convention::S1, Convention::S0, Convention::Mu1, Convention::ZolA, Convention::ZolM, Convention::ZolB];
const T_GRID: [f64; 6] = [-5.0, -1.0, -0.1, 0.1, 1.0, 5.0];

fn alpha_off_one() -> impl Strategy<Value = f64> {
    (0.1..2.0_f64).prop_filter("away from 1", |a| (a - 1.0).abs() >= 1e-6)
}

fn s1_law() -> impl Strategy<Value = StableParams<f64>> {
    (alpha_off_one(), -1.0..=1.0_f64, 0.1..5.0_f64, -5.0..5.0_f64)
        .prop_map(|(a, b, g, d)| StableParams::s1(a, b, g, d).unwrap())
}

fn close(x: &StableParams<f64>, y: &StableParams<f64>) -> f64 {
    [(x.alpha, y.alpha), (x.beta, y.beta), (x.gamma, y.gamma), (x.delta, y.delta)]
        .iter()
        .map(|&(u, v)| (u - v).abs() / v.abs().max(1.0))
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn chains_back_to_s1_reproduce_the_fields(p in s1_law(), chain in prop::collection::vec(0..6usize, 1..4)) {
        let mut q = p;
        for &c in &chain {
            q = convert(&q, GENERAL[c]).unwrap();
        }
        let back = convert(&q, Convention::S1).unwrap();
        prop_assert!(close(&back, &p) <= 1e-12, "{p:?} -> {back:?}");
    }

    #[test]
    fn conversion_preserves_the_cf(p in s1_law(), target in 0..6usize) {
        let q = convert(&p, GENERAL[target]).unwrap();
        for t in T_GRID {
            prop_assert!((cf(&p, t) - cf(&q, t)).norm() <= 1e-12);
        }
    }

    #[test]
    fn strict_conversion_preserves_the_cf(p in s1_law()) {
        let p = StableParams::s1(p.alpha, p.beta, p.gamma, 0.0).unwrap();
        for target in [Convention::ZolCStrict, Convention::FellerStrict, Convention::StrictKl] {
            let q = convert(&p, target).unwrap();
            for t in T_GRID {
                prop_assert!((cf(&p, t) - cf(&q, t)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn cf_is_conjugate_symmetric(p in s1_law(), target in 0..6usize, t in -20.0..20.0_f64) {
        let q = convert(&p, GENERAL[target]).unwrap();
        prop_assert_eq!(cf(&q, -t), cf(&q, t).conj());
    }

    #[test]
    fn cf_modulus_is_exp_of_minus_scaled_power(p in s1_law(), target in 0..6usize, t in -10.0..10.0_f64) {
        let q = convert(&p, GENERAL[target]).unwrap();
        let want = (-(p.gamma * t.abs()).powf(p.alpha)).exp();
        prop_assert!((cf(&q, t).norm() - want).abs() <= 1e-13);
    }

    #[test]
    fn iid_sums_are_affine_copies(p in s1_law(), n in prop::sample::select(vec![2_u64, 3, 10])) {
        let (an, bn) = iid_sum_law(&p, n).unwrap();
        for t in T_GRID {
            let lhs = cf(&p, t).powu(n as u32);
            let rhs = cf(&p, an * t) * Complex::new(0.0, bn * t).exp();
            prop_assert!((lhs - rhs).norm() <= 1e-10);
        }
    }

    #[test]
    fn s0_is_continuous_at_alpha_one(b in -1.0..=1.0_f64, g in 0.1..5.0_f64, d in -5.0..5.0_f64, sign in prop::bool::ANY) {
        let a = if sign { 1.0 + 1e-4 } else { 1.0 - 1e-4 };
        let near = StableParams::new(Convention::S0, a, b, g, d).unwrap();
        let at = StableParams::new(Convention::S0, 1.0, b, g, d).unwrap();
        for k in 0..=50 {
            let t = -5.0 + 0.2 * k as f64;
            prop_assert!((cf(&near, t) - cf(&at, t)).norm() <= 1e-3);
        }
    }

    #[test]
    fn beta_b_is_increasing(a in 0.1..2.0_f64, b1 in -1.0..=1.0_f64, b2 in -1.0..=1.0_f64) {
        prop_assume!(a < 2.0 && b1 < b2);
        let to_b = |b: f64| convert(&StableParams::s1(a, b, 1.0, 0.0).unwrap(), Convention::ZolB).unwrap().beta;
        prop_assert!(to_b(b1) < to_b(b2) || (b2 - b1) < 1e-12);
    }

    #[test]
    fn theta_respects_its_bound(p in s1_law()) {
        let p = StableParams::s1(p.alpha, p.beta, p.gamma, 0.0).unwrap();
        let theta = convert(&p, Convention::ZolCStrict).unwrap().beta;
        let bound = if p.alpha <= 1.0 { 1.0 } else { 2.0 / p.alpha - 1.0 };
        prop_assert!(theta.abs() <= bound);
    }

    #[test]
    fn negation_is_an_involution(p in s1_law(), target in 0..6usize) {
        let q = convert(&p, GENERAL[target]).unwrap();
        let back = negate(&negate(&q).unwrap()).unwrap();
        prop_assert_eq!(back.convention, q.convention);
        prop_assert!(close(&back, &q) <= 1e-12);
    }
}

#[test]
fn beta_b_fixes_the_endpoints_and_zero() {
    for a in [0.3, 0.7, 1.0, 1.4, 1.9] {
        for b in [-1.0_f64, 0.0, 1.0] {
            let q = convert(&StableParams::s1(a, b, 1.0, 0.0).unwrap(), Convention::ZolB).unwrap();
            assert!((q.beta - b).abs() <= 1e-15, "alpha={a} beta={b} -> {}", q.beta);
        }
    }
}

#[test]
fn alpha_one_round_trips_exactly() {
    for &(b, g, d) in &[(0.0, 1.0, 0.0), (0.4, 2.0, -1.0), (-1.0, 0.5, 3.0), (1.0, 3.0, 0.25)] {
        let p = StableParams::s1(1.0, b, g, d).unwrap();
        for c in GENERAL.iter().copied().chain([Convention::OneStableKlb]) {
            let back = convert(&convert(&p, c).unwrap(), Convention::S1).unwrap();
            assert!(close(&back, &p) <= 1e-14, "{c}: {back:?}");
        }
    }
}
