use proptest::prelude::*;

use lmoment::cache::{parse_table, render_table};
use lmoment::coeffs::{
    complete_homogeneous, extend_multiplicative, local_coeffs_deviation, newton_from_power_sums, power_sums_of,
    unitary_satake, CoefficientTable, TableKind,
};
use lmoment::halasz::DistanceFunction;
use lmoment::mean_sums::{psi, smooth_window};
use lmoment::moments::large_value_census;
use lmoment::primes::{factorize, gcd};
use lmoment::ramare::{decompose, decompose_values, ramare_weight, DecompositionParams};
use lmoment::{BigRational, Complex64};

fn unit_params() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(0.0..std::f64::consts::TAU, 2..=6)
        .prop_map(|phases| phases.into_iter().map(|t| Complex64::from_polar(1.0, t)).collect())
}

fn synthetic(seed: u64, d: usize, n: usize, self_dual: bool) -> CoefficientTable {
    let spec = unitary_satake(seed, d, n as u64, self_dual).unwrap();
    extend_multiplicative(&spec, n, TableKind::Standard).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn h_r_matches_newton(xs in unit_params()) {
        prop_assert!(local_coeffs_deviation(&xs, 20) <= 1e-12);
        let h = complete_homogeneous(&xs, 20);
        let n = newton_from_power_sums(&power_sums_of(&xs, 20), 20);
        prop_assert_eq!(h[0], Complex64::new(1.0, 0.0));
        prop_assert!((h[1] - n[1]).norm() < 1e-12);
    }

    #[test]
    fn tables_are_multiplicative(seed in 0u64..1000, d in 1usize..=4, m in 1u64..60, k in 1u64..60) {
        prop_assume!(gcd(m, k) == 1);
        let t = synthetic(seed, d, 3600, seed % 2 == 0);
        let lhs = t.get((m * k) as usize);
        let rhs = t.get(m as usize) * t.get(k as usize);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn distance_is_nonnegative(seed in 0u64..500, d in 1usize..=4, t in -500.0f64..500.0) {
        let table = synthetic(seed, d, 400, false);
        let dist = DistanceFunction::new(&table, 400).unwrap();
        prop_assert!(dist.eval(t) >= -1e-12);
    }

    #[test]
    fn ramare_weight_is_indicator(n in 1u64..5000, p in 2u64..60, width in 0u64..80) {
        let q = p + width;
        let hit = (p..=q).any(|r| lmoment::primes::is_prime(r) && n % r == 0);
        let want = BigRational::from_integer(u8::from(hit).into());
        prop_assert_eq!(ramare_weight(n, p as f64, q as f64), want);
    }

    #[test]
    fn psi_partition_of_unity(v in -0.5f64..1.5) {
        prop_assert!((psi(v) + psi(1.0 - v) - 1.0).abs() <= 1e-14);
        prop_assert!((0.0..=1.0).contains(&psi(v)));
    }

    #[test]
    fn window_is_monotone(x in 10.0f64..1e4, frac in 0.01f64..1.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let w = smooth_window(x, x * frac).unwrap();
        let (u, v) = (x + x * frac * a.min(b), x + x * frac * a.max(b));
        prop_assert!(w.eval(u) >= w.eval(v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_reassembles(seed in 0u64..1000, d in 1usize..=3, x in 200u64..1500, p in 2u64..20, width in 1u64..60, h in 1.0f64..4.0) {
        let q = (p + width).min(x);
        let params = DecompositionParams::new(x, p as f64, q as f64, h).unwrap();
        let table = synthetic(seed, d, params.horizon().max(2), false);
        let dec = decompose(&table, params).unwrap();
        dec.check_supports().unwrap();
        prop_assert!(dec.reassemble().unwrap().max_deviation < 1e-10);
    }

    #[test]
    fn exact_reassembly_of_integer_values(local in prop::collection::vec(-3i64..=3, 400), p in 2u64..10, width in 1u64..30, h in 1.0f64..3.0) {
        // multiplicative, with f(p^k) drawn per prime power
        let values: Vec<BigRational> = (1..=300u64)
            .map(|n| {
                let v: i64 = factorize(n).iter().map(|&(q, k)| local[((q as usize) * 7 + k as usize) % 400]).product();
                BigRational::from_integer(v.into())
            })
            .collect();
        let params = DecompositionParams::new(100, p as f64, (p + width).min(100) as f64, h).unwrap();
        let dec = decompose_values(&values, params, "ints").unwrap();
        prop_assert_eq!(dec.reassemble().unwrap().max_deviation, 0.0);
    }

    #[test]
    fn census_partitions_the_grid(seed in 0u64..100, t in 20.0f64..200.0, c in 0.0f64..3.0) {
        let params = DecompositionParams::new(2000, 3.0, 60.0, 1.5).unwrap();
        let table = synthetic(seed, 2, params.horizon(), false);
        let dec = decompose(&table, params).unwrap();
        let grid: Vec<f64> = (0..=t.floor() as usize).map(|k| t + k as f64).collect();
        for j in dec.occupied_windows() {
            let census = large_value_census(&dec, &grid, j, c).unwrap();
            prop_assert_eq!(census.small + census.large, grid.len());
            prop_assert_eq!(census.grid_len, grid.len());
        }
    }

    #[test]
    fn cache_round_trip(seed in 0u64..1000, d in 1usize..=4, n in 1usize..400) {
        let table = synthetic(seed, d, n.max(2), true).truncated(n).unwrap();
        let back = parse_table(&render_table(&table, "prop").unwrap()).unwrap();
        prop_assert_eq!(back.table, table);
    }
}
