mod support;

use distancing_core::series::AlignedPair;
use distancing_core::stats::{p_two_tailed, pearson_r, pearson_slices};
use distancing_core::synth::SplitMix64;
use proptest::prelude::*;

use support::exact_pearson;
use support::p_oracle::P_GRID;

#[test]
fn exact_oracle_sanity() {
    assert_eq!(exact_pearson(&[1., 2., 3.], &[1., 2., 3.]), 1.0);
    assert!((exact_pearson(&[1., 2., 3.], &[1., 2., 4.]) - (27f64 / 28.0).sqrt()).abs() < 1e-15);
    assert!((exact_pearson(&[1e-3, 2.5, -7.0], &[0.0, 1.0, 0.5]) - pearson_slices(&[1e-3, 2.5, -7.0], &[0.0, 1.0, 0.5]).unwrap()).abs() < 1e-13);
}

#[test]
fn pearson_matches_exact_oracle() {
    let mut rng = SplitMix64::new(2020);
    for _ in 0..300 {
        let n = 3 + rng.below(98) as usize;
        let x: Vec<f64> = (0..n).map(|_| rng.next_f64() * 2000.0 - 1000.0).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.next_f64() * 2000.0 - 1000.0).collect();
        let r = pearson_r(&AlignedPair::from_vecs(x.clone(), y.clone())).unwrap();
        assert!((r - exact_pearson(&x, &y)).abs() <= 1e-12);
    }
}

#[test]
fn p_values_match_quadrature() {
    for &(r, n, p) in P_GRID {
        let got = p_two_tailed(r, n).unwrap();
        assert!((got - p).abs() <= 1e-8, "r={r} n={n}: {got} vs {p}");
        // relative agreement as well, where p is not vanishingly small
        if p > 1e-100 {
            assert!(((got - p) / p).abs() < 1e-9, "r={r} n={n}: {got} vs {p}");
        }
    }
}

#[test]
fn spec_example_r_half_n_20() {
    let p = p_two_tailed(0.5, 20).unwrap();
    assert!((p - 0.024_769_558_804_109_69).abs() < 1e-12);
}

fn values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1e3f64..1e3, n)
}

proptest! {
    #[test]
    fn affine_invariance(
        (x, y) in (3usize..60).prop_flat_map(|n| (values(n), values(n))),
        a in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0],
        b in -500.0f64..500.0,
    ) {
        let (Ok(base), Ok(_)) = (pearson_slices(&x, &y), pearson_slices(&y, &x)) else { return Ok(()) };
        let scaled: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let r = pearson_slices(&scaled, &y).unwrap();
        prop_assert!((r - a.signum() * base).abs() <= 1e-12, "{r} vs {base}");
    }

    #[test]
    fn symmetric_and_bounded((x, y) in (3usize..60).prop_flat_map(|n| (values(n), values(n)))) {
        let r = pearson_slices(&x, &y).unwrap();
        prop_assert_eq!(r, pearson_slices(&y, &x).unwrap());
        prop_assert!((-1.0..=1.0).contains(&r));
    }

    #[test]
    fn p_in_unit_interval(r in -1.0f64..=1.0, n in 3usize..500) {
        let p = p_two_tailed(r, n).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }
}
