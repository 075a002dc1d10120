//! Property tests for the estimator invariants.

use proptest::prelude::*;

use quantpool::{
    average_quantile, empirical_cdf, pooled_quantile, single_path_quantile, ReplicationSet,
    RngStream, SamplePath,
};

/// Deterministic data from a compact description, so shrinking stays cheap.
fn build_set(seed: u64, r: usize, l: usize, quantize: bool) -> ReplicationSet {
    let mut rng = RngStream::from_id(seed);
    let paths = (0..r)
        .map(|_| {
            let entries = (0..l)
                .map(|_| {
                    let v = rng.normal(0.0, 1.0);
                    if quantize {
                        (v * 4.0).round() / 4.0
                    } else {
                        v
                    }
                })
                .collect();
            SamplePath::new(entries, 0).unwrap()
        })
        .collect();
    ReplicationSet::new(paths).unwrap()
}

fn rank(n: usize, alpha: f64) -> usize {
    ((n as f64 * alpha).ceil() as usize).clamp(1, n)
}

proptest! {
    #[test]
    fn quantiles_are_monotone_in_alpha(
        seed: u64,
        r in 1usize..6,
        l in 1usize..60,
        a in 0.01f64..0.99,
        b in 0.01f64..0.99,
        quantize: bool,
    ) {
        let data = build_set(seed, r, l, quantize);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(
            pooled_quantile(&data, lo).unwrap().value
                <= pooled_quantile(&data, hi).unwrap().value
        );
        prop_assert!(
            average_quantile(&data, lo).unwrap().value
                <= average_quantile(&data, hi).unwrap().value
        );
    }

    #[test]
    fn quantiles_are_affine_equivariant(
        seed: u64,
        r in 1usize..6,
        l in 1usize..60,
        alpha in 0.01f64..0.99,
        scale in 0.1f64..8.0,
        shift in -50.0f64..50.0,
        quantize: bool,
    ) {
        let data = build_set(seed, r, l, quantize);
        let transformed = ReplicationSet::new(
            data.paths()
                .iter()
                .map(|p| {
                    SamplePath::new(
                        p.entries().iter().map(|&x| scale * x + shift).collect(),
                        p.seed(),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap();

        let p0 = pooled_quantile(&data, alpha).unwrap().value;
        let p1 = pooled_quantile(&transformed, alpha).unwrap().value;
        prop_assert_eq!(p1, scale * p0 + shift);

        let a0 = average_quantile(&data, alpha).unwrap().value;
        let a1 = average_quantile(&transformed, alpha).unwrap().value;
        // The average goes through a sum, so allow one rounding step per path.
        prop_assert!((a1 - (scale * a0 + shift)).abs() <= 1e-12 * a1.abs().max(1.0));
    }

    #[test]
    fn pooled_quantile_and_ecdf_are_adjoint(
        seed: u64,
        r in 1usize..6,
        l in 1usize..60,
        alpha in 0.01f64..0.99,
        quantize: bool,
    ) {
        let data = build_set(seed, r, l, quantize);
        let est = pooled_quantile(&data, alpha).unwrap().value;
        let n = data.n();
        let target = rank(n, alpha) as f64 / n as f64;
        prop_assert!(empirical_cdf(&data, est) >= target);
        prop_assert!(empirical_cdf(&data, est.next_down()) < target);
    }

    #[test]
    fn single_replication_collapses_all_estimators(
        seed: u64,
        l in 1usize..200,
        alpha in 0.01f64..0.99,
        quantize: bool,
    ) {
        let data = build_set(seed, 1, l, quantize);
        let pooled = pooled_quantile(&data, alpha).unwrap().value;
        let average = average_quantile(&data, alpha).unwrap().value;
        let single = single_path_quantile(&data.paths()[0], alpha).unwrap().value;
        prop_assert_eq!(pooled, average);
        prop_assert_eq!(pooled, single);
    }

    #[test]
    fn selection_agrees_with_sort(
        seed: u64,
        r in 1usize..8,
        l in 1usize..80,
        alpha in 0.001f64..0.999,
        quantize: bool,
    ) {
        let data = build_set(seed, r, l, quantize);
        let mut sorted: Vec<f64> = data.pooled_entries().collect();
        sorted.sort_by(f64::total_cmp);
        let expected = sorted[rank(data.n(), alpha) - 1];
        prop_assert_eq!(pooled_quantile(&data, alpha).unwrap().value, expected);
    }
}
