//! Long-run variance, Bahadur residuals and normality diagnostics.
//!
//! The asymptotic behaviour of both quantile estimators is governed by the
//! long-run variance of the indicator process at the true quantile,
//!
//! ```text
//! v^2 = v_0 + 2 * sum_{h>=1} v_h,
//! v_h = E[ 1(X_1 <= xi) 1(X_{1+h} <= xi) ] - alpha^2,
//! ```
//!
//! and the asymptotic variance of either estimator is
//! `sigma^2 = v^2 / f(xi)^2` scaled by 1/N. Two independent estimation
//! routes are provided: a truncated-autocovariance sum and a batch-means
//! estimator, which serve as cross-oracles for one another.
//!
//! The pooled estimator additionally admits a Bahadur linearization: the
//! estimation error minus `[alpha - F_N(xi)] / f(xi)` is a remainder of
//! order `N^{-3/4} log L`, which `bahadur_residual` measures directly.

use crate::error::{Error, Result};
use crate::estimators::{empirical_cdf, pooled_quantile, QuantileEstimate, ReplicationSet};
use crate::processes::{check_alpha, SamplePath};
use crate::special::normal_cdf;

/// Where a long-run-variance figure came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum V2Source {
    /// Closed-form value (e.g. alpha(1-alpha) for independent outputs).
    AnalyticOracle,
    /// `estimate_v2_batch_means`.
    BatchMeans,
    /// `estimate_v2_truncated`.
    TruncatedAutocov,
}

/// v^2, f(xi_alpha) and the implied asymptotic variance sigma^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticProfile {
    pub v2: f64,
    pub density: f64,
    pub sigma2: f64,
    pub alpha: f64,
    pub source: V2Source,
}

impl AsymptoticProfile {
    pub fn new(v2: f64, density: f64, alpha: f64, source: V2Source) -> Result<Self> {
        check_alpha(alpha)?;
        if !(v2.is_finite() && v2 >= 0.0) {
            return Err(Error::InvalidParameter(format!("v2 = {v2} negative")));
        }
        if !(density.is_finite() && density > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "density = {density} not positive"
            )));
        }
        Ok(AsymptoticProfile {
            v2,
            density,
            sigma2: v2 / (density * density),
            alpha,
            source,
        })
    }
}

/// Default truncation lag for the autocovariance sum, ceil(L^(1/3)).
pub fn default_truncation_lag(run_length: usize) -> usize {
    let lag = (run_length as f64).powf(1.0 / 3.0).ceil() as usize;
    lag.clamp(1, run_length.saturating_sub(1).max(1))
}

/// Truncated-autocovariance estimate of v^2 at the given threshold.
///
/// Per replication, the indicator sequence `1(X_i <= threshold)` is centered
/// at its own mean and its sample autocovariances accumulated up to
/// `max_lag` with a flat window; the per-replication sums
/// `v_0 + 2 * sum v_h` are then averaged. Finite samples can produce a
/// negative sum, which is floored at zero.
pub fn estimate_v2_truncated(
    data: &ReplicationSet,
    threshold: f64,
    max_lag: usize,
) -> Result<f64> {
    let l = data.l();
    if max_lag >= l {
        return Err(Error::LagTooLarge {
            max_lag,
            run_length: l,
        });
    }
    if max_lag == 0 {
        return Err(Error::InvalidParameter("max_lag must be >= 1".into()));
    }
    let mut acc = 0.0;
    for path in data.paths() {
        acc += truncated_sum_one_path(path.entries(), threshold, max_lag);
    }
    Ok((acc / data.r() as f64).max(0.0))
}

fn truncated_sum_one_path(entries: &[f64], threshold: f64, max_lag: usize) -> f64 {
    let l = entries.len();
    let ind: Vec<u8> = entries.iter().map(|&v| u8::from(v <= threshold)).collect();
    // prefix[i] = number of ones among the first i indicators
    let mut prefix = Vec::with_capacity(l + 1);
    let mut running = 0u64;
    prefix.push(0u64);
    for &b in &ind {
        running += u64::from(b);
        prefix.push(running);
    }
    let total = running;
    let mean = total as f64 / l as f64;

    let mut sum = 0.0;
    for h in 0..=max_lag {
        // S_h counts index pairs (i, i+h) where both indicators are one.
        let s_h = if h == 0 {
            total
        } else {
            ind[..l - h]
                .iter()
                .zip(&ind[h..])
                .map(|(&a, &b)| u64::from(a & b))
                .sum()
        };
        let head = prefix[l - h] as f64; // sum of ind[0 .. l-h]
        let tail = (total - prefix[h]) as f64; // sum of ind[h .. l]
        let pairs = (l - h) as f64;
        let cov = (s_h as f64 - mean * (head + tail) + pairs * mean * mean) / l as f64;
        sum += if h == 0 { cov } else { 2.0 * cov };
    }
    sum
}

/// Batch-means estimate of v^2 from a single path.
///
/// The indicator sequence is cut into `floor(L / batch_size)` full batches
/// (a trailing partial batch is dropped) and the estimate is
/// `batch_size * sample-variance(batch means)`. At least 30 batches are
/// required.
pub fn estimate_v2_batch_means(
    path: &SamplePath,
    threshold: f64,
    batch_size: usize,
) -> Result<f64> {
    const MIN_BATCHES: usize = 30;
    if batch_size == 0 {
        return Err(Error::InvalidParameter("batch_size must be >= 1".into()));
    }
    let len = path.len();
    let batches = len / batch_size;
    if batches < MIN_BATCHES {
        return Err(Error::TooFewBatches {
            got: batches,
            min: MIN_BATCHES,
            batch_size,
            len,
        });
    }
    let means: Vec<f64> = (0..batches)
        .map(|k| {
            let chunk = &path.entries()[k * batch_size..(k + 1) * batch_size];
            chunk.iter().filter(|&&v| v <= threshold).count() as f64 / batch_size as f64
        })
        .collect();
    let grand = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (batches - 1) as f64;
    Ok(batch_size as f64 * var)
}

/// The measured Bahadur remainder for one replication set, together with
/// the theoretical scale `N^{-3/4} ln L` it is compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BahadurDiagnostic {
    /// `(pooled - truth) - [alpha - F_N(truth)] / density`.
    pub residual: f64,
    /// Pooled sample size N.
    pub n: usize,
    /// Run-length L.
    pub l: usize,
    /// `N^{-3/4} * ln(L)`.
    pub bound_scale: f64,
}

/// Measure the Bahadur remainder of the pooled estimator against the
/// analytic truth and density.
pub fn bahadur_residual(
    data: &ReplicationSet,
    alpha: f64,
    truth: f64,
    density: f64,
) -> Result<BahadurDiagnostic> {
    if !(density.is_finite() && density > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "density = {density} not positive"
        )));
    }
    let pooled = pooled_quantile(data, alpha)?;
    let linear = (alpha - empirical_cdf(data, truth)) / density;
    let n = data.n();
    let l = data.l();
    Ok(BahadurDiagnostic {
        residual: (pooled.value - truth) - linear,
        n,
        l,
        bound_scale: (n as f64).powf(-0.75) * (l as f64).ln(),
    })
}

/// Map estimates to `sqrt(N) * (value - truth) / sigma`.
pub fn standardized_errors(
    estimates: &[QuantileEstimate],
    truth: f64,
    profile: &AsymptoticProfile,
) -> Result<Vec<f64>> {
    if profile.sigma2 <= 0.0 {
        return Err(Error::InvalidParameter(
            "sigma2 must be positive to standardize errors".into(),
        ));
    }
    let sigma = profile.sigma2.sqrt();
    Ok(estimates
        .iter()
        .map(|e| (e.n() as f64).sqrt() * (e.value - truth) / sigma)
        .collect())
}

/// Summary statistics of a standardized-error sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalityReport {
    pub n: usize,
    pub mean: f64,
    /// Sample variance (n - 1 denominator).
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// Kolmogorov distance to the standard normal CDF.
    pub ks_distance: f64,
}

/// Compute the five normality diagnostics; thresholds are left to callers.
pub fn normality_check(z: &[f64]) -> Result<NormalityReport> {
    const MIN_LEN: usize = 30;
    if z.len() < MIN_LEN {
        return Err(Error::InvalidParameter(format!(
            "normality check needs at least {MIN_LEN} values, got {}",
            z.len()
        )));
    }
    let n = z.len() as f64;
    let mean = z.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in z {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    let (skewness, excess_kurtosis) = if m2 > 0.0 {
        (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
    } else {
        (0.0, 0.0)
    };
    Ok(NormalityReport {
        n: z.len(),
        mean,
        variance: m2 * n / (n - 1.0),
        skewness,
        excess_kurtosis,
        ks_distance: kolmogorov_distance(z, normal_cdf),
    })
}

/// Kolmogorov distance between the empirical CDF of `values` and a
/// reference CDF: `sup_x |F_n(x) - F(x)|`.
pub fn kolmogorov_distance(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut sup = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lo = (f - i as f64 / n).abs();
        let hi = ((i + 1) as f64 / n - f).abs();
        sup = sup.max(lo).max(hi);
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::Method;
    use crate::processes::{generate_ar1, Ar1Params, SamplePath};
    use crate::rng::derive;
    use approx::assert_relative_eq;

    // v^2 of the AR(1) median indicator has the closed form
    // 1/4 + (1/pi) * sum_{h>=1} arcsin(phi^h); values via mpmath.
    const AR1_V2_MEDIAN: [(f64, f64); 3] = [
        (0.0, 0.25),
        (0.5, 0.576_793_939_281_855_18),
        (0.9, 3.319_717_174_849_985_9),
    ];

    fn ar1_set(phi: f64, r: usize, l: usize, seed: u64) -> ReplicationSet {
        let p = Ar1Params::standard(phi).unwrap();
        let paths = (0..r)
            .map(|j| generate_ar1(&p, l, 0, derive(seed, 0, j as u64)).unwrap())
            .collect();
        ReplicationSet::new(paths).unwrap()
    }

    #[test]
    fn iid_indicators_give_bernoulli_variance() {
        let data = ar1_set(0.0, 1, 200_000, 51);
        let v2 = estimate_v2_truncated(&data, 0.0, 60).unwrap();
        assert_relative_eq!(v2, 0.25, max_relative = 0.05);
        let bm = estimate_v2_batch_means(&data.paths()[0], 0.0, 500).unwrap();
        assert_relative_eq!(bm, 0.25, max_relative = 0.15);
    }

    #[test]
    fn degenerate_indicators_give_zero() {
        let constant = SamplePath::new(vec![-1.0; 4000], 0).unwrap();
        let data = ReplicationSet::new(vec![constant.clone()]).unwrap();
        assert_eq!(estimate_v2_truncated(&data, 0.0, 10).unwrap(), 0.0);
        assert_eq!(estimate_v2_batch_means(&constant, -5.0, 100).unwrap(), 0.0);
    }

    #[test]
    fn truncated_sum_matches_arcsin_formula() {
        for &(phi, want) in &AR1_V2_MEDIAN {
            let data = ar1_set(phi, 1, 2_000_000, 61);
            let lag = default_truncation_lag(data.l());
            let v2 = estimate_v2_truncated(&data, 0.0, lag).unwrap();
            assert_relative_eq!(v2, want, max_relative = 0.08);
        }
    }

    #[test]
    fn cross_oracle_agreement_at_unit_scale() {
        let data = ar1_set(0.5, 1, 1_000_000, 71);
        let lag = default_truncation_lag(data.l());
        let trunc = estimate_v2_truncated(&data, 0.0, lag).unwrap();
        let bm = estimate_v2_batch_means(&data.paths()[0], 0.0, 1000).unwrap();
        assert_relative_eq!(trunc, bm, max_relative = 0.10);
    }

    #[test]
    fn truncated_rejects_bad_lag() {
        let data = ar1_set(0.0, 1, 100, 1);
        assert!(matches!(
            estimate_v2_truncated(&data, 0.0, 100),
            Err(Error::LagTooLarge { .. })
        ));
        assert!(estimate_v2_truncated(&data, 0.0, 0).is_err());
    }

    #[test]
    fn batch_means_rejects_too_few_batches() {
        let path = SamplePath::new(vec![0.0; 100], 0).unwrap();
        assert!(matches!(
            estimate_v2_batch_means(&path, 0.5, 10),
            Err(Error::TooFewBatches { got: 10, .. })
        ));
    }

    #[test]
    fn default_lag_is_cuberoot() {
        assert_eq!(default_truncation_lag(1000), 10);
        assert_eq!(default_truncation_lag(10_000_000), 216);
        assert_eq!(default_truncation_lag(2), 1);
    }

    #[test]
    fn bahadur_degenerate_is_finite() {
        let data = ReplicationSet::new(vec![SamplePath::new(vec![1.5], 0).unwrap()]).unwrap();
        let d = bahadur_residual(&data, 0.5, 1.0, 0.4).unwrap();
        assert!(d.residual.is_finite());
        assert_eq!(d.n, 1);
        assert_eq!(d.l, 1);
        assert!(bahadur_residual(&data, 0.5, 1.0, 0.0).is_err());
    }

    #[test]
    fn bound_scale_definition() {
        let data = ar1_set(0.5, 4, 250, 81);
        let d = bahadur_residual(&data, 0.5, 0.0, 0.34).unwrap();
        assert_relative_eq!(
            d.bound_scale,
            (1000.0_f64).powf(-0.75) * (250.0_f64).ln(),
            max_relative = 1e-15
        );
    }

    fn est(value: f64, r: usize, l: usize) -> QuantileEstimate {
        QuantileEstimate {
            value,
            alpha: 0.5,
            method: Method::Pooled,
            r,
            l,
        }
    }

    #[test]
    fn standardization_arithmetic() {
        let profile = AsymptoticProfile::new(4.0, 1.0, 0.5, V2Source::AnalyticOracle).unwrap();
        assert_eq!(profile.sigma2, 4.0);
        let z = standardized_errors(&[est(1.0, 1, 1), est(0.2, 10, 10)], 0.0, &profile).unwrap();
        assert_eq!(z[0], 0.5); // sqrt(1) * 1.0 / 2
        assert_eq!(z[1], 1.0); // sqrt(100) * 0.2 / 2
        let z0 = standardized_errors(&[est(3.25, 4, 16)], 3.25, &profile).unwrap();
        assert_eq!(z0[0], 0.0);
    }

    #[test]
    fn standardization_is_affine_in_the_error() {
        let profile = AsymptoticProfile::new(1.0, 2.0, 0.5, V2Source::BatchMeans).unwrap();
        let base = [est(0.3, 2, 50), est(-0.7, 2, 50)];
        let doubled = [est(0.6, 2, 50), est(-1.4, 2, 50)];
        let z1 = standardized_errors(&base, 0.0, &profile).unwrap();
        let z2 = standardized_errors(&doubled, 0.0, &profile).unwrap();
        for (a, b) in z1.iter().zip(&z2) {
            assert_relative_eq!(2.0 * a, *b, max_relative = 1e-15);
        }
    }

    #[test]
    fn zero_sigma_is_rejected() {
        let profile = AsymptoticProfile::new(0.0, 1.0, 0.5, V2Source::AnalyticOracle).unwrap();
        assert!(standardized_errors(&[est(1.0, 1, 1)], 0.0, &profile).is_err());
        assert!(AsymptoticProfile::new(-1.0, 1.0, 0.5, V2Source::AnalyticOracle).is_err());
        assert!(AsymptoticProfile::new(1.0, 0.0, 0.5, V2Source::AnalyticOracle).is_err());
    }

    #[test]
    fn normality_of_exact_normal_draws() {
        let mut stream = derive(91, 0, 0);
        let z: Vec<f64> = (0..10_000).map(|_| stream.normal(0.0, 1.0)).collect();
        let rep = normality_check(&z).unwrap();
        assert!(rep.ks_distance <= 0.02, "ks = {}", rep.ks_distance);
        assert!(rep.mean.abs() < 0.05);
        assert!((rep.variance - 1.0).abs() < 0.05);
        assert!(rep.skewness.abs() < 0.1);
        assert!(rep.excess_kurtosis.abs() < 0.15);
    }

    #[test]
    fn normality_of_constant_sequence() {
        let rep = normality_check(&vec![2.0; 50]).unwrap();
        assert_eq!(rep.variance, 0.0);
        assert!(rep.ks_distance >= 0.5);
    }

    #[test]
    fn normality_negation_symmetry() {
        let mut stream = derive(92, 0, 0);
        let z: Vec<f64> = (0..500).map(|_| stream.normal(0.3, 1.2)).collect();
        let neg: Vec<f64> = z.iter().map(|v| -v).collect();
        let a = normality_check(&z).unwrap();
        let b = normality_check(&neg).unwrap();
        assert_relative_eq!(a.variance, b.variance, max_relative = 1e-12);
        assert_relative_eq!(a.excess_kurtosis, b.excess_kurtosis, max_relative = 1e-9);
        assert_relative_eq!(a.mean, -b.mean, max_relative = 1e-12);
        assert_relative_eq!(a.skewness, -b.skewness, max_relative = 1e-9);
    }

    #[test]
    fn normality_rejects_short_input() {
        assert!(normality_check(&[0.0; 29]).is_err());
    }

    #[test]
    fn oracle_profiles_have_positive_finite_sigma2() {
        use crate::processes::{
            true_density_at_quantile, true_quantile, Mm1Params, ProcessModel,
        };
        let models = [
            ProcessModel::ar1(Ar1Params::standard(0.9).unwrap()),
            ProcessModel::mm1(Mm1Params::standard(0.7).unwrap()),
        ];
        for (idx, model) in models.iter().enumerate() {
            let path = model.generate(500_000, derive(101, 0, idx as u64)).unwrap();
            for &alpha in &[0.5, 0.95] {
                let threshold = true_quantile(model, alpha).unwrap();
                let density = true_density_at_quantile(model, alpha).unwrap();
                let v2 = estimate_v2_batch_means(&path, threshold, 1000).unwrap();
                let profile =
                    AsymptoticProfile::new(v2, density, alpha, V2Source::BatchMeans).unwrap();
                assert!(
                    profile.sigma2 > 0.0 && profile.sigma2.is_finite(),
                    "sigma2 = {} for model {idx} alpha {alpha}",
                    profile.sigma2
                );
            }
        }
    }

    #[test]
    fn ks_distance_of_exact_grid() {
        // Points at Phi^{-1}((i - 0.5) / n) give distance 0.5 / n.
        use crate::special::inv_normal_cdf;
        let n = 100;
        let z: Vec<f64> = (0..n)
            .map(|i| inv_normal_cdf((i as f64 + 0.5) / n as f64))
            .collect();
        let d = kolmogorov_distance(&z, normal_cdf);
        assert_relative_eq!(d, 0.5 / n as f64, max_relative = 1e-9);
    }
}
