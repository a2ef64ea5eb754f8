//! Gini coefficient and Lorenz curve over non-negative observations.
//!
//! The coefficient is the relative mean absolute difference
//! `G = sum_i sum_j |x_i - x_j| / (2 n^2 mean)` — the population form, with
//! no (n-1) correction. It is 0 when all observations are equal and is
//! bounded above by `(n-1)/n` for `n` observations. Observations can be
//! throughputs, hub loads, or linear-scale SNRs; the unit cancels.

use serde::Serialize;

use crate::error::{Error, Result};

/// A non-empty set of finite, non-negative observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservationSet {
    values: Vec<f64>,
}

impl ObservationSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("observation set must not be empty"));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::invalid(format!(
                    "observation {i} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Gini coefficient of the observation set.
///
/// Evaluated through the sorted-prefix identity
/// `G = 2 * sum_k k*x_(k) / (n * S) - (n+1)/n` (ascending order, 1-based k),
/// which equals the pairwise double sum exactly and runs in O(n log n).
pub fn gini(obs: &ObservationSet) -> Result<f64> {
    let sum = obs.sum();
    if sum == 0.0 {
        return Err(Error::ZeroMean);
    }
    let n = obs.len() as f64;
    let mut sorted = obs.values.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let weighted: f64 = sorted.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * v).sum();
    let g = 2.0 * weighted / (n * sum) - (n + 1.0) / n;
    // Rounding can leave a tiny negative residue when all values are equal.
    Ok(g.max(0.0))
}

/// Gini over linear-scale SNR observations. Same computation as [`gini`];
/// named so reports can label the metric.
pub fn gini_snr(snr_values: &ObservationSet) -> Result<f64> {
    gini(snr_values)
}

/// Convert an SNR in dB to linear scale. Averaging dB values would silently
/// change the metric, so SNR observations must be converted first.
pub fn snr_db_to_linear(db: f64) -> f64 {
    10.0f64.powf(db / 10.0)
}

/// Lorenz curve: cumulative value share against cumulative population share,
/// over ascending-sorted observations. Includes (0,0) and (1,1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzCurve {
    points: Vec<(f64, f64)>,
}

impl LorenzCurve {
    /// Validate an externally built curve: endpoints exact, both coordinates
    /// non-decreasing, and the curve on or below the diagonal.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("Lorenz curve needs at least two points"));
        }
        if points[0] != (0.0, 0.0) || *points.last().unwrap() != (1.0, 1.0) {
            return Err(Error::invalid("Lorenz curve must start at (0,0) and end at (1,1)"));
        }
        for w in points.windows(2) {
            if w[1].0 < w[0].0 || w[1].1 < w[0].1 {
                return Err(Error::invalid("Lorenz curve coordinates must be non-decreasing"));
            }
        }
        for (p, v) in &points {
            if *v > *p + 1e-12 {
                return Err(Error::invalid("Lorenz curve must lie on or below the diagonal"));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Lorenz curve of the observation set: points `(k/n, prefix_k / S)` for
/// `k = 0..n` over ascending-sorted values.
pub fn lorenz(obs: &ObservationSet) -> Result<LorenzCurve> {
    let sum = obs.sum();
    if sum == 0.0 {
        return Err(Error::ZeroMean);
    }
    let n = obs.len();
    let mut sorted = obs.values.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut points = Vec::with_capacity(n + 1);
    points.push((0.0, 0.0));
    let mut acc = 0.0;
    for (k, v) in sorted.iter().enumerate() {
        acc += v;
        let p = (k + 1) as f64 / n as f64;
        let share = if k + 1 == n { 1.0 } else { acc / sum };
        points.push((p, share));
    }
    LorenzCurve::new(points)
}

/// Gini from a Lorenz curve as the ratio of areas `A / (A + B)`, where `B`
/// is the trapezoidal area under the curve and `A = 0.5 - B` the area
/// between the curve and the diagonal. For curves built from discrete data
/// this coincides exactly with the pairwise formula.
pub fn gini_from_lorenz(curve: &LorenzCurve) -> Result<f64> {
    let mut b = 0.0f64;
    for w in curve.points.windows(2) {
        let ((p0, v0), (p1, v1)) = (w[0], w[1]);
        b += (p1 - p0) * (v0 + v1) / 2.0;
    }
    let a = 0.5 - b;
    Ok((a / (a + b)).max(0.0))
}

// ===========================================================================
// Tests
// ===========================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Test oracle: the pairwise double sum, written literally.
    fn gini_double_sum(values: &[f64]) -> f64 {
        let n = values.len() as f64;
        let sum: f64 = values.iter().sum();
        let mean = sum / n;
        let mut acc = 0.0;
        for xi in values {
            for xj in values {
                acc += (xi - xj).abs();
            }
        }
        acc / (2.0 * n * n * mean)
    }

    fn obs(values: &[f64]) -> ObservationSet {
        ObservationSet::new(values.to_vec()).unwrap()
    }

    #[test]
    fn gini_equal_values_is_zero() {
        assert_eq!(gini(&obs(&[5.0, 5.0, 5.0, 5.0])).unwrap(), 0.0);
    }

    #[test]
    fn gini_two_point_extreme() {
        assert!((gini(&obs(&[0.0, 1.0])).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gini_single_nonzero_of_four() {
        assert!((gini(&obs(&[0.0, 0.0, 0.0, 7.0])).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn gini_errors() {
        assert!(matches!(gini(&obs(&[0.0, 0.0])), Err(Error::ZeroMean)));
        assert!(ObservationSet::new(vec![]).is_err());
        assert!(ObservationSet::new(vec![1.0, -0.1]).is_err());
        assert!(ObservationSet::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn gini_snr_is_same_metric() {
        let o = obs(&[1.0, 2.0, 4.0]);
        assert_eq!(gini(&o).unwrap(), gini_snr(&o).unwrap());
    }

    #[test]
    fn db_conversion() {
        assert!((snr_db_to_linear(0.0) - 1.0).abs() < 1e-15);
        assert!((snr_db_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((snr_db_to_linear(-3.0) - 0.5011872336272722).abs() < 1e-12);
    }

    #[test]
    fn lorenz_shapes() {
        let c = lorenz(&obs(&[1.0, 1.0, 1.0, 1.0])).unwrap();
        for (p, v) in c.points() {
            assert!((p - v).abs() < 1e-15);
        }
        let c = lorenz(&obs(&[0.0, 1.0])).unwrap();
        assert_eq!(c.points(), &[(0.0, 0.0), (0.5, 0.0), (1.0, 1.0)]);
        let c = lorenz(&obs(&[0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(
            c.points(),
            &[(0.0, 0.0), (0.25, 0.0), (0.5, 0.0), (0.75, 0.0), (1.0, 1.0)]
        );
    }

    #[test]
    fn gini_from_lorenz_examples() {
        let diagonal =
            LorenzCurve::new(vec![(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)]).unwrap();
        assert_eq!(gini_from_lorenz(&diagonal).unwrap(), 0.0);
        let c = lorenz(&obs(&[0.0, 1.0])).unwrap();
        assert!((gini_from_lorenz(&c).unwrap() - 0.5).abs() < 1e-15);
        let c = lorenz(&obs(&[0.0, 0.0, 0.0, 1.0])).unwrap();
        assert!((gini_from_lorenz(&c).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn lorenz_curve_validation() {
        assert!(LorenzCurve::new(vec![(0.0, 0.0)]).is_err());
        assert!(LorenzCurve::new(vec![(0.0, 0.1), (1.0, 1.0)]).is_err());
        // Above the diagonal.
        assert!(LorenzCurve::new(vec![(0.0, 0.0), (0.5, 0.9), (1.0, 1.0)]).is_err());
        // Decreasing share.
        assert!(LorenzCurve::new(vec![(0.0, 0.0), (0.5, 0.4), (0.7, 0.3), (1.0, 1.0)]).is_err());
    }

    proptest! {
        #[test]
        fn matches_double_sum(values in proptest::collection::vec(0.0f64..1000.0, 1..60)) {
            prop_assume!(values.iter().sum::<f64>() > 0.0);
            let g = gini(&obs(&values)).unwrap();
            let oracle = gini_double_sum(&values);
            prop_assert!((g - oracle).abs() < 1e-12);
        }

        #[test]
        fn scale_invariance(
            values in proptest::collection::vec(0.0f64..1000.0, 1..40),
            scale in 1e-3f64..1e3,
        ) {
            prop_assume!(values.iter().sum::<f64>() > 0.0);
            let g1 = gini(&obs(&values)).unwrap();
            let scaled: Vec<f64> = values.iter().map(|v| v * scale).collect();
            let g2 = gini(&obs(&scaled)).unwrap();
            prop_assert!((g1 - g2).abs() < 1e-12);
        }

        #[test]
        fn permutation_invariance(values in proptest::collection::vec(0.0f64..1000.0, 2..40)) {
            prop_assume!(values.iter().sum::<f64>() > 0.0);
            let g1 = gini(&obs(&values)).unwrap();
            let mut reversed = values.clone();
            reversed.reverse();
            let g2 = gini(&obs(&reversed)).unwrap();
            prop_assert!((g1 - g2).abs() < 1e-12);
        }

        #[test]
        fn replication_invariance(
            values in proptest::collection::vec(0.0f64..1000.0, 1..20),
            k in 2usize..5,
        ) {
            prop_assume!(values.iter().sum::<f64>() > 0.0);
            let g1 = gini(&obs(&values)).unwrap();
            let mut repeated = Vec::new();
            for _ in 0..k {
                repeated.extend_from_slice(&values);
            }
            let g2 = gini(&obs(&repeated)).unwrap();
            prop_assert!((g1 - g2).abs() < 1e-12);
        }

        #[test]
        fn bounds_hold(values in proptest::collection::vec(0.0f64..1000.0, 1..60)) {
            prop_assume!(values.iter().sum::<f64>() > 0.0);
            let n = values.len() as f64;
            let g = gini(&obs(&values)).unwrap();
            prop_assert!(g >= 0.0);
            prop_assert!(g <= (n - 1.0) / n + 1e-12);
        }

        #[test]
        fn lorenz_route_agrees(values in proptest::collection::vec(0.0f64..1000.0, 1..60)) {
            prop_assume!(values.iter().sum::<f64>() > 0.0);
            let o = obs(&values);
            let direct = gini(&o).unwrap();
            let via_curve = gini_from_lorenz(&lorenz(&o).unwrap()).unwrap();
            prop_assert!((direct - via_curve).abs() < 1e-12);
        }
    }
}
