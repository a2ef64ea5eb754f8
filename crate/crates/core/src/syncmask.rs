//! Synchronization-compliance checking: EEC wander-generation limit masks
//! (MTIE/TDEV over observation interval), estimators for both metrics from
//! sampled time-error records, and the scalar frequency-accuracy and PTP
//! correction-field bounds.
//!
//! The limit masks are the locked/holdover noise-generation curves, defined
//! piecewise on observation intervals 0.1 s < tau <= 1000 s:
//!
//! | MTIE limit [ns]   | interval            |
//! |-------------------|---------------------|
//! | 40                | 0.1 < tau <= 1      |
//! | 40 tau^0.1        | 1 < tau <= 100      |
//! | 25.25 tau^0.2     | 100 < tau <= 1000   |
//!
//! | TDEV limit [ns]   | interval            |
//! |-------------------|---------------------|
//! | 3.2               | 0.1 < tau <= 25     |
//! | 0.64 tau^0.5      | 25 < tau <= 100     |
//! | 6.4               | 100 < tau <= 1000   |
//!
//! Measurements are taken through an equivalent 10 Hz first-order low-pass
//! filter at a maximum sampling interval of 1/30 s; the TDEV record must
//! cover at least twelve times the integration period (T = 12 tau).
//!
//! The estimators are the standard metrology definitions: MTIE is the
//! largest peak-to-peak excursion within any window of `floor(tau/tau0)`
//! sample intervals; TDEV is the rms of second differences of tau-averages,
//! `TDEV^2(n*tau0) = (1/(6 n^2 (N-3n+1))) *
//! sum_j [ sum_{i=j}^{j+n-1} (x_{i+2n} - 2 x_{i+n} + x_i) ]^2`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Default sampling interval (1/30 s).
pub const DEFAULT_SAMPLE_INTERVAL_S: f64 = 1.0 / 30.0;
/// EEC output frequency accuracy bound, in ppm.
pub const FREQUENCY_ACCURACY_LIMIT_PPM: f64 = 4.6;
/// Transparent-clock correction-field accuracy bound, in ns.
pub const CF_ACCURACY_LIMIT_NS: f64 = 80.0;

const MASK_TAU_MIN_S: f64 = 0.1; // exclusive
const MASK_TAU_MAX_S: f64 = 1000.0; // inclusive

// ---------------------------------------------------------------------------
// Limit masks
// ---------------------------------------------------------------------------

fn check_mask_domain(tau_s: f64) -> Result<()> {
    if !tau_s.is_finite() || tau_s <= MASK_TAU_MIN_S || tau_s > MASK_TAU_MAX_S {
        return Err(Error::domain(format!(
            "mask is defined for 0.1 s < tau <= 1000 s, got {tau_s}"
        )));
    }
    Ok(())
}

/// EEC MTIE limit in ns at observation interval `tau_s`.
pub fn mtie_mask_g8262(tau_s: f64) -> Result<f64> {
    check_mask_domain(tau_s)?;
    Ok(if tau_s <= 1.0 {
        40.0
    } else if tau_s <= 100.0 {
        40.0 * tau_s.powf(0.1)
    } else {
        25.25 * tau_s.powf(0.2)
    })
}

/// EEC TDEV limit in ns at observation interval `tau_s`.
pub fn tdev_mask_g8262(tau_s: f64) -> Result<f64> {
    check_mask_domain(tau_s)?;
    Ok(if tau_s <= 25.0 {
        3.2
    } else if tau_s <= 100.0 {
        0.64 * tau_s.sqrt()
    } else {
        6.4
    })
}

// ---------------------------------------------------------------------------
// Time-error records
// ---------------------------------------------------------------------------

/// A uniformly sampled time-error record, values in ns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TieSeries {
    sample_interval_s: f64,
    samples_ns: Vec<f64>,
    prefiltered: bool,
}

impl TieSeries {
    /// An unfiltered record: at least 2 samples at a positive interval.
    pub fn new(sample_interval_s: f64, samples_ns: Vec<f64>) -> Result<Self> {
        if !sample_interval_s.is_finite() || sample_interval_s <= 0.0 {
            return Err(Error::invalid(format!(
                "sample interval must be > 0, got {sample_interval_s}"
            )));
        }
        if samples_ns.len() < 2 {
            return Err(Error::invalid("time-error record needs at least 2 samples"));
        }
        if samples_ns.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("time-error samples must be finite"));
        }
        Ok(Self { sample_interval_s, samples_ns, prefiltered: false })
    }

    /// Mark the record as measurement-filtered without running the filter.
    /// For analytic test vectors and data filtered upstream.
    pub fn assume_prefiltered(mut self) -> Self {
        self.prefiltered = true;
        self
    }

    pub fn sample_interval_s(&self) -> f64 {
        self.sample_interval_s
    }

    pub fn samples_ns(&self) -> &[f64] {
        &self.samples_ns
    }

    pub fn is_prefiltered(&self) -> bool {
        self.prefiltered
    }

    /// Record span from first to last sample, in seconds.
    pub fn span_s(&self) -> f64 {
        (self.samples_ns.len() - 1) as f64 * self.sample_interval_s
    }

    /// Parse from CSV text with header `t_seconds,tie_ns`. Timestamps must be
    /// uniform within 1e-6 s.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader =
            csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers =
            reader.headers().map_err(|e| Error::config(format!("time-error CSV: {e}")))?;
        if headers.iter().collect::<Vec<_>>() != ["t_seconds", "tie_ns"] {
            return Err(Error::config("time-error CSV header must be t_seconds,tie_ns"));
        }
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (i, row) in reader.records().enumerate() {
            let row = row.map_err(|e| Error::config(format!("time-error CSV row {}: {e}", i + 2)))?;
            let parse = |idx: usize, name: &str| -> Result<f64> {
                row.get(idx)
                    .unwrap_or("")
                    .parse()
                    .map_err(|_| Error::config(format!("time-error CSV row {}: bad {name}", i + 2)))
            };
            times.push(parse(0, "t_seconds")?);
            values.push(parse(1, "tie_ns")?);
        }
        if times.len() < 2 {
            return Err(Error::invalid("time-error record needs at least 2 samples"));
        }
        // Infer the interval from the whole span so per-row rounding in the
        // file does not accumulate into the uniformity check.
        let interval = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
        if interval <= 0.0 {
            return Err(Error::invalid("timestamps must be strictly increasing"));
        }
        for (i, t) in times.iter().enumerate() {
            let expected = times[0] + i as f64 * interval;
            if (t - expected).abs() > 1e-6 {
                return Err(Error::invalid(format!(
                    "non-uniform timestamp at row {}: {} vs expected {}",
                    i + 2,
                    t,
                    expected
                )));
            }
        }
        Self::new(interval, values)
    }
}

// ---------------------------------------------------------------------------
// Measurement filter
// ---------------------------------------------------------------------------

/// Apply the equivalent 10 Hz first-order low-pass measurement filter.
///
/// The analog prototype `H(s) = 1/(1 + s/wc)` is discretised with the
/// bilinear transform at the record's sampling rate, run causally from zero
/// initial state. Length is preserved and the output is marked prefiltered.
pub fn lowpass_10hz(series: &TieSeries) -> Result<TieSeries> {
    if series.prefiltered {
        return Err(Error::invalid("record is already filtered"));
    }
    let wc = 2.0 * std::f64::consts::PI * 10.0;
    let t = series.sample_interval_s;
    let alpha = (wc * t / 2.0).tan();
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::invalid(format!(
            "sampling interval {t} s is too coarse for a 10 Hz filter"
        )));
    }
    let b = alpha / (1.0 + alpha);
    let a1 = (1.0 - alpha) / (1.0 + alpha);
    let mut out = Vec::with_capacity(series.samples_ns.len());
    let mut y_prev = 0.0;
    let mut x_prev = 0.0;
    for &x in &series.samples_ns {
        let y = b * (x + x_prev) + a1 * y_prev;
        out.push(y);
        x_prev = x;
        y_prev = y;
    }
    Ok(TieSeries { sample_interval_s: t, samples_ns: out, prefiltered: true })
}

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

/// Why a requested observation interval produced no estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TauIssue {
    /// The record is shorter than the estimator requires at this tau.
    InsufficientRecord,
    /// Tau is below one sample interval.
    BelowSampleInterval,
}

/// Estimate at one observation interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauEstimate {
    pub tau_s: f64,
    pub value_ns: Option<f64>,
    pub issue: Option<TauIssue>,
}

fn require_filtered(series: &TieSeries) -> Result<()> {
    if !series.prefiltered {
        return Err(Error::invalid(
            "record must pass the 10 Hz measurement filter first (or be marked prefiltered)",
        ));
    }
    Ok(())
}

/// MTIE at each requested tau: the maximum peak-to-peak time error within
/// any contiguous window of `floor(tau/tau0)` sample intervals.
///
/// Per-tau failures (window longer than the record, tau below the sampling
/// interval) are reported in the output rows, not as a call failure.
pub fn compute_mtie(series: &TieSeries, taus_s: &[f64]) -> Result<Vec<TauEstimate>> {
    require_filtered(series)?;
    let tau0 = series.sample_interval_s;
    let n_samples = series.samples_ns.len();
    let mut out = Vec::with_capacity(taus_s.len());
    for &tau in taus_s {
        if !tau.is_finite() || tau < tau0 {
            out.push(TauEstimate {
                tau_s: tau,
                value_ns: None,
                issue: Some(TauIssue::BelowSampleInterval),
            });
            continue;
        }
        let intervals = (tau / tau0).floor() as usize;
        if intervals + 1 > n_samples {
            out.push(TauEstimate {
                tau_s: tau,
                value_ns: None,
                issue: Some(TauIssue::InsufficientRecord),
            });
            continue;
        }
        out.push(TauEstimate {
            tau_s: tau,
            value_ns: Some(window_peak_to_peak(&series.samples_ns, intervals + 1)),
            issue: None,
        });
    }
    Ok(out)
}

/// Largest (max - min) over all windows of `width` samples, via monotonic
/// deques in O(N).
fn window_peak_to_peak(samples: &[f64], width: usize) -> f64 {
    use std::collections::VecDeque;
    let mut max_q: VecDeque<usize> = VecDeque::new();
    let mut min_q: VecDeque<usize> = VecDeque::new();
    let mut best = 0.0f64;
    for i in 0..samples.len() {
        while let Some(&b) = max_q.back() {
            if samples[b] <= samples[i] {
                max_q.pop_back();
            } else {
                break;
            }
        }
        max_q.push_back(i);
        while let Some(&b) = min_q.back() {
            if samples[b] >= samples[i] {
                min_q.pop_back();
            } else {
                break;
            }
        }
        min_q.push_back(i);
        if i + 1 >= width {
            let lo = i + 1 - width;
            while *max_q.front().unwrap() < lo {
                max_q.pop_front();
            }
            while *min_q.front().unwrap() < lo {
                min_q.pop_front();
            }
            let range = samples[*max_q.front().unwrap()] - samples[*min_q.front().unwrap()];
            best = best.max(range);
        }
    }
    best
}

/// TDEV at each requested tau, by the second-difference estimator. A record
/// must cover at least twelve integration periods (`N >= 12 n` samples) for
/// the tau to be admissible; shorter records yield an insufficient-record
/// row, never a silent estimate.
pub fn compute_tdev(series: &TieSeries, taus_s: &[f64]) -> Result<Vec<TauEstimate>> {
    require_filtered(series)?;
    let tau0 = series.sample_interval_s;
    let n_samples = series.samples_ns.len();
    let mut out = Vec::with_capacity(taus_s.len());
    for &tau in taus_s {
        if !tau.is_finite() || tau < tau0 {
            out.push(TauEstimate {
                tau_s: tau,
                value_ns: None,
                issue: Some(TauIssue::BelowSampleInterval),
            });
            continue;
        }
        let n = (tau / tau0).floor() as usize;
        if n_samples < 12 * n {
            out.push(TauEstimate {
                tau_s: tau,
                value_ns: None,
                issue: Some(TauIssue::InsufficientRecord),
            });
            continue;
        }
        out.push(TauEstimate { tau_s: tau, value_ns: Some(tdev_at(&series.samples_ns, n)), issue: None });
    }
    Ok(out)
}

/// TDEV at integration length `n` samples. Maintains the inner sum of second
/// differences incrementally, O(N) per tau.
fn tdev_at(x: &[f64], n: usize) -> f64 {
    let n_samples = x.len();
    let buckets = n_samples - 3 * n + 1;
    let second_diff = |i: usize| x[i + 2 * n] - 2.0 * x[i + n] + x[i];
    let mut inner: f64 = (0..n).map(second_diff).sum();
    let mut acc = inner * inner;
    for j in 1..buckets {
        inner += second_diff(j + n - 1) - second_diff(j - 1);
        acc += inner * inner;
    }
    (acc / (6.0 * (n * n) as f64 * buckets as f64)).sqrt()
}

// ---------------------------------------------------------------------------
// Compliance
// ---------------------------------------------------------------------------

/// Which limit mask to check a record against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MaskKind {
    Mtie,
    Tdev,
}

impl MaskKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mtie" => Ok(MaskKind::Mtie),
            "tdev" => Ok(MaskKind::Tdev),
            other => Err(Error::invalid(format!("metric must be mtie or tdev, got '{other}'"))),
        }
    }
}

/// One compliance row: estimate vs limit at one observation interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaskRow {
    pub tau_s: f64,
    pub measured_ns: Option<f64>,
    pub limit_ns: f64,
    pub pass: bool,
    pub issue: Option<TauIssue>,
}

/// Overall verdict of a compliance check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MaskVerdict {
    Pass,
    Fail,
    /// The record cannot support any observation interval in the mask
    /// domain.
    InsufficientRecord,
}

/// Compliance report over the evaluation grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaskReport {
    pub kind: MaskKind,
    pub rows: Vec<MaskRow>,
    pub verdict: MaskVerdict,
}

impl MaskReport {
    pub fn pass(&self) -> bool {
        self.verdict == MaskVerdict::Pass
    }
}

/// Evaluate the estimator on a logarithmic grid (10 points per decade over
/// the mask domain, snapped to whole sample intervals and intersected with
/// the record's admissible range) and compare each point with the mask.
pub fn check_compliance(series: &TieSeries, kind: MaskKind) -> Result<MaskReport> {
    require_filtered(series)?;
    let tau0 = series.sample_interval_s;
    let n_samples = series.samples_ns.len();

    // 10^(k/10) for k = -9..=30 covers (0.1, 1000]; snap each point down to
    // a whole number of sample intervals and keep the admissible ones.
    let mut lengths: Vec<usize> = Vec::new();
    for k in -9i32..=30 {
        let tau = 10f64.powf(k as f64 / 10.0);
        let n = (tau / tau0).floor() as usize;
        if n < 1 {
            continue;
        }
        let tau_eff = n as f64 * tau0;
        if tau_eff <= MASK_TAU_MIN_S || tau_eff > MASK_TAU_MAX_S {
            continue;
        }
        let admissible = match kind {
            MaskKind::Mtie => n < n_samples,
            MaskKind::Tdev => 12 * n <= n_samples,
        };
        if admissible && lengths.last() != Some(&n) {
            lengths.push(n);
        }
    }

    if lengths.is_empty() {
        return Ok(MaskReport { kind, rows: Vec::new(), verdict: MaskVerdict::InsufficientRecord });
    }

    let taus: Vec<f64> = lengths.iter().map(|&n| n as f64 * tau0).collect();
    let estimates = match kind {
        MaskKind::Mtie => compute_mtie(series, &taus)?,
        MaskKind::Tdev => compute_tdev(series, &taus)?,
    };
    let mut rows = Vec::with_capacity(estimates.len());
    let mut all_pass = true;
    for est in estimates {
        let limit_ns = match kind {
            MaskKind::Mtie => mtie_mask_g8262(est.tau_s)?,
            MaskKind::Tdev => tdev_mask_g8262(est.tau_s)?,
        };
        let pass = match est.value_ns {
            Some(v) => v <= limit_ns,
            None => false,
        };
        all_pass &= pass;
        rows.push(MaskRow { tau_s: est.tau_s, measured_ns: est.value_ns, limit_ns, pass, issue: est.issue });
    }
    let verdict = if all_pass { MaskVerdict::Pass } else { MaskVerdict::Fail };
    Ok(MaskReport { kind, rows, verdict })
}

// ---------------------------------------------------------------------------
// Scalar checks
// ---------------------------------------------------------------------------

/// A measured magnitude against a symmetric bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarCheck {
    pub measured: f64,
    pub limit: f64,
    pub pass: bool,
}

/// EEC output frequency accuracy: pass iff |offset| <= 4.6 ppm.
pub fn check_frequency_accuracy(offset_ppm: f64) -> Result<ScalarCheck> {
    if !offset_ppm.is_finite() {
        return Err(Error::invalid("frequency offset must be finite"));
    }
    Ok(ScalarCheck {
        measured: offset_ppm,
        limit: FREQUENCY_ACCURACY_LIMIT_PPM,
        pass: offset_ppm.abs() <= FREQUENCY_ACCURACY_LIMIT_PPM,
    })
}

/// Transparent-clock correction-field accuracy: pass iff |error| <= 80 ns.
pub fn check_cf_accuracy(cf_error_ns: f64) -> Result<ScalarCheck> {
    if !cf_error_ns.is_finite() {
        return Err(Error::invalid("correction-field error must be finite"));
    }
    Ok(ScalarCheck {
        measured: cf_error_ns,
        limit: CF_ACCURACY_LIMIT_NS,
        pass: cf_error_ns.abs() <= CF_ACCURACY_LIMIT_NS,
    })
}

// ===========================================================================
// Tests
// ===========================================================================
