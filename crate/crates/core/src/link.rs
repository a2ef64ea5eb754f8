//! Per-pair latency and data-rate budgets for PtMP hub/terminal links, with
//! compliance checks against the backhaul targets (one-way latency about
//! 1 ms; aggregate rate about 2.5 Gbit/s downstream / 2.0 Gbit/s upstream).
//!
//! Latency per pair is the sum of hub processing, air transmission and
//! terminal processing; the achievable rate per pair is the minimum of hub
//! processor, air link and terminal processor rates. The "about" targets are
//! read as hard thresholds in the favorable direction (<= for latency, >=
//! for rate); the signed margin is reported so callers can apply softer
//! policies.

use serde::Serialize;

use crate::error::{Error, Result};

/// One-way latency target in seconds.
pub const LATENCY_TARGET_S: f64 = 1e-3;
/// Downstream aggregate rate target in bit/s.
pub const RATE_TARGET_DS_BPS: f64 = 2.5e9;
/// Upstream aggregate rate target in bit/s.
pub const RATE_TARGET_US_BPS: f64 = 2.0e9;
/// 3GPP release-12 wireless backhaul one-way latency band, in seconds.
pub const REL12_LATENCY_BAND_S: (f64, f64) = (5e-3, 35e-3);

/// Speed of light in m/s, for the idealized air-time helper.
const C_M_S: f64 = 299_792_458.0;

/// Transfer direction of a budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Downstream,
    Upstream,
}

// ---------------------------------------------------------------------------
// Budgets
// ---------------------------------------------------------------------------

/// Latency components of one hub/terminal pair, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatencyBudget {
    pub t_proc_hub_s: f64,
    pub t_air_s: f64,
    pub t_proc_terminal_s: f64,
    pub direction: Direction,
}

impl LatencyBudget {
    pub fn new(
        t_proc_hub_s: f64,
        t_air_s: f64,
        t_proc_terminal_s: f64,
        direction: Direction,
    ) -> Result<Self> {
        for (name, v) in [
            ("hub processing time", t_proc_hub_s),
            ("air time", t_air_s),
            ("terminal processing time", t_proc_terminal_s),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self { t_proc_hub_s, t_air_s, t_proc_terminal_s, direction })
    }
}

/// Rate components of one hub/terminal pair, in bit/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateBudget {
    pub r_proc_hub_bps: f64,
    pub r_air_bps: f64,
    pub r_proc_terminal_bps: f64,
    pub direction: Direction,
}

impl RateBudget {
    pub fn new(
        r_proc_hub_bps: f64,
        r_air_bps: f64,
        r_proc_terminal_bps: f64,
        direction: Direction,
    ) -> Result<Self> {
        for (name, v) in [
            ("hub processor rate", r_proc_hub_bps),
            ("air link rate", r_air_bps),
            ("terminal processor rate", r_proc_terminal_bps),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(Self { r_proc_hub_bps, r_air_bps, r_proc_terminal_bps, direction })
    }
}

// ---------------------------------------------------------------------------
// Budget evaluation
// ---------------------------------------------------------------------------

/// One-way pair latency: the sum of the three components. Both directions
/// share the same sum shape; the direction only labels the result.
pub fn pair_latency(b: &LatencyBudget) -> f64 {
    b.t_proc_hub_s + b.t_air_s + b.t_proc_terminal_s
}

/// Achievable pair rate: the minimum of the three components.
pub fn pair_rate(b: &RateBudget) -> f64 {
    b.r_proc_hub_bps.min(b.r_air_bps).min(b.r_proc_terminal_bps)
}

/// Aggregate cluster rate: the hub processor is the shared bottleneck while
/// air/terminal limits are per-pair, so the aggregate is
/// `min(hub_rate, sum over pairs of min(r_air, r_proc_terminal))`.
pub fn aggregate_cluster_rate(pairs: &[RateBudget], hub_rate_bps: f64) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::invalid("aggregate rate needs at least one pair"));
    }
    if !hub_rate_bps.is_finite() || hub_rate_bps <= 0.0 {
        return Err(Error::invalid(format!("hub rate must be > 0, got {hub_rate_bps}")));
    }
    let per_pair_sum: f64 =
        pairs.iter().map(|p| p.r_air_bps.min(p.r_proc_terminal_bps)).sum();
    Ok(hub_rate_bps.min(per_pair_sum))
}

/// Idealized air time for a hub-terminal distance: `d / c`. Real systems add
/// modulation and framing delay on top; this helper covers only propagation.
pub fn air_latency_from_distance_km(distance_km: f64) -> Result<f64> {
    if !distance_km.is_finite() || distance_km < 0.0 {
        return Err(Error::invalid(format!("distance must be >= 0, got {distance_km}")));
    }
    Ok(distance_km * 1000.0 / C_M_S)
}

// ---------------------------------------------------------------------------
// Target checks
// ---------------------------------------------------------------------------

/// Outcome of one measured-versus-target comparison. `margin` is signed so
/// that `margin >= 0` exactly when the check passes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetVerdict {
    pub measured: f64,
    pub target: f64,
    pub pass: bool,
    pub margin: f64,
    pub note: Option<String>,
}

/// Check a one-way latency against the ~1 ms target (inclusive).
///
/// A failing latency that still falls inside the 3GPP release-12 backhaul
/// band (5-35 ms one way) is annotated as such.
pub fn check_latency_target(one_way_s: f64) -> Result<TargetVerdict> {
    if !one_way_s.is_finite() || one_way_s < 0.0 {
        return Err(Error::invalid(format!("latency must be finite and >= 0, got {one_way_s}")));
    }
    let pass = one_way_s <= LATENCY_TARGET_S;
    let note = if !pass
        && one_way_s >= REL12_LATENCY_BAND_S.0
        && one_way_s <= REL12_LATENCY_BAND_S.1
    {
        Some("misses the 1 ms target but sits inside the 3GPP rel-12 band (5-35 ms)".to_string())
    } else {
        None
    };
    Ok(TargetVerdict {
        measured: one_way_s,
        target: LATENCY_TARGET_S,
        pass,
        margin: LATENCY_TARGET_S - one_way_s,
        note,
    })
}

/// Combined downstream/upstream rate verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateVerdict {
    pub downstream: TargetVerdict,
    pub upstream: TargetVerdict,
    pub pass: bool,
}

/// Check aggregate rates against the 2.5 Gbit/s (DS) and 2.0 Gbit/s (US)
/// targets, both inclusive.
pub fn check_rate_target(ds_bps: f64, us_bps: f64) -> Result<RateVerdict> {
    for (name, v) in [("downstream rate", ds_bps), ("upstream rate", us_bps)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::invalid(format!("{name} must be finite and >= 0, got {v}")));
        }
    }
    let downstream = TargetVerdict {
        measured: ds_bps,
        target: RATE_TARGET_DS_BPS,
        pass: ds_bps >= RATE_TARGET_DS_BPS,
        margin: ds_bps - RATE_TARGET_DS_BPS,
        note: None,
    };
    let upstream = TargetVerdict {
        measured: us_bps,
        target: RATE_TARGET_US_BPS,
        pass: us_bps >= RATE_TARGET_US_BPS,
        margin: us_bps - RATE_TARGET_US_BPS,
        note: None,
    };
    let pass = downstream.pass && upstream.pass;
    Ok(RateVerdict { downstream, upstream, pass })
}

// ===========================================================================
// Tests
// ===========================================================================
