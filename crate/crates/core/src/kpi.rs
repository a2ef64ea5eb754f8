//! KPI metric formulas and per-scenario target compliance.
//!
//! The metric functions are direct ratio definitions (throughput per user,
//! reliability rate, packet loss, energy/spectrum efficiency, connection
//! density, deployment economics). [`check_targets`] compares supplied
//! measurements against the bundled per-scenario target registry and emits a
//! row-per-KPI report.
//!
//! Registry comparator semantics: `min` passes at `measured >= threshold`,
//! `max` at `measured <= threshold`, `lt` at `measured < threshold`
//! (strict). `info` rows carry notes only and are never evaluated. Rows
//! without a measurement are reported as not evaluated — never as a pass —
//! and do not gate the overall verdict; the report passes when every row
//! that was evaluated passes and at least one was.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Metric formulas
// ---------------------------------------------------------------------------

/// Bits successfully received by one user divided by the run time.
pub fn per_user_throughput(bits: u64, runtime_s: f64) -> Result<f64> {
    if !runtime_s.is_finite() || runtime_s <= 0.0 {
        return Err(Error::invalid(format!("runtime must be > 0, got {runtime_s}")));
    }
    Ok(bits as f64 / runtime_s)
}

/// Total delivered bits divided by (cells x duration).
pub fn avg_cell_throughput(total_bits: u64, n_cells: u32, duration_s: f64) -> Result<f64> {
    if n_cells == 0 {
        return Err(Error::invalid("cell count must be >= 1"));
    }
    if !duration_s.is_finite() || duration_s <= 0.0 {
        return Err(Error::invalid(format!("duration must be > 0, got {duration_s}")));
    }
    Ok(total_bits as f64 / (n_cells as f64 * duration_s))
}

/// Fifth percentile of per-user throughputs, with linear interpolation at
/// rank `0.05 * (n - 1)` over the sorted values.
pub fn cell_edge_throughput(per_user_bps: &[f64]) -> Result<f64> {
    if per_user_bps.is_empty() {
        return Err(Error::invalid("per-user throughput list must not be empty"));
    }
    for v in per_user_bps {
        if !v.is_finite() || *v < 0.0 {
            return Err(Error::invalid(format!("throughput must be finite and >= 0, got {v}")));
        }
    }
    let mut sorted = per_user_bps.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let rank = 0.05 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

/// Packets delivered within their deadline divided by packets sent.
pub fn reliability_rate(delivered_in_deadline: u64, sent: u64) -> Result<f64> {
    if sent == 0 {
        return Err(Error::invalid("sent packet count must be >= 1"));
    }
    if delivered_in_deadline > sent {
        return Err(Error::invalid(format!(
            "delivered-in-deadline ({delivered_in_deadline}) exceeds sent ({sent})"
        )));
    }
    Ok(delivered_in_deadline as f64 / sent as f64)
}

/// Fraction of sent packets that were lost.
pub fn packet_loss_ratio(delivered: u64, sent: u64) -> Result<f64> {
    if sent == 0 {
        return Err(Error::invalid("sent packet count must be >= 1"));
    }
    if delivered > sent {
        return Err(Error::invalid(format!("delivered ({delivered}) exceeds sent ({sent})")));
    }
    Ok((sent - delivered) as f64 / sent as f64)
}

/// Bits transmitted per Joule of energy.
pub fn energy_efficiency(bits: u64, joules: f64) -> Result<f64> {
    if !joules.is_finite() || joules <= 0.0 {
        return Err(Error::invalid(format!("energy must be > 0, got {joules}")));
    }
    Ok(bits as f64 / joules)
}

/// Joules spent per Mbit/s of sustained rate — the form the target registry
/// gates (`max 50 joule/Mbps`).
pub fn energy_per_mbps(joules: f64, sustained_bps: f64) -> Result<f64> {
    if !joules.is_finite() || joules < 0.0 {
        return Err(Error::invalid(format!("energy must be >= 0, got {joules}")));
    }
    if !sustained_bps.is_finite() || sustained_bps <= 0.0 {
        return Err(Error::invalid(format!("sustained rate must be > 0, got {sustained_bps}")));
    }
    Ok(joules / (sustained_bps / 1e6))
}

/// Peak data rate normalised by bandwidth, in bit/s/Hz.
pub fn spectrum_efficiency(peak_rate_bps: f64, bandwidth_hz: f64) -> Result<f64> {
    if !bandwidth_hz.is_finite() || bandwidth_hz <= 0.0 {
        return Err(Error::invalid(format!("bandwidth must be > 0, got {bandwidth_hz}")));
    }
    if !peak_rate_bps.is_finite() || peak_rate_bps < 0.0 {
        return Err(Error::invalid(format!("peak rate must be >= 0, got {peak_rate_bps}")));
    }
    Ok(peak_rate_bps / bandwidth_hz)
}

/// Simultaneously communicating devices per square kilometre.
pub fn connection_density(devices: u64, area_km2: f64) -> Result<f64> {
    if !area_km2.is_finite() || area_km2 <= 0.0 {
        return Err(Error::invalid(format!("area must be > 0, got {area_km2}")));
    }
    Ok(devices as f64 / area_km2)
}

/// Achieved system throughput per unit of deployment cost (CapEx + OpEx).
pub fn deployment_efficiency(throughput_bps: f64, capex_plus_opex: f64) -> Result<f64> {
    if !capex_plus_opex.is_finite() || capex_plus_opex <= 0.0 {
        return Err(Error::invalid(format!("cost must be > 0, got {capex_plus_opex}")));
    }
    if !throughput_bps.is_finite() || throughput_bps < 0.0 {
        return Err(Error::invalid(format!("throughput must be >= 0, got {throughput_bps}")));
    }
    Ok(throughput_bps / capex_plus_opex)
}

/// Revenue minus cost.
pub fn profit(revenue: f64, cost: f64) -> f64 {
    revenue - cost
}

/// Revenue-to-cost ratio.
pub fn rcr(revenue: f64, cost: f64) -> Result<f64> {
    if !cost.is_finite() || cost <= 0.0 {
        return Err(Error::invalid(format!("cost must be > 0, got {cost}")));
    }
    Ok(revenue / cost)
}

/// Used substrate resources over total available resources, in `[0, 1]`.
pub fn network_utilisation(used: f64, total: f64) -> Result<f64> {
    if !total.is_finite() || total <= 0.0 {
        return Err(Error::invalid(format!("total resources must be > 0, got {total}")));
    }
    if !used.is_finite() || used < 0.0 || used > total {
        return Err(Error::invalid(format!("used must satisfy 0 <= used <= total, got {used}")));
    }
    Ok(used / total)
}

// ---------------------------------------------------------------------------
// Trace records
// ---------------------------------------------------------------------------

/// One measurement row: per-user delivery counters over an active period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub user_id: String,
    pub cell_id: String,
    pub bits_delivered: u64,
    pub sent_packets: u64,
    pub delivered_packets: u64,
    pub delivered_in_deadline: u64,
    pub active_time_s: f64,
    pub energy_j: Option<f64>,
}

impl TraceRecord {
    pub fn validate(&self) -> Result<()> {
        if self.delivered_packets > self.sent_packets {
            return Err(Error::invalid(format!(
                "user {}: delivered ({}) exceeds sent ({})",
                self.user_id, self.delivered_packets, self.sent_packets
            )));
        }
        if self.delivered_in_deadline > self.delivered_packets {
            return Err(Error::invalid(format!(
                "user {}: delivered-in-deadline ({}) exceeds delivered ({})",
                self.user_id, self.delivered_in_deadline, self.delivered_packets
            )));
        }
        if !self.active_time_s.is_finite() || self.active_time_s < 0.0 {
            return Err(Error::invalid(format!(
                "user {}: active time must be >= 0",
                self.user_id
            )));
        }
        if let Some(e) = self.energy_j {
            if !e.is_finite() || e < 0.0 {
                return Err(Error::invalid(format!("user {}: energy must be >= 0", self.user_id)));
            }
        }
        Ok(())
    }
}

/// Parse trace records from CSV text. Header:
/// `user_id,cell_id,bits_delivered,sent_packets,delivered_packets,delivered_in_deadline,active_time_s,energy_j`
/// (energy may be left empty).
pub fn trace_from_csv(text: &str) -> Result<Vec<TraceRecord>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let expected = [
        "user_id",
        "cell_id",
        "bits_delivered",
        "sent_packets",
        "delivered_packets",
        "delivered_in_deadline",
        "active_time_s",
        "energy_j",
    ];
    let headers = reader.headers().map_err(|e| Error::config(format!("trace CSV: {e}")))?;
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::config(format!(
            "trace CSV header must be {}",
            expected.join(",")
        )));
    }
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::config(format!("trace CSV row {}: {e}", i + 2)))?;
        let field = |idx: usize| row.get(idx).unwrap_or("").to_string();
        let parse_u64 = |idx: usize, name: &str| -> Result<u64> {
            field(idx)
                .parse()
                .map_err(|_| Error::config(format!("trace CSV row {}: bad {name}", i + 2)))
        };
        let energy = match field(7).as_str() {
            "" => None,
            s => Some(
                s.parse::<f64>()
                    .map_err(|_| Error::config(format!("trace CSV row {}: bad energy_j", i + 2)))?,
            ),
        };
        let record = TraceRecord {
            user_id: field(0),
            cell_id: field(1),
            bits_delivered: parse_u64(2, "bits_delivered")?,
            sent_packets: parse_u64(3, "sent_packets")?,
            delivered_packets: parse_u64(4, "delivered_packets")?,
            delivered_in_deadline: parse_u64(5, "delivered_in_deadline")?,
            active_time_s: field(6)
                .parse()
                .map_err(|_| Error::config(format!("trace CSV row {}: bad active_time_s", i + 2)))?,
            energy_j: energy,
        };
        record.validate()?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::invalid("trace contains no records"));
    }
    Ok(records)
}

/// Aggregate metrics a trace can support, keyed by registry KPI name.
///
/// Trace duration is taken as the longest per-user active time; the cell
/// count as the number of distinct cell ids. Energy-based rows appear only
/// when every record carries an energy figure.
pub fn measurements_from_trace(records: &[TraceRecord]) -> Result<Vec<Measurement>> {
    if records.is_empty() {
        return Err(Error::invalid("trace contains no records"));
    }
    let sent: u64 = records.iter().map(|r| r.sent_packets).sum();
    let delivered: u64 = records.iter().map(|r| r.delivered_packets).sum();
    let in_deadline: u64 = records.iter().map(|r| r.delivered_in_deadline).sum();
    let total_bits: u64 = records.iter().map(|r| r.bits_delivered).sum();
    let duration = records.iter().map(|r| r.active_time_s).fold(0.0f64, f64::max);

    let mut out = Vec::new();
    if sent > 0 {
        out.push(Measurement::new("reliability_rate", reliability_rate(in_deadline, sent)?));
        out.push(Measurement::new("packet_loss_ratio", packet_loss_ratio(delivered, sent)?));
    }
    let per_user: Vec<f64> = records
        .iter()
        .filter(|r| r.active_time_s > 0.0)
        .map(|r| r.bits_delivered as f64 / r.active_time_s)
        .collect();
    if !per_user.is_empty() {
        out.push(Measurement::new("cell_edge_throughput", cell_edge_throughput(&per_user)?));
    }
    if records.iter().all(|r| r.energy_j.is_some()) && duration > 0.0 && total_bits > 0 {
        let joules: f64 = records.iter().filter_map(|r| r.energy_j).sum();
        let sustained = total_bits as f64 / duration;
        out.push(Measurement::new("energy_efficiency", energy_per_mbps(joules, sustained)?));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Target registry
// ---------------------------------------------------------------------------

/// The four target scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Scenario {
    Broadband,
    MassiveIot,
    UltraReliable,
    HighSpeed,
}

impl Scenario {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "broadband" => Ok(Scenario::Broadband),
            "massive_iot" => Ok(Scenario::MassiveIot),
            "ultra_reliable" => Ok(Scenario::UltraReliable),
            "high_speed" => Ok(Scenario::HighSpeed),
            other => Err(Error::UnknownId(format!("scenario '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Broadband => "broadband",
            Scenario::MassiveIot => "massive_iot",
            Scenario::UltraReliable => "ultra_reliable",
            Scenario::HighSpeed => "high_speed",
        }
    }
}

/// How a measured value is compared with a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparator {
    /// Pass at `measured >= threshold`.
    Min,
    /// Pass at `measured <= threshold`.
    Max,
    /// Pass at `measured < threshold` (strict).
    LessThan,
    /// Informational row; never evaluated.
    Info,
}

impl Comparator {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Comparator::Min),
            "max" => Ok(Comparator::Max),
            "lt" => Ok(Comparator::LessThan),
            "info" => Ok(Comparator::Info),
            other => Err(Error::config(format!("unknown comparator '{other}'"))),
        }
    }

    fn passes(&self, measured: f64, threshold: f64) -> bool {
        match self {
            Comparator::Min => measured >= threshold,
            Comparator::Max => measured <= threshold,
            Comparator::LessThan => measured < threshold,
            Comparator::Info => true,
        }
    }
}

/// One registry row: the target for one KPI in one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetRow {
    pub kpi: String,
    pub comparator: Comparator,
    pub threshold: Option<f64>,
    pub unit: String,
    pub note: String,
}

/// Per-scenario target rows loaded from the registry file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpiTargetSet {
    rows: BTreeMap<Scenario, Vec<TargetRow>>,
}

impl KpiTargetSet {
    /// Parse the registry from CSV text
    /// (`scenario,kpi,comparator,threshold,unit,note`).
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader =
            csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers =
            reader.headers().map_err(|e| Error::config(format!("target registry: {e}")))?;
        if headers.iter().collect::<Vec<_>>()
            != ["scenario", "kpi", "comparator", "threshold", "unit", "note"]
        {
            return Err(Error::config(
                "target registry header must be scenario,kpi,comparator,threshold,unit,note",
            ));
        }
        let mut rows: BTreeMap<Scenario, Vec<TargetRow>> = BTreeMap::new();
        for (i, row) in reader.records().enumerate() {
            let row = row.map_err(|e| Error::config(format!("target registry row {}: {e}", i + 2)))?;
            let get = |idx: usize| row.get(idx).unwrap_or("").to_string();
            let scenario = Scenario::parse(&get(0))
                .map_err(|e| Error::config(format!("target registry row {}: {e}", i + 2)))?;
            let comparator = Comparator::parse(&get(2))?;
            let threshold = match get(3).as_str() {
                "" => None,
                s => Some(s.parse::<f64>().map_err(|_| {
                    Error::config(format!("target registry row {}: bad threshold '{s}'", i + 2))
                })?),
            };
            if comparator != Comparator::Info && threshold.is_none() {
                return Err(Error::config(format!(
                    "target registry row {}: gated comparator needs a threshold",
                    i + 2
                )));
            }
            rows.entry(scenario).or_default().push(TargetRow {
                kpi: get(1),
                comparator,
                threshold,
                unit: get(4),
                note: get(5),
            });
        }
        let set = Self { rows };
        set.check_consistency()?;
        Ok(set)
    }

    /// Gated rows for the same KPI must agree on comparator and unit across
    /// scenarios (informational rows are free-form).
    fn check_consistency(&self) -> Result<()> {
        let mut seen: BTreeMap<&str, (Comparator, &str)> = BTreeMap::new();
        for rows in self.rows.values() {
            for row in rows {
                if row.comparator == Comparator::Info {
                    continue;
                }
                match seen.get(row.kpi.as_str()) {
                    None => {
                        seen.insert(&row.kpi, (row.comparator, &row.unit));
                    }
                    Some((cmp, unit)) => {
                        if *cmp != row.comparator || *unit != row.unit {
                            return Err(Error::config(format!(
                                "KPI '{}' has inconsistent comparator/unit across scenarios",
                                row.kpi
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn scenario_rows(&self, scenario: Scenario) -> Result<&[TargetRow]> {
        self.rows
            .get(&scenario)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::UnknownId(format!("scenario '{}'", scenario.name())))
    }
}

// ---------------------------------------------------------------------------
// Compliance report
// ---------------------------------------------------------------------------

/// A named measured value, keyed by registry KPI name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub kpi: String,
    pub value: f64,
}

impl Measurement {
    pub fn new(kpi: impl Into<String>, value: f64) -> Self {
        Self { kpi: kpi.into(), value }
    }
}

/// Verdict of a single report row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KpiStatus {
    Pass,
    Fail,
    NotEvaluated,
    Informational,
}

/// One row of the compliance report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpiRow {
    pub kpi: String,
    pub measured: Option<f64>,
    pub comparator: Comparator,
    pub threshold: Option<f64>,
    pub unit: String,
    pub status: KpiStatus,
    pub note: String,
}

/// Per-scenario compliance report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpiReport {
    pub scenario: Scenario,
    pub rows: Vec<KpiRow>,
    /// True when every evaluated row passed and at least one row was
    /// evaluated.
    pub pass: bool,
}

/// Compare measurements against the scenario's registry rows.
pub fn check_targets(
    targets: &KpiTargetSet,
    scenario: Scenario,
    measurements: &[Measurement],
) -> Result<KpiReport> {
    let registry_rows = targets.scenario_rows(scenario)?;
    let measured: BTreeMap<&str, f64> =
        measurements.iter().map(|m| (m.kpi.as_str(), m.value)).collect();
    let mut rows = Vec::with_capacity(registry_rows.len());
    let mut evaluated = 0usize;
    let mut failures = 0usize;
    for target in registry_rows {
        let value = measured.get(target.kpi.as_str()).copied();
        let status = match (target.comparator, value, target.threshold) {
            (Comparator::Info, _, _) => KpiStatus::Informational,
            (_, None, _) => KpiStatus::NotEvaluated,
            (cmp, Some(v), Some(t)) => {
                evaluated += 1;
                if cmp.passes(v, t) {
                    KpiStatus::Pass
                } else {
                    failures += 1;
                    KpiStatus::Fail
                }
            }
            (_, Some(_), None) => KpiStatus::NotEvaluated,
        };
        rows.push(KpiRow {
            kpi: target.kpi.clone(),
            measured: value,
            comparator: target.comparator,
            threshold: target.threshold,
            unit: target.unit.clone(),
            status,
            note: target.note.clone(),
        });
    }
    Ok(KpiReport { scenario, rows, pass: failures == 0 && evaluated > 0 })
}

// ===========================================================================
// Tests
// ===========================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use proptest::prelude::*;

    #[test]
    fn throughput_examples() {
        assert_eq!(per_user_throughput(1_000_000, 1.0).unwrap(), 1e6);
        assert_eq!(per_user_throughput(0, 10.0).unwrap(), 0.0);
        assert_eq!(per_user_throughput(3_000_000_000, 60.0).unwrap(), 50e6);
        assert!(per_user_throughput(1, 0.0).is_err());
    }

    #[test]
    fn cell_throughput_examples() {
        assert_eq!(avg_cell_throughput(1_000_000_000, 1, 1.0).unwrap(), 1e9);
        assert_eq!(avg_cell_throughput(1_000_000_000, 10, 10.0).unwrap(), 10e6);
        assert_eq!(avg_cell_throughput(0, 5, 1.0).unwrap(), 0.0);
        assert!(avg_cell_throughput(1, 0, 1.0).is_err());
    }

    #[test]
    fn cell_edge_examples() {
        assert_eq!(cell_edge_throughput(&[42.0]).unwrap(), 42.0);
        let ladder: Vec<f64> = (1..=100).map(|v| v as f64 * 1e6).collect();
        assert!((cell_edge_throughput(&ladder).unwrap() - 5.95e6).abs() < 1e-6);
        assert_eq!(cell_edge_throughput(&[7.0, 7.0, 7.0]).unwrap(), 7.0);
        assert!(cell_edge_throughput(&[]).is_err());
    }

    #[test]
    fn reliability_and_loss() {
        assert_eq!(reliability_rate(95, 100).unwrap(), 0.95);
        assert_eq!(reliability_rate(0, 10).unwrap(), 0.0);
        assert_eq!(reliability_rate(7, 8).unwrap(), 0.875);
        assert!(reliability_rate(1, 0).is_err());
        assert!(reliability_rate(9, 8).is_err());

        assert_eq!(packet_loss_ratio(100, 100).unwrap(), 0.0);
        assert_eq!(packet_loss_ratio(95, 100).unwrap(), 0.05);
        assert_eq!(packet_loss_ratio(0, 4).unwrap(), 1.0);
        assert!(packet_loss_ratio(1, 0).is_err());
    }

    #[test]
    fn efficiency_metrics() {
        assert_eq!(energy_efficiency(1_000_000, 1.0).unwrap(), 1e6);
        assert_eq!(energy_efficiency(0, 5.0).unwrap(), 0.0);
        assert!(energy_efficiency(1, 0.0).is_err());
        // 100 J spent while sustaining 2 Mbit/s -> 50 J per Mbit/s.
        assert_eq!(energy_per_mbps(100.0, 2e6).unwrap(), 50.0);

        assert_eq!(spectrum_efficiency(20e6, 10e6).unwrap(), 2.0);
        assert_eq!(spectrum_efficiency(0.0, 5.0).unwrap(), 0.0);
        assert!(spectrum_efficiency(1.0, 0.0).is_err());
    }

    #[test]
    fn density_and_economics() {
        assert_eq!(connection_density(200_000, 1.0).unwrap(), 200_000.0);
        assert_eq!(connection_density(0, 1.0).unwrap(), 0.0);
        assert_eq!(connection_density(500, 0.25).unwrap(), 2000.0);
        assert!(connection_density(1, 0.0).is_err());

        assert_eq!(deployment_efficiency(1e9, 1e6).unwrap(), 1000.0);
        assert_eq!(deployment_efficiency(0.0, 10.0).unwrap(), 0.0);
        assert_eq!(
            deployment_efficiency(2e9, 2e6).unwrap(),
            deployment_efficiency(1e9, 1e6).unwrap()
        );
        assert!(deployment_efficiency(1.0, 0.0).is_err());

        assert_eq!(profit(100.0, 100.0), 0.0);
        assert_eq!(profit(150.0, 100.0), 50.0);
        assert_eq!(profit(0.0, 100.0), -100.0);
        assert_eq!(rcr(100.0, 100.0).unwrap(), 1.0);
        assert_eq!(rcr(150.0, 100.0).unwrap(), 1.5);
        assert_eq!(rcr(0.0, 100.0).unwrap(), 0.0);
        assert!(rcr(1.0, 0.0).is_err());

        assert_eq!(network_utilisation(0.0, 4.0).unwrap(), 0.0);
        assert_eq!(network_utilisation(4.0, 4.0).unwrap(), 1.0);
        assert_eq!(network_utilisation(3.0, 4.0).unwrap(), 0.75);
        assert!(network_utilisation(5.0, 4.0).is_err());
    }

    #[test]
    fn registry_loads_and_checks_boundaries() {
        let targets = data::DataSource::bundled().kpi_targets().unwrap();
        let report = check_targets(
            &targets,
            Scenario::Broadband,
            &[Measurement::new("reliability_rate", 0.96)],
        )
        .unwrap();
        assert!(report.pass);

        let report = check_targets(
            &targets,
            Scenario::Broadband,
            &[Measurement::new("packet_loss_ratio", 0.06)],
        )
        .unwrap();
        assert!(!report.pass);

        let report = check_targets(
            &targets,
            Scenario::MassiveIot,
            &[Measurement::new("connection_density", 200_000.0)],
        )
        .unwrap();
        assert!(report.pass);
    }

    #[test]
    fn unmeasured_rows_do_not_pass_or_gate() {
        let targets = data::DataSource::bundled().kpi_targets().unwrap();
        let report = check_targets(
            &targets,
            Scenario::Broadband,
            &[Measurement::new("reliability_rate", 0.99)],
        )
        .unwrap();
        let density = report.rows.iter().find(|r| r.kpi == "connection_density").unwrap();
        assert_eq!(density.status, KpiStatus::NotEvaluated);
        assert!(report.pass);
        // No measurements at all: nothing evaluated, so no pass either.
        let report = check_targets(&targets, Scenario::Broadband, &[]).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn informational_rows_never_gate() {
        let targets = data::DataSource::bundled().kpi_targets().unwrap();
        let report = check_targets(
            &targets,
            Scenario::MassiveIot,
            &[
                Measurement::new("connection_density", 250_000.0),
                // Info rows ignore measurements entirely.
                Measurement::new("urban_mobility", 0.0),
            ],
        )
        .unwrap();
        let mobility = report.rows.iter().find(|r| r.kpi == "urban_mobility").unwrap();
        assert_eq!(mobility.status, KpiStatus::Informational);
        assert!(report.pass);
    }

    #[test]
    fn strict_lt_comparator() {
        let targets = data::DataSource::bundled().kpi_targets().unwrap();
        let at_boundary = check_targets(
            &targets,
            Scenario::MassiveIot,
            &[Measurement::new("e2e_latency", 1.0)],
        )
        .unwrap();
        assert!(!at_boundary.pass);
        let below = check_targets(
            &targets,
            Scenario::MassiveIot,
            &[Measurement::new("e2e_latency", 0.999)],
        )
        .unwrap();
        assert!(below.pass);
    }

    #[test]
    fn registry_rejects_malformed_text() {
        assert!(KpiTargetSet::from_csv_str("bogus,header\n1,2\n").is_err());
        assert!(KpiTargetSet::from_csv_str(
            "scenario,kpi,comparator,threshold,unit,note\nbroadband,x,min,,u,\n"
        )
        .is_err());
        // Comparator disagreement across scenarios for the same KPI.
        assert!(KpiTargetSet::from_csv_str(
            "scenario,kpi,comparator,threshold,unit,note\n\
             broadband,x,min,1,u,\n\
             high_speed,x,max,1,u,\n"
        )
        .is_err());
    }

    #[test]
    fn trace_parsing_and_measurements() {
        let csv_text = "user_id,cell_id,bits_delivered,sent_packets,delivered_packets,delivered_in_deadline,active_time_s,energy_j\n\
                        u1,c1,1000000000,100,95,95,100.0,\n\
                        u2,c1,500000000,200,198,190,100.0,\n";
        let records = trace_from_csv(csv_text).unwrap();
        assert_eq!(records.len(), 2);
        let m = measurements_from_trace(&records).unwrap();
        let rel = m.iter().find(|x| x.kpi == "reliability_rate").unwrap();
        assert!((rel.value - 285.0 / 300.0).abs() < 1e-12);
        let plr = m.iter().find(|x| x.kpi == "packet_loss_ratio").unwrap();
        assert!((plr.value - 7.0 / 300.0).abs() < 1e-12);
        // Energy missing on some rows: no energy measurement emitted.
        assert!(m.iter().all(|x| x.kpi != "energy_efficiency"));
    }

    #[test]
    fn trace_rejects_inconsistent_counts() {
        let csv_text = "user_id,cell_id,bits_delivered,sent_packets,delivered_packets,delivered_in_deadline,active_time_s,energy_j\n\
                        u1,c1,10,100,101,90,1.0,\n";
        assert!(trace_from_csv(csv_text).is_err());
        let csv_text = "user_id,cell_id,bits_delivered,sent_packets,delivered_packets,delivered_in_deadline,active_time_s,energy_j\n\
                        u1,c1,10,100,99,100,1.0,\n";
        assert!(trace_from_csv(csv_text).is_err());
    }

    proptest! {
        #[test]
        fn loss_plus_reliability_bounded(
            sent in 1u64..10_000,
            delivered_frac in 0.0f64..=1.0,
            deadline_frac in 0.0f64..=1.0,
        ) {
            let delivered = (sent as f64 * delivered_frac) as u64;
            let in_deadline = (delivered as f64 * deadline_frac) as u64;
            let rel = reliability_rate(in_deadline, sent).unwrap();
            let loss = packet_loss_ratio(delivered, sent).unwrap();
            prop_assert!(rel + loss <= 1.0 + 1e-12);
            // Equality iff every delivered packet met its deadline.
            if in_deadline == delivered {
                prop_assert!((rel + loss - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn cell_edge_within_range(values in proptest::collection::vec(0.0f64..1e9, 1..50)) {
            let edge = cell_edge_throughput(&values).unwrap();
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = values.iter().cloned().fold(0.0f64, f64::max);
            prop_assert!(edge >= min - 1e-9 && edge <= max + 1e-9);
            let mut reversed = values.clone();
            reversed.reverse();
            prop_assert!((cell_edge_throughput(&reversed).unwrap() - edge).abs() < 1e-9);
        }

        #[test]
        fn ratio_metrics_scale_invariant(bits in 1u64..1_000_000, t in 0.1f64..1e4, c in 2u32..10) {
            let base = per_user_throughput(bits, t).unwrap();
            let scaled = per_user_throughput(bits * c as u64, t * c as f64).unwrap();
            prop_assert!((base - scaled).abs() / base < 1e-12);
        }

        #[test]
        fn improving_a_measurement_never_breaks_pass(
            rel in 0.95f64..1.0,
            bump in 0.0f64..0.05,
        ) {
            let targets = data::DataSource::bundled().kpi_targets().unwrap();
            let before = check_targets(
                &targets,
                Scenario::Broadband,
                &[Measurement::new("reliability_rate", rel)],
            ).unwrap();
            let after = check_targets(
                &targets,
                Scenario::Broadband,
                &[Measurement::new("reliability_rate", (rel + bump).min(1.0))],
            ).unwrap();
            prop_assert!(!(before.pass && !after.pass));
        }
    }
}
