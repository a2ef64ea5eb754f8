//! Functional-split advisor: which base-station splits (1 RRC .. 6 PHY) a
//! given fronthaul transport can support.
//!
//! Split requirements come from the bundled six-row table (bandwidth floor
//! and round-trip latency ceiling per split; splits 4 and 5 carry ranges).
//! Transport profiles are either supplied directly or looked up in the
//! bundled technology catalog. Because the requirement table is monotone
//! (bandwidth demand never decreases with the split id, latency tolerance
//! never increases), the feasible set is always a prefix `{1..k}`.
//!
//! Requirement latencies are treated as round-trip budgets and compared
//! against catalog RTT figures directly. Ranged requirements are resolved by
//! mode: `Optimistic` takes the lenient end (bandwidth floor, latency
//! ceiling), `Strict` the demanding end. All comparisons are inclusive; the
//! table's literal "<6ms" spelling is preserved in the display column of the
//! data file.

use serde::Serialize;

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Requirement table
// ---------------------------------------------------------------------------

/// Fronthaul requirements of one split.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitRequirement {
    pub split_id: u8,
    pub name: String,
    pub bw_min_bps: f64,
    pub bw_max_bps: f64,
    pub latency_min_s: f64,
    pub latency_max_s: f64,
    /// The table's literal latency spelling (for display only).
    pub latency_display: String,
}

/// The validated requirement table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitTable {
    rows: Vec<SplitRequirement>,
}

impl SplitTable {
    /// Parse from CSV
    /// (`split_id,name,bw_min_bps,bw_max_bps,latency_min_s,latency_max_s,latency_display`).
    ///
    /// Enforces ids 1..n in order, `bw_min <= bw_max`,
    /// `latency_min <= latency_max`, non-decreasing `bw_min` and
    /// non-increasing `latency_max` across rows — the monotonicity that makes
    /// feasible sets prefixes.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader =
            csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| Error::config(format!("split table: {e}")))?;
        let expected = [
            "split_id",
            "name",
            "bw_min_bps",
            "bw_max_bps",
            "latency_min_s",
            "latency_max_s",
            "latency_display",
        ];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::config(format!(
                "split table header must be {}",
                expected.join(",")
            )));
        }
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::config(format!("split table row {}: {e}", i + 2)))?;
            let get = |idx: usize| record.get(idx).unwrap_or("").to_string();
            let parse = |idx: usize, name: &str| -> Result<f64> {
                get(idx).parse().map_err(|_| {
                    Error::config(format!("split table row {}: bad {name} '{}'", i + 2, get(idx)))
                })
            };
            let row = SplitRequirement {
                split_id: get(0)
                    .parse()
                    .map_err(|_| Error::config(format!("split table row {}: bad id", i + 2)))?,
                name: get(1),
                bw_min_bps: parse(2, "bw_min_bps")?,
                bw_max_bps: parse(3, "bw_max_bps")?,
                latency_min_s: parse(4, "latency_min_s")?,
                latency_max_s: parse(5, "latency_max_s")?,
                latency_display: get(6),
            };
            if row.split_id as usize != i + 1 {
                return Err(Error::config(format!(
                    "split table row {}: ids must run 1..n in order",
                    i + 2
                )));
            }
            if row.bw_min_bps <= 0.0 || row.bw_min_bps > row.bw_max_bps {
                return Err(Error::config(format!(
                    "split {}: bandwidth bounds must satisfy 0 < min <= max",
                    row.split_id
                )));
            }
            if row.latency_min_s <= 0.0 || row.latency_min_s > row.latency_max_s {
                return Err(Error::config(format!(
                    "split {}: latency bounds must satisfy 0 < min <= max",
                    row.split_id
                )));
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::config("split table has no rows"));
        }
        for w in rows.windows(2) {
            if w[1].bw_min_bps < w[0].bw_min_bps {
                return Err(Error::config("split table bandwidth floors must be non-decreasing"));
            }
            if w[1].latency_max_s > w[0].latency_max_s {
                return Err(Error::config("split table latency ceilings must be non-increasing"));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[SplitRequirement] {
        &self.rows
    }
}

/// The bundled requirement table.
pub fn load_split_table() -> Result<SplitTable> {
    crate::data::DataSource::bundled().split_table()
}

// ---------------------------------------------------------------------------
// Transport profiles and catalog
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Topology {
    PtP,
    PtMP,
    Ring,
    Mesh,
}

impl Topology {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "PtP" => Ok(Topology::PtP),
            "PtMP" => Ok(Topology::PtMP),
            "Ring" => Ok(Topology::Ring),
            "Mesh" => Ok(Topology::Mesh),
            other => Err(Error::config(format!("unknown topology '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LineOfSight {
    Los,
    NLos,
}

/// What a transport offers: bandwidth and round-trip latency, plus optional
/// descriptive tags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FronthaulProfile {
    pub bandwidth_bps: f64,
    pub latency_rtt_s: f64,
    pub technology: Option<String>,
    pub topology: Option<Topology>,
    pub los: Option<LineOfSight>,
}

impl FronthaulProfile {
    pub fn new(bandwidth_bps: f64, latency_rtt_s: f64) -> Result<Self> {
        if !bandwidth_bps.is_finite() || bandwidth_bps <= 0.0 {
            return Err(Error::invalid(format!("bandwidth must be > 0, got {bandwidth_bps}")));
        }
        if !latency_rtt_s.is_finite() || latency_rtt_s <= 0.0 {
            return Err(Error::invalid(format!("latency must be > 0, got {latency_rtt_s}")));
        }
        Ok(Self { bandwidth_bps, latency_rtt_s, technology: None, topology: None, los: None })
    }
}

/// One catalog row: a transport technology with its headline figures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TechnologyEntry {
    pub id: String,
    pub label: String,
    /// Fixed round-trip latency, if the row has one.
    pub latency_rtt_s: Option<f64>,
    /// Distance-proportional round-trip latency (fibre rows), in s/km.
    pub latency_rtt_s_per_km: Option<f64>,
    /// Throughput upper bound.
    pub throughput_bps: f64,
    pub topology: Option<Topology>,
    pub los: Option<LineOfSight>,
    pub duplexing: String,
    pub multiplexing: String,
    pub notes: String,
}

/// The transport catalog, ordered as in the data file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TechnologyCatalog {
    entries: Vec<TechnologyEntry>,
}

impl TechnologyCatalog {
    /// Parse from CSV. Latency columns are in microseconds, throughput in
    /// Mbit/s (the units the catalog is maintained in); exactly one of the
    /// two latency columns must be set per row.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader =
            csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| Error::config(format!("catalog: {e}")))?;
        let expected = [
            "id",
            "label",
            "latency_rtt_us",
            "latency_rtt_us_per_km",
            "throughput_mbps",
            "topology",
            "los",
            "duplexing",
            "multiplexing",
            "notes",
        ];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::config(format!("catalog header must be {}", expected.join(","))));
        }
        let mut entries = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::config(format!("catalog row {}: {e}", i + 2)))?;
            let get = |idx: usize| record.get(idx).unwrap_or("").to_string();
            let opt_f64 = |idx: usize, name: &str| -> Result<Option<f64>> {
                match get(idx).as_str() {
                    "" => Ok(None),
                    s => s.parse::<f64>().map(Some).map_err(|_| {
                        Error::config(format!("catalog row {}: bad {name} '{s}'", i + 2))
                    }),
                }
            };
            let latency_us = opt_f64(2, "latency_rtt_us")?;
            let latency_us_per_km = opt_f64(3, "latency_rtt_us_per_km")?;
            if latency_us.is_some() == latency_us_per_km.is_some() {
                return Err(Error::config(format!(
                    "catalog row {}: exactly one latency column must be set",
                    i + 2
                )));
            }
            let throughput_mbps = opt_f64(4, "throughput_mbps")?
                .ok_or_else(|| Error::config(format!("catalog row {}: missing throughput", i + 2)))?;
            let topology = match get(5).as_str() {
                "" => None,
                s => Some(Topology::parse(s)?),
            };
            let los = match get(6).as_str() {
                "" => None,
                "LOS" => Some(LineOfSight::Los),
                "NLOS" => Some(LineOfSight::NLos),
                other => {
                    return Err(Error::config(format!(
                        "catalog row {}: unknown LOS tag '{other}'",
                        i + 2
                    )))
                }
            };
            entries.push(TechnologyEntry {
                id: get(0),
                label: get(1),
                latency_rtt_s: latency_us.map(|us| us * 1e-6),
                latency_rtt_s_per_km: latency_us_per_km.map(|us| us * 1e-6),
                throughput_bps: throughput_mbps * 1e6,
                topology,
                los,
                duplexing: get(7),
                multiplexing: get(8),
                notes: get(9),
            });
        }
        if entries.is_empty() {
            return Err(Error::config("catalog has no rows"));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[TechnologyEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Result<&TechnologyEntry> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownId(format!("technology '{id}'")))
    }

    /// Build a profile for a catalog entry. Rows with distance-proportional
    /// latency require `distance_km`; throughput uses the row's upper bound
    /// and latency the row's upper bound (optimistic throughput, pessimistic
    /// latency).
    pub fn profile(&self, id: &str, distance_km: Option<f64>) -> Result<FronthaulProfile> {
        let entry = self.get(id)?;
        let latency_rtt_s = match (entry.latency_rtt_s, entry.latency_rtt_s_per_km) {
            (Some(fixed), None) => fixed,
            (None, Some(per_km)) => {
                let d = distance_km.ok_or_else(|| {
                    Error::invalid(format!("technology '{id}' needs a distance in km"))
                })?;
                if !d.is_finite() || d <= 0.0 {
                    return Err(Error::invalid(format!("distance must be > 0, got {d}")));
                }
                per_km * d
            }
            _ => unreachable!("validated at load"),
        };
        let mut profile = FronthaulProfile::new(entry.throughput_bps, latency_rtt_s)?;
        profile.technology = Some(entry.id.clone());
        profile.topology = entry.topology;
        profile.los = entry.los;
        Ok(profile)
    }
}

// ---------------------------------------------------------------------------
// Advisory text
// ---------------------------------------------------------------------------

/// Advisory block for one split point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Advice {
    pub split_point: String,
    pub covers: String,
    pub summary: String,
    pub pros: String,
    pub cons: String,
}

/// The advisory blocks, keyed by split-point section.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdviceCatalog {
    blocks: Vec<Advice>,
}

impl AdviceCatalog {
    /// Parse the sectioned text file (`[NAME]` headers, `key: value` lines).
    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut current: Option<Advice> = None;
        for line in text.lines() {
            let line = line.trim_end();
            if line.starts_with('#') || line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                if let Some(block) = current.take() {
                    blocks.push(block);
                }
                current = Some(Advice {
                    split_point: name.to_string(),
                    covers: String::new(),
                    summary: String::new(),
                    pros: String::new(),
                    cons: String::new(),
                });
                continue;
            }
            let block = current
                .as_mut()
                .ok_or_else(|| Error::config("advice text before any [SECTION] header"))?;
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| Error::config(format!("advice line without key: '{line}'")))?;
            let value = value.trim().to_string();
            match key.trim() {
                "covers" => block.covers = value,
                "summary" => block.summary = value,
                "pros" => block.pros = value,
                "cons" => block.cons = value,
                other => return Err(Error::config(format!("unknown advice key '{other}'"))),
            }
        }
        if let Some(block) = current.take() {
            blocks.push(block);
        }
        let catalog = Self { blocks };
        for required in ["PHY", "MAC", "PDCP", "NONE"] {
            catalog.get(required)?;
        }
        Ok(catalog)
    }

    pub fn get(&self, split_point: &str) -> Result<&Advice> {
        self.blocks
            .iter()
            .find(|b| b.split_point == split_point)
            .ok_or_else(|| Error::config(format!("advice text missing [{split_point}] section")))
    }

    /// Advisory block covering a maximal split id (5-6 -> PHY, 4 -> MAC,
    /// 1-3 -> PDCP, none -> NONE).
    pub fn for_max_split(&self, max_split: Option<u8>) -> Result<&Advice> {
        let section = match max_split {
            Some(5) | Some(6) => "PHY",
            Some(4) => "MAC",
            Some(1..=3) => "PDCP",
            Some(other) => return Err(Error::invalid(format!("split id {other} out of range"))),
            None => "NONE",
        };
        self.get(section)
    }
}

// ---------------------------------------------------------------------------
// Feasibility
// ---------------------------------------------------------------------------

/// How ranged requirements are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// Lenient end of each range: bandwidth floor, latency ceiling.
    Optimistic,
    /// Demanding end: bandwidth ceiling, latency floor.
    Strict,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "optimistic" => Ok(Mode::Optimistic),
            "strict" => Ok(Mode::Strict),
            other => Err(Error::invalid(format!("mode must be optimistic or strict, got '{other}'"))),
        }
    }
}

/// Per-split comparison row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitRowVerdict {
    pub split_id: u8,
    pub name: String,
    pub required_bw_bps: f64,
    pub required_latency_s: f64,
    pub offered_bw_bps: f64,
    pub offered_latency_s: f64,
    pub pass: bool,
}

/// Outcome of a feasibility query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitVerdict {
    pub mode: Mode,
    pub feasible: Vec<u8>,
    pub max_split: Option<u8>,
    pub rows: Vec<SplitRowVerdict>,
    pub advisory: Advice,
}

/// Evaluate which splits a profile supports.
pub fn feasible_splits(
    table: &SplitTable,
    advice: &AdviceCatalog,
    profile: &FronthaulProfile,
    mode: Mode,
) -> Result<SplitVerdict> {
    let mut rows = Vec::with_capacity(table.rows().len());
    let mut feasible = Vec::new();
    for req in table.rows() {
        let (required_bw, required_latency) = match mode {
            Mode::Optimistic => (req.bw_min_bps, req.latency_max_s),
            Mode::Strict => (req.bw_max_bps, req.latency_min_s),
        };
        let pass =
            profile.bandwidth_bps >= required_bw && profile.latency_rtt_s <= required_latency;
        if pass {
            feasible.push(req.split_id);
        }
        rows.push(SplitRowVerdict {
            split_id: req.split_id,
            name: req.name.clone(),
            required_bw_bps: required_bw,
            required_latency_s: required_latency,
            offered_bw_bps: profile.bandwidth_bps,
            offered_latency_s: profile.latency_rtt_s,
            pass,
        });
    }
    // The table's monotonicity makes the feasible set a prefix; take the
    // largest id of the contiguous run from 1 regardless.
    let mut max_split = None;
    for (i, id) in feasible.iter().enumerate() {
        if *id as usize == i + 1 {
            max_split = Some(*id);
        } else {
            break;
        }
    }
    let advisory = advice.for_max_split(max_split)?.clone();
    Ok(SplitVerdict { mode, feasible, max_split, rows, advisory })
}

/// Catalog lookup composed with [`feasible_splits`].
pub fn advise(
    table: &SplitTable,
    advice: &AdviceCatalog,
    catalog: &TechnologyCatalog,
    technology_id: &str,
    distance_km: Option<f64>,
    mode: Mode,
) -> Result<SplitVerdict> {
    let profile = catalog.profile(technology_id, distance_km)?;
    feasible_splits(table, advice, &profile, mode)
}

// ===========================================================================
// Tests
// ===========================================================================
