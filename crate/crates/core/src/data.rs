//! Access to the bundled data files (split requirements, transport catalog,
//! advisory text, KPI target registry, expected reference tables).
//!
//! The files live under `data/` in this crate and are embedded at compile
//! time, so the library works without any runtime file layout. A directory
//! override lets deployments swap in edited copies; file names inside the
//! directory match the bundled ones.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::kpi::KpiTargetSet;
use crate::split::{AdviceCatalog, SplitTable, TechnologyCatalog};

const SPLITS_CSV: &str = include_str!("../data/splits.csv");
const CATALOG_CSV: &str = include_str!("../data/backhaul_catalog.csv");
const ADVICE_TXT: &str = include_str!("../data/split_advice.txt");
const KPI_TARGETS_CSV: &str = include_str!("../data/kpi_targets.csv");
const TABLE_AVAILABILITY_DOWNTIME: &str =
    include_str!("../data/expected_tables/availability_downtime.csv");
const TABLE_HUB_REDUNDANCY: &str = include_str!("../data/expected_tables/hub_redundancy.csv");
const TABLE_SECTOR_AVAILABILITY: &str =
    include_str!("../data/expected_tables/sector_availability.csv");

/// Where data files come from: the compiled-in copies or a directory.
#[derive(Debug, Clone)]
pub enum DataSource {
    Bundled,
    Dir(PathBuf),
}

impl DataSource {
    pub fn bundled() -> Self {
        DataSource::Bundled
    }

    pub fn dir(path: impl AsRef<Path>) -> Self {
        DataSource::Dir(path.as_ref().to_path_buf())
    }

    fn read(&self, name: &str, bundled: &'static str) -> Result<String> {
        match self {
            DataSource::Bundled => Ok(bundled.to_string()),
            DataSource::Dir(dir) => {
                let path = dir.join(name);
                std::fs::read_to_string(&path)
                    .map_err(|e| Error::config(format!("reading {}: {e}", path.display())))
            }
        }
    }

    /// The six-row fronthaul requirement table.
    pub fn split_table(&self) -> Result<SplitTable> {
        SplitTable::from_csv_str(&self.read("splits.csv", SPLITS_CSV)?)
    }

    /// The transport technology catalog.
    pub fn technology_catalog(&self) -> Result<TechnologyCatalog> {
        TechnologyCatalog::from_csv_str(&self.read("backhaul_catalog.csv", CATALOG_CSV)?)
    }

    /// Advisory pros/cons text per split point.
    pub fn advice(&self) -> Result<AdviceCatalog> {
        AdviceCatalog::from_str(&self.read("split_advice.txt", ADVICE_TXT)?)
    }

    /// Per-scenario KPI target registry.
    pub fn kpi_targets(&self) -> Result<KpiTargetSet> {
        KpiTargetSet::from_csv_str(&self.read("kpi_targets.csv", KPI_TARGETS_CSV)?)
    }

    /// Expected content of a reference table, by file stem.
    pub fn expected_table(&self, stem: &str) -> Result<String> {
        let (name, bundled) = match stem {
            "availability_downtime" => {
                ("expected_tables/availability_downtime.csv", TABLE_AVAILABILITY_DOWNTIME)
            }
            "hub_redundancy" => ("expected_tables/hub_redundancy.csv", TABLE_HUB_REDUNDANCY),
            "sector_availability" => {
                ("expected_tables/sector_availability.csv", TABLE_SECTOR_AVAILABILITY)
            }
            other => return Err(Error::UnknownId(format!("reference table '{other}'"))),
        };
        self.read(name, bundled)
    }
}
