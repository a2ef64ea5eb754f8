//! Quantitative planning models for PtMP wireless backhaul: availability
//! calculus with redundancy, a Monte-Carlo cluster simulator, EEC
//! synchronization masks (MTIE/TDEV), per-link latency/rate budgets, a RAN
//! functional-split advisor driven by a transport catalog, Gini/Lorenz
//! fairness, and per-scenario KPI target compliance.
//!
//! Everything is a pure function over immutable inputs (the simulator
//! derives one RNG stream per replication), so concurrent use needs no
//! coordination.
//!
//! ```
//! use backhaul_core::{cluster_availability, ClusterSpec, HubRedundancy, NodeReliability};
//!
//! // Two hubs in 1:1 redundancy serving three terminals, one required.
//! let node = NodeReliability::new(438_000.0, 3.0).unwrap();
//! let spec = ClusterSpec::new(HubRedundancy::Dual, 3, 1, node).unwrap();
//! let report = cluster_availability(&spec).unwrap();
//! assert_eq!(report.nines, 10);
//! assert!((report.downtime.milliseconds() - 1.4794).abs() < 1e-3);
//! ```

pub mod data;
pub mod error;
pub mod fairness;
pub mod kpi;
pub mod link;
pub mod reliability;
pub mod sim;
pub mod split;
pub mod syncmask;
pub mod tables;

pub use data::DataSource;
pub use error::{Error, Result};
pub use fairness::{gini, gini_from_lorenz, gini_snr, lorenz, LorenzCurve, ObservationSet};
pub use kpi::{check_targets, KpiReport, KpiTargetSet, Measurement, Scenario, TraceRecord};
pub use link::{
    aggregate_cluster_rate, check_latency_target, check_rate_target, pair_latency, pair_rate,
    Direction, LatencyBudget, RateBudget, RateVerdict, TargetVerdict,
};
pub use reliability::{
    brute_force_k_of_n, cluster_availability, downtime_per_year, eval_expr, k_of_n_availability,
    nines, node_availability, Availability, AvailabilityReport, ClusterSpec, DowntimePerYear,
    HubRedundancy, NodeReliability, ReliabilityExpr,
};
pub use sim::{rebalance, simulate, simulate_with_trace, ClusterState, RebalancePolicy, SimConfig, SimResult};
pub use split::{
    advise, feasible_splits, load_split_table, Advice, AdviceCatalog, FronthaulProfile, Mode,
    SplitRequirement, SplitTable, SplitVerdict, TechnologyCatalog,
};
pub use syncmask::{
    check_cf_accuracy, check_compliance, check_frequency_accuracy, compute_mtie, compute_tdev,
    lowpass_10hz, mtie_mask_g8262, tdev_mask_g8262, MaskKind, MaskReport, MaskVerdict, TieSeries,
};
