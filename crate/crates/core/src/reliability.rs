//! Steady-state availability calculus for repairable PtMP backhaul nodes.
//!
//! A node is described by its MTBF/MTTR pair; availability follows
//! `A = MTBF / (MTBF + MTTR)`. Redundant structures (series chains, parallel
//! pairs, k-out-of-n terminal sub-clusters) are composed as reliability block
//! diagrams and evaluated to a cluster availability.
//!
//! All arithmetic is carried in unavailability space (`U = 1 - A`). The
//! interesting results of redundancy live deep in the nines (a dual-hub
//! cluster sits around `U ~ 1e-11`), where forming `1 - A` from an `f64`
//! availability would destroy every significant digit. Series composition
//! therefore uses the complement identity
//! `U_ab = U_a + U_b - U_a*U_b  (= 1 - (1-U_a)(1-U_b))`
//! which never subtracts from 1, and the k-out-of-n block sums the
//! complementary binomial tail directly. Conversion to `A` happens only at
//! presentation time.

use serde::Serialize;

use crate::error::{Error, Result};

/// Hours in a 365-day year.
pub const HOURS_PER_YEAR: f64 = 8760.0;
/// Minutes in a 365-day year.
pub const MINUTES_PER_YEAR: f64 = 525_600.0;
/// Seconds in a 365-day year.
pub const SECONDS_PER_YEAR: f64 = 31_536_000.0;

/// `nines()` result for an exactly-zero unavailability. One more than the
/// largest count any positive `f64` unavailability can reach (the smallest
/// positive subnormal is ~4.9e-324).
pub const NINES_EXACT: u32 = 324;

// ---------------------------------------------------------------------------
// Node parameters
// ---------------------------------------------------------------------------

/// MTBF/MTTR pair describing one repairable node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeReliability {
    mtbf_h: f64,
    mttr_h: f64,
}

impl NodeReliability {
    /// Both durations in hours; MTBF must be positive, MTTR non-negative.
    pub fn new(mtbf_h: f64, mttr_h: f64) -> Result<Self> {
        if !mtbf_h.is_finite() || mtbf_h <= 0.0 {
            return Err(Error::invalid(format!("MTBF must be finite and > 0, got {mtbf_h}")));
        }
        if !mttr_h.is_finite() || mttr_h < 0.0 {
            return Err(Error::invalid(format!("MTTR must be finite and >= 0, got {mttr_h}")));
        }
        Ok(Self { mtbf_h, mttr_h })
    }

    pub fn mtbf_h(&self) -> f64 {
        self.mtbf_h
    }

    pub fn mttr_h(&self) -> f64 {
        self.mttr_h
    }
}

// ---------------------------------------------------------------------------
// Availability
// ---------------------------------------------------------------------------

/// Steady-state availability, stored as its complement `U = 1 - A` so that
/// high-availability results keep their precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Availability {
    unavailability: f64,
}

impl Availability {
    /// Construct from the unavailability `U` in `[0, 1]`.
    pub fn from_unavailability(u: f64) -> Result<Self> {
        if !u.is_finite() || !(0.0..=1.0).contains(&u) {
            return Err(Error::invalid(format!("unavailability must lie in [0,1], got {u}")));
        }
        Ok(Self { unavailability: u })
    }

    /// Construct from the availability `A` in `[0, 1]`.
    ///
    /// Forms `1 - A`, which cannot resolve `U` below ~1e-16; prefer
    /// [`from_unavailability`](Self::from_unavailability) or
    /// [`node_availability`] when the complement is known directly.
    pub fn from_availability(a: f64) -> Result<Self> {
        if !a.is_finite() || !(0.0..=1.0).contains(&a) {
            return Err(Error::invalid(format!("availability must lie in [0,1], got {a}")));
        }
        Ok(Self { unavailability: 1.0 - a })
    }

    pub fn unavailability(&self) -> f64 {
        self.unavailability
    }

    pub fn availability(&self) -> f64 {
        1.0 - self.unavailability
    }

    /// Availability as a percentage, formatted with 13 decimal digits.
    ///
    /// This resolution allows digit-for-digit comparison with published
    /// high-availability figures.
    pub fn percent_string(&self) -> String {
        format!("{:.13}", 100.0 * self.availability())
    }
}

/// Count of leading nines: the largest `k` with `A >= 1 - 10^-k`, i.e.
/// `U <= 10^-k`; 0 if `A < 0.9`.
///
/// Boundary comparisons carry a 1e-9 relative slack so availabilities built
/// from decimal literals (whose `f64` complement can exceed the exact power
/// of ten by a few ulp) count the intended number of nines. An exactly-zero
/// unavailability reports [`NINES_EXACT`].
pub fn nines(a: Availability) -> u32 {
    let u = a.unavailability();
    if u == 0.0 {
        return NINES_EXACT;
    }
    let mut k = 0u32;
    let mut threshold = 0.1f64;
    while k < NINES_EXACT && u <= threshold * (1.0 + 1e-9) {
        k += 1;
        threshold /= 10.0;
    }
    k
}

// ---------------------------------------------------------------------------
// Downtime
// ---------------------------------------------------------------------------

/// Downtime accumulated over a 365-day year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DowntimePerYear {
    seconds: f64,
}

impl DowntimePerYear {
    pub fn seconds(&self) -> f64 {
        self.seconds
    }

    pub fn milliseconds(&self) -> f64 {
        self.seconds * 1e3
    }

    pub fn minutes(&self) -> f64 {
        self.seconds / 60.0
    }

    pub fn hours(&self) -> f64 {
        self.seconds / 3600.0
    }

    pub fn days(&self) -> f64 {
        self.seconds / 86_400.0
    }
}

/// Downtime per year: `U x 1 year` (365 days = 525600 minutes).
pub fn downtime_per_year(a: Availability) -> DowntimePerYear {
    DowntimePerYear { seconds: a.unavailability() * SECONDS_PER_YEAR }
}

// ---------------------------------------------------------------------------
// Elementary operations
// ---------------------------------------------------------------------------

/// Steady-state availability of a single repairable node.
///
/// The complement is computed directly as `MTTR / (MTBF + MTTR)`, never as
/// `1 - A`.
pub fn node_availability(node: NodeReliability) -> Availability {
    let u = node.mttr_h / (node.mtbf_h + node.mttr_h);
    Availability { unavailability: u }
}

/// Series combination in U-space: `1 - (1-u_a)(1-u_b)` without forming the
/// complements.
fn u_series(u_a: f64, u_b: f64) -> f64 {
    u_a + u_b - u_a * u_b
}

/// Availability of a k-out-of-n block of identical nodes: up iff at least
/// `m` of the `n` nodes are up.
///
/// `A_T = sum_{i=0}^{n-m} C(n,i) A^(n-i) U^i`; the implementation sums the
/// complementary tail `U_T = sum_{i=n-m+1}^{n} C(n,i) A^(n-i) U^i` instead,
/// whose terms are all small when `U` is, so no cancellation occurs.
pub fn k_of_n_availability(n: u32, m: u32, a: Availability) -> Result<Availability> {
    if m < 1 || m > n {
        return Err(Error::invalid(format!("k-out-of-n requires 1 <= m <= n, got m={m}, n={n}")));
    }
    let u = a.unavailability();
    let av = a.availability();
    let mut tail = 0.0f64;
    // Walk i = n-m+1 ..= n accumulating C(n,i) incrementally.
    let mut binom = 1.0f64;
    for i in 1..=n {
        binom *= (n - i + 1) as f64 / i as f64;
        if i > n - m {
            tail += binom * powi(av, n - i) * powi(u, i);
        }
    }
    // Guard against accumulated rounding pushing past 1 for degenerate inputs.
    Availability::from_unavailability(tail.min(1.0))
}

/// `x^e` with the IEEE convention `x^0 = 1` (including `0^0`).
fn powi(x: f64, e: u32) -> f64 {
    x.powi(e as i32)
}

/// Independent oracle for [`k_of_n_availability`]: enumerates all `2^n`
/// up/down assignments of `n` independent nodes and sums the probability of
/// every state with at least `m` nodes up. Limited to `n <= 20`.
pub fn brute_force_k_of_n(n: u32, m: u32, a: Availability) -> Result<Availability> {
    if n > 20 {
        return Err(Error::invalid(format!("brute force enumeration limited to n <= 20, got {n}")));
    }
    if m < 1 || m > n {
        return Err(Error::invalid(format!("k-out-of-n requires 1 <= m <= n, got m={m}, n={n}")));
    }
    let av = a.availability();
    let u = a.unavailability();
    let mut total = 0.0f64;
    for state in 0u32..(1u32 << n) {
        let up = state.count_ones();
        if up >= m {
            total += powi(av, up) * powi(u, n - up);
        }
    }
    Availability::from_availability(total.min(1.0))
}

// ---------------------------------------------------------------------------
// Block diagram expressions
// ---------------------------------------------------------------------------

/// A reliability block diagram: units composed in series, in parallel, or as
/// k-out-of-n groups of identical nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ReliabilityExpr {
    /// A single repairable node.
    Unit(NodeReliability),
    /// Up iff every child is up.
    Series(Vec<ReliabilityExpr>),
    /// Up iff at least one child is up.
    Parallel(Vec<ReliabilityExpr>),
    /// Up iff at least `m` of `n` identical nodes are up.
    KOfN { n: u32, m: u32, node: NodeReliability },
}

/// Evaluate a block diagram to an availability.
///
/// Series multiplies child availabilities (via the U-space identity),
/// parallel multiplies child unavailabilities.
pub fn eval_expr(expr: &ReliabilityExpr) -> Result<Availability> {
    match expr {
        ReliabilityExpr::Unit(node) => Ok(node_availability(*node)),
        ReliabilityExpr::Series(children) => {
            if children.is_empty() {
                return Err(Error::invalid("series block needs at least one child"));
            }
            let mut u = 0.0f64;
            for child in children {
                u = u_series(u, eval_expr(child)?.unavailability());
            }
            Availability::from_unavailability(u)
        }
        ReliabilityExpr::Parallel(children) => {
            if children.is_empty() {
                return Err(Error::invalid("parallel block needs at least one child"));
            }
            let mut u = 1.0f64;
            for child in children {
                u *= eval_expr(child)?.unavailability();
            }
            Availability::from_unavailability(u)
        }
        ReliabilityExpr::KOfN { n, m, node } => {
            k_of_n_availability(*n, *m, node_availability(*node))
        }
    }
}

// ---------------------------------------------------------------------------
// PtMP cluster
// ---------------------------------------------------------------------------

/// Hub redundancy of a PtMP cluster: a single hub, or two hubs in 1:1 mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HubRedundancy {
    Single,
    Dual,
}

impl HubRedundancy {
    pub fn from_count(hubs: u32) -> Result<Self> {
        match hubs {
            1 => Ok(HubRedundancy::Single),
            2 => Ok(HubRedundancy::Dual),
            other => Err(Error::invalid(format!("hub count must be 1 or 2, got {other}"))),
        }
    }

    pub fn count(&self) -> u32 {
        match self {
            HubRedundancy::Single => 1,
            HubRedundancy::Dual => 2,
        }
    }
}

/// A PtMP sector: 1 or 2 hubs serving `n_terminals` identical terminals, of
/// which `m_required` must be up. All nodes share the same hardware and thus
/// the same MTBF/MTTR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterSpec {
    pub hubs: HubRedundancy,
    pub n_terminals: u32,
    pub m_required: u32,
    pub node: NodeReliability,
}

impl ClusterSpec {
    pub fn new(
        hubs: HubRedundancy,
        n_terminals: u32,
        m_required: u32,
        node: NodeReliability,
    ) -> Result<Self> {
        if n_terminals < 1 {
            return Err(Error::invalid("cluster needs at least one terminal"));
        }
        if m_required < 1 || m_required > n_terminals {
            return Err(Error::invalid(format!(
                "required terminals must satisfy 1 <= m <= n, got m={m_required}, n={n_terminals}"
            )));
        }
        Ok(Self { hubs, n_terminals, m_required, node })
    }
}

/// Availability together with its presentation quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvailabilityReport {
    pub availability: Availability,
    pub downtime: DowntimePerYear,
    pub nines: u32,
}

impl AvailabilityReport {
    pub fn from_availability(a: Availability) -> Self {
        AvailabilityReport { availability: a, downtime: downtime_per_year(a), nines: nines(a) }
    }
}

/// Cluster availability `A_C = A_H x A_T(N,M)`.
///
/// The hub part is the node itself (single) or two nodes in parallel
/// (`A_H = 1 - (1-A)^2`, dual); the terminal part is the k-out-of-n block.
pub fn cluster_availability(spec: &ClusterSpec) -> Result<AvailabilityReport> {
    let node_a = node_availability(spec.node);
    let u_node = node_a.unavailability();
    let u_hub = match spec.hubs {
        HubRedundancy::Single => u_node,
        HubRedundancy::Dual => u_node * u_node,
    };
    let u_terminals =
        k_of_n_availability(spec.n_terminals, spec.m_required, node_a)?.unavailability();
    let a = Availability::from_unavailability(u_series(u_hub, u_terminals))?;
    Ok(AvailabilityReport::from_availability(a))
}

// ===========================================================================
// Tests
// ===========================================================================
