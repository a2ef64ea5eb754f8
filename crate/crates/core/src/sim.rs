//! Discrete-event Monte-Carlo simulation of a PtMP cluster with failing and
//! repairing nodes, 1:1 hub redundancy and terminal rebalancing.
//!
//! Every node alternates exponentially distributed up phases (mean MTBF) and
//! down phases (mean MTTR) — the memoryless choice consistent with the
//! steady-state formula `A = MTBF/(MTBF+MTTR)`. Initial states are drawn
//! from that steady state so finite-horizon estimates carry no warm-up bias.
//! The cluster counts as available whenever at least one hub is up (the hub,
//! for a single-hub cluster) and at least M terminals are up. Availability
//! is accumulated as integrated up-time between events, not sampled on a
//! tick grid.
//!
//! Replications are independent: replication `r` draws from stream `r` of a
//! counter-based generator seeded with the run seed, so results are
//! bit-identical for a given `(seed, replications)` pair no matter how many
//! threads execute them. Replications run in parallel and are merged in
//! replication-index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fairness::{gini, ObservationSet};
use crate::reliability::ClusterSpec;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// When terminals get reassigned between hubs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RebalancePolicy {
    /// After every event, every up terminal is re-dealt greedily to the up
    /// hub with fewer terminals (ties toward the lower hub id).
    Greedy,
    /// Terminals stay where they are until their hub fails; only orphaned or
    /// newly repaired terminals are (re)assigned.
    Sticky,
}

impl RebalancePolicy {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(RebalancePolicy::Greedy),
            "sticky" => Ok(RebalancePolicy::Sticky),
            other => {
                Err(Error::invalid(format!("policy must be greedy or sticky, got '{other}'")))
            }
        }
    }
}

/// Simulation parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub cluster: ClusterSpec,
    pub horizon_h: f64,
    pub seed: u64,
    pub replications: u32,
    pub policy: RebalancePolicy,
}

impl SimConfig {
    pub fn new(cluster: ClusterSpec, horizon_h: f64, seed: u64, replications: u32) -> Result<Self> {
        if !horizon_h.is_finite() || horizon_h <= 0.0 {
            return Err(Error::invalid(format!("horizon must be > 0, got {horizon_h}")));
        }
        if replications < 1 {
            return Err(Error::invalid("at least one replication is required"));
        }
        Ok(Self { cluster, horizon_h, seed, replications, policy: RebalancePolicy::Greedy })
    }

    pub fn with_policy(mut self, policy: RebalancePolicy) -> Self {
        self.policy = policy;
        self
    }
}

// ---------------------------------------------------------------------------
// Cluster state and rebalancing
// ---------------------------------------------------------------------------

/// Up/down flags for every node plus the terminal-to-hub assignment map.
///
/// The assignment invariant — every assigned terminal points at an up hub,
/// down terminals and down-hub orphans are unassigned — holds after
/// [`rebalance`]; the input may violate it transiently (that is what the
/// rebalance repairs).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterState {
    hub_up: Vec<bool>,
    terminal_up: Vec<bool>,
    assignment: Vec<Option<usize>>,
}

impl ClusterState {
    pub fn new(
        hub_up: Vec<bool>,
        terminal_up: Vec<bool>,
        assignment: Vec<Option<usize>>,
    ) -> Result<Self> {
        if hub_up.is_empty() {
            return Err(Error::invalid("cluster needs at least one hub"));
        }
        if assignment.len() != terminal_up.len() {
            return Err(Error::invalid("assignment map must cover every terminal"));
        }
        if assignment.iter().flatten().any(|&h| h >= hub_up.len()) {
            return Err(Error::invalid("assignment references a hub that does not exist"));
        }
        Ok(Self { hub_up, terminal_up, assignment })
    }

    pub fn hub_up(&self) -> &[bool] {
        &self.hub_up
    }

    pub fn terminal_up(&self) -> &[bool] {
        &self.terminal_up
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    /// True when the assignment invariant holds.
    pub fn is_consistent(&self) -> bool {
        self.assignment.iter().enumerate().all(|(t, a)| match a {
            Some(h) => self.hub_up[*h] && self.terminal_up[t],
            None => true,
        }) && self
            .assignment
            .iter()
            .enumerate()
            .all(|(t, a)| !(self.terminal_up[t] && self.hub_up.iter().any(|&u| u)) || a.is_some())
    }

    /// Terminal count per up hub, in hub-id order.
    pub fn up_hub_loads(&self) -> Vec<u32> {
        let mut loads = vec![0u32; self.hub_up.len()];
        for a in self.assignment.iter().flatten() {
            loads[*a] += 1;
        }
        self.hub_up
            .iter()
            .zip(loads)
            .filter_map(|(&up, load)| up.then_some(load))
            .collect()
    }
}

/// Reassign terminals to hubs under the given policy. Every up terminal ends
/// up assigned whenever at least one hub is up; with no up hub the map is
/// empty (and the cluster is unavailable anyway).
pub fn rebalance(state: &ClusterState, policy: RebalancePolicy) -> ClusterState {
    let mut next = state.clone();
    let any_hub_up = next.hub_up.iter().any(|&u| u);

    // Drop assignments that no longer hold.
    for (t, slot) in next.assignment.iter_mut().enumerate() {
        let keep = match slot {
            Some(h) => next.hub_up[*h] && next.terminal_up[t],
            None => true,
        };
        if !keep {
            *slot = None;
        }
    }
    if !any_hub_up {
        return next;
    }
    if policy == RebalancePolicy::Greedy {
        // Re-deal everything from scratch.
        for slot in next.assignment.iter_mut() {
            *slot = None;
        }
    }
    let mut loads = vec![0u32; next.hub_up.len()];
    for a in next.assignment.iter().flatten() {
        loads[*a] += 1;
    }
    for t in 0..next.terminal_up.len() {
        if !next.terminal_up[t] || next.assignment[t].is_some() {
            continue;
        }
        let target = next
            .hub_up
            .iter()
            .enumerate()
            .filter(|(_, &up)| up)
            .min_by_key(|(h, _)| (loads[*h], *h))
            .map(|(h, _)| h)
            .expect("at least one hub is up");
        next.assignment[t] = Some(target);
        loads[target] += 1;
    }
    next
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

/// Aggregated simulation outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    /// Mean of per-replication availability estimates.
    pub estimated_availability: f64,
    /// Standard error across replications (0 for a single replication).
    pub stderr: f64,
    /// Total cluster-available time over all replications, in hours.
    pub available_time_h: f64,
    /// Total failure/repair events processed.
    pub event_count: u64,
    /// Time-weighted Gini of up-hub terminal counts, over intervals with at
    /// least one up hub and at least one assigned terminal.
    pub hub_load_gini: f64,
    /// Rebalance invocations that changed at least one assignment.
    pub rebalance_count: u64,
}

/// One trace row, emitted for replication 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEvent {
    pub time_h: f64,
    pub event: String,
    pub node_id: String,
    pub cluster_available: bool,
    /// `T<i>:H<j>` pairs for every assigned terminal, semicolon-separated.
    pub assignment: String,
}

struct RepOutcome {
    availability: f64,
    up_time_h: f64,
    gini_weighted: f64,
    gini_time_h: f64,
    events: u64,
    rebalances: u64,
}

/// Run the configured replications and merge their results.
pub fn simulate(cfg: &SimConfig) -> Result<SimResult> {
    let outcomes: Vec<RepOutcome> = (0..cfg.replications)
        .into_par_iter()
        .map(|rep| run_replication(cfg, rep as u64, &mut None))
        .collect();
    Ok(merge(cfg, outcomes))
}

/// Like [`simulate`], also returning the event trace of replication 0.
pub fn simulate_with_trace(cfg: &SimConfig) -> Result<(SimResult, Vec<TraceEvent>)> {
    let mut first_trace = Some(Vec::new());
    let first = run_replication(cfg, 0, &mut first_trace);
    let mut outcomes: Vec<RepOutcome> = (1..cfg.replications)
        .into_par_iter()
        .map(|rep| run_replication(cfg, rep as u64, &mut None))
        .collect();
    outcomes.insert(0, first);
    Ok((merge(cfg, outcomes), first_trace.unwrap()))
}

fn merge(cfg: &SimConfig, outcomes: Vec<RepOutcome>) -> SimResult {
    let r = outcomes.len() as f64;
    let mean = outcomes.iter().map(|o| o.availability).sum::<f64>() / r;
    let stderr = if outcomes.len() > 1 {
        let var = outcomes.iter().map(|o| (o.availability - mean).powi(2)).sum::<f64>()
            / (r - 1.0);
        (var / r).sqrt()
    } else {
        0.0
    };
    let gini_time: f64 = outcomes.iter().map(|o| o.gini_time_h).sum();
    let gini_weighted: f64 = outcomes.iter().map(|o| o.gini_weighted).sum();
    let _ = cfg;
    SimResult {
        estimated_availability: mean,
        stderr,
        available_time_h: outcomes.iter().map(|o| o.up_time_h).sum(),
        event_count: outcomes.iter().map(|o| o.events).sum(),
        hub_load_gini: if gini_time > 0.0 { gini_weighted / gini_time } else { 0.0 },
        rebalance_count: outcomes.iter().map(|o| o.rebalances).sum(),
    }
}

fn node_name(idx: usize, hubs: usize) -> String {
    if idx < hubs {
        format!("H{}", idx + 1)
    } else {
        format!("T{}", idx - hubs + 1)
    }
}

fn assignment_string(state: &ClusterState) -> String {
    let parts: Vec<String> = state
        .assignment
        .iter()
        .enumerate()
        .filter_map(|(t, a)| a.map(|h| format!("T{}:H{}", t + 1, h + 1)))
        .collect();
    parts.join(";")
}

fn cluster_available(state: &ClusterState, m_required: u32) -> bool {
    let hub_ok = state.hub_up.iter().any(|&u| u);
    let terminals_up = state.terminal_up.iter().filter(|&&u| u).count() as u32;
    hub_ok && terminals_up >= m_required
}

fn run_replication(cfg: &SimConfig, rep: u64, trace: &mut Option<Vec<TraceEvent>>) -> RepOutcome {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(rep);

    let hubs = cfg.cluster.hubs.count() as usize;
    let terminals = cfg.cluster.n_terminals as usize;
    let node_total = hubs + terminals;
    let horizon = cfg.horizon_h;
    let mtbf = cfg.cluster.node.mtbf_h();
    let mttr = cfg.cluster.node.mttr_h();

    let fail_dist = Exp::new(1.0 / mtbf).expect("validated MTBF");
    // MTTR 0 means repairs are instantaneous: the node is effectively
    // always up and generates no events.
    let repair_dist = (mttr > 0.0).then(|| Exp::new(1.0 / mttr).expect("validated MTTR"));

    // Stationary start: each node begins up with probability
    // MTBF/(MTBF+MTTR); the residual phase is exponential again by
    // memorylessness. Keeps finite-horizon estimates unbiased.
    let mut up = vec![true; node_total];
    let mut next_event = vec![f64::INFINITY; node_total];
    if let Some(repair) = &repair_dist {
        let p_up = mtbf / (mtbf + mttr);
        for i in 0..node_total {
            up[i] = rng.gen::<f64>() < p_up;
            next_event[i] =
                if up[i] { fail_dist.sample(&mut rng) } else { repair.sample(&mut rng) };
        }
    }

    let mut state = ClusterState {
        hub_up: up[..hubs].to_vec(),
        terminal_up: up[hubs..].to_vec(),
        assignment: vec![None; terminals],
    };
    state = rebalance(&state, cfg.policy);
    debug_assert!(state.is_consistent());

    if let Some(rows) = trace.as_mut() {
        rows.push(TraceEvent {
            time_h: 0.0,
            event: "init".to_string(),
            node_id: String::new(),
            cluster_available: cluster_available(&state, cfg.cluster.m_required),
            assignment: assignment_string(&state),
        });
    }

    let mut t_now = 0.0f64;
    let mut up_time = 0.0f64;
    let mut gini_weighted = 0.0f64;
    let mut gini_time = 0.0f64;
    let mut events = 0u64;
    let mut rebalances = 0u64;

    let account = |state: &ClusterState, from: f64, to: f64, up_time: &mut f64,
                   gini_weighted: &mut f64, gini_time: &mut f64| {
        let dt = to - from;
        if dt <= 0.0 {
            return;
        }
        if cluster_available(state, cfg.cluster.m_required) {
            *up_time += dt;
        }
        let loads = state.up_hub_loads();
        let assigned: u32 = loads.iter().sum();
        if !loads.is_empty() && assigned > 0 {
            let values: Vec<f64> = loads.iter().map(|&c| c as f64).collect();
            let g = gini(&ObservationSet::new(values).expect("counts are valid"))
                .expect("assigned > 0 implies positive mean");
            *gini_weighted += g * dt;
            *gini_time += dt;
        }
    };

    loop {
        // Earliest pending transition, ties toward the lower node index.
        let mut next_idx = usize::MAX;
        let mut next_t = f64::INFINITY;
        for (i, &t) in next_event.iter().enumerate() {
            if t < next_t {
                next_t = t;
                next_idx = i;
            }
        }
        if next_idx == usize::MAX || next_t > horizon {
            break;
        }

        account(&state, t_now, next_t, &mut up_time, &mut gini_weighted, &mut gini_time);
        t_now = next_t;

        up[next_idx] = !up[next_idx];
        let is_up = up[next_idx];
        next_event[next_idx] = t_now
            + if is_up {
                fail_dist.sample(&mut rng)
            } else {
                repair_dist.as_ref().expect("down phase requires MTTR > 0").sample(&mut rng)
            };
        if next_idx < hubs {
            state.hub_up[next_idx] = is_up;
        } else {
            state.terminal_up[next_idx - hubs] = is_up;
        }

        let rebalanced = rebalance(&state, cfg.policy);
        if rebalanced.assignment != state.assignment {
            rebalances += 1;
        }
        state = rebalanced;
        debug_assert!(state.is_consistent());
        events += 1;

        if let Some(rows) = trace.as_mut() {
            rows.push(TraceEvent {
                time_h: t_now,
                event: if is_up { "repair" } else { "fail" }.to_string(),
                node_id: node_name(next_idx, hubs),
                cluster_available: cluster_available(&state, cfg.cluster.m_required),
                assignment: assignment_string(&state),
            });
        }
    }

    account(&state, t_now, horizon, &mut up_time, &mut gini_weighted, &mut gini_time);

    RepOutcome {
        availability: up_time / horizon,
        up_time_h: up_time,
        gini_weighted,
        gini_time_h: gini_time,
        events,
        rebalances,
    }
}

// ===========================================================================
// Tests
// ===========================================================================
