//! Batch command-line front end over the backhaul models.
//!
//! One subcommand per module: `avail` (cluster availability), `sim`
//! (Monte-Carlo cluster simulation), `sync` (MTIE/TDEV mask compliance and
//! scalar sync checks), `link` (latency/rate budgets and targets), `split`
//! (functional-split advisor), `fairness` (Gini/Lorenz), `kpi` (per-scenario
//! target compliance) and `reproduce-tables` (regenerate the reference
//! availability tables and diff them against the bundled expectations).
//!
//! Exit codes: 0 success/compliant, 1 computed-but-noncompliant (check-style
//! subcommands), 2 usage or input error. Output is locale-independent and
//! byte-identical for identical inputs and seeds.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use backhaul_core::error::Error;
use backhaul_core::kpi::KpiStatus;
use backhaul_core::syncmask::MaskVerdict;
use backhaul_core::*;

// ---------------------------------------------------------------------------
// Argument model
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "backhaul",
    version,
    about = "PtMP backhaul planning toolkit: availability, simulation, sync masks, \
             link budgets, functional splits, fairness and KPI compliance"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Directory overriding the bundled data files
    /// (splits.csv, backhaul_catalog.csv, split_advice.txt, kpi_targets.csv,
    /// expected_tables/).
    #[arg(long, global = true, env = "BACKHAUL_DATA_DIR")]
    data_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form cluster availability, downtime and nines.
    Avail(AvailArgs),
    /// Monte-Carlo simulation of a failing/repairing cluster.
    Sim(SimArgs),
    /// Synchronization compliance: MTIE/TDEV masks and scalar bounds.
    Sync(SyncArgs),
    /// Per-pair latency/rate budgets and backhaul targets.
    Link(LinkArgs),
    /// Which functional splits a fronthaul transport supports.
    Split(SplitArgs),
    /// Gini coefficient and Lorenz curve of an observation file.
    Fairness(FairnessArgs),
    /// Measured-trace compliance against per-scenario KPI targets.
    Kpi(KpiArgs),
    /// Regenerate the reference availability tables and diff them against
    /// the bundled expected files.
    ReproduceTables,
}

#[derive(Args)]
struct ClusterArgs {
    /// Mean time between failures per node, hours.
    #[arg(long)]
    mtbf_h: f64,
    /// Mean time to repair per node, hours.
    #[arg(long)]
    mttr_h: f64,
    /// Hub count: 1 or 2 (1:1 redundancy).
    #[arg(long, default_value_t = 1)]
    hubs: u32,
    /// Terminal count N.
    #[arg(long)]
    terminals: u32,
    /// Minimum up terminals M for the cluster to count as available.
    #[arg(long)]
    min_terminals: u32,
}

impl ClusterArgs {
    fn to_spec(&self) -> Result<ClusterSpec> {
        ClusterSpec::new(
            HubRedundancy::from_count(self.hubs)?,
            self.terminals,
            self.min_terminals,
            NodeReliability::new(self.mtbf_h, self.mttr_h)?,
        )
    }
}

#[derive(Args)]
struct AvailArgs {
    #[command(flatten)]
    cluster: ClusterArgs,
}

#[derive(Args)]
struct SimArgs {
    #[command(flatten)]
    cluster: ClusterArgs,
    /// Simulated hours per replication.
    #[arg(long)]
    horizon_h: f64,
    /// Independent replications (one RNG stream each).
    #[arg(long, default_value_t = 10)]
    replications: u32,
    /// Base seed; replication r uses stream r.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Terminal reassignment policy: greedy or sticky.
    #[arg(long, default_value = "greedy")]
    policy: String,
    /// Write the replication-0 event trace to this CSV file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct SyncArgs {
    /// Time-error record CSV (header `t_seconds,tie_ns`).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Which mask to check the record against: mtie or tdev.
    #[arg(long, default_value = "mtie")]
    metric: String,
    /// Treat the record as already measurement-filtered.
    #[arg(long, default_value_t = false)]
    bypass_filter: bool,
    /// Check an EEC output frequency offset, ppm (may be negative).
    #[arg(long, allow_hyphen_values = true)]
    freq_offset_ppm: Option<f64>,
    /// Check a transparent-clock correction-field error, ns (may be negative).
    #[arg(long, allow_hyphen_values = true)]
    cf_error_ns: Option<f64>,
}

#[derive(Args)]
struct LinkArgs {
    /// Hub processing time, microseconds (single-pair latency check).
    #[arg(long, requires_all = ["t_air_us", "t_proc_term_us"])]
    t_proc_hub_us: Option<f64>,
    /// Air transmission time, microseconds.
    #[arg(long)]
    t_air_us: Option<f64>,
    /// Terminal processing time, microseconds.
    #[arg(long)]
    t_proc_term_us: Option<f64>,
    /// Aggregate downstream rate to check, Mbit/s.
    #[arg(long, requires = "rate_us_mbps")]
    rate_ds_mbps: Option<f64>,
    /// Aggregate upstream rate to check, Mbit/s.
    #[arg(long)]
    rate_us_mbps: Option<f64>,
    /// Latency budget CSV
    /// (header `pair,direction,t_proc_hub_us,t_air_us,t_proc_terminal_us`).
    #[arg(long)]
    latency_csv: Option<PathBuf>,
    /// Rate budget CSV
    /// (header `pair,direction,r_proc_hub_mbps,r_air_mbps,r_proc_terminal_mbps`).
    #[arg(long, requires = "hub_rate_mbps")]
    rate_csv: Option<PathBuf>,
    /// Shared hub processor rate for aggregation, Mbit/s.
    #[arg(long)]
    hub_rate_mbps: Option<f64>,
}

#[derive(Args)]
struct SplitArgs {
    /// Technology id from the bundled catalog.
    #[arg(long, conflicts_with_all = ["bw_mbps", "latency_rtt_us"])]
    tech: Option<String>,
    /// Link distance for distance-priced transports, km.
    #[arg(long)]
    distance_km: Option<f64>,
    /// Offered bandwidth, Mbit/s (direct profile).
    #[arg(long, requires = "latency_rtt_us")]
    bw_mbps: Option<f64>,
    /// Offered round-trip latency, microseconds (direct profile).
    #[arg(long)]
    latency_rtt_us: Option<f64>,
    /// Range resolution: optimistic or strict.
    #[arg(long, default_value = "optimistic")]
    mode: String,
}

#[derive(Args)]
struct FairnessArgs {
    /// Single-column CSV of observations (header `value`).
    #[arg(long)]
    input: PathBuf,
    /// Interpret values as SNRs in dB and convert to linear scale first.
    #[arg(long, default_value_t = false)]
    snr_db: bool,
    /// Write the Lorenz curve to this two-column CSV.
    #[arg(long)]
    lorenz_out: Option<PathBuf>,
}

#[derive(Args)]
struct KpiArgs {
    /// Measurement trace CSV.
    #[arg(long)]
    input: PathBuf,
    /// Target scenario: broadband, massive_iot, ultra_reliable, high_speed.
    #[arg(long)]
    scenario: String,
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = Cli::parse();
    let source = match &cli.data_dir {
        Some(dir) => DataSource::dir(dir),
        None => DataSource::bundled(),
    };
    match run(&cli, &source) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, source: &DataSource) -> Result<u8> {
    match &cli.command {
        Command::Avail(args) => cmd_avail(args, cli.format),
        Command::Sim(args) => cmd_sim(args, cli.format),
        Command::Sync(args) => cmd_sync(args, cli.format),
        Command::Link(args) => cmd_link(args, cli.format),
        Command::Split(args) => cmd_split(args, cli.format, source),
        Command::Fairness(args) => cmd_fairness(args, cli.format),
        Command::Kpi(args) => cmd_kpi(args, cli.format, source),
        Command::ReproduceTables => cmd_reproduce_tables(cli.format, source),
    }
}

fn read_to_string(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("reading {}: {e}", path.display())))
}

/// Human-scale downtime with one decimal (days/hours/minutes/seconds/ms).
fn humanize_downtime(d: &DowntimePerYear) -> String {
    if d.days() >= 1.0 {
        format!("{:.1} days/year", d.days())
    } else if d.hours() >= 1.0 {
        format!("{:.1} hours/year", d.hours())
    } else if d.minutes() >= 1.0 {
        format!("{:.1} min/year", d.minutes())
    } else if d.seconds() >= 1.0 {
        format!("{:.1} s/year", d.seconds())
    } else {
        format!("{:.1} ms/year", d.milliseconds())
    }
}

// ---------------------------------------------------------------------------
// avail
// ---------------------------------------------------------------------------

fn cmd_avail(args: &AvailArgs, format: Format) -> Result<u8> {
    let spec = args.cluster.to_spec()?;
    let report = cluster_availability(&spec)?;
    let pct = report.availability.percent_string();
    let u = report.availability.unavailability();
    match format {
        Format::Table => {
            println!("availability_pct:   {pct}");
            println!("unavailability:     {u:e}");
            println!("nines:              {}", report.nines);
            println!("downtime_per_year:  {}", humanize_downtime(&report.downtime));
            println!("downtime_s:         {:e}", report.downtime.seconds());
        }
        Format::Csv => {
            println!(
                "mtbf_h,mttr_h,hubs,terminals,min_terminals,availability_pct,unavailability,nines,downtime_s_per_year"
            );
            println!(
                "{},{},{},{},{},{},{:e},{},{:e}",
                args.cluster.mtbf_h,
                args.cluster.mttr_h,
                args.cluster.hubs,
                args.cluster.terminals,
                args.cluster.min_terminals,
                pct,
                u,
                report.nines,
                report.downtime.seconds()
            );
        }
        Format::Json => {
            let value = json!({
                "availability_pct": pct,
                "unavailability": u,
                "nines": report.nines,
                "downtime_s_per_year": report.downtime.seconds(),
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// sim
// ---------------------------------------------------------------------------

fn cmd_sim(args: &SimArgs, format: Format) -> Result<u8> {
    let spec = args.cluster.to_spec()?;
    let cfg = SimConfig::new(spec, args.horizon_h, args.seed, args.replications)?
        .with_policy(RebalancePolicy::parse(&args.policy)?);
    let analytic = cluster_availability(&spec)?.availability.availability();
    let result = if let Some(trace_path) = &args.trace {
        let (result, trace) = simulate_with_trace(&cfg)?;
        let mut out = String::from("time_h,event,node_id,cluster_available,assignment\n");
        for row in &trace {
            out.push_str(&format!(
                "{:.6},{},{},{},{}\n",
                row.time_h,
                row.event,
                row.node_id,
                u8::from(row.cluster_available),
                row.assignment
            ));
        }
        std::fs::write(trace_path, out)
            .map_err(|e| Error::invalid(format!("writing {}: {e}", trace_path.display())))?;
        result
    } else {
        simulate(&cfg)?
    };
    match format {
        Format::Table => {
            println!("estimated_availability: {:.9}", result.estimated_availability);
            println!("stderr:                 {:.3e}", result.stderr);
            println!("analytic_availability:  {analytic:.9}");
            println!("available_time_h:       {:.3}", result.available_time_h);
            println!("event_count:            {}", result.event_count);
            println!("rebalance_count:        {}", result.rebalance_count);
            println!("hub_load_gini:          {:.6}", result.hub_load_gini);
        }
        Format::Csv => {
            println!(
                "estimated_availability,stderr,analytic_availability,available_time_h,event_count,rebalance_count,hub_load_gini"
            );
            println!(
                "{:.9},{:.3e},{analytic:.9},{:.3},{},{},{:.6}",
                result.estimated_availability,
                result.stderr,
                result.available_time_h,
                result.event_count,
                result.rebalance_count,
                result.hub_load_gini
            );
        }
        Format::Json => {
            let value = json!({
                "estimated_availability": result.estimated_availability,
                "stderr": result.stderr,
                "analytic_availability": analytic,
                "available_time_h": result.available_time_h,
                "event_count": result.event_count,
                "rebalance_count": result.rebalance_count,
                "hub_load_gini": result.hub_load_gini,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// sync
// ---------------------------------------------------------------------------

fn cmd_sync(args: &SyncArgs, format: Format) -> Result<u8> {
    // (check name, tau display, measured, limit, pass)
    let mut rows: Vec<(String, String, Option<f64>, f64, bool)> = Vec::new();
    let mut mask_verdict: Option<MaskVerdict> = None;

    if let Some(path) = &args.input {
        let kind = MaskKind::parse(&args.metric)?;
        let series = TieSeries::from_csv_str(&read_to_string(path)?)?;
        let series =
            if args.bypass_filter { series.assume_prefiltered() } else { lowpass_10hz(&series)? };
        let report = check_compliance(&series, kind)?;
        for row in &report.rows {
            rows.push((
                args.metric.clone(),
                format!("{:.6}", row.tau_s),
                row.measured_ns,
                row.limit_ns,
                row.pass,
            ));
        }
        mask_verdict = Some(report.verdict);
    }
    if let Some(ppm) = args.freq_offset_ppm {
        let check = check_frequency_accuracy(ppm)?;
        rows.push((
            "freq_accuracy_ppm".to_string(),
            String::new(),
            Some(check.measured),
            check.limit,
            check.pass,
        ));
    }
    if let Some(ns) = args.cf_error_ns {
        let check = check_cf_accuracy(ns)?;
        rows.push((
            "cf_accuracy_ns".to_string(),
            String::new(),
            Some(check.measured),
            check.limit,
            check.pass,
        ));
    }
    if rows.is_empty() && mask_verdict.is_none() {
        return Err(Error::invalid(
            "nothing to check: give --input, --freq-offset-ppm or --cf-error-ns",
        ));
    }

    let insufficient = mask_verdict == Some(MaskVerdict::InsufficientRecord);
    let all_pass = rows.iter().all(|r| r.4) && !insufficient;

    match format {
        Format::Table => {
            for (check, tau, measured, limit, pass) in &rows {
                let measured = measured.map_or("-".to_string(), |v| format!("{v:.4}"));
                let tau = if tau.is_empty() { "-".to_string() } else { tau.clone() };
                println!(
                    "{check:<18} tau={tau:<10} measured={measured:<12} limit={limit:<10.4} {}",
                    if *pass { "pass" } else { "FAIL" }
                );
            }
            if insufficient {
                println!("status: insufficient record for any observation interval");
            }
            println!("overall: {}", if all_pass { "pass" } else { "FAIL" });
        }
        Format::Csv => {
            println!("check,tau_s,measured,limit,pass");
            for (check, tau, measured, limit, pass) in &rows {
                let measured = measured.map_or(String::new(), |v| format!("{v}"));
                println!("{check},{tau},{measured},{limit},{}", u8::from(*pass));
            }
        }
        Format::Json => {
            let json_rows: Vec<_> = rows
                .iter()
                .map(|(check, tau, measured, limit, pass)| {
                    json!({
                        "check": check,
                        "tau_s": if tau.is_empty() { None } else { tau.parse::<f64>().ok() },
                        "measured": measured,
                        "limit": limit,
                        "pass": pass,
                    })
                })
                .collect();
            let value = json!({
                "rows": json_rows,
                "insufficient_record": insufficient,
                "pass": all_pass,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
    }
    Ok(u8::from(!all_pass))
}

// ---------------------------------------------------------------------------
// link
// ---------------------------------------------------------------------------

struct LinkRow {
    label: String,
    measured: f64,
    target: f64,
    pass: bool,
    margin: f64,
    note: String,
}

fn cmd_link(args: &LinkArgs, format: Format) -> Result<u8> {
    let mut rows: Vec<LinkRow> = Vec::new();

    if let (Some(h), Some(a), Some(t)) = (args.t_proc_hub_us, args.t_air_us, args.t_proc_term_us) {
        let budget = LatencyBudget::new(h * 1e-6, a * 1e-6, t * 1e-6, Direction::Downstream)?;
        let verdict = check_latency_target(pair_latency(&budget))?;
        rows.push(LinkRow {
            label: "pair_latency_s".to_string(),
            measured: verdict.measured,
            target: verdict.target,
            pass: verdict.pass,
            margin: verdict.margin,
            note: verdict.note.unwrap_or_default(),
        });
    }
    if let (Some(ds), Some(us)) = (args.rate_ds_mbps, args.rate_us_mbps) {
        let verdict = check_rate_target(ds * 1e6, us * 1e6)?;
        push_rate_rows(&mut rows, &verdict);
    }
    if let Some(path) = &args.latency_csv {
        for (pair, direction, budget) in parse_latency_csv(&read_to_string(path)?)? {
            let verdict = check_latency_target(pair_latency(&budget))?;
            rows.push(LinkRow {
                label: format!("latency_s[{pair}:{direction}]"),
                measured: verdict.measured,
                target: verdict.target,
                pass: verdict.pass,
                margin: verdict.margin,
                note: verdict.note.unwrap_or_default(),
            });
        }
    }
    if let (Some(path), Some(hub_mbps)) = (&args.rate_csv, args.hub_rate_mbps) {
        let budgets = parse_rate_csv(&read_to_string(path)?)?;
        let ds: Vec<RateBudget> = budgets
            .iter()
            .filter(|(_, d, _)| *d == Direction::Downstream)
            .map(|(_, _, b)| *b)
            .collect();
        let us: Vec<RateBudget> = budgets
            .iter()
            .filter(|(_, d, _)| *d == Direction::Upstream)
            .map(|(_, _, b)| *b)
            .collect();
        if ds.is_empty() || us.is_empty() {
            return Err(Error::invalid("rate CSV needs at least one ds and one us row"));
        }
        let hub = hub_mbps * 1e6;
        let verdict =
            check_rate_target(aggregate_cluster_rate(&ds, hub)?, aggregate_cluster_rate(&us, hub)?)?;
        push_rate_rows(&mut rows, &verdict);
    }
    if rows.is_empty() {
        return Err(Error::invalid(
            "nothing to evaluate: give latency components, rates, or a budget CSV",
        ));
    }

    let all_pass = rows.iter().all(|r| r.pass);
    match format {
        Format::Table => {
            for row in &rows {
                print!(
                    "{:<28} measured={:<14e} target={:<12e} margin={:<14e} {}",
                    row.label,
                    row.measured,
                    row.target,
                    row.margin,
                    if row.pass { "pass" } else { "FAIL" }
                );
                if row.note.is_empty() {
                    println!();
                } else {
                    println!("  ({})", row.note);
                }
            }
            println!("overall: {}", if all_pass { "pass" } else { "FAIL" });
        }
        Format::Csv => {
            println!("check,measured,target,pass,margin,note");
            for row in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    row.label,
                    row.measured,
                    row.target,
                    u8::from(row.pass),
                    row.margin,
                    row.note
                );
            }
        }
        Format::Json => {
            let json_rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "check": r.label,
                        "measured": r.measured,
                        "target": r.target,
                        "pass": r.pass,
                        "margin": r.margin,
                        "note": r.note,
                    })
                })
                .collect();
            let value = json!({ "rows": json_rows, "pass": all_pass });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
    }
    Ok(u8::from(!all_pass))
}

fn push_rate_rows(rows: &mut Vec<LinkRow>, verdict: &RateVerdict) {
    rows.push(LinkRow {
        label: "aggregate_rate_ds_bps".to_string(),
        measured: verdict.downstream.measured,
        target: verdict.downstream.target,
        pass: verdict.downstream.pass,
        margin: verdict.downstream.margin,
        note: String::new(),
    });
    rows.push(LinkRow {
        label: "aggregate_rate_us_bps".to_string(),
        measured: verdict.upstream.measured,
        target: verdict.upstream.target,
        pass: verdict.upstream.pass,
        margin: verdict.upstream.margin,
        note: String::new(),
    });
}

fn parse_direction(s: &str) -> Result<Direction> {
    match s {
        "ds" | "DS" => Ok(Direction::Downstream),
        "us" | "US" => Ok(Direction::Upstream),
        other => Err(Error::invalid(format!("direction must be ds or us, got '{other}'"))),
    }
}

fn parse_latency_csv(text: &str) -> Result<Vec<(String, String, LatencyBudget)>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::config(format!("latency CSV: {e}")))?;
    if headers.iter().collect::<Vec<_>>()
        != ["pair", "direction", "t_proc_hub_us", "t_air_us", "t_proc_terminal_us"]
    {
        return Err(Error::config(
            "latency CSV header must be pair,direction,t_proc_hub_us,t_air_us,t_proc_terminal_us",
        ));
    }
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::config(format!("latency CSV row {}: {e}", i + 2)))?;
        let get = |idx: usize| row.get(idx).unwrap_or("").to_string();
        let parse = |idx: usize| -> Result<f64> {
            get(idx)
                .parse()
                .map_err(|_| Error::config(format!("latency CSV row {}: bad number", i + 2)))
        };
        let direction = parse_direction(&get(1))?;
        out.push((
            get(0),
            get(1),
            LatencyBudget::new(parse(2)? * 1e-6, parse(3)? * 1e-6, parse(4)? * 1e-6, direction)?,
        ));
    }
    if out.is_empty() {
        return Err(Error::invalid("latency CSV has no rows"));
    }
    Ok(out)
}

fn parse_rate_csv(text: &str) -> Result<Vec<(String, Direction, RateBudget)>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::config(format!("rate CSV: {e}")))?;
    if headers.iter().collect::<Vec<_>>()
        != ["pair", "direction", "r_proc_hub_mbps", "r_air_mbps", "r_proc_terminal_mbps"]
    {
        return Err(Error::config(
            "rate CSV header must be pair,direction,r_proc_hub_mbps,r_air_mbps,r_proc_terminal_mbps",
        ));
    }
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::config(format!("rate CSV row {}: {e}", i + 2)))?;
        let get = |idx: usize| row.get(idx).unwrap_or("").to_string();
        let parse = |idx: usize| -> Result<f64> {
            get(idx)
                .parse()
                .map_err(|_| Error::config(format!("rate CSV row {}: bad number", i + 2)))
        };
        let direction = parse_direction(&get(1))?;
        out.push((
            get(0),
            direction,
            RateBudget::new(parse(2)? * 1e6, parse(3)? * 1e6, parse(4)? * 1e6, direction)?,
        ));
    }
    if out.is_empty() {
        return Err(Error::invalid("rate CSV has no rows"));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// split
// ---------------------------------------------------------------------------

fn cmd_split(args: &SplitArgs, format: Format, source: &DataSource) -> Result<u8> {
    let table = source.split_table()?;
    let advice = source.advice()?;
    let mode = Mode::parse(&args.mode)?;
    let verdict = if let Some(tech) = &args.tech {
        let catalog = source.technology_catalog()?;
        advise(&table, &advice, &catalog, tech, args.distance_km, mode)?
    } else if let (Some(bw), Some(latency)) = (args.bw_mbps, args.latency_rtt_us) {
        let profile = FronthaulProfile::new(bw * 1e6, latency * 1e-6)?;
        feasible_splits(&table, &advice, &profile, mode)?
    } else {
        return Err(Error::invalid("give --tech or both --bw-mbps and --latency-rtt-us"));
    };

    match format {
        Format::Table => {
            for row in &verdict.rows {
                println!(
                    "split {} {:<10} need bw>={:<10e} rtt<={:<10e} {}",
                    row.split_id,
                    row.name,
                    row.required_bw_bps,
                    row.required_latency_s,
                    if row.pass { "pass" } else { "FAIL" }
                );
            }
            match verdict.max_split {
                Some(id) => println!("max_split: {id}"),
                None => println!("max_split: none (no split feasible)"),
            }
            println!("advisory [{}]: {}", verdict.advisory.split_point, verdict.advisory.summary);
            if !verdict.advisory.pros.is_empty() {
                println!("  pros: {}", verdict.advisory.pros);
            }
            if !verdict.advisory.cons.is_empty() {
                println!("  cons: {}", verdict.advisory.cons);
            }
        }
        Format::Csv => {
            println!(
                "split_id,name,required_bw_bps,required_latency_s,offered_bw_bps,offered_latency_s,pass"
            );
            for row in &verdict.rows {
                println!(
                    "{},{},{},{},{},{},{}",
                    row.split_id,
                    row.name,
                    row.required_bw_bps,
                    row.required_latency_s,
                    row.offered_bw_bps,
                    row.offered_latency_s,
                    u8::from(row.pass)
                );
            }
        }
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&verdict).expect("serializable"));
        }
    }
    Ok(u8::from(verdict.max_split.is_none()))
}

// ---------------------------------------------------------------------------
// fairness
// ---------------------------------------------------------------------------

fn cmd_fairness(args: &FairnessArgs, format: Format) -> Result<u8> {
    let text = read_to_string(&args.input)?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::config(format!("values CSV: {e}")))?;
    if headers.iter().collect::<Vec<_>>() != ["value"] {
        return Err(Error::config("values CSV header must be a single `value` column"));
    }
    let mut values = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::config(format!("values CSV row {}: {e}", i + 2)))?;
        let v: f64 = row
            .get(0)
            .unwrap_or("")
            .parse()
            .map_err(|_| Error::config(format!("values CSV row {}: bad value", i + 2)))?;
        values.push(if args.snr_db { fairness::snr_db_to_linear(v) } else { v });
    }
    let obs = ObservationSet::new(values)?;
    let g = if args.snr_db { gini_snr(&obs)? } else { gini(&obs)? };
    let curve = lorenz(&obs)?;
    if let Some(path) = &args.lorenz_out {
        let mut out = String::from("population_fraction,value_fraction\n");
        for (p, v) in curve.points() {
            out.push_str(&format!("{p},{v}\n"));
        }
        std::fs::write(path, out)
            .map_err(|e| Error::invalid(format!("writing {}: {e}", path.display())))?;
    }
    match format {
        Format::Table => {
            println!("G={g:.12}");
            println!("n={}", obs.len());
            println!("gini_from_lorenz={:.12}", gini_from_lorenz(&curve)?);
        }
        Format::Csv => {
            println!("gini,n");
            println!("{g:.12},{}", obs.len());
        }
        Format::Json => {
            let value = json!({
                "gini": g,
                "n": obs.len(),
                "metric": if args.snr_db { "gini_snr" } else { "gini" },
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// kpi
// ---------------------------------------------------------------------------

fn cmd_kpi(args: &KpiArgs, format: Format, source: &DataSource) -> Result<u8> {
    let scenario = Scenario::parse(&args.scenario)?;
    let targets = source.kpi_targets()?;
    let records = kpi::trace_from_csv(&read_to_string(&args.input)?)?;
    let measurements = kpi::measurements_from_trace(&records)?;
    let report = check_targets(&targets, scenario, &measurements)?;

    let status_str = |s: KpiStatus| match s {
        KpiStatus::Pass => "pass",
        KpiStatus::Fail => "FAIL",
        KpiStatus::NotEvaluated => "not_evaluated",
        KpiStatus::Informational => "info",
    };
    match format {
        Format::Table => {
            println!("scenario: {}", report.scenario.name());
            for row in &report.rows {
                let measured = row.measured.map_or("-".to_string(), |v| format!("{v}"));
                let threshold = row.threshold.map_or("-".to_string(), |v| format!("{v}"));
                println!(
                    "{:<28} measured={measured:<22} threshold={threshold:<12} {:<14} {}",
                    row.kpi,
                    status_str(row.status),
                    row.note
                );
            }
            println!("overall: {}", if report.pass { "pass" } else { "FAIL" });
        }
        Format::Csv => {
            println!("kpi,measured,threshold,unit,status,note");
            for row in &report.rows {
                println!(
                    "{},{},{},{},{},\"{}\"",
                    row.kpi,
                    row.measured.map_or(String::new(), |v| format!("{v}")),
                    row.threshold.map_or(String::new(), |v| format!("{v}")),
                    row.unit,
                    status_str(row.status),
                    row.note
                );
            }
        }
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        }
    }
    Ok(u8::from(!report.pass))
}

// ---------------------------------------------------------------------------
// reproduce-tables
// ---------------------------------------------------------------------------

fn cmd_reproduce_tables(format: Format, source: &DataSource) -> Result<u8> {
    let diffs = tables::diff_all(source)?;
    let all_match = diffs.iter().all(|d| d.matches());
    match format {
        Format::Table => {
            for diff in &diffs {
                println!("# {}", diff.name);
                print!("{}", diff.generated);
                println!(
                    "status: {}",
                    if diff.matches() { "match" } else { "MISMATCH vs expected" }
                );
                println!();
            }
            println!(
                "note: dual-hub availability percentages are computed from the composition \
                 formulas; the originally published strings for that column are internally \
                 inconsistent with their own downtime column and are not reproduced."
            );
            println!("overall: {}", if all_match { "pass" } else { "FAIL" });
        }
        Format::Csv => {
            println!("table,status");
            for diff in &diffs {
                println!("{},{}", diff.name, if diff.matches() { "match" } else { "mismatch" });
            }
        }
        Format::Json => {
            let rows: Vec<_> = diffs
                .iter()
                .map(|d| json!({ "table": d.name, "match": d.matches(), "generated": d.generated }))
                .collect();
            let value = json!({ "tables": rows, "pass": all_match });
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        }
    }
    Ok(u8::from(!all_match))
}
