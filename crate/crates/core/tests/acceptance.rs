//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the checked tolerances. C12 (byte-identical CLI output)
//! lives in the CLI crate's acceptance tests.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use backhaul_core::data::DataSource;
use backhaul_core::fairness::{gini, gini_from_lorenz, lorenz, ObservationSet};
use backhaul_core::kpi::{check_targets, measurements_from_trace, trace_from_csv, Scenario};
use backhaul_core::link::{
    check_latency_target, check_rate_target, pair_latency, Direction, LatencyBudget,
};
use backhaul_core::reliability::{
    brute_force_k_of_n, cluster_availability, eval_expr, k_of_n_availability, Availability,
    ClusterSpec, HubRedundancy, NodeReliability, ReliabilityExpr,
};
use backhaul_core::sim::{simulate, SimConfig};
use backhaul_core::split::{feasible_splits, FronthaulProfile, Mode};
use backhaul_core::syncmask::{
    check_compliance, mtie_mask_g8262, tdev_mask_g8262, MaskKind, MaskVerdict, TieSeries,
    DEFAULT_SAMPLE_INTERVAL_S,
};
use backhaul_core::tables;

fn avail(a: f64) -> Availability {
    Availability::from_availability(a).unwrap()
}

#[test]
fn c01_availability_downtime_ladder() {
    let start = Instant::now();
    let generated = tables::availability_downtime_csv();
    let expected = DataSource::bundled().expected_table("availability_downtime").unwrap();
    assert_eq!(generated, expected, "ladder rows must match the reference file exactly");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    println!("[PASS] C1: availability->downtime ladder reproduced exactly in {elapsed:?}");
}

#[test]
fn c02_parallel_redundancy_example() {
    let component = NodeReliability::new(99.0, 1.0).unwrap();
    let pair = eval_expr(&ReliabilityExpr::Parallel(vec![
        ReliabilityExpr::Unit(component),
        ReliabilityExpr::Unit(component),
    ]))
    .unwrap();
    assert!((pair.availability() - 0.9999).abs() < 1e-12);
    let minutes = backhaul_core::reliability::downtime_per_year(pair).minutes();
    assert_eq!(minutes.trunc() as u64, 52, "got {minutes} min");
    let generated = tables::hub_redundancy_csv();
    let expected = DataSource::bundled().expected_table("hub_redundancy").unwrap();
    assert_eq!(generated, expected);
    println!("[PASS] C2: two 99% components in parallel -> 99.99%, 52 min/year");
}

#[test]
fn c03_sector_single_hub_column() {
    let expected = [
        (3.0, "99.9993150731844", 3.6),
        (12.0, "99.9972603490295", 14.4),
        (24.0, "99.9945208481563", 28.8),
        (72.0, "99.9835643451431", 86.4),
    ];
    for (mttr, pct_string, downtime_min) in expected {
        let spec = ClusterSpec::new(
            HubRedundancy::Single,
            3,
            1,
            NodeReliability::new(438_000.0, mttr).unwrap(),
        )
        .unwrap();
        let report = cluster_availability(&spec).unwrap();
        assert_eq!(
            report.availability.percent_string(),
            pct_string,
            "MTTR {mttr} h: 13-decimal availability mismatch"
        );
        let minutes = report.downtime.minutes();
        assert!(
            (minutes - downtime_min).abs() / downtime_min < 0.005,
            "MTTR {mttr} h: downtime {minutes} min vs {downtime_min} (0.5% budget)"
        );
    }
    println!("[PASS] C3: single-hub availability strings exact to 13 decimals, downtime within 0.5%");
}

#[test]
fn c04_sector_dual_hub_downtime_column() {
    // Reference downtime displays at one decimal of ms; comparison applies
    // the same rounding, then a 0.5% relative budget. The published
    // percentage strings for this column are not reproduced: each drops one
    // digit and contradicts its own downtime column (documented in the
    // reproduce-tables output and the reference-table comments).
    let expected_ms = [(3.0, 1.5), (12.0, 23.7), (24.0, 94.7), (72.0, 852.0)];
    for (mttr, reference_ms) in expected_ms {
        let spec = ClusterSpec::new(
            HubRedundancy::Dual,
            3,
            1,
            NodeReliability::new(438_000.0, mttr).unwrap(),
        )
        .unwrap();
        let report = cluster_availability(&spec).unwrap();
        let rounded = (report.downtime.milliseconds() * 10.0).round() / 10.0;
        assert!(
            (rounded - reference_ms).abs() / reference_ms < 0.005,
            "MTTR {mttr} h: downtime {rounded} ms vs {reference_ms} ms (0.5% after 0.1 ms rounding)"
        );
    }
    let generated = tables::sector_availability_csv();
    let expected = DataSource::bundled().expected_table("sector_availability").unwrap();
    assert_eq!(generated, expected);
    println!("[PASS] C4: dual-hub downtime 1.5/23.7/94.7/852 ms within 0.5% (display rounding applied)");
}

#[test]
fn c05_k_of_n_oracle_equivalence() {
    let start = Instant::now();
    let mut checked = 0u32;
    for n in 1..=12u32 {
        for m in 1..=n {
            for tenth in 0..=10u32 {
                let a = avail(tenth as f64 / 10.0);
                let closed = k_of_n_availability(n, m, a).unwrap().availability();
                let brute = brute_force_k_of_n(n, m, a).unwrap().availability();
                assert!(
                    (closed - brute).abs() <= 1e-12,
                    "n={n} m={m} A={}: closed {closed} vs enumeration {brute}",
                    a.availability()
                );
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    println!("[PASS] C5: closed form == 2^N enumeration at 1e-12 over {checked} cases in {elapsed:?}");
}

#[test]
fn c06_monte_carlo_convergence() {
    let start = Instant::now();
    // Grid: hubs x node availability x (N, M); 20 cluster shapes, 5 seeds
    // each, every run 100 replications x 100_000 h = 1e7 simulated hours
    // (enough that even the rare both-hubs-down regime produces a couple of
    // outage events per replication, keeping the stderr estimate sane).
    let node_params = [(900.0, 100.0), (990.0, 10.0)]; // A = 0.9, 0.99
    let shapes = [(1u32, 1u32), (3, 1), (3, 3), (5, 1), (5, 5)];
    let mut runs = 0u32;
    let mut misses = 0u32;
    for hubs in [HubRedundancy::Single, HubRedundancy::Dual] {
        for (mtbf, mttr) in node_params {
            for (n, m) in shapes {
                let spec =
                    ClusterSpec::new(hubs, n, m, NodeReliability::new(mtbf, mttr).unwrap())
                        .unwrap();
                let analytic = cluster_availability(&spec).unwrap().availability.availability();
                for seed in 0..5u64 {
                    let cfg = SimConfig::new(spec, 100_000.0, 0xACCE55 + seed, 100).unwrap();
                    let result = simulate(&cfg).unwrap();
                    runs += 1;
                    assert!(result.stderr > 0.0);
                    if (result.estimated_availability - analytic).abs() > 3.0 * result.stderr {
                        misses += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(runs, 100);
    assert!(
        misses <= 1,
        "{misses}/100 seeded runs outside 3 stderr (budget: 1, i.e. >=99% within)"
    );
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}, budget 2 min");
    println!(
        "[PASS] C6: {}/100 seeded 1e7-hour runs within 3 stderr of the closed form in {elapsed:?}",
        runs - misses
    );
}

#[test]
fn c07_sync_masks_and_compliance() {
    // Breakpoint continuity.
    assert_eq!(mtie_mask_g8262(1.0).unwrap(), 40.0 * 1.0f64.powf(0.1));
    let left = 40.0 * 100.0f64.powf(0.1);
    let right = 25.25 * 100.0f64.powf(0.2);
    assert!((right - left).abs() / left < 1e-3, "MTIE breakpoint at 100 s off by >0.1%");
    assert_eq!(tdev_mask_g8262(25.0).unwrap(), 3.2);
    assert!((0.64 * 25.0f64.sqrt() - 3.2).abs() < 1e-12);
    assert_eq!(tdev_mask_g8262(100.0).unwrap(), 0.64 * 100.0f64.sqrt());
    assert_eq!(tdev_mask_g8262(100.0).unwrap(), 6.4);
    // Point values.
    assert_eq!(mtie_mask_g8262(0.5).unwrap(), 40.0);
    assert_eq!(tdev_mask_g8262(10.0).unwrap(), 3.2);
    // Constant record passes both masks.
    let constant = TieSeries::new(DEFAULT_SAMPLE_INTERVAL_S, vec![2.0; 40_000])
        .unwrap()
        .assume_prefiltered();
    assert_eq!(check_compliance(&constant, MaskKind::Mtie).unwrap().verdict, MaskVerdict::Pass);
    assert_eq!(check_compliance(&constant, MaskKind::Tdev).unwrap().verdict, MaskVerdict::Pass);
    // A 100 ns step breaks the MTIE mask (limit < 63.5 ns up to 100 s).
    let mut stepped = vec![0.0; 600];
    stepped.extend(vec![100.0; 600]);
    let stepped = TieSeries::new(DEFAULT_SAMPLE_INTERVAL_S, stepped).unwrap().assume_prefiltered();
    assert_eq!(check_compliance(&stepped, MaskKind::Mtie).unwrap().verdict, MaskVerdict::Fail);
    println!("[PASS] C7: mask breakpoints, 40 ns @ 0.5 s, 3.2 ns @ 10 s, constant pass, 100 ns step fail");
}

#[test]
fn c08_gini_property_suite() {
    // Worked examples, exact.
    let g = |vals: &[f64]| gini(&ObservationSet::new(vals.to_vec()).unwrap()).unwrap();
    assert_eq!(g(&[5.0, 5.0, 5.0, 5.0]), 0.0);
    assert_eq!(g(&[0.0, 1.0]), 0.5);
    assert_eq!(g(&[0.0, 0.0, 0.0, 7.0]), 0.75);

    let mut rng = ChaCha12Rng::seed_from_u64(0x61169);
    for case in 0..1000u32 {
        let n = rng.gen_range(1..=200usize);
        let mut values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1000.0)).collect();
        if values.iter().sum::<f64>() == 0.0 {
            values[0] = 1.0;
        }
        let obs = ObservationSet::new(values.clone()).unwrap();
        let base = gini(&obs).unwrap();

        // Bound 0 <= G <= (n-1)/n.
        assert!(base >= 0.0, "case {case}");
        assert!(base <= (n as f64 - 1.0) / n as f64 + 1e-12, "case {case}");

        // Scale invariance.
        let c = rng.gen_range(1e-3..1e3);
        let scaled: Vec<f64> = values.iter().map(|v| v * c).collect();
        let g_scaled = gini(&ObservationSet::new(scaled).unwrap()).unwrap();
        assert!((base - g_scaled).abs() <= 1e-12, "case {case}: scale");

        // Permutation invariance.
        let mut reversed = values.clone();
        reversed.reverse();
        let g_rev = gini(&ObservationSet::new(reversed).unwrap()).unwrap();
        assert!((base - g_rev).abs() <= 1e-12, "case {case}: permutation");

        // Replication invariance.
        let mut doubled = values.clone();
        doubled.extend_from_slice(&values);
        let g_doubled = gini(&ObservationSet::new(doubled).unwrap()).unwrap();
        assert!((base - g_doubled).abs() <= 1e-12, "case {case}: replication");

        // Lorenz route agrees.
        let via_curve = gini_from_lorenz(&lorenz(&obs).unwrap()).unwrap();
        assert!((base - via_curve).abs() <= 1e-12, "case {case}: lorenz route");
    }
    println!("[PASS] C8: Gini invariances, bounds and Lorenz-route agreement at 1e-12 over 1000 inputs");
}

#[test]
fn c09_split_advisor_examples_and_invariants() {
    let src = DataSource::bundled();
    let table = src.split_table().unwrap();
    let advice = src.advice().unwrap();

    let verdict = feasible_splits(
        &table,
        &advice,
        &FronthaulProfile::new(5e9, 250e-6).unwrap(),
        Mode::Optimistic,
    )
    .unwrap();
    assert_eq!(verdict.max_split, Some(6));

    let verdict = feasible_splits(
        &table,
        &advice,
        &FronthaulProfile::new(200e6, 6e-3).unwrap(),
        Mode::Optimistic,
    )
    .unwrap();
    assert_eq!(verdict.max_split, Some(3));

    let verdict = feasible_splits(
        &table,
        &advice,
        &FronthaulProfile::new(100e6, 20e-3).unwrap(),
        Mode::Optimistic,
    )
    .unwrap();
    assert_eq!(verdict.max_split, None);

    // Random sweep: prefix property and dominance monotonicity.
    let mut rng = ChaCha12Rng::seed_from_u64(0x5971);
    for _ in 0..1000 {
        let bw = 10f64.powf(rng.gen_range(6.0..10.0));
        let latency = 10f64.powf(rng.gen_range(-6.0..-1.0));
        let profile = FronthaulProfile::new(bw, latency).unwrap();
        for mode in [Mode::Optimistic, Mode::Strict] {
            let v = feasible_splits(&table, &advice, &profile, mode).unwrap();
            let expected: Vec<u8> = (1..=v.feasible.len() as u8).collect();
            assert_eq!(v.feasible, expected, "feasible set must be a prefix");
            let better =
                FronthaulProfile::new(bw * rng.gen_range(1.0..10.0), latency * rng.gen_range(0.1..1.0))
                    .unwrap();
            let vb = feasible_splits(&table, &advice, &better, mode).unwrap();
            assert!(
                v.feasible.iter().all(|id| vb.feasible.contains(id)),
                "more bandwidth / less latency lost a split"
            );
        }
    }
    println!("[PASS] C9: advisor examples (6 / 3 / none) and prefix+dominance over 1000 profiles");
}

#[test]
fn c10_link_targets() {
    let budget =
        LatencyBudget::new(0.3e-3, 0.4e-3, 0.3e-3, Direction::Downstream).unwrap();
    let verdict = check_latency_target(pair_latency(&budget)).unwrap();
    assert!(verdict.pass, "0.3+0.4+0.3 ms must meet the 1 ms target");

    assert!(check_rate_target(2.5e9, 2.0e9).unwrap().pass, "boundary rates must pass");
    let v = check_rate_target(2.4e9, 2.0e9).unwrap();
    assert!(!v.pass && !v.downstream.pass, "2.4 Gbit/s downstream must fail");
    let v = check_rate_target(2.5e9, 1.0e9).unwrap();
    assert!(!v.pass && v.downstream.pass && !v.upstream.pass, "1.0 Gbit/s upstream must fail");
    println!("[PASS] C10: 1 ms latency sum target and 2.5/2.0 Gbit/s rate thresholds behave exactly");
}

#[test]
fn c11_kpi_boundary_trace() {
    let targets = DataSource::bundled().kpi_targets().unwrap();
    let trace = |delivered: u64, in_deadline: u64| {
        format!(
            "user_id,cell_id,bits_delivered,sent_packets,delivered_packets,delivered_in_deadline,active_time_s,energy_j\n\
             u1,c1,1000000000,10000,{delivered},{in_deadline},100.0,\n"
        )
    };
    // Exactly at the boundaries: reliability 95%, loss 5%.
    let records = trace_from_csv(&trace(9500, 9500)).unwrap();
    let report =
        check_targets(&targets, Scenario::Broadband, &measurements_from_trace(&records).unwrap())
            .unwrap();
    assert!(report.pass, "boundary trace must pass: {report:?}");

    // Reliability 1% worse (0.9405) flips the verdict.
    let records = trace_from_csv(&trace(9500, 9405)).unwrap();
    let report =
        check_targets(&targets, Scenario::Broadband, &measurements_from_trace(&records).unwrap())
            .unwrap();
    assert!(!report.pass, "degraded reliability must fail");

    // Loss 1% worse (0.0505) flips the verdict.
    let records = trace_from_csv(&trace(9495, 9495)).unwrap();
    let report =
        check_targets(&targets, Scenario::Broadband, &measurements_from_trace(&records).unwrap())
            .unwrap();
    assert!(!report.pass, "degraded loss ratio must fail");
    println!("[PASS] C11: broadband trace passes at the exact 95%/5% boundaries and fails 1% beyond");
}
