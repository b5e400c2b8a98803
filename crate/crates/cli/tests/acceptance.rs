//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.
//!
//! Run with `cargo test --test acceptance`. Worker count follows
//! `INTSNN_WORKERS` (default: all cores).

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use intsnn_core::dynamics::{
    check_detection, enumerate_state_graph, state_space_size, DEFAULT_STATE_BUDGET,
};
use intsnn_core::metrics::{
    firing_rate, median, pseudo_rank, summarize, summarize_group, MetricsRecord,
};
use intsnn_core::oracles::raster_rank_gauss;
use intsnn_core::sweep::{build_network, run_cell, run_focused, run_grid};
use intsnn_core::{
    leak_shift, CycleReport, IntegerDomain, Network, OverflowMode, ResetMode, Signedness,
    SpikeRaster, SweepGrid, WeightMatrix,
};

// Pinned tolerances.
const C1_BUDGET: Duration = Duration::from_secs(10);
const C2_BAND: (f64, f64) = (0.25, 0.55);
const C2_MAX_STD: f64 = 0.15;
const C2_BUDGET: Duration = Duration::from_secs(30);
const C3_MAX_SPREAD: f64 = 0.05;
const C4_NETWORKS: usize = 50;
const C4_BUDGET: Duration = Duration::from_secs(60);
const C5_PERIOD_BAND: (f64, f64) = (2.0, 64.0);
const C7_CASES: u32 = 10_000;
const C7_BUDGET: Duration = Duration::from_secs(60);
const C8_RUNS: usize = 7344;
const C8_BUDGET: Duration = Duration::from_secs(15 * 60);

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn workers() -> usize {
    std::env::var("INTSNN_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn verdict(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

fn quiescence_transition() -> Verdict {
    let grid = SweepGrid::focused((1..=16).collect());
    let (result, elapsed) = timed(|| run_focused(&grid, workers()));
    let result = result.map_err(|e| e.to_string())?;
    let rates = |bits: u32| -> Vec<f64> {
        result
            .records
            .iter()
            .filter(|r| r.bits == bits)
            .map(|r| r.mean_firing_rate)
            .collect()
    };
    let mean = |bits: u32| {
        result
            .summary
            .iter()
            .find(|s| s.bits == bits)
            .unwrap()
            .mean_firing_rate
    };
    let silent = rates(1).iter().chain(rates(2).iter()).all(|&r| r == 0.0);
    let active = (4..=16).all(|b| rates(b).iter().all(|&r| r > 0.0));
    let (m3, m8) = (mean(3), mean(8));
    let between = 0.0 < m3 && m3 < m8;
    verdict(
        silent && active && between && elapsed < C1_BUDGET,
        format!(
            "bits 1,2 rate {}/{}, bits>=4 all seeds positive: {active}, bits 3 mean {m3:.4} vs bits 8 mean {m8:.4}, {:.2?} (limit {C1_BUDGET:?})",
            mean(1),
            mean(2),
            elapsed
        ),
    )
}

fn focused_active_bits() -> Result<(intsnn_core::sweep::FocusedResult, Duration), String> {
    let grid = SweepGrid::focused(vec![4, 8, 16]);
    let (result, elapsed) = timed(|| run_focused(&grid, workers()));
    Ok((result.map_err(|e| e.to_string())?, elapsed))
}

fn active_band() -> Verdict {
    let (result, elapsed) = focused_active_bits()?;
    let mut ok = elapsed < C2_BUDGET;
    let mut parts = Vec::new();
    for row in &result.summary {
        let in_band = (C2_BAND.0..=C2_BAND.1).contains(&row.mean_firing_rate);
        ok &= in_band && row.std_firing_rate <= C2_MAX_STD;
        parts.push(format!(
            "bits {}: {:.4} +/- {:.4}",
            row.bits, row.mean_firing_rate, row.std_firing_rate
        ));
    }
    let weights = SweepGrid::focused(vec![8]).weight_range;
    verdict(
        ok,
        format!(
            "{} (band [{}, {}], std <= {C2_MAX_STD}, weights {weights:?}), {elapsed:.2?}",
            parts.join(", "),
            C2_BAND.0,
            C2_BAND.1
        ),
    )
}

fn plateau_spread(grid: SweepGrid) -> Result<f64, String> {
    let records = run_grid(&grid, workers()).map_err(|e| e.to_string())?;
    let summary = summarize(&records).map_err(|e| e.to_string())?;
    Ok(spread(
        &summary
            .iter()
            .map(|r| r.mean_firing_rate)
            .collect::<Vec<_>>(),
    ))
}

fn plateau_flatness() -> Verdict {
    let k1 = SweepGrid {
        densities: vec![0.5],
        bit_widths: (4..=16).collect(),
        ..SweepGrid::global()
    };
    let k8 = SweepGrid {
        bit_widths: (4..=16).collect(),
        ..SweepGrid::variant_k8()
    };
    let s1 = plateau_spread(k1)?;
    let s8 = plateau_spread(k8)?;
    verdict(
        s1 <= C3_MAX_SPREAD && s8 > s1,
        format!("k=1/density 0.5 spread {s1:.4} (limit {C3_MAX_SPREAD}), k=8/density 0.2 spread {s8:.4}"),
    )
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut states = 0usize;
    for i in 0..C4_NETWORKS {
        let n = [1, 2, 3][i % 3];
        let bits = 1 + ((i / 3) % 4) as u32;
        let mut grid = SweepGrid {
            sizes: vec![n],
            densities: vec![0.5],
            bit_widths: vec![bits],
            seeds_per_cell: 1,
            master_seed: 1000 + i as u64,
            ..SweepGrid::global()
        };
        match i % 4 {
            1 => {
                grid.signedness = Signedness::Signed;
                grid.overflow_mode = OverflowMode::Wrap;
            }
            2 => grid.reset_mode = ResetMode::SubtractThreshold,
            _ => {}
        }
        let cell = grid.cell(0).unwrap();
        let net = build_network(&grid, &cell).map_err(|e| e.to_string())?;
        let graph = enumerate_state_graph(&net, DEFAULT_STATE_BUDGET)
            .map_err(|e| format!("network {i}: {e}"))?;
        let basins: usize = graph.attractors().iter().map(|a| a.basin_size).sum();
        if graph.state_count() as u128 != state_space_size(&net) || basins != graph.state_count() {
            return Err(format!(
                "network {i}: basins sum to {basins} of {} states",
                graph.state_count()
            ));
        }
        let check = check_detection(&graph).map_err(|e| e.to_string())?;
        if !check.passed() {
            return Err(format!(
                "network {i}: {} mismatches, first {:?}",
                check.mismatches.len(),
                check.mismatches[0]
            ));
        }
        states += check.states_checked;
    }
    let elapsed = start.elapsed();
    verdict(
        elapsed < C4_BUDGET,
        format!("{C4_NETWORKS} networks, {states} start states, all exact, {elapsed:.2?} (limit {C4_BUDGET:?})"),
    )
}

fn cycle_plausibility() -> Verdict {
    let (result, _) = focused_active_bits()?;
    let mut ok = true;
    let mut parts = Vec::new();
    for row in &result.summary {
        let med = row.median_cycle;
        ok &= med.is_some_and(|m| (C5_PERIOD_BAND.0..=C5_PERIOD_BAND.1).contains(&m));
        parts.push(format!(
            "bits {}: median {} censored {:.2}",
            row.bits,
            med.map_or("n/a".into(), |m| m.to_string()),
            row.censor_fraction
        ));
    }
    // Even-count medians average the middle pair.
    let mut a = result.records[0].clone();
    let mut b = a.clone();
    a.cycle = CycleReport::Detected {
        transient: 0,
        period: 4,
    };
    b.cycle = CycleReport::Detected {
        transient: 3,
        period: 5,
    };
    let pair = summarize_group(a.bits, &[&a, &b]).map_err(|e| e.to_string())?;
    let half = median(&[4, 5]) == Some(4.5) && pair.median_cycle == Some(4.5);
    verdict(
        ok && half,
        format!(
            "{} (band [{}, {}]), even-count rule {{4,5}} -> {:?}",
            parts.join(", "),
            C5_PERIOD_BAND.0,
            C5_PERIOD_BAND.1,
            pair.median_cycle
        ),
    )
}

fn intsnn(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_intsnn"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "intsnn {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn determinism() -> Verdict {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    let cfg = dir.join("grid.conf");
    fs::write(
        &cfg,
        "sizes = 30, 64\ndensities = 0.2, 0.5\nbit_widths = 1..16\nseeds_per_cell = 2\n",
    )
    .map_err(|e| e.to_string())?;
    let p = |s: &str| dir.join(s).to_string_lossy().into_owned();
    intsnn(&[
        "--config",
        &p("grid.conf"),
        "--no-figures",
        "-o",
        &p("first"),
        "sweep",
    ])?;
    let manifest = p("first/manifest.json");
    intsnn(&[
        "--no-figures",
        "-o",
        &p("a"),
        "--workers",
        "1",
        "sweep",
        "--manifest",
        &manifest,
    ])?;
    intsnn(&[
        "--no-figures",
        "-o",
        &p("b"),
        "sweep",
        "--manifest",
        &manifest,
    ])?;
    let mut identical = true;
    for file in ["results.csv", "summary.csv"] {
        let first = read(&dir.join("first").join(file))?;
        identical &=
            first == read(&dir.join("a").join(file))? && first == read(&dir.join("b").join(file))?;
    }

    let text = String::from_utf8(read(&dir.join("a/results.csv"))?).map_err(|e| e.to_string())?;
    let rows: Vec<&str> = text.lines().skip(1).collect();
    let grid =
        intsnn_core::Manifest::from_json(&String::from_utf8_lossy(&read(Path::new(&manifest))?))
            .map_err(|e| e.to_string())?
            .grid;
    let picks = [0, 1, 37, 64, 101, rows.len() - 1];
    let mut standalone = true;
    for &id in &picks {
        let cell = grid.cell(id).unwrap();
        let single = SweepGrid {
            sizes: vec![cell.n],
            densities: vec![cell.density],
            bit_widths: vec![cell.bits],
            seeds_per_cell: cell.seed_index + 1,
            ..grid.clone()
        };
        let mut rec =
            run_cell(&single, &single.cell(cell.seed_index).unwrap()).map_err(|e| e.to_string())?;
        rec.run_id = id;
        standalone &= rec.csv_row() == rows[id];
    }

    // The same cell through the simulate subcommand.
    let cell = grid.cell(37).unwrap();
    let (n, d, bits, seed) = (
        cell.n.to_string(),
        cell.density.to_string(),
        cell.bits.to_string(),
        cell.seed_index.to_string(),
    );
    intsnn(&[
        "--config",
        &p("grid.conf"),
        "--no-figures",
        "-o",
        &p("sim"),
        "simulate",
        "--n",
        &n,
        "--density",
        &d,
        "--bits",
        &bits,
        "--seed",
        &seed,
    ])?;
    let sim = String::from_utf8(read(&dir.join("sim/metrics.csv"))?).map_err(|e| e.to_string())?;
    let mut rec = MetricsRecord::parse_csv_row(sim.lines().nth(1).unwrap_or(""), grid.horizon)
        .map_err(|e| e.to_string())?;
    rec.run_id = 37;
    standalone &= rec.csv_row() == rows[37];

    verdict(
        identical && standalone,
        format!(
            "{} runs, repeat sweeps byte-identical: {identical}, standalone cells {:?} + simulate match: {standalone}",
            rows.len(),
            picks
        ),
    )
}

fn small_network() -> impl Strategy<Value = (Network, u64)> {
    (
        1usize..=6,
        1u32..=16,
        any::<bool>(),
        any::<bool>(),
        any::<bool>(),
        1u32..=4,
    )
        .prop_flat_map(|(n, bits, signed, wrap, reset, k)| {
            (
                Just((n, bits, signed, wrap, reset, k)),
                proptest::collection::vec(-100_000i64..=100_000, n * n),
                proptest::collection::vec(1i64..=8, n),
                any::<u64>(),
            )
        })
        .prop_map(|((n, bits, signed, wrap, reset, k), raw, theta, seed)| {
            let mut w = WeightMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        w.set(i, j, raw[i * n + j]);
                    }
                }
            }
            let domain = IntegerDomain::new(
                bits,
                if signed {
                    Signedness::Signed
                } else {
                    Signedness::Unsigned
                },
                if wrap {
                    OverflowMode::Wrap
                } else {
                    OverflowMode::Saturate
                },
            )
            .unwrap();
            let reset = if reset {
                ResetMode::SubtractThreshold
            } else {
                ResetMode::None
            };
            (Network::new(w, theta, k, domain, reset).unwrap(), seed)
        })
}

fn raster() -> impl Strategy<Value = SpikeRaster> {
    (1usize..=12, 1usize..=30).prop_flat_map(|(n, t)| {
        proptest::collection::vec(
            proptest::collection::vec(proptest::bool::weighted(0.4), n),
            t,
        )
        .prop_map(|rows| SpikeRaster::from_rows(&rows).unwrap())
    })
}

fn check<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases: C7_CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn invariant_suite() -> Verdict {
    let start = Instant::now();
    check("boundedness", small_network(), |(net, seed)| {
        let mut s = net.initial_state(seed);
        for _ in 0..25 {
            s = net.step(&s).unwrap();
            prop_assert!(s.v.iter().all(|&v| net.domain().contains(v)));
        }
        Ok(())
    })?;
    check("zero fixed point", small_network(), |(net, _)| {
        let z = net.zero_state();
        prop_assert_eq!(net.step(&z).unwrap(), z);
        Ok(())
    })?;
    check(
        "pseudo-rank bounds and dual elimination",
        raster().prop_flat_map(|r| {
            let rows = r.rows();
            (Just(r), 1..=rows)
        }),
        |(r, window)| {
            let pr = pseudo_rank(&r, window).unwrap();
            prop_assert!(pr <= r.n().min(window));
            prop_assert_eq!(pr, raster_rank_gauss(&r, window));
            Ok(())
        },
    )?;
    check(
        "firing-rate permutation invariance",
        raster().prop_flat_map(|r| {
            let perm: Vec<usize> = (0..r.n()).collect();
            (Just(r), Just(perm).prop_shuffle())
        }),
        |(r, perm)| {
            prop_assert_eq!(
                firing_rate(&r).unwrap(),
                firing_rate(&r.permute_columns(&perm)).unwrap()
            );
            Ok(())
        },
    )?;
    check(
        "leak fixed points",
        (1u32..=16, 0i128..(1 << 40)),
        |(k, v)| {
            prop_assert_eq!(leak_shift(v, k) == v, v < (1i128 << k));
            Ok(())
        },
    )?;
    let elapsed = start.elapsed();
    verdict(
        elapsed < C7_BUDGET,
        format!("5 properties x {C7_CASES} cases, {elapsed:.2?} (limit {C7_BUDGET:?})"),
    )
}

fn grid_arithmetic() -> Verdict {
    let grid = SweepGrid::global();
    let (records, elapsed) = timed(|| run_grid(&grid, workers()));
    let records = records.map_err(|e| e.to_string())?;
    let ordered = records.iter().enumerate().all(|(i, r)| r.run_id == i);
    verdict(
        grid.run_count() == C8_RUNS && records.len() == C8_RUNS && ordered && elapsed < C8_BUDGET,
        format!(
            "{} sizes x {} densities x {} bit widths = {} records, full sweep {elapsed:.2?} (limit {C8_BUDGET:?})",
            grid.sizes.len(),
            grid.densities.len(),
            grid.bit_widths.len(),
            records.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("quiescence transition", quiescence_transition),
        ("active-regime band", active_band),
        ("plateau flatness", plateau_flatness),
        (
            "recurrence totality and oracle equivalence",
            oracle_equivalence,
        ),
        ("cycle-length plausibility", cycle_plausibility),
        ("determinism", determinism),
        ("metric invariant suite", invariant_suite),
        ("grid arithmetic", grid_arithmetic),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {tag}: {name}: {detail}", i + 1);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
