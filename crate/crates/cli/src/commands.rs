//! Subcommand implementations. All files are written after computation
//! finishes, from a single thread.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use intsnn_core::dynamics::{check_detection, enumerate_state_graph};
use intsnn_core::metrics::{self, delay_embed, summarize, MetricsRecord, SummaryRow};
use intsnn_core::sweep::{run_cell_recorded, run_focused, run_grid, top_recurrent, RecordedRun};
use intsnn_core::{CycleReport, Error as CoreError, Manifest, SweepGrid};

use crate::config::{RunConfig, Variant};
use crate::plot;

/// Environment fallback for the worker count.
pub const WORKERS_ENV: &str = "INTSNN_WORKERS";

/// What a command produced and whether its checks passed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub passed: bool,
    pub lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            passed: true,
            ..Default::default()
        }
    }
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    fn new(dir: &'a Path) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self {
            dir,
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.files.push(path);
        Ok(())
    }
}

/// Worker count: explicit setting, else `INTSNN_WORKERS`, else rayon's default.
pub fn resolve_workers(cfg: &RunConfig) -> usize {
    cfg.workers
        .or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0)
}

fn manifest_for(cfg: &RunConfig, grid: &SweepGrid, command: &str) -> Manifest {
    let mut m = Manifest::new(grid);
    m.annotations.push(("command".into(), command.into()));
    m.annotations
        .push(("variant".into(), cfg.variant.name().into()));
    m
}

fn variant_suffix(v: Variant) -> String {
    match v {
        Variant::Global => String::new(),
        other => format!("_{}", other.name()),
    }
}

fn plot_title(grid: &SweepGrid) -> String {
    let dens: Vec<String> = grid.densities.iter().map(|d| d.to_string()).collect();
    format!(
        "k={}, density={}",
        grid.leak_k,
        if dens.len() > 3 {
            "all".to_string()
        } else {
            dens.join(",")
        }
    )
}

fn write_summary_plots(
    w: &mut Writer,
    rows: &[SummaryRow],
    grid: &SweepGrid,
    suffix: &str,
) -> Result<()> {
    let title = plot_title(grid);
    w.write(
        &format!("firing_rate_vs_bits{suffix}.svg"),
        plot::metric_vs_bits(
            &[("mean firing rate", plot::firing_rate_series(rows))],
            &format!("Mean firing rate vs bit width ({title})"),
            "mean firing rate",
        ),
    )?;
    w.write(
        &format!("cycle_length_vs_bits{suffix}.svg"),
        plot::metric_vs_bits(
            &[("median cycle", plot::cycle_series(rows))],
            &format!("Median detected cycle length vs bit width ({title})"),
            "median period (steps)",
        ),
    )
}

fn write_run_figures(
    w: &mut Writer,
    cfg: &RunConfig,
    run: &RecordedRun,
    prefix: &str,
) -> Result<()> {
    let c = &run.cell;
    let tag = format!("N={}, density={}, {}-bit", c.n, c.density, c.bits);
    w.write(
        &format!("{prefix}connectivity.svg"),
        plot::connectivity_heatmap(run.network.weights(), &format!("Connectivity ({tag})")),
    )?;
    w.write(
        &format!("{prefix}membrane_traces.svg"),
        plot::membrane_traces(
            &run.trajectory,
            &cfg.trace_neurons,
            &format!("Membrane potentials ({tag})"),
        ),
    )?;
    w.write(
        &format!("{prefix}spike_raster.svg"),
        plot::spike_raster(&run.trajectory.raster, &format!("Spike raster ({tag})")),
    )?;
    let neuron = cfg.embed_neuron.min(c.n - 1);
    let points = delay_embed(&run.trajectory.trace(neuron), cfg.embed_tau)?;
    w.write(
        &format!("{prefix}delay_embedding.svg"),
        plot::delay_scatter(
            &points,
            cfg.embed_tau,
            &format!("Delay embedding, neuron {neuron} ({tag})"),
        ),
    )
}

fn single_cell_grid(
    cfg: &RunConfig,
    n: usize,
    density: f64,
    bits: u32,
    seed_index: usize,
) -> SweepGrid {
    SweepGrid {
        sizes: vec![n],
        densities: vec![density],
        bit_widths: vec![bits],
        seeds_per_cell: seed_index + 1,
        ..cfg.grid.clone()
    }
}

/// Record one run in full: trajectory CSV, network JSON, metrics row and figures.
pub fn cmd_simulate(
    cfg: &RunConfig,
    n: usize,
    density: f64,
    bits: u32,
    seed_index: usize,
) -> Result<Outcome> {
    let grid = single_cell_grid(cfg, n, density, bits, seed_index);
    grid.validate()?;
    let cell = grid
        .cell(seed_index)
        .expect("seed index is within the grid");
    let run = run_cell_recorded(&grid, &cell)?;
    let mut w = Writer::new(&cfg.output_dir)?;
    let mut csv = Vec::new();
    run.trajectory.write_csv(&mut csv)?;
    w.write("trajectory.csv", csv)?;
    w.write("network.json", run.network.to_json()? + "\n")?;
    w.write(
        "metrics.csv",
        metrics::records_csv(std::slice::from_ref(&run.record)),
    )?;
    w.write(
        "manifest.json",
        manifest_for(cfg, &grid, "simulate").to_json()? + "\n",
    )?;
    if cfg.figures {
        write_run_figures(&mut w, cfg, &run, "")?;
    }
    let mut out = Outcome::new();
    let r = &run.record;
    out.lines.push(format!(
        "firing_rate={} active_fraction={} pseudo_rank={} cycle={}",
        r.mean_firing_rate,
        r.active_fraction,
        r.pseudo_rank,
        describe_cycle(r)
    ));
    out.files = w.files;
    Ok(out)
}

fn describe_cycle(r: &MetricsRecord) -> String {
    match r.cycle {
        CycleReport::Detected { transient, period } => {
            format!("transient {transient}, period {period}")
        }
        CycleReport::Censored { horizon } => format!("censored at T={horizon}"),
    }
}

/// Run a grid. A manifest, when given, supplies the grid verbatim.
pub fn cmd_sweep(cfg: &RunConfig, manifest: Option<&Manifest>) -> Result<Outcome> {
    let grid = manifest.map_or_else(|| cfg.grid.clone(), |m| m.grid.clone());
    let records = run_grid(&grid, resolve_workers(cfg))?;
    let summary = summarize(&records)?;
    let mut w = Writer::new(&cfg.output_dir)?;
    w.write("results.csv", metrics::records_csv(&records))?;
    w.write("summary.csv", metrics::summary_csv(&summary))?;
    w.write(
        "top_recurrent.csv",
        metrics::records_csv(&top_recurrent(&records, cfg.top_count)),
    )?;
    let manifest = manifest
        .cloned()
        .unwrap_or_else(|| manifest_for(cfg, &grid, "sweep"));
    w.write("manifest.json", manifest.to_json()? + "\n")?;
    if cfg.figures {
        write_summary_plots(&mut w, &summary, &grid, &variant_suffix(cfg.variant))?;
    }
    let mut out = Outcome::new();
    out.lines.push(format!("{} runs", records.len()));
    out.lines.extend(summary_lines(&summary));
    out.files = w.files;
    Ok(out)
}

fn summary_lines(rows: &[SummaryRow]) -> Vec<String> {
    rows.iter()
        .map(|r| {
            format!(
                "bits {:>2}: rate {:.4} (std {:.4}) active {:.4} pseudo-rank {:.2} median cycle {} censored {:.2}",
                r.bits,
                r.mean_firing_rate,
                r.std_firing_rate,
                r.mean_active_fraction,
                r.mean_pseudo_rank,
                r.median_cycle.map_or("-".to_string(), |m| m.to_string()),
                r.censor_fraction
            )
        })
        .collect()
}

/// Repeated runs on a shared topology per bit width, with exemplar figures.
pub fn cmd_focused(cfg: &RunConfig) -> Result<Outcome> {
    let grid = &cfg.grid;
    let result = run_focused(grid, resolve_workers(cfg))?;
    let mut w = Writer::new(&cfg.output_dir)?;
    w.write("focused_results.csv", metrics::records_csv(&result.records))?;
    w.write(
        "focused_summary.csv",
        metrics::focused_summary_csv(&result.summary),
    )?;
    w.write(
        "manifest.json",
        manifest_for(cfg, grid, "focused").to_json()? + "\n",
    )?;
    if cfg.figures {
        write_summary_plots(&mut w, &result.summary, grid, "_focused")?;
        let bits = if grid.bit_widths.contains(&8) {
            8
        } else {
            *grid.bit_widths.iter().max().expect("validated nonempty")
        };
        let exemplar = single_cell_grid(cfg, grid.sizes[0], grid.densities[0], bits, 0);
        let cell = exemplar.cell(0).expect("one cell");
        let run = run_cell_recorded(&exemplar, &cell)?;
        write_run_figures(&mut w, cfg, &run, "exemplar_")?;
    }
    let mut out = Outcome::new();
    out.lines.extend(summary_lines(&result.summary));
    out.files = w.files;
    Ok(out)
}

/// Enumerate the full state graph and check recurrence detection against it.
pub fn cmd_oracle(
    cfg: &RunConfig,
    n: usize,
    bits: u32,
    density: f64,
    seed: u64,
    budget: u128,
) -> Result<Outcome> {
    let grid = SweepGrid {
        master_seed: seed,
        ..single_cell_grid(cfg, n, density, bits, 0)
    };
    grid.validate()?;
    let cell = grid.cell(0).expect("one cell");
    let net = intsnn_core::sweep::build_network(&grid, &cell)?;
    let graph = match enumerate_state_graph(&net, budget) {
        Err(CoreError::BudgetExceeded { required, budget }) => {
            bail!("refusing to enumerate: {required} states required, budget is {budget} (raise --budget)")
        }
        other => other?,
    };
    let check = check_detection(&graph)?;
    let mut w = Writer::new(&cfg.output_dir)?;
    w.write(
        "oracle.json",
        serde_json::to_string_pretty(&graph.to_document())? + "\n",
    )?;
    w.write("network.json", net.to_json()? + "\n")?;
    let mut out = Outcome::new();
    out.passed = check.passed();
    for a in graph.attractors() {
        out.lines.push(format!(
            "attractor period {} basin {} representative {:?}",
            a.period, a.basin_size, a.representative.v
        ));
    }
    out.lines.push(format!(
        "{} states checked, {} mismatches: {}",
        check.states_checked,
        check.mismatches.len(),
        if check.passed() { "PASS" } else { "FAIL" }
    ));
    out.files = w.files;
    Ok(out)
}

/// Re-summarize a results CSV.
pub fn cmd_report(cfg: &RunConfig, results: &Path, manifest: Option<&Manifest>) -> Result<Outcome> {
    let grid = manifest.map_or_else(|| cfg.grid.clone(), |m| m.grid.clone());
    let text = fs::read_to_string(results)
        .with_context(|| format!("cannot read {}", results.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == MetricsRecord::CSV_HEADER => {}
        _ => bail!(
            "{} does not start with the results header",
            results.display()
        ),
    }
    let records = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| MetricsRecord::parse_csv_row(l, grid.horizon))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = summarize(&records)?;
    let mut w = Writer::new(&cfg.output_dir)?;
    w.write("summary.csv", metrics::summary_csv(&summary))?;
    w.write(
        "top_recurrent.csv",
        metrics::records_csv(&top_recurrent(&records, cfg.top_count)),
    )?;
    if cfg.figures {
        write_summary_plots(&mut w, &summary, &grid, &variant_suffix(cfg.variant))?;
    }
    let mut out = Outcome::new();
    out.lines.extend(summary_lines(&summary));
    for r in top_recurrent(&records, cfg.top_count) {
        out.lines.push(format!(
            "top: N={} density={} bits={} pseudo-rank={} rate={:.4}",
            r.n, r.density, r.bits, r.pseudo_rank, r.mean_firing_rate
        ));
    }
    out.files = w.files;
    Ok(out)
}
