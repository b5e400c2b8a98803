//! Deterministic experiment grids.
//!
//! Every run is addressed by a [`Cell`]. Its seeds come from the master seed
//! and the cell's parameters (not its position in the grid), so a cell
//! re-run on its own reproduces the record the full sweep produced.
//!
//! Seed tree, with `derive(m, tag, i) = splitmix64(splitmix64(m ^ tag) ^ i)`:
//!
//! ```text
//! key        = splitmix64(splitmix64(splitmix64(n) ^ density_ppm) ^ bits)
//! topology   = derive(master, TOPOLOGY, key)
//! thresholds = derive(master, THRESHOLDS, key)
//! initial    = derive(derive(master, INITIAL, key), INITIAL, seed_index)
//! ```
//!
//! Runs sharing `(n, density, bits)` therefore share one network and differ
//! only in their initial condition.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{IntegerDomain, OverflowMode, Signedness};
use crate::dynamics::{detect_cycle, run_streaming, simulate, Trajectory};
use crate::error::{Error, Result};
use crate::metrics::{default_window, summarize, MetricsRecord, RunLabel, SummaryRow};
use crate::network::{generate_topology, sample_thresholds, Network, ResetMode, SeedProvenance};
use crate::rng::{derive_seed, mix64, Purpose, SeedTreeConstants};

/// Default master seed of all presets.
pub const DEFAULT_MASTER_SEED: u64 = 20_240_601;
/// Default synaptic weight range (nonzero integers only).
pub const DEFAULT_WEIGHT_RANGE: (i64, i64) = (-4, 4);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub sizes: Vec<usize>,
    pub densities: Vec<f64>,
    pub bit_widths: Vec<u32>,
    pub horizon: usize,
    pub threshold_range: (i64, i64),
    pub weight_range: (i64, i64),
    pub leak_k: u32,
    pub seeds_per_cell: usize,
    pub master_seed: u64,
    pub signedness: Signedness,
    pub overflow_mode: OverflowMode,
    pub reset_mode: ResetMode,
    /// Pseudo-rank tail window; `None` means `min(500, T / 2)`.
    pub window: Option<usize>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self::global()
    }
}

impl SweepGrid {
    /// Full grid: N = 30, 32, ..., 130; density 0.1..0.9; 1..16 bits; T = 1000.
    pub fn global() -> Self {
        Self {
            sizes: (30..=130).step_by(2).collect(),
            densities: (1..=9).map(|d| d as f64 / 10.0).collect(),
            bit_widths: (1..=16).collect(),
            horizon: 1000,
            threshold_range: (4, 8),
            weight_range: DEFAULT_WEIGHT_RANGE,
            leak_k: 1,
            seeds_per_cell: 1,
            master_seed: DEFAULT_MASTER_SEED,
            signedness: Signedness::Unsigned,
            overflow_mode: OverflowMode::Saturate,
            reset_mode: ResetMode::None,
            window: None,
        }
    }

    /// Repeated runs at N = 64 and density 0.5, five initial conditions per bit width.
    pub fn focused(bit_widths: Vec<u32>) -> Self {
        Self {
            sizes: vec![64],
            densities: vec![0.5],
            bit_widths,
            seeds_per_cell: 5,
            ..Self::global()
        }
    }

    /// Slow-leak, sparse preset (`k = 8`, density 0.2).
    pub fn variant_k8() -> Self {
        Self {
            densities: vec![0.2],
            leak_k: 8,
            ..Self::global()
        }
    }

    pub fn window(&self) -> usize {
        self.window.unwrap_or_else(|| default_window(self.horizon))
    }

    pub fn cell_count(&self) -> usize {
        self.sizes.len() * self.densities.len() * self.bit_widths.len()
    }

    pub fn run_count(&self) -> usize {
        self.cell_count() * self.seeds_per_cell
    }

    pub fn validate(&self) -> Result<()> {
        for (name, empty) in [
            ("sizes", self.sizes.is_empty()),
            ("densities", self.densities.is_empty()),
            ("bit_widths", self.bit_widths.is_empty()),
            ("seeds_per_cell", self.seeds_per_cell == 0),
        ] {
            if empty {
                return Err(Error::EmptyGrid(name));
            }
        }
        if self.horizon == 0 {
            return Err(Error::ZeroHorizon);
        }
        if self.window() > self.horizon {
            return Err(Error::WindowTooLarge {
                window: self.window(),
                rows: self.horizon,
            });
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n == 0) {
            debug_assert_eq!(n, 0);
            return Err(Error::EmptyNetwork);
        }
        if let Some(&d) = self.densities.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::InvalidDensity(d));
        }
        for &b in &self.bit_widths {
            IntegerDomain::new(b, self.signedness, self.overflow_mode)?;
        }
        if !(1..=64).contains(&self.leak_k) {
            return Err(Error::InvalidLeakShift(self.leak_k));
        }
        let (lo, hi) = self.threshold_range;
        if lo < 1 || lo > hi {
            return Err(Error::InvalidRange {
                what: "threshold",
                lo,
                hi,
            });
        }
        let (lo, hi) = self.weight_range;
        if lo > hi || (lo == 0 && hi == 0) {
            return Err(Error::InvalidRange {
                what: "weight",
                lo,
                hi,
            });
        }
        Ok(())
    }

    /// Cell `run_id` in grid order: sizes, then densities, then bit widths,
    /// then seed index (innermost).
    pub fn cell(&self, run_id: usize) -> Option<Cell> {
        if run_id >= self.run_count() {
            return None;
        }
        let seed_index = run_id % self.seeds_per_cell;
        let mut rest = run_id / self.seeds_per_cell;
        let bits = self.bit_widths[rest % self.bit_widths.len()];
        rest /= self.bit_widths.len();
        let density = self.densities[rest % self.densities.len()];
        rest /= self.densities.len();
        let n = self.sizes[rest];
        Some(Cell {
            run_id,
            n,
            density,
            bits,
            seed_index,
        })
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.run_count()).filter_map(|id| self.cell(id))
    }
}

/// One run of a grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub run_id: usize,
    pub n: usize,
    pub density: f64,
    pub bits: u32,
    pub seed_index: usize,
}

impl Cell {
    /// Parameter key shared by all seed indices of a cell.
    pub fn key(&self) -> u64 {
        let density_ppm = (self.density * 1e6).round() as u64;
        mix64(mix64(mix64(self.n as u64) ^ density_ppm) ^ self.bits as u64)
    }

    pub fn topology_seed(&self, master: u64) -> u64 {
        derive_seed(master, Purpose::Topology, self.key())
    }

    pub fn threshold_seed(&self, master: u64) -> u64 {
        derive_seed(master, Purpose::Thresholds, self.key())
    }

    pub fn initial_seed(&self, master: u64) -> u64 {
        let base = derive_seed(master, Purpose::InitialState, self.key());
        derive_seed(base, Purpose::InitialState, self.seed_index as u64)
    }

    fn label(&self, master: u64) -> RunLabel {
        RunLabel {
            run_id: self.run_id,
            n: self.n,
            density: self.density,
            bits: self.bits,
            seed: self.initial_seed(master),
        }
    }

    fn wrap_err(&self, e: Error) -> Error {
        Error::Cell {
            run_id: self.run_id,
            n: self.n,
            density: self.density,
            bits: self.bits,
            source: Box::new(e),
        }
    }
}

/// The network of `cell` under `grid`.
pub fn build_network(grid: &SweepGrid, cell: &Cell) -> Result<Network> {
    let build = || -> Result<Network> {
        let topology_seed = cell.topology_seed(grid.master_seed);
        let threshold_seed = cell.threshold_seed(grid.master_seed);
        let (wlo, whi) = grid.weight_range;
        let (tlo, thi) = grid.threshold_range;
        let weights = generate_topology(cell.n, cell.density, wlo, whi, topology_seed)?;
        let thresholds = sample_thresholds(cell.n, tlo, thi, threshold_seed)?;
        let domain = IntegerDomain::new(cell.bits, grid.signedness, grid.overflow_mode)?;
        Ok(
            Network::new(weights, thresholds, grid.leak_k, domain, grid.reset_mode)?
                .with_provenance(SeedProvenance {
                    master_seed: Some(grid.master_seed),
                    topology_seed: Some(topology_seed),
                    threshold_seed: Some(threshold_seed),
                    density: Some(cell.density),
                    weight_range: Some(grid.weight_range),
                    threshold_range: Some(grid.threshold_range),
                }),
        )
    };
    build().map_err(|e| cell.wrap_err(e))
}

/// Streaming run of one cell.
pub fn run_cell(grid: &SweepGrid, cell: &Cell) -> Result<MetricsRecord> {
    let net = build_network(grid, cell)?;
    let init = net.initial_state(cell.initial_seed(grid.master_seed));
    run_streaming(&net, &init, grid.horizon, grid.window())
        .and_then(|s| MetricsRecord::from_stream(cell.label(grid.master_seed), &s))
        .map_err(|e| cell.wrap_err(e))
}

/// A cell run with its full trajectory kept.
#[derive(Clone, Debug)]
pub struct RecordedRun {
    pub cell: Cell,
    pub network: Network,
    pub trajectory: Trajectory,
    pub record: MetricsRecord,
}

pub fn run_cell_recorded(grid: &SweepGrid, cell: &Cell) -> Result<RecordedRun> {
    let network = build_network(grid, cell)?;
    let init = network.initial_state(cell.initial_seed(grid.master_seed));
    let run = || -> Result<(Trajectory, MetricsRecord)> {
        let trajectory = simulate(&network, &init, grid.horizon)?;
        let cycle = detect_cycle(&network, &init, grid.horizon)?;
        let record = MetricsRecord::from_trajectory(
            cell.label(grid.master_seed),
            &trajectory,
            cycle,
            grid.window(),
        )?;
        Ok((trajectory, record))
    };
    let (trajectory, record) = run().map_err(|e| cell.wrap_err(e))?;
    Ok(RecordedRun {
        cell: *cell,
        network,
        trajectory,
        record,
    })
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Run every cell of the grid; records come back sorted by `run_id`.
///
/// `workers = 0` uses rayon's default pool size.
pub fn run_grid(grid: &SweepGrid, workers: usize) -> Result<Vec<MetricsRecord>> {
    grid.validate()?;
    let cells: Vec<Cell> = grid.cells().collect();
    let mut records = with_pool(workers, || {
        cells
            .par_iter()
            .map(|c| run_cell(grid, c))
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by_key(|r| r.run_id);
    Ok(records)
}

/// Records of a focused experiment and their per-bit-width summary.
#[derive(Clone, Debug)]
pub struct FocusedResult {
    pub records: Vec<MetricsRecord>,
    pub summary: Vec<SummaryRow>,
}

/// Repeated runs per bit width on a shared topology; needs two or more seeds.
pub fn run_focused(grid: &SweepGrid, workers: usize) -> Result<FocusedResult> {
    if grid.seeds_per_cell < 2 {
        return Err(Error::TooFewSeeds {
            required: 2,
            found: grid.seeds_per_cell,
        });
    }
    let records = run_grid(grid, workers)?;
    let summary = summarize(&records)?;
    Ok(FocusedResult { records, summary })
}

/// Highest pseudo-rank first; ties by firing rate (descending), then `run_id`.
pub fn top_recurrent(records: &[MetricsRecord], count: usize) -> Vec<MetricsRecord> {
    let mut sorted = records.to_vec();
    sorted.sort_by(|a, b| {
        b.pseudo_rank
            .cmp(&a.pseudo_rank)
            .then(b.mean_firing_rate.total_cmp(&a.mean_firing_rate))
            .then(a.run_id.cmp(&b.run_id))
    });
    sorted.truncate(count);
    sorted
}

/// Everything needed to regenerate a sweep's outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub software: String,
    pub version: String,
    pub grid: SweepGrid,
    pub window: usize,
    pub run_count: usize,
    pub seed_tree: SeedTreeConstants,
    /// Extra key/value context supplied by the caller (preset name, notes).
    #[serde(default)]
    pub annotations: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(grid: &SweepGrid) -> Self {
        Self {
            software: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            window: grid.window(),
            run_count: grid.run_count(),
            grid: grid.clone(),
            seed_tree: SeedTreeConstants::current(),
            annotations: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
