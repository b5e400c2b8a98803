//! Per-run statistics and their aggregation by bit width.
//!
//! The pseudo-rank is a surrogate for recurrence richness: the exact rational
//! rank of the last `W` raster rows, with `W = min(500, T / 2)` by default.

mod rank;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use rank::rational_rank;

use crate::dynamics::{CycleReport, StreamSummary, Trajectory};
use crate::error::{Error, Result};
use crate::raster::SpikeRaster;

/// Default tail window for a horizon `T`.
pub fn default_window(horizon: usize) -> usize {
    500.min(horizon / 2)
}

/// Spikes per neuron per step.
pub fn firing_rate(raster: &SpikeRaster) -> Result<f64> {
    if raster.is_empty() {
        return Err(Error::EmptyRaster);
    }
    Ok(raster.total_spikes() as f64 / (raster.rows() * raster.n()) as f64)
}

/// Fraction of neurons that spike at least once.
pub fn active_fraction(raster: &SpikeRaster) -> Result<f64> {
    if raster.is_empty() {
        return Err(Error::EmptyRaster);
    }
    let active = (0..raster.n())
        .filter(|&i| (0..raster.rows()).any(|t| raster.get(t, i)))
        .count();
    Ok(active as f64 / raster.n() as f64)
}

/// Rational rank of the last `window` rows.
pub fn pseudo_rank(raster: &SpikeRaster, window: usize) -> Result<usize> {
    if window > raster.rows() {
        return Err(Error::WindowTooLarge {
            window,
            rows: raster.rows(),
        });
    }
    let tail = raster.tail(window);
    let rows: Vec<Vec<i64>> = tail
        .iter_rows()
        .map(|r| r.iter().map(|&s| i64::from(s)).collect())
        .collect();
    Ok(rational_rank(&rows))
}

/// Pairs `(x[t], x[t + tau])` for `t` in `0..len - tau`.
pub fn delay_embed(trace: &[i128], tau: usize) -> Result<Vec<(i128, i128)>> {
    if tau == 0 || tau >= trace.len() {
        return Err(Error::DelayTooLarge {
            tau,
            len: trace.len(),
        });
    }
    Ok(trace
        .iter()
        .zip(&trace[tau..])
        .map(|(&a, &b)| (a, b))
        .collect())
}

/// Statistics of one simulation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub run_id: usize,
    pub n: usize,
    pub density: f64,
    pub bits: u32,
    /// Initial-state seed of the run.
    pub seed: u64,
    pub mean_firing_rate: f64,
    pub active_fraction: f64,
    pub pseudo_rank: usize,
    pub cycle: CycleReport,
}

/// Provenance fields shared by both construction paths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunLabel {
    pub run_id: usize,
    pub n: usize,
    pub density: f64,
    pub bits: u32,
    pub seed: u64,
}

impl MetricsRecord {
    pub const CSV_HEADER: &'static str = "run_id,n,density,bits,seed,mean_firing_rate,active_fraction,pseudo_rank,cycle_status,transient,period";

    pub fn from_trajectory(
        label: RunLabel,
        traj: &Trajectory,
        cycle: CycleReport,
        window: usize,
    ) -> Result<Self> {
        Ok(Self {
            run_id: label.run_id,
            n: label.n,
            density: label.density,
            bits: label.bits,
            seed: label.seed,
            mean_firing_rate: firing_rate(&traj.raster)?,
            active_fraction: active_fraction(&traj.raster)?,
            pseudo_rank: pseudo_rank(&traj.raster, window)?,
            cycle,
        })
    }

    pub fn from_stream(label: RunLabel, stream: &StreamSummary) -> Result<Self> {
        let n = stream.ever_spiked.len();
        if n == 0 {
            return Err(Error::EmptyRaster);
        }
        let active = stream.ever_spiked.iter().filter(|&&a| a).count();
        Ok(Self {
            run_id: label.run_id,
            n: label.n,
            density: label.density,
            bits: label.bits,
            seed: label.seed,
            mean_firing_rate: stream.spike_total as f64 / (stream.horizon * n) as f64,
            active_fraction: active as f64 / n as f64,
            pseudo_rank: pseudo_rank(&stream.tail, stream.tail.rows())?,
            cycle: stream.cycle,
        })
    }

    pub fn csv_row(&self) -> String {
        let (transient, period) = match self.cycle {
            CycleReport::Detected { transient, period } => {
                (transient.to_string(), period.to_string())
            }
            CycleReport::Censored { .. } => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.run_id,
            self.n,
            self.density,
            self.bits,
            self.seed,
            self.mean_firing_rate,
            self.active_fraction,
            self.pseudo_rank,
            self.cycle.status_str(),
            transient,
            period
        )
    }

    /// Inverse of [`csv_row`](Self::csv_row). A censored row has no horizon
    /// column, so `horizon` supplies it.
    pub fn parse_csv_row(line: &str, horizon: usize) -> Result<Self> {
        let bad = || Error::InvalidNetwork(format!("malformed results row: {line}"));
        let f: Vec<&str> = line.trim_end_matches('\r').split(',').collect();
        if f.len() != 11 {
            return Err(bad());
        }
        let cycle = match f[8] {
            "detected" => CycleReport::Detected {
                transient: f[9].parse().map_err(|_| bad())?,
                period: f[10].parse().map_err(|_| bad())?,
            },
            "censored" => CycleReport::Censored { horizon },
            _ => return Err(bad()),
        };
        Ok(Self {
            run_id: f[0].parse().map_err(|_| bad())?,
            n: f[1].parse().map_err(|_| bad())?,
            density: f[2].parse().map_err(|_| bad())?,
            bits: f[3].parse().map_err(|_| bad())?,
            seed: f[4].parse().map_err(|_| bad())?,
            mean_firing_rate: f[5].parse().map_err(|_| bad())?,
            active_fraction: f[6].parse().map_err(|_| bad())?,
            pseudo_rank: f[7].parse().map_err(|_| bad())?,
            cycle,
        })
    }
}

pub fn records_csv(records: &[MetricsRecord]) -> String {
    let mut out = String::from(MetricsRecord::CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Aggregates of one bit-width group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub bits: u32,
    pub mean_firing_rate: f64,
    /// Population standard deviation of the per-run firing rates.
    pub std_firing_rate: f64,
    pub mean_active_fraction: f64,
    pub mean_pseudo_rank: f64,
    /// Median period over detected runs; `None` if every run was censored.
    pub median_cycle: Option<f64>,
    pub censor_fraction: f64,
    pub run_count: usize,
}

impl SummaryRow {
    pub const CSV_HEADER: &'static str =
        "bits,mean_firing_rate,mean_active_fraction,mean_pseudo_rank,median_cycle,censor_fraction,run_count";
    pub const FOCUSED_CSV_HEADER: &'static str =
        "bits,mean_firing_rate,std_firing_rate,mean_active_fraction,mean_pseudo_rank,median_cycle,censor_fraction,run_count";

    fn median_str(&self) -> String {
        self.median_cycle.map(|m| m.to_string()).unwrap_or_default()
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.bits,
            self.mean_firing_rate,
            self.mean_active_fraction,
            self.mean_pseudo_rank,
            self.median_str(),
            self.censor_fraction,
            self.run_count
        )
    }

    pub fn focused_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.bits,
            self.mean_firing_rate,
            self.std_firing_rate,
            self.mean_active_fraction,
            self.mean_pseudo_rank,
            self.median_str(),
            self.censor_fraction,
            self.run_count
        )
    }
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SummaryRow::CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

pub fn focused_summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SummaryRow::FOCUSED_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.focused_csv_row());
    }
    out
}

/// Median; an even count averages the two middle values.
pub fn median(values: &[usize]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) as f64 / 2.0
    } else {
        v[mid] as f64
    })
}

// Summing in sorted order keeps the result independent of input order.
fn mean(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values.iter().sum::<f64>() / values.len() as f64
}

fn population_std(values: &mut [f64]) -> f64 {
    let m = mean(values);
    let mut sq: Vec<f64> = values.iter().map(|x| (x - m) * (x - m)).collect();
    mean(&mut sq).sqrt()
}

/// Summarize one group of records.
pub fn summarize_group(bits: u32, group: &[&MetricsRecord]) -> Result<SummaryRow> {
    if group.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let mut rates: Vec<f64> = group.iter().map(|r| r.mean_firing_rate).collect();
    let mut active: Vec<f64> = group.iter().map(|r| r.active_fraction).collect();
    let mut ranks: Vec<f64> = group.iter().map(|r| r.pseudo_rank as f64).collect();
    let periods: Vec<usize> = group.iter().filter_map(|r| r.cycle.period()).collect();
    Ok(SummaryRow {
        bits,
        mean_firing_rate: mean(&mut rates),
        std_firing_rate: population_std(&mut rates),
        mean_active_fraction: mean(&mut active),
        mean_pseudo_rank: mean(&mut ranks),
        median_cycle: median(&periods),
        censor_fraction: (group.len() - periods.len()) as f64 / group.len() as f64,
        run_count: group.len(),
    })
}

/// One summary row per bit width, ascending.
pub fn summarize(records: &[MetricsRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let mut groups: std::collections::BTreeMap<u32, Vec<&MetricsRecord>> = Default::default();
    for r in records {
        groups.entry(r.bits).or_default().push(r);
    }
    groups
        .iter()
        .map(|(&bits, g)| summarize_group(bits, g))
        .collect()
}
