use std::collections::VecDeque;
use std::io::Write;

use super::cycle::{CycleDetector, CycleReport};
use crate::error::{Error, Result};
use crate::network::{Network, NetworkState};
use crate::raster::SpikeRaster;

/// Fully recorded run: membranes `V(0..=T)` and spikes `S(1..=T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub states: Vec<Vec<i128>>,
    /// `S(0)`, derived from `V(0)`; not part of the raster.
    pub initial_spikes: Vec<bool>,
    pub raster: SpikeRaster,
    pub horizon: usize,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.raster.n()
    }

    /// Membrane trace of one neuron over `0..=T`.
    pub fn trace(&self, neuron: usize) -> Vec<i128> {
        self.states.iter().map(|v| v[neuron]).collect()
    }

    /// Long-format CSV: `t,neuron_id,v,s` for `t` in `0..=T`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,neuron_id,v,s")?;
        for (t, v) in self.states.iter().enumerate() {
            let s = if t == 0 {
                &self.initial_spikes[..]
            } else {
                self.raster.row(t - 1)
            };
            for (i, (&vi, &si)) in v.iter().zip(s).enumerate() {
                writeln!(out, "{t},{i},{vi},{}", u8::from(si))?;
            }
        }
        Ok(())
    }
}

/// Iterate the map `horizon` times from `init`, recording everything.
pub fn simulate(net: &Network, init: &NetworkState, horizon: usize) -> Result<Trajectory> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    net.validate_state(init)?;
    let mut states = Vec::with_capacity(horizon + 1);
    let mut raster = SpikeRaster::new(net.n());
    let mut current = init.clone();
    let mut next = init.clone();
    let mut scratch = vec![0i128; net.n()];
    states.push(current.v.clone());
    for _ in 0..horizon {
        net.step_into(&current, &mut next, &mut scratch);
        std::mem::swap(&mut current, &mut next);
        states.push(current.v.clone());
        raster.push_row(&current.s)?;
    }
    Ok(Trajectory {
        states,
        initial_spikes: init.s.clone(),
        raster,
        horizon,
    })
}

/// Aggregates of a run that was not recorded step by step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamSummary {
    pub horizon: usize,
    /// Spikes over `S(1..=T)`.
    pub spike_total: u64,
    pub ever_spiked: Vec<bool>,
    /// The last `window` raster rows.
    pub tail: SpikeRaster,
    pub cycle: CycleReport,
}

/// Simulate keeping only counters, a tail window and the recurrence table.
pub fn run_streaming(
    net: &Network,
    init: &NetworkState,
    horizon: usize,
    window: usize,
) -> Result<StreamSummary> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    if window > horizon {
        return Err(Error::WindowTooLarge {
            window,
            rows: horizon,
        });
    }
    net.validate_state(init)?;
    let n = net.n();
    let mut current = init.clone();
    let mut next = init.clone();
    let mut scratch = vec![0i128; n];
    let mut detector = CycleDetector::new();
    let mut ring: VecDeque<Vec<bool>> = VecDeque::with_capacity(window + 1);
    let mut ever_spiked = vec![false; n];
    let mut spike_total = 0u64;
    detector.observe(0, &current);
    for t in 1..=horizon {
        net.step_into(&current, &mut next, &mut scratch);
        std::mem::swap(&mut current, &mut next);
        detector.observe(t, &current);
        for (e, &s) in ever_spiked.iter_mut().zip(&current.s) {
            if s {
                *e = true;
                spike_total += 1;
            }
        }
        if window > 0 {
            if ring.len() == window {
                let mut row = ring.pop_front().unwrap_or_default();
                row.clone_from(&current.s);
                ring.push_back(row);
            } else {
                ring.push_back(current.s.clone());
            }
        }
    }
    let mut tail = SpikeRaster::new(n);
    for row in &ring {
        tail.push_row(row)?;
    }
    Ok(StreamSummary {
        horizon,
        spike_total,
        ever_spiked,
        tail,
        cycle: detector.finish(horizon),
    })
}
