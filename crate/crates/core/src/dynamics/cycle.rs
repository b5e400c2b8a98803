use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Network, NetworkState};

/// Outcome of recurrence detection over a finite horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CycleReport {
    /// The state at `transient + period` equals the state at `transient`,
    /// and no earlier pair of times repeats.
    Detected { transient: usize, period: usize },
    /// No state repeated within `horizon` steps.
    Censored { horizon: usize },
}

impl CycleReport {
    pub fn is_detected(&self) -> bool {
        matches!(self, CycleReport::Detected { .. })
    }

    pub fn transient(&self) -> Option<usize> {
        match *self {
            CycleReport::Detected { transient, .. } => Some(transient),
            CycleReport::Censored { .. } => None,
        }
    }

    pub fn period(&self) -> Option<usize> {
        match *self {
            CycleReport::Detected { period, .. } => Some(period),
            CycleReport::Censored { .. } => None,
        }
    }

    pub fn is_fixed_point(&self) -> bool {
        self.period() == Some(1)
    }

    pub fn status_str(&self) -> &'static str {
        match self {
            CycleReport::Detected { .. } => "detected",
            CycleReport::Censored { .. } => "censored",
        }
    }
}

/// First-visit table over full `(v, s)` states.
#[derive(Debug, Default)]
pub struct CycleDetector {
    first_seen: HashMap<NetworkState, usize>,
    found: Option<CycleReport>,
}

impl CycleDetector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record the state at time `t`; times must be fed in increasing order.
    /// Returns the report on the first revisit and keeps returning it.
    pub fn observe(&mut self, t: usize, state: &NetworkState) -> Option<CycleReport> {
        if self.found.is_some() {
            return self.found;
        }
        if let Some(&t1) = self.first_seen.get(state) {
            self.found = Some(CycleReport::Detected {
                transient: t1,
                period: t - t1,
            });
            // The table is not needed once a cycle is known.
            self.first_seen = HashMap::new();
        } else {
            self.first_seen.insert(state.clone(), t);
        }
        self.found
    }

    pub fn finish(&self, horizon: usize) -> CycleReport {
        self.found.unwrap_or(CycleReport::Censored { horizon })
    }
}

/// Iterate from `init` for up to `horizon` steps and report the first recurrence.
pub fn detect_cycle(net: &Network, init: &NetworkState, horizon: usize) -> Result<CycleReport> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    net.validate_state(init)?;
    let mut current = init.clone();
    let mut next = init.clone();
    let mut scratch = vec![0i128; net.n()];
    let mut detector = CycleDetector::new();
    detector.observe(0, &current);
    for t in 1..=horizon {
        net.step_into(&current, &mut next, &mut scratch);
        std::mem::swap(&mut current, &mut next);
        if let Some(report) = detector.observe(t, &current) {
            return Ok(report);
        }
    }
    Ok(detector.finish(horizon))
}
