//! Exhaustive state-graph enumeration for small networks.
//!
//! Every state of the lattice is decoded, stepped once, and the resulting
//! functional graph is walked with path colouring. The walk never consults
//! [`detect_cycle`](super::detect_cycle), so the two agree only if both are right.

use serde::{Deserialize, Serialize};

use super::cycle::{detect_cycle, CycleReport};
use crate::error::{Error, Result};
use crate::network::{Network, NetworkState, ResetMode};

/// Default cap on the number of enumerated states.
pub const DEFAULT_STATE_BUDGET: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attractor {
    pub period: usize,
    pub basin_size: usize,
    /// Lowest-indexed state on the cycle.
    pub representative: NetworkState,
}

/// Exact transient and period of every state.
///
/// With no reset the spike vector is a function of the membranes, so states
/// are the membrane lattice. With threshold subtraction spikes are carried
/// independently and the lattice is `domain^n x {0,1}^n`.
#[derive(Clone, Debug)]
pub struct StateGraph {
    net: Network,
    state_count: usize,
    successor: Vec<u32>,
    transient: Vec<u32>,
    period: Vec<u32>,
    attractor_of: Vec<u32>,
    attractors: Vec<Attractor>,
}

/// Number of states the oracle would enumerate for `net`, saturating.
pub fn state_space_size(net: &Network) -> u128 {
    let n = net.n() as u32;
    let mut size = net
        .domain()
        .cardinality()
        .checked_pow(n)
        .unwrap_or(u128::MAX);
    if net.reset_mode() == ResetMode::SubtractThreshold {
        size = size.saturating_mul(1u128.checked_shl(n).unwrap_or(u128::MAX));
    }
    size
}

pub fn enumerate_state_graph(net: &Network, budget: u128) -> Result<StateGraph> {
    let required = state_space_size(net);
    if required > budget || required > u32::MAX as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let count = required as usize;
    let mut graph = StateGraph {
        net: net.clone(),
        state_count: count,
        successor: Vec::with_capacity(count),
        transient: vec![0; count],
        period: vec![0; count],
        attractor_of: vec![0; count],
        attractors: Vec::new(),
    };

    let mut next = graph.decode(0);
    let mut scratch = vec![0i128; net.n()];
    for idx in 0..count {
        let state = graph.decode(idx);
        net.step_into(&state, &mut next, &mut scratch);
        graph.successor.push(graph.encode(&next) as u32);
    }

    const UNSEEN: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;
    let mut mark = vec![UNSEEN; count];
    let mut path: Vec<usize> = Vec::new();
    for start in 0..count {
        if mark[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut x = start;
        while mark[x] == UNSEEN {
            mark[x] = ON_PATH;
            path.push(x);
            x = graph.successor[x] as usize;
        }
        if mark[x] == ON_PATH {
            let pos = path
                .iter()
                .rposition(|&p| p == x)
                .expect("x is on the path");
            let cycle = &path[pos..];
            let period = cycle.len();
            let id = graph.attractors.len() as u32;
            let rep = *cycle.iter().min().expect("cycle is nonempty");
            for &c in cycle {
                graph.transient[c] = 0;
                graph.period[c] = period as u32;
                graph.attractor_of[c] = id;
                mark[c] = DONE;
            }
            graph.attractors.push(Attractor {
                period,
                basin_size: 0,
                representative: graph.decode(rep),
            });
            path.truncate(pos);
        }
        for &y in path.iter().rev() {
            let s = graph.successor[y] as usize;
            graph.transient[y] = graph.transient[s] + 1;
            graph.period[y] = graph.period[s];
            graph.attractor_of[y] = graph.attractor_of[s];
            mark[y] = DONE;
        }
    }
    for &a in &graph.attractor_of {
        graph.attractors[a as usize].basin_size += 1;
    }
    Ok(graph)
}

impl StateGraph {
    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn attractors(&self) -> &[Attractor] {
        &self.attractors
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    /// `(transient, period)` of the state with index `idx`.
    pub fn orbit(&self, idx: usize) -> (usize, usize) {
        (self.transient[idx] as usize, self.period[idx] as usize)
    }

    pub fn successor(&self, idx: usize) -> usize {
        self.successor[idx] as usize
    }

    pub fn attractor_of(&self, idx: usize) -> usize {
        self.attractor_of[idx] as usize
    }

    /// Mixed-radix decoding: neuron 0 is the least significant digit, and
    /// spike bits (reset mode only) sit below the membrane digits.
    pub fn decode(&self, idx: usize) -> NetworkState {
        let n = self.net.n();
        let d = self.net.domain();
        let radix = d.cardinality() as usize;
        let (mut rest, spikes) = match self.net.reset_mode() {
            ResetMode::None => (idx, None),
            ResetMode::SubtractThreshold => (idx >> n, Some(idx & ((1usize << n) - 1))),
        };
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push(d.min_value() + (rest % radix) as i128);
            rest /= radix;
        }
        let s = match spikes {
            None => self.net.spikes_of(&v),
            Some(mask) => (0..n).map(|i| mask >> i & 1 == 1).collect(),
        };
        NetworkState { v, s }
    }

    pub fn encode(&self, state: &NetworkState) -> usize {
        let d = self.net.domain();
        let radix = d.cardinality() as usize;
        let mut idx = 0usize;
        for &x in state.v.iter().rev() {
            idx = idx * radix + d.offset(x) as usize;
        }
        if self.net.reset_mode() == ResetMode::SubtractThreshold {
            let mask = state
                .s
                .iter()
                .enumerate()
                .fold(0usize, |m, (i, &s)| m | (usize::from(s) << i));
            idx = (idx << state.n()) | mask;
        }
        idx
    }

    pub fn to_document(&self) -> OracleDocument {
        OracleDocument {
            state_count: self.state_count,
            attractors: self
                .attractors
                .iter()
                .map(|a| AttractorDocument {
                    period: a.period,
                    basin_size: a.basin_size,
                    representative_state: a.representative.v.iter().map(|&x| x as i64).collect(),
                    representative_spikes: a
                        .representative
                        .s
                        .iter()
                        .map(|&s| u8::from(s))
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttractorDocument {
    pub period: usize,
    pub basin_size: usize,
    pub representative_state: Vec<i64>,
    pub representative_spikes: Vec<u8>,
}

/// JSON export of an enumerated state graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDocument {
    pub state_count: usize,
    pub attractors: Vec<AttractorDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub state: usize,
    pub oracle: (usize, usize),
    pub detected: CycleReport,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceCheck {
    pub states_checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl EquivalenceCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Run [`detect_cycle`] from every enumerated state and compare.
///
/// The horizon is the state count, which bounds every `transient + period`.
pub fn check_detection(graph: &StateGraph) -> Result<EquivalenceCheck> {
    let mut check = EquivalenceCheck::default();
    for idx in 0..graph.state_count() {
        let state = graph.decode(idx);
        let detected = detect_cycle(graph.network(), &state, graph.state_count())?;
        let (transient, period) = graph.orbit(idx);
        if detected != (CycleReport::Detected { transient, period }) {
            check.mismatches.push(Mismatch {
                state: idx,
                oracle: (transient, period),
                detected,
            });
        }
        check.states_checked += 1;
    }
    Ok(check)
}
