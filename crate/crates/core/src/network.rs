//! Network construction and the one-step update map.

use serde::{Deserialize, Serialize};

use crate::arith::{leak_shift, IntegerDomain, OverflowMode, Signedness};
use crate::error::{Error, Result};
use crate::rng::Xoshiro256StarStar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResetMode {
    /// Membranes keep their value after a spike.
    #[default]
    None,
    /// A spiking neuron loses its threshold: `v <- clamp(v - theta)`.
    SubtractThreshold,
}

/// Dense `n x n` weight matrix; `weight(i, j)` is the synapse from `j` onto `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    n: usize,
    data: Vec<i64>,
}

impl WeightMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    /// Build from `(post, pre, weight)` triplets. Later duplicates overwrite.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, i64)]) -> Result<Self> {
        let mut m = Self::zeros(n);
        for &(i, j, w) in triplets {
            if i >= n || j >= n {
                return Err(Error::InvalidNetwork(format!(
                    "synapse ({i}, {j}) outside {n} neurons"
                )));
            }
            m.data[i * n + j] = w;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, post: usize, pre: usize) -> i64 {
        self.data[post * self.n + pre]
    }

    pub fn set(&mut self, post: usize, pre: usize, w: i64) {
        self.data[post * self.n + pre] = w;
    }

    pub fn row(&self, post: usize) -> &[i64] {
        &self.data[post * self.n..(post + 1) * self.n]
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|&&w| w != 0).count()
    }

    /// Nonzero entries in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0)
            .map(|(idx, &w)| (idx / n, idx % n, w))
            .collect()
    }
}

/// Random sparse connectivity.
///
/// Each off-diagonal entry, visited in row-major order, is present with
/// probability `density`; present entries take a value uniformly from the
/// nonzero integers of `[weight_lo, weight_hi]`.
pub fn generate_topology(
    n: usize,
    density: f64,
    weight_lo: i64,
    weight_hi: i64,
    seed: u64,
) -> Result<WeightMatrix> {
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidDensity(density));
    }
    if weight_lo > weight_hi || (weight_lo == 0 && weight_hi == 0) {
        return Err(Error::InvalidRange {
            what: "weight",
            lo: weight_lo,
            hi: weight_hi,
        });
    }
    // Zero is skipped by drawing from a range one shorter and shifting the
    // upper half up by one.
    let spans_zero = weight_lo <= 0 && weight_hi >= 0;
    let hi = if spans_zero { weight_hi - 1 } else { weight_hi };
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let mut m = WeightMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i == j || !rng.bernoulli(density) {
                continue;
            }
            let mut w = rng.range_inclusive(weight_lo as i128, hi as i128) as i64;
            if spans_zero && w >= 0 {
                w += 1;
            }
            m.set(i, j, w);
        }
    }
    Ok(m)
}

/// Thresholds uniform on the inclusive range `[lo, hi]`.
pub fn sample_thresholds(n: usize, lo: i64, hi: i64, seed: u64) -> Result<Vec<i64>> {
    if lo < 1 || lo > hi {
        return Err(Error::InvalidRange {
            what: "threshold",
            lo,
            hi,
        });
    }
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| rng.range_inclusive(lo as i128, hi as i128) as i64)
        .collect())
}

/// Seeds a network was generated from, kept for serialization.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SeedProvenance {
    pub master_seed: Option<u64>,
    pub topology_seed: Option<u64>,
    pub threshold_seed: Option<u64>,
    pub density: Option<f64>,
    pub weight_range: Option<(i64, i64)>,
    pub threshold_range: Option<(i64, i64)>,
}

/// The autonomous update map: weights, thresholds, leak and register format.
#[derive(Clone, Debug)]
pub struct Network {
    weights: WeightMatrix,
    thresholds: Vec<i64>,
    leak_k: u32,
    domain: IntegerDomain,
    reset_mode: ResetMode,
    provenance: SeedProvenance,
    // Outgoing synapses of each neuron as (post, weight); input accumulation
    // only walks the neurons that spiked.
    fanout: Vec<Vec<(u32, i64)>>,
}

impl Network {
    pub fn new(
        weights: WeightMatrix,
        thresholds: Vec<i64>,
        leak_k: u32,
        domain: IntegerDomain,
        reset_mode: ResetMode,
    ) -> Result<Self> {
        let n = weights.n();
        if n == 0 {
            return Err(Error::EmptyNetwork);
        }
        if thresholds.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: thresholds.len(),
            });
        }
        if !(1..=64).contains(&leak_k) {
            return Err(Error::InvalidLeakShift(leak_k));
        }
        if let Some(i) = (0..n).find(|&i| weights.weight(i, i) != 0) {
            return Err(Error::InvalidNetwork(format!(
                "self-connection on neuron {i}"
            )));
        }
        if let Some(t) = thresholds.iter().find(|&&t| t < 1) {
            return Err(Error::InvalidNetwork(format!("threshold {t} below 1")));
        }
        let mut fanout = vec![Vec::new(); n];
        for (i, j, w) in weights.triplets() {
            fanout[j].push((i as u32, w));
        }
        Ok(Self {
            weights,
            thresholds,
            leak_k,
            domain,
            reset_mode,
            provenance: SeedProvenance::default(),
            fanout,
        })
    }

    pub fn with_provenance(mut self, provenance: SeedProvenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn thresholds(&self) -> &[i64] {
        &self.thresholds
    }

    pub fn leak_k(&self) -> u32 {
        self.leak_k
    }

    /// Decay factor `1 - 2^-k` realised by the shift.
    pub fn alpha(&self) -> f64 {
        1.0 - 0.5f64.powi(self.leak_k as i32)
    }

    pub fn domain(&self) -> &IntegerDomain {
        &self.domain
    }

    pub fn reset_mode(&self) -> ResetMode {
        self.reset_mode
    }

    pub fn provenance(&self) -> &SeedProvenance {
        &self.provenance
    }

    /// Spike rule applied to a membrane vector.
    pub fn spikes_of(&self, v: &[i128]) -> Vec<bool> {
        v.iter()
            .zip(&self.thresholds)
            .map(|(&v, &th)| v >= th as i128)
            .collect()
    }

    /// Build a state from membranes, deriving spikes by the spike rule.
    pub fn state_from_membranes(&self, v: Vec<i128>) -> Result<NetworkState> {
        self.check_len(v.len())?;
        if let Some(x) = v.iter().find(|&&x| !self.domain.contains(x)) {
            return Err(Error::InvalidNetwork(format!(
                "potential {x} outside domain"
            )));
        }
        let s = self.spikes_of(&v);
        Ok(NetworkState { v, s })
    }

    /// Membranes uniform over the full domain; spikes from the spike rule.
    pub fn initial_state(&self, seed: u64) -> NetworkState {
        let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
        let lo = self.domain.min_value();
        let hi = self.domain.max_value();
        let v: Vec<i128> = (0..self.n()).map(|_| rng.range_inclusive(lo, hi)).collect();
        let s = self.spikes_of(&v);
        NetworkState { v, s }
    }

    pub fn zero_state(&self) -> NetworkState {
        let v = vec![0i128.clamp(self.domain.min_value(), self.domain.max_value()); self.n()];
        let s = self.spikes_of(&v);
        NetworkState { v, s }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: len,
            });
        }
        Ok(())
    }

    /// Checks dimensions and that every potential lies in the domain.
    pub fn validate_state(&self, state: &NetworkState) -> Result<()> {
        self.check_len(state.v.len())?;
        self.check_len(state.s.len())?;
        if let Some(x) = state.v.iter().find(|&&x| !self.domain.contains(x)) {
            return Err(Error::InvalidNetwork(format!(
                "potential {x} outside domain"
            )));
        }
        Ok(())
    }

    /// One application of the update map.
    pub fn step(&self, state: &NetworkState) -> Result<NetworkState> {
        self.validate_state(state)?;
        let mut next = state.clone();
        let mut input = vec![0i128; self.n()];
        self.step_into(state, &mut next, &mut input);
        Ok(next)
    }

    /// Allocation-free step; `input` is scratch of length `n`.
    ///
    /// Synaptic input is summed in `i128` and clamped once, after the leak.
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn step_into(
        &self,
        state: &NetworkState,
        next: &mut NetworkState,
        input: &mut [i128],
    ) {
        input.iter_mut().for_each(|x| *x = 0);
        for (j, _) in state.s.iter().enumerate().filter(|(_, &s)| s) {
            for &(i, w) in &self.fanout[j] {
                input[i as usize] += w as i128;
            }
        }
        for i in 0..self.n() {
            let th = self.thresholds[i] as i128;
            let raw = leak_shift(state.v[i], self.leak_k) + input[i];
            let mut v = self.domain.clamp(raw);
            let fired = v >= th;
            if fired && self.reset_mode == ResetMode::SubtractThreshold {
                v = self.domain.clamp(v - th);
            }
            next.v[i] = v;
            next.s[i] = fired;
        }
    }

    pub fn to_document(&self) -> NetworkDocument {
        NetworkDocument {
            n: self.n(),
            bits: self.domain.bits(),
            signedness: self.domain.signedness(),
            overflow_mode: self.domain.overflow_mode(),
            leak_k: self.leak_k,
            reset_mode: self.reset_mode,
            thresholds: self.thresholds.clone(),
            weights: self.weights.triplets().into_iter().collect(),
            seed_provenance: self.provenance.clone(),
        }
    }

    pub fn from_document(doc: &NetworkDocument) -> Result<Self> {
        let domain = IntegerDomain::new(doc.bits, doc.signedness, doc.overflow_mode)?;
        let weights = WeightMatrix::from_triplets(doc.n, &doc.weights)?;
        Ok(Self::new(
            weights,
            doc.thresholds.clone(),
            doc.leak_k,
            domain,
            doc.reset_mode,
        )?
        .with_provenance(doc.seed_provenance.clone()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(s)?)
    }
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights
            && self.thresholds == other.thresholds
            && self.leak_k == other.leak_k
            && self.domain == other.domain
            && self.reset_mode == other.reset_mode
            && self.provenance == other.provenance
    }
}

/// Serialized network; weights are a sparse `[post, pre, weight]` list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub n: usize,
    pub bits: u32,
    pub signedness: Signedness,
    pub overflow_mode: OverflowMode,
    pub leak_k: u32,
    pub reset_mode: ResetMode,
    pub thresholds: Vec<i64>,
    pub weights: Vec<(usize, usize, i64)>,
    pub seed_provenance: SeedProvenance,
}

/// Membrane potentials and the current spike vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NetworkState {
    pub v: Vec<i128>,
    pub s: Vec<bool>,
}

impl NetworkState {
    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn spike_count(&self) -> usize {
        self.s.iter().filter(|&&s| s).count()
    }
}
