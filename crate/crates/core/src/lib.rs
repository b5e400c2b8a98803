//! Integer-state spiking networks simulated as finite deterministic maps.
//!
//! Potentials, weights and thresholds are bounded integers, leakage is a
//! right shift, and every run is reproducible from a 64-bit seed. The crate
//! measures recurrence (transient and period of the first repeated state),
//! activity statistics, and runs bit-width sweeps over random networks.

pub mod arith;
pub mod dynamics;
pub mod error;
pub mod metrics;
pub mod network;
#[cfg(any(test, feature = "oracles"))]
pub mod oracles;
pub mod raster;
pub mod rng;
pub mod sweep;

pub use arith::{leak_shift, IntegerDomain, OverflowMode, Signedness};
pub use dynamics::{
    check_detection, detect_cycle, enumerate_state_graph, run_streaming, simulate, CycleReport,
    StateGraph, Trajectory,
};
pub use error::{Error, Result};
pub use metrics::{MetricsRecord, SummaryRow};
pub use network::{Network, NetworkState, ResetMode, WeightMatrix};
pub use raster::SpikeRaster;
pub use sweep::{Cell, Manifest, SweepGrid};
