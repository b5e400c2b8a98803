//! Iterating the update map: trajectories, recurrence detection and the
//! exhaustive state-graph oracle.

mod cycle;
mod oracle;
mod trajectory;

pub use cycle::{detect_cycle, CycleDetector, CycleReport};
pub use oracle::{
    check_detection, enumerate_state_graph, state_space_size, Attractor, EquivalenceCheck,
    Mismatch, OracleDocument, StateGraph, DEFAULT_STATE_BUDGET,
};
pub use trajectory::{run_streaming, simulate, StreamSummary, Trajectory};
