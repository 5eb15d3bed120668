//! Robust tabu search for sparse quadratic assignment problems.
//!
//! Two search engines share one parameter, randomness and trace contract:
//!
//! - [`solver::DenseEngine`] scans every swap move each iteration and keeps the
//!   full delta table current with the classic incremental formula, O(N²) per
//!   iteration.
//! - [`solver::SparseEngine`] keeps every move in one of five lazily repaired
//!   priority queues (see [`bank`]) and only recomputes the deltas touched by
//!   the flow-graph neighbourhood of the swapped pair, O(N) per iteration for
//!   practical sizes.
//!
//! Given the same instance, parameters and seed both engines emit identical
//! move traces; [`solver::verify_equivalence`] checks this in lockstep.
//!
//! All arithmetic is exact. The library is generic over the signed integer
//! cost type ([`Cost`]); [`QapInstance`] and friends fix it to `i64`.

pub mod bank;
pub mod bench;
mod cost;
pub mod delta;
pub mod instance;
pub mod permutation;
pub mod queue;
pub mod report;
pub mod rng;
pub mod solver;

pub use cost::Cost;
pub use delta::{DeltaTable, MoveId};
pub use instance::{GeneratorConfig, Instance, InstanceError, MatrixOrder, Violation};
pub use permutation::Permutation;
pub use queue::LazyIndexedQueue;
pub use solver::{EngineKind, MoveRecord, RunResult, SolverError, SolverParams};

/// Instance with 64-bit costs, the default for everything the CLI touches.
pub type QapInstance = Instance<i64>;
/// Instance with 32-bit costs; only suitable for small matrices.
pub type QapInstance32 = Instance<i32>;
pub type QapDeltaTable = DeltaTable<i64>;
pub type QapRunResult = RunResult<i64>;
pub type QapMoveRecord = MoveRecord<i64>;
