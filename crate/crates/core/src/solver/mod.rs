//! Robust tabu search, dense and sparse.
//!
//! One iteration: pick a move by the three selection rules, swap, draw a tabu
//! tenure, and bring every delta up to date. The rules, in order:
//!
//! 1. If the best delta overall would beat the best cost seen so far, take
//!    it, whatever its tabu state.
//! 2. Otherwise take the best aspired move, if any.
//! 3. Otherwise take the best authorized move, if any.
//!
//! When every move is ineligible the one that becomes eligible soonest is
//! taken. All minima break ties by [`MoveId`](crate::MoveId) index.

mod dense;
mod search;
mod sparse;
mod verify;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::Violation;
use crate::{Cost, Instance};

pub use dense::DenseEngine;
pub use search::{Candidates, SearchState};
pub use sparse::SparseEngine;
pub use verify::{verify_equivalence, Divergence, EquivalenceReport};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("instance rejected: {0}")]
    InvalidInstance(Violation),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("instance of size {0} has no swap moves")]
    NoMoves(usize),
    #[error("debug check failed at iteration {iteration}: {message}")]
    CheckFailed { iteration: u64, message: String },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialPermutation {
    #[default]
    Random,
    Identity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Dense,
    Sparse,
}

impl std::fmt::Display for EngineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EngineKind::Dense => "dense",
            EngineKind::Sparse => "sparse",
        })
    }
}

/// Search parameters. Tenure bounds and the aspiration constant default to
/// values derived from the instance size, see [`SolverParams::resolve`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverParams {
    pub iterations: u64,
    pub seed: u64,
    pub tenure_min: Option<u64>,
    pub tenure_max: Option<u64>,
    pub aspiration: Option<u64>,
    pub initial: InitialPermutation,
    /// Recheck costs, the delta table and the queue bank after every move.
    pub debug_checks: bool,
    /// Collect per-phase timings.
    pub instrument: bool,
    /// Keep every [`MoveRecord`] in the result.
    pub record_trace: bool,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            iterations: 10_000,
            seed: 0,
            tenure_min: None,
            tenure_max: None,
            aspiration: None,
            initial: InitialPermutation::Random,
            debug_checks: false,
            instrument: false,
            record_trace: true,
        }
    }
}

/// Concrete tabu parameters for one instance size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TabuSettings {
    pub tenure_min: u64,
    pub tenure_max: u64,
    pub aspiration: u64,
}

impl SolverParams {
    pub fn with_iterations(mut self, iterations: u64) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Defaults: tenure uniform on `[⌊0.9n⌋, ⌈1.1n⌉]` (at least 1), and
    /// `A = 5n²`.
    pub fn resolve(&self, n: usize) -> Result<TabuSettings, SolverError> {
        let n = n as u64;
        let tenure_min = self.tenure_min.unwrap_or((9 * n / 10).max(1));
        let tenure_max = self.tenure_max.unwrap_or((11 * n).div_ceil(10).max(tenure_min));
        let aspiration = self.aspiration.unwrap_or(5 * n * n);
        if tenure_min == 0 || tenure_min > tenure_max {
            return Err(SolverError::InvalidParams(format!(
                "tenure range [{tenure_min}, {tenure_max}] must satisfy 1 ≤ min ≤ max"
            )));
        }
        if aspiration <= tenure_max {
            return Err(SolverError::InvalidParams(format!(
                "aspiration constant {aspiration} must exceed the maximum tenure {tenure_max}"
            )));
        }
        Ok(TabuSettings { tenure_min, tenure_max, aspiration })
    }
}

/// Which selection rule picked a move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// Improves on the best cost found so far.
    Rule1,
    /// Best aspired move.
    Rule2,
    /// Best authorized move.
    Rule3,
    /// Every move ineligible; soonest-eligible move.
    Fallback,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord<C> {
    pub iter: u64,
    pub r: usize,
    pub s: usize,
    pub delta: C,
    pub rule: Rule,
    pub cost_after: C,
    pub tenure: u64,
}

/// Accumulated seconds per phase of the iteration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseSeconds {
    /// Finding the move: full scan (dense) or validated queue peeks (sparse).
    pub selection: f64,
    /// Delta table maintenance.
    pub delta_update: f64,
    /// Queue migration, resets and key updates (sparse only).
    pub queue_ops: f64,
}

impl PhaseSeconds {
    pub fn total(&self) -> f64 {
        self.selection + self.delta_update + self.queue_ops
    }

    /// Share of the instrumented time spent updating the priority queues:
    /// state migrations, resets of executed moves and delta key updates.
    /// Validated peeks count as selection.
    pub fn queue_fraction(&self, engine: EngineKind) -> f64 {
        let total = self.total();
        if total <= 0.0 {
            return 0.0;
        }
        match engine {
            EngineKind::Dense => 0.0,
            EngineKind::Sparse => (self.queue_ops / total).clamp(0.0, 1.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult<C> {
    pub engine: EngineKind,
    pub iterations: u64,
    pub initial_cost: C,
    pub final_cost: C,
    pub best_cost: C,
    pub best_permutation: Vec<usize>,
    pub trace: Vec<MoveRecord<C>>,
    pub wall_seconds: f64,
    pub phases: Option<PhaseSeconds>,
    /// Delta entries recomputed or incrementally updated over the run.
    pub touched_entries: u64,
}

/// Either engine behind one interface.
pub enum Engine<'a, C: Cost> {
    Dense(DenseEngine<'a, C>),
    Sparse(SparseEngine<'a, C>),
}

impl<'a, C: Cost> Engine<'a, C> {
    pub fn new(kind: EngineKind, inst: &'a Instance<C>, params: &SolverParams) -> Result<Self, SolverError> {
        Ok(match kind {
            EngineKind::Dense => Engine::Dense(DenseEngine::new(inst, params)?),
            EngineKind::Sparse => Engine::Sparse(SparseEngine::new(inst, params)?),
        })
    }

    pub fn kind(&self) -> EngineKind {
        match self {
            Engine::Dense(_) => EngineKind::Dense,
            Engine::Sparse(_) => EngineKind::Sparse,
        }
    }

    pub fn step(&mut self) -> Result<MoveRecord<C>, SolverError> {
        match self {
            Engine::Dense(e) => e.step(),
            Engine::Sparse(e) => e.step(),
        }
    }

    pub fn state(&self) -> &SearchState<'a, C> {
        match self {
            Engine::Dense(e) => e.state(),
            Engine::Sparse(e) => e.state(),
        }
    }

    pub fn last_candidates(&self) -> &Candidates<C> {
        match self {
            Engine::Dense(e) => e.last_candidates(),
            Engine::Sparse(e) => e.last_candidates(),
        }
    }
}

/// Runs `params.iterations` steps of the chosen engine.
pub fn run<C: Cost>(inst: &Instance<C>, params: &SolverParams, kind: EngineKind) -> Result<RunResult<C>, SolverError> {
    let started = Instant::now();
    let mut engine = Engine::new(kind, inst, params)?;
    let initial_cost = engine.state().current_cost();
    let mut trace = Vec::with_capacity(if params.record_trace { params.iterations as usize } else { 0 });
    for _ in 0..params.iterations {
        let rec = engine.step()?;
        if params.record_trace {
            trace.push(rec);
        }
    }
    let state = engine.state();
    Ok(RunResult {
        engine: kind,
        iterations: params.iterations,
        initial_cost,
        final_cost: state.current_cost(),
        best_cost: state.best_cost(),
        best_permutation: state.best_permutation().locations().to_vec(),
        trace,
        wall_seconds: started.elapsed().as_secs_f64(),
        phases: params.instrument.then(|| state.phases()),
        touched_entries: state.touched_entries(),
    })
}
