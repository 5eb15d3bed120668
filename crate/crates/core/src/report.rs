//! Run reports: a versioned JSON-ready summary and a CSV move trace.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::solver::{EngineKind, MoveRecord, PhaseSeconds, RunResult, SolverParams};
use crate::Cost;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport<C> {
    pub version: u32,
    pub instance: String,
    pub n: usize,
    pub engine: EngineKind,
    pub params: SolverParams,
    pub best_cost: C,
    pub best_permutation: Vec<usize>,
    pub iterations: u64,
    pub wall_seconds: f64,
    /// Zero when the run was not instrumented.
    pub phase_seconds: PhaseSeconds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_path: Option<String>,
}

impl<C: Cost> RunReport<C> {
    pub fn new(instance: impl Into<String>, params: &SolverParams, result: &RunResult<C>, trace_path: Option<String>) -> Self {
        Self {
            version: REPORT_VERSION,
            instance: instance.into(),
            n: result.best_permutation.len(),
            engine: result.engine,
            params: params.clone(),
            best_cost: result.best_cost,
            best_permutation: result.best_permutation.clone(),
            iterations: result.iterations,
            wall_seconds: result.wall_seconds,
            phase_seconds: result.phases.unwrap_or_default(),
            trace_path,
        }
    }
}

/// Writes the trace as CSV with header `iter,r,s,delta,rule,cost_after,tenure`.
pub fn write_trace_csv<C: Cost, W: Write>(trace: &[MoveRecord<C>], writer: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    for rec in trace {
        w.serialize(rec)?;
    }
    w.flush()?;
    Ok(())
}
