//! Lockstep comparison of the two engines.

use serde::Serialize;

use super::search::Candidates;
use super::{DenseEngine, MoveRecord, SolverError, SolverParams, SparseEngine};
use crate::delta::MoveId;
use crate::{Cost, Instance};

/// First point where the engines disagree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divergence<C> {
    pub iteration: u64,
    pub dense: Option<MoveRecord<C>>,
    pub sparse: Option<MoveRecord<C>>,
    pub dense_candidates: Candidates<C>,
    pub sparse_candidates: Candidates<C>,
    /// First delta-table entry that differs after the iteration, if any:
    /// `(move, dense value, sparse value)`.
    pub table_mismatch: Option<(MoveId, C, C)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum EquivalenceReport<C> {
    Identical { iterations: u64, best_cost: C },
    Diverged(Box<Divergence<C>>),
}

impl<C> EquivalenceReport<C> {
    pub fn is_identical(&self) -> bool {
        matches!(self, EquivalenceReport::Identical { .. })
    }
}

/// Runs both engines side by side for `params.iterations` steps and stops at
/// the first differing move record. With `params.debug_checks` the delta
/// tables are also compared after every step.
pub fn verify_equivalence<C: Cost>(inst: &Instance<C>, params: &SolverParams) -> Result<EquivalenceReport<C>, SolverError> {
    let dense = DenseEngine::new(inst, params)?;
    let sparse = SparseEngine::new(inst, params)?;
    lockstep(dense, sparse, params.iterations, params.debug_checks)
}

pub(crate) fn lockstep<C: Cost>(
    mut dense: DenseEngine<'_, C>,
    mut sparse: SparseEngine<'_, C>,
    iterations: u64,
    compare_tables: bool,
) -> Result<EquivalenceReport<C>, SolverError> {
    for _ in 0..iterations {
        let iteration = dense.state().iteration();
        let a = dense.step()?;
        let b = sparse.step()?;
        let table_mismatch = dense.state().table().first_mismatch(sparse.state().table());
        if a != b || (compare_tables && table_mismatch.is_some()) {
            return Ok(EquivalenceReport::Diverged(Box::new(Divergence {
                iteration,
                dense: Some(a),
                sparse: Some(b),
                dense_candidates: *dense.last_candidates(),
                sparse_candidates: *sparse.last_candidates(),
                table_mismatch,
            })));
        }
    }
    let (ds, ss) = (dense.state(), sparse.state());
    if ds.best_cost() != ss.best_cost() || ds.best_permutation() != ss.best_permutation() {
        return Ok(EquivalenceReport::Diverged(Box::new(Divergence {
            iteration: ds.iteration(),
            dense: None,
            sparse: None,
            dense_candidates: *dense.last_candidates(),
            sparse_candidates: *sparse.last_candidates(),
            table_mismatch: ds.table().first_mismatch(ss.table()),
        })));
    }
    Ok(EquivalenceReport::Identical { iterations, best_cost: ds.best_cost() })
}
