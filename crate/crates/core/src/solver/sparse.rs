//! Queue-bank engine: O(n) delta maintenance through flow adjacency lists and
//! move selection through five lazily repaired priority queues.

use super::search::{Candidates, SearchState};
use super::{MoveRecord, SolverError, SolverParams};
use crate::bank::{MoveState, QueueBank, Transition};
use crate::delta::{DeltaTable, MoveId, RefreshStats, Refresher};
use crate::{Cost, Instance};

pub struct SparseEngine<'a, C: Cost> {
    state: SearchState<'a, C>,
    bank: QueueBank<C>,
    refresher: Refresher<C>,
    changes: Vec<(MoveId, C)>,
    transitions: Vec<Transition>,
    last: Candidates<C>,
    last_refresh: RefreshStats,
}

impl<'a, C: Cost> SparseEngine<'a, C> {
    pub fn new(inst: &'a Instance<C>, params: &SolverParams) -> Result<Self, SolverError> {
        let state = SearchState::new(inst, params, DeltaTable::from_scratch_sparse)?;
        let bank = QueueBank::new(state.table.as_slice(), &state.eligible);
        Ok(Self::assemble(state, bank))
    }

    fn assemble(state: SearchState<'a, C>, bank: QueueBank<C>) -> Self {
        let refresher = Refresher::new(state.inst, &state.perm);
        Self {
            state,
            bank,
            refresher,
            changes: Vec::new(),
            transitions: Vec::new(),
            last: Candidates::default(),
            last_refresh: RefreshStats::default(),
        }
    }

    pub fn state(&self) -> &SearchState<'a, C> {
        &self.state
    }

    pub fn bank(&self) -> &QueueBank<C> {
        &self.bank
    }

    pub fn last_candidates(&self) -> &Candidates<C> {
        &self.last
    }

    /// Counters of the most recent delta refresh.
    pub fn last_refresh(&self) -> RefreshStats {
        self.last_refresh
    }

    fn peek_candidates(&mut self) -> Candidates<C> {
        let aspired = self.bank.min_delta(MoveState::Aspired);
        let authorized = self.bank.min_delta(MoveState::Authorized);
        let ineligible = self.bank.min_delta(MoveState::Ineligible);
        let bank = &self.bank;
        let global = [aspired, authorized, ineligible]
            .into_iter()
            .flatten()
            .min_by_key(|&(m, d)| (d, bank.tie_key(m)));
        let soonest = self.bank.soonest_eligible();
        Candidates { global, aspired, authorized, soonest }
    }

    pub fn step(&mut self) -> Result<MoveRecord<C>, SolverError> {
        let (now, asp) = (self.state.iter, self.state.settings.aspiration);
        self.state.clock.start();
        self.transitions.clear();
        self.bank.migrate_states_into(now, asp, &mut self.transitions);
        let lap = self.state.clock.lap();
        self.state.clock.queue_ops += lap;
        if self.state.debug_checks {
            self.bank
                .audit(self.state.table.as_slice(), &self.state.eligible, now, asp)
                .map_err(|message| SolverError::CheckFailed { iteration: now, message })?;
        }
        self.state.clock.start();

        self.last = self.peek_candidates();
        let (m, rule) = self
            .last
            .choose(self.state.current_cost, self.state.best_cost)
            .ok_or(SolverError::NoMoves(self.state.inst.n()))?;
        let lap = self.state.clock.lap();
        self.state.clock.selection += lap;

        let record = self.state.commit(m, rule);
        self.changes.clear();
        let st = &mut self.state;
        self.last_refresh = self.refresher.refresh(st.inst, &st.perm, &mut st.table, record.r, record.s, &mut self.changes);
        st.touched += self.last_refresh.touched() as u64;
        let lap = st.clock.lap();
        st.clock.delta_update += lap;

        self.bank.reset_to_ineligible(m, st.eligible[m.index()], st.table.get(m));
        for &(id, d) in &self.changes {
            self.bank.update_delta(id, d);
        }
        let lap = st.clock.lap();
        st.clock.queue_ops += lap;

        st.iter += 1;
        if st.debug_checks {
            st.check_exact()?;
        }
        Ok(record)
    }
}

#[cfg(test)]
impl<'a, C: Cost> SparseEngine<'a, C> {
    /// Mutant whose delta queues break ties by descending move index.
    pub(crate) fn with_reversed_ties(inst: &'a Instance<C>, params: &SolverParams) -> Result<Self, SolverError> {
        let state = SearchState::new(inst, params, DeltaTable::from_scratch_sparse)?;
        let bank = QueueBank::with_reversed_ties(state.table.as_slice(), &state.eligible);
        Ok(Self::assemble(state, bank))
    }

    /// Mutant that never applies neighbourhood (incremental) delta updates.
    pub(crate) fn without_incremental_updates(inst: &'a Instance<C>, params: &SolverParams) -> Result<Self, SolverError> {
        let mut e = Self::new(inst, params)?;
        e.refresher.skip_incremental = true;
        Ok(e)
    }
}
