//! Reference engine: full scan selection and a full delta-table update per
//! iteration, O(n²).

use super::search::{Candidates, SearchState};
use super::{MoveRecord, SolverError, SolverParams};
use crate::bank::MoveState;
use crate::delta::{swap_delta_full, DeltaTable, MoveId};
use crate::{Cost, Instance};

pub struct DenseEngine<'a, C: Cost> {
    state: SearchState<'a, C>,
    last: Candidates<C>,
}

impl<'a, C: Cost> DenseEngine<'a, C> {
    pub fn new(inst: &'a Instance<C>, params: &SolverParams) -> Result<Self, SolverError> {
        let state = SearchState::new(inst, params, DeltaTable::from_scratch_full)?;
        Ok(Self { state, last: Candidates::default() })
    }

    pub fn state(&self) -> &SearchState<'a, C> {
        &self.state
    }

    pub fn last_candidates(&self) -> &Candidates<C> {
        &self.last
    }

    /// Minima per state by a pass over every move.
    pub fn scan(&self) -> Candidates<C> {
        let st = &self.state;
        let (now, asp) = (st.iter, st.settings.aspiration);
        let better = |cur: Option<(MoveId, C)>, d: C| cur.is_none_or(|(_, best)| d < best);
        let mut c = Candidates::default();
        for (i, (&d, &e)) in st.table.as_slice().iter().zip(&st.eligible).enumerate() {
            let m = MoveId::from_index(i);
            // Indices ascend, so strict comparisons keep the smallest index on ties.
            if better(c.global, d) {
                c.global = Some((m, d));
            }
            match MoveState::classify(now, e, asp) {
                MoveState::Aspired if better(c.aspired, d) => c.aspired = Some((m, d)),
                MoveState::Authorized if better(c.authorized, d) => c.authorized = Some((m, d)),
                MoveState::Ineligible if c.soonest.is_none_or(|(_, best)| e < best) => {
                    c.soonest = Some((m, e))
                }
                _ => {}
            }
        }
        c
    }

    pub fn step(&mut self) -> Result<MoveRecord<C>, SolverError> {
        self.state.clock.start();
        self.last = self.scan();
        let (m, rule) = self
            .last
            .choose(self.state.current_cost, self.state.best_cost)
            .ok_or(SolverError::NoMoves(self.state.inst.n()))?;
        let lap = self.state.clock.lap();
        self.state.clock.selection += lap;

        let record = self.state.commit(m, rule);
        self.update_table(record.r, record.s);
        let lap = self.state.clock.lap();
        self.state.clock.delta_update += lap;

        self.state.iter += 1;
        if self.state.debug_checks {
            self.state.check_exact()?;
        }
        Ok(record)
    }

    /// Every move disjoint from `{r, s}` by the O(1) incremental formula, the
    /// rest from scratch.
    fn update_table(&mut self, r: usize, s: usize) {
        let st = &mut self.state;
        let inst = st.inst;
        let p = &st.perm;
        let n = inst.n();
        let (fr, fs) = (inst.flow_row(r), inst.flow_row(s));
        let (dpr, dps) = (inst.dist_row(p.location(r)), inst.dist_row(p.location(s)));
        let deltas = st.table.as_mut_slice();
        let mut idx = 0;
        for v in 1..n {
            let pv = p.location(v);
            let v_moved = v == r || v == s;
            for u in 0..v {
                if v_moved || u == r || u == s {
                    deltas[idx] = swap_delta_full(inst, p, u, v);
                } else {
                    let flow_coef = fr[u] - fr[v] + fs[v] - fs[u];
                    if !flow_coef.is_zero() {
                        let pu = p.location(u);
                        let dist_coef = dps[pu] - dps[pv] + dpr[pv] - dpr[pu];
                        deltas[idx] = deltas[idx] + (flow_coef * dist_coef).twice();
                    }
                }
                idx += 1;
            }
        }
        st.touched += idx as u64;
    }
}
