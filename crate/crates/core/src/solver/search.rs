//! State and bookkeeping shared by both engines.

use std::time::{Duration, Instant};

use rand::Rng;
use serde::Serialize;

use super::{InitialPermutation, MoveRecord, PhaseSeconds, Rule, SolverError, SolverParams, TabuSettings};
use crate::delta::{total_cost, DeltaTable, MoveId};
use crate::rng::{self, SplitMix64};
use crate::{Cost, Instance, Permutation};

/// The per-state minima an engine found before choosing a move.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Candidates<C> {
    /// Smallest delta over all moves.
    pub global: Option<(MoveId, C)>,
    pub aspired: Option<(MoveId, C)>,
    pub authorized: Option<(MoveId, C)>,
    /// Ineligible move with the smallest eligible iteration.
    pub soonest: Option<(MoveId, u64)>,
}

impl<C: Cost> Candidates<C> {
    /// Applies the selection rules.
    pub fn choose(&self, current_cost: C, best_cost: C) -> Option<(MoveId, Rule)> {
        if let Some((m, d)) = self.global {
            if current_cost + d < best_cost {
                return Some((m, Rule::Rule1));
            }
        }
        if let Some((m, _)) = self.aspired {
            return Some((m, Rule::Rule2));
        }
        if let Some((m, _)) = self.authorized {
            return Some((m, Rule::Rule3));
        }
        self.soonest.map(|(m, _)| (m, Rule::Fallback))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct PhaseClock {
    enabled: bool,
    mark: Option<Instant>,
    pub(crate) selection: Duration,
    pub(crate) delta_update: Duration,
    pub(crate) queue_ops: Duration,
}

impl PhaseClock {
    fn new(enabled: bool) -> Self {
        Self { enabled, ..Default::default() }
    }

    #[inline]
    pub(crate) fn start(&mut self) {
        if self.enabled {
            self.mark = Some(Instant::now());
        }
    }

    /// Time since the previous mark, and a new mark.
    #[inline]
    pub(crate) fn lap(&mut self) -> Duration {
        match self.mark {
            Some(prev) => {
                let now = Instant::now();
                self.mark = Some(now);
                now - prev
            }
            None => Duration::ZERO,
        }
    }

    fn seconds(&self) -> PhaseSeconds {
        PhaseSeconds {
            selection: self.selection.as_secs_f64(),
            delta_update: self.delta_update.as_secs_f64(),
            queue_ops: self.queue_ops.as_secs_f64(),
        }
    }
}

/// Everything about a run except the engine-specific move index.
#[derive(Clone, Debug)]
pub struct SearchState<'a, C: Cost> {
    pub(crate) inst: &'a Instance<C>,
    pub(crate) settings: TabuSettings,
    pub(crate) debug_checks: bool,
    pub(crate) perm: Permutation,
    pub(crate) current_cost: C,
    pub(crate) best_cost: C,
    pub(crate) best_perm: Permutation,
    pub(crate) iter: u64,
    pub(crate) eligible: Vec<u64>,
    pub(crate) table: DeltaTable<C>,
    pub(crate) rng: SplitMix64,
    pub(crate) clock: PhaseClock,
    pub(crate) touched: u64,
    pub(crate) tenure_draws: u64,
}

impl<'a, C: Cost> SearchState<'a, C> {
    pub(crate) fn new(
        inst: &'a Instance<C>,
        params: &SolverParams,
        build_table: impl FnOnce(&Instance<C>, &Permutation) -> DeltaTable<C>,
    ) -> Result<Self, SolverError> {
        if let Some(v) = inst.validate().into_iter().next() {
            return Err(SolverError::InvalidInstance(v));
        }
        let n = inst.n();
        if n < 2 {
            return Err(SolverError::NoMoves(n));
        }
        let settings = params.resolve(n)?;
        let mut rng = rng::from_seed(params.seed);
        let perm = match params.initial {
            InitialPermutation::Random => Permutation::random(n, &mut rng),
            InitialPermutation::Identity => Permutation::identity(n),
        };
        let table = build_table(inst, &perm);
        let cost = total_cost(inst, &perm);
        Ok(Self {
            inst,
            settings,
            debug_checks: params.debug_checks,
            best_perm: perm.clone(),
            perm,
            current_cost: cost,
            best_cost: cost,
            iter: 1,
            eligible: vec![0; MoveId::count(n)],
            table,
            rng,
            clock: PhaseClock::new(params.instrument),
            touched: 0,
            tenure_draws: 0,
        })
    }

    pub fn instance(&self) -> &'a Instance<C> {
        self.inst
    }

    pub fn settings(&self) -> TabuSettings {
        self.settings
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn current_cost(&self) -> C {
        self.current_cost
    }

    pub fn best_cost(&self) -> C {
        self.best_cost
    }

    pub fn best_permutation(&self) -> &Permutation {
        &self.best_perm
    }

    /// Number of the iteration the next step will run (starts at 1).
    pub fn iteration(&self) -> u64 {
        self.iter
    }

    pub fn eligible(&self, m: MoveId) -> u64 {
        self.eligible[m.index()]
    }

    pub fn eligible_iterations(&self) -> &[u64] {
        &self.eligible
    }

    pub fn table(&self) -> &DeltaTable<C> {
        &self.table
    }

    pub fn phases(&self) -> PhaseSeconds {
        self.clock.seconds()
    }

    pub fn touched_entries(&self) -> u64 {
        self.touched
    }

    /// Tenure draws so far; one per committed move.
    pub fn tenure_draws(&self) -> u64 {
        self.tenure_draws
    }

    /// Executes `m`: swap, tenure draw, cost and best-so-far bookkeeping. The
    /// delta table is left for the engine to refresh.
    pub(crate) fn commit(&mut self, m: MoveId, rule: Rule) -> MoveRecord<C> {
        let (r, s) = m.pair();
        let delta = self.table.get(m);
        self.perm.apply_swap(r, s).expect("move pairs are distinct and in range");
        let tenure = self.rng.gen_range(self.settings.tenure_min..=self.settings.tenure_max);
        self.tenure_draws += 1;
        self.eligible[m.index()] = self.iter + tenure;
        self.current_cost = self.current_cost + delta;
        if self.current_cost < self.best_cost {
            self.best_cost = self.current_cost;
            self.best_perm.clone_from(&self.perm);
        }
        MoveRecord { iter: self.iter, r, s, delta, rule, cost_after: self.current_cost, tenure }
    }

    /// Cost and delta table against from-scratch evaluation.
    pub(crate) fn check_exact(&self) -> Result<(), SolverError> {
        let fail = |message: String| SolverError::CheckFailed { iteration: self.iter, message };
        let cost = total_cost(self.inst, &self.perm);
        if cost != self.current_cost {
            return Err(fail(format!("tracked cost {} but recomputed {}", self.current_cost, cost)));
        }
        let fresh = DeltaTable::from_scratch_full(self.inst, &self.perm);
        if let Some((m, have, want)) = self.table.first_mismatch(&fresh) {
            return Err(fail(format!("delta of move {m} is {have}, recomputed {want}")));
        }
        Ok(())
    }
}
