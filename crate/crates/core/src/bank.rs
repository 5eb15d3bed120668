//! The five-queue bank that tracks every move's tabu state.
//!
//! A move is *ineligible* while `current ≤ eligible`, *authorized* once
//! `current > eligible`, and *aspired* once `current − A > eligible`, where
//! `A` is the aspiration constant. Each state has a delta queue holding its
//! moves ordered by `(delta, move)`. Ineligible and authorized moves also sit
//! in a tabu queue ordered by eligible iteration, which tells
//! [`QueueBank::migrate_states`] exactly which moves change state as the
//! iteration counter advances. Aspired moves stay aspired until executed.

use serde::Serialize;

use crate::delta::MoveId;
use crate::queue::{KeyUpdate, LazyIndexedQueue};
use crate::Cost;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveState {
    Ineligible,
    Authorized,
    Aspired,
}

impl MoveState {
    /// State of a move at `current` given its eligible iteration.
    #[inline]
    pub fn classify(current: u64, eligible: u64, aspiration: u64) -> Self {
        if current <= eligible {
            MoveState::Ineligible
        } else if eligible.saturating_add(aspiration) < current {
            MoveState::Aspired
        } else {
            MoveState::Authorized
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub id: MoveId,
    pub from: MoveState,
    pub to: MoveState,
}

#[derive(Clone, Debug)]
pub struct QueueBank<C> {
    ineligible_tabu: LazyIndexedQueue<u64>,
    authorized_tabu: LazyIndexedQueue<u64>,
    ineligible_delta: LazyIndexedQueue<C>,
    authorized_delta: LazyIndexedQueue<C>,
    aspired_delta: LazyIndexedQueue<C>,
    state: Vec<MoveState>,
    #[cfg(test)]
    pub(crate) reverse_ties: bool,
}

impl<C: Cost> QueueBank<C> {
    /// Bank holding all `deltas.len()` moves in the ineligible queues.
    pub fn new(deltas: &[C], eligible: &[u64]) -> Self {
        Self::build(deltas, eligible, false)
    }

    /// Test-only mutant whose delta queues break ties by descending move.
    #[cfg(test)]
    pub(crate) fn with_reversed_ties(deltas: &[C], eligible: &[u64]) -> Self {
        Self::build(deltas, eligible, true)
    }

    #[cfg_attr(not(test), allow(unused_variables))]
    fn build(deltas: &[C], eligible: &[u64], reverse_ties: bool) -> Self {
        assert_eq!(deltas.len(), eligible.len());
        let m = deltas.len();
        let mut bank = Self {
            ineligible_tabu: LazyIndexedQueue::new(m),
            authorized_tabu: LazyIndexedQueue::new(m),
            ineligible_delta: LazyIndexedQueue::new(m),
            authorized_delta: LazyIndexedQueue::new(m),
            aspired_delta: LazyIndexedQueue::new(m),
            state: vec![MoveState::Ineligible; m],
            #[cfg(test)]
            reverse_ties,
        };
        let handles = 0..m as u32;
        bank.ineligible_tabu
            .insert_many(handles.clone().map(|h| (h, eligible[h as usize])))
            .expect("fresh queue");
        let keyed: Vec<(u32, C)> = handles
            .map(|h| (bank.dh(MoveId::from_index(h as usize)), deltas[h as usize]))
            .collect();
        bank.ineligible_delta.insert_many(keyed).expect("fresh queue");
        bank
    }

    /// Handle of a move inside the delta queues.
    #[inline]
    fn dh(&self, m: MoveId) -> u32 {
        #[cfg(test)]
        if self.reverse_ties {
            return (self.state.len() - 1 - m.index()) as u32;
        }
        m.raw()
    }

    #[inline]
    fn move_of(&self, h: u32) -> MoveId {
        #[cfg(test)]
        if self.reverse_ties {
            return MoveId::from_index(self.state.len() - 1 - h as usize);
        }
        MoveId::from_index(h as usize)
    }

    pub fn len(&self) -> usize {
        self.state.len()
    }

    pub fn is_empty(&self) -> bool {
        self.state.is_empty()
    }

    #[inline]
    pub fn state(&self, m: MoveId) -> MoveState {
        self.state[m.index()]
    }

    pub fn count(&self, state: MoveState) -> usize {
        self.delta_queue(state).len()
    }

    fn delta_queue(&self, state: MoveState) -> &LazyIndexedQueue<C> {
        match state {
            MoveState::Ineligible => &self.ineligible_delta,
            MoveState::Authorized => &self.authorized_delta,
            MoveState::Aspired => &self.aspired_delta,
        }
    }

    fn delta_queue_mut(&mut self, state: MoveState) -> &mut LazyIndexedQueue<C> {
        match state {
            MoveState::Ineligible => &mut self.ineligible_delta,
            MoveState::Authorized => &mut self.authorized_delta,
            MoveState::Aspired => &mut self.aspired_delta,
        }
    }

    /// Promotes every move whose state changed now that the counter reached
    /// `current`. Ineligible → authorized runs first, so a move may pass
    /// through both transitions in one call. Appends the transitions to `out`.
    pub fn migrate_states_into(&mut self, current: u64, aspiration: u64, out: &mut Vec<Transition>) {
        while let Some((h, eligible)) = self.ineligible_tabu.peek_valid_min() {
            if eligible >= current {
                break;
            }
            let id = MoveId::from_index(h as usize);
            let dh = self.dh(id);
            self.ineligible_tabu.remove(h).expect("peeked member");
            let delta = self.ineligible_delta.remove(dh).expect("tag says ineligible");
            self.authorized_tabu.insert(h, eligible).expect("not authorized yet");
            self.authorized_delta.insert(dh, delta).expect("not authorized yet");
            self.state[h as usize] = MoveState::Authorized;
            out.push(Transition { id, from: MoveState::Ineligible, to: MoveState::Authorized });
        }
        while let Some((h, eligible)) = self.authorized_tabu.peek_valid_min() {
            if eligible.saturating_add(aspiration) >= current {
                break;
            }
            let id = MoveId::from_index(h as usize);
            let dh = self.dh(id);
            self.authorized_tabu.remove(h).expect("peeked member");
            let delta = self.authorized_delta.remove(dh).expect("tag says authorized");
            self.aspired_delta.insert(dh, delta).expect("not aspired yet");
            self.state[h as usize] = MoveState::Aspired;
            out.push(Transition { id, from: MoveState::Authorized, to: MoveState::Aspired });
        }
    }

    pub fn migrate_states(&mut self, current: u64, aspiration: u64) -> Vec<Transition> {
        let mut out = Vec::new();
        self.migrate_states_into(current, aspiration, &mut out);
        out
    }

    /// Puts an executed move back into both ineligible queues.
    pub fn reset_to_ineligible(&mut self, m: MoveId, eligible: u64, delta: C) {
        let h = m.raw();
        let dh = self.dh(m);
        match self.state[m.index()] {
            MoveState::Ineligible => {
                self.ineligible_tabu.remove(h).expect("tag says ineligible");
            }
            MoveState::Authorized => {
                self.authorized_tabu.remove(h).expect("tag says authorized");
            }
            MoveState::Aspired => {}
        }
        self.delta_queue_mut(self.state[m.index()]).remove(dh).expect("every move has a delta queue");
        self.ineligible_tabu.insert(h, eligible).expect("just removed");
        self.ineligible_delta.insert(dh, delta).expect("just removed");
        self.state[m.index()] = MoveState::Ineligible;
    }

    /// New delta for a move, pushed lazily into its current delta queue.
    #[inline]
    pub fn update_delta(&mut self, m: MoveId, delta: C) -> KeyUpdate {
        let dh = self.dh(m);
        let state = self.state[m.index()];
        self.delta_queue_mut(state).update_key(dh, delta).expect("every move has a delta queue")
    }

    /// Validated minimum `(move, delta)` among moves in `state`.
    pub fn min_delta(&mut self, state: MoveState) -> Option<(MoveId, C)> {
        let peeked = match state {
            MoveState::Ineligible => self.ineligible_delta.peek_valid_min(),
            MoveState::Authorized => self.authorized_delta.peek_valid_min(),
            MoveState::Aspired => self.aspired_delta.peek_valid_min(),
        };
        peeked.map(|(h, d)| (self.move_of(h), d))
    }

    /// Ineligible move with the smallest `(eligible iteration, move)`.
    pub fn soonest_eligible(&mut self) -> Option<(MoveId, u64)> {
        self.ineligible_tabu.peek_valid_min().map(|(h, e)| (MoveId::from_index(h as usize), e))
    }

    /// Top-of-heap inspections made by validated peeks across all queues.
    pub fn inspections(&self) -> u64 {
        [&self.ineligible_tabu, &self.authorized_tabu].iter().map(|q| q.inspections()).sum::<u64>()
            + [&self.ineligible_delta, &self.authorized_delta, &self.aspired_delta]
                .iter()
                .map(|q| q.inspections())
                .sum::<u64>()
    }

    /// Tie order used by the delta queues.
    #[inline]
    pub(crate) fn tie_key(&self, m: MoveId) -> u32 {
        self.dh(m)
    }

    /// Full consistency check against the authoritative per-move data.
    pub fn audit(&self, deltas: &[C], eligible: &[u64], current: u64, aspiration: u64) -> Result<(), String> {
        for q in [&self.ineligible_tabu, &self.authorized_tabu] {
            q.audit()?;
        }
        for q in [&self.ineligible_delta, &self.authorized_delta, &self.aspired_delta] {
            q.audit()?;
        }
        let total = self.ineligible_delta.len() + self.authorized_delta.len() + self.aspired_delta.len();
        if total != self.state.len() {
            return Err(format!("delta queues hold {total} moves, expected {}", self.state.len()));
        }
        for (i, &tag) in self.state.iter().enumerate() {
            let id = MoveId::from_index(i);
            let (h, dh) = (id.raw(), self.dh(id));
            let want = MoveState::classify(current, eligible[i], aspiration);
            if tag != want {
                return Err(format!("move {id} tagged {tag:?}, state is {want:?} at iteration {current}"));
            }
            if self.delta_queue(tag).true_key(dh) != Some(deltas[i]) {
                return Err(format!("move {id} missing from {tag:?} delta queue or holds a wrong delta"));
            }
            let in_inel = self.ineligible_tabu.true_key(h);
            let in_auth = self.authorized_tabu.true_key(h);
            let ok = match tag {
                MoveState::Ineligible => in_inel == Some(eligible[i]) && in_auth.is_none(),
                MoveState::Authorized => in_auth == Some(eligible[i]) && in_inel.is_none(),
                MoveState::Aspired => in_inel.is_none() && in_auth.is_none(),
            };
            if !ok {
                return Err(format!("tabu queue membership of move {id} disagrees with tag {tag:?}"));
            }
        }
        Ok(())
    }
}
