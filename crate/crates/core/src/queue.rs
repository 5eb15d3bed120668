//! Handle-indexed priority queue with lazy key repair, built as a complete
//! balanced tournament tree over the handle range.
//!
//! Every member carries two keys: the *stored* key held in its leaf and its
//! *true* key. Improvements (smaller keys) are applied eagerly; worsenings
//! only overwrite the true key and mark the entry stale. A stale leaf can
//! only win too many comparisons, never too few, so the true minimum is
//! always found by repairing stale winners as they surface at the root
//! ([`LazyIndexedQueue::peek_valid_min`]).
//!
//! Keys are compared as the composite `(key, handle)`, which makes the order
//! total. Leaves sit in handle order, so updates to nearby handles share
//! most of their path to the root.

use thiserror::Error;

const ABSENT: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueueError {
    #[error("handle {0} is already in the queue")]
    Duplicate(u32),
    #[error("handle {0} is not in the queue")]
    NotMember(u32),
    #[error("handle {handle} exceeds queue capacity {capacity}")]
    OutOfRange { handle: u32, capacity: usize },
}

/// What [`LazyIndexedQueue::update_key`] did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyUpdate {
    /// The key improved on the stored one; the entry was repositioned.
    Eager,
    /// The key is no better than the stored one; only the true key changed.
    Deferred,
}

/// A tree node: the winning `(key, handle)` of its subtree, or empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Node<K> {
    key: K,
    handle: u32,
}

impl<K: Ord + Copy + Default> Node<K> {
    fn empty() -> Self {
        Node { key: K::default(), handle: ABSENT }
    }

    #[inline]
    fn is_empty(&self) -> bool {
        self.handle == ABSENT
    }

    /// Strict composite order; empty nodes lose to every member.
    #[inline]
    fn before(&self, other: &Self) -> bool {
        !self.is_empty() && (other.is_empty() || (self.key, self.handle) < (other.key, other.handle))
    }

    #[inline]
    fn min(a: Self, b: Self) -> Self {
        if b.before(&a) {
            b
        } else {
            a
        }
    }
}

#[inline]
fn parent(i: usize) -> usize {
    (i - 1) / 2
}

/// A leaf: the key the tree ranks the handle by, and its true key.
#[derive(Clone, Copy, Debug, Default)]
struct Leaf<K> {
    stored: K,
    truth: K,
}

/// Internal node `i` has children `2i + 1` and `2i + 2`; indices from
/// `capacity − 1` on denote leaves, the leaf of handle `h` being
/// `capacity − 1 + h`.
#[derive(Clone, Debug)]
pub struct LazyIndexedQueue<K> {
    inner: Vec<Node<K>>,
    leaves: Vec<Leaf<K>>,
    member: Vec<u64>,
    len: usize,
    stale: usize,
    inspections: u64,
}

impl<K: Ord + Copy + Default> LazyIndexedQueue<K> {
    /// Empty queue accepting handles `0..capacity`.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity < ABSENT as usize, "capacity {capacity} too large");
        Self {
            inner: vec![Node::empty(); capacity.saturating_sub(1)],
            leaves: vec![Leaf::default(); capacity],
            member: vec![0; capacity.div_ceil(64)],
            len: 0,
            stale: 0,
            inspections: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.leaves.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn is_member(&self, h: usize) -> bool {
        self.member[h / 64] >> (h % 64) & 1 == 1
    }

    #[inline]
    fn set_member(&mut self, h: usize, on: bool) {
        if on {
            self.member[h / 64] |= 1 << (h % 64);
        } else {
            self.member[h / 64] &= !(1 << (h % 64));
        }
    }

    /// The winner stored at tree index `i`.
    #[inline]
    fn node(&self, i: usize) -> Node<K> {
        match i.checked_sub(self.inner.len()) {
            None => self.inner[i],
            Some(h) if self.is_member(h) => Node { key: self.leaves[h].stored, handle: h as u32 },
            Some(_) => Node::empty(),
        }
    }

    #[inline]
    pub fn contains(&self, handle: u32) -> bool {
        (handle as usize) < self.capacity() && self.is_member(handle as usize)
    }

    /// Number of members whose stored key differs from their true key.
    pub fn stale_len(&self) -> usize {
        self.stale
    }

    /// Total root inspections made by validated peeks so far.
    pub fn inspections(&self) -> u64 {
        self.inspections
    }

    pub fn true_key(&self, handle: u32) -> Option<K> {
        self.contains(handle).then(|| self.leaves[handle as usize].truth)
    }

    pub fn stored_key(&self, handle: u32) -> Option<K> {
        self.contains(handle).then(|| self.leaves[handle as usize].stored)
    }

    pub fn is_stale(&self, handle: u32) -> bool {
        self.contains(handle) && self.stored_key(handle) != self.true_key(handle)
    }

    /// Members in ascending handle order.
    pub fn handles(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.capacity() as u32).filter(|&h| self.is_member(h as usize))
    }

    fn check(&self, handle: u32) -> Result<(), QueueError> {
        if handle as usize >= self.capacity() {
            return Err(QueueError::OutOfRange { handle, capacity: self.capacity() });
        }
        Ok(())
    }

    /// Propagates a leaf that got better: it replaces every ancestor it beats.
    #[inline]
    fn promote(&mut self, handle: u32) {
        let e = Node { key: self.leaves[handle as usize].stored, handle };
        let mut i = self.inner.len() + handle as usize;
        while i > 0 {
            i = parent(i);
            if !e.before(&self.inner[i]) {
                break;
            }
            self.inner[i] = e;
        }
    }

    /// Recomputes winners above a leaf that got worse, stopping once an
    /// ancestor comes out unchanged.
    #[inline]
    fn replay(&mut self, handle: u32) {
        let mut i = self.inner.len() + handle as usize;
        while i > 0 {
            let p = parent(i);
            let w = Node::min(self.node(2 * p + 1), self.node(2 * p + 2));
            if w == self.inner[p] {
                break;
            }
            self.inner[p] = w;
            i = p;
        }
    }

    pub fn insert(&mut self, handle: u32, key: K) -> Result<(), QueueError> {
        self.check(handle)?;
        if self.contains(handle) {
            return Err(QueueError::Duplicate(handle));
        }
        self.leaves[handle as usize] = Leaf { stored: key, truth: key };
        self.set_member(handle as usize, true);
        self.len += 1;
        self.promote(handle);
        Ok(())
    }

    /// Inserts many members at once. Into an empty queue this fills the
    /// leaves and rebuilds the tree in linear time.
    pub fn insert_many(&mut self, items: impl IntoIterator<Item = (u32, K)>) -> Result<(), QueueError> {
        if !self.is_empty() {
            for (h, k) in items {
                self.insert(h, k)?;
            }
            return Ok(());
        }
        for (handle, key) in items {
            self.check(handle)?;
            if self.contains(handle) {
                return Err(QueueError::Duplicate(handle));
            }
            self.leaves[handle as usize] = Leaf { stored: key, truth: key };
            self.set_member(handle as usize, true);
            self.len += 1;
        }
        for p in (0..self.inner.len()).rev() {
            self.inner[p] = Node::min(self.node(2 * p + 1), self.node(2 * p + 2));
        }
        Ok(())
    }

    /// Removes a member and returns its true key.
    pub fn remove(&mut self, handle: u32) -> Result<K, QueueError> {
        self.check(handle)?;
        if !self.contains(handle) {
            return Err(QueueError::NotMember(handle));
        }
        let leaf = std::mem::take(&mut self.leaves[handle as usize]);
        if leaf.stored != leaf.truth {
            self.stale -= 1;
        }
        self.set_member(handle as usize, false);
        self.len -= 1;
        self.replay(handle);
        Ok(leaf.truth)
    }

    /// Sets a member's true key. Better than the stored key: reposition now.
    /// Otherwise: defer, leaving the stored key in place.
    pub fn update_key(&mut self, handle: u32, key: K) -> Result<KeyUpdate, QueueError> {
        self.check(handle)?;
        if !self.contains(handle) {
            return Err(QueueError::NotMember(handle));
        }
        let leaf = &mut self.leaves[handle as usize];
        let was_stale = leaf.stored != leaf.truth;
        leaf.truth = key;
        if key < leaf.stored {
            leaf.stored = key;
            if was_stale {
                self.stale -= 1;
            }
            self.promote(handle);
            Ok(KeyUpdate::Eager)
        } else {
            let now_stale = key != leaf.stored;
            match (was_stale, now_stale) {
                (false, true) => self.stale += 1,
                (true, false) => self.stale -= 1,
                _ => {}
            }
            Ok(KeyUpdate::Deferred)
        }
    }

    /// The member with the smallest true `(key, handle)`, repairing stale
    /// winners found at the root on the way.
    pub fn peek_valid_min(&mut self) -> Option<(u32, K)> {
        if self.capacity() == 0 {
            return None;
        }
        loop {
            let top = self.node(0);
            if top.is_empty() {
                return None;
            }
            self.inspections += 1;
            let leaf = &mut self.leaves[top.handle as usize];
            if leaf.stored == leaf.truth {
                return Some((top.handle, leaf.truth));
            }
            leaf.stored = leaf.truth;
            self.stale -= 1;
            self.replay(top.handle);
        }
    }

    /// Checks that every internal node holds the winner of its children, the
    /// member and stale counts, and that no stored key exceeds its true key.
    pub fn audit(&self) -> Result<(), String> {
        for p in 0..self.inner.len() {
            if self.inner[p] != Node::min(self.node(2 * p + 1), self.node(2 * p + 2)) {
                return Err(format!("node {p} does not hold the winner of its children"));
            }
        }
        let (mut members, mut stale) = (0, 0);
        for h in self.handles() {
            members += 1;
            let leaf = self.leaves[h as usize];
            if leaf.stored > leaf.truth {
                return Err(format!("handle {h} stored above its true key"));
            }
            if leaf.stored != leaf.truth {
                stale += 1;
            }
        }
        if stale != self.stale {
            return Err(format!("stale count {} but {} stale entries", self.stale, stale));
        }
        if members != self.len {
            return Err(format!("{members} member bits set for {} members", self.len));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use std::collections::BTreeMap;

    #[test]
    fn peek_returns_smallest() {
        let mut q = LazyIndexedQueue::new(8);
        q.insert(0, 5i64).unwrap();
        q.insert(1, 2).unwrap();
        q.insert(2, 9).unwrap();
        assert_eq!(q.peek_valid_min(), Some((1, 2)));
    }

    #[test]
    fn empty_peek_is_none() {
        let mut q = LazyIndexedQueue::<i64>::new(3);
        assert_eq!(q.peek_valid_min(), None);
        q.insert(0, 1).unwrap();
        q.remove(0).unwrap();
        assert!(q.is_empty());
        assert_eq!(q.peek_valid_min(), None);
    }

    #[test]
    fn membership_errors() {
        let mut q = LazyIndexedQueue::new(3);
        q.insert(1, 4i64).unwrap();
        assert_eq!(q.insert(1, 0), Err(QueueError::Duplicate(1)));
        assert_eq!(q.remove(2), Err(QueueError::NotMember(2)));
        assert_eq!(q.update_key(0, 3), Err(QueueError::NotMember(0)));
        assert!(matches!(q.insert(3, 0), Err(QueueError::OutOfRange { .. })));
        q.remove(1).unwrap();
        q.insert(1, 7).unwrap();
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn remove_then_peek_skips_removed() {
        let mut q = LazyIndexedQueue::new(4);
        for (h, k) in [(0, 3i64), (1, 1), (2, 2)] {
            q.insert(h, k).unwrap();
        }
        assert_eq!(q.remove(1), Ok(1));
        assert_eq!(q.peek_valid_min(), Some((2, 2)));
    }

    #[test]
    fn improvement_surfaces_immediately() {
        let mut q = LazyIndexedQueue::new(4);
        q.insert(0, 4i64).unwrap();
        q.insert(1, 5).unwrap();
        assert_eq!(q.update_key(1, 3), Ok(KeyUpdate::Eager));
        assert_eq!(q.stale_len(), 0);
        assert_eq!(q.peek_valid_min(), Some((1, 3)));
    }

    #[test]
    fn worsened_top_does_not_mask_true_minimum() {
        let mut q = LazyIndexedQueue::new(4);
        q.insert(0, 2i64).unwrap();
        q.insert(1, 5).unwrap();
        assert_eq!(q.update_key(0, 9), Ok(KeyUpdate::Deferred));
        assert!(q.is_stale(0));
        assert_eq!(q.stored_key(0), Some(2));
        assert_eq!(q.peek_valid_min(), Some((1, 5)));
        assert!(!q.is_stale(0));
    }

    #[test]
    fn repair_then_return_correct_minimum() {
        let mut q = LazyIndexedQueue::new(4);
        q.insert(0, 1i64).unwrap();
        q.insert(1, 3).unwrap();
        q.update_key(0, 4).unwrap();
        let before = q.inspections();
        assert_eq!(q.peek_valid_min(), Some((1, 3)));
        assert_eq!(q.inspections() - before, 2);
    }

    #[test]
    fn ties_break_by_handle() {
        let mut q = LazyIndexedQueue::new(10);
        q.insert(7, 3i64).unwrap();
        q.insert(2, 3).unwrap();
        q.insert(5, 3).unwrap();
        assert_eq!(q.peek_valid_min(), Some((2, 3)));
    }

    #[test]
    fn bulk_insert_builds_tree() {
        let mut q = LazyIndexedQueue::new(100);
        q.insert_many((0..100u32).map(|h| (h, (h as i64 * 37) % 101))).unwrap();
        q.audit().unwrap();
        assert_eq!(q.peek_valid_min(), Some((0, 0)));
        assert_eq!(q.insert_many([(3u32, 1i64)]), Err(QueueError::Duplicate(3)));
    }

    /// Linear-scan model: the minimum true (key, handle) over all members.
    fn model_min(model: &BTreeMap<u32, i64>) -> Option<(u32, i64)> {
        model.iter().map(|(&h, &k)| (k, h)).min().map(|(k, h)| (h, k))
    }

    fn run_workload(seed: u64, ops: usize, capacity: u32, key_range: i64) {
        let mut rng = crate::rng::from_seed(seed);
        let mut q = LazyIndexedQueue::new(capacity as usize);
        let mut model = BTreeMap::new();
        for _ in 0..ops {
            let h = rng.gen_range(0..capacity);
            let key = rng.gen_range(-key_range..=key_range);
            match rng.gen_range(0..4) {
                0 => {
                    let had = model.contains_key(&h);
                    assert_eq!(q.insert(h, key).is_ok(), !had);
                    model.entry(h).or_insert(key);
                }
                1 => assert_eq!(q.remove(h).ok(), model.remove(&h)),
                2 => {
                    let had = model.contains_key(&h);
                    assert_eq!(q.update_key(h, key).is_ok(), had);
                    if had {
                        model.insert(h, key);
                    }
                }
                _ => {
                    let stale = q.stale_len() as u64;
                    let before = q.inspections();
                    assert_eq!(q.peek_valid_min(), model_min(&model));
                    assert!(q.inspections() - before <= stale + 1);
                }
            }
            assert_eq!(q.len(), model.len());
        }
        q.audit().unwrap();
    }

    #[test]
    fn matches_linear_scan_model() {
        for seed in 0..5 {
            run_workload(seed, 10_000, 64, 20);
        }
    }

    proptest! {
        #[test]
        fn model_equivalence_property(seed in any::<u64>(), cap in 1u32..200, range in 0i64..1000) {
            run_workload(seed, 2_000, cap, range);
        }
    }
}
