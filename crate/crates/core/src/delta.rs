//! Cost function and swap deltas.
//!
//! Every delta is `cost(after) − cost(before)`, so negative deltas improve.
//! Three routes compute it:
//!
//! - [`swap_delta_full`]: `2·Σ_{k≠r,s} (F[r][k] − F[s][k])·(D[p(s)][p(k)] − D[p(r)][p(k)])`, O(n).
//! - [`swap_delta_sparse`]: the same sum over the flow neighbours of `r` and
//!   `s` only, O(deg r + deg s).
//! - [`swap_delta_incremental`]: O(1) update of a move disjoint from the
//!   previous move `(r, s)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{Cost, Instance, Permutation};

/// An unordered facility pair `u < v`, stored as its triangular index
/// `v(v−1)/2 + u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveId(u32);

impl MoveId {
    /// Number of moves for an instance of size `n`.
    #[inline]
    pub fn count(n: usize) -> usize {
        n * n.saturating_sub(1) / 2
    }

    /// The move swapping facilities `a` and `b`, in either order.
    #[inline]
    pub fn new(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b);
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        MoveId((v * (v - 1) / 2 + u) as u32)
    }

    #[inline]
    pub fn from_index(index: usize) -> Self {
        MoveId(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn raw(self) -> u32 {
        self.0
    }

    /// `(u, v)` with `u < v`.
    pub fn pair(self) -> (usize, usize) {
        let i = self.0 as u64;
        let mut v = ((1.0 + (1.0 + 8.0 * i as f64).sqrt()) / 2.0) as u64;
        while v * (v - 1) / 2 > i {
            v -= 1;
        }
        while (v + 1) * v / 2 <= i {
            v += 1;
        }
        ((i - v * (v - 1) / 2) as usize, v as usize)
    }
}

impl std::fmt::Display for MoveId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (u, v) = self.pair();
        write!(f, "({u},{v})")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeltaError {
    #[error("move ({u},{v}) overlaps the previous move ({r},{s}); recompute it from scratch")]
    Overlap { r: usize, s: usize, u: usize, v: usize },
}

/// `Σᵢ Σⱼ F[i][j]·D[p(i)][p(j)]` over all ordered pairs.
pub fn total_cost<C: Cost>(inst: &Instance<C>, p: &Permutation) -> C {
    let mut sum = C::zero();
    for i in 0..inst.n() {
        let drow = inst.dist_row(p.location(i));
        for (j, &f) in inst.flow_row(i).iter().enumerate() {
            if !f.is_zero() {
                sum = sum + f * drow[p.location(j)];
            }
        }
    }
    sum
}

/// Delta of swapping `r` and `s`, scanning every other facility.
pub fn swap_delta_full<C: Cost>(inst: &Instance<C>, p: &Permutation, r: usize, s: usize) -> C {
    let (fr, fs) = (inst.flow_row(r), inst.flow_row(s));
    let (dr, ds) = (inst.dist_row(p.location(r)), inst.dist_row(p.location(s)));
    let mut sum = C::zero();
    for k in 0..inst.n() {
        if k == r || k == s {
            continue;
        }
        let pk = p.location(k);
        sum = sum + (fr[k] - fs[k]) * (ds[pk] - dr[pk]);
    }
    sum.twice()
}

/// Cost contribution `Σ_k F[x][k]·D[p(x)][p(k)]` of facility `x`'s flows.
fn own_cost<C: Cost>(inst: &Instance<C>, p: &Permutation, x: usize) -> C {
    let dx = inst.dist_row(p.location(x));
    inst.adjacency(x).iter().fold(C::zero(), |acc, &(k, w)| acc + w * dx[p.location(k)])
}

/// Delta of swapping `r` and `s`, visiting only their flow neighbours. A
/// facility adjacent to both contributes one term.
pub fn swap_delta_sparse<C: Cost>(inst: &Instance<C>, p: &Permutation, r: usize, s: usize) -> C {
    let (fr, fs) = (inst.flow_row(r), inst.flow_row(s));
    let (dr, ds) = (inst.dist_row(p.location(r)), inst.dist_row(p.location(s)));
    let mut sum = C::zero();
    for &(k, w) in inst.adjacency(r) {
        if k != s {
            let pk = p.location(k);
            sum = sum + (w - fs[k]) * (ds[pk] - dr[pk]);
        }
    }
    for &(k, w) in inst.adjacency(s) {
        // Neighbours shared with r were already counted above.
        if k != r && fr[k].is_zero() {
            let pk = p.location(k);
            sum = sum - w * (ds[pk] - dr[pk]);
        }
    }
    sum.twice()
}

/// Post-move delta of `(u, v)` after the move `(r, s)` produced `p_after`,
/// given its exact pre-move value. `{u, v}` and `{r, s}` must be disjoint.
pub fn swap_delta_incremental<C: Cost>(
    inst: &Instance<C>,
    p_after: &Permutation,
    old_delta: C,
    r: usize,
    s: usize,
    u: usize,
    v: usize,
) -> Result<C, DeltaError> {
    if u == r || u == s || v == r || v == s {
        return Err(DeltaError::Overlap { r, s, u, v });
    }
    Ok(incremental_unchecked(inst, p_after, old_delta, r, s, u, v))
}

#[inline]
pub(crate) fn incremental_unchecked<C: Cost>(
    inst: &Instance<C>,
    p: &Permutation,
    old_delta: C,
    r: usize,
    s: usize,
    u: usize,
    v: usize,
) -> C {
    let flow_coef = inst.flow(r, u) - inst.flow(r, v) + inst.flow(s, v) - inst.flow(s, u);
    if flow_coef.is_zero() {
        return old_delta;
    }
    let (pr, ps, pu, pv) = (p.location(r), p.location(s), p.location(u), p.location(v));
    let dist_coef = inst.dist(ps, pu) - inst.dist(ps, pv) + inst.dist(pr, pv) - inst.dist(pr, pu);
    old_delta + (flow_coef * dist_coef).twice()
}

/// Delta of every move, indexed by [`MoveId`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTable<C> {
    n: usize,
    deltas: Vec<C>,
}

impl<C: Cost> DeltaTable<C> {
    /// From scratch with the full O(n) formula, O(n³) total.
    pub fn from_scratch_full(inst: &Instance<C>, p: &Permutation) -> Self {
        Self::build(inst.n(), |u, v| swap_delta_full(inst, p, u, v))
    }

    /// From scratch with the adjacency formula, O(n²·k) total.
    pub fn from_scratch_sparse(inst: &Instance<C>, p: &Permutation) -> Self {
        Self::build(inst.n(), |u, v| swap_delta_sparse(inst, p, u, v))
    }

    fn build(n: usize, mut delta: impl FnMut(usize, usize) -> C) -> Self {
        let mut deltas = Vec::with_capacity(MoveId::count(n));
        for v in 1..n {
            for u in 0..v {
                deltas.push(delta(u, v));
            }
        }
        Self { n, deltas }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    #[inline]
    pub fn get(&self, m: MoveId) -> C {
        self.deltas[m.index()]
    }

    #[inline]
    pub fn set(&mut self, m: MoveId, value: C) {
        self.deltas[m.index()] = value;
    }

    pub fn as_slice(&self) -> &[C] {
        &self.deltas
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [C] {
        &mut self.deltas
    }

    /// First entry where the two tables disagree: `(move, self, other)`.
    pub fn first_mismatch(&self, other: &Self) -> Option<(MoveId, C, C)> {
        self.deltas
            .iter()
            .zip(&other.deltas)
            .position(|(a, b)| a != b)
            .map(|i| (MoveId::from_index(i), self.deltas[i], other.deltas[i]))
    }
}

/// Counters for one call to [`Refresher::refresh`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RefreshStats {
    /// Moves meeting `{r, s}`, recomputed from scratch.
    pub recomputed: usize,
    /// Moves with an endpoint in the flow neighbourhood of `r` or `s`,
    /// updated incrementally.
    pub incremental: usize,
    /// Entries reported back (all recomputed ones plus every incremental
    /// update that changed a value).
    pub reported: usize,
}

impl RefreshStats {
    pub fn touched(&self) -> usize {
        self.recomputed + self.incremental
    }
}

/// Sparse delta-table maintenance after a committed move. Holds scratch
/// buffers so repeated calls do not allocate.
#[derive(Clone, Debug)]
pub struct Refresher<C> {
    /// `own[x] = Σ_k F[x][k]·D[p(x)][p(k)]`, kept in step with the permutation.
    own: Vec<C>,
    marked: Vec<bool>,
    neighbours: Vec<usize>,
    flow_diff: Vec<C>,
    dist_diff: Vec<C>,
    #[cfg(test)]
    pub(crate) skip_incremental: bool,
}

impl<C: Cost> Refresher<C> {
    /// Buffers for `inst`, synchronised with the permutation `p`.
    pub fn new(inst: &Instance<C>, p: &Permutation) -> Self {
        let n = inst.n();
        Self {
            own: (0..n).map(|x| own_cost(inst, p, x)).collect(),
            marked: vec![false; n],
            neighbours: Vec::new(),
            flow_diff: vec![C::zero(); n],
            dist_diff: vec![C::zero(); n],
            #[cfg(test)]
            skip_incremental: false,
        }
    }

    /// Brings `table` from the pre-move permutation to `p_after`, where the
    /// move swapped `r` and `s`. Appends `(move, new delta)` to `out` for
    /// every recomputed move and every incrementally changed one. Moves with
    /// no endpoint in `{r, s}` or their flow neighbourhoods keep their value:
    /// their flow coefficient is zero.
    ///
    /// The cached own costs must match either the pre-move permutation or
    /// `p_after`.
    pub fn refresh(
        &mut self,
        inst: &Instance<C>,
        p_after: &Permutation,
        table: &mut DeltaTable<C>,
        r: usize,
        s: usize,
        out: &mut Vec<(MoveId, C)>,
    ) -> RefreshStats {
        let n = inst.n();
        let mut stats = RefreshStats::default();
        let start = out.len();

        self.neighbours.clear();
        for &(k, _) in inst.adjacency(r).iter().chain(inst.adjacency(s)) {
            if k != r && k != s && !self.marked[k] {
                self.marked[k] = true;
                self.neighbours.push(k);
            }
        }
        for &x in self.neighbours.iter().chain([&r, &s]) {
            self.own[x] = own_cost(inst, p_after, x);
        }

        self.recompute_row(inst, p_after, table, r, None, out);
        self.recompute_row(inst, p_after, table, s, Some(r), out);
        stats.recomputed = out.len() - start;

        #[cfg(test)]
        if self.skip_incremental {
            stats.reported = out.len() - start;
            self.clear_marks();
            return stats;
        }

        // Δ'(u,v) = Δ(u,v) + 2·(g[u] − g[v])·(h[u] − h[v]) with
        // g[x] = F[r][x] − F[s][x] and h[x] = D[p'(s)][p'(x)] − D[p'(r)][p'(x)].
        let (fr, fs) = (inst.flow_row(r), inst.flow_row(s));
        let (dr, ds) = (inst.dist_row(p_after.location(r)), inst.dist_row(p_after.location(s)));
        for x in 0..n {
            let px = p_after.location(x);
            self.flow_diff[x] = fr[x] - fs[x];
            self.dist_diff[x] = ds[px] - dr[px];
        }
        // Row-major sweep over v keeps the table accesses close together.
        let deltas = table.as_mut_slice();
        for v in (0..n).filter(|&v| v != r && v != s) {
            let (gv, hv) = (self.flow_diff[v], self.dist_diff[v]);
            for &u in &self.neighbours {
                if v == u || (self.marked[v] && v < u) {
                    continue;
                }
                stats.incremental += 1;
                let corr = (self.flow_diff[u] - gv) * (self.dist_diff[u] - hv);
                if !corr.is_zero() {
                    let m = MoveId::new(u, v);
                    let d = deltas[m.index()] + corr.twice();
                    deltas[m.index()] = d;
                    out.push((m, d));
                }
            }
        }
        self.clear_marks();
        stats.reported = out.len() - start;
        stats
    }

    fn clear_marks(&mut self) {
        for &u in &self.neighbours {
            self.marked[u] = false;
        }
    }

    /// Recomputes every move `(a, x)` with `x ∉ {a, skip}`. Same value as
    /// [`swap_delta_sparse`], regrouped so that the sweep over `x` reads
    /// only the distance rows of `p(a)` and of the neighbours of `a`
    /// (matrices are symmetric) plus the cached own costs:
    ///
    /// Δ/2 = Σ_{k∈N(a)∖x} F[a][k]·(D[p(k)][p(x)] − D[p(a)][p(k)])
    ///       − own[x] + Σ_{k∈N(x)} F[x][k]·D[p(a)][p(k)] + F[a][x]·D[p(a)][p(x)]
    fn recompute_row(
        &mut self,
        inst: &Instance<C>,
        p: &Permutation,
        table: &mut DeltaTable<C>,
        a: usize,
        skip: Option<usize>,
        out: &mut Vec<(MoveId, C)>,
    ) {
        let n = inst.n();
        let fa = inst.flow_row(a);
        let da = inst.dist_row(p.location(a));
        let near: Vec<(usize, C, &[C], C)> = inst
            .adjacency(a)
            .iter()
            .map(|&(k, w)| {
                let pk = p.location(k);
                (k, w, inst.dist_row(pk), da[pk])
            })
            .collect();
        for x in 0..n {
            if x == a || Some(x) == skip {
                continue;
            }
            let px = p.location(x);
            let mut sum = fa[x] * da[px] - self.own[x];
            for &(k, w, dk, dak) in &near {
                if k != x {
                    sum = sum + w * (dk[px] - dak);
                }
            }
            for &(k, w) in inst.adjacency(x) {
                sum = sum + w * da[p.location(k)];
            }
            let m = MoveId::new(a, x);
            let d = sum.twice();
            table.set(m, d);
            out.push((m, d));
        }
    }
}

/// One-shot form of [`Refresher::refresh`].
pub fn refresh_after_move<C: Cost>(
    inst: &Instance<C>,
    p_after: &Permutation,
    table: &mut DeltaTable<C>,
    r: usize,
    s: usize,
) -> Vec<(MoveId, C)> {
    let mut out = Vec::new();
    Refresher::new(inst, p_after).refresh(inst, p_after, table, r, s, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, generate_uniform, GeneratorConfig, UniformConfig};
    use proptest::prelude::*;

    /// Independent double loop over ordered pairs.
    fn brute_cost(inst: &Instance<i64>, loc: &[usize]) -> i64 {
        let n = inst.n();
        let mut c = 0;
        for i in 0..n {
            for j in 0..n {
                c += inst.flow_matrix()[i * n + j] * inst.dist_matrix()[loc[i] * n + loc[j]];
            }
        }
        c
    }

    fn brute_delta(inst: &Instance<i64>, p: &Permutation, r: usize, s: usize) -> i64 {
        let mut loc = p.locations().to_vec();
        let before = brute_cost(inst, &loc);
        loc.swap(r, s);
        brute_cost(inst, &loc) - before
    }

    fn uniform(n: usize, density: f64, seed: u64) -> Instance<i64> {
        generate_uniform(&UniformConfig { n, flow_density: density, max_flow: 9, max_dist: 20, seed }).unwrap()
    }

    #[test]
    fn move_id_is_a_bijection() {
        let n = 70;
        let mut next = 0;
        for v in 1..n {
            for u in 0..v {
                let m = MoveId::new(v, u);
                assert_eq!(m.index(), next);
                assert_eq!(m.pair(), (u, v));
                next += 1;
            }
        }
        assert_eq!(next, MoveId::count(n));
        let big = MoveId::new(92_000, 91_999);
        assert_eq!(big.pair(), (91_999, 92_000));
    }

    #[test]
    fn two_by_two_cost_counts_both_orders() {
        let inst = Instance::<i64>::new("t", 2, vec![0, 3, 3, 0], vec![0, 5, 5, 0]).unwrap();
        assert_eq!(total_cost(&inst, &Permutation::identity(2)), 30);
    }

    #[test]
    fn zero_flow_has_zero_cost_and_deltas() {
        let inst = uniform(7, 0.0, 3);
        let p = Permutation::random(7, &mut crate::rng::from_seed(1));
        assert_eq!(total_cost(&inst, &p), 0);
        assert!(DeltaTable::from_scratch_full(&inst, &p).as_slice().iter().all(|&d| d == 0));
        assert!(DeltaTable::from_scratch_sparse(&inst, &p).as_slice().iter().all(|&d| d == 0));
    }

    #[test]
    fn identical_flow_rows_swap_for_free() {
        // Facilities 0 and 1 see the same flows to everyone else.
        let n = 4;
        let mut flow = vec![0i64; 16];
        let mut set = |i: usize, j: usize, w: i64| {
            flow[i * n + j] = w;
            flow[j * n + i] = w;
        };
        set(0, 1, 7);
        set(0, 2, 2);
        set(1, 2, 2);
        set(0, 3, 5);
        set(1, 3, 5);
        let dist = uniform(4, 0.0, 9).dist_matrix().to_vec();
        let inst = Instance::new("twins", n, flow, dist).unwrap();
        let p = Permutation::from_locations(vec![2, 0, 3, 1]).unwrap();
        assert_eq!(swap_delta_full(&inst, &p, 0, 1), 0);
        assert_eq!(swap_delta_sparse(&inst, &p, 0, 1), 0);
    }

    #[test]
    fn isolated_pair_swaps_for_free() {
        let n = 5;
        let mut flow = vec![0i64; 25];
        flow[2 * n + 3] = 4;
        flow[3 * n + 2] = 4;
        let inst = Instance::new("iso", n, flow, uniform(5, 0.0, 2).dist_matrix().to_vec()).unwrap();
        let p = Permutation::identity(n);
        assert_eq!(swap_delta_sparse(&inst, &p, 0, 4), 0);
        assert_eq!(brute_delta(&inst, &p, 0, 4), 0);
    }

    #[test]
    fn shared_neighbour_counts_once() {
        // Facility 2 is adjacent to both 0 and 1 with different weights.
        let n = 3;
        let flow = vec![0i64, 0, 1, 0, 0, 3, 1, 3, 0];
        let dist = vec![0i64, 4, 9, 4, 0, 2, 9, 2, 0];
        let inst = Instance::new("shared", n, flow, dist).unwrap();
        let p = Permutation::identity(n);
        // 2·(F[0][2] − F[1][2])·(D[1][2] − D[0][2]) = 2·(−2)·(−7) = 28
        assert_eq!(swap_delta_full(&inst, &p, 0, 1), 28);
        assert_eq!(swap_delta_sparse(&inst, &p, 0, 1), 28);
        assert_eq!(brute_delta(&inst, &p, 0, 1), 28);
    }

    #[test]
    fn full_and_sparse_match_brute_force_exhaustively() {
        for seed in 0..50u64 {
            for n in 2..=10 {
                let inst = uniform(n, [0.15, 0.5, 1.0][seed as usize % 3], seed * 31 + n as u64);
                let p = Permutation::random(n, &mut crate::rng::from_seed(seed));
                for v in 1..n {
                    for u in 0..v {
                        let want = brute_delta(&inst, &p, u, v);
                        assert_eq!(swap_delta_full(&inst, &p, u, v), want);
                        assert_eq!(swap_delta_sparse(&inst, &p, u, v), want);
                    }
                }
            }
        }
    }

    #[test]
    fn incremental_rejects_overlap() {
        let inst = uniform(5, 0.5, 1);
        let p = Permutation::identity(5);
        assert_eq!(
            swap_delta_incremental(&inst, &p, 0, 1, 2, 2, 4),
            Err(DeltaError::Overlap { r: 1, s: 2, u: 2, v: 4 })
        );
    }

    #[test]
    fn zero_flow_coefficient_leaves_delta_alone() {
        let inst: Instance<i64> = generate_instance(&GeneratorConfig::new(30, 3, 4)).unwrap();
        let (r, s) = (0, 1);
        let far: Vec<usize> = (2..30)
            .filter(|&x| inst.flow(r, x) == 0 && inst.flow(s, x) == 0)
            .collect();
        let p = Permutation::identity(30);
        assert_eq!(swap_delta_incremental(&inst, &p, 12345, r, s, far[0], far[1]).unwrap(), 12345);
    }

    #[test]
    fn zero_distance_coefficient_leaves_delta_alone() {
        // Unit square, diagonals length 2. u and v sit at equal distance from
        // both swapped locations.
        let n = 4;
        let dist: Vec<i64> = vec![0, 1, 1, 2, 1, 0, 2, 1, 1, 2, 0, 1, 2, 1, 1, 0];
        let flow: Vec<i64> = vec![0, 0, 3, 0, 0, 0, 0, 1, 3, 0, 0, 0, 0, 1, 0, 0];
        let inst = Instance::new("sq", n, flow, dist).unwrap();
        // After swapping r=0 and s=3 locations are r→3, s→0; u=1 at 1, v=2 at 2,
        // both at distance 1 from each swapped location.
        let mut p = Permutation::identity(n);
        p.apply_swap(0, 3).unwrap();
        assert_eq!(swap_delta_incremental(&inst, &p, -77, 0, 3, 1, 2).unwrap(), -77);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn incremental_matches_recompute(seed in any::<u64>(), n in 4usize..16, density in 0.0f64..1.0) {
            let inst = uniform(n, density, seed);
            let mut rng = crate::rng::from_seed(seed ^ 0x5eed);
            let mut p = Permutation::random(n, &mut rng);
            let before = DeltaTable::from_scratch_full(&inst, &p);
            let r = (seed % n as u64) as usize;
            let s = (r + 1 + (seed / 7 % (n as u64 - 1)) as usize) % n;
            p.apply_swap(r, s).unwrap();
            for v in 1..n {
                for u in 0..v {
                    if [u, v].iter().any(|x| *x == r || *x == s) { continue; }
                    let old = before.get(MoveId::new(u, v));
                    let got = swap_delta_incremental(&inst, &p, old, r, s, u, v).unwrap();
                    prop_assert_eq!(got, swap_delta_sparse(&inst, &p, u, v));
                    let neighbour = |x: usize| inst.flow(r, x) != 0 || inst.flow(s, x) != 0;
                    if !neighbour(u) && !neighbour(v) {
                        prop_assert_eq!(got, old);
                    }
                }
            }
        }

        #[test]
        fn refresh_restores_from_scratch_table(seed in any::<u64>(), n in 3usize..24, density in 0.0f64..0.6) {
            let inst = uniform(n, density, seed);
            let mut rng = crate::rng::from_seed(seed);
            let mut p = Permutation::random(n, &mut rng);
            let mut table = DeltaTable::from_scratch_full(&inst, &p);
            let mut refresher = Refresher::new(&inst, &p);
            let mut out = Vec::new();
            for step in 0..5u64 {
                let r = ((seed >> step) % n as u64) as usize;
                let s = (r + 1 + (step as usize % (n - 1))) % n;
                if r == s { continue; }
                let before = table.clone();
                p.apply_swap(r, s).unwrap();
                out.clear();
                let stats = refresher.refresh(&inst, &p, &mut table, r, s, &mut out);
                let fresh = DeltaTable::from_scratch_full(&inst, &p);
                prop_assert_eq!(table.first_mismatch(&fresh), None);
                prop_assert_eq!(stats.recomputed, 2 * n - 3);
                // Every value change is reported.
                for i in 0..table.len() {
                    let m = MoveId::from_index(i);
                    if before.get(m) != table.get(m) {
                        prop_assert!(out.iter().any(|&(x, d)| x == m && d == table.get(m)));
                    }
                }
            }
        }
    }

    #[test]
    fn refresh_with_empty_flow_touches_only_the_swapped_pair() {
        let n = 9;
        let inst = uniform(n, 0.0, 5);
        let mut p = Permutation::identity(n);
        let mut table = DeltaTable::from_scratch_full(&inst, &p);
        p.apply_swap(2, 6).unwrap();
        let out = refresh_after_move(&inst, &p, &mut table, 2, 6);
        assert_eq!(out.len(), 2 * (n - 1) - 1);
        assert!(out.iter().all(|&(m, d)| d == 0 && { let (u, v) = m.pair(); [u, v].contains(&2) || [u, v].contains(&6) }));
    }

    #[test]
    fn refresh_counts_on_three_regular_instance() {
        let n = 60;
        let inst: Instance<i64> = generate_instance(&GeneratorConfig::new(n, 3, 8)).unwrap();
        let (r, s) = (0..n)
            .flat_map(|r| (r + 1..n).map(move |s| (r, s)))
            .find(|&(r, s)| {
                inst.flow(r, s) == 0
                    && inst.adjacency(r).iter().all(|&(k, _)| inst.flow(s, k) == 0)
            })
            .unwrap();
        let mut p = Permutation::random(n, &mut crate::rng::from_seed(2));
        let mut table = DeltaTable::from_scratch_sparse(&inst, &p);
        p.apply_swap(r, s).unwrap();
        let mut out = Vec::new();
        let stats = Refresher::new(&inst, &p).refresh(&inst, &p, &mut table, r, s, &mut out);
        assert_eq!(stats.recomputed, (n - 1) + (n - 2));
        assert!(stats.incremental <= 6 * (n - 1));
        assert!(stats.touched() <= 2 * (n - 1) + (n - 1) * 6);
        assert_eq!(table, DeltaTable::from_scratch_full(&inst, &p));
    }
}
