mod common;

use common::{brute_cost, brute_delta, mixed_instance};
use rand::seq::SliceRandom;
use rand::Rng;
use sparse_rts::delta::{
    refresh_after_move, swap_delta_full, swap_delta_incremental, swap_delta_sparse, total_cost, Refresher,
};
use sparse_rts::instance::{generate_instance, GeneratorConfig};
use sparse_rts::{rng, MoveId, Permutation, QapDeltaTable, QapInstance};

fn random_perm(n: usize, seed: u64) -> Permutation {
    Permutation::random(n, &mut rng::from_seed(seed))
}

#[test]
fn two_facility_cost() {
    let inst = QapInstance::new("two", 2, vec![0, 3, 3, 0], vec![0, 5, 5, 0]).unwrap();
    assert_eq!(total_cost(&inst, &Permutation::identity(2)), 30);
    assert_eq!(swap_delta_full(&inst, &Permutation::identity(2), 0, 1), 0);
}

#[test]
fn cost_matches_double_loop() {
    for seed in 0..20 {
        let inst = mixed_instance(6, seed);
        let p = random_perm(6, seed);
        assert_eq!(total_cost(&inst, &p), brute_cost(&inst, p.locations()));
    }
}

#[test]
fn delta_is_cost_after_minus_cost_before() {
    for seed in 0..30 {
        let n = 4 + seed as usize % 9;
        let inst = mixed_instance(n, seed);
        let p = random_perm(n, seed ^ 0xabc);
        for v in 1..n {
            for u in 0..v {
                let want = brute_delta(&inst, p.locations(), u, v);
                assert_eq!(swap_delta_full(&inst, &p, u, v), want, "full ({u},{v})");
                assert_eq!(swap_delta_sparse(&inst, &p, u, v), want, "sparse ({u},{v})");
                assert_eq!(swap_delta_full(&inst, &p, v, u), want, "order ({v},{u})");
            }
        }
    }
}

#[test]
fn incremental_rejects_overlapping_moves() {
    let inst = mixed_instance(6, 1);
    let p = random_perm(6, 1);
    assert!(swap_delta_incremental(&inst, &p, 0, 1, 2, 1, 4).is_err());
    assert!(swap_delta_incremental(&inst, &p, 0, 1, 2, 3, 2).is_err());
}

#[test]
fn incremental_matches_recomputation() {
    for seed in 0..20 {
        let n = 5 + seed as usize % 8;
        let inst = mixed_instance(n, seed);
        let mut p = random_perm(n, seed);
        let before = QapDeltaTable::from_scratch_full(&inst, &p);
        let mut rng = rng::from_seed(seed);
        let r = rng.gen_range(0..n);
        let s = (r + rng.gen_range(1..n)) % n;
        p.apply_swap(r, s).unwrap();
        for v in 1..n {
            for u in 0..v {
                if [u, v].iter().any(|x| *x == r || *x == s) {
                    continue;
                }
                let old = before.get(MoveId::new(u, v));
                let got = swap_delta_incremental(&inst, &p, old, r, s, u, v).unwrap();
                assert_eq!(got, brute_delta(&inst, p.locations(), u, v));
            }
        }
    }
}

#[test]
fn table_refresh_equals_table_from_scratch() {
    for seed in 0..10 {
        let inst: QapInstance = generate_instance(&GeneratorConfig::new(60, 3, seed)).unwrap();
        let mut p = random_perm(60, seed);
        let mut table = QapDeltaTable::from_scratch_sparse(&inst, &p);
        let mut refresher = Refresher::new(&inst, &p);
        let mut rng = rng::from_seed(seed + 100);
        let mut out = Vec::new();
        for _ in 0..50 {
            let r = rng.gen_range(0..60);
            let s = (r + rng.gen_range(1..60)) % 60;
            p.apply_swap(r, s).unwrap();
            let before = table.clone();
            out.clear();
            refresher.refresh(&inst, &p, &mut table, r, s, &mut out);
            assert_eq!(table, QapDeltaTable::from_scratch_full(&inst, &p));
            // Every changed entry was reported.
            for i in 0..table.len() {
                let m = MoveId::from_index(i);
                if table.get(m) != before.get(m) {
                    assert!(out.iter().any(|&(x, d)| x == m && d == table.get(m)), "unreported {m:?}");
                }
            }
        }
    }
}

#[test]
fn untouched_entries_keep_their_value() {
    // Moves with no endpoint in {r, s} or their neighbourhoods are never reported
    // and are still exact.
    let inst: QapInstance = generate_instance(&GeneratorConfig::new(200, 3, 5)).unwrap();
    let mut p = random_perm(200, 5);
    let mut table = QapDeltaTable::from_scratch_sparse(&inst, &p);
    let (r, s) = (10, 150);
    p.apply_swap(r, s).unwrap();
    let out = refresh_after_move(&inst, &p, &mut table, r, s);
    let mut near = vec![false; 200];
    for x in [r, s] {
        near[x] = true;
        for &(k, _) in inst.adjacency(x) {
            near[k] = true;
        }
    }
    let mut rng = rng::from_seed(9);
    let mut sampled = 0;
    while sampled < 2000 {
        let (u, v) = (rng.gen_range(0..200), rng.gen_range(0..200));
        if u == v || near[u] || near[v] {
            continue;
        }
        let m = MoveId::new(u, v);
        assert!(!out.iter().any(|&(x, _)| x == m));
        assert_eq!(table.get(m), brute_delta(&inst, p.locations(), u, v));
        sampled += 1;
    }
}

#[test]
fn deltas_telescope_along_a_swap_sequence() {
    let inst = mixed_instance(10, 3);
    let mut p = random_perm(10, 3);
    let start = brute_cost(&inst, p.locations());
    let mut sum = 0;
    let mut pairs: Vec<(usize, usize)> = (0..10).flat_map(|a| (a + 1..10).map(move |b| (a, b))).collect();
    pairs.shuffle(&mut rng::from_seed(4));
    for &(r, s) in &pairs {
        sum += swap_delta_sparse(&inst, &p, r, s);
        p.apply_swap(r, s).unwrap();
    }
    assert_eq!(start + sum, total_cost(&inst, &p));
}

#[test]
fn move_ids_enumerate_pairs_in_order() {
    let mut i = 0;
    for v in 1..30 {
        for u in 0..v {
            assert_eq!(MoveId::new(u, v).index(), i);
            assert_eq!(MoveId::new(v, u).index(), i);
            assert_eq!(MoveId::from_index(i).pair(), (u, v));
            i += 1;
        }
    }
    assert_eq!(MoveId::count(30), i);
}
