//! Independent oracles shared by the integration tests. Nothing here calls
//! into the delta or solver code it is used to check.
#![allow(dead_code)]

use sparse_rts::instance::{generate_uniform, UniformConfig};
use sparse_rts::QapInstance;

/// Cost by a double loop over ordered facility pairs.
pub fn brute_cost(inst: &QapInstance, loc: &[usize]) -> i64 {
    let n = inst.n();
    let (f, d) = (inst.flow_matrix(), inst.dist_matrix());
    let mut c = 0;
    for i in 0..n {
        for j in 0..n {
            c += f[i * n + j] * d[loc[i] * n + loc[j]];
        }
    }
    c
}

/// Cost after swapping the locations of `r` and `s`, minus the cost before.
pub fn brute_delta(inst: &QapInstance, loc: &[usize], r: usize, s: usize) -> i64 {
    let mut after = loc.to_vec();
    after.swap(r, s);
    brute_cost(inst, &after) - brute_cost(inst, loc)
}

/// Minimum cost over all n! assignments (Heap's algorithm).
pub fn exhaustive_optimum(inst: &QapInstance) -> i64 {
    let n = inst.n();
    let mut loc: Vec<usize> = (0..n).collect();
    let mut best = brute_cost(inst, &loc);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            loc.swap(j, i);
            best = best.min(brute_cost(inst, &loc));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// Random symmetric instance whose flow density cycles through sparse and
/// dense settings with the seed.
pub fn mixed_instance(n: usize, seed: u64) -> QapInstance {
    let flow_density = [0.0, 0.1, 0.3, 0.6, 1.0][(seed % 5) as usize];
    generate_uniform(&UniformConfig { n, flow_density, max_flow: 9, max_dist: 50, seed }).unwrap()
}
