//! Instance generators.
//!
//! [`generate_instance`] builds the benchmark family: facilities sit on a
//! row-major square grid with rounded, scaled Euclidean distances, and flows
//! form a random k-regular simple graph with unit weights.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Instance, InstanceError};
use crate::{rng, Cost};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub distance_scale: u32,
}

impl GeneratorConfig {
    pub fn new(n: usize, k: usize, seed: u64) -> Self {
        Self { n, k, seed, distance_scale: 1000 }
    }

    pub fn check(&self) -> Result<(), InstanceError> {
        if self.k == 0 || self.k >= self.n {
            return Err(InstanceError::InvalidConfig(format!(
                "degree k = {} must satisfy 0 < k < n = {}",
                self.k, self.n
            )));
        }
        if (self.n * self.k) % 2 == 1 {
            return Err(InstanceError::InvalidConfig(format!(
                "n·k = {}·{} is odd, no {}-regular graph on {} nodes exists",
                self.n, self.k, self.k, self.n
            )));
        }
        if self.distance_scale == 0 {
            return Err(InstanceError::InvalidConfig("distance scale must be positive".into()));
        }
        Ok(())
    }
}

pub fn generate_instance<C: Cost>(cfg: &GeneratorConfig) -> Result<Instance<C>, InstanceError> {
    cfg.check()?;
    let n = cfg.n;
    let dist = grid_distances::<C>(n, cfg.distance_scale)?;
    let mut rng = rng::from_seed(cfg.seed);
    let neighbours = random_regular_graph(n, cfg.k, &mut rng);
    let mut flow = vec![C::zero(); n * n];
    for (i, adj) in neighbours.iter().enumerate() {
        for &j in adj {
            flow[i * n + j] = C::one();
        }
    }
    Instance::new(format!("grid-n{}-k{}-seed{}", n, cfg.k, cfg.seed), n, flow, dist)
}

/// Side of the smallest square grid holding `n` points.
fn grid_side(n: usize) -> usize {
    let mut s = (n as f64).sqrt() as usize;
    while s * s < n {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s
}

fn grid_distances<C: Cost>(n: usize, scale: u32) -> Result<Vec<C>, InstanceError> {
    let s = grid_side(n).max(1);
    let point = |i: usize| ((i % s) as f64, (i / s) as f64);
    let mut dist = vec![C::zero(); n * n];
    for i in 0..n {
        let (xi, yi) = point(i);
        for j in (i + 1)..n {
            let (xj, yj) = point(j);
            let d = (f64::from(scale) * (xi - xj).hypot(yi - yj)).round();
            let d = C::from_f64(d).ok_or_else(|| {
                InstanceError::InvalidConfig(format!("distance {d} does not fit the cost type"))
            })?;
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    Ok(dist)
}

/// Random k-regular simple graph by stub pairing.
///
/// Stubs are shuffled and paired; pairs that would form a self-loop or a
/// repeated edge go back into the pool and the leftovers are reshuffled.
/// When no valid pair remains among the leftovers the whole attempt restarts.
/// Requires `0 < k < n` and `n·k` even.
fn random_regular_graph<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<Vec<usize>> {
    loop {
        if let Some(g) = try_pairing(n, k, rng) {
            return g;
        }
    }
}

fn try_pairing<R: Rng>(n: usize, k: usize, rng: &mut R) -> Option<Vec<Vec<usize>>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(k); n];
    let mut stubs: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat_n(i, k)).collect();
    let mut leftover = vec![0usize; n];
    while !stubs.is_empty() {
        leftover.iter_mut().for_each(|c| *c = 0);
        stubs.shuffle(rng);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a != b && !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            } else {
                leftover[a] += 1;
                leftover[b] += 1;
            }
        }
        let open: Vec<usize> = (0..n).filter(|&i| leftover[i] > 0).collect();
        let any_valid = open
            .iter()
            .enumerate()
            .any(|(x, &a)| open[x + 1..].iter().any(|&b| !adj[a].contains(&b)));
        if !open.is_empty() && !any_valid {
            return None;
        }
        stubs = open
            .iter()
            .flat_map(|&i| std::iter::repeat_n(i, leftover[i]))
            .collect();
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    Some(adj)
}

/// Random symmetric instance with independent entries, for testing and for
/// dense comparison runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UniformConfig {
    pub n: usize,
    /// Probability that an off-diagonal flow pair is nonzero.
    pub flow_density: f64,
    pub max_flow: u32,
    pub max_dist: u32,
    pub seed: u64,
}

pub fn generate_uniform<C: Cost>(cfg: &UniformConfig) -> Result<Instance<C>, InstanceError> {
    if !(0.0..=1.0).contains(&cfg.flow_density) || cfg.max_flow == 0 || cfg.max_dist == 0 {
        return Err(InstanceError::InvalidConfig(format!("{cfg:?}")));
    }
    let n = cfg.n;
    let mut rng = rng::from_seed(cfg.seed);
    let mut flow = vec![C::zero(); n * n];
    let mut dist = vec![C::zero(); n * n];
    let cast = |v: u32| {
        C::from_u32(v).ok_or_else(|| InstanceError::InvalidConfig(format!("{v} does not fit the cost type")))
    };
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(cfg.flow_density) {
                let f = cast(rng.gen_range(1..=cfg.max_flow))?;
                flow[i * n + j] = f;
                flow[j * n + i] = f;
            }
            let d = cast(rng.gen_range(1..=cfg.max_dist))?;
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    Instance::new(format!("uniform-n{}-seed{}", n, cfg.seed), n, flow, dist)
}
