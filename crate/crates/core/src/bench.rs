//! Timing experiments: time per iteration against instance size and flow
//! degree, and the share of time spent in queue code.
//!
//! Every measurement skips a warmup prefix of the iterations (10% by default)
//! and reports the median over seeds. Instances come from
//! [`generate_instance`] with the instance seed equal to the solver seed.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{generate_instance, GeneratorConfig, InstanceError};
use crate::solver::{Engine, EngineKind, PhaseSeconds, SolverError, SolverParams};
use crate::Instance;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("need at least {needed} points for a fit, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("sizes must be strictly ascending")]
    NotAscending,
    #[error("need at least 3 seeds unless quick mode is on, got {0}")]
    TooFewSeeds(usize),
    #[error("timing runs must not enable debug checks")]
    DebugChecksEnabled,
    #[error("queue time share needs an instrumented run")]
    NotInstrumented,
    #[error("iteration count {0} leaves nothing to time after warmup")]
    TooFewIterations(u64),
    #[error("non-positive timing {0} cannot be fitted on a log scale")]
    NonPositive(f64),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One timed run. Serializes to the CSV columns
/// `n,k,engine,seed,iterations,sec_per_iter,pq_fraction`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchPoint {
    pub n: usize,
    pub k: usize,
    pub engine: EngineKind,
    pub seed: u64,
    pub iterations: u64,
    pub sec_per_iter: f64,
    /// Sparse engine only.
    pub pq_fraction: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub iterations: u64,
    pub seeds: Vec<u64>,
    pub warmup_fraction: f64,
    /// Allows fewer than three seeds.
    pub quick: bool,
    /// Run seeds on separate threads instead of one after another.
    pub parallel: bool,
    pub distance_scale: u32,
    /// Base parameters; iterations and seed are overridden per run.
    pub params: SolverParams,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            iterations: 10_000,
            seeds: vec![1, 2, 3],
            warmup_fraction: 0.1,
            quick: false,
            parallel: false,
            distance_scale: 1000,
            params: SolverParams { record_trace: false, ..Default::default() },
        }
    }
}

impl BenchConfig {
    fn check(&self) -> Result<(), BenchError> {
        if self.params.debug_checks {
            return Err(BenchError::DebugChecksEnabled);
        }
        if !self.quick && self.seeds.len() < 3 {
            return Err(BenchError::TooFewSeeds(self.seeds.len()));
        }
        if self.seeds.is_empty() {
            return Err(BenchError::TooFewSeeds(0));
        }
        if self.warmup_iterations() >= self.iterations {
            return Err(BenchError::TooFewIterations(self.iterations));
        }
        Ok(())
    }

    fn warmup_iterations(&self) -> u64 {
        (self.iterations as f64 * self.warmup_fraction).floor() as u64
    }

    fn instance(&self, n: usize, k: usize, seed: u64) -> Result<Instance<i64>, BenchError> {
        Ok(generate_instance(&GeneratorConfig { n, k, seed, distance_scale: self.distance_scale })?)
    }
}

/// Times one run, excluding the warmup prefix.
pub fn measure(inst: &Instance<i64>, k: usize, kind: EngineKind, seed: u64, cfg: &BenchConfig) -> Result<BenchPoint, BenchError> {
    cfg.check()?;
    let params = SolverParams {
        iterations: cfg.iterations,
        seed,
        instrument: true,
        record_trace: false,
        ..cfg.params.clone()
    };
    let mut engine = Engine::new(kind, inst, &params)?;
    let warmup = cfg.warmup_iterations();
    for _ in 0..warmup {
        engine.step()?;
    }
    let before = engine.state().phases();
    let started = Instant::now();
    for _ in warmup..cfg.iterations {
        engine.step()?;
    }
    let elapsed = started.elapsed().as_secs_f64();
    let after = engine.state().phases();
    let timed = PhaseSeconds {
        selection: after.selection - before.selection,
        delta_update: after.delta_update - before.delta_update,
        queue_ops: after.queue_ops - before.queue_ops,
    };
    Ok(BenchPoint {
        n: inst.n(),
        k,
        engine: kind,
        seed,
        iterations: cfg.iterations,
        sec_per_iter: elapsed / (cfg.iterations - warmup) as f64,
        pq_fraction: (kind == EngineKind::Sparse).then(|| timed.queue_fraction(kind)),
    })
}

fn measure_seeds(n: usize, k: usize, kind: EngineKind, cfg: &BenchConfig) -> Result<Vec<BenchPoint>, BenchError> {
    let one = |seed: u64| -> Result<BenchPoint, BenchError> {
        let inst = cfg.instance(n, k, seed)?;
        measure(&inst, k, kind, seed, cfg)
    };
    if cfg.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = cfg.seeds.iter().map(|&seed| scope.spawn(move || one(seed))).collect();
            handles.into_iter().map(|h| h.join().expect("bench worker panicked")).collect()
        })
    } else {
        cfg.seeds.iter().map(|&seed| one(seed)).collect()
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.is_empty() {
        f64::NAN
    } else if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Least-squares line `y = intercept + slope·x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64), BenchError> {
    let len = xs.len().min(ys.len());
    if len < 2 {
        return Err(BenchError::InsufficientPoints { needed: 2, got: len });
    }
    let n = len as f64;
    let mx = xs[..len].iter().sum::<f64>() / n;
    let my = ys[..len].iter().sum::<f64>() / n;
    let sxx: f64 = xs[..len].iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs[..len].iter().zip(&ys[..len]).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((my - slope * mx, slope))
}

/// Slope of `log y` against `log x`, from at least three points.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64, BenchError> {
    let len = xs.len().min(ys.len());
    if len < 3 {
        return Err(BenchError::InsufficientPoints { needed: 3, got: len });
    }
    if let Some(&bad) = xs.iter().chain(ys).find(|v| **v <= 0.0) {
        return Err(BenchError::NonPositive(bad));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    Ok(linear_fit(&lx, &ly)?.1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub k: usize,
    pub points: Vec<BenchPoint>,
    pub sizes: Vec<usize>,
    /// Median seconds per iteration per size.
    pub dense_median: Vec<f64>,
    pub sparse_median: Vec<f64>,
    pub dense_slope: f64,
    pub sparse_slope: f64,
    /// Log-log slope of dense time over sparse time, `dense_slope − sparse_slope`.
    pub ratio_slope: f64,
}

impl ScalingReport {
    /// Fits slopes to per-size median timings.
    pub fn from_medians(k: usize, sizes: Vec<usize>, dense: Vec<f64>, sparse: Vec<f64>, points: Vec<BenchPoint>) -> Result<Self, BenchError> {
        let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
        let dense_slope = fit_loglog_slope(&xs, &dense)?;
        let sparse_slope = fit_loglog_slope(&xs, &sparse)?;
        Ok(Self {
            k,
            points,
            sizes,
            dense_median: dense,
            sparse_median: sparse,
            dense_slope,
            sparse_slope,
            ratio_slope: dense_slope - sparse_slope,
        })
    }
}

/// Both engines over ascending sizes at fixed degree.
pub fn bench_scaling(sizes: &[usize], k: usize, cfg: &BenchConfig) -> Result<ScalingReport, BenchError> {
    if sizes.len() < 3 {
        return Err(BenchError::InsufficientPoints { needed: 3, got: sizes.len() });
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::NotAscending);
    }
    cfg.check()?;
    let mut points = Vec::new();
    let (mut dense, mut sparse) = (Vec::new(), Vec::new());
    for &n in sizes {
        for (kind, medians) in [(EngineKind::Dense, &mut dense), (EngineKind::Sparse, &mut sparse)] {
            let runs = measure_seeds(n, k, kind, cfg)?;
            medians.push(median(&runs.iter().map(|p| p.sec_per_iter).collect::<Vec<_>>()));
            points.extend(runs);
        }
    }
    ScalingReport::from_medians(k, sizes.to_vec(), dense, sparse, points)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeReport {
    pub n: usize,
    pub points: Vec<BenchPoint>,
    pub degrees: Vec<usize>,
    /// Median sparse seconds per iteration per degree.
    pub median: Vec<f64>,
    pub intercept: f64,
    pub slope: f64,
    /// `|measured − fit| / fit` per degree.
    pub relative_deviation: Vec<f64>,
}

impl DegreeReport {
    pub fn max_relative_deviation(&self) -> f64 {
        self.relative_deviation.iter().copied().fold(0.0, f64::max)
    }

    /// Signed residual at the largest degree; negative means below the line.
    pub fn high_degree_residual(&self) -> f64 {
        let (k, t) = (*self.degrees.last().unwrap_or(&0), *self.median.last().unwrap_or(&0.0));
        t - (self.intercept + self.slope * k as f64)
    }
}

/// Sparse engine time per iteration against flow degree at fixed size.
pub fn bench_degree(n: usize, degrees: &[usize], cfg: &BenchConfig) -> Result<DegreeReport, BenchError> {
    if degrees.len() < 2 {
        return Err(BenchError::InsufficientPoints { needed: 2, got: degrees.len() });
    }
    for &k in degrees {
        GeneratorConfig { n, k, seed: 0, distance_scale: cfg.distance_scale }.check()?;
    }
    cfg.check()?;
    let mut points = Vec::new();
    let mut med = Vec::new();
    for &k in degrees {
        let runs = measure_seeds(n, k, EngineKind::Sparse, cfg)?;
        med.push(median(&runs.iter().map(|p| p.sec_per_iter).collect::<Vec<_>>()));
        points.extend(runs);
    }
    let xs: Vec<f64> = degrees.iter().map(|&k| k as f64).collect();
    let (intercept, slope) = linear_fit(&xs, &med)?;
    let relative_deviation = xs
        .iter()
        .zip(&med)
        .map(|(x, t)| {
            let fit = intercept + slope * x;
            (t - fit).abs() / fit
        })
        .collect();
    Ok(DegreeReport { n, points, degrees: degrees.to_vec(), median: med, intercept, slope, relative_deviation })
}

/// Fraction of sparse-engine time spent updating the queues at one size,
/// median over `cfg.seeds`. Requires `cfg.params.instrument`.
pub fn report_pq_share(n: usize, k: usize, cfg: &BenchConfig) -> Result<f64, BenchError> {
    pq_share_points(n, k, cfg).map(|(share, _)| share)
}

/// [`report_pq_share`] together with the per-seed points.
pub fn pq_share_points(n: usize, k: usize, cfg: &BenchConfig) -> Result<(f64, Vec<BenchPoint>), BenchError> {
    if !cfg.params.instrument {
        return Err(BenchError::NotInstrumented);
    }
    let runs = measure_seeds(n, k, EngineKind::Sparse, cfg)?;
    let fractions: Vec<f64> = runs.iter().filter_map(|p| p.pq_fraction).collect();
    Ok((median(&fractions), runs))
}

/// CSV with a header row, one line per point.
pub fn write_csv<W: Write>(points: &[BenchPoint], writer: W) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(["n", "k", "engine", "seed", "iterations", "sec_per_iter", "pq_fraction"])?;
    for p in points {
        w.serialize(p)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
