//! QAP instance model: dense flow and distance matrices plus flow adjacency
//! lists.
//!
//! Only symmetric matrices with a zero diagonal and nonnegative entries are
//! supported. Everything that builds an [`Instance`] through a checked path
//! ([`Instance::new`], [`parse_qaplib`], the generators) rejects anything else.

mod generate;
mod qaplib;

use std::fmt;

use thiserror::Error;

use crate::Cost;

pub use generate::{generate_instance, generate_uniform, GeneratorConfig, UniformConfig};
pub use qaplib::{parse_qaplib, read_qaplib, write_qaplib, MatrixOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Matrix {
    Flow,
    Distance,
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Matrix::Flow => f.write_str("flow"),
            Matrix::Distance => f.write_str("distance"),
        }
    }
}

/// A broken instance invariant, with the offending entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongLength { matrix: Matrix, expected: usize, found: usize },
    Asymmetric { matrix: Matrix, i: usize, j: usize },
    NonzeroDiagonal { matrix: Matrix, i: usize },
    Negative { matrix: Matrix, i: usize, j: usize },
    AdjacencyMismatch { facility: usize },
    /// `4·n²·max(F)·max(D)` does not fit the cost type.
    CostOverflow { n: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongLength { matrix, expected, found } => {
                write!(f, "{matrix} matrix has {found} entries, expected {expected}")
            }
            Violation::Asymmetric { matrix, i, j } => {
                write!(f, "{matrix} matrix is asymmetric at ({i}, {j})")
            }
            Violation::NonzeroDiagonal { matrix, i } => {
                write!(f, "{matrix} matrix has a nonzero diagonal entry at ({i}, {i})")
            }
            Violation::Negative { matrix, i, j } => {
                write!(f, "{matrix} matrix has a negative entry at ({i}, {j})")
            }
            Violation::AdjacencyMismatch { facility } => {
                write!(f, "adjacency list of facility {facility} disagrees with the flow matrix")
            }
            Violation::CostOverflow { n } => {
                write!(f, "costs of this size-{n} instance can overflow the cost type")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("malformed instance file at token {token}: {message}")]
    Malformed { token: usize, message: String },
    #[error("unsupported instance: {0}")]
    Unsupported(Violation),
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A symmetric, null-diagonal QAP instance of size `n`.
///
/// Matrices are stored row-major. `adjacency[i]` lists `(j, flow[i][j])` for
/// every nonzero off-diagonal flow, in increasing `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance<C> {
    n: usize,
    flow: Vec<C>,
    dist: Vec<C>,
    adjacency: Vec<Vec<(usize, C)>>,
    name: String,
}

impl<C: Cost> Instance<C> {
    /// Builds and validates an instance. Fails on the first violation found.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        flow: Vec<C>,
        dist: Vec<C>,
    ) -> Result<Self, InstanceError> {
        let inst = Self::from_parts_unchecked(name, n, flow, dist);
        match inst.validate().into_iter().next() {
            Some(v) => Err(InstanceError::Unsupported(v)),
            None => Ok(inst),
        }
    }

    /// Builds an instance without checking any invariant. Adjacency lists are
    /// derived from whatever part of `flow` exists. Use [`Instance::validate`]
    /// before handing the result to a solver.
    pub fn from_parts_unchecked(
        name: impl Into<String>,
        n: usize,
        flow: Vec<C>,
        dist: Vec<C>,
    ) -> Self {
        let adjacency = build_adjacency(n, &flow);
        Self { n, flow, dist, adjacency, name: name.into() }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn flow(&self, i: usize, j: usize) -> C {
        self.flow[i * self.n + j]
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> C {
        self.dist[a * self.n + b]
    }

    #[inline]
    pub fn flow_row(&self, i: usize) -> &[C] {
        &self.flow[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn dist_row(&self, a: usize) -> &[C] {
        &self.dist[a * self.n..(a + 1) * self.n]
    }

    pub fn flow_matrix(&self) -> &[C] {
        &self.flow
    }

    pub fn dist_matrix(&self) -> &[C] {
        &self.dist
    }

    /// Nonzero flow neighbours of facility `i`.
    #[inline]
    pub fn adjacency(&self, i: usize) -> &[(usize, C)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.adjacency.iter().map(Vec::len).sum::<usize>() as f64 / self.n as f64
    }

    /// Fraction of nonzero off-diagonal flow entries.
    pub fn sparsity(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let nonzero = (0..self.n)
            .flat_map(|i| (0..self.n).filter(move |&j| j != i).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.flow(i, j).is_zero())
            .count();
        nonzero as f64 / (self.n * self.n - self.n) as f64
    }

    /// Every broken invariant, in matrix order. Empty iff the instance is
    /// usable by the solvers.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.n;
        let mut out = Vec::new();
        let mut shape_ok = true;
        for (matrix, data) in [(Matrix::Flow, &self.flow), (Matrix::Distance, &self.dist)] {
            if data.len() != n * n {
                out.push(Violation::WrongLength { matrix, expected: n * n, found: data.len() });
                shape_ok = false;
            }
        }
        if !shape_ok {
            return out;
        }
        for (matrix, data) in [(Matrix::Flow, &self.flow), (Matrix::Distance, &self.dist)] {
            for i in 0..n {
                if !data[i * n + i].is_zero() {
                    out.push(Violation::NonzeroDiagonal { matrix, i });
                }
                for j in 0..n {
                    if data[i * n + j] < C::zero() {
                        out.push(Violation::Negative { matrix, i, j });
                    }
                    if j > i && data[i * n + j] != data[j * n + i] {
                        out.push(Violation::Asymmetric { matrix, i, j });
                    }
                }
            }
        }
        let expected = build_adjacency(n, &self.flow);
        if self.adjacency.len() != n {
            out.push(Violation::AdjacencyMismatch { facility: self.adjacency.len().min(n) });
        } else {
            for (i, (have, want)) in self.adjacency.iter().zip(&expected).enumerate() {
                if have != want {
                    out.push(Violation::AdjacencyMismatch { facility: i });
                }
            }
        }
        if cost_bound(n, &self.flow, &self.dist).is_none() {
            out.push(Violation::CostOverflow { n });
        }
        out
    }

    #[cfg(test)]
    pub(crate) fn adjacency_mut(&mut self) -> &mut Vec<Vec<(usize, C)>> {
        &mut self.adjacency
    }
}

fn build_adjacency<C: Cost>(n: usize, flow: &[C]) -> Vec<Vec<(usize, C)>> {
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .filter_map(|j| flow.get(i * n + j).copied().map(|w| (j, w)))
                .filter(|(_, w)| !w.is_zero())
                .collect()
        })
        .collect()
}

/// `4·n²·max|F|·max|D|`, or `None` when it overflows `C`. The factor 4 covers
/// the intermediate terms of the incremental delta update.
fn cost_bound<C: Cost>(n: usize, flow: &[C], dist: &[C]) -> Option<C> {
    let max_abs = |m: &[C]| m.iter().map(|x| x.abs()).max().unwrap_or_else(C::zero);
    let n_c = C::from_usize(n)?;
    let four = C::from_u8(4)?;
    four.checked_mul(&n_c)?
        .checked_mul(&n_c)?
        .checked_mul(&max_abs(flow))?
        .checked_mul(&max_abs(dist))
}
