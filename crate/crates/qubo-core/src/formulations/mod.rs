//! Problem-specific QUBO builders.
//!
//! Each builder maps a combinatorial problem to a QUBO (directly or through
//! a penalty reformulation) and returns a [`Decoder`] that maps QUBO bit
//! vectors back to the original domain with a feasibility and objective
//! report. Builders never repair infeasible assignments; decoders report
//! violations and leave judgement to the caller.

mod binary_program;
mod decode;
mod graph_coloring;
mod max_cut;
mod max_two_sat;
mod number_partitioning;
mod quadratic_assignment;
mod quadratic_knapsack;
mod set_packing;
mod set_partitioning;
mod vertex_cover;

pub use binary_program::binary_program;
pub use decode::{ConstraintStatus, DecodedSolution, Decoder, SolutionDetail};
pub use graph_coloring::graph_coloring;
pub use max_cut::max_cut;
pub use max_two_sat::max_two_sat;
pub use number_partitioning::number_partitioning;
pub use quadratic_assignment::quadratic_assignment;
pub use quadratic_knapsack::quadratic_knapsack;
pub use set_packing::set_packing;
pub use set_partitioning::{set_partitioning, set_partitioning_direct};
pub use vertex_cover::min_vertex_cover;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected simple graph, optionally with vertex weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    weights: Option<Vec<f64>>,
}

impl Graph {
    /// Builds a graph, normalizing each edge to `(min, max)` order.
    /// Self-loops, duplicate edges, and out-of-range endpoints are
    /// rejected.
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(Error::invalid(format!("self-loop at vertex {a}")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if v >= n_vertices {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    n: n_vertices,
                });
            }
            normalized.push((u, v));
        }
        let mut sorted = normalized.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Graph {
            n_vertices,
            edges: normalized,
            weights: None,
        })
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.n_vertices {
            return Err(Error::LengthMismatch {
                expected: self.n_vertices,
                actual: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite);
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }
}

/// A literal in a 2-CNF clause: a variable index and a negation flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn positive(var: usize) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn negative(var: usize) -> Self {
        Literal { var, negated: true }
    }

    /// Truth value of the literal at an assignment.
    pub fn holds(&self, bits: &[u8]) -> bool {
        (bits[self.var] == 1) != self.negated
    }
}

/// A 2-CNF instance: clauses of exactly two literals over distinct
/// variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnfInstance {
    n_vars: usize,
    clauses: Vec<[Literal; 2]>,
}

impl CnfInstance {
    pub fn new(n_vars: usize, clauses: Vec<[Literal; 2]>) -> Result<Self> {
        for clause in &clauses {
            if clause[0].var == clause[1].var {
                return Err(Error::DuplicateVariable);
            }
            for lit in clause {
                if lit.var >= n_vars {
                    return Err(Error::IndexOutOfRange {
                        index: lit.var,
                        n: n_vars,
                    });
                }
            }
        }
        Ok(CnfInstance { n_vars, clauses })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> &[[Literal; 2]] {
        &self.clauses
    }
}

/// A quadratic assignment instance: a flow matrix between facilities and a
/// distance matrix between locations, both `n x n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QapInstance {
    n: usize,
    flow: Vec<Vec<f64>>,
    distance: Vec<Vec<f64>>,
}

impl QapInstance {
    pub fn new(flow: Vec<Vec<f64>>, distance: Vec<Vec<f64>>) -> Result<Self> {
        let n = flow.len();
        if distance.len() != n {
            return Err(Error::NotSquare {
                row: 0,
                len: distance.len(),
                n,
            });
        }
        for (i, row) in flow.iter().chain(distance.iter()).enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i % n.max(1),
                    len: row.len(),
                    n,
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        Ok(QapInstance { n, flow, distance })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flow(&self) -> &[Vec<f64>] {
        &self.flow
    }

    pub fn distance(&self) -> &[Vec<f64>] {
        &self.distance
    }
}

/// Validates a 0/1 matrix with `n` columns and returns the support of each
/// row (the indices of its 1 entries).
pub(crate) fn row_supports(matrix: &[Vec<u8>], n: usize) -> Result<Vec<Vec<usize>>> {
    let mut supports = Vec::with_capacity(matrix.len());
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSquare {
                row: i,
                len: row.len(),
                n,
            });
        }
        if let Some(&bad) = row.iter().find(|&&v| v > 1) {
            return Err(Error::invalid(format!(
                "matrix entries must be 0 or 1, found {bad} in row {i}"
            )));
        }
        supports.push(
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v == 1)
                .map(|(j, _)| j)
                .collect(),
        );
    }
    Ok(supports)
}

pub(crate) fn require_positive_penalty(p: f64) -> Result<()> {
    if p <= 0.0 || !p.is_finite() {
        return Err(Error::NonPositivePenalty(p));
    }
    Ok(())
}
