//! Mapping QUBO bit vectors back to the original problem domain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulations::max_two_sat::clause_penalty;
use crate::formulations::{CnfInstance, Graph, QapInstance};
use crate::model::Sense;
use crate::penalties::{LinearConstraint, SlackBlock};
use crate::reduction::{gadget_value, PseudoBooleanPolynomial, SubstitutionRecord};

/// Per-constraint penalty contribution at an assignment; zero exactly when
/// the encoded constraint is satisfied.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintStatus {
    pub label: String,
    pub penalty: f64,
}

/// Kind-specific report attached to a decoded solution.
#[derive(Clone, Debug, PartialEq)]
pub enum SolutionDetail {
    NumberPartitioning {
        sum_one: i64,
        sum_two: i64,
        difference: i64,
    },
    MaxCut {
        side_one: Vec<usize>,
        side_two: Vec<usize>,
        cut_size: f64,
    },
    VertexCover {
        cover: Vec<usize>,
        weight: f64,
        uncovered_edges: Vec<(usize, usize)>,
    },
    SetPacking {
        chosen: Vec<usize>,
        weight: f64,
        violated_rows: Vec<usize>,
    },
    MaxTwoSat {
        satisfied: Vec<usize>,
        unsatisfied: Vec<usize>,
    },
    SetPartitioning {
        chosen: Vec<usize>,
        cost: f64,
        uncovered: Vec<usize>,
        overcovered: Vec<usize>,
    },
    GraphColoring {
        /// Color per node when the node has exactly one color bit set.
        colors: Vec<Option<usize>>,
        uncolored: Vec<usize>,
        multicolored: Vec<usize>,
        conflicts: Vec<(usize, usize)>,
    },
    BinaryProgram {
        /// `lhs - rhs` per original constraint, over the original bits.
        residuals: Vec<f64>,
        satisfied: Vec<bool>,
    },
    Qap {
        assignment: Vec<Option<usize>>,
        is_permutation: bool,
        cost: f64,
    },
    Knapsack {
        chosen: Vec<usize>,
        value: f64,
        usage: f64,
    },
    Polynomial {
        value: f64,
        consistent: bool,
    },
}

/// A decoded QUBO solution: the original-variable bits, the model value
/// the assignment implies, the original-domain objective, and the
/// feasibility breakdown.
///
/// `qubo_value` is reconstructed purely from the decoder's own instance
/// data (objective plus signed penalty contributions) and always equals
/// `evaluate` of the built model at the full bit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodedSolution {
    pub bits: Vec<u8>,
    pub qubo_value: f64,
    pub original_objective: f64,
    pub feasible: bool,
    pub constraints: Vec<ConstraintStatus>,
    pub detail: SolutionDetail,
}

/// Maps bit vectors of a built QUBO back to the original problem, with
/// enough instance data to recompute objectives and per-constraint
/// penalties independently of the matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decoder {
    NumberPartitioning {
        values: Vec<i64>,
    },
    MaxCut {
        graph: Graph,
    },
    VertexCover {
        graph: Graph,
        weights: Vec<f64>,
        penalty: f64,
    },
    SetPacking {
        n: usize,
        rows: Vec<Vec<usize>>,
        weights: Vec<f64>,
        penalty: f64,
    },
    MaxTwoSat {
        instance: CnfInstance,
    },
    SetPartitioning {
        costs: Vec<f64>,
        rows: Vec<Vec<usize>>,
        penalty: f64,
    },
    GraphColoring {
        graph: Graph,
        colors: usize,
        penalty: f64,
    },
    BinaryProgram {
        costs: Vec<f64>,
        sense: Sense,
        original: Vec<LinearConstraint>,
        expanded: Vec<LinearConstraint>,
        penalty: f64,
        slack_blocks: Vec<SlackBlock>,
    },
    Qap {
        instance: QapInstance,
        penalty: f64,
    },
    Knapsack {
        values: Vec<Vec<f64>>,
        requirements: Vec<i64>,
        budget: i64,
        penalty: f64,
        expanded: LinearConstraint,
    },
    Polynomial {
        original: PseudoBooleanPolynomial,
        quadratized: PseudoBooleanPolynomial,
        substitutions: Vec<SubstitutionRecord>,
    },
}

impl Decoder {
    /// Number of original (pre-slack, pre-auxiliary) variables.
    pub fn original_n(&self) -> usize {
        match self {
            Decoder::NumberPartitioning { values } => values.len(),
            Decoder::MaxCut { graph } => graph.n_vertices(),
            Decoder::VertexCover { graph, .. } => graph.n_vertices(),
            Decoder::SetPacking { n, .. } => *n,
            Decoder::MaxTwoSat { instance } => instance.n_vars(),
            Decoder::SetPartitioning { costs, .. } => costs.len(),
            Decoder::GraphColoring { graph, colors, .. } => graph.n_vertices() * colors,
            Decoder::BinaryProgram { costs, .. } => costs.len(),
            Decoder::Qap { instance, .. } => instance.n() * instance.n(),
            Decoder::Knapsack { requirements, .. } => requirements.len(),
            Decoder::Polynomial { original, .. } => original.n(),
        }
    }

    /// Length of the full bit vector the decoder expects, including slack
    /// and auxiliary bits.
    pub fn total_n(&self) -> usize {
        match self {
            Decoder::BinaryProgram { slack_blocks, .. } => {
                self.original_n()
                    + slack_blocks.iter().map(|b| b.bits.len()).sum::<usize>()
            }
            Decoder::Knapsack {
                requirements,
                expanded,
                ..
            } => requirements.len() + (expanded.coeffs().len() - requirements.len()),
            Decoder::Polynomial { substitutions, .. } => {
                self.original_n() + substitutions.len()
            }
            _ => self.original_n(),
        }
    }

    /// Decodes a full QUBO bit vector into an original-domain report.
    pub fn decode(&self, bits: &[u8]) -> Result<DecodedSolution> {
        let expected = self.total_n();
        if bits.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: bits.len(),
            });
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBit(b));
        }
        Ok(match self {
            Decoder::NumberPartitioning { values } => decode_partition(values, bits),
            Decoder::MaxCut { graph } => decode_max_cut(graph, bits),
            Decoder::VertexCover {
                graph,
                weights,
                penalty,
            } => decode_vertex_cover(graph, weights, *penalty, bits),
            Decoder::SetPacking {
                rows,
                weights,
                penalty,
                ..
            } => decode_set_packing(rows, weights, *penalty, bits),
            Decoder::MaxTwoSat { instance } => decode_max_two_sat(instance, bits),
            Decoder::SetPartitioning {
                costs,
                rows,
                penalty,
            } => decode_set_partitioning(costs, rows, *penalty, bits),
            Decoder::GraphColoring {
                graph,
                colors,
                penalty,
            } => decode_coloring(graph, *colors, *penalty, bits),
            Decoder::BinaryProgram {
                costs,
                sense,
                original,
                expanded,
                penalty,
                ..
            } => decode_binary_program(costs, *sense, original, expanded, *penalty, bits),
            Decoder::Qap { instance, penalty } => decode_qap(instance, *penalty, bits),
            Decoder::Knapsack {
                values,
                requirements,
                budget,
                penalty,
                expanded,
            } => decode_knapsack(values, requirements, *budget, *penalty, expanded, bits),
            Decoder::Polynomial {
                original,
                quadratized,
                substitutions,
            } => decode_polynomial(original, quadratized, substitutions, bits),
        })
    }
}

fn chosen_indices(bits: &[u8]) -> Vec<usize> {
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| i)
        .collect()
}

fn feasible(constraints: &[ConstraintStatus]) -> bool {
    constraints.iter().all(|c| c.penalty == 0.0)
}

fn decode_partition(values: &[i64], bits: &[u8]) -> DecodedSolution {
    let total: i64 = values.iter().sum();
    let sum_one: i64 = values
        .iter()
        .zip(bits)
        .filter(|(_, &b)| b == 1)
        .map(|(&v, _)| v)
        .sum();
    let sum_two = total - sum_one;
    let difference = (total - 2 * sum_one).abs();
    // diff^2 = c^2 + 4 * x'Qx, so the matrix value follows from the sums
    let qubo_value = ((difference * difference - total * total) / 4) as f64;
    DecodedSolution {
        bits: bits.to_vec(),
        qubo_value,
        original_objective: difference as f64,
        feasible: true,
        constraints: Vec::new(),
        detail: SolutionDetail::NumberPartitioning {
            sum_one,
            sum_two,
            difference,
        },
    }
}

fn decode_max_cut(graph: &Graph, bits: &[u8]) -> DecodedSolution {
    let cut: Vec<(usize, usize)> = graph
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| bits[u] != bits[v])
        .collect();
    let cut_size = cut.len() as f64;
    let side_one = chosen_indices(bits);
    let side_two: Vec<usize> = (0..graph.n_vertices())
        .filter(|&v| bits[v] == 0)
        .collect();
    DecodedSolution {
        bits: bits.to_vec(),
        qubo_value: cut_size,
        original_objective: cut_size,
        feasible: true,
        constraints: Vec::new(),
        detail: SolutionDetail::MaxCut {
            side_one,
            side_two,
            cut_size,
        },
    }
}

fn decode_vertex_cover(
    graph: &Graph,
    weights: &[f64],
    penalty: f64,
    bits: &[u8],
) -> DecodedSolution {
    let cover = chosen_indices(bits);
    let weight: f64 = cover.iter().map(|&v| weights[v]).sum();
    let mut constraints = Vec::with_capacity(graph.edges().len());
    let mut uncovered = Vec::new();
    for &(u, v) in graph.edges() {
        let covered = bits[u] == 1 || bits[v] == 1;
        if !covered {
            uncovered.push((u, v));
        }
        constraints.push(ConstraintStatus {
            label: format!("edge ({u}, {v})"),
            penalty: if covered { 0.0 } else { penalty },
        });
    }
    let total_penalty: f64 = constraints.iter().map(|c| c.penalty).sum();
    DecodedSolution {
        bits: bits.to_vec(),
        qubo_value: weight + total_penalty,
        original_objective: weight,
        feasible: uncovered.is_empty(),
        constraints,
        detail: SolutionDetail::VertexCover {
            cover,
            weight,
            uncovered_edges: uncovered,
        },
    }
}

fn decode_set_packing(
    rows: &[Vec<usize>],
    weights: &[f64],
    penalty: f64,
    bits: &[u8],
) -> DecodedSolution {
    let chosen = chosen_indices(bits);
    let weight: f64 = chosen.iter().map(|&j| weights[j]).sum();
    let mut constraints = Vec::with_capacity(rows.len());
    let mut violated = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let hits = row.iter().filter(|&&j| bits[j] == 1).count();
        // one product penalty per chosen pair inside the row
        let pairs = hits * hits.saturating_sub(1) / 2;
        if hits > 1 {
            violated.push(i);
        }
        constraints.push(ConstraintStatus {
            label: format!("row {i}"),
            penalty: penalty * pairs as f64,
        });
    }
    let total_penalty: f64 = constraints.iter().map(|c| c.penalty).sum();
    DecodedSolution {
        bits: bits.to_vec(),
        qubo_value: weight - total_penalty,
        original_objective: weight,
        feasible: violated.is_empty(),
        constraints,
        detail: SolutionDetail::SetPacking {
            chosen,
            weight,
            violated_rows: violated,
        },
    }
}

fn decode_max_two_sat(instance: &CnfInstance, bits: &[u8]) -> DecodedSolution {
    let mut satisfied = Vec::new();
    let mut unsatisfied = Vec::new();
    let mut constraints = Vec::with_capacity(instance.clauses().len());
    for (i, clause) in instance.clauses().iter().enumerate() {
        let penalty = clause_penalty(clause).evaluate(bits);
        if penalty == 0.0 {
            satisfied.push(i);
        } else {
            unsatisfied.push(i);
        }
        constraints.push(ConstraintStatus {
            label: format!("clause {i}"),
            penalty,
        });
    }
    let unsat_count = unsatisfied.len() as f64;
    DecodedSolution {
        bits: bits.to_vec(),
        qubo_value: unsat_count,
        original_objective: unsat_count,
        feasible: unsatisfied.is_empty(),
        constraints,
        detail: SolutionDetail::MaxTwoSat {
            satisfied,
            unsatisfied,
        },
    }
}

fn decode_set_partitioning(
    costs: &[f64],
    rows: &[Vec<usize>],
    penalty: f64,
    bits: &[u8],
) -> DecodedSolution {
    let chosen = chosen_indices(bits);
    let cost: f64 = chosen.iter().map(|&j| costs[j]).sum();
    let mut constraints = Vec::with_capacity(rows.len());
    let mut uncovered = Vec::new();
    let mut overcovered = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let hits = row.iter().filter(|&&j| bits[j] == 1).count();
        let deviation = hits as f64 - 1.0;
        match hits {
            0 => uncovered.push(i),
            1 => {}
            _ => overcovered.push(i),
        }
        constraints.push(ConstraintStatus {
            label: format!("element {i}"),
            penalty: penalty * deviation * deviation,
        });
    }
    let total_penalty: f64 = constraints.iter().map(|c| c.penalty).sum();
    DecodedSolution {
        bits: bits.to_vec(),
        qubo_value: cost + total_penalty,
        original_objective: cost,
        feasible: uncovered.is_empty() && overcovered.is_empty(),
        constraints,
        detail: SolutionDetail::SetPartitioning {
            chosen,
            cost,
            uncovered,
            overcovered,
        },
    }
}

fn decode_coloring(graph: &Graph, k: usize, penalty: f64, bits: &[u8]) -> DecodedSolution {
    let n = graph.n_vertices();
    let mut constraints = Vec::with_capacity(n + graph.edges().len());
    let mut colors: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut uncolored = Vec::new();
    let mut multicolored = Vec::new();
    for node in 0..n {
        let assigned: Vec<usize> = (0..k).filter(|&c| bits[node * k + c] == 1).collect();
        match assigned.len() {
            0 => {
                uncolored.push(node);
                colors.push(None);
            }
            1 => colors.push(Some(assigned[0])),
            _ => {
                multicolored.push(node);
                colors.push(None);
            }
        }
        let deviation = assigned.len() as f64 - 1.0;
        constraints.push(ConstraintStatus {
            label: format!("node {node}"),
            penalty: penalty * deviation * deviation,
        });
    }
    let mut conflicts = Vec::new();
    for &(u, v) in graph.edges() {
        let shared = (0..k)
            .filter(|&c| bits[u * k + c] == 1 && bits[v * k + c] == 1)
            .count();
        if shared > 0 {
            conflicts.push((u, v));
        }
        constraints.push(ConstraintStatus {
            label: format!("edge ({u}, {v})"),
            penalty: penalty * shared as f64,
        });
    }
    let total_penalty: f64 = constraints.iter().map(|c| c.penalty).sum();
    let ok = feasible(&constraints);
    DecodedSolution {
        bits: bits.to_vec(),
        qubo_value: total_penalty,
        original_objective: 0.0,
        feasible: ok,
        constraints,
        detail: SolutionDetail::GraphColoring {
            colors,
            uncolored,
            multicolored,
            conflicts,
        },
    }
}

fn decode_binary_program(
    costs: &[f64],
    sense: Sense,
    original: &[LinearConstraint],
    expanded: &[LinearConstraint],
    penalty: f64,
    bits: &[u8],
) -> DecodedSolution {
    let original_bits = &bits[..costs.len()];
    let objective: f64 = costs
        .iter()
        .zip(original_bits)
        .map(|(&c, &b)| c * b as f64)
        .sum();
    let mut constraints = Vec::with_capacity(expanded.len());
    for (i, c) in expanded.iter().enumerate() {
        let residual = c.lhs(bits) - c.rhs();
        constraints.push(ConstraintStatus {
            label: format!("constraint {i}"),
            penalty: penalty * residual * residual,
        });
    }
    let residuals: Vec<f64> = original
        .iter()
        .map(|c| c.lhs(original_bits) - c.rhs())
        .collect();
    let satisfied: Vec<bool> = original.iter().map(|c| c.satisfied(original_bits)).collect();
    let total_penalty: f64 = constraints.iter().map(|c| c.penalty).sum();
    let sign = match sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let ok = feasible(&constraints);
    DecodedSolution {
        bits: original_bits.to_vec(),
        qubo_value: objective + sign * total_penalty,
        original_objective: objective,
        feasible: ok,
        constraints,
        detail: SolutionDetail::BinaryProgram {
            residuals,
            satisfied,
        },
    }
}

fn decode_qap(instance: &QapInstance, penalty: f64, bits: &[u8]) -> DecodedSolution {
    let n = instance.n();
    let mut cost = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    if k != l && bits[i * n + k] == 1 && bits[j * n + l] == 1 {
                        cost += instance.flow()[i][j] * instance.distance()[k][l];
                    }
                }
            }
        }
    }
    let mut constraints = Vec::with_capacity(2 * n);
    let mut assignment: Vec<Option<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let places: Vec<usize> = (0..n).filter(|&k| bits[i * n + k] == 1).collect();
        assignment.push(if places.len() == 1 {
            Some(places[0])
        } else {
            None
        });
        let deviation = places.len() as f64 - 1.0;
        constraints.push(ConstraintStatus {
            label: format!("facility {i}"),
            penalty: penalty * deviation * deviation,
        });
    }
    for k in 0..n {
        let users = (0..n).filter(|&i| bits[i * n + k] == 1).count();
        let deviation = users as f64 - 1.0;
        constraints.push(ConstraintStatus {
            label: format!("location {k}"),
            penalty: penalty * deviation * deviation,
        });
    }
    let mut seen = vec![false; n];
    let mut is_permutation = true;
    for slot in &assignment {
        match slot {
            Some(k) if !seen[*k] => seen[*k] = true,
            _ => is_permutation = false,
        }
    }
    let total_penalty: f64 = constraints.iter().map(|c| c.penalty).sum();
    let ok = feasible(&constraints);
    DecodedSolution {
        bits: bits.to_vec(),
        qubo_value: cost + total_penalty,
        original_objective: cost,
        feasible: ok,
        constraints,
        detail: SolutionDetail::Qap {
            assignment,
            is_permutation,
            cost,
        },
    }
}

fn decode_knapsack(
    values: &[Vec<f64>],
    requirements: &[i64],
    budget: i64,
    penalty: f64,
    expanded: &LinearConstraint,
    bits: &[u8],
) -> DecodedSolution {
    let n = requirements.len();
    let original_bits = &bits[..n];
    let chosen = chosen_indices(original_bits);
    let mut value = 0.0;
    for i in 0..n {
        for j in i..n {
            if original_bits[i] == 1 && original_bits[j] == 1 {
                value += values[i][j];
            }
        }
    }
    let usage: f64 = chosen.iter().map(|&j| requirements[j] as f64).sum();
    let residual = expanded.lhs(bits) - expanded.rhs();
    let constraints = vec![ConstraintStatus {
        label: format!("budget <= {budget}"),
        penalty: penalty * residual * residual,
    }];
    let ok = feasible(&constraints);
    DecodedSolution {
        bits: original_bits.to_vec(),
        qubo_value: value - constraints[0].penalty,
        original_objective: value,
        feasible: ok,
        constraints,
        detail: SolutionDetail::Knapsack {
            chosen,
            value,
            usage,
        },
    }
}

fn decode_polynomial(
    original: &PseudoBooleanPolynomial,
    quadratized: &PseudoBooleanPolynomial,
    substitutions: &[SubstitutionRecord],
    bits: &[u8],
) -> DecodedSolution {
    let original_bits = &bits[..original.n()];
    let value = original
        .evaluate(original_bits)
        .expect("length checked by caller");
    let mut constraints = Vec::with_capacity(substitutions.len());
    for s in substitutions {
        let (i, j) = s.pair;
        constraints.push(ConstraintStatus {
            label: format!("substitution y{} = x{i} x{j}", s.new_var),
            penalty: gadget_value(bits[i], bits[j], bits[s.new_var], s.penalty_weight),
        });
    }
    let qubo_value = quadratized
        .evaluate(bits)
        .expect("length checked by caller");
    let consistent = feasible(&constraints);
    DecodedSolution {
        bits: original_bits.to_vec(),
        qubo_value,
        original_objective: value,
        feasible: consistent,
        constraints,
        detail: SolutionDetail::Polynomial { value, consistent },
    }
}
