//! Quadratic knapsack.

use crate::error::{Error, Result};
use crate::formulations::{require_positive_penalty, Decoder};
use crate::model::{QuboModel, Sense};
use crate::penalties::{transformation1, ConstrainedProblem, LinearConstraint, PenalizedModel, Relation};

/// QUBO for the quadratic knapsack: maximize pairwise project values
/// subject to one integer budget constraint.
///
/// `values` is an upper-triangular matrix: `values[i][i]` is the value of
/// project `i` alone and `values[i][j]` (`i < j`) the extra value of
/// picking both. The budget inequality is expanded over slack bits
/// (optionally with a caller-supplied slack bound) and its quadratic
/// penalty is subtracted from the objective.
pub fn quadratic_knapsack(
    values: &[Vec<f64>],
    requirements: &[i64],
    budget: i64,
    p: f64,
    slack_bound: Option<u64>,
) -> Result<(PenalizedModel, Decoder)> {
    require_positive_penalty(p)?;
    let n = requirements.len();
    if values.len() != n {
        return Err(Error::NotSquare {
            row: 0,
            len: values.len(),
            n,
        });
    }
    let mut objective = QuboModel::new(n, Sense::Maximize);
    for (i, row) in values.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSquare {
                row: i,
                len: row.len(),
                n,
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            if j < i {
                if v != 0.0 {
                    return Err(Error::invalid(format!(
                        "value matrix must be upper triangular, found {v} at ({i}, {j})"
                    )));
                }
            } else if i == j {
                objective.add(i, i, v);
            } else if v != 0.0 {
                objective.add_pair(i, j, v);
            }
        }
    }
    let coeffs: Vec<(usize, f64)> = requirements
        .iter()
        .enumerate()
        .map(|(j, &a)| (j, a as f64))
        .collect();
    let constraint = LinearConstraint::new(coeffs, Relation::Le, budget as f64)?;
    let problem = ConstrainedProblem::new(objective, vec![constraint.clone()])?;
    let overrides: Vec<(usize, u64)> = slack_bound.into_iter().map(|b| (0, b)).collect();
    let (expanded, blocks) = problem.expand_inequalities(&overrides)?;
    let mut pm = transformation1(&expanded, p)?;
    pm.slack_blocks = blocks;
    pm.original_n = n;
    let decoder = Decoder::Knapsack {
        values: values.to_vec(),
        requirements: requirements.to_vec(),
        budget,
        penalty: p,
        expanded: expanded.constraints()[0].clone(),
    };
    Ok((pm, decoder))
}
