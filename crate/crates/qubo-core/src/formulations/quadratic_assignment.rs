//! Quadratic assignment.

use crate::error::Result;
use crate::formulations::{require_positive_penalty, Decoder, QapInstance};
use crate::model::{QuboModel, Sense};
use crate::penalties::{transformation1, ConstrainedProblem, LinearConstraint, PenalizedModel, Relation};

/// QUBO for assigning `n` facilities to `n` locations at minimum weighted
/// flow.
///
/// Variable `facility * n + location` says the facility sits at that
/// location. The cost couples pairs of placements: for ordered facilities
/// `i != j` at locations `k != l`, the term `f_ij * d_kl * x_ik * x_jl`
/// enters the matrix split symmetrically. Pairs with `i == j` or `k == l`
/// are excluded; they cannot occur in a proper assignment. Row (facility)
/// and column (location) one-hot equalities are enforced through the
/// quadratic penalty, so the offset collects `2 n p`.
pub fn quadratic_assignment(
    instance: &QapInstance,
    p: f64,
) -> Result<(PenalizedModel, Decoder)> {
    require_positive_penalty(p)?;
    let n = instance.n();
    let nv = n * n;
    let mut objective = QuboModel::new(nv, Sense::Minimize);
    let flow = instance.flow();
    let distance = instance.distance();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    if k == l {
                        continue;
                    }
                    let coeff = flow[i][j] * distance[k][l];
                    if coeff != 0.0 {
                        objective.add_pair(i * n + k, j * n + l, coeff);
                    }
                }
            }
        }
    }
    let mut constraints = Vec::with_capacity(2 * n);
    for i in 0..n {
        constraints.push(LinearConstraint::new(
            (0..n).map(|k| (i * n + k, 1.0)).collect(),
            Relation::Eq,
            1.0,
        )?);
    }
    for k in 0..n {
        constraints.push(LinearConstraint::new(
            (0..n).map(|i| (i * n + k, 1.0)).collect(),
            Relation::Eq,
            1.0,
        )?);
    }
    let problem = ConstrainedProblem::new(objective, constraints)?;
    let pm = transformation1(&problem, p)?;
    let decoder = Decoder::Qap {
        instance: instance.clone(),
        penalty: p,
    };
    Ok((pm, decoder))
}
