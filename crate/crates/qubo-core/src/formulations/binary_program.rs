//! General 0/1 linear programs with mixed constraint types.

use crate::error::Result;
use crate::formulations::{require_positive_penalty, Decoder};
use crate::model::Sense;
use crate::penalties::{transformation1, ConstrainedProblem, LinearConstraint, PenalizedModel};

/// QUBO for a linear 0/1 program with equality and inequality constraints.
///
/// Inequalities are first converted to equalities over appended slack bits
/// (binary expansions of the slack, bounded by the mechanical box bound or
/// a caller-supplied `(constraint index, bound)` override), then the whole
/// equality system goes through the quadratic penalty. Slack bits carry
/// zero objective coefficients. Constraint data must be integral.
pub fn binary_program(
    costs: &[f64],
    constraints: Vec<LinearConstraint>,
    sense: Sense,
    p: f64,
    slack_bounds: &[(usize, u64)],
) -> Result<(PenalizedModel, Decoder)> {
    require_positive_penalty(p)?;
    let problem = ConstrainedProblem::linear(costs, sense, constraints.clone())?;
    let (expanded, blocks) = problem.expand_inequalities(slack_bounds)?;
    let mut pm = transformation1(&expanded, p)?;
    pm.slack_blocks = blocks;
    pm.original_n = costs.len();
    let decoder = Decoder::BinaryProgram {
        costs: costs.to_vec(),
        sense,
        original: constraints,
        expanded: expanded.constraints().to_vec(),
        penalty: p,
        slack_blocks: pm.slack_blocks.clone(),
    };
    Ok((pm, decoder))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulations::SolutionDetail;
    use crate::model::Assignment;
    use crate::penalties::Relation;

    /// Five variables, one constraint of each relation, slack bounds 3 and 6.
    pub(crate) fn five_variable_instance() -> (Vec<f64>, Vec<LinearConstraint>) {
        let costs = vec![6.0, 4.0, 8.0, 5.0, 5.0];
        let constraints = vec![
            LinearConstraint::from_dense(&[2.0, 2.0, 4.0, 3.0, 2.0], Relation::Le, 7.0).unwrap(),
            LinearConstraint::from_dense(&[1.0, 2.0, 2.0, 1.0, 2.0], Relation::Eq, 4.0).unwrap(),
            LinearConstraint::from_dense(&[3.0, 3.0, 2.0, 4.0, 4.0], Relation::Ge, 5.0).unwrap(),
        ];
        (costs, constraints)
    }

    #[rustfmt::skip]
    pub(crate) fn reference_matrix() -> Vec<Vec<f64>> {
        let rows: Vec<Vec<i64>> = vec![
            vec![ 526, -150, -160, -190, -180, -20, -40,   30,   60,  120],
            vec![-150,  574, -180, -200, -200, -20, -40,   30,   60,  120],
            vec![-160, -180,  688, -220, -200, -40, -80,   20,   40,   80],
            vec![-190, -200, -220,  645, -240, -30, -60,   40,   80,  160],
            vec![-180, -200, -200, -240,  605, -20, -40,   40,   80,  160],
            vec![ -20,  -20,  -40,  -30,  -20, 130, -20,    0,    0,    0],
            vec![ -40,  -40,  -80,  -60,  -40, -20, 240,    0,    0,    0],
            vec![  30,   30,   20,   40,   40,   0,   0, -110,  -20,  -40],
            vec![  60,   60,   40,   80,   80,   0,   0,  -20, -240,  -80],
            vec![ 120,  120,   80,  160,  160,   0,   0,  -40,  -80, -560],
        ];
        rows.into_iter()
            .map(|r| r.into_iter().map(|v| v as f64).collect())
            .collect()
    }

    #[test]
    fn five_variable_instance_matches_reference_matrix() {
        let (costs, constraints) = five_variable_instance();
        let (pm, _) =
            binary_program(&costs, constraints, Sense::Maximize, 10.0, &[(0, 3), (2, 6)])
                .unwrap();
        assert_eq!(pm.qubo.n(), 10);
        assert_eq!(pm.qubo.to_rows(), reference_matrix());
        assert_eq!(pm.qubo.offset(), -900.0);
        assert_eq!(pm.slack_blocks.len(), 2);
        assert_eq!(pm.slack_blocks[0].bits, vec![(5, 1), (6, 2)]);
        assert_eq!(pm.slack_blocks[1].bits, vec![(7, 1), (8, 2), (9, 4)]);
    }

    #[test]
    fn five_variable_instance_reaches_sixteen() {
        let (costs, constraints) = five_variable_instance();
        let (pm, decoder) =
            binary_program(&costs, constraints, Sense::Maximize, 10.0, &[(0, 3), (2, 6)])
                .unwrap();
        let bits = [1u8, 0, 0, 1, 1, 0, 0, 0, 1, 1];
        // matrix part 916; adjusted by the constant -900 the value is 16
        assert_eq!(pm.qubo.evaluate(&bits).unwrap() - pm.qubo.offset(), 916.0);
        assert_eq!(pm.qubo.evaluate(&bits).unwrap(), 16.0);
        let best = (0..(1u64 << 10))
            .map(|i| pm.qubo.evaluate(&Assignment::from_index(10, i)).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(best, 16.0);
        let decoded = decoder.decode(&bits).unwrap();
        assert!(decoded.feasible);
        assert_eq!(decoded.original_objective, 16.0);
        assert_eq!(decoded.bits, vec![1, 0, 0, 1, 1]);
        match decoded.detail {
            SolutionDetail::BinaryProgram {
                ref residuals,
                ref satisfied,
            } => {
                assert_eq!(residuals, &[0.0, 0.0, 6.0]);
                assert_eq!(satisfied, &[true, true, true]);
            }
            ref other => panic!("unexpected detail {other:?}"),
        }
    }

    #[test]
    fn unconstrained_input_is_the_bare_objective() {
        let (pm, _) =
            binary_program(&[3.0, -2.0], vec![], Sense::Minimize, 5.0, &[]).unwrap();
        assert_eq!(pm.qubo.to_rows(), vec![vec![3.0, 0.0], vec![0.0, -2.0]]);
        assert_eq!(pm.qubo.offset(), 0.0);
    }

    #[test]
    fn random_programs_match_constrained_enumeration() {
        // Oracle: brute-force the original constrained program.
        let mut rng = crate::rng::XorShift64::new(61);
        let mut checked = 0;
        while checked < 8 {
            let n = 2 + rng.next_below(5) as usize;
            let costs: Vec<f64> = (0..n).map(|_| rng.next_int_in(-5, 5)).collect();
            let m = 1 + rng.next_below(2) as usize;
            let constraints: Vec<LinearConstraint> = (0..m)
                .map(|_| {
                    let coeffs: Vec<f64> = (0..n).map(|_| rng.next_int_in(0, 3)).collect();
                    let rel = match rng.next_below(3) {
                        0 => Relation::Le,
                        1 => Relation::Ge,
                        _ => Relation::Eq,
                    };
                    let b = rng.next_int_in(0, 5);
                    LinearConstraint::from_dense(&coeffs, rel, b).unwrap()
                })
                .collect();
            let feasible_best = (0..(1u64 << n))
                .filter_map(|i| {
                    let bits = Assignment::from_index(n, i).into_bits();
                    constraints
                        .iter()
                        .all(|c| c.satisfied(&bits))
                        .then(|| {
                            costs
                                .iter()
                                .zip(&bits)
                                .map(|(&c, &b)| c * b as f64)
                                .sum::<f64>()
                        })
                })
                .fold(f64::INFINITY, f64::min);
            if feasible_best.is_infinite() {
                continue;
            }
            checked += 1;
            let p = 1.0 + costs.iter().map(|c| c.abs()).sum::<f64>();
            let (pm, decoder) =
                binary_program(&costs, constraints, Sense::Minimize, p, &[]).unwrap();
            let nv = pm.qubo.n();
            let mut best_val = f64::INFINITY;
            let mut best_bits = Vec::new();
            for i in 0..(1u64 << nv) {
                let a = Assignment::from_index(nv, i);
                let v = pm.qubo.evaluate(&a).unwrap();
                if v < best_val {
                    best_val = v;
                    best_bits = a.into_bits();
                }
            }
            let decoded = decoder.decode(&best_bits).unwrap();
            assert!(decoded.feasible, "instance {checked}");
            assert_eq!(decoded.original_objective, feasible_best);
            assert_eq!(best_val, feasible_best);
        }
    }

    #[test]
    fn slack_errors_propagate() {
        let c = LinearConstraint::from_dense(&[0.5], Relation::Le, 1.0).unwrap();
        assert!(binary_program(&[1.0], vec![c], Sense::Minimize, 2.0, &[]).is_err());
    }
}
