//! Minimum-cost set partitioning (exact cover).

use crate::error::{Error, Result};
use crate::formulations::{require_positive_penalty, row_supports, Decoder};
use crate::model::{QuboModel, Sense};
use crate::penalties::{transformation1, ConstrainedProblem, LinearConstraint, PenalizedModel, Relation};

/// QUBO for set partitioning: minimize the cost of chosen columns subject
/// to every row being covered exactly once.
///
/// The model is built through the quadratic penalty on the equality system
/// and cross-checked against the closed-form construction of
/// [`set_partitioning_direct`]; the two agree entry for entry.
pub fn set_partitioning(
    costs: &[f64],
    matrix: &[Vec<u8>],
    p: f64,
) -> Result<(PenalizedModel, Decoder)> {
    require_positive_penalty(p)?;
    let n = costs.len();
    let rows = row_supports(matrix, n)?;
    let constraints: Vec<LinearConstraint> = rows
        .iter()
        .map(|support| {
            LinearConstraint::new(
                support.iter().map(|&j| (j, 1.0)).collect(),
                Relation::Eq,
                1.0,
            )
        })
        .collect::<Result<_>>()?;
    let problem = ConstrainedProblem::linear(costs, Sense::Minimize, constraints)?;
    let pm = transformation1(&problem, p)?;
    debug_assert_eq!(
        pm.qubo,
        set_partitioning_direct(costs, matrix, p)?,
        "penalty expansion and direct construction must agree"
    );
    let decoder = Decoder::SetPartitioning {
        costs: costs.to_vec(),
        rows,
        penalty: p,
    };
    Ok((pm, decoder))
}

/// Closed-form set-partitioning matrix: with `k_i` the number of rows
/// containing column `i` and `r_ij` the number of rows containing both `i`
/// and `j`, the diagonal is `c_i - p * k_i`, the off-diagonal entries are
/// `p * r_ij`, and the constant is `m * p` for `m` rows.
pub fn set_partitioning_direct(costs: &[f64], matrix: &[Vec<u8>], p: f64) -> Result<QuboModel> {
    require_positive_penalty(p)?;
    if costs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = costs.len();
    let rows = row_supports(matrix, n)?;
    let mut model = QuboModel::new(n, Sense::Minimize);
    for (i, &c) in costs.iter().enumerate() {
        let k = rows.iter().filter(|r| r.contains(&i)).count();
        model.add(i, i, c - p * k as f64);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let r = rows
                .iter()
                .filter(|row| row.contains(&i) && row.contains(&j))
                .count();
            if r > 0 {
                model.add(i, j, p * r as f64);
                model.add(j, i, p * r as f64);
            }
        }
    }
    model.add_offset(p * rows.len() as f64);
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulations::SolutionDetail;
    use crate::model::Assignment;

    pub(crate) fn six_column_instance() -> (Vec<f64>, Vec<Vec<u8>>) {
        (
            vec![3.0, 2.0, 1.0, 1.0, 3.0, 2.0],
            vec![
                vec![1, 0, 1, 0, 0, 1],
                vec![0, 1, 1, 0, 1, 1],
                vec![0, 0, 1, 1, 1, 0],
                vec![1, 1, 0, 1, 0, 1],
            ],
        )
    }

    #[test]
    fn six_column_instance_matches_reference_matrix() {
        let (costs, matrix) = six_column_instance();
        let (pm, _) = set_partitioning(&costs, &matrix, 10.0).unwrap();
        let expected = vec![
            vec![-17.0, 10.0, 10.0, 10.0, 0.0, 20.0],
            vec![10.0, -18.0, 10.0, 10.0, 10.0, 20.0],
            vec![10.0, 10.0, -29.0, 10.0, 20.0, 20.0],
            vec![10.0, 10.0, 10.0, -19.0, 10.0, 10.0],
            vec![0.0, 10.0, 20.0, 10.0, -17.0, 10.0],
            vec![20.0, 20.0, 20.0, 10.0, 10.0, -28.0],
        ];
        assert_eq!(pm.qubo.to_rows(), expected);
        assert_eq!(pm.qubo.offset(), 40.0);
    }

    #[test]
    fn six_column_instance_picks_columns_one_and_five() {
        let (costs, matrix) = six_column_instance();
        let (pm, decoder) = set_partitioning(&costs, &matrix, 10.0).unwrap();
        let best_bits = [1u8, 0, 0, 0, 1, 0];
        // matrix part -34, plus the constant 40, gives the cost 6
        assert_eq!(
            pm.qubo.evaluate(&best_bits).unwrap() - pm.qubo.offset(),
            -34.0
        );
        assert_eq!(pm.qubo.evaluate(&best_bits).unwrap(), 6.0);
        let best = (0..64u64)
            .map(|i| pm.qubo.evaluate(&Assignment::from_index(6, i)).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best, 6.0);
        let decoded = decoder.decode(&best_bits).unwrap();
        assert!(decoded.feasible);
        assert_eq!(decoded.original_objective, 6.0);
        match decoded.detail {
            SolutionDetail::SetPartitioning { ref chosen, cost, .. } => {
                assert_eq!(chosen, &[0, 4]);
                assert_eq!(cost, 6.0);
            }
            ref other => panic!("unexpected detail {other:?}"),
        }
    }

    #[test]
    fn single_column_instance_is_forced() {
        let (pm, decoder) = set_partitioning(&[5.0], &[vec![1]], 10.0).unwrap();
        assert_eq!(pm.qubo.evaluate(&[1]).unwrap(), 5.0);
        assert_eq!(pm.qubo.evaluate(&[0]).unwrap(), 10.0);
        let decoded = decoder.decode(&[1]).unwrap();
        assert!(decoded.feasible);
        assert_eq!(decoded.original_objective, 5.0);
    }

    #[test]
    fn direct_construction_matches_penalty_expansion() {
        let mut rng = crate::rng::XorShift64::new(41);
        for _ in 0..12 {
            let n = 2 + rng.next_below(8) as usize;
            let m = 1 + rng.next_below(5) as usize;
            let costs: Vec<f64> = (0..n).map(|_| rng.next_int_in(0, 9)).collect();
            let matrix: Vec<Vec<u8>> = (0..m)
                .map(|_| (0..n).map(|_| (rng.next_f64() < 0.5) as u8).collect())
                .collect();
            let (pm, _) = set_partitioning(&costs, &matrix, 10.0).unwrap();
            let direct = set_partitioning_direct(&costs, &matrix, 10.0).unwrap();
            assert_eq!(pm.qubo, direct);
        }
    }

    #[test]
    fn random_instances_match_exact_cover_enumeration() {
        // Oracle: enumerate subsets and keep exact covers.
        let mut rng = crate::rng::XorShift64::new(43);
        let mut checked = 0;
        while checked < 6 {
            let n = 3 + rng.next_below(5) as usize;
            let m = 1 + rng.next_below(4) as usize;
            let costs: Vec<f64> = (0..n).map(|_| 1.0 + rng.next_below(6) as f64).collect();
            let matrix: Vec<Vec<u8>> = (0..m)
                .map(|_| (0..n).map(|_| (rng.next_f64() < 0.5) as u8).collect())
                .collect();
            let mut best_cost = f64::INFINITY;
            for mask in 0..(1u64 << n) {
                let exact = matrix.iter().all(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(j, &a)| a == 1 && (mask >> j) & 1 == 1)
                        .count()
                        == 1
                });
                if exact {
                    let cost: f64 = (0..n)
                        .filter(|&j| (mask >> j) & 1 == 1)
                        .map(|j| costs[j])
                        .sum();
                    best_cost = best_cost.min(cost);
                }
            }
            if best_cost.is_infinite() {
                continue; // no exact cover exists; draw another instance
            }
            checked += 1;
            let p = 1.0 + costs.iter().sum::<f64>();
            let (pm, decoder) = set_partitioning(&costs, &matrix, p).unwrap();
            let mut best_val = f64::INFINITY;
            let mut best_bits = Vec::new();
            for i in 0..(1u64 << n) {
                let a = Assignment::from_index(n, i);
                let v = pm.qubo.evaluate(&a).unwrap();
                if v < best_val {
                    best_val = v;
                    best_bits = a.into_bits();
                }
            }
            let decoded = decoder.decode(&best_bits).unwrap();
            assert!(decoded.feasible);
            assert_eq!(decoded.original_objective, best_cost);
        }
    }
}
