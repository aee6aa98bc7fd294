//! Cross-module invariants: storage-form neutrality, encoding round trips,
//! penalty-zero equivalence, decoder reconstruction, and exactness of the
//! penalty reformulation under the default magnitude.

use proptest::prelude::*;

use qubo_core::formulations::{
    binary_program, graph_coloring, max_two_sat, min_vertex_cover, quadratic_assignment,
    quadratic_knapsack, set_partitioning, set_partitioning_direct, CnfInstance, Decoder, Graph,
    Literal, QapInstance,
};
use qubo_core::model::{Assignment, QuboModel, Sense};
use qubo_core::penalties::{
    suggest_penalty, transformation1, ConstrainedProblem, LinearConstraint, PenalizedModel,
    Relation,
};
use qubo_core::reduction::{poly_to_qubo, quadratize, PseudoBooleanPolynomial};
use qubo_core::rng::XorShift64;
use qubo_core::solve::{exact_solve, EXACT_LIMIT};

fn all_bits(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..(1u64 << n)).map(move |i| Assignment::from_index(n, i).into_bits())
}

fn model_strategy(max_n: usize) -> impl Strategy<Value = QuboModel> {
    (1..=max_n, any::<u64>(), any::<bool>()).prop_map(|(n, seed, maximize)| {
        let mut rng = XorShift64::new(seed);
        let entries: Vec<(usize, usize, f64)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, rng.next_int_in(-9, 9)))
            .collect();
        let sense = if maximize {
            Sense::Maximize
        } else {
            Sense::Minimize
        };
        QuboModel::from_triplets(n, &entries, rng.next_int_in(-5, 5), sense).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn storage_forms_never_change_values(model in model_strategy(6)) {
        let sym = model.to_symmetric();
        let upper = model.to_upper_triangular();
        prop_assert!(sym.is_symmetric());
        prop_assert!(upper.is_upper_triangular());
        for bits in all_bits(model.n()) {
            let v = model.evaluate(&bits).unwrap();
            prop_assert_eq!(sym.evaluate(&bits).unwrap(), v);
            prop_assert_eq!(upper.evaluate(&bits).unwrap(), v);
        }
    }

    #[test]
    fn sense_normalization_flips_values(model in model_strategy(6)) {
        let normalized = model.normalize_sense();
        prop_assert_eq!(normalized.sense(), Sense::Minimize);
        for bits in all_bits(model.n()) {
            let v = model.evaluate(&bits).unwrap();
            let w = normalized.evaluate(&bits).unwrap();
            if model.sense() == Sense::Maximize {
                prop_assert_eq!(w, -v);
            } else {
                prop_assert_eq!(w, v);
            }
        }
    }

    #[test]
    fn spin_encoding_pairs_energies(model in model_strategy(6)) {
        let ising = model.to_ising();
        for bits in all_bits(model.n()) {
            let a = Assignment::new(bits.clone()).unwrap();
            let qubo_val = model.evaluate(&bits).unwrap();
            let ising_val = ising.evaluate(&a.to_spins()).unwrap();
            prop_assert!((qubo_val - ising_val).abs() < 1e-9);
        }
    }

    #[test]
    fn flip_deltas_cancel(model in model_strategy(8), j_raw in 0usize..8, seed in any::<u64>()) {
        let sym = model.to_symmetric();
        let j = j_raw % sym.n();
        let mut rng = XorShift64::new(seed);
        let mut bits: Vec<u8> = (0..sym.n()).map(|_| rng.next_bit()).collect();
        let forward = qubo_core::solve::flip_delta(&sym, &bits, j).unwrap();
        bits[j] ^= 1;
        let back = qubo_core::solve::flip_delta(&sym, &bits, j).unwrap();
        prop_assert!((forward + back).abs() < 1e-12);
    }
}

#[test]
fn ising_round_trip_is_exact_up_to_twelve_variables() {
    for (n, seed) in [(4usize, 1u64), (8, 2), (12, 3)] {
        let mut rng = XorShift64::new(seed);
        let entries: Vec<(usize, usize, f64)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, rng.next_int_in(-7, 7)))
            .collect();
        let model = QuboModel::from_triplets(n, &entries, 2.0, Sense::Minimize)
            .unwrap()
            .to_symmetric();
        let round = model.to_ising().to_qubo();
        for bits in all_bits(n) {
            let v = model.evaluate(&bits).unwrap();
            let w = round.evaluate(&bits).unwrap();
            assert!((v - w).abs() < 1e-9, "n={n} bits={bits:?}");
        }
    }
}

/// The added penalty is zero exactly on assignments satisfying the original
/// constraints (slack bits free to absorb inequality slack) and at least
/// the penalty weight otherwise.
#[test]
fn penalty_is_zero_exactly_on_feasible_assignments() {
    let mut rng = XorShift64::new(101);
    let mut checked = 0;
    while checked < 12 {
        let n = 2 + rng.next_below(4) as usize;
        let costs: Vec<f64> = (0..n).map(|_| rng.next_int_in(-3, 3)).collect();
        let m = 1 + rng.next_below(2) as usize;
        let constraints: Vec<LinearConstraint> = (0..m)
            .map(|_| {
                let coeffs: Vec<f64> = (0..n).map(|_| rng.next_int_in(0, 2)).collect();
                let rel = match rng.next_below(3) {
                    0 => Relation::Le,
                    1 => Relation::Ge,
                    _ => Relation::Eq,
                };
                let rhs = rng.next_int_in(0, 3);
                LinearConstraint::from_dense(&coeffs, rel, rhs).unwrap()
            })
            .collect();
        let problem = match ConstrainedProblem::linear(&costs, Sense::Minimize, constraints) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let (expanded, _) = match problem.expand_inequalities(&[]) {
            Ok(e) => e,
            Err(_) => continue, // constraint infeasible over the box
        };
        if expanded.n() > 14 {
            continue;
        }
        checked += 1;
        let p = 5.0;
        let pm = transformation1(&expanded, p).unwrap();
        let slack = expanded.n() - n;
        for bits in all_bits(n) {
            let objective: f64 = costs.iter().zip(&bits).map(|(&c, &b)| c * b as f64).sum();
            // minimum penalty over all slack completions
            let min_penalty = all_bits(slack)
                .map(|s| {
                    let mut full = bits.clone();
                    full.extend(&s);
                    pm.qubo.evaluate(&full).unwrap() - objective
                })
                .fold(f64::INFINITY, f64::min);
            let feasible = problem.constraints().iter().all(|c| c.satisfied(&bits));
            if feasible {
                assert_eq!(min_penalty, 0.0, "feasible point pays penalty: {bits:?}");
            } else {
                assert!(min_penalty >= p, "violation too cheap at {bits:?}: {min_penalty}");
            }
        }
    }
}

/// With the default penalty magnitude, the QUBO optimum of a random
/// integer program decodes to a feasible constrained optimum. The
/// generator always includes one positive diagonal cost and one negative
/// pair coefficient on a shared variable, which keeps the objective range
/// strictly below the penalty.
#[test]
fn suggested_penalty_preserves_constrained_optima() {
    let mut rng = XorShift64::new(2024);
    let mut checked = 0;
    while checked < 40 {
        let n = 3 + rng.next_below(6) as usize;
        let mut entries: Vec<(usize, usize, f64)> =
            (0..n).map(|j| (j, j, rng.next_int_in(-5, 5))).collect();
        entries.push((0, 0, 1.0 + rng.next_below(3) as f64));
        let pair = -(1.0 + rng.next_below(4) as f64);
        entries.push((0, 1, pair / 2.0));
        entries.push((1, 0, pair / 2.0));
        let objective = QuboModel::from_triplets(n, &entries, 0.0, Sense::Minimize).unwrap();
        let reference: Vec<u8> = (0..n).map(|_| rng.next_bit()).collect();
        let m = 1 + rng.next_below(3) as usize;
        let constraints: Vec<LinearConstraint> = (0..m)
            .map(|_| {
                let coeffs: Vec<f64> = (0..n).map(|_| rng.next_int_in(0, 3)).collect();
                let rhs: f64 = coeffs
                    .iter()
                    .zip(&reference)
                    .map(|(&a, &x)| a * x as f64)
                    .sum();
                LinearConstraint::from_dense(&coeffs, Relation::Eq, rhs).unwrap()
            })
            .collect();
        let problem = ConstrainedProblem::new(objective.clone(), constraints).unwrap();
        checked += 1;

        let p = suggest_penalty(&problem);
        let pm = transformation1(&problem, p).unwrap();
        let solution = exact_solve(&pm.qubo, EXACT_LIMIT).unwrap();

        let feasible_best = all_bits(n)
            .filter(|b| problem.constraints().iter().all(|c| c.satisfied(b)))
            .map(|b| objective.evaluate(&b).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(
            problem
                .constraints()
                .iter()
                .all(|c| c.satisfied(&solution.bits)),
            "optimum decodes infeasible"
        );
        assert_eq!(
            objective.evaluate(&solution.bits).unwrap(),
            feasible_best,
            "decoded objective misses the constrained optimum"
        );
    }
}

#[test]
fn dual_set_partitioning_constructions_agree() {
    let mut rng = XorShift64::new(404);
    for _ in 0..15 {
        let n = 2 + rng.next_below(11) as usize;
        let m = 1 + rng.next_below(6) as usize;
        let costs: Vec<f64> = (0..n).map(|_| rng.next_int_in(0, 12)).collect();
        let matrix: Vec<Vec<u8>> = (0..m)
            .map(|_| (0..n).map(|_| (rng.next_f64() < 0.4) as u8).collect())
            .collect();
        let (pm, _) = set_partitioning(&costs, &matrix, 7.0).unwrap();
        let direct = set_partitioning_direct(&costs, &matrix, 7.0).unwrap();
        assert_eq!(pm.qubo, direct);
    }
}

/// Every decoder reconstructs the model value from its own instance data
/// and reports feasibility exactly when the penalty contribution is zero.
#[test]
fn decoders_reconstruct_model_values_everywhere() {
    let cases: Vec<(PenalizedModel, Decoder)> = vec![
        {
            let graph = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
            min_vertex_cover(&graph, 6.0).unwrap()
        },
        {
            let graph = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
            graph_coloring(&graph, 2, 3.0).unwrap()
        },
        {
            let constraints = vec![
                LinearConstraint::from_dense(&[2.0, 1.0, 3.0], Relation::Le, 4.0).unwrap(),
                LinearConstraint::from_dense(&[1.0, 1.0, 1.0], Relation::Ge, 1.0).unwrap(),
            ];
            binary_program(&[3.0, -1.0, 2.0], constraints, Sense::Maximize, 9.0, &[]).unwrap()
        },
        {
            let values = vec![vec![3.0, 2.0], vec![0.0, 1.0]];
            quadratic_knapsack(&values, &[2, 3], 4, 8.0, None).unwrap()
        },
        {
            let instance = QapInstance::new(
                vec![vec![0.0, 2.0], vec![2.0, 0.0]],
                vec![vec![0.0, 3.0], vec![3.0, 0.0]],
            )
            .unwrap();
            quadratic_assignment(&instance, 20.0).unwrap()
        },
    ];
    for (pm, decoder) in &cases {
        let n = pm.qubo.n();
        assert_eq!(decoder.total_n(), n);
        for bits in all_bits(n) {
            let decoded = decoder.decode(&bits).unwrap();
            let value = pm.qubo.evaluate(&bits).unwrap();
            assert_eq!(decoded.qubo_value, value, "decoder {decoder:?} at {bits:?}");
            let total_penalty: f64 = decoded.constraints.iter().map(|c| c.penalty).sum();
            assert_eq!(decoded.feasible, total_penalty == 0.0);
        }
    }
}

#[test]
fn sat_decoder_counts_match_model_values() {
    let clauses = vec![
        [Literal::positive(0), Literal::negative(1)],
        [Literal::negative(0), Literal::positive(2)],
        [Literal::positive(1), Literal::positive(2)],
    ];
    let instance = CnfInstance::new(3, clauses).unwrap();
    let (model, decoder) = max_two_sat(&instance).unwrap();
    for bits in all_bits(3) {
        let decoded = decoder.decode(&bits).unwrap();
        assert_eq!(decoded.qubo_value, model.evaluate(&bits).unwrap());
    }
}

#[test]
fn quadratized_polynomials_decode_consistently() {
    let poly = PseudoBooleanPolynomial::from_terms(
        4,
        vec![
            (vec![0, 1, 2], 2.0),
            (vec![1, 2, 3], -3.0),
            (vec![0], 1.0),
        ],
    )
    .unwrap();
    let p = 1.0 + poly.coefficient_magnitude();
    let (quad, subs) = quadratize(&poly, p).unwrap();
    let model = poly_to_qubo(&quad).unwrap();
    let decoder = Decoder::Polynomial {
        original: poly.clone(),
        quadratized: quad,
        substitutions: subs,
    };
    for bits in all_bits(model.n()) {
        let decoded = decoder.decode(&bits).unwrap();
        assert_eq!(decoded.qubo_value, model.evaluate(&bits).unwrap());
        if decoded.feasible {
            assert_eq!(
                decoded.original_objective,
                decoded.qubo_value,
                "consistent extension must preserve the value"
            );
        }
    }
}
