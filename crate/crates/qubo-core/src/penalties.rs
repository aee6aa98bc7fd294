//! Constrained binary programs and their penalty reformulation into QUBO:
//! the table of known constraint/penalty pairs, the quadratic penalty on
//! systems of linear equalities, the pairwise product penalty, slack
//! variable expansion for integer inequalities, and a conservative default
//! penalty magnitude.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{QuboModel, Sense};

/// Relation of a linear constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Relation::Eq => write!(f, "="),
            Relation::Le => write!(f, "<="),
            Relation::Ge => write!(f, ">="),
        }
    }
}

/// A sparse linear constraint `sum_j a_j x_j (rel) b` over binary variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    coeffs: Vec<(usize, f64)>,
    relation: Relation,
    rhs: f64,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Result<Self> {
        if !rhs.is_finite() || coeffs.iter().any(|(_, a)| !a.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut seen: Vec<usize> = coeffs.iter().map(|&(i, _)| i).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVariable);
        }
        Ok(LinearConstraint {
            coeffs,
            relation,
            rhs,
        })
    }

    /// Dense-coefficient convenience constructor; zero entries are dropped.
    pub fn from_dense(coeffs: &[f64], relation: Relation, rhs: f64) -> Result<Self> {
        let sparse = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0.0)
            .map(|(i, &a)| (i, a))
            .collect();
        LinearConstraint::new(sparse, relation, rhs)
    }

    pub fn coeffs(&self) -> &[(usize, f64)] {
        &self.coeffs
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn rhs(&self) -> f64 {
        self.rhs
    }

    pub fn max_index(&self) -> Option<usize> {
        self.coeffs.iter().map(|&(i, _)| i).max()
    }

    /// Left-hand side value at an assignment.
    pub fn lhs(&self, bits: &[u8]) -> f64 {
        self.coeffs
            .iter()
            .map(|&(i, a)| a * bits[i] as f64)
            .sum()
    }

    /// Whether the relation holds at an assignment.
    pub fn satisfied(&self, bits: &[u8]) -> bool {
        let lhs = self.lhs(bits);
        match self.relation {
            Relation::Eq => lhs == self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }

    fn require_integer(&self) -> Result<()> {
        for &(_, a) in &self.coeffs {
            if a.fract() != 0.0 {
                return Err(Error::NonIntegerData(a));
            }
        }
        if self.rhs.fract() != 0.0 {
            return Err(Error::NonIntegerData(self.rhs));
        }
        Ok(())
    }
}

/// A linear-or-quadratic objective over binary variables together with
/// linear constraints; the input to the penalty transformations.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstrainedProblem {
    objective: QuboModel,
    constraints: Vec<LinearConstraint>,
}

impl ConstrainedProblem {
    pub fn new(objective: QuboModel, constraints: Vec<LinearConstraint>) -> Result<Self> {
        let n = objective.n();
        for c in &constraints {
            if let Some(max) = c.max_index() {
                if max >= n {
                    return Err(Error::IndexOutOfRange { index: max, n });
                }
            }
        }
        Ok(ConstrainedProblem {
            objective,
            constraints,
        })
    }

    /// Problem with a purely linear objective; costs land on the diagonal
    /// since `x_j^2 = x_j` for binary variables.
    pub fn linear(
        costs: &[f64],
        sense: Sense,
        constraints: Vec<LinearConstraint>,
    ) -> Result<Self> {
        let n = costs.len();
        let entries: Vec<(usize, usize, f64)> = costs
            .iter()
            .enumerate()
            .map(|(j, &c)| (j, j, c))
            .collect();
        let objective = QuboModel::from_triplets(n, &entries, 0.0, sense)?;
        ConstrainedProblem::new(objective, constraints)
    }

    pub fn n(&self) -> usize {
        self.objective.n()
    }

    pub fn sense(&self) -> Sense {
        self.objective.sense()
    }

    pub fn objective(&self) -> &QuboModel {
        &self.objective
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    /// Equivalent problem with every inequality replaced by an equality
    /// over freshly appended slack bits. `bound_overrides` supplies
    /// per-constraint slack upper bounds `(constraint index, bound)` in
    /// place of the mechanical box bound.
    pub fn expand_inequalities(
        &self,
        bound_overrides: &[(usize, u64)],
    ) -> Result<(ConstrainedProblem, Vec<SlackBlock>)> {
        let mut next = self.n();
        let mut constraints = Vec::with_capacity(self.constraints.len());
        let mut blocks = Vec::new();
        for (idx, c) in self.constraints.iter().enumerate() {
            if c.relation == Relation::Eq {
                constraints.push(c.clone());
                continue;
            }
            let bound = bound_overrides
                .iter()
                .find(|&&(i, _)| i == idx)
                .map(|&(_, b)| b);
            let expansion = expand_slack_bounded(c, next, bound)?;
            next += expansion.bits.len();
            blocks.push(SlackBlock {
                constraint: idx,
                bits: expansion.bits,
            });
            constraints.push(expansion.equality);
        }
        let objective = self.objective.grown(next);
        Ok((
            ConstrainedProblem {
                objective,
                constraints,
            },
            blocks,
        ))
    }
}

/// Slack bits introduced for one inequality: `(bit index, weight 2^k)`
/// pairs, weights in ascending power order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlackBlock {
    pub constraint: usize,
    pub bits: Vec<(usize, u64)>,
}

/// A QUBO produced by a penalty transformation, together with what is
/// needed to map solutions back: the penalty magnitude, the slack layout,
/// and the original variable count.
#[derive(Clone, Debug, PartialEq)]
pub struct PenalizedModel {
    pub qubo: QuboModel,
    pub penalty: f64,
    pub slack_blocks: Vec<SlackBlock>,
    pub original_n: usize,
}

/// The six known constraint/penalty pairs for small constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnownConstraint {
    /// `x + y <= 1`
    AtMostOneOfTwo,
    /// `x + y >= 1`
    AtLeastOneOfTwo,
    /// `x + y = 1`
    ExactlyOneOfTwo,
    /// `x <= y`
    Implies,
    /// `x1 + x2 + x3 <= 1`
    AtMostOneOfThree,
    /// `x = y`
    Equal,
}

impl KnownConstraint {
    pub fn arity(self) -> usize {
        match self {
            KnownConstraint::AtMostOneOfThree => 3,
            _ => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            KnownConstraint::AtMostOneOfTwo => "x + y <= 1",
            KnownConstraint::AtLeastOneOfTwo => "x + y >= 1",
            KnownConstraint::ExactlyOneOfTwo => "x + y = 1",
            KnownConstraint::Implies => "x <= y",
            KnownConstraint::AtMostOneOfThree => "x1 + x2 + x3 <= 1",
            KnownConstraint::Equal => "x = y",
        }
    }

    /// Whether the classical constraint holds at the given bits (arity
    /// must match).
    pub fn holds(self, bits: &[u8]) -> bool {
        match self {
            KnownConstraint::AtMostOneOfTwo => bits[0] + bits[1] <= 1,
            KnownConstraint::AtLeastOneOfTwo => bits[0] + bits[1] >= 1,
            KnownConstraint::ExactlyOneOfTwo => bits[0] + bits[1] == 1,
            KnownConstraint::Implies => bits[0] <= bits[1],
            KnownConstraint::AtMostOneOfThree => bits[0] + bits[1] + bits[2] <= 1,
            KnownConstraint::Equal => bits[0] == bits[1],
        }
    }
}

/// Penalty expressed as explicit terms: a constant (kept separate so it
/// can be accumulated into a model offset), linear terms, and quadratic
/// pair coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PenaltyTerms {
    pub constant: f64,
    pub linear: Vec<(usize, f64)>,
    pub quadratic: Vec<(usize, usize, f64)>,
}

impl PenaltyTerms {
    pub fn evaluate(&self, bits: &[u8]) -> f64 {
        let mut acc = self.constant;
        for &(i, a) in &self.linear {
            acc += a * bits[i] as f64;
        }
        for &(i, j, a) in &self.quadratic {
            acc += a * bits[i] as f64 * bits[j] as f64;
        }
        acc
    }

    /// Adds the terms (scaled by `sign`) onto a model: linear terms fold
    /// onto the diagonal, pair coefficients split symmetrically, and the
    /// constant lands in the offset.
    pub fn apply_to(&self, model: &mut QuboModel, sign: f64) {
        model.add_offset(sign * self.constant);
        for &(i, a) in &self.linear {
            model.add(i, i, sign * a);
        }
        for &(i, j, a) in &self.quadratic {
            model.add_pair(i, j, sign * a);
        }
    }
}

/// Quadratic penalty for one of the six known constraint rows, scaled by
/// `p`: zero exactly when the classical constraint holds and at least `p`
/// otherwise.
pub fn known_penalty(kind: KnownConstraint, vars: &[usize], p: f64) -> Result<PenaltyTerms> {
    if p <= 0.0 || !p.is_finite() {
        return Err(Error::NonPositivePenalty(p));
    }
    if vars.len() != kind.arity() {
        return Err(Error::WrongArity {
            kind: kind.name(),
            expected: kind.arity(),
            actual: vars.len(),
        });
    }
    let mut sorted = vars.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicateVariable);
    }
    let (x, y) = (vars[0], vars[1]);
    let terms = match kind {
        KnownConstraint::AtMostOneOfTwo => PenaltyTerms {
            constant: 0.0,
            linear: vec![],
            quadratic: vec![(x, y, p)],
        },
        KnownConstraint::AtLeastOneOfTwo => PenaltyTerms {
            constant: p,
            linear: vec![(x, -p), (y, -p)],
            quadratic: vec![(x, y, p)],
        },
        KnownConstraint::ExactlyOneOfTwo => PenaltyTerms {
            constant: p,
            linear: vec![(x, -p), (y, -p)],
            quadratic: vec![(x, y, 2.0 * p)],
        },
        KnownConstraint::Implies => PenaltyTerms {
            constant: 0.0,
            linear: vec![(x, p)],
            quadratic: vec![(x, y, -p)],
        },
        KnownConstraint::AtMostOneOfThree => {
            let z = vars[2];
            PenaltyTerms {
                constant: 0.0,
                linear: vec![],
                quadratic: vec![(x, y, p), (x, z, p), (y, z, p)],
            }
        }
        KnownConstraint::Equal => PenaltyTerms {
            constant: 0.0,
            linear: vec![(x, p), (y, p)],
            quadratic: vec![(x, y, -2.0 * p)],
        },
    };
    Ok(terms)
}

/// The pairwise product penalty `p * x_i * x_j` enforcing `x_i + x_j <= 1`.
pub fn pair_penalty(i: usize, j: usize, p: f64) -> Result<PenaltyTerms> {
    if p <= 0.0 || !p.is_finite() {
        return Err(Error::NonPositivePenalty(p));
    }
    if i == j {
        return Err(Error::DuplicateVariable);
    }
    Ok(PenaltyTerms {
        constant: 0.0,
        linear: vec![],
        quadratic: vec![(i, j, p)],
    })
}

/// Converts a problem whose constraints are all equalities `a_i . x = b_i`
/// into a QUBO by adding the quadratic penalty `p * sum_i (a_i . x - b_i)^2`
/// to the objective (subtracting it for maximize problems). Constants
/// `p * b_i^2` accumulate in the offset; linear penalty terms fold onto the
/// diagonal via `x_j^2 = x_j`.
pub fn transformation1(problem: &ConstrainedProblem, p: f64) -> Result<PenalizedModel> {
    let weights = vec![p; problem.constraints().len()];
    transformation1_weighted(problem, &weights)
}

/// [`transformation1`] with one penalty weight per constraint.
pub fn transformation1_weighted(
    problem: &ConstrainedProblem,
    weights: &[f64],
) -> Result<PenalizedModel> {
    if weights.len() != problem.constraints().len() {
        return Err(Error::LengthMismatch {
            expected: problem.constraints().len(),
            actual: weights.len(),
        });
    }
    for &w in weights {
        if w <= 0.0 || !w.is_finite() {
            return Err(Error::NonPositivePenalty(w));
        }
    }
    for (idx, c) in problem.constraints().iter().enumerate() {
        if c.relation() != Relation::Eq {
            return Err(Error::InequalityConstraint(idx));
        }
    }

    let mut qubo = problem.objective().to_symmetric();
    let sign = match problem.sense() {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    for (c, &w) in problem.constraints().iter().zip(weights) {
        let b = c.rhs();
        for &(j, a) in c.coeffs() {
            // a^2 x_j^2 - 2 b a x_j, folded onto the diagonal.
            qubo.add(j, j, sign * w * (a * a - 2.0 * b * a));
        }
        let coeffs = c.coeffs();
        for (k, &(i, ai)) in coeffs.iter().enumerate() {
            for &(j, aj) in &coeffs[k + 1..] {
                qubo.add_pair(i, j, sign * w * 2.0 * ai * aj);
            }
        }
        qubo.add_offset(sign * w * b * b);
    }

    let penalty = weights.iter().cloned().fold(0.0, f64::max);
    Ok(PenalizedModel {
        qubo,
        penalty,
        slack_blocks: Vec::new(),
        original_n: problem.n(),
    })
}

/// Result of turning an inequality into an equality over slack bits.
#[derive(Clone, Debug, PartialEq)]
pub struct SlackExpansion {
    pub equality: LinearConstraint,
    /// `(bit index, weight 2^k)` pairs for the new slack bits.
    pub bits: Vec<(usize, u64)>,
}

/// Expands an integer inequality into an equality by a binary expansion of
/// its slack. New bits are indexed from `n_current`. The slack upper bound
/// is the mechanical box bound: `b - min_x(a.x)` for `<=`, and
/// `max_x(a.x) - b` for `>=`. A bound of zero yields no slack bits; a
/// negative bound means no binary assignment can satisfy the constraint.
pub fn expand_slack(constraint: &LinearConstraint, n_current: usize) -> Result<SlackExpansion> {
    expand_slack_bounded(constraint, n_current, None)
}

/// [`expand_slack`] with an optional caller-supplied slack upper bound in
/// place of the mechanical one. An undersized bound tightens the
/// constraint; an oversized one only adds bits.
pub fn expand_slack_bounded(
    constraint: &LinearConstraint,
    n_current: usize,
    bound_override: Option<u64>,
) -> Result<SlackExpansion> {
    constraint.require_integer()?;
    let (sign, mechanical) = match constraint.relation() {
        Relation::Eq => {
            return Err(Error::invalid(
                "equality constraints need no slack expansion".to_string(),
            ))
        }
        Relation::Le => {
            // Smallest achievable lhs is the sum of negative coefficients.
            let min_lhs: f64 = constraint
                .coeffs()
                .iter()
                .map(|&(_, a)| a.min(0.0))
                .sum();
            (1.0, constraint.rhs() - min_lhs)
        }
        Relation::Ge => {
            let max_lhs: f64 = constraint
                .coeffs()
                .iter()
                .map(|&(_, a)| a.max(0.0))
                .sum();
            (-1.0, max_lhs - constraint.rhs())
        }
    };
    if mechanical < 0.0 {
        return Err(Error::InfeasibleConstraint);
    }
    let bound = bound_override.unwrap_or(mechanical as u64);
    let bit_count = 64 - bound.leading_zeros() as usize; // ceil(log2(bound + 1))
    let mut coeffs = constraint.coeffs().to_vec();
    let mut bits = Vec::with_capacity(bit_count);
    for k in 0..bit_count {
        let weight = 1u64 << k;
        coeffs.push((n_current + k, sign * weight as f64));
        bits.push((n_current + k, weight));
    }
    Ok(SlackExpansion {
        equality: LinearConstraint::new(coeffs, Relation::Eq, constraint.rhs())?,
        bits,
    })
}

/// Default penalty magnitude: the sum of absolute objective coefficients
/// (diagonal entries plus pair coefficients), floored at 1. This bounds the
/// objective's range over all binary assignments, so for integer data any
/// constraint violation costs at least as much as the objective can
/// recover.
pub fn suggest_penalty(problem: &ConstrainedProblem) -> f64 {
    suggest_penalty_for_objective(problem.objective())
}

/// [`suggest_penalty`] applied directly to an objective matrix.
pub fn suggest_penalty_for_objective(objective: &QuboModel) -> f64 {
    let sym = objective.to_symmetric();
    let n = sym.n();
    let mut total = 0.0;
    for i in 0..n {
        total += sym.get(i, i).abs();
        for j in (i + 1)..n {
            total += (2.0 * sym.get(i, j)).abs();
        }
    }
    total.max(1.0)
}
