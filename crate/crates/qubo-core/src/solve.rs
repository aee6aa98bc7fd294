//! Desk-scale solvers: exhaustive enumeration with incremental one-flip
//! evaluation, a deterministic tabu search, and solution verification.

use crate::error::{Error, Result};
use crate::formulations::{DecodedSolution, Decoder};
use crate::model::{Assignment, QuboModel};
use crate::penalties::PenalizedModel;
use crate::rng::XorShift64;

/// Default variable cap for [`exact_solve`]; about 16.8 million
/// assignments with constant-time flips.
pub const EXACT_LIMIT: usize = 24;

/// How a solution was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Tabu,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Exact => write!(f, "exact"),
            Method::Tabu => write!(f, "tabu"),
        }
    }
}

/// A solver result. `value` always equals `evaluate(model, bits)` for the
/// model the solution was produced from, offset included, in the model's
/// native sense.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub bits: Assignment,
    pub value: f64,
    pub method: Method,
    pub iterations: u64,
}

/// Tabu search parameters. The defaults (tenure 7, 10000 iterations, 4
/// restarts, seed 1) are ample for desk-scale instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabuParams {
    /// Iterations a flipped variable stays tabu. Clamped per model to
    /// `min(tenure, n - 1)` and at least 1.
    pub tenure: usize,
    /// Iterations per restart.
    pub max_iterations: u64,
    /// Additional independent restarts after the first run.
    pub restarts: u32,
    pub seed: u64,
}

impl Default for TabuParams {
    fn default() -> Self {
        TabuParams {
            tenure: 7,
            max_iterations: 10_000,
            restarts: 4,
            seed: 1,
        }
    }
}

/// Value change from flipping bit `j`: `evaluate(flip(x, j)) - evaluate(x)`,
/// computed in O(n) as `(1 - 2 x_j)(q_jj + 2 sum_{i != j} q_ij x_i)`.
///
/// The model must be in symmetric storage form; the solvers convert
/// internally before calling this.
pub fn flip_delta(model: &QuboModel, bits: &[u8], j: usize) -> Result<f64> {
    let n = model.n();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    if bits.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: bits.len(),
        });
    }
    let mut cross = 0.0;
    for i in 0..n {
        if i != j && bits[i] == 1 {
            cross += model.get(j, i);
        }
    }
    let direction = 1.0 - 2.0 * bits[j] as f64;
    Ok(direction * (model.get(j, j) + 2.0 * cross))
}

fn symmetric_copy(model: &QuboModel) -> QuboModel {
    if model.is_symmetric() {
        model.clone()
    } else {
        model.to_symmetric()
    }
}

/// Exhaustive solve by Gray-code enumeration: every step flips one bit, so
/// each assignment costs O(n). Returns a global optimum in the model's
/// sense; among optima, the lexicographically smallest bit vector (bit 0
/// most significant) wins, deterministically.
pub fn exact_solve(model: &QuboModel, limit: usize) -> Result<Solution> {
    let n = model.n();
    if n > limit || n >= 64 {
        return Err(Error::TooLarge {
            n,
            limit: limit.min(63),
        });
    }
    let sym = symmetric_copy(model);
    let sense = model.sense();
    let mut bits = vec![0u8; n];
    let mut value = sym.offset();
    let mut best_bits = bits.clone();
    let mut best_value = value;
    let total: u64 = 1 << n;
    for step in 1..total {
        let j = step.trailing_zeros() as usize;
        value += flip_delta(&sym, &bits, j)?;
        bits[j] ^= 1;
        if sense.improves(value, best_value)
            || (value == best_value && bits.as_slice() < best_bits.as_slice())
        {
            best_value = value;
            best_bits.copy_from_slice(&bits);
        }
    }
    let exact_value = model.evaluate(&best_bits)?;
    Ok(Solution {
        bits: Assignment::new(best_bits)?,
        value: exact_value,
        method: Method::Exact,
        iterations: total,
    })
}

/// All optimal assignments of a small model, in lexicographic order.
pub fn enumerate_optima(model: &QuboModel, limit: usize) -> Result<Vec<Assignment>> {
    let n = model.n();
    if n > limit || n >= 64 {
        return Err(Error::TooLarge {
            n,
            limit: limit.min(63),
        });
    }
    let sym = symmetric_copy(model);
    let sense = model.sense();
    let mut bits = vec![0u8; n];
    let mut value = sym.offset();
    let mut best_value = value;
    let mut optima = vec![bits.clone()];
    for step in 1..(1u64 << n) {
        let j = step.trailing_zeros() as usize;
        value += flip_delta(&sym, &bits, j)?;
        bits[j] ^= 1;
        if sense.improves(value, best_value) {
            best_value = value;
            optima.clear();
            optima.push(bits.clone());
        } else if value == best_value {
            optima.push(bits.clone());
        }
    }
    optima.sort();
    optima.into_iter().map(Assignment::new).collect()
}

/// Incremental one-flip state: keeps `field[j] = q_jj + 2 sum_{i!=j} q_ij x_i`
/// so each candidate delta costs O(1) and a flip costs O(n) to maintain.
struct FlipState {
    bits: Vec<u8>,
    fields: Vec<f64>,
    value: f64,
}

impl FlipState {
    fn new(sym: &QuboModel, bits: Vec<u8>) -> Self {
        let n = sym.n();
        let mut fields = vec![0.0; n];
        for j in 0..n {
            let mut cross = 0.0;
            for i in 0..n {
                if i != j && bits[i] == 1 {
                    cross += sym.get(j, i);
                }
            }
            fields[j] = sym.get(j, j) + 2.0 * cross;
        }
        let value = sym.evaluate_unchecked(&bits);
        FlipState {
            bits,
            fields,
            value,
        }
    }

    fn delta(&self, j: usize) -> f64 {
        (1.0 - 2.0 * self.bits[j] as f64) * self.fields[j]
    }

    fn flip(&mut self, sym: &QuboModel, j: usize) {
        self.value += self.delta(j);
        let direction = 1.0 - 2.0 * self.bits[j] as f64;
        self.bits[j] ^= 1;
        let n = self.bits.len();
        for i in 0..n {
            if i != j {
                self.fields[i] += 2.0 * direction * sym.get(i, j);
            }
        }
    }
}

/// Deterministic tabu search.
///
/// Each restart starts from a seeded random assignment (restart `r` draws
/// from stream `r` of the seed, one low bit per variable) and runs
/// `max_iterations` iterations; every iteration flips the best admissible
/// variable by one-flip delta, ties to the lowest index. A variable is
/// admissible when it is not tabu or when the move would beat the
/// incumbent (aspiration); if nothing is admissible the best move overall
/// is taken. The flipped variable becomes tabu for `tenure` iterations.
/// Restart results merge by best value, then lexicographic bits, then
/// restart order, so identical inputs always return identical solutions.
/// The returned value is exact for the returned bits and never better than
/// the true optimum in the model's sense.
pub fn tabu_solve(model: &QuboModel, params: &TabuParams) -> Result<Solution> {
    let n = model.n();
    if n == 0 {
        return Ok(Solution {
            bits: Assignment::new(vec![])?,
            value: model.offset(),
            method: Method::Tabu,
            iterations: 0,
        });
    }
    let sym = symmetric_copy(model);
    let sense = model.sense();
    let tenure = params.tenure.min(n.saturating_sub(1)).max(1) as u64;
    let mut best: Option<(f64, Vec<u8>)> = None;
    let mut iterations = 0u64;

    for restart in 0..=params.restarts {
        let mut rng = XorShift64::with_stream(params.seed, restart as u64);
        let start: Vec<u8> = (0..n).map(|_| (rng.next_u64() & 1) as u8).collect();
        let mut state = FlipState::new(&sym, start);
        let mut incumbent_value = state.value;
        let mut incumbent_bits = state.bits.clone();
        let mut tabu_until = vec![0u64; n];

        for iter in 1..=params.max_iterations {
            iterations += 1;
            let mut chosen: Option<(usize, f64)> = None;
            let mut fallback: Option<(usize, f64)> = None;
            for j in 0..n {
                let candidate = state.value + state.delta(j);
                if fallback.is_none_or(|(_, v)| sense.improves(candidate, v)) {
                    fallback = Some((j, candidate));
                }
                let admissible =
                    tabu_until[j] < iter || sense.improves(candidate, incumbent_value);
                if admissible && chosen.is_none_or(|(_, v)| sense.improves(candidate, v)) {
                    chosen = Some((j, candidate));
                }
            }
            let (j, _) = chosen.or(fallback).expect("n >= 1 guarantees a move");
            state.flip(&sym, j);
            tabu_until[j] = iter + tenure;
            if sense.improves(state.value, incumbent_value) {
                incumbent_value = state.value;
                incumbent_bits.copy_from_slice(&state.bits);
            }
        }

        let replace = match &best {
            None => true,
            Some((value, bits)) => {
                sense.improves(incumbent_value, *value)
                    || (incumbent_value == *value && incumbent_bits < *bits)
            }
        };
        if replace {
            best = Some((incumbent_value, incumbent_bits));
        }
    }

    let (_, bits) = best.expect("at least one restart runs");
    let value = model.evaluate(&bits)?;
    Ok(Solution {
        bits: Assignment::new(bits)?,
        value,
        method: Method::Tabu,
        iterations,
    })
}

/// Verification report for an assignment against a model.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    /// `x' Q x`, the matrix part alone.
    pub matrix_value: f64,
    /// `x' Q x + offset`, the full model value.
    pub value: f64,
    /// Original-domain report when a decoder is available.
    pub decoded: Option<DecodedSolution>,
}

impl VerifyReport {
    /// Feasibility verdict; `None` for a bare model with no constraints to
    /// check.
    pub fn feasible(&self) -> Option<bool> {
        self.decoded.as_ref().map(|d| d.feasible)
    }
}

/// Verifies an assignment against a bare model: reports its value.
pub fn verify_model(model: &QuboModel, bits: &[u8]) -> Result<VerifyReport> {
    let value = model.evaluate(bits)?;
    Ok(VerifyReport {
        matrix_value: value - model.offset(),
        value,
        decoded: None,
    })
}

/// Verifies an assignment against a penalty reformulation: reports the
/// model value, the decoded original objective, and each constraint's
/// penalty contribution; feasible means every contribution is zero.
pub fn verify_penalized(
    model: &PenalizedModel,
    decoder: &Decoder,
    bits: &[u8],
) -> Result<VerifyReport> {
    let value = model.qubo.evaluate(bits)?;
    let decoded = decoder.decode(bits)?;
    debug_assert_eq!(
        decoded.qubo_value, value,
        "decoder reconstruction must match the model"
    );
    Ok(VerifyReport {
        matrix_value: value - model.qubo.offset(),
        value,
        decoded: Some(decoded),
    })
}
