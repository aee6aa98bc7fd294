//! Pseudo-Boolean polynomials and their reduction to quadratic form.
//!
//! Higher-degree multilinear polynomials over binary variables are
//! quadratized by repeatedly substituting a product `x_i x_j` with a fresh
//! variable `y` and adding the consistency gadget
//! `p * (x_i x_j - 2 x_i y - 2 x_j y + 3 y)`, which is zero exactly when
//! `y == x_i x_j` and at least `p` otherwise.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{QuboModel, Sense};

/// A multilinear polynomial over binary variables: a map from sorted,
/// duplicate-free variable index sets to coefficients. The empty set holds
/// the constant term. Since `x^2 = x` for binary variables, repeated
/// indices in a term collapse during construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "PolynomialRepr", try_from = "PolynomialRepr")]
pub struct PseudoBooleanPolynomial {
    n: usize,
    terms: BTreeMap<Vec<usize>, f64>,
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    n: usize,
    terms: Vec<(Vec<usize>, f64)>,
}

impl From<PseudoBooleanPolynomial> for PolynomialRepr {
    fn from(p: PseudoBooleanPolynomial) -> Self {
        PolynomialRepr {
            n: p.n,
            terms: p.terms.into_iter().collect(),
        }
    }
}

impl TryFrom<PolynomialRepr> for PseudoBooleanPolynomial {
    type Error = Error;

    fn try_from(r: PolynomialRepr) -> Result<Self> {
        PseudoBooleanPolynomial::from_terms(r.n, r.terms)
    }
}

impl PseudoBooleanPolynomial {
    pub fn new(n: usize) -> Self {
        PseudoBooleanPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, f64)>,
    ) -> Result<Self> {
        let mut poly = PseudoBooleanPolynomial::new(n);
        for (vars, coeff) in terms {
            poly.add_term(&vars, coeff)?;
        }
        Ok(poly)
    }

    /// Adds `coeff * prod(vars)`; indices are sorted and deduplicated,
    /// coefficients at the same set accumulate, and zero totals are
    /// dropped.
    pub fn add_term(&mut self, vars: &[usize], coeff: f64) -> Result<()> {
        if !coeff.is_finite() {
            return Err(Error::NonFinite);
        }
        let mut key = vars.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(&max) = key.last() {
            if max >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: max,
                    n: self.n,
                });
            }
        }
        let entry = self.terms.entry(key.clone()).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, vars: &[usize]) -> f64 {
        let mut key = vars.to_vec();
        key.sort_unstable();
        key.dedup();
        self.terms.get(&key).copied().unwrap_or(0.0)
    }

    /// Sum of absolute coefficients, a bound on the polynomial's range.
    pub fn coefficient_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn evaluate(&self, bits: &[u8]) -> Result<f64> {
        if bits.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: bits.len(),
            });
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBit(b));
        }
        let mut acc = 0.0;
        for (vars, coeff) in &self.terms {
            if vars.iter().all(|&v| bits[v] == 1) {
                acc += coeff;
            }
        }
        Ok(acc)
    }

}

/// One product substitution made during quadratization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubstitutionRecord {
    /// Fresh variable standing for the product.
    pub new_var: usize,
    /// The pair `(i, j)`, `i < j`, the variable replaces.
    pub pair: (usize, usize),
    /// Gadget weight applied to the consistency penalty.
    pub penalty_weight: f64,
}

/// Value of the consistency gadget
/// `p * (x_i x_j - 2 x_i y - 2 x_j y + 3 y)` at one assignment of the
/// three bits: zero on the four assignments with `y == x_i * x_j`, and at
/// least `p` on the other four.
pub fn gadget_value(x_i: u8, x_j: u8, y: u8, p: f64) -> f64 {
    let (xi, xj, y) = (x_i as f64, x_j as f64, y as f64);
    p * (xi * xj - 2.0 * xi * y - 2.0 * xj * y + 3.0 * y)
}

/// Reduces a polynomial to degree at most 2 by recursive product
/// substitution.
///
/// Each round picks the variable pair occurring in the most terms of
/// degree 3 or higher (ties to the lexicographically smallest pair),
/// replaces it with a fresh variable in every such term, and adds the
/// consistency gadget weighted by `p`. On every assignment whose auxiliary
/// bits equal their products the output value matches the input value; for
/// `p` above the input's coefficient magnitude, minimizing the output over
/// all extended assignments recovers the input minimum.
pub fn quadratize(
    poly: &PseudoBooleanPolynomial,
    p: f64,
) -> Result<(PseudoBooleanPolynomial, Vec<SubstitutionRecord>)> {
    if p <= 0.0 || !p.is_finite() {
        return Err(Error::NonPositivePenalty(p));
    }
    let mut current = poly.clone();
    let mut records = Vec::new();
    while current.degree() > 2 {
        let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (vars, _) in current.terms() {
            if vars.len() < 3 {
                continue;
            }
            for (a, &i) in vars.iter().enumerate() {
                for &j in &vars[a + 1..] {
                    *counts.entry((i, j)).or_insert(0) += 1;
                }
            }
        }
        // BTreeMap iterates pairs in lexicographic order, so the first
        // maximal entry is the tie-break winner.
        let (&pair, _) = counts
            .iter()
            .max_by_key(|&(pair, &count)| (count, std::cmp::Reverse(*pair)))
            .expect("degree > 2 implies at least one pair");
        let new_var = current.n();
        let mut next = PseudoBooleanPolynomial::new(new_var + 1);
        for (vars, coeff) in current.terms() {
            if vars.len() >= 3 && vars.contains(&pair.0) && vars.contains(&pair.1) {
                let mut replaced: Vec<usize> = vars
                    .iter()
                    .copied()
                    .filter(|&v| v != pair.0 && v != pair.1)
                    .collect();
                replaced.push(new_var);
                next.add_term(&replaced, coeff)?;
            } else {
                next.add_term(vars, coeff)?;
            }
        }
        next.add_term(&[pair.0, pair.1], p)?;
        next.add_term(&[pair.0, new_var], -2.0 * p)?;
        next.add_term(&[pair.1, new_var], -2.0 * p)?;
        next.add_term(&[new_var], 3.0 * p)?;
        records.push(SubstitutionRecord {
            new_var,
            pair,
            penalty_weight: p,
        });
        current = next;
    }
    Ok((current, records))
}

/// Converts a polynomial of degree at most 2 into a QUBO model: constants
/// go to the offset, linear terms to the diagonal, and pair terms split
/// symmetrically. The model minimizes.
pub fn poly_to_qubo(poly: &PseudoBooleanPolynomial) -> Result<QuboModel> {
    let degree = poly.degree();
    if degree > 2 {
        return Err(Error::DegreeTooHigh(degree));
    }
    let mut model = QuboModel::new(poly.n(), Sense::Minimize);
    for (vars, coeff) in poly.terms() {
        match vars {
            [] => model.add_offset(coeff),
            [i] => model.add(*i, *i, coeff),
            [i, j] => model.add_pair(*i, *j, coeff),
            _ => unreachable!("degree checked above"),
        }
    }
    Ok(model)
}
