//! QUBO and Ising model types: construction, evaluation, canonical storage
//! forms, and the change of variables between the two encodings.
//!
//! A [`QuboModel`] holds a square coefficient matrix `Q`, an additive
//! offset, and an optimization sense; its value at a binary assignment `x`
//! is `x' Q x + offset`. The same quadratic form can be stored
//! symmetrically or in upper-triangular form and both evaluate
//! identically. An [`IsingModel`] is the equivalent encoding over spins in
//! `{-1, +1}` with linear fields `h` and a symmetric zero-diagonal
//! coupling matrix `J`; the two are related by `x = (s + 1) / 2`.
//!
//! Models are immutable once constructed and safe to share across threads;
//! every operation here is a pure function of its inputs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Optimization direction of a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// True when `candidate` is strictly better than `incumbent`.
    pub fn improves(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Sense::Minimize => candidate < incumbent,
            Sense::Maximize => candidate > incumbent,
        }
    }

    pub fn flipped(self) -> Sense {
        match self {
            Sense::Minimize => Sense::Maximize,
            Sense::Maximize => Sense::Minimize,
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sense::Minimize => write!(f, "min"),
            Sense::Maximize => write!(f, "max"),
        }
    }
}

/// A binary assignment, one bit per variable.
///
/// Bit 0 is the most significant position for ordering purposes, so the
/// derived slice ordering is the lexicographic order used for tie-breaking
/// throughout the solvers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment(Vec<u8>);

impl Assignment {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBit(b));
        }
        Ok(Assignment(bits))
    }

    /// The `index`-th assignment of `n` bits with bit 0 most significant,
    /// so ascending indices enumerate assignments lexicographically.
    pub fn from_index(n: usize, index: u64) -> Self {
        assert!(n <= 63, "index enumeration supports at most 63 variables");
        let bits = (0..n)
            .map(|j| ((index >> (n - 1 - j)) & 1) as u8)
            .collect();
        Assignment(bits)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Spin vector under `s = 2x - 1`.
    pub fn to_spins(&self) -> Vec<i8> {
        self.0.iter().map(|&b| if b == 1 { 1 } else { -1 }).collect()
    }

    /// Inverse of [`Assignment::to_spins`].
    pub fn from_spins(spins: &[i8]) -> Result<Self> {
        spins
            .iter()
            .map(|&s| match s {
                1 => Ok(1u8),
                -1 => Ok(0u8),
                other => Err(Error::InvalidSpin(other)),
            })
            .collect::<Result<Vec<_>>>()
            .map(Assignment)
    }

    pub fn flip(&mut self, j: usize) {
        self.0[j] ^= 1;
    }
}

impl std::ops::Deref for Assignment {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::invalid(format!(
                    "bit strings may only contain 0 and 1, found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Assignment)
    }
}

/// A QUBO model: minimize or maximize `x' Q x + offset` over binary `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuboModel {
    n: usize,
    q: Vec<f64>, // row-major, n * n
    offset: f64,
    sense: Sense,
    labels: Option<Vec<String>>,
}

impl QuboModel {
    /// Zero matrix over `n` variables. An empty model (`n == 0`) is legal
    /// and evaluates to its offset.
    pub fn new(n: usize, sense: Sense) -> Self {
        QuboModel {
            n,
            q: vec![0.0; n * n],
            offset: 0.0,
            sense,
            labels: None,
        }
    }

    /// Model from dense rows. Rows must form a square matrix of finite
    /// values.
    pub fn from_rows(rows: Vec<Vec<f64>>, offset: f64, sense: Sense) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    len: row.len(),
                    n,
                });
            }
        }
        let q: Vec<f64> = rows.into_iter().flatten().collect();
        if !offset.is_finite() || q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(QuboModel {
            n,
            q,
            offset,
            sense,
            labels: None,
        })
    }

    /// Model from `(i, j, value)` triplets; duplicate positions accumulate.
    pub fn from_triplets(
        n: usize,
        entries: &[(usize, usize, f64)],
        offset: f64,
        sense: Sense,
    ) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::NonFinite);
        }
        let mut model = QuboModel::new(n, sense);
        model.offset = offset;
        for &(i, j, v) in entries {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            if j >= n {
                return Err(Error::IndexOutOfRange { index: j, n });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            model.q[i * n + j] += v;
        }
        Ok(model)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Matrix entry at `(i, j)`; panics when out of range.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "matrix index out of range");
        self.q[i * self.n + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.q[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub(crate) fn add(&mut self, i: usize, j: usize, v: f64) {
        self.q[i * self.n + j] += v;
    }

    /// Adds the pair coefficient `coeff` of `x_i x_j` (`i != j`) split
    /// evenly over the two symmetric positions.
    pub(crate) fn add_pair(&mut self, i: usize, j: usize, coeff: f64) {
        debug_assert_ne!(i, j);
        self.q[i * self.n + j] += coeff / 2.0;
        self.q[j * self.n + i] += coeff / 2.0;
    }

    pub(crate) fn add_offset(&mut self, v: f64) {
        self.offset += v;
    }

    /// Copy of the model widened to `new_n` variables; new rows and
    /// columns are zero.
    pub(crate) fn grown(&self, new_n: usize) -> QuboModel {
        debug_assert!(new_n >= self.n);
        let mut out = QuboModel::new(new_n, self.sense);
        out.offset = self.offset;
        for i in 0..self.n {
            for j in 0..self.n {
                out.q[i * new_n + j] = self.q[i * self.n + j];
            }
        }
        out
    }

    /// Value `x' Q x + offset` at a binary assignment. Works for any
    /// storage form; symmetric and upper-triangular copies of the same
    /// model evaluate identically.
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
        Ok(self.evaluate_unchecked(bits))
    }

    pub(crate) fn evaluate_unchecked(&self, bits: &[u8]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            if bits[i] == 0 {
                continue;
            }
            let row = &self.q[i * n..(i + 1) * n];
            for j in 0..n {
                if bits[j] == 1 {
                    acc += row[j];
                }
            }
        }
        acc + self.offset
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.q[i * n + j] != self.q[j * n + i] {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_upper_triangular(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..i {
                if self.q[i * n + j] != 0.0 {
                    return false;
                }
            }
        }
        true
    }

    /// Symmetric storage form: each off-diagonal pair is replaced by
    /// `(q_ij + q_ji) / 2` on both sides. Evaluation is unchanged.
    pub fn to_symmetric(&self) -> QuboModel {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let half = (self.q[i * n + j] + self.q[j * n + i]) / 2.0;
                out.q[i * n + j] = half;
                out.q[j * n + i] = half;
            }
        }
        out
    }

    /// Upper-triangular storage form: each pair coefficient is folded into
    /// `q_ij + q_ji` above the diagonal and the lower triangle is zeroed.
    /// Evaluation is unchanged.
    pub fn to_upper_triangular(&self) -> QuboModel {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..i {
                out.q[i * n + j] = 0.0;
            }
            for j in (i + 1)..n {
                out.q[i * n + j] = self.q[i * n + j] + self.q[j * n + i];
            }
        }
        out
    }

    /// Equivalent minimize-sense model: a maximize model has its matrix
    /// and offset negated, so every assignment's value flips sign and the
    /// argmax set becomes the argmin set.
    pub fn normalize_sense(&self) -> QuboModel {
        match self.sense {
            Sense::Minimize => self.clone(),
            Sense::Maximize => {
                let mut out = self.clone();
                out.sense = Sense::Minimize;
                out.offset = -out.offset;
                for v in &mut out.q {
                    *v = -*v;
                }
                out
            }
        }
    }

    /// Equivalent Ising model under the substitution `x = (s + 1) / 2`.
    ///
    /// For every bit vector `x` and the paired spin vector `s = 2x - 1`,
    /// the Ising energy equals the QUBO value exactly; the constant picked
    /// up by the substitution is absorbed into the Ising offset.
    pub fn to_ising(&self) -> IsingModel {
        let storage;
        let sym = if self.is_symmetric() {
            self
        } else {
            storage = self.to_symmetric();
            &storage
        };
        let n = sym.n;
        let mut h = vec![0.0; n];
        let mut j_mat = vec![0.0; n * n];
        let mut total = 0.0;
        let mut diag = 0.0;
        for i in 0..n {
            let mut row_sum = 0.0;
            for j in 0..n {
                let v = sym.q[i * n + j];
                row_sum += v;
                total += v;
                if i != j {
                    j_mat[i * n + j] = v / 4.0;
                }
            }
            diag += sym.q[i * n + i];
            h[i] = row_sum / 2.0;
        }
        IsingModel {
            n,
            h,
            j: j_mat,
            offset: sym.offset + total / 4.0 + diag / 4.0,
            sense: sym.sense,
        }
    }
}

/// An Ising model: minimize or maximize
/// `sum_i h_i s_i + sum_{i,j} J_ij s_i s_j + offset` over spins
/// `s in {-1, +1}^n`, with `J` symmetric and zero on the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingModel {
    n: usize,
    h: Vec<f64>,
    j: Vec<f64>, // row-major, symmetric, zero diagonal
    offset: f64,
    sense: Sense,
}

impl IsingModel {
    pub fn new(n: usize, sense: Sense) -> Self {
        IsingModel {
            n,
            h: vec![0.0; n],
            j: vec![0.0; n * n],
            offset: 0.0,
            sense,
        }
    }

    /// Model from explicit fields and couplings. `couplings` must be
    /// square with dimension matching `fields`, symmetric, zero on the
    /// diagonal, and finite everywhere.
    pub fn from_fields(
        fields: Vec<f64>,
        couplings: Vec<Vec<f64>>,
        offset: f64,
        sense: Sense,
    ) -> Result<Self> {
        let n = fields.len();
        if couplings.len() != n {
            return Err(Error::NotSquare {
                row: 0,
                len: couplings.len(),
                n,
            });
        }
        for (i, row) in couplings.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    len: row.len(),
                    n,
                });
            }
        }
        let j: Vec<f64> = couplings.into_iter().flatten().collect();
        if !offset.is_finite()
            || fields.iter().any(|v| !v.is_finite())
            || j.iter().any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite);
        }
        for i in 0..n {
            if j[i * n + i] != 0.0 {
                return Err(Error::invalid(format!(
                    "coupling diagonal must be zero, J[{i}][{i}] = {}",
                    j[i * n + i]
                )));
            }
            for k in (i + 1)..n {
                if j[i * n + k] != j[k * n + i] {
                    return Err(Error::invalid(format!(
                        "couplings must be symmetric, J[{i}][{k}] != J[{k}][{i}]"
                    )));
                }
            }
        }
        Ok(IsingModel {
            n,
            h: fields,
            j,
            offset,
            sense,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn field(&self, i: usize) -> f64 {
        assert!(i < self.n, "field index out of range");
        self.h[i]
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "coupling index out of range");
        self.j[i * self.n + j]
    }

    /// Energy at a spin vector in `{-1, +1}^n`.
    pub fn evaluate(&self, spins: &[i8]) -> Result<f64> {
        if spins.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: spins.len(),
            });
        }
        if let Some(&s) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidSpin(s));
        }
        let n = self.n;
        let mut acc = self.offset;
        for i in 0..n {
            let si = spins[i] as f64;
            acc += self.h[i] * si;
            let row = &self.j[i * n..(i + 1) * n];
            for j in 0..n {
                acc += row[j] * si * spins[j] as f64;
            }
        }
        Ok(acc)
    }

    /// Equivalent QUBO model under the substitution `s = 2x - 1`; inverse
    /// of [`QuboModel::to_ising`] up to evaluation equality.
    pub fn to_qubo(&self) -> QuboModel {
        let n = self.n;
        let mut out = QuboModel::new(n, self.sense);
        let mut off = self.offset;
        for i in 0..n {
            let jrow: f64 = self.j[i * n..(i + 1) * n].iter().sum();
            out.q[i * n + i] = 2.0 * self.h[i] - 4.0 * jrow;
            off -= self.h[i];
            for j in 0..n {
                if i != j {
                    out.q[i * n + j] = 4.0 * self.j[i * n + j];
                    off += self.j[i * n + j];
                }
            }
        }
        out.offset = off;
        out
    }
}
