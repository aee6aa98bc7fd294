//! Maximum-weight set packing.

use crate::error::{Error, Result};
use crate::formulations::{require_positive_penalty, row_supports, Decoder};
use crate::model::{QuboModel, Sense};
use crate::penalties::PenalizedModel;

/// QUBO for set packing: maximize the weight of chosen variables subject
/// to at most one chosen variable per matrix row.
///
/// For every pair of variables sharing a row, the product penalty
/// `p * x_i x_j` is subtracted from the objective. Rows contribute their
/// pairs independently; a pair appearing in several rows accumulates one
/// penalty per row.
pub fn set_packing(
    matrix: &[Vec<u8>],
    weights: &[f64],
    p: f64,
) -> Result<(PenalizedModel, Decoder)> {
    require_positive_penalty(p)?;
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = weights.len();
    let rows = row_supports(matrix, n)?;
    let mut model = QuboModel::new(n, Sense::Maximize);
    for (j, &w) in weights.iter().enumerate() {
        model.add(j, j, w);
    }
    for support in &rows {
        for (k, &i) in support.iter().enumerate() {
            for &j in &support[k + 1..] {
                model.add_pair(i, j, -p);
            }
        }
    }
    let decoder = Decoder::SetPacking {
        n,
        rows,
        weights: weights.to_vec(),
        penalty: p,
    };
    Ok((
        PenalizedModel {
            qubo: model,
            penalty: p,
            slack_blocks: Vec::new(),
            original_n: n,
        },
        decoder,
    ))
}
