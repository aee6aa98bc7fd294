//! Two-way number partitioning.

use crate::error::{Error, Result};
use crate::formulations::Decoder;
use crate::model::{QuboModel, Sense};

/// QUBO for splitting positive integers into two subsets with sums as
/// close as possible.
///
/// With `c` the total sum and `x_j` marking membership in subset one, the
/// squared sum difference is `c^2 + 4 x'Qx` where `q_ii = s_i (s_i - c)`
/// and `q_ij = s_i s_j`. The returned model minimizes `x'Qx`; the third
/// return value is `c^2`, so the decoder can recover the actual
/// difference from any model value.
pub fn number_partitioning(values: &[i64]) -> Result<(QuboModel, Decoder, i64)> {
    if values.is_empty() {
        return Err(Error::EmptyInput("number partitioning needs values"));
    }
    if let Some(&v) = values.iter().find(|&&v| v <= 0) {
        return Err(Error::invalid(format!(
            "values must be positive integers, found {v}"
        )));
    }
    let total = values
        .iter()
        .try_fold(0i64, |acc, &v| acc.checked_add(v))
        .ok_or_else(|| Error::invalid("value sum overflows"))?;
    let c_squared = total
        .checked_mul(total)
        .ok_or_else(|| Error::invalid("squared value sum overflows"))?;

    let n = values.len();
    let mut model = QuboModel::new(n, Sense::Minimize);
    for i in 0..n {
        model.add(i, i, (values[i] * (values[i] - total)) as f64);
        for j in (i + 1)..n {
            let prod = (values[i] * values[j]) as f64;
            model.add(i, j, prod);
            model.add(j, i, prod);
        }
    }
    let decoder = Decoder::NumberPartitioning {
        values: values.to_vec(),
    };
    Ok((model, decoder, c_squared))
}
