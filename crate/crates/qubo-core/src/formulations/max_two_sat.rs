//! Max 2-SAT.

use crate::error::Result;
use crate::formulations::{CnfInstance, Decoder, Literal};
use crate::model::{QuboModel, Sense};
use crate::penalties::PenaltyTerms;

/// Unit penalty of a single 2-literal clause: 0 when the clause is
/// satisfied and 1 otherwise.
pub(crate) fn clause_penalty(clause: &[Literal; 2]) -> PenaltyTerms {
    let (a, b) = (clause[0], clause[1]);
    match (a.negated, b.negated) {
        (false, false) => PenaltyTerms {
            constant: 1.0,
            linear: vec![(a.var, -1.0), (b.var, -1.0)],
            quadratic: vec![(a.var, b.var, 1.0)],
        },
        (true, true) => PenaltyTerms {
            constant: 0.0,
            linear: vec![],
            quadratic: vec![(a.var, b.var, 1.0)],
        },
        _ => {
            // One negation: the penalty is x_neg - x_pos x_neg.
            let (pos, neg) = if a.negated { (b, a) } else { (a, b) };
            PenaltyTerms {
                constant: 0.0,
                linear: vec![(neg.var, 1.0)],
                quadratic: vec![(pos.var, neg.var, -1.0)],
            }
        }
    }
}

/// QUBO whose minimum is the smallest number of unsatisfied clauses.
///
/// Each clause contributes its unit penalty; constants from all-positive
/// clauses accumulate in the offset. The model dimension depends only on
/// the variable count, never on the clause count.
pub fn max_two_sat(instance: &CnfInstance) -> Result<(QuboModel, Decoder)> {
    let mut model = QuboModel::new(instance.n_vars(), Sense::Minimize);
    for clause in instance.clauses() {
        clause_penalty(clause).apply_to(&mut model, 1.0);
    }
    let decoder = Decoder::MaxTwoSat {
        instance: instance.clone(),
    };
    Ok((model, decoder))
}
