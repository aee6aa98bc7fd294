//! K-coloring as a feasibility QUBO.

use crate::error::{Error, Result};
use crate::formulations::{require_positive_penalty, Decoder, Graph};
use crate::model::Sense;
use crate::penalties::{
    pair_penalty, transformation1, ConstrainedProblem, LinearConstraint, PenalizedModel, Relation,
};

/// QUBO for coloring a graph with exactly `colors` colors.
///
/// Variable `node * colors + color` says the node gets that color. Each
/// node's one-color equality goes through the quadratic equality penalty
/// (a block of `-p` diagonal and `p` off-diagonal entries); each edge adds
/// the product penalty `p * x_{u,c} x_{v,c}` per color. The offset collects
/// `p` per node, so a proper coloring evaluates to zero and the matrix part
/// alone reaches `-n * p` exactly when one exists.
pub fn graph_coloring(graph: &Graph, colors: usize, p: f64) -> Result<(PenalizedModel, Decoder)> {
    require_positive_penalty(p)?;
    if colors == 0 {
        return Err(Error::invalid("at least one color is required"));
    }
    let n = graph.n_vertices();
    let nv = n * colors;
    let constraints: Vec<LinearConstraint> = (0..n)
        .map(|node| {
            LinearConstraint::new(
                (0..colors).map(|c| (node * colors + c, 1.0)).collect(),
                Relation::Eq,
                1.0,
            )
        })
        .collect::<Result<_>>()?;
    let problem = ConstrainedProblem::linear(&vec![0.0; nv], Sense::Minimize, constraints)?;
    let mut pm = transformation1(&problem, p)?;
    for &(u, v) in graph.edges() {
        for c in 0..colors {
            pair_penalty(u * colors + c, v * colors + c, p)?.apply_to(&mut pm.qubo, 1.0);
        }
    }
    let decoder = Decoder::GraphColoring {
        graph: graph.clone(),
        colors,
        penalty: p,
    };
    Ok((pm, decoder))
}
