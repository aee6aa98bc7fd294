//! Minimum (weighted) vertex cover.

use crate::error::Result;
use crate::formulations::{require_positive_penalty, Decoder, Graph};
use crate::model::{QuboModel, Sense};
use crate::penalties::{known_penalty, KnownConstraint, PenalizedModel};

/// QUBO for the minimum vertex cover: minimize the cover weight subject
/// to every edge touching the cover.
///
/// The objective is the sum of vertex weights (unit weights when the graph
/// carries none); each edge `(i, j)` adds the penalty
/// `p * (1 - x_i - x_j + x_i x_j)`, so the offset collects `p` per edge.
pub fn min_vertex_cover(graph: &Graph, p: f64) -> Result<(PenalizedModel, Decoder)> {
    require_positive_penalty(p)?;
    let n = graph.n_vertices();
    let weights: Vec<f64> = graph
        .weights()
        .map(<[f64]>::to_vec)
        .unwrap_or_else(|| vec![1.0; n]);
    let mut model = QuboModel::new(n, Sense::Minimize);
    for (j, &w) in weights.iter().enumerate() {
        model.add(j, j, w);
    }
    for &(u, v) in graph.edges() {
        known_penalty(KnownConstraint::AtLeastOneOfTwo, &[u, v], p)?.apply_to(&mut model, 1.0);
    }
    let decoder = Decoder::VertexCover {
        graph: graph.clone(),
        weights,
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
