//! Maximum cut.

use crate::formulations::{Decoder, Graph};
use crate::model::{QuboModel, Sense};

/// QUBO for the maximum cut of an undirected graph.
///
/// Each edge `(i, j)` contributes `x_i + x_j - 2 x_i x_j`, which is 1
/// exactly when the edge crosses the bipartition, so the diagonal carries
/// vertex degrees and each edge puts -1 on both symmetric off-diagonal
/// positions. The model maximizes and its optimum equals the maximum cut
/// size. An edgeless graph yields the zero model.
pub fn max_cut(graph: &Graph) -> (QuboModel, Decoder) {
    let mut model = QuboModel::new(graph.n_vertices(), Sense::Maximize);
    for &(u, v) in graph.edges() {
        model.add(u, u, 1.0);
        model.add(v, v, 1.0);
        model.add(u, v, -1.0);
        model.add(v, u, -1.0);
    }
    let decoder = Decoder::MaxCut {
        graph: graph.clone(),
    };
    (model, decoder)
}
