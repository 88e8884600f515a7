//! Exact graph conductance by exhaustive subset enumeration.

use super::matrix::build_transition_matrix;
use super::AnalysisError;
use crate::topology::Graph;

/// Beyond this the 2ⁿ enumeration stops being a "seconds" operation.
pub const EXACT_CONDUCTANCE_MAX_NODES: usize = 22;

/// Φ(G) with the uniform stationary distribution:
/// `min over ∅ ⊂ S ⊂ V, π(S) ≤ 1/2 of [Σ_{i∈S, j∉S} p_ij·π_i] / π(S)`.
/// With π uniform this reduces to (cross-boundary probability flow) / |S|.
pub fn conductance_exact(g: &Graph) -> Result<f64, AnalysisError> {
    let n = g.node_count();
    if n > EXACT_CONDUCTANCE_MAX_NODES {
        return Err(AnalysisError::TooLarge { n, cap: EXACT_CONDUCTANCE_MAX_NODES });
    }
    let p = build_transition_matrix(g);
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .map(|&(a, b)| (a.index(), b.index(), p.get(a.index(), b.index())))
        .collect();

    let mut best = f64::INFINITY;
    for mask in 1u64..(1 << n) {
        let size = mask.count_ones() as u64;
        if 2 * size > n as u64 {
            continue;
        }
        let mut cross = 0.0;
        for &(a, b, weight) in &edges {
            if (mask >> a) & 1 != (mask >> b) & 1 {
                cross += weight;
            }
        }
        let ratio = cross / size as f64;
        if ratio < best {
            best = ratio;
        }
    }
    Ok(best)
}
