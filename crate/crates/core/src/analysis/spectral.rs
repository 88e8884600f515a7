//! Second eigenvalue of the transition matrix by deflated power iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::TransitionMatrix;
use super::AnalysisError;

const MAX_ITERATIONS: u64 = 100_000;
const RAYLEIGH_TOL: f64 = 1e-12;

/// Returns λ₁, the second-largest eigenvalue of P.
///
/// P is symmetric doubly stochastic with `p_ii ≥ 1/2`, so its spectrum is
/// real and non-negative with top eigenvector the all-ones vector; power
/// iteration on the complement of that eigenvector converges to λ₁.
/// The start vector is a fixed seeded ChaCha8 draw, so the result is
/// deterministic.
pub fn second_eigenvalue(p: &TransitionMatrix) -> Result<f64, AnalysisError> {
    let n = p.n();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1a1b_2c3d_4e5f);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    project_out_uniform(&mut x);
    if normalize(&mut x) == 0.0 {
        // n == 1, or a degenerate draw: the deflated space is trivial
        return Ok(0.0);
    }

    let mut previous = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let mut y = p.apply(&x);
        project_out_uniform(&mut y);
        let rayleigh: f64 = dot(&x, &y);
        let norm = normalize(&mut y);
        if norm < 1e-150 {
            // P annihilates the deflated space (e.g. the 2-node graph)
            return Ok(0.0);
        }
        if (rayleigh - previous).abs() < RAYLEIGH_TOL {
            return Ok(rayleigh);
        }
        previous = rayleigh;
        x = y;
    }
    Err(AnalysisError::NonConvergence { iterations: MAX_ITERATIONS })
}

/// The conductance estimate `√(2(1−λ₁))` obtained by inverting the spectral
/// bound `λ₁ ≤ 1 − Φ²/2`; an upper-bound-derived proxy for graphs too large
/// for exact enumeration.
pub fn conductance_spectral_proxy(lambda1: f64) -> f64 {
    (2.0 * (1.0 - lambda1)).max(0.0).sqrt()
}

fn project_out_uniform(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for v in x.iter_mut() {
        *v -= mean;
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
    norm
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::build_transition_matrix;
    use crate::topology::{Graph, NodeId};

    fn complete(n: u32) -> Graph {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (NodeId(i), NodeId(j))));
        Graph::from_edges(n as usize, edges).unwrap()
    }

    #[test]
    fn complete_graph_closed_form() {
        // K_n: P = I/2 + (J − I)/(2(n−1)), so the non-uniform eigenvalue is
        // 1/2 − 1/(2(n−1)) = (n−2)/(2(n−1)).
        for n in [3u32, 4, 5, 8, 12] {
            let p = build_transition_matrix(&complete(n));
            let lambda = second_eigenvalue(&p).unwrap();
            let expected = (n as f64 - 2.0) / (2.0 * (n as f64 - 1.0));
            assert!((lambda - expected).abs() < 1e-10, "K_{n}: {lambda} vs {expected}");
        }
    }

    #[test]
    fn triangle_and_k4_values() {
        let p3 = build_transition_matrix(&complete(3));
        assert!((second_eigenvalue(&p3).unwrap() - 0.25).abs() < 1e-10);
        let p4 = build_transition_matrix(&complete(4));
        assert!((second_eigenvalue(&p4).unwrap() - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn two_node_graph_is_rank_one() {
        let g = Graph::from_edges(2, [(NodeId(0), NodeId(1))]).unwrap();
        let p = build_transition_matrix(&g);
        assert_eq!(second_eigenvalue(&p).unwrap(), 0.0);
    }

    #[test]
    fn lambda_dominates_long_power_decay() {
        // ‖e·Pʳ − mean‖ ≤ λ₁ʳ·‖e − mean‖ for symmetric P
        let g = crate::topology::generate_er(20, 40, 6).unwrap();
        let p = build_transition_matrix(&g);
        let lambda = second_eigenvalue(&p).unwrap();
        assert!((0.0..1.0).contains(&lambda));
        let e0: Vec<f64> = (0..20).map(|i| if i == 3 { 1.0 } else { 0.0 }).collect();
        let r = 50;
        let e = crate::analysis::matrix_power_reference(&p, &e0, r);
        let mean = 1.0 / 20.0;
        let dev = e.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>().sqrt();
        let initial_dev = e0.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>().sqrt();
        assert!(dev <= lambda.powi(r as i32) * initial_dev * (1.0 + 1e-9));
    }

    #[test]
    fn proxy_inverts_the_spectral_bound() {
        assert_eq!(conductance_spectral_proxy(1.0), 0.0);
        assert!((conductance_spectral_proxy(0.5) - 1.0).abs() < 1e-15);
    }
}
