//! Numerical verification toolkit for the protocol's theory: the
//! transition matrix of a loss-free round, its spectral gap, exact
//! conductance, convergence/overhead/bias bound calculators, matrix-power
//! reference trajectories, and the particle random-walk oracle.

mod bounds;
mod conductance;
mod matrix;
mod particle;
mod spectral;

pub use bounds::{
    bias_band, convergence_bound, loss_overhead_cap, loss_overhead_q, small_f_threshold,
    LossOverhead,
};
pub use conductance::{conductance_exact, EXACT_CONDUCTANCE_MAX_NODES};
pub use matrix::{build_transition_matrix, matrix_power_reference, TransitionMatrix};
pub use particle::{particle_walk, ParticleRound, ParticleWalkConfig};
pub use spectral::{conductance_spectral_proxy, second_eigenvalue};

use crate::topology::Graph;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("power iteration did not converge within {iterations} iterations")]
    NonConvergence { iterations: u64 },
    #[error("exact conductance needs n ≤ {cap}, got {n}")]
    TooLarge { n: usize, cap: usize },
    #[error("loss rate {f} outside the bound's regime (cap {cap})")]
    OutOfRegime { f: f64, cap: f64 },
    #[error("domain error: {0}")]
    Domain(String),
}

/// Every bound the theory provides for one graph, loss rate, and accuracy
/// target, evaluated numerically.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n: usize,
    pub edge_count: usize,
    pub max_degree: usize,
    pub xi: f64,
    pub loss_rate: f64,
    /// Φ(G): exact for small graphs, otherwise the spectral proxy √(2(1−λ₁)).
    pub conductance: f64,
    pub conductance_is_exact: bool,
    pub lambda1: f64,
    /// r_c = 2·ln(n/ξ)/Φ².
    pub convergence_rounds: f64,
    /// Loss overhead; `None` when f = 0 or f is outside the bound's regime.
    pub loss_overhead: Option<LossOverhead>,
    pub small_f_threshold: f64,
    pub loss_overhead_regime_cap: f64,
    /// r_c/(1−q) when the overhead applies.
    pub rounds_with_loss: Option<f64>,
    pub true_mean: f64,
    /// [(1−ξ)(1−f)·v̄, (1+ξ)·v̄].
    pub bias_band: (f64, f64),
}

/// Assembles the full report for a graph: conductance (exact when
/// n ≤ [`EXACT_CONDUCTANCE_MAX_NODES`]), λ₁, r_c, q, r_c/(1−q), and the
/// bias band around `true_mean`.
pub fn bound_report(
    g: &Graph,
    xi: f64,
    loss_rate: f64,
    true_mean: f64,
) -> Result<BoundReport, AnalysisError> {
    let n = g.node_count();
    let p = build_transition_matrix(g);
    let lambda1 = second_eigenvalue(&p)?;
    let (conductance, conductance_is_exact) = if n <= EXACT_CONDUCTANCE_MAX_NODES {
        (conductance_exact(g)?, true)
    } else {
        (conductance_spectral_proxy(lambda1), false)
    };
    let convergence_rounds = convergence_bound(n, xi, conductance)?;
    let max_degree = g.max_degree();
    let loss_overhead = if loss_rate > 0.0 { loss_overhead_q(loss_rate, max_degree).ok() } else { None };
    let rounds_with_loss = loss_overhead.map(|lo| convergence_rounds / (1.0 - lo.q));
    let bias = bias_band(true_mean, xi, loss_rate)?;
    Ok(BoundReport {
        n,
        edge_count: g.edge_count(),
        max_degree,
        xi,
        loss_rate,
        conductance,
        conductance_is_exact,
        lambda1,
        convergence_rounds,
        loss_overhead,
        small_f_threshold: small_f_threshold(max_degree),
        loss_overhead_regime_cap: loss_overhead_cap(max_degree),
        rounds_with_loss,
        true_mean,
        bias_band: bias,
    })
}
