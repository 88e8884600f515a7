//! Per-round error metrics and across-seed aggregation.

use super::SimError;

/// Metrics sampled after the computation phase of one round.
///
/// `cv_rmse` is the coefficient of variation of the root-mean-square error,
/// `√(Σ_i (e_i − v̄)²/n) / v̄`; `max_rel_err` is the paper's ε(r),
/// `max_i |e_i − v̄| / v̄`. Both use the round's current true mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundMetrics {
    pub round: u64,
    pub cv_rmse: f64,
    pub max_rel_err: f64,
    pub mean_estimate: f64,
    pub true_mean: f64,
    /// Σe_i / Σv_i: the fraction of the input mass currently held in nodes.
    pub node_mass_fraction: f64,
}

pub(crate) fn compute_metrics(
    round: u64,
    estimates: &[f64],
    inputs: &[f64],
) -> Result<RoundMetrics, SimError> {
    let n = estimates.len() as f64;
    let input_sum: f64 = inputs.iter().sum();
    let true_mean = input_sum / n;
    if true_mean == 0.0 {
        return Err(SimError::UndefinedMetrics { round });
    }
    let mut sq_sum = 0.0;
    let mut max_abs = 0.0f64;
    let mut est_sum = 0.0;
    for &e in estimates {
        let d = e - true_mean;
        sq_sum += d * d;
        max_abs = max_abs.max(d.abs());
        est_sum += e;
    }
    Ok(RoundMetrics {
        round,
        cv_rmse: (sq_sum / n).sqrt() / true_mean.abs(),
        max_rel_err: max_abs / true_mean.abs(),
        mean_estimate: est_sum / n,
        true_mean,
        node_mass_fraction: est_sum / input_sum,
    })
}

/// Mean and sample standard deviation of one metric across loss seeds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AggregatedRoundMetrics {
    pub round: u64,
    pub cv_rmse: MeanStd,
    pub max_rel_err: MeanStd,
    pub mean_estimate: MeanStd,
    pub true_mean: MeanStd,
    pub node_mass_fraction: MeanStd,
}

pub(crate) fn aggregate(runs: &[Vec<RoundMetrics>]) -> Vec<AggregatedRoundMetrics> {
    let rounds = runs[0].len();
    let mut out = Vec::with_capacity(rounds);
    for r in 0..rounds {
        let stat = |field: fn(&RoundMetrics) -> f64| -> MeanStd {
            let values: Vec<f64> = runs.iter().map(|run| field(&run[r])).collect();
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let std = if values.len() > 1 {
                let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
                (ss / (values.len() - 1) as f64).sqrt()
            } else {
                0.0
            };
            MeanStd { mean, std }
        };
        out.push(AggregatedRoundMetrics {
            round: runs[0][r].round,
            cv_rmse: stat(|m| m.cv_rmse),
            max_rel_err: stat(|m| m.max_rel_err),
            mean_estimate: stat(|m| m.mean_estimate),
            true_mean: stat(|m| m.true_mean),
            node_mass_fraction: stat(|m| m.node_mass_fraction),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metrics_on_exact_estimates_are_zero() {
        let m = compute_metrics(3, &[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert_eq!(m.cv_rmse, 0.0);
        assert_eq!(m.max_rel_err, 0.0);
        assert_eq!(m.mean_estimate, 0.5);
        assert_eq!(m.true_mean, 0.5);
        assert_eq!(m.node_mass_fraction, 1.0);
    }

    #[test]
    fn cv_is_bounded_by_max_rel_err() {
        let m = compute_metrics(1, &[1.0, 0.0, 0.2, 0.9], &[1.0, 0.0, 0.5, 0.6]).unwrap();
        assert!(m.cv_rmse <= m.max_rel_err);
        assert!(m.cv_rmse > 0.0);
    }

    #[test]
    fn zero_true_mean_is_rejected() {
        assert!(matches!(
            compute_metrics(2, &[0.0, 0.0], &[1.0, -1.0]),
            Err(SimError::UndefinedMetrics { round: 2 })
        ));
    }

    #[test]
    fn aggregation_of_single_run_has_zero_std() {
        let run = vec![compute_metrics(0, &[0.4, 0.6], &[1.0, 0.0]).unwrap()];
        let agg = aggregate(&[run.clone()]);
        assert_eq!(agg[0].cv_rmse.mean, run[0].cv_rmse);
        assert_eq!(agg[0].cv_rmse.std, 0.0);
    }

    #[test]
    fn aggregation_means_and_stds() {
        let a = vec![compute_metrics(0, &[0.4, 0.6], &[1.0, 0.0]).unwrap()];
        let b = vec![compute_metrics(0, &[0.2, 0.8], &[1.0, 0.0]).unwrap()];
        let agg = aggregate(&[a.clone(), b.clone()]);
        let mean = (a[0].cv_rmse + b[0].cv_rmse) / 2.0;
        assert!((agg[0].cv_rmse.mean - mean).abs() < 1e-15);
        let dev = (a[0].cv_rmse - mean).abs();
        assert!((agg[0].cv_rmse.std - dev * std::f64::consts::SQRT_2).abs() < 1e-12);
    }
}
