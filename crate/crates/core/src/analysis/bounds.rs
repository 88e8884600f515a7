//! Convergence-time, loss-overhead, and bias-band bound calculators.

use super::AnalysisError;

/// Convergence round bound `r_c = 2·ln(n/ξ)/Φ²`: the maximum relative error
/// ε(r) is at most ξ for every round r ≥ r_c under reliable communication.
pub fn convergence_bound(n: usize, xi: f64, phi: f64) -> Result<f64, AnalysisError> {
    if n == 0 {
        return Err(AnalysisError::Domain("n must be positive".into()));
    }
    if !(0.0 < xi && xi < 1.0) {
        return Err(AnalysisError::Domain(format!("xi = {xi} outside (0, 1)")));
    }
    if !(0.0 < phi && phi <= 1.0) {
        return Err(AnalysisError::Domain(format!("phi = {phi} outside (0, 1]")));
    }
    Ok(2.0 * (n as f64 / xi).ln() / (phi * phi))
}

/// The loss-overhead fraction q: message loss multiplies the convergence
/// time by at most 1/(1−q).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossOverhead {
    pub q: f64,
    /// Below this rate q is the constant 1/e.
    pub small_f_threshold: f64,
    /// The bound is only stated for f up to this cap.
    pub validity_cap: f64,
}

/// Small-f regime threshold `1/(e·(2Δe)^e)`.
pub fn small_f_threshold(max_degree: usize) -> f64 {
    use std::f64::consts::E;
    1.0 / (E * (2.0 * max_degree as f64 * E).powf(E))
}

/// Validity cap `1/ln((2Δe)³)`.
pub fn loss_overhead_cap(max_degree: usize) -> f64 {
    use std::f64::consts::E;
    1.0 / (3.0 * (2.0 * max_degree as f64 * E).ln())
}

/// q per the two-regime definition: `1/e` when `f ≤ 1/(e·(2Δe)^e)`, else
/// `f·(√(4·ln((2Δe)³)/f − 3) − 1)/2`; requires `0 < f ≤ 1/ln((2Δe)³)`.
pub fn loss_overhead_q(f: f64, max_degree: usize) -> Result<LossOverhead, AnalysisError> {
    use std::f64::consts::E;
    if max_degree == 0 {
        return Err(AnalysisError::Domain("max degree must be positive".into()));
    }
    let small_f_threshold = small_f_threshold(max_degree);
    let validity_cap = loss_overhead_cap(max_degree);
    if !(f > 0.0) || f > validity_cap {
        return Err(AnalysisError::OutOfRegime { f, cap: validity_cap });
    }
    let q = if f <= small_f_threshold {
        1.0 / E
    } else {
        let log_cubed = 3.0 * (2.0 * max_degree as f64 * E).ln();
        f * ((4.0 * log_cubed / f - 3.0).sqrt() - 1.0) / 2.0
    };
    Ok(LossOverhead { q, small_f_threshold, validity_cap })
}

/// The band `[(1−ξ)(1−f)·v̄, (1+ξ)·v̄]` containing the expected
/// post-convergence estimate under loss rate f.
pub fn bias_band(true_mean: f64, xi: f64, f: f64) -> Result<(f64, f64), AnalysisError> {
    if !(0.0 < xi && xi < 1.0) {
        return Err(AnalysisError::Domain(format!("xi = {xi} outside (0, 1)")));
    }
    if !(0.0..1.0).contains(&f) {
        return Err(AnalysisError::Domain(format!("f = {f} outside [0, 1)")));
    }
    Ok(((1.0 - xi) * (1.0 - f) * true_mean, (1.0 + xi) * true_mean))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergence_bound_examples() {
        let rc = convergence_bound(3, 0.01, 0.5).unwrap();
        assert!((rc - 2.0 * 300.0f64.ln() / 0.25).abs() < 1e-12);
        assert!((rc - 45.63).abs() < 0.01);

        // n = 1, xi → 1: ln(1) = 0
        let rc = convergence_bound(1, 1.0 - 1e-12, 1.0).unwrap();
        assert!(rc.abs() < 1e-9);

        assert!(convergence_bound(3, 0.0, 0.5).is_err());
        assert!(convergence_bound(3, 1.0, 0.5).is_err());
        assert!(convergence_bound(3, 0.1, 0.0).is_err());
        assert!(convergence_bound(3, 0.1, 1.5).is_err());
    }

    #[test]
    fn q_is_constant_in_the_small_f_regime() {
        for max_degree in [1usize, 5, 10, 50] {
            let threshold = small_f_threshold(max_degree);
            let lo = loss_overhead_q(threshold * 0.5, max_degree).unwrap();
            assert_eq!(lo.q, 1.0 / std::f64::consts::E);
            let at = loss_overhead_q(threshold, max_degree).unwrap();
            assert_eq!(at.q, 1.0 / std::f64::consts::E);
        }
    }

    #[test]
    fn q_at_the_cap_stays_in_range() {
        for max_degree in [2usize, 10, 100] {
            let cap = loss_overhead_cap(max_degree);
            let lo = loss_overhead_q(cap, max_degree).unwrap();
            assert!(lo.q >= cap && lo.q <= 1.0, "Δ={max_degree}: q={} f={cap}", lo.q);
        }
    }

    #[test]
    fn q_above_the_cap_is_out_of_regime() {
        let cap = loss_overhead_cap(10);
        let err = loss_overhead_q(cap * 1.01, 10).unwrap_err();
        assert!(matches!(err, AnalysisError::OutOfRegime { .. }));
        assert!(loss_overhead_q(0.0, 10).is_err());
    }

    #[test]
    fn q_satisfies_f_le_q_le_one_throughout_the_regime() {
        for max_degree in [1usize, 3, 10, 40] {
            let cap = loss_overhead_cap(max_degree);
            for k in 1..=100 {
                let f = (cap * k as f64 / 100.0).min(cap);
                let lo = loss_overhead_q(f, max_degree).unwrap();
                assert!(lo.q >= f - 1e-12 && lo.q <= 1.0, "Δ={max_degree} f={f}: q={}", lo.q);
            }
        }
    }

    #[test]
    fn bias_band_examples() {
        let (lo, hi) = bias_band(1.0, 0.01, 0.0).unwrap();
        assert!((lo - 0.99).abs() < 1e-15);
        assert!((hi - 1.01).abs() < 1e-15);

        let (lo, hi) = bias_band(0.001, 0.01, 0.10).unwrap();
        assert!((lo - 0.0008910).abs() < 1e-12);
        assert!((hi - 0.00101).abs() < 1e-12);

        // lower-edge relative deviation ≈ f for small xi
        let (lo, _) = bias_band(1.0, 0.01, 0.05).unwrap();
        let deviation = 1.0 - lo;
        assert!((deviation - 0.05).abs() < 0.01);

        assert!(bias_band(1.0, 0.0, 0.1).is_err());
        assert!(bias_band(1.0, 0.1, 1.0).is_err());
    }
}
