//! Power-series evaluator.
//!
//! ```text
//! KL = (d-1) log((1-ρ)/(1+ρ))
//!    + (d-1) (1-z)^{(d-1)/2} Σ_k ((d-1)/2)_k / k! · z^k · [ψ(d-1+k) - ψ(d-1)]
//! ```
//!
//! The prefactor underflows and the coefficients overflow for large `d`, so
//! each term is assembled in log-space and exponentiated only once. The
//! digamma difference is the harmonic sum `Σ_{j<k} 1/(d-1+j)`, accumulated
//! incrementally.

use super::{half_log_one_minus_z, one_minus_z, z_of_rho, KlMethod, KlResult};
use crate::error::{check_dim, Result};
use crate::special::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    /// Stop once a term past the peak contributes less than this fraction.
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 100_000,
        }
    }
}

impl SeriesOptions {
    /// Long-series settings used by the reference hierarchy.
    pub fn long() -> Self {
        Self {
            rel_tol: 1e-16,
            max_terms: 1_000_000,
        }
    }
}

pub fn kl_series(d: usize, rho: f64, opts: SeriesOptions) -> Result<KlResult> {
    check_dim(d)?;
    let z = z_of_rho(rho)?;
    if z == 0.0 {
        return Ok(KlResult {
            value: 0.0,
            method: KlMethod::Series,
            terms_or_nodes: 0,
            converged: true,
        });
    }
    let omz = one_minus_z(rho)?;
    let (sum, terms, converged) = j_series(d, z, omz, opts, |_, _| {});
    let value = (d - 1) as f64 * (sum + half_log_one_minus_z(rho));
    Ok(KlResult {
        value,
        method: KlMethod::Series,
        terms_or_nodes: terms,
        converged,
    })
}

/// Sums `J_d(z)` as a series. `visit(k, term)` sees every term; returns
/// `(sum, terms_used, converged)`.
pub(crate) fn j_series(
    d: usize,
    z: f64,
    omz: f64,
    opts: SeriesOptions,
    mut visit: impl FnMut(usize, f64),
) -> (f64, usize, bool) {
    let delta = 0.5 * (d - 1) as f64;
    let m = (d - 1) as f64;
    // near z = 1 the complement is the accurate input
    let log_z = if z < 0.5 { z.ln() } else { (-omz).ln_1p() };

    // log of (1-z)^δ (δ)_k / k! z^k, carried with compensation
    let mut log_coef = CompensatedSum::default();
    log_coef.add(delta * omz.ln());
    let mut harmonic = CompensatedSum::default();
    let mut sum = CompensatedSum::default();
    let mut prev_log_term = f64::NEG_INFINITY;

    for k in 1..=opts.max_terms {
        let kf = k as f64;
        log_coef.add(((delta - 1.0) / kf).ln_1p());
        log_coef.add(log_z);
        harmonic.add(1.0 / (m + kf - 1.0));
        let log_term = log_coef.value() + harmonic.value().ln();
        let term = log_term.exp();
        sum.add(term);
        visit(k, term);

        // Early terms may underflow to zero while still growing; only stop
        // once past the peak. There the term ratio r decreases toward z, so
        // the remaining tail is at most term · r/(1-r).
        let s = sum.value();
        if log_term < prev_log_term {
            let log_r = log_term - prev_log_term;
            let log_tail = log_term + log_r - (-log_r.exp_m1()).ln();
            if s == 0.0 || log_tail <= opts.rel_tol.ln() + s.ln() {
                return (s, k, true);
            }
        }
        prev_log_term = log_term;
    }
    (sum.value(), opts.max_terms, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kl::closed_form::kl_low_d;

    #[test]
    fn zero_at_uniform() {
        let r = kl_series(5, 0.0, SeriesOptions::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn matches_closed_forms() {
        for d in 2..=5 {
            for rho in [0.05, 0.3, 0.5, 0.75, 0.9] {
                let s = kl_series(d, rho, SeriesOptions::default()).unwrap();
                let c = kl_low_d(d, rho).unwrap();
                assert!(s.converged);
                assert!(
                    (s.value - c).abs() <= 1e-12 * c.abs().max(1.0),
                    "d={d} rho={rho}: {} vs {c}",
                    s.value
                );
            }
        }
    }

    #[test]
    fn terms_decay_with_ratio_z() {
        let (d, rho) = (8, 0.6);
        let z = z_of_rho(rho).unwrap();
        let mut terms = Vec::new();
        j_series(
            d,
            z,
            one_minus_z(rho).unwrap(),
            SeriesOptions::default(),
            |_, t| terms.push(t),
        );
        let n = terms.len();
        assert!(n > 50);
        let ratio = terms[n - 1] / terms[n - 2];
        assert!(
            ratio < 1.0 && (ratio - z).abs() < 0.1 * z,
            "ratio {ratio}, z {z}"
        );
        // ratios approach z monotonically from above in the tail
        let r1 = terms[n / 2 + 1] / terms[n / 2];
        assert!(r1 >= ratio);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = SeriesOptions {
            rel_tol: 1e-14,
            max_terms: 10,
        };
        let r = kl_series(64, 0.9, opts).unwrap();
        assert!(!r.converged);
        assert_eq!(r.terms_or_nodes, 10);
        assert!(r.value.is_finite());
    }

    #[test]
    fn huge_dimension_stays_finite() {
        let r = kl_series(2048, 0.995, SeriesOptions::default()).unwrap();
        assert!(r.value.is_finite());
    }
}
