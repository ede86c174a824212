//! `KL(spCauchy_d(μ, ρ) ‖ υ_d)` evaluators.
//!
//! Every evaluator works in the reparameterized argument
//! `z = 4ρ/(1+ρ)²` and the KL core
//!
//! ```text
//! J_d(z) = ∫_0^1 t^{d-2}/(1-t) · [1 - ((1-z)/(1-zt))^{(d-1)/2}] dt
//! H_d(z) = J_d(z) + log(1-z)
//! KL     = (d-1) · (H_d(z) - ½ log(1-z)) = (d-1) · (J_d(z) + log((1-ρ)/(1+ρ)))
//! ```
//!
//! The KL does not depend on `μ`. Values are in nats.

mod closed_form;
mod quadrature;
mod series;
mod surrogate;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{check_rho, Error, Result};

pub use closed_form::{j_closed_low_d, kl_closed_low_d};
pub use quadrature::{dkl_drho, j_quadrature, kl_quadrature, DEFAULT_NODES, MIN_NODES};
pub use series::{kl_series, SeriesOptions};
pub use surrogate::{
    bracket_width, combined_switch_jump, h_bracket, kl_asymptotic_high_rho, kl_combined, kl_hybrid,
    kl_laplace, kl_large_d_slope, kl_midpoint, COMBINED_SWITCH_RHO,
};

#[cfg(any(test, feature = "oracles"))]
pub(crate) use quadrature::j_quadrature_compensated;

/// Evaluator selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KlMethod {
    Series,
    Quadrature,
    AsymptoticHighRho,
    Combined,
    Hybrid,
    Midpoint,
    Laplace,
    /// Elementary closed forms, `d` in `2..=5` only.
    ClosedFormLowD,
}

impl KlMethod {
    pub const ALL: [KlMethod; 8] = [
        KlMethod::Series,
        KlMethod::Quadrature,
        KlMethod::AsymptoticHighRho,
        KlMethod::Combined,
        KlMethod::Hybrid,
        KlMethod::Midpoint,
        KlMethod::Laplace,
        KlMethod::ClosedFormLowD,
    ];

    const VALID_NAMES: &'static str =
        "series, quadrature, asymptotic, combined, hybrid, midpoint, laplace, closed";

    pub fn name(self) -> &'static str {
        match self {
            KlMethod::Series => "series",
            KlMethod::Quadrature => "quadrature",
            KlMethod::AsymptoticHighRho => "asymptotic",
            KlMethod::Combined => "combined",
            KlMethod::Hybrid => "hybrid",
            KlMethod::Midpoint => "midpoint",
            KlMethod::Laplace => "laplace",
            KlMethod::ClosedFormLowD => "closed",
        }
    }
}

impl fmt::Display for KlMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KlMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "series" => KlMethod::Series,
            "quadrature" | "quad" => KlMethod::Quadrature,
            "asymptotic" | "asymptotic_high_rho" => KlMethod::AsymptoticHighRho,
            "combined" => KlMethod::Combined,
            "hybrid" => KlMethod::Hybrid,
            "midpoint" => KlMethod::Midpoint,
            "laplace" => KlMethod::Laplace,
            "closed" | "closed_form" | "closed_form_low_d" => KlMethod::ClosedFormLowD,
            _ => {
                return Err(Error::UnknownMethod {
                    name: s.to_string(),
                    valid: Self::VALID_NAMES,
                })
            }
        };
        Ok(m)
    }
}

/// A KL value with evaluation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KlResult {
    /// Nats.
    pub value: f64,
    pub method: KlMethod,
    /// Series terms or quadrature nodes used; 0 for closed forms.
    pub terms_or_nodes: usize,
    pub converged: bool,
}

impl KlResult {
    pub(crate) fn closed(value: f64, method: KlMethod) -> Self {
        Self {
            value,
            method,
            terms_or_nodes: 0,
            converged: true,
        }
    }
}

/// Analytic bracket `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.lo - slack <= x && x <= self.hi + slack
    }
}

/// `z(ρ) = 4ρ/(1+ρ)²`.
pub fn z_of_rho(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(4.0 * rho / ((1.0 + rho) * (1.0 + rho)))
}

/// `1 - z(ρ)`, computed as `((1-ρ)/(1+ρ))²` without cancellation.
pub fn one_minus_z(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let s = (1.0 - rho) / (1.0 + rho);
    Ok(s * s)
}

/// Inverse of `z(ρ)`: `ρ = z / (1 + √(1-z))²`.
pub fn rho_of_z(z: f64) -> Result<f64> {
    crate::error::check_z(z)?;
    let s = (1.0 - z).sqrt();
    Ok(z / ((1.0 + s) * (1.0 + s)))
}

/// `log((1-ρ)/(1+ρ)) = ½ log(1-z) = -2 atanh ρ`.
pub(crate) fn half_log_one_minus_z(rho: f64) -> f64 {
    -2.0 * rho.atanh()
}

/// Recovers `H_d(z)` from a KL value: `H_d = KL/(d-1) + ½ log(1-z)`.
pub fn h_from_kl(d: usize, rho: f64, kl: f64) -> Result<f64> {
    crate::error::check_dim(d)?;
    check_rho(rho)?;
    Ok(kl / (d - 1) as f64 + half_log_one_minus_z(rho))
}

/// Evaluates the KL with `method` using default tolerances.
pub fn kl(d: usize, rho: f64, method: KlMethod) -> Result<KlResult> {
    match method {
        KlMethod::Series => kl_series(d, rho, SeriesOptions::default()),
        KlMethod::Quadrature => kl_quadrature(d, rho, DEFAULT_NODES),
        KlMethod::AsymptoticHighRho => kl_asymptotic_high_rho(d, rho),
        KlMethod::Combined => kl_combined(d, rho),
        KlMethod::Hybrid => kl_hybrid(d, rho),
        KlMethod::Midpoint => kl_midpoint(d, rho),
        KlMethod::Laplace => kl_laplace(d, rho),
        KlMethod::ClosedFormLowD => kl_closed_low_d(d, rho),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_examples() {
        assert_eq!(z_of_rho(0.0).unwrap(), 0.0);
        assert!((z_of_rho(1.0 / 3.0).unwrap() - 0.75).abs() < 1e-15);
        // (0.001 / 1.999)^2 from a 40-digit evaluation
        let omz = one_minus_z(0.999).unwrap();
        assert!((omz - 2.502_501_876_250_786e-7).abs() / omz < 1e-14);
        assert!(z_of_rho(1.0).is_err());
        assert!(one_minus_z(-0.1).is_err());
    }

    #[test]
    fn rho_of_z_inverts() {
        for rho in [0.0, 1e-9, 0.1, 0.5, 0.9, 0.999] {
            let z = z_of_rho(rho).unwrap();
            assert!((rho_of_z(z).unwrap() - rho).abs() < 1e-12);
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in KlMethod::ALL {
            assert_eq!(m.name().parse::<KlMethod>().unwrap(), m);
        }
        let err = "bessel".parse::<KlMethod>().unwrap_err();
        assert!(err.to_string().contains("hybrid"));
    }

    #[test]
    fn dispatcher_tags_methods() {
        for m in KlMethod::ALL {
            let r = kl(4, 0.3, m).unwrap();
            let expect = match m {
                KlMethod::Combined => KlMethod::Quadrature,
                other => other,
            };
            assert_eq!(r.method, expect);
        }
    }
}
