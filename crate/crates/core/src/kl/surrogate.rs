//! Closed-form asymptotics, envelopes and surrogates for `H_d(z)`, plus the
//! dispatching rules built from them.
//!
//! `H_d` is strictly decreasing on `[0, 1)` and sits inside
//!
//! ```text
//! L_d(z) = ψ((d-1)/2) - ψ(d-1) + log(2-z)  ≤  H_d(z)  ≤  U(z) = log(1 - z/2)
//! ```
//!
//! whose width `w_d = ψ(d-1) - ψ((d-1)/2) - log 2` does not depend on `z`.

use super::closed_form::kl_low_d;
use super::quadrature::{kl_quadrature, DEFAULT_NODES};
use super::{half_log_one_minus_z, z_of_rho, Interval, KlMethod, KlResult};
use crate::error::{check_dim, check_rho, check_z, Result};
use crate::special::digamma_unchecked as psi;

/// `kl_combined` uses quadrature for `ρ <= COMBINED_SWITCH_RHO`.
pub const COMBINED_SWITCH_RHO: f64 = 0.9;

/// `lim_{z→1} H_d(z) = ψ((d-1)/2) - ψ(d-1)`.
fn h_limit(d: usize) -> f64 {
    let m = (d - 1) as f64;
    psi(0.5 * m) - psi(m)
}

/// Bracket width `w_d = ψ(d-1) - ψ((d-1)/2) - log 2 = 1/(2(d-1)) + O(d^-2)`.
pub fn bracket_width(d: usize) -> Result<f64> {
    check_dim(d)?;
    Ok(-h_limit(d) - std::f64::consts::LN_2)
}

/// The envelope `[L_d(z), U(z)]` around `H_d(z)`.
pub fn h_bracket(d: usize, z: f64) -> Result<Interval> {
    check_dim(d)?;
    check_z(z)?;
    Ok(Interval {
        lo: h_limit(d) + (2.0 - z).ln(),
        hi: (-0.5 * z).ln_1p(),
    })
}

/// High-concentration asymptotic
/// `(d-1)(log((1+ρ)/(1-ρ)) + ψ((d-1)/2) - ψ(d-1))`, exact up to `o(1)` as
/// `ρ → 1`.
pub fn kl_asymptotic_high_rho(d: usize, rho: f64) -> Result<KlResult> {
    check_dim(d)?;
    check_rho(rho)?;
    let value = (d - 1) as f64 * (2.0 * rho.atanh() + h_limit(d));
    Ok(KlResult::closed(value, KlMethod::AsymptoticHighRho))
}

/// Quadrature for `ρ <= 0.9`, the high-concentration asymptotic above.
pub fn kl_combined(d: usize, rho: f64) -> Result<KlResult> {
    check_rho(rho)?;
    if rho <= COMBINED_SWITCH_RHO {
        kl_quadrature(d, rho, DEFAULT_NODES)
    } else {
        kl_asymptotic_high_rho(d, rho)
    }
}

/// Size of the discontinuity of [`kl_combined`] at the switch point:
/// asymptotic minus quadrature at `ρ = 0.9`.
pub fn combined_switch_jump(d: usize) -> Result<f64> {
    let q = kl_quadrature(d, COMBINED_SWITCH_RHO, DEFAULT_NODES)?.value;
    let a = kl_asymptotic_high_rho(d, COMBINED_SWITCH_RHO)?.value;
    Ok(a - q)
}

/// Midpoint of the envelope, `log(2-z) + ½(ψ((d-1)/2) - ψ(d-1) - log 2)`.
/// Its KL error is at most `(d-1) w_d / 2` for every `z`.
pub fn kl_midpoint(d: usize, rho: f64) -> Result<KlResult> {
    check_dim(d)?;
    let z = z_of_rho(rho)?;
    let h = (2.0 - z).ln() + 0.5 * (h_limit(d) - std::f64::consts::LN_2);
    Ok(KlResult::closed(kl_from_h(d, rho, h), KlMethod::Midpoint))
}

/// Laplace surrogate `log(1 - z/2) - w_d (z/(2-z))²`: interpolates the
/// envelope with weight `4(1-z)/(2-z)² ∈ [0, 1]` and is off by
/// `O((d-1)^-2)` at fixed `z`.
pub fn kl_laplace(d: usize, rho: f64) -> Result<KlResult> {
    check_dim(d)?;
    check_rho(rho)?;
    Ok(KlResult::closed(laplace_value(d, rho)?, KlMethod::Laplace))
}

fn laplace_value(d: usize, rho: f64) -> Result<f64> {
    let z = z_of_rho(rho)?;
    let w = bracket_width(d)?;
    let r = z / (2.0 - z);
    let h = (-0.5 * z).ln_1p() - w * r * r;
    Ok(kl_from_h(d, rho, h))
}

/// Exact closed forms for `d <= 5`, Laplace surrogate for `d >= 6`.
pub fn kl_hybrid(d: usize, rho: f64) -> Result<KlResult> {
    check_dim(d)?;
    check_rho(rho)?;
    let value = if d <= 5 {
        kl_low_d(d, rho)?
    } else {
        laplace_value(d, rho)?
    };
    Ok(KlResult::closed(value, KlMethod::Hybrid))
}

/// Large-dimension slope `log((1+ρ²)/(1-ρ²))` of `KL/(d-1)`.
pub fn kl_large_d_slope(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let r2 = rho * rho;
    Ok(r2.ln_1p() - (-r2).ln_1p())
}

/// `(d-1)(H - ½ log(1-z))`.
fn kl_from_h(d: usize, rho: f64, h: f64) -> f64 {
    (d - 1) as f64 * (h - half_log_one_minus_z(rho))
}
