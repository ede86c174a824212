//! Concentration matching between spCauchy and von Mises-Fisher.
//!
//! Near the mode both log-densities are `C - κ θ²/2 + O(θ⁴)` in the geodesic
//! angle `θ` once `κ = 2(d-1)ρ/(1-ρ)²`. Only the unnormalized vMF
//! log-density `κ cos θ` is needed, so nothing here touches Bessel functions.

use serde::Serialize;

use crate::error::{check_dim, Error, Result};

/// A `(ρ, κ)` pair related by the matching map in dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchedPair {
    pub d: usize,
    pub rho: f64,
    pub kappa: f64,
}

impl MatchedPair {
    pub fn from_rho(d: usize, rho: f64) -> Result<Self> {
        Ok(Self {
            d,
            rho,
            kappa: kappa_of_rho(d, rho)?,
        })
    }

    pub fn from_kappa(d: usize, kappa: f64) -> Result<Self> {
        Ok(Self {
            d,
            rho: rho_match(d, kappa)?,
            kappa,
        })
    }
}

fn check_open_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidConcentration { rho });
    }
    Ok(())
}

/// `κ(ρ) = 2(d-1)ρ/(1-ρ)²` for `0 < ρ < 1`.
pub fn kappa_of_rho(d: usize, rho: f64) -> Result<f64> {
    check_dim(d)?;
    check_open_rho(rho)?;
    let omr = 1.0 - rho;
    Ok(2.0 * (d - 1) as f64 * rho / (omr * omr))
}

/// Inverse of [`kappa_of_rho`]: `ρ = (m + κ - √(m² + 2mκ))/κ`, `m = d-1`.
///
/// Evaluated as `κ / (m + κ + √(m² + 2mκ))`, the conjugate form, which has
/// no cancellation for any `κ > 0` and reduces to `κ/(2m)` as `κ → 0`.
pub fn rho_match(d: usize, kappa: f64) -> Result<f64> {
    check_dim(d)?;
    if kappa.is_nan() || kappa <= 0.0 || kappa.is_infinite() {
        return Err(Error::InvalidKappa { kappa });
    }
    let m = (d - 1) as f64;
    if kappa < 1e-6 * m {
        // x(1 - 2x + 5x² - ...) with x = κ/(2m)
        let x = kappa / (2.0 * m);
        return Ok(x * (1.0 - 2.0 * x + 5.0 * x * x));
    }
    let root = m * (1.0 + 2.0 * kappa / m).sqrt();
    Ok(kappa / (m + kappa + root))
}

/// Least-squares curvature fits near the mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub c_vmf: f64,
    pub c_spc: f64,
    pub rel_diff: f64,
}

/// Fits `log f(θ) - log f(0) = -c θ²/2` by least squares on the grid
/// `θ_i = θ_max · i / n`, `i = 1..n`, for the unnormalized log-densities
/// `κ(ρ) cos θ` and `-(d-1) log(1 + ρ² - 2ρ cos θ)`.
pub fn curvature_report(
    d: usize,
    rho: f64,
    theta_max: f64,
    n_points: usize,
) -> Result<CurvatureReport> {
    let kappa = kappa_of_rho(d, rho)?;
    let m = (d - 1) as f64;
    let omr2 = (1.0 - rho) * (1.0 - rho);
    let n = n_points.max(1);
    let (mut num_v, mut num_s, mut den) = (0.0, 0.0, 0.0);
    for i in 1..=n {
        let th = theta_max * i as f64 / n as f64;
        // 1 - cos θ = 2 sin²(θ/2)
        let vers = 2.0 * (0.5 * th).sin().powi(2);
        let r_vmf = -kappa * vers;
        let r_spc = -m * (2.0 * rho * vers / omr2).ln_1p();
        let t2 = th * th;
        num_v += t2 * r_vmf;
        num_s += t2 * r_spc;
        den += t2 * t2;
    }
    let c_vmf = -2.0 * num_v / den;
    let c_spc = -2.0 * num_s / den;
    Ok(CurvatureReport {
        c_vmf,
        c_spc,
        rel_diff: (c_vmf - c_spc).abs() / c_vmf.abs(),
    })
}
