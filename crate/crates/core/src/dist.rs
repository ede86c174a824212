//! The spherical Cauchy distribution `spCauchy_d(μ, ρ)`.
//!
//! **Densities are with respect to the uniform probability measure `υ_d` on
//! `S^{d-1}`**, not surface measure:
//!
//! ```text
//! q(x) = ((1-ρ²) / ‖x - ρμ‖²)^{d-1} = ((1-ρ²) / (1 + ρ² - 2ρ μᵀx))^{d-1}
//! ```
//!
//! so `log q ≡ 0` at `ρ = 0` and `KL(q ‖ υ_d) = E_q[log q]`. Samples are
//! drawn by pushing a uniform point through the Möbius map, which makes them
//! pathwise differentiable in `(μ, ρ)`.

use rand::Rng;
use serde::Serialize;

use crate::error::{check_dim, check_rho, Error, Result};
use crate::special::wallis;
use crate::sphere::{dot, moebius_transform, same_dim, sample_uniform_sphere, UnitVector};

/// Mode `mu` and concentration `rho ∈ [0, 1)`; `d = mu.dim()`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpCauchy {
    mu: UnitVector,
    rho: f64,
}

impl SpCauchy {
    pub fn new(mu: UnitVector, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        Ok(Self { mu, rho })
    }

    pub fn mu(&self) -> &UnitVector {
        &self.mu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn dim(&self) -> usize {
        self.mu.dim()
    }

    /// `log q(x)` w.r.t. `υ_d`.
    pub fn log_density(&self, x: &UnitVector) -> Result<f64> {
        same_dim(&self.mu, x)?;
        Ok(log_density_cos(
            self.dim(),
            self.rho,
            dot(self.mu.as_slice(), x.as_slice()),
        ))
    }

    /// One reparameterized draw: `moebius(uniform, μ, ρ)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<UnitVector> {
        let x = sample_uniform_sphere(self.dim(), rng)?;
        moebius_transform(&x, &self.mu, self.rho)
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<UnitVector>> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

/// `log q` as a function of `c = μᵀx`, clamped to `[-1, 1]`.
///
/// `1 + ρ² - 2ρc` is formed as `(1-ρ)² + 2ρ(1-c)`, a sum of non-negative
/// terms, so the log stays accurate as `ρ → 1` near the mode.
pub(crate) fn log_density_cos(d: usize, rho: f64, c: f64) -> f64 {
    let c = c.clamp(-1.0, 1.0);
    let omr = 1.0 - rho;
    let denom = omr * omr + 2.0 * rho * (1.0 - c);
    (d - 1) as f64 * ((-rho * rho).ln_1p() - denom.ln())
}

/// Density of `t = μᵀx` on `[-1, 1]` under `spCauchy_d(μ, ρ)`:
///
/// ```text
/// (1-t²)^{(d-3)/2} / W_{d-2} · ((1-ρ²)/(1+ρ²-2ρt))^{d-1}
/// ```
///
/// with `W_n = ∫_0^π sin^n` the uniform-marginal normalizer. For `d = 2` the
/// density is infinite at `t = ±1` (integrable).
pub fn marginal_cos_density(d: usize, rho: f64, t: f64) -> Result<f64> {
    check_dim(d)?;
    check_rho(rho)?;
    if !(-1.0..=1.0).contains(&t) {
        return Ok(0.0);
    }
    let one_minus_t2 = (1.0 - t) * (1.0 + t);
    let base = if d == 3 {
        1.0
    } else if one_minus_t2 == 0.0 {
        return Ok(if d == 2 { f64::INFINITY } else { 0.0 });
    } else {
        (0.5 * (d as f64 - 3.0) * one_minus_t2.ln()).exp()
    };
    Ok(base / wallis(d - 2) * log_density_cos(d, rho, t).exp())
}

/// Density of `θ = arccos(μᵀx)` on `[0, π]`; finite everywhere, which makes
/// it the convenient integrand for normalization and CDFs.
pub fn marginal_angle_density(d: usize, rho: f64, theta: f64) -> Result<f64> {
    check_dim(d)?;
    check_rho(rho)?;
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Ok(0.0);
    }
    let s = theta.sin();
    let base = if d == 2 { 1.0 } else { s.powi(d as i32 - 2) };
    Ok(base / wallis(d - 2) * log_density_cos(d, rho, theta.cos()).exp())
}

/// Stereographic projection from `pole` onto the hyperplane `poleᵀy = 0`,
/// expressed in a fixed orthonormal basis of that hyperplane.
///
/// The basis is the last `d-1` columns of the Householder reflection that
/// sends `e_1` to `-pole` (or to `pole` when `pole_1 <= 0`, for stability).
/// `-pole` maps to the origin, the equator to the unit sphere of `R^{d-1}`.
pub fn stereographic_project(x: &UnitVector, pole: &UnitVector) -> Result<Vec<f64>> {
    same_dim(x, pole)?;
    let (xs, p) = (x.as_slice(), pole.as_slice());
    let gap = crate::sphere::norm(&xs.iter().zip(p).map(|(a, b)| a - b).collect::<Vec<_>>());
    if gap <= 1e-10 {
        return Err(Error::AtPole { gap });
    }
    // 1 - xᵀp = ½‖x - p‖², exact for unit vectors
    let denom = 0.5 * gap * gap;
    let basis = tangent_basis(pole);
    Ok(basis.iter().map(|b| dot(b, xs) / denom).collect())
}

/// Orthonormal basis of `pole^⊥` from a Householder reflection.
pub fn tangent_basis(pole: &UnitVector) -> Vec<Vec<f64>> {
    let p = pole.as_slice();
    let d = p.len();
    // v = e_1 + s·p with s = sign(p_1), so |v|² = 2 + 2|p_1| >= 2
    let s = if p[0] > 0.0 { 1.0 } else { -1.0 };
    let mut v: Vec<f64> = p.iter().map(|x| s * x).collect();
    v[0] += 1.0;
    let vv = dot(&v, &v);
    (1..d)
        .map(|j| {
            // H e_j = e_j - 2 v v_j / vᵀv
            let f = 2.0 * v[j] / vv;
            let mut col: Vec<f64> = v.iter().map(|vi| -f * vi).collect();
            col[j] += 1.0;
            col
        })
        .collect()
}
