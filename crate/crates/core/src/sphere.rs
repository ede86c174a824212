//! Unit-sphere primitives: normalization, uniform sampling, the Möbius
//! transformation and great-circle interpolation.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{check_dim, check_rho, Error, Result};

/// Norms at or below this are treated as zero.
const ZERO_NORM: f64 = 1e-300;

/// Outputs whose norm drifts from 1 by more than this are renormalized.
pub(crate) const RENORM_TOL: f64 = 1e-12;

const MAX_RESAMPLE: usize = 16;

/// A point on the unit sphere `S^{d-1}` embedded in `R^d`, `d >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Normalizes `v`. Fails on (near-)zero input or `len < 2`.
    pub fn normalize(v: &[f64]) -> Result<Self> {
        check_dim(v.len())?;
        let norm = norm(v);
        if norm.is_nan() || norm <= ZERO_NORM || norm.is_infinite() {
            return Err(Error::ZeroVector { norm });
        }
        Ok(Self(v.iter().map(|x| x / norm).collect()))
    }

    /// The `i`-th canonical basis vector of `R^d`.
    pub fn axis(d: usize, i: usize) -> Result<Self> {
        check_dim(d)?;
        if i >= d {
            return Err(Error::DimensionMismatch {
                left: i + 1,
                right: d,
            });
        }
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        Ok(Self(v))
    }

    /// `UnitVector::axis(d, 0)`, the conventional "north pole".
    pub fn north(d: usize) -> Result<Self> {
        Self::axis(d, 0)
    }

    /// Wraps coordinates that are already unit length, renormalizing if the
    /// norm has drifted beyond round-off.
    pub(crate) fn from_raw(mut v: Vec<f64>) -> Self {
        let n = norm(&v);
        if (n - 1.0).abs() > RENORM_TOL {
            v.iter_mut().for_each(|x| *x /= n);
        }
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &UnitVector) -> Result<f64> {
        same_dim(self, other)?;
        Ok(dot(&self.0, &other.0))
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    // Scaled to avoid overflow/underflow of the squared sum.
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

pub(crate) fn same_dim(a: &UnitVector, b: &UnitVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// Draws a point uniformly on `S^{d-1}` by normalizing a standard Gaussian
/// vector.
pub fn sample_uniform_sphere<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<UnitVector> {
    check_dim(d)?;
    let mut v = vec![0.0; d];
    let mut last = 0.0;
    for _ in 0..MAX_RESAMPLE {
        v.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
        match UnitVector::normalize(&v) {
            Ok(u) => return Ok(u),
            Err(Error::ZeroVector { norm }) => last = norm,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ZeroVector { norm: last })
}

/// Möbius transformation of the sphere that pushes the uniform law to the
/// spherical Cauchy law with mode `mu` and concentration `rho`:
///
/// ```text
/// Y = (1 - ρ²)(x + ρμ) / (1 + 2ρ xᵀμ + ρ²) + ρμ
/// ```
///
/// `rho = 0` returns `x` unchanged; `x = ±mu` are fixed points.
pub fn moebius_transform(x: &UnitVector, mu: &UnitVector, rho: f64) -> Result<UnitVector> {
    same_dim(x, mu)?;
    check_rho(rho)?;
    let c = dot(&x.0, &mu.0);
    let scale = (1.0 - rho * rho) / (1.0 + 2.0 * rho * c + rho * rho);
    let y =
        x.0.iter()
            .zip(&mu.0)
            .map(|(&xi, &mi)| scale * (xi + rho * mi) + rho * mi)
            .collect();
    Ok(UnitVector::from_raw(y))
}

/// Spherical linear interpolation from `a` (t = 0) to `b` (t = 1) along the
/// shorter great circle, at constant angular speed.
pub fn geodesic_interpolate(a: &UnitVector, b: &UnitVector, t: f64) -> Result<UnitVector> {
    same_dim(a, b)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInterpolation { t });
    }
    let sum: Vec<f64> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
    let diff: Vec<f64> = a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect();
    let (plus, minus) = (norm(&sum), norm(&diff));
    if plus <= 1e-8 {
        return Err(Error::AntipodalEndpoints { gap: plus });
    }
    let angle = 2.0 * minus.atan2(plus);
    let (wa, wb) = if angle < 1e-12 {
        (1.0 - t, t)
    } else {
        let s = angle.sin();
        (((1.0 - t) * angle).sin() / s, (t * angle).sin() / s)
    };
    let y = a.0.iter().zip(&b.0).map(|(x, y)| wa * x + wb * y).collect();
    Ok(UnitVector::from_raw(y))
}
