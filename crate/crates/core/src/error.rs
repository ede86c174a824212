use thiserror::Error;

/// Errors raised by the distribution, geometry and KL routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector norm {norm:e} is too small to normalize")]
    ZeroVector { norm: f64 },

    #[error("dimension {d} is invalid: {reason}")]
    InvalidDimension { d: usize, reason: &'static str },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("concentration rho = {rho} must satisfy 0 <= rho < 1")]
    InvalidConcentration { rho: f64 },

    #[error("z = {z} must satisfy 0 <= z < 1")]
    InvalidZ { z: f64 },

    #[error("kappa = {kappa} must be finite and > 0")]
    InvalidKappa { kappa: f64 },

    #[error("interpolation parameter t = {t} must lie in [0, 1]")]
    InvalidInterpolation { t: f64 },

    #[error("endpoints are antipodal (|a + b| = {gap:e}); the geodesic is not unique")]
    AntipodalEndpoints { gap: f64 },

    #[error("point coincides with the projection pole (|x - pole| = {gap:e})")]
    AtPole { gap: f64 },

    #[error("digamma argument {x} must be > 0")]
    NonPositiveArgument { x: f64 },

    #[error("quadrature needs at least {min} nodes, got {nodes}")]
    NodeCountTooSmall { nodes: usize, min: usize },

    #[error("closed forms exist only for d in 2..=5, got d = {d}")]
    UnsupportedDimension { d: usize },

    #[error("sample count {n} is below the minimum {min}")]
    TooFewSamples { n: usize, min: usize },

    #[error("adaptive integration exceeded max depth {depth} on [{a}, {b}]")]
    MaxDepthExceeded { depth: usize, a: f64, b: f64 },

    #[error(
        "reference disagreement at d = {d}, rho = {rho}: quadrature {quadrature} vs series {series}"
    )]
    ReferenceDisagreement {
        d: usize,
        rho: f64,
        quadrature: f64,
        series: f64,
    },

    #[error("unknown KL method '{name}'; valid names: {valid}")]
    UnknownMethod { name: String, valid: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension {
            d,
            reason: "need d >= 2",
        });
    }
    Ok(())
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidConcentration { rho });
    }
    Ok(())
}

pub(crate) fn check_z(z: f64) -> Result<()> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::InvalidZ { z });
    }
    Ok(())
}
