//! The spherical Cauchy distribution on `S^{d-1}`: density, reparameterized
//! sampling, the family of KL-to-uniform evaluators and concentration
//! matching with von Mises-Fisher.
//!
//! ```
//! use spcauchy_core::{kl, KlMethod, SpCauchy, UnitVector};
//!
//! let q = SpCauchy::new(UnitVector::north(3)?, 0.5)?;
//! let x = UnitVector::axis(3, 1)?;
//! assert!((q.log_density(&x)? - 2.0 * 0.6f64.ln()).abs() < 1e-12);
//!
//! let r = kl(3, 0.5, KlMethod::ClosedFormLowD)?;
//! assert!((r.value - 0.746_530_721_670_274).abs() < 1e-12);
//! # Ok::<(), spcauchy_core::Error>(())
//! ```

pub mod dist;
pub mod error;
pub mod gauss_legendre;
pub mod kl;
#[cfg(any(test, feature = "oracles"))]
pub mod oracles;
pub mod special;
pub mod sphere;
pub mod vmf;

pub use dist::{marginal_angle_density, marginal_cos_density, stereographic_project, SpCauchy};
pub use error::{Error, Result};
pub use kl::{kl, Interval, KlMethod, KlResult, SeriesOptions};
pub use sphere::{geodesic_interpolate, moebius_transform, sample_uniform_sphere, UnitVector};
pub use vmf::{curvature_report, kappa_of_rho, rho_match, CurvatureReport, MatchedPair};
