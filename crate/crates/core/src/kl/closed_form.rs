//! Elementary closed forms of `J_d(z)` for `d = 2, 3, 4, 5`.

use super::{half_log_one_minus_z, one_minus_z, z_of_rho, KlMethod, KlResult};
use crate::error::{check_dim, check_z, Error, Result};

/// Below this `z`, `J_3` and `J_5` are summed from their Maclaurin series;
/// the closed forms cancel catastrophically near 0 (`J_5` has a `2/z²` term).
const SERIES_BELOW: f64 = 0.25;

/// `J_d(z)` for `d` in `2..=5`.
///
/// ```text
/// J_2 = 2 log((1+s)/(2s))                 s = √(1-z)
/// J_3 = -1 - log(1-z)/z
/// J_4 = J_2 + (1-s)² / (2(1+s)²)
/// J_5 = 2/z² - 2/z - 5/6 + (2-3z)/z³ · log(1-z)
/// ```
pub fn j_closed_low_d(d: usize, z: f64) -> Result<f64> {
    check_z(z)?;
    if !(2..=5).contains(&d) {
        return Err(Error::UnsupportedDimension { d });
    }
    Ok(j_low_d(d, z, 1.0 - z))
}

/// Exact KL for `d` in `2..=5` via the closed forms.
pub fn kl_closed_low_d(d: usize, rho: f64) -> Result<KlResult> {
    check_dim(d)?;
    if d > 5 {
        return Err(Error::UnsupportedDimension { d });
    }
    let value = kl_low_d(d, rho)?;
    Ok(KlResult::closed(value, KlMethod::ClosedFormLowD))
}

/// `(d-1)(J_d(z) + log((1-ρ)/(1+ρ)))` with `1-z` taken from `ρ` directly.
pub(crate) fn kl_low_d(d: usize, rho: f64) -> Result<f64> {
    let z = z_of_rho(rho)?;
    let omz = one_minus_z(rho)?;
    let j = j_low_d(d, z, omz);
    Ok((d - 1) as f64 * (j + half_log_one_minus_z(rho)))
}

/// `d` must be in `2..=5`; `omz = 1 - z` supplied by the caller.
pub(crate) fn j_low_d(d: usize, z: f64, omz: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let s = omz.sqrt();
    match d {
        // 2 log(1 + (1-s)/(2s)) with 1 - s = z/(1+s)
        2 => 2.0 * (z / (2.0 * s * (1.0 + s))).ln_1p(),
        3 if z < SERIES_BELOW => maclaurin(z, |m| 1.0 / (m + 1.0)),
        3 => -1.0 - omz.ln() / z,
        4 => {
            let r = z / ((1.0 + s) * (1.0 + s));
            j_low_d(2, z, omz) + 0.5 * r * r
        }
        5 if z < SERIES_BELOW => maclaurin(z, |m| (m + 5.0) / ((m + 2.0) * (m + 3.0))),
        5 => {
            let (z2, z3) = (z * z, z * z * z);
            2.0 / z2 - 2.0 / z - 5.0 / 6.0 + (2.0 - 3.0 * z) / z3 * omz.ln()
        }
        _ => unreachable!("closed forms cover d = 2..=5"),
    }
}

/// `Σ_{m≥1} coef(m) z^m`, summed until terms stop registering.
fn maclaurin(z: f64, coef: impl Fn(f64) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut zm = 1.0;
    for m in 1..200 {
        zm *= z;
        let term = coef(m as f64) * zm;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}
