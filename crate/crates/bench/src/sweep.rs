//! Worst-case error of the hybrid rule against the reference, per dimension.

use rayon::prelude::*;
use serde::Serialize;

use spcauchy_core::kl::{kl_hybrid, rho_of_z};
use spcauchy_core::oracles::kl_reference;

/// Grid points in `z`, from 0 to [`Z_MAX`] inclusive.
pub const GRID_POINTS: usize = 1000;
pub const Z_MAX: f64 = 0.9999;
const GOLDEN_ITERS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorSweepRow {
    pub d: usize,
    pub max_abs_kl_error: f64,
    pub argmax_z: f64,
    /// Points dropped because the reference was unresolved.
    pub excluded: usize,
}

/// `|reference - hybrid|` at `z`, or `None` if the reference is unresolved.
pub fn hybrid_error(d: usize, z: f64) -> Option<f64> {
    let rho = rho_of_z(z).ok()?;
    let reference = kl_reference(d, rho).ok()?;
    let hybrid = kl_hybrid(d, rho).ok()?.value;
    Some((reference - hybrid).abs())
}

/// Maximizes [`hybrid_error`] over `z ∈ [0, 0.9999]` for each `d` in
/// `d_min..=d_max`: dense grid, then golden-section refinement between the
/// neighbours of the best grid point.
pub fn run_error_sweep(d_min: usize, d_max: usize) -> Vec<ErrorSweepRow> {
    (d_min.max(2)..=d_max)
        .into_par_iter()
        .map(sweep_one)
        .collect()
}

fn sweep_one(d: usize) -> ErrorSweepRow {
    let step = Z_MAX / (GRID_POINTS - 1) as f64;
    let mut excluded = 0;
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..GRID_POINTS {
        match hybrid_error(d, i as f64 * step) {
            Some(e) if e > best => {
                best = e;
                best_i = i;
            }
            Some(_) => {}
            None => excluded += 1,
        }
    }
    let lo = best_i.saturating_sub(1) as f64 * step;
    let hi = ((best_i + 1).min(GRID_POINTS - 1) as f64 * step).min(Z_MAX);
    let (z, e) = golden_max(|z| hybrid_error(d, z).unwrap_or(f64::NEG_INFINITY), lo, hi);
    let (argmax_z, max_abs_kl_error) = if e > best {
        (z, e)
    } else {
        (best_i as f64 * step, best)
    };
    ErrorSweepRow {
        d,
        max_abs_kl_error,
        argmax_z,
        excluded,
    }
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut e = a + g * (b - a);
    let (mut fc, mut fe) = (f(c), f(e));
    for _ in 0..GOLDEN_ITERS {
        if fc > fe {
            b = e;
            e = c;
            fe = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + g * (b - a);
            fe = f(e);
        }
    }
    if fc > fe {
        (c, fc)
    } else {
        (e, fe)
    }
}
