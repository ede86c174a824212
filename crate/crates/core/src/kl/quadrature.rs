//! Gauss-Legendre evaluator of the integral representation
//!
//! ```text
//! KL = (d-1) log((1-ρ)/(1+ρ))
//!    + (d-1) ∫_0^1 t^{d-2}/(1-t) · [1 - ((1-ρ)²/((1+ρ)² - 4ρt))^{(d-1)/2}] dt
//! ```
//!
//! With `u = 1 - t`, `a = z/(1-z)` and `δ = (d-1)/2` the integral is
//!
//! ```text
//! J_d = ∫_0^1 (1-u)^{d-2} · g(u)/u du,   g(u) = 1 - (1 + a·u)^{-δ}
//! ```
//!
//! which is smooth but has two sharp features near `u = 0` as `d` and `ρ`
//! grow: `(1-u)^{d-2}` switches on at `u ≈ 1/d` and `g` switches off at
//! `u ≈ 1/(δa)`. In `y = -log u` both become O(1)-wide transitions, so the
//! bulk of the integral is taken on `y`-panels and only the thin tail
//! `u ∈ [0, u₁]`, where `g(u)/u` is nearly linear, is integrated in `u`.
//! The removable singularity at `t = 1` never meets a node: on the tail
//! panel `g(u)/u` is evaluated with `expm1`/`ln_1p`, which stay accurate as
//! `u → 0` and reproduce the `δ·a` limit.

use super::{half_log_one_minus_z, one_minus_z, z_of_rho, KlMethod, KlResult};
use crate::error::{check_dim, check_rho, Error, Result};
use crate::gauss_legendre::GaussLegendre;
use crate::special::CompensatedSum;

pub const DEFAULT_NODES: usize = 64;
pub const MIN_NODES: usize = 8;

/// `(1-e^{-y})^{d-2}` is below `e^{-45}` left of `log((d-2)/45)`.
const LEFT_CUTOFF: f64 = 45.0;

/// Splits `nodes` into panels of equal order: `(order, panels)`, the last
/// panel being the `u`-tail.
fn layout(nodes: usize) -> (usize, usize) {
    let order = if nodes >= 32 { 16 } else { nodes / 2 };
    (order, nodes / order)
}

/// Panel geometry shared by the value and derivative integrals.
struct Panels {
    d: usize,
    y_min: f64,
    y_max: f64,
    u_tail: f64,
}

impl Panels {
    fn new(d: usize, a: f64) -> Self {
        let delta = 0.5 * (d - 1) as f64;
        let df = d as f64;
        let y_min = if d > 2 {
            ((df - 2.0) / LEFT_CUTOFF).ln().max(0.0)
        } else {
            0.0
        };
        let y_max = ((delta * a).ln() + 3.0).max(df.ln() + 4.0);
        Self {
            d,
            y_min,
            y_max,
            u_tail: (-y_max).exp(),
        }
    }

    /// `log (1-u)^{d-2}`.
    fn log_weight(&self, u: f64) -> f64 {
        if self.d == 2 {
            0.0
        } else {
            (self.d - 2) as f64 * (-u).ln_1p()
        }
    }

    /// `∫_0^1 (1-u)^{d-2} h(u) du` where `h` is supplied as `u·h(u)` on the
    /// `y`-panels and as `h(u)` on the tail panel.
    fn integrate(
        &self,
        nodes: usize,
        compensated: bool,
        u_times_h: impl Fn(f64) -> f64,
        h: impl Fn(f64) -> f64,
    ) -> f64 {
        let (order, panels) = layout(nodes);
        let rule = GaussLegendre::cached(order);
        let mut acc = Accumulator::new(compensated);

        let main = panels - 1;
        let width = (self.y_max - self.y_min) / main as f64;
        for p in 0..main {
            let lo = self.y_min + p as f64 * width;
            let half = 0.5 * width;
            let mid = lo + half;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let y = mid + half * x;
                let u = (-y).exp();
                acc.add(half * w * (self.log_weight(u).exp() * u_times_h(u)));
            }
        }
        let half = 0.5 * self.u_tail;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let u = half * (x + 1.0);
            acc.add(half * w * (self.log_weight(u).exp() * h(u)));
        }
        acc.value()
    }
}

enum Accumulator {
    Plain(f64),
    Compensated(CompensatedSum),
}

impl Accumulator {
    fn new(compensated: bool) -> Self {
        if compensated {
            Accumulator::Compensated(CompensatedSum::default())
        } else {
            Accumulator::Plain(0.0)
        }
    }

    fn add(&mut self, x: f64) {
        match self {
            Accumulator::Plain(s) => *s += x,
            Accumulator::Compensated(s) => s.add(x),
        }
    }

    fn value(&self) -> f64 {
        match self {
            Accumulator::Plain(s) => *s,
            Accumulator::Compensated(s) => s.value(),
        }
    }
}

fn check_nodes(nodes: usize) -> Result<()> {
    if nodes < MIN_NODES {
        return Err(Error::NodeCountTooSmall {
            nodes,
            min: MIN_NODES,
        });
    }
    Ok(())
}

/// Nodes actually used for a requested budget.
fn nodes_used(nodes: usize) -> usize {
    let (order, panels) = layout(nodes);
    order * panels
}

fn j_integral(d: usize, rho: f64, nodes: usize, compensated: bool) -> Result<f64> {
    check_dim(d)?;
    check_nodes(nodes)?;
    let z = z_of_rho(rho)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    let a = z / one_minus_z(rho)?;
    let delta = 0.5 * (d - 1) as f64;
    let panels = Panels::new(d, a);
    // g(u) = 1 - (1 + a u)^{-δ}
    let g = |u: f64| -(-delta * (a * u).ln_1p()).exp_m1();
    Ok(panels.integrate(nodes, compensated, g, |u| g(u) / u))
}

/// `J_d(z(ρ))` by composite Gauss-Legendre with `nodes` total nodes.
pub fn j_quadrature(d: usize, rho: f64, nodes: usize) -> Result<f64> {
    j_integral(d, rho, nodes, false)
}

/// As [`j_quadrature`] with compensated accumulation.
#[cfg(any(test, feature = "oracles"))]
pub(crate) fn j_quadrature_compensated(d: usize, rho: f64, nodes: usize) -> Result<f64> {
    j_integral(d, rho, nodes, true)
}

pub fn kl_quadrature(d: usize, rho: f64, nodes: usize) -> Result<KlResult> {
    let j = j_quadrature(d, rho, nodes)?;
    let value = if rho == 0.0 {
        0.0
    } else {
        (d - 1) as f64 * (j + half_log_one_minus_z(rho))
    };
    Ok(KlResult {
        value,
        method: KlMethod::Quadrature,
        terms_or_nodes: nodes_used(nodes),
        converged: true,
    })
}

/// `d KL / d ρ`.
///
/// Differentiating the integral under the sign gives
/// `J_d'(z) = δ (1-z)^{δ-1} ∫_0^1 t^{2δ-1} (1-zt)^{-(δ+1)} dt`, which in the
/// `u` variable is `δ/(1-z)² · ∫_0^1 (1-u)^{d-2} (1+au)^{-(δ+1)} du`. With
/// `dz/dρ = 4(1-ρ)/(1+ρ)³` and `d/dρ log((1-ρ)/(1+ρ)) = -2/(1-ρ²)`:
///
/// ```text
/// dKL/dρ = (d-1) · [ 4δ (1+ρ)/(1-ρ)³ · I - 2/(1-ρ²) ]
/// ```
pub fn dkl_drho(d: usize, rho: f64, nodes: usize) -> Result<f64> {
    check_dim(d)?;
    check_rho(rho)?;
    check_nodes(nodes)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    let z = z_of_rho(rho)?;
    let a = z / one_minus_z(rho)?;
    let delta = 0.5 * (d - 1) as f64;
    let panels = Panels::new(d, a);
    let h = |u: f64| (-(delta + 1.0) * (a * u).ln_1p()).exp();
    let integral = panels.integrate(nodes, false, |u| u * h(u), h);
    let omr = 1.0 - rho;
    let slope = 4.0 * delta * (1.0 + rho) / (omr * omr * omr) * integral
        - 2.0 / ((1.0 - rho) * (1.0 + rho));
    Ok((d - 1) as f64 * slope)
}
