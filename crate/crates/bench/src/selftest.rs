//! Quick invariant suite behind `spcauchy selftest`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use spcauchy_core::kl::{
    bracket_width, dkl_drho, h_bracket, j_closed_low_d, kl_quadrature, kl_series, z_of_rho,
    DEFAULT_NODES,
};
use spcauchy_core::oracles::{
    h_reference, integrate_adaptive, j_integrand, kl_reference, ks_test_cosine,
};
use spcauchy_core::{kappa_of_rho, rho_match, SeriesOptions, SpCauchy, UnitVector};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<String, String>;

const CHECKS: [(&str, Check); 8] = [
    ("evaluator_agreement", evaluator_agreement),
    ("closed_forms", closed_forms),
    ("bracket", bracket),
    ("monotone_in_z", monotone_in_z),
    ("gradient", gradient),
    ("matching_round_trip", matching_round_trip),
    ("sampler_unit_norm", sampler_unit_norm),
    ("sampler_marginal", sampler_marginal),
];

/// Runs every check; a check that panics or errors counts as failed.
pub fn run_selftest() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, check)| {
            let (passed, detail) = match std::panic::catch_unwind(check) {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(_) => (false, "panicked".to_string()),
            };
            CheckOutcome {
                name,
                passed,
                detail,
            }
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

fn evaluator_agreement() -> Result<String, String> {
    let mut worst = 0.0f64;
    for d in [2, 3, 8, 64] {
        for rho in [0.0, 0.25, 0.75, 0.9] {
            let r = kl_reference(d, rho).map_err(|e| e.to_string())?;
            let s = kl_series(d, rho, SeriesOptions::default())
                .map_err(|e| e.to_string())?
                .value;
            let q = kl_quadrature(d, rho, DEFAULT_NODES)
                .map_err(|e| e.to_string())?
                .value;
            worst = worst.max(rel(s, r)).max(rel(q, r));
        }
    }
    (worst < 1e-8)
        .then(|| format!("max rel err {worst:.2e}"))
        .ok_or(format!("max rel err {worst:.2e} >= 1e-8"))
}

fn closed_forms() -> Result<String, String> {
    let mut worst = 0.0f64;
    for d in 2..=5 {
        for z in [0.1, 0.5, 0.9] {
            let c = j_closed_low_d(d, z).map_err(|e| e.to_string())?;
            let q = integrate_adaptive(|t| j_integrand(d, z, t), 0.0, 1.0, 1e-13)
                .map_err(|e| e.to_string())?;
            worst = worst.max((c - q).abs());
        }
    }
    (worst < 1e-10)
        .then(|| format!("max abs err {worst:.2e}"))
        .ok_or(format!("max abs err {worst:.2e} >= 1e-10"))
}

fn bracket() -> Result<String, String> {
    for d in [2, 5, 32, 512] {
        for rho in [0.0, 0.5, 0.95] {
            let z = z_of_rho(rho).map_err(|e| e.to_string())?;
            let b = h_bracket(d, z).map_err(|e| e.to_string())?;
            let h = h_reference(d, rho).map_err(|e| e.to_string())?;
            if !b.contains(h, 1e-12) {
                return Err(format!(
                    "d={d} rho={rho}: H={h} outside [{}, {}]",
                    b.lo, b.hi
                ));
            }
        }
    }
    let w = bracket_width(3).map_err(|e| e.to_string())?;
    Ok(format!("w_3 = {w:.6}"))
}

fn monotone_in_z() -> Result<String, String> {
    for d in [2, 8] {
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let rho = 0.98 * i as f64 / 49.0;
            let h = h_reference(d, rho).map_err(|e| e.to_string())?;
            if h >= prev {
                return Err(format!("H_{d} not decreasing at rho={rho}"));
            }
            prev = h;
        }
    }
    Ok("H_d decreasing".into())
}

fn gradient() -> Result<String, String> {
    let mut worst = 0.0f64;
    for d in [3, 32] {
        for rho in [0.1, 0.9] {
            let g = dkl_drho(d, rho, DEFAULT_NODES).map_err(|e| e.to_string())?;
            let h = 1e-5;
            let fd = (kl_reference(d, rho + h).map_err(|e| e.to_string())?
                - kl_reference(d, rho - h).map_err(|e| e.to_string())?)
                / (2.0 * h);
            worst = worst.max(rel(g, fd));
        }
    }
    (worst < 1e-5)
        .then(|| format!("max rel err {worst:.2e}"))
        .ok_or(format!("max rel err {worst:.2e} >= 1e-5"))
}

fn matching_round_trip() -> Result<String, String> {
    for d in [2, 9, 300] {
        for kappa in [1e-9, 0.5, 10.0, 1e6] {
            let rho = rho_match(d, kappa).map_err(|e| e.to_string())?;
            let back = kappa_of_rho(d, rho).map_err(|e| e.to_string())?;
            if rel(back, kappa) > 1e-9 {
                return Err(format!("d={d} kappa={kappa}: round trip {back}"));
            }
        }
    }
    Ok("kappa -> rho -> kappa".into())
}

fn sampler_unit_norm() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mu = UnitVector::normalize(&[1.0, -2.0, 0.5, 3.0]).map_err(|e| e.to_string())?;
    let q = SpCauchy::new(mu, 0.97).map_err(|e| e.to_string())?;
    for _ in 0..2000 {
        let x = q.sample(&mut rng).map_err(|e| e.to_string())?;
        if (x.norm() - 1.0).abs() > 1e-12 {
            return Err(format!("norm {}", x.norm()));
        }
    }
    Ok("2000 draws on the sphere".into())
}

fn sampler_marginal() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let q = SpCauchy::new(UnitVector::north(5).map_err(|e| e.to_string())?, 0.6)
        .map_err(|e| e.to_string())?;
    let (stat, p) = ks_test_cosine(&q, 20_000, &mut rng).map_err(|e| e.to_string())?;
    (p > 0.001)
        .then(|| format!("KS D={stat:.4} p={p:.3}"))
        .ok_or(format!("KS D={stat:.4} p={p:.2e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_selftest() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
