//! Latent-step timing and robustness grids.
//!
//! There is no autodiff here. The "backward" phase of a latent step is a
//! fixed-size central-difference probe of the loss with respect to `ρ` and
//! a few coordinates of the unnormalized mean direction. It costs the same
//! for every method and surfaces NaN/Inf the same way a real backward pass
//! would.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use spcauchy_core::oracles::shard_seed;
use spcauchy_core::sphere::{moebius_transform, sample_uniform_sphere};
use spcauchy_core::{kl, rho_match, KlMethod, UnitVector};

/// Dimensions of the latent-step sweep.
pub const LATENT_STEP_DIMS: [usize; 9] = [8, 16, 32, 64, 128, 256, 512, 1024, 2048];
/// vMF concentration the latent step is matched to.
pub const LATENT_STEP_KAPPA: f64 = 10.0;
pub const GRID_DIMS: [usize; 13] = [2, 3, 4, 5, 8, 16, 32, 64, 128, 256, 512, 1024, 2048];
pub const GRID_RHOS: [f64; 10] = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.98, 0.99, 0.995];
/// Methods expected to survive the full grid.
pub const GRID_METHODS: [KlMethod; 4] = [
    KlMethod::Series,
    KlMethod::Quadrature,
    KlMethod::Combined,
    KlMethod::Hybrid,
];

/// Probe size of the finite-difference gradient.
const PROBE_ITEMS: usize = 4;
const PROBE_COORDS: usize = 2;
const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchConfig {
    pub dims: Vec<usize>,
    pub rhos: Vec<f64>,
    pub batch: usize,
    pub warmup_iters: usize,
    pub measured_iters: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            dims: LATENT_STEP_DIMS.to_vec(),
            rhos: GRID_RHOS.to_vec(),
            batch: 128,
            warmup_iters: 10,
            measured_iters: 50,
            seed: 0,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.batch == 0 {
            return Err("batch must be >= 1".into());
        }
        if self.measured_iters == 0 {
            return Err("measured_iters must be >= 1".into());
        }
        if self.dims.iter().any(|&d| d < 2) {
            return Err("every dimension must be >= 2".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    None,
    Nan,
    Inf,
    Error,
}

impl FailureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureKind::None => "none",
            FailureKind::Nan => "nan",
            FailureKind::Inf => "inf",
            FailureKind::Error => "error",
        }
    }

    fn of(x: f64) -> Self {
        if x.is_nan() {
            FailureKind::Nan
        } else if x.is_infinite() {
            FailureKind::Inf
        } else {
            FailureKind::None
        }
    }

    /// First failure wins.
    fn or(self, other: FailureKind) -> Self {
        if self == FailureKind::None {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub method: KlMethod,
    pub d: usize,
    pub rho_or_kappa: f64,
    pub forward_seconds: f64,
    pub backward_or_grad_seconds: f64,
    pub total_seconds: f64,
    pub succeeded: bool,
    pub failure_kind: FailureKind,
}

impl BenchRecord {
    fn new(method: KlMethod, d: usize, rho: f64, fwd: f64, bwd: f64, failure: FailureKind) -> Self {
        Self {
            method,
            d,
            rho_or_kappa: rho,
            forward_seconds: fwd,
            backward_or_grad_seconds: bwd,
            total_seconds: fwd + bwd,
            succeeded: failure == FailureKind::None,
            failure_kind: failure,
        }
    }
}

/// One batch item: unnormalized direction and the uniform draw pushed
/// through the Möbius map.
struct Item {
    v: Vec<f64>,
    x: UnitVector,
}

/// `Σ z + KL` for one item, the per-row share of the dummy loss.
fn item_loss(v: &[f64], x: &UnitVector, d: usize, rho: f64, method: KlMethod) -> Result<f64, ()> {
    let mu = UnitVector::normalize(v).map_err(|_| ())?;
    let z = moebius_transform(x, &mu, rho).map_err(|_| ())?;
    let k = kl(d, rho, method).map_err(|_| ())?.value;
    Ok(z.as_slice().iter().sum::<f64>() + k)
}

/// Central difference, falling back to one-sided steps at the ends of
/// `[0, 1)`.
fn fd_rho(f: impl Fn(f64) -> Result<f64, ()>, rho: f64) -> Result<f64, ()> {
    let h = FD_STEP;
    if rho - h >= 0.0 && rho + h < 1.0 {
        Ok((f(rho + h)? - f(rho - h)?) / (2.0 * h))
    } else if rho + h < 1.0 {
        Ok((f(rho + h)? - f(rho)?) / h)
    } else {
        Ok((f(rho)? - f(rho - h)?) / h)
    }
}

/// Finite-difference gradient probe: `∂L/∂ρ` and `∂L/∂v_j` for the first
/// few items and coordinates. Returns the first non-finite failure seen.
fn gradient_probe(items: &[Item], d: usize, rho: f64, method: KlMethod) -> FailureKind {
    let mut failure = FailureKind::None;
    for item in items.iter().take(PROBE_ITEMS) {
        let g = fd_rho(|r| item_loss(&item.v, &item.x, d, r, method), rho);
        failure = failure.or(g.map_or(FailureKind::Error, FailureKind::of));
        for j in 0..PROBE_COORDS.min(d) {
            let mut vp = item.v.clone();
            let mut vm = item.v.clone();
            vp[j] += FD_STEP;
            vm[j] -= FD_STEP;
            let g = item_loss(&vp, &item.x, d, rho, method).and_then(|a| {
                item_loss(&vm, &item.x, d, rho, method).map(|b| (a - b) / (2.0 * FD_STEP))
            });
            failure = failure.or(g.map_or(FailureKind::Error, FailureKind::of));
        }
    }
    failure
}

/// Forward phase: draw directions, sample, evaluate the KL of every row and
/// form the loss. Returns the items (for the probe) and the loss status.
fn forward(
    d: usize,
    rho: f64,
    batch: usize,
    method: KlMethod,
    rng: &mut ChaCha8Rng,
) -> (Vec<Item>, FailureKind) {
    let mut items = Vec::with_capacity(batch);
    let mut loss = 0.0;
    for _ in 0..batch {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let x = match sample_uniform_sphere(d, rng) {
            Ok(x) => x,
            Err(_) => return (items, FailureKind::Error),
        };
        match item_loss(&v, &x, d, rho, method) {
            Ok(l) => loss += l,
            Err(()) => return (items, FailureKind::Error),
        }
        items.push(Item { v, x });
    }
    (items, FailureKind::of(loss))
}

/// Times the latent step for each dimension of `config.dims` at the
/// concentration matched to `κ = 10`. One record per dimension; timings are
/// means over the measured iterations.
pub fn run_latent_step_bench(config: &BenchConfig, method: KlMethod) -> Vec<BenchRecord> {
    config
        .dims
        .iter()
        .map(|&d| {
            let rho = match rho_match(d, LATENT_STEP_KAPPA) {
                Ok(r) => r,
                Err(_) => {
                    return BenchRecord::new(method, d, f64::NAN, 0.0, 0.0, FailureKind::Error)
                }
            };
            latent_step(config, method, d, rho)
        })
        .collect()
}

fn latent_step(config: &BenchConfig, method: KlMethod, d: usize, rho: f64) -> BenchRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(config.seed, d, rho, method));
    let mut failure = FailureKind::None;
    let (mut fwd, mut bwd) = (0.0, 0.0);
    for it in 0..config.warmup_iters + config.measured_iters {
        let t0 = Instant::now();
        let (items, f) = forward(d, rho, config.batch, method, &mut rng);
        let t1 = Instant::now();
        let g = if f == FailureKind::None {
            gradient_probe(&items, d, rho, method)
        } else {
            FailureKind::None
        };
        let t2 = Instant::now();
        failure = failure.or(f).or(g);
        if it >= config.warmup_iters {
            fwd += (t1 - t0).as_secs_f64();
            bwd += (t2 - t1).as_secs_f64();
        }
    }
    let n = config.measured_iters as f64;
    BenchRecord::new(method, d, rho, fwd / n, bwd / n, failure)
}

/// Deterministic per-cell seed from `(seed, d, ρ, method)`.
pub fn cell_seed(seed: u64, d: usize, rho: f64, method: KlMethod) -> u64 {
    let tag = (d as u64) ^ rho.to_bits().rotate_left(17) ^ ((method as u64) << 56);
    shard_seed(seed, tag)
}

/// Evaluates every method on every `(d, ρ)` cell: the KL value and a
/// finite-difference derivative in `ρ` must both be finite. Cells run in
/// parallel; output is sorted by `(method, d, ρ)`.
pub fn run_robustness_grid(dims: &[usize], rhos: &[f64], methods: &[KlMethod]) -> Vec<BenchRecord> {
    let cells: Vec<(KlMethod, usize, f64)> = methods
        .iter()
        .flat_map(|&m| {
            dims.iter()
                .flat_map(move |&d| rhos.iter().map(move |&r| (m, d, r)))
        })
        .collect();
    let mut out: Vec<BenchRecord> = cells
        .par_iter()
        .map(|&(method, d, rho)| grid_cell(method, d, rho))
        .collect();
    out.sort_by(|a, b| {
        (a.method, a.d)
            .cmp(&(b.method, b.d))
            .then(a.rho_or_kappa.total_cmp(&b.rho_or_kappa))
    });
    out
}

fn grid_cell(method: KlMethod, d: usize, rho: f64) -> BenchRecord {
    let t0 = Instant::now();
    let value = kl(d, rho, method);
    let t1 = Instant::now();
    let failure = match value {
        Err(_) => FailureKind::Error,
        Ok(r) => FailureKind::of(r.value),
    };
    let grad = if failure == FailureKind::None {
        fd_rho(|r| kl(d, r, method).map(|k| k.value).map_err(|_| ()), rho)
            .map_or(FailureKind::Error, FailureKind::of)
    } else {
        FailureKind::None
    };
    let t2 = Instant::now();
    BenchRecord::new(
        method,
        d,
        rho,
        (t1 - t0).as_secs_f64(),
        (t2 - t1).as_secs_f64(),
        failure.or(grad),
    )
}

/// `(succeeded, total)` per method, in first-seen order.
pub fn success_counts(records: &[BenchRecord]) -> Vec<(KlMethod, usize, usize)> {
    let mut out: Vec<(KlMethod, usize, usize)> = Vec::new();
    for r in records {
        match out.iter_mut().find(|(m, _, _)| *m == r.method) {
            Some(e) => {
                e.1 += usize::from(r.succeeded);
                e.2 += 1;
            }
            None => out.push((r.method, usize::from(r.succeeded), 1)),
        }
    }
    out
}

/// Mean `total_seconds` of a record set.
pub fn mean_total_seconds(records: &[BenchRecord]) -> f64 {
    records.iter().map(|r| r.total_seconds).sum::<f64>() / records.len().max(1) as f64
}
