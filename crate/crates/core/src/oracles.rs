//! Slow, independent reference implementations for tests and sweeps.
//!
//! Nothing in the default library surface calls into this module. It is
//! compiled only for tests or with the `oracles` feature.

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::dist::{marginal_angle_density, SpCauchy};
use crate::error::{check_dim, check_rho, Error, Result};
use crate::kl::{half_log_one_minus_z, j_quadrature_compensated, kl_series, SeriesOptions};

/// Node budget of the reference quadrature.
pub const REFERENCE_NODES: usize = 512;
/// Above this `ρ` the reference is cross-checked against the long series.
pub const CROSS_CHECK_RHO: f64 = 0.99;
/// Relative disagreement that makes a reference point unresolved.
pub const CROSS_CHECK_TOL: f64 = 1e-9;
pub const MIN_MC_SAMPLES: usize = 1000;

/// Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

/// Welford accumulator, mergeable across shards.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        Moments {
            n,
            mean: self.mean + delta * nb / n as f64,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n as f64,
        }
    }

    fn estimate(self) -> McEstimate {
        let var = if self.n > 1 {
            self.m2 / (self.n - 1) as f64
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            stderr: (var / self.n as f64).sqrt(),
            n: self.n,
        }
    }
}

fn mc_moments<R: Rng + ?Sized>(dist: &SpCauchy, n: usize, rng: &mut R) -> Result<Moments> {
    let mut m = Moments::default();
    for _ in 0..n {
        let x = dist.sample(rng)?;
        m.push(dist.log_density(&x)?);
    }
    Ok(m)
}

/// Estimates `KL(q ‖ υ_d) = E_q[log q]` from `n >= 1000` reparameterized
/// draws.
pub fn kl_monte_carlo<R: Rng + ?Sized>(
    dist: &SpCauchy,
    n: usize,
    rng: &mut R,
) -> Result<McEstimate> {
    if n < MIN_MC_SAMPLES {
        return Err(Error::TooFewSamples {
            n,
            min: MIN_MC_SAMPLES,
        });
    }
    Ok(mc_moments(dist, n, rng)?.estimate())
}

/// [`kl_monte_carlo`] split over `shards` threads. Shard `i` draws from
/// `R::seed_from_u64(shard_seed(seed, i))`; the result depends on both
/// `seed` and `shards`.
pub fn kl_monte_carlo_sharded<R: Rng + SeedableRng>(
    dist: &SpCauchy,
    n: usize,
    seed: u64,
    shards: usize,
) -> Result<McEstimate> {
    if n < MIN_MC_SAMPLES {
        return Err(Error::TooFewSamples {
            n,
            min: MIN_MC_SAMPLES,
        });
    }
    let shards = shards.clamp(1, n);
    let parts: Vec<Result<Moments>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..shards)
            .map(|i| {
                let count = n / shards + usize::from(i < n % shards);
                s.spawn(move || {
                    let mut rng = R::seed_from_u64(shard_seed(seed, i as u64));
                    mc_moments(dist, count, &mut rng)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("Monte-Carlo shard panicked"))
            .collect()
    });
    let mut total = Moments::default();
    for p in parts {
        total = total.merge(p?);
    }
    Ok(total.estimate())
}

/// SplitMix64 of `seed + i`, so neighbouring shards get unrelated streams.
pub fn shard_seed(seed: u64, i: u64) -> u64 {
    let mut x = seed.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Highest-precision KL available: 512-node compensated quadrature, checked
/// against the long series for `ρ > 0.99` whenever that series converges.
pub fn kl_reference(d: usize, rho: f64) -> Result<f64> {
    kl_reference_with(d, rho, REFERENCE_NODES)
}

/// [`kl_reference`] with a different quadrature budget.
pub fn kl_reference_with(d: usize, rho: f64, nodes: usize) -> Result<f64> {
    check_dim(d)?;
    check_rho(rho)?;
    if rho == 0.0 {
        return Ok(0.0);
    }
    let j = j_quadrature_compensated(d, rho, nodes)?;
    let quadrature = (d - 1) as f64 * (j + half_log_one_minus_z(rho));
    if rho > CROSS_CHECK_RHO {
        let s = kl_series(d, rho, SeriesOptions::long())?;
        if s.converged {
            let scale = quadrature.abs().max(s.value.abs()).max(f64::MIN_POSITIVE);
            if (quadrature - s.value).abs() / scale > CROSS_CHECK_TOL {
                return Err(Error::ReferenceDisagreement {
                    d,
                    rho,
                    quadrature,
                    series: s.value,
                });
            }
        }
    }
    Ok(quadrature)
}

/// `H_d(z(ρ))` from the reference KL.
pub fn h_reference(d: usize, rho: f64) -> Result<f64> {
    let kl = kl_reference(d, rho)?;
    crate::kl::h_from_kl(d, rho, kl)
}

/// Integrand of `J_d(z)` in `t`,
/// `t^{d-2}/(1-t) · [1 - ((1-z)/(1-zt))^{(d-1)/2}]`, evaluated without
/// cancellation near `t = 1` (limit `(d-1)z / (2(1-z))`).
pub fn j_integrand(d: usize, z: f64, t: f64) -> f64 {
    let delta = 0.5 * (d - 1) as f64;
    let s = 1.0 - t;
    if s == 0.0 {
        return delta * z / (1.0 - z);
    }
    // (1-z)/(1-zt) = 1 - z s / (1 - z t)
    let log_ratio = (-z * s / (1.0 - z * t)).ln_1p();
    let bracket = -(delta * log_ratio).exp_m1();
    t.powi(d as i32 - 2) * bracket / s
}

// Gauss-Kronrod 7/15 on [-1, 1]: Kronrod nodes x_k (k odd are the Gauss
// nodes), listed for x >= 0.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: usize = 60;

/// `(kronrod, |kronrod - gauss|)` on `[a, b]`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(mid - dx) + f(mid + dx);
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]` to absolute
/// tolerance `abs_tol`. Endpoints are never evaluated.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut total = 0.0;
    // (a, b, tolerance share, depth)
    let mut stack = vec![(a, b, abs_tol, 0usize)];
    while let Some((lo, hi, tol, depth)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        if err <= tol || (err <= 1e-15 * val.abs()) {
            total += val;
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(Error::MaxDepthExceeded {
                depth,
                a: lo,
                b: hi,
            });
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid, 0.5 * tol, depth + 1));
        stack.push((mid, hi, 0.5 * tol, depth + 1));
    }
    Ok(total)
}

/// `P(μᵀx <= t)` under `spCauchy_d(μ, ρ)`.
pub fn marginal_cos_cdf(d: usize, rho: f64, t: f64) -> Result<f64> {
    Ok(marginal_cos_cdf_sorted(d, rho, &[t])?[0])
}

/// CDF of `μᵀx` at each point of the ascending slice `ts`.
///
/// Integrates the angle density `θ = arccos t` from `π` downward, one
/// adaptive piece per gap, and divides by the total mass so the last value
/// before `t = 1` is consistent with the first.
pub fn marginal_cos_cdf_sorted(d: usize, rho: f64, ts: &[f64]) -> Result<Vec<f64>> {
    check_dim(d)?;
    check_rho(rho)?;
    let pi = std::f64::consts::PI;
    let f = |th: f64| marginal_angle_density(d, rho, th).unwrap_or(0.0);
    let mut out = Vec::with_capacity(ts.len());
    let mut acc = 0.0;
    let mut theta_prev = pi;
    for &t in ts {
        let theta = t.clamp(-1.0, 1.0).acos();
        if theta < theta_prev {
            acc += integrate_adaptive(f, theta, theta_prev, 1e-13)?;
            theta_prev = theta;
        }
        out.push(acc);
    }
    let total = acc + integrate_adaptive(f, 0.0, theta_prev, 1e-13)?;
    for v in &mut out {
        *v = (*v / total).clamp(0.0, 1.0);
    }
    Ok(out)
}

/// One-sample Kolmogorov-Smirnov statistic of the ascending `sorted`
/// sample against CDF values `cdf` at the same points.
pub fn ks_statistic(cdf: &[f64]) -> f64 {
    let n = cdf.len() as f64;
    cdf.iter()
        .enumerate()
        .map(|(i, &f)| {
            let i = i as f64;
            (f - i / n).max((i + 1.0) / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic p-value of a KS statistic `stat` at sample size `n`
/// (Stephens' small-sample correction).
pub fn ks_p_value(stat: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * stat;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut p = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        p += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * p).clamp(0.0, 1.0)
}

/// KS test of `μᵀx` for `n` draws of `dist` against the analytic marginal.
/// Returns `(statistic, p_value)`.
pub fn ks_test_cosine<R: Rng + ?Sized>(
    dist: &SpCauchy,
    n: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let mu = dist.mu().clone();
    let mut cos = Vec::with_capacity(n);
    for _ in 0..n {
        cos.push(mu.dot(&dist.sample(rng)?)?);
    }
    cos.sort_by(f64::total_cmp);
    let cdf = marginal_cos_cdf_sorted(dist.dim(), dist.rho(), &cos)?;
    let stat = ks_statistic(&cdf);
    Ok((stat, ks_p_value(stat, n)))
}
