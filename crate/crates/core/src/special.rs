//! Scalar helpers: digamma, Wallis integrals and compensated summation.

use crate::error::{Error, Result};

/// Digamma function `ψ(x) = d/dx log Γ(x)` for `x > 0`.
///
/// Shifts the argument above 10 with `ψ(x) = ψ(x + 1) - 1/x`, then applies
/// the Bernoulli asymptotic expansion.
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 || x.is_infinite() {
        return Err(Error::NonPositiveArgument { x });
    }
    Ok(digamma_unchecked(x))
}

pub(crate) fn digamma_unchecked(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // B_{2k} / (2k) for k = 1..7, Horner in 1/x^2.
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    shift + x.ln() - 0.5 * inv - tail
}

/// `ψ(d-1+k) - ψ(d-1)` as the harmonic sum `Σ_{j<k} 1/(d-1+j)`.
pub fn digamma_shift(d: usize, k: usize) -> f64 {
    let mut s = CompensatedSum::default();
    for j in 0..k {
        s.add(1.0 / (d - 1 + j) as f64);
    }
    s.value()
}

/// `∫_0^π sin^n θ dθ`, via `W_n = (n-1)/n · W_{n-2}`.
///
/// `1 / W_{d-2}` normalizes the law of `μᵀx` under the uniform measure on
/// `S^{d-1}` when written in the angle `θ = arccos(μᵀx)`.
pub fn wallis(n: usize) -> f64 {
    let (mut w, start) = if n % 2 == 0 {
        (std::f64::consts::PI, 2)
    } else {
        (2.0, 3)
    };
    let mut k = start;
    while k <= n {
        w *= (k - 1) as f64 / k as f64;
        k += 2;
    }
    w
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}
