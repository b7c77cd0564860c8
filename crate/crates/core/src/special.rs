//! Log-domain special functions shared by every distribution in the crate.

use statrs::function::gamma::{gamma_ur, ln_gamma};

/// `log k!` computed as `logΓ(k + 1)`.
pub fn ln_factorial(k: usize) -> f64 {
    if k < 2 {
        0.0
    } else {
        ln_gamma(k as f64 + 1.0)
    }
}

/// `log C(n, k)`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `log B(a, b)` for positive arguments.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

pub fn ln_gamma_fn(x: f64) -> f64 {
    ln_gamma(x)
}

/// `log Σ exp(v)` with a single max subtraction. Empty input gives `-inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// `log(1 - exp(x))` for `x <= 0`, accurate on both ends.
pub fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// Upper tail `P(χ²_df > x)` via the regularized upper incomplete gamma.
pub fn chi_square_sf(x: f64, df: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_ur(df as f64 / 2.0, x / 2.0).clamp(0.0, 1.0)
}

/// Cache of `log k!` for `k = 0..=max`.
#[derive(Debug, Clone)]
pub struct LnFactorials {
    values: Vec<f64>,
}

impl LnFactorials {
    pub fn new(max: usize) -> Self {
        Self {
            values: (0..=max).map(ln_factorial).collect(),
        }
    }

    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}
