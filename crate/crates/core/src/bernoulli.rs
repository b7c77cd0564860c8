//! MCMPB as the sum of exchangeable dependent Bernoulli variables.

use crate::error::{invalid, Result};
use crate::special::{ln_binomial, ln_factorial, log_sum_exp};

/// Largest vector length accepted by the brute-force enumeration.
pub const MAX_ENUMERATION: usize = 20;

fn check(n: usize, alpha: f64, beta: f64, p: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(invalid("alpha", "alpha and beta must be finite"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid("p", "must lie in (0, 1)"));
    }
    Ok(())
}

/// Unnormalized log weight of any binary vector with `k` ones.
fn log_weight(n: usize, alpha: f64, beta: f64, p: f64, k: usize) -> f64 {
    k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()
        - (alpha - 1.0) * ln_factorial(k)
        - (beta - 1.0) * ln_factorial(n - k)
}

/// Log of the joint pmf of `(X₁, …, X_n)` at a binary vector.
pub fn joint_log_pmf(x: &[bool], alpha: f64, beta: f64, p: f64) -> Result<f64> {
    let n = x.len();
    check(n, alpha, beta, p)?;
    let terms: Vec<f64> = (0..=n)
        .map(|k| ln_binomial(n, k) + log_weight(n, alpha, beta, p, k))
        .collect();
    let ones = x.iter().filter(|&&b| b).count();
    Ok(log_weight(n, alpha, beta, p, ones) - log_sum_exp(&terms))
}

/// Distribution of `X₁ + … + X_n` by enumerating all `2ⁿ` vectors.
pub fn sum_distribution_brute_force(n: usize, alpha: f64, beta: f64, p: f64) -> Result<Vec<f64>> {
    check(n, alpha, beta, p)?;
    if n > MAX_ENUMERATION {
        return Err(invalid(
            "n",
            format!("enumeration is limited to n ≤ {MAX_ENUMERATION}"),
        ));
    }
    let mut pmf = vec![0.0; n + 1];
    let mut x = vec![false; n];
    for mask in 0u32..(1 << n) {
        for (i, b) in x.iter_mut().enumerate() {
            *b = mask >> i & 1 == 1;
        }
        pmf[mask.count_ones() as usize] += joint_log_pmf(&x, alpha, beta, p)?.exp();
    }
    Ok(pmf)
}

/// `E[Xᵢ]` under the second-order Bahadur approximation, with `θ = p/(1−p)`.
pub fn bahadur_mean(alpha: f64, beta: f64, theta: f64) -> f64 {
    let a1 = 2f64.powf(alpha - 1.0);
    (a1 * theta + theta * theta)
        / (2f64.powf(alpha - beta) + 2f64.powf(alpha) * theta + theta * theta)
}

/// `Cor[Xᵢ, Xⱼ]`, `i ≠ j`, under the same approximation.
pub fn bahadur_correlation(alpha: f64, beta: f64, theta: f64) -> f64 {
    let a1 = 2f64.powf(alpha - 1.0);
    let ab = 2f64.powf(alpha - beta);
    theta * (ab - 4f64.powf(alpha - 1.0)) / ((1.0 + theta) * (a1 + theta) * (ab + a1 * theta))
}
