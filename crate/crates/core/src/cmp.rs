//! Conway–Maxwell–Poisson laws: the full CMP, its truncation to `{0..n}`,
//! the CMP-type binomial, and the conditional construction that turns two
//! independent CMP variables into an MCMPB law.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::mcmpb::McmpbParams;
use crate::special::{ln_binomial, ln_factorial, log_sum_exp};

/// Below this exponent the series converges too slowly to be summed reliably.
pub const MIN_DISPERSION: f64 = 0.3;
pub const DEFAULT_TAIL_TOL: f64 = 1e-14;
pub const MAX_TERMS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmpParams {
    /// Dispersion exponent.
    pub r: f64,
    pub lambda: f64,
    pub tail_tol: f64,
}

impl CmpParams {
    pub fn new(r: f64, lambda: f64) -> Result<Self> {
        Self::with_tolerance(r, lambda, DEFAULT_TAIL_TOL)
    }

    pub fn with_tolerance(r: f64, lambda: f64, tail_tol: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(invalid(
                "r",
                format!("must be positive and finite, got {r}"),
            ));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(invalid(
                "lambda",
                format!("must be positive and finite, got {lambda}"),
            ));
        }
        if !(tail_tol > 0.0 && tail_tol < 1e-6) {
            return Err(invalid(
                "tail_tol",
                format!("must lie in (0, 1e-6), got {tail_tol}"),
            ));
        }
        Ok(Self {
            r,
            lambda,
            tail_tol,
        })
    }
}

/// `log Z(λ, r) = log Σ_k λ^k / (k!)^r`.
///
/// Summation stops once the terms are decreasing and the latest one is below
/// `tail_tol` relative to the running sum.
pub fn cmp_log_norm(params: &CmpParams) -> Result<f64> {
    if params.r < MIN_DISPERSION {
        return Err(invalid(
            "r",
            format!(
                "series for r = {} < {MIN_DISPERSION} is numerically unreliable",
                params.r
            ),
        ));
    }
    let ln_lambda = params.lambda.ln();
    let ln_tol = params.tail_tol.ln();
    // Running log-sum kept as (shift, scaled sum).
    let mut shift = 0.0f64;
    let mut scaled = 1.0f64;
    let mut prev = 0.0f64;
    let mut ln_fact = 0.0f64;
    for k in 1..MAX_TERMS {
        ln_fact += (k as f64).ln();
        let term = k as f64 * ln_lambda - params.r * ln_fact;
        if term > shift {
            scaled = scaled * (shift - term).exp() + 1.0;
            shift = term;
        } else {
            scaled += (term - shift).exp();
        }
        let log_sum = shift + scaled.ln();
        if term < prev && term - log_sum < ln_tol {
            return Ok(log_sum);
        }
        prev = term;
    }
    Err(Error::SeriesCap {
        terms: MAX_TERMS,
        partial_log_sum: shift + scaled.ln(),
    })
}

pub fn cmp_log_pmf(params: &CmpParams, x: usize) -> Result<f64> {
    let log_z = cmp_log_norm(params)?;
    Ok(cmp_log_pmf_with(params, log_z, x))
}

/// `log P(X = x)` given a precomputed `log Z`.
pub fn cmp_log_pmf_with(params: &CmpParams, log_z: f64, x: usize) -> f64 {
    x as f64 * params.lambda.ln() - params.r * ln_factorial(x) - log_z
}

pub fn cmp_pmf(params: &CmpParams, x: usize) -> Result<f64> {
    Ok(cmp_log_pmf(params, x)?.exp())
}

/// CMP with rate `θ` restricted to `{0..n}`: `θ^x / (x!)^r`, renormalized.
pub fn truncated_cmp_pmf(r: f64, theta: f64, n: usize, x: usize) -> Result<f64> {
    if x > n {
        return Err(Error::OutsideSupport { x, n });
    }
    if !r.is_finite() || !(theta > 0.0) {
        return Err(invalid("theta", "r must be finite and theta positive"));
    }
    let logs: Vec<f64> = (0..=n)
        .map(|k| k as f64 * theta.ln() - r * ln_factorial(k))
        .collect();
    Ok((logs[x] - log_sum_exp(&logs)).exp())
}

/// CMP-type binomial: `C(n, x)^α θ^x`, renormalized over `{0..n}`.
pub fn cmpb_pmf(n: usize, alpha: f64, psi: f64, x: usize) -> Result<f64> {
    if x > n {
        return Err(Error::OutsideSupport { x, n });
    }
    if !alpha.is_finite() || !psi.is_finite() {
        return Err(invalid("alpha", "alpha and psi must be finite"));
    }
    let logs: Vec<f64> = (0..=n)
        .map(|k| alpha * ln_binomial(n, k) + k as f64 * psi)
        .collect();
    Ok((logs[x] - log_sum_exp(&logs)).exp())
}

/// Two independent CMP variables `X₁ ~ CMP(α, λ₁)`, `X₂ ~ CMP(β, λ₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BivariateCmpSpec {
    pub first: CmpParams,
    pub second: CmpParams,
}

/// Law of `X₁` given `X₁ + X₂ = n`: MCMPB with `ψ = log(λ₁/λ₂)`.
pub fn conditional_given_sum(spec: &BivariateCmpSpec, n: usize) -> Result<McmpbParams> {
    McmpbParams::new(
        n,
        spec.first.r,
        spec.second.r,
        spec.first.lambda.ln() - spec.second.lambda.ln(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcmpb::build_table;

    #[test]
    fn poisson_normalizer() {
        let p = CmpParams::new(1.0, 2.0).unwrap();
        assert!((cmp_log_norm(&p).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn bessel_normalizer_against_partial_sum() {
        // Oracle: Σ_{k<30} 1/(k!)² by plain products.
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        for k in 1..30 {
            term /= (k * k) as f64;
            sum += term;
        }
        let p = CmpParams::new(2.0, 1.0).unwrap();
        assert!((cmp_log_norm(&p).unwrap().exp() - sum).abs() < 1e-13);
        assert!((sum - 2.279585302336067).abs() < 1e-12);
    }

    #[test]
    fn trip_cmp_column() {
        let p = CmpParams::new(0.92, 2.75).unwrap();
        let v = 1839.0 * cmp_pmf(&p, 2).unwrap();
        // Printed column value 398.96 is reproduced up to the rounding of (r, λ).
        assert!((v - 398.96).abs() < 3.0, "{v}");
    }

    #[test]
    fn poisson_pmf_value() {
        let p = CmpParams::new(1.0, 3.0).unwrap();
        let want = (-3.0f64).exp() * 9.0 / 2.0;
        assert!((cmp_pmf(&p, 2).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn invalid_inputs() {
        assert!(CmpParams::new(0.0, 1.0).is_err());
        assert!(CmpParams::new(1.0, -1.0).is_err());
        assert!(CmpParams::with_tolerance(1.0, 1.0, 1e-3).is_err());
        let low = CmpParams::new(0.2, 1.0).unwrap();
        assert!(cmp_log_norm(&low).is_err());
        assert!(truncated_cmp_pmf(1.0, 0.5, 3, 4).is_err());
        assert!(cmpb_pmf(3, 1.0, 0.0, 4).is_err());
    }

    #[test]
    fn truncated_poisson() {
        let w: Vec<f64> = (0..=3)
            .map(|k| 0.5f64.powi(k) / (1..=k).product::<i32>().max(1) as f64)
            .collect();
        let z: f64 = w.iter().sum();
        for x in 0..=3 {
            let v = truncated_cmp_pmf(1.0, 0.5, 3, x).unwrap();
            assert!((v - w[x] / z).abs() < 1e-15);
        }
    }

    #[test]
    fn cmpb_binomial_case() {
        for x in 0..=12 {
            let binom = crate::special::ln_binomial(12, x).exp() / 4096.0;
            assert!((cmpb_pmf(12, 1.0, 0.0, x).unwrap() - binom).abs() < 1e-14);
        }
    }

    #[test]
    fn special_cases_match_mcmpb() {
        let t = build_table(&McmpbParams::new(8, 1.4, 0.0, -0.3).unwrap()).unwrap();
        for x in 0..=8 {
            let v = truncated_cmp_pmf(1.4, (-0.3f64).exp(), 8, x).unwrap();
            assert!((v - t.pmf[x]).abs() < 1e-12);
        }
        let t = build_table(&McmpbParams::new(8, 0.6, 0.6, 0.4).unwrap()).unwrap();
        for x in 0..=8 {
            assert!((cmpb_pmf(8, 0.6, 0.4, x).unwrap() - t.pmf[x]).abs() < 1e-12);
        }
    }

    #[test]
    fn conditional_parameter_mapping() {
        let spec = BivariateCmpSpec {
            first: CmpParams::new(0.93, 2.0 * 0.37f64.exp()).unwrap(),
            second: CmpParams::new(0.76, 2.0).unwrap(),
        };
        let p = conditional_given_sum(&spec, 12).unwrap();
        assert_eq!((p.n, p.alpha, p.beta), (12, 0.93, 0.76));
        assert!((p.psi - 0.37).abs() < 1e-14);
        let same = BivariateCmpSpec {
            first: CmpParams::new(1.5, 3.0).unwrap(),
            second: CmpParams::new(0.5, 3.0).unwrap(),
        };
        assert_eq!(conditional_given_sum(&same, 4).unwrap().psi, 0.0);
    }
}
