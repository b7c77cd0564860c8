//! Maximum-likelihood fitting with profile selection of `n`, Fisher
//! information, standard errors and the fit report.
//!
//! Every family goes through the same engine: Nelder–Mead on the mean
//! negative log-likelihood over an unconstrained internal parameterization,
//! started from fixed simplexes and then restarted around the best point.
//! Untruncated MCMPB fits are additionally polished by Newton steps on the
//! likelihood equations, whose Hessian is the covariance of the sufficient
//! statistics.

use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{FrequencyData, SufficientStats};
use crate::error::{invalid, Error, Result};
use crate::gof::{aic, chisq_test, GofSummary};
use crate::mcmpb::{build_table, exp_family_derivatives, log_norm_star, McmpbParams, PARAM_CAP};
use crate::models::{mcmpb_log_table, ModelKind, ModelParams};
use crate::optim::{axis_simplex, Minimum, NelderMead};
use crate::special::{ln_factorial, ln_one_minus_exp};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959964;
/// Default width of the profile range above the largest observation.
pub const DEFAULT_PROFILE_WIDTH: usize = 30;
pub const MAX_PROFILE_WIDTH: usize = 50;
/// Covariance matrices with a larger condition number are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;
/// Step sizes of the restarts taken around the best point so far.
const RESTART_STEPS: [f64; 3] = [0.5, 0.1, 0.02];

/// How `n` is chosen for bounded families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NChoice {
    Fixed(usize),
    Profile(RangeInclusive<usize>),
    /// Profile over `[max count, max count + 30]`.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitCell {
    pub value: usize,
    pub observed: u64,
    pub expected: f64,
    /// The cell also holds all mass above `value`.
    pub tail: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub n: usize,
    pub loglik: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: ModelKind,
    pub params: ModelParams,
    pub parameter_names: Vec<String>,
    pub estimates: Vec<f64>,
    pub se: Option<Vec<f64>>,
    pub ci95: Option<Vec<[f64; 2]>>,
    pub loglik: f64,
    pub aic: f64,
    pub gof: GofSummary,
    pub n_obs: u64,
    pub truncated_at_zero: bool,
    pub cells: Vec<FitCell>,
    pub converged: bool,
    /// An internal coordinate ended on its search bound.
    pub boundary: bool,
    /// `(E[−log X!] − S₂, E[−log (n−X)!] − S₃, E[X] − S₁)` at the estimate,
    /// for untruncated MCMPB fits.
    pub score_residual: Option<[f64; 3]>,
    pub profile: Option<Vec<ProfilePoint>>,
}

impl FitReport {
    pub fn chisq(&self) -> f64 {
        self.gof.chi_square.chisq
    }

    pub fn df(&self) -> usize {
        self.gof.chi_square.df
    }

    pub fn p_value(&self) -> f64 {
        self.gof.chi_square.p_value
    }

    pub fn expected(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.expected).collect()
    }

    pub fn n(&self) -> Option<usize> {
        self.params.support_max()
    }

    pub fn mcmpb(&self) -> Option<McmpbParams> {
        match self.params {
            ModelParams::Mcmpb(p) => Some(p),
            _ => None,
        }
    }
}

/// `N (ψS₁ + αS₂ + βS₃ − log C*_n)`, or the zero-truncated likelihood
/// `Σ f_i [log P(i) − log(1 − P(0))]` when the data are truncated.
pub fn log_likelihood(data: &FrequencyData, params: &McmpbParams) -> Result<f64> {
    params.validate()?;
    if data.truncated_at_zero() {
        return model_log_likelihood(data, &ModelParams::Mcmpb(*params));
    }
    let s = SufficientStats::compute(data, params.n)?;
    let n_obs = data.total() as f64;
    Ok(n_obs
        * (params.psi * s.s1 + params.alpha * s.s2 + params.beta * s.s3
            - log_norm_star(params.n, params.alpha, params.beta, params.psi)))
}

/// `Σ f_i log P(i)` for any model, with zero truncation applied when flagged.
pub fn model_log_likelihood(data: &FrequencyData, params: &ModelParams) -> Result<f64> {
    let max = data.max_value();
    if let Some(n) = params.support_max() {
        if max > n {
            return Err(Error::InvalidData(format!(
                "observed value {max} exceeds n = {n}"
            )));
        }
    }
    let table = params.log_table(max)?;
    let mut ll = 0.0;
    for &(x, f) in data.counts() {
        if f > 0 {
            ll += f as f64 * table.log_pmf[x];
        }
    }
    if data.truncated_at_zero() {
        ll -= data.total() as f64 * ln_one_minus_exp(table.log_pmf[0]);
    }
    Ok(ll)
}

/// Fisher information per observation for `(α, β, ψ)`: the covariance of the
/// sufficient statistics `(−log X!, −log (n−X)!, X)`.
pub fn fisher_information(params: &McmpbParams) -> Result<Matrix3<f64>> {
    let e = exp_family_derivatives(&build_table(params)?);
    let info = reorder_covariance(&e.covariance);
    check_conditioning(&info)?;
    Ok(info)
}

fn reorder_covariance(cov_t: &Matrix3<f64>) -> Matrix3<f64> {
    // T = (X, log X!, log (n−X)!), U = (−T₁, −T₂, T₀).
    const MAP: [usize; 3] = [1, 2, 0];
    const SIGN: [f64; 3] = [-1.0, -1.0, 1.0];
    Matrix3::from_fn(|i, j| SIGN[i] * SIGN[j] * cov_t[(MAP[i], MAP[j])])
}

fn check_conditioning(m: &Matrix3<f64>) -> Result<()> {
    let eig = SymmetricEigen::new(*m).eigenvalues;
    let max = eig.max();
    let min = eig.min();
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !(condition < MAX_CONDITION) {
        return Err(Error::SingularCovariance { condition });
    }
    Ok(())
}

/// `sqrt(diag(I⁻¹) / N)`.
pub fn standard_errors(fisher: &Matrix3<f64>, n_obs: u64) -> Result<Vec<f64>> {
    check_conditioning(fisher)?;
    let inv = fisher.try_inverse().ok_or(Error::SingularCovariance {
        condition: f64::INFINITY,
    })?;
    Ok((0..3)
        .map(|i| (inv[(i, i)] / n_obs as f64).sqrt())
        .collect())
}

pub fn confidence_intervals(estimates: &[f64], se: &[f64]) -> Vec<[f64; 2]> {
    estimates
        .iter()
        .zip(se)
        .map(|(e, s)| [e - Z95 * s, e + Z95 * s])
        .collect()
}

/// Fits MCMPB with `n` fixed. `init`, when given, replaces the data-driven
/// starting point `(1, 1, logit(mean/n))`.
pub fn fit_fixed_n(data: &FrequencyData, n: usize, init: Option<[f64; 3]>) -> Result<FitReport> {
    fit_bounded(
        ModelKind::Mcmpb,
        data,
        n,
        init.as_ref().map(|v| v.as_slice()),
    )
}

/// Profile likelihood over `n`: fits every `n` in the range and keeps the
/// largest maximized likelihood, preferring the smaller `n` on ties.
pub fn fit_profile_n(
    data: &FrequencyData,
    range: Option<RangeInclusive<usize>>,
) -> Result<FitReport> {
    fit_model(
        ModelKind::Mcmpb,
        data,
        range.map_or(NChoice::Auto, NChoice::Profile),
    )
}

pub fn fit_model(kind: ModelKind, data: &FrequencyData, n: NChoice) -> Result<FitReport> {
    if !kind.bounded() {
        return fit_with_family(Family::new(kind, 0), data, None);
    }
    let max = data.max_value().max(1);
    let range = match n {
        NChoice::Fixed(n) => return fit_bounded(kind, data, n, None),
        NChoice::Auto => max..=max + DEFAULT_PROFILE_WIDTH,
        NChoice::Profile(r) => r,
    };
    if range.is_empty() || *range.start() < max || *range.end() > max + MAX_PROFILE_WIDTH {
        return Err(invalid(
            "n",
            format!(
                "profile range {range:?} must lie within [{max}, {}]",
                max + MAX_PROFILE_WIDTH
            ),
        ));
    }
    let fits: Vec<Result<FitReport>> = range
        .clone()
        .into_par_iter()
        .map(|n| fit_bounded(kind, data, n, None))
        .collect();
    let mut best: Option<FitReport> = None;
    let mut profile = Vec::with_capacity(fits.len());
    for fit in fits {
        let fit = fit?;
        profile.push(ProfilePoint {
            n: fit.n().unwrap_or(0),
            loglik: fit.loglik,
        });
        if best.as_ref().is_none_or(|b| fit.loglik > b.loglik + 1e-9) {
            best = Some(fit);
        }
    }
    let mut best = best.expect("non-empty range");
    best.profile = Some(profile);
    Ok(best)
}

fn fit_bounded(
    kind: ModelKind,
    data: &FrequencyData,
    n: usize,
    init: Option<&[f64]>,
) -> Result<FitReport> {
    if n == 0 || n < data.max_value() {
        return Err(invalid(
            "n",
            format!(
                "n = {n} is smaller than the largest count {}",
                data.max_value()
            ),
        ));
    }
    fit_with_family(Family::new(kind, n), data, init)
}

/// A family with `n` fixed, searched in an internal parameterization.
#[derive(Debug, Clone, Copy)]
struct Family {
    kind: ModelKind,
    n: usize,
}

impl Family {
    fn new(kind: ModelKind, n: usize) -> Self {
        Self { kind, n }
    }

    fn decode(&self, z: &[f64]) -> ModelParams {
        let n = self.n;
        match self.kind {
            ModelKind::Mcmpb => ModelParams::Mcmpb(McmpbParams {
                n,
                alpha: z[0],
                beta: z[1],
                psi: z[2],
            }),
            ModelKind::Cmpb => ModelParams::Cmpb {
                n,
                alpha: z[0],
                psi: z[1],
            },
            ModelKind::BetaBinomial => ModelParams::BetaBinomial {
                n,
                a: z[0].exp(),
                b: z[1].exp(),
            },
            ModelKind::NegativeBinomial => {
                // (log mean, log r)
                let (m, r) = (z[0].exp(), z[1].exp());
                ModelParams::NegativeBinomial { r, p: m / (m + r) }
            }
            ModelKind::Cmp => ModelParams::Cmp {
                r: z[0].exp(),
                lambda: z[1].exp(),
            },
        }
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        match self.kind {
            ModelKind::Mcmpb => vec![(-PARAM_CAP, PARAM_CAP); 3],
            ModelKind::Cmpb => vec![(-PARAM_CAP, PARAM_CAP); 2],
            ModelKind::BetaBinomial => vec![(-15.0, 25.0); 2],
            ModelKind::NegativeBinomial => vec![(-15.0, 15.0), (-15.0, 20.0)],
            ModelKind::Cmp => vec![(crate::cmp::MIN_DISPERSION.ln(), 50f64.ln()), (-30.0, 40.0)],
        }
    }

    fn fixed_starts(&self, data: &FrequencyData, init: Option<&[f64]>) -> Vec<Vec<Vec<f64>>> {
        let mean = data.mean().max(1e-3);
        let var = data.variance().max(1e-6);
        let logit_mean = |n: usize| {
            let p = (mean / n as f64).clamp(0.01, 0.99);
            (p / (1.0 - p)).ln()
        };
        match self.kind {
            ModelKind::Mcmpb => {
                let guess = init.map_or_else(|| vec![1.0, 1.0, logit_mean(self.n)], |v| v.to_vec());
                vec![
                    vec![
                        vec![0.0, 0.0, 0.0],
                        vec![1.0, 1.0, 0.0],
                        vec![1.0, 0.0, 1.0],
                        vec![0.0, 1.0, 1.0],
                    ],
                    axis_simplex(&guess, 0.5),
                ]
            }
            ModelKind::Cmpb => vec![
                vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
                axis_simplex(&[1.0, logit_mean(self.n)], 0.5),
            ],
            ModelKind::BetaBinomial => {
                let p = (mean / self.n as f64).clamp(0.01, 0.99);
                vec![
                    axis_simplex(&[0.0, 0.0], 1.0),
                    axis_simplex(&[(10.0 * p).ln(), (10.0 * (1.0 - p)).ln()], 0.5),
                ]
            }
            ModelKind::NegativeBinomial => {
                let r0 = if var > mean {
                    mean * mean / (var - mean)
                } else {
                    100.0
                };
                vec![
                    axis_simplex(&[mean.ln(), 0.0], 1.0),
                    axis_simplex(&[mean.ln(), r0.clamp(1e-3, 1e6).ln()], 0.5),
                ]
            }
            ModelKind::Cmp => {
                let r0 = (mean / var).clamp(0.35, 20.0);
                let l0 = (mean + (r0 - 1.0) / (2.0 * r0)).max(0.1).powf(r0);
                vec![
                    axis_simplex(&[0.0, mean.ln()], 0.5),
                    axis_simplex(&[r0.ln(), l0.ln()], 0.5),
                ]
            }
        }
    }
}

/// Mean negative log-likelihood as a function of the internal coordinates.
struct Objective<'a> {
    family: Family,
    data: &'a FrequencyData,
    stats: Option<SufficientStats>,
    bounds: Vec<(f64, f64)>,
    n_obs: f64,
}

impl<'a> Objective<'a> {
    fn new(family: Family, data: &'a FrequencyData) -> Result<Self> {
        let stats = match family.kind {
            ModelKind::Mcmpb | ModelKind::Cmpb if !data.truncated_at_zero() => {
                Some(SufficientStats::compute(data, family.n)?)
            }
            _ => None,
        };
        Ok(Self {
            family,
            data,
            stats,
            bounds: family.bounds(),
            n_obs: data.total() as f64,
        })
    }

    fn value(&self, z: &[f64]) -> f64 {
        if z.iter()
            .zip(&self.bounds)
            .any(|(v, (lo, hi))| !(*v >= *lo && *v <= *hi))
        {
            return f64::INFINITY;
        }
        if let Some(s) = &self.stats {
            let (alpha, beta, psi) = match self.family.kind {
                ModelKind::Mcmpb => (z[0], z[1], z[2]),
                _ => (z[0], z[0], z[1]),
            };
            return log_norm_star(s.n, alpha, beta, psi)
                - (psi * s.s1 + alpha * s.s2 + beta * s.s3);
        }
        match model_log_likelihood(self.data, &self.family.decode(z)) {
            Ok(ll) => -ll / self.n_obs,
            Err(_) => f64::INFINITY,
        }
    }

    fn on_boundary(&self, z: &[f64]) -> bool {
        z.iter()
            .zip(&self.bounds)
            .any(|(v, (lo, hi))| (v - lo).abs() < 1e-3 || (hi - v).abs() < 1e-3)
    }
}

fn fit_with_family(
    family: Family,
    data: &FrequencyData,
    init: Option<&[f64]>,
) -> Result<FitReport> {
    let objective = Objective::new(family, data)?;
    let nm = NelderMead::default();
    let f = |z: &[f64]| objective.value(z);

    let mut best: Option<Minimum> = None;
    let mut any_converged = false;
    let mut total_iterations = 0;
    let mut consider = |m: Minimum, best: &mut Option<Minimum>| {
        any_converged |= m.converged;
        total_iterations += m.iterations;
        if best.as_ref().is_none_or(|b| m.value < b.value) {
            *best = Some(m);
        }
    };
    for simplex in family.fixed_starts(data, init) {
        consider(nm.minimize(f, simplex), &mut best);
    }
    for step in RESTART_STEPS {
        let start = best.as_ref().expect("at least one run").point.clone();
        consider(nm.minimize(f, axis_simplex(&start, step)), &mut best);
    }
    let mut best = best.expect("at least one run");

    let mut score_residual = None;
    let mut polished_ok = false;
    if family.kind == ModelKind::Mcmpb && !data.truncated_at_zero() {
        let stats = objective.stats.expect("untruncated MCMPB has statistics");
        let (point, value, grad) = newton_polish(&stats, &best.point, best.value, &objective);
        best.point = point;
        best.value = value;
        polished_ok = grad.iter().all(|g| g.abs() < 1e-8);
        score_residual = Some(grad);
    }
    if !best.value.is_finite() || !(any_converged || polished_ok) {
        return Err(Error::NonConvergence {
            best_objective: best.value * objective.n_obs,
            best_point: family.decode(&best.point).estimates(),
        });
    }
    let params = family.decode(&best.point);
    build_report(
        data,
        params,
        any_converged || polished_ok,
        objective.on_boundary(&best.point),
        score_residual,
    )
}

/// Expectation and covariance of `U = (−log X!, −log (n−X)!, X)` under the
/// MCMPB law, without the parameter cap.
fn sufficient_moments(n: usize, z: &[f64]) -> (Vector3<f64>, Matrix3<f64>) {
    let table = mcmpb_log_table(n, z[0], z[1], z[2]);
    let u = |x: usize| Vector3::new(-ln_factorial(x), -ln_factorial(n - x), x as f64);
    let mut mean = Vector3::zeros();
    for (x, lp) in table.log_pmf.iter().enumerate() {
        mean += lp.exp() * u(x);
    }
    let mut cov = Matrix3::zeros();
    for (x, lp) in table.log_pmf.iter().enumerate() {
        let d = u(x) - mean;
        cov += lp.exp() * d * d.transpose();
    }
    (mean, cov)
}

/// Newton iterations on `E[U] = (S₂, S₃, S₁)`. Returns the point, its mean
/// negative log-likelihood and the final score residual.
fn newton_polish(
    stats: &SufficientStats,
    start: &[f64],
    start_value: f64,
    objective: &Objective<'_>,
) -> (Vec<f64>, f64, [f64; 3]) {
    let target = Vector3::new(stats.s2, stats.s3, stats.s1);
    let mut z = Vector3::new(start[0], start[1], start[2]);
    let mut value = start_value;
    let (mean, mut cov) = sufficient_moments(stats.n, z.as_slice());
    let mut grad = mean - target;
    for _ in 0..25 {
        if grad.amax() < 1e-13 {
            break;
        }
        let Some(chol) = cov.cholesky() else { break };
        let step = chol.solve(&grad);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand = z - t * step;
            let cand_value = objective.value(cand.as_slice());
            if cand_value.is_finite() {
                let (m2, c2) = sufficient_moments(stats.n, cand.as_slice());
                let g2 = m2 - target;
                if cand_value < value || (cand_value <= value + 1e-15 && g2.amax() < grad.amax()) {
                    z = cand;
                    value = cand_value;
                    cov = c2;
                    grad = g2;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (z.as_slice().to_vec(), value, [grad[0], grad[1], grad[2]])
}

/// Expected frequencies per cell, goodness of fit and standard errors for a
/// fitted parameter set.
pub fn build_report(
    data: &FrequencyData,
    params: ModelParams,
    converged: bool,
    boundary: bool,
    score_residual: Option<[f64; 3]>,
) -> Result<FitReport> {
    let kind = params.kind();
    let n_obs = data.total();
    let loglik = model_log_likelihood(data, &params)?;
    let upper = params.support_max().unwrap_or_else(|| data.max_value());
    let table = params.log_table(upper)?;
    let log_keep = if data.truncated_at_zero() {
        ln_one_minus_exp(table.log_pmf[0])
    } else {
        0.0
    };
    let lo = usize::from(data.truncated_at_zero());
    let bounded = params.support_max().is_some();
    let cells: Vec<FitCell> = (lo..=upper)
        .map(|x| {
            let tail = !bounded && x == upper;
            let mut e = (table.log_pmf[x] - log_keep).exp();
            if tail {
                e += (table.log_tail - log_keep).exp();
            }
            FitCell {
                value: x,
                observed: data.frequency(x),
                expected: n_obs as f64 * e,
                tail,
            }
        })
        .collect();
    let observed: Vec<f64> = cells.iter().map(|c| c.observed as f64).collect();
    let expected: Vec<f64> = cells.iter().map(|c| c.expected).collect();
    let k = kind.parameter_count();
    let gof = GofSummary {
        aic: aic(loglik, k)?,
        chi_square: chisq_test(&observed, &expected, k)?,
    };

    let estimates = params.estimates();
    let se = if boundary {
        None
    } else {
        match params {
            ModelParams::Mcmpb(p) if !data.truncated_at_zero() => fisher_information(&p)
                .and_then(|info| standard_errors(&info, n_obs))
                .ok(),
            _ => numerical_standard_errors(data, &params),
        }
    };
    let ci95 = se.as_ref().map(|s| confidence_intervals(&estimates, s));
    Ok(FitReport {
        model: kind,
        params,
        parameter_names: kind
            .parameter_names()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        estimates,
        se,
        ci95,
        loglik,
        aic: gof.aic,
        gof,
        n_obs,
        truncated_at_zero: data.truncated_at_zero(),
        cells,
        converged,
        boundary,
        score_residual,
        profile: None,
    })
}

/// Observed-information standard errors from a central-difference Hessian of
/// the negative log-likelihood in the reported parameters.
fn numerical_standard_errors(data: &FrequencyData, params: &ModelParams) -> Option<Vec<f64>> {
    let v0 = params.estimates();
    let k = v0.len();
    let real_valued = matches!(params.kind(), ModelKind::Mcmpb | ModelKind::Cmpb);
    let h: Vec<f64> = v0
        .iter()
        .map(|v| {
            1e-4 * if real_valued {
                v.abs().max(1.0)
            } else {
                v.abs()
            }
        })
        .collect();
    let nll = |v: &[f64]| -> f64 {
        model_log_likelihood(data, &params.with_estimates(v)).map_or(f64::NAN, |ll| -ll)
    };
    let at = |di: &[(usize, f64)]| {
        let mut v = v0.clone();
        for &(i, s) in di {
            v[i] += s * h[i];
        }
        nll(&v)
    };
    let f0 = nll(&v0);
    let mut hess = DMatrix::zeros(k, k);
    for i in 0..k {
        hess[(i, i)] = (at(&[(i, 1.0)]) - 2.0 * f0 + at(&[(i, -1.0)])) / (h[i] * h[i]);
        for j in 0..i {
            let v = (at(&[(i, 1.0), (j, 1.0)])
                - at(&[(i, 1.0), (j, -1.0)])
                - at(&[(i, -1.0), (j, 1.0)])
                + at(&[(i, -1.0), (j, -1.0)]))
                / (4.0 * h[i] * h[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    if hess.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let eig = hess.clone().symmetric_eigen().eigenvalues;
    let (min, max) = (eig.min(), eig.max());
    if !(min > 0.0 && max / min < MAX_CONDITION) {
        return None;
    }
    let cov = hess.try_inverse()?;
    let se: Vec<f64> = DVector::from_fn(k, |i, _| cov[(i, i)].sqrt())
        .iter()
        .copied()
        .collect();
    se.iter().all(|s| s.is_finite()).then_some(se)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_loglik(data: &FrequencyData, p: &McmpbParams) -> f64 {
        let t = build_table(p).unwrap();
        let keep = if data.truncated_at_zero() {
            (1.0 - t.pmf[0]).ln()
        } else {
            0.0
        };
        data.counts()
            .iter()
            .map(|&(x, f)| f as f64 * (t.pmf[x].ln() - keep))
            .sum()
    }

    #[test]
    fn single_uniform_observation() {
        let d = FrequencyData::new(vec![(3, 1)], false).unwrap();
        let p = McmpbParams::new(7, 0.0, 0.0, 0.0).unwrap();
        assert!((log_likelihood(&d, &p).unwrap() + 8f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn likelihood_routes_agree() {
        let d =
            FrequencyData::from_frequencies(0, &[3, 24, 104, 286, 670, 1033, 1343], false).unwrap();
        let p = McmpbParams::new(12, 0.93, 0.76, 0.37).unwrap();
        assert!((log_likelihood(&d, &p).unwrap() - direct_loglik(&d, &p)).abs() < 1e-9);
        let t = FrequencyData::from_frequencies(1, &[18, 35, 210, 1355], true).unwrap();
        let p = McmpbParams::new(7, -1.2, 2.0, -3.0).unwrap();
        assert!((log_likelihood(&t, &p).unwrap() - direct_loglik(&t, &p)).abs() < 1e-9);
        assert!(log_likelihood(&d, &McmpbParams::new(5, 1.0, 1.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn fisher_rejects_degenerate_law() {
        let p = McmpbParams::new(4, 40.0, 40.0, 0.0).unwrap();
        assert!(matches!(
            fisher_information(&p),
            Err(Error::SingularCovariance { .. })
        ));
    }

    #[test]
    fn binomial_proportions_recover_binomial() {
        // Exact binomial(12, 1/2) proportions scaled to a large sample.
        let freqs: Vec<u64> = (0..=12usize)
            .map(|x| (crate::special::ln_binomial(12, x).exp() * 1e6 / 4096.0).round() as u64)
            .collect();
        let d = FrequencyData::from_frequencies(0, &freqs, false).unwrap();
        let fit = fit_fixed_n(&d, 12, None).unwrap();
        let p = fit.mcmpb().unwrap();
        assert!((p.alpha - 1.0).abs() < 0.05, "{p:?}");
        assert!((p.beta - 1.0).abs() < 0.05, "{p:?}");
        assert!(p.psi.abs() < 0.05, "{p:?}");
        let ci = fit.ci95.as_ref().unwrap();
        for (i, e) in fit.estimates.iter().enumerate() {
            let se = fit.se.as_ref().unwrap()[i];
            assert!((ci[i][0] - (e - Z95 * se)).abs() < 1e-12);
        }
    }

    #[test]
    fn n_smaller_than_data_is_rejected() {
        let d = FrequencyData::from_frequencies(0, &[1, 2, 3, 4], false).unwrap();
        assert!(fit_fixed_n(&d, 2, None).is_err());
        assert!(fit_profile_n(&d, Some(1..=5)).is_err());
        assert!(fit_profile_n(&d, Some(3..=60)).is_err());
    }
}
