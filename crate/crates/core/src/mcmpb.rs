//! The MCMPB law on `{0, …, n}` with mass proportional to
//! `θ^x / (x!^α (n−x)!^β)`, `θ = e^ψ`.
//!
//! Every table is built in log space from the two-term ratio
//! `a_{k+1}/a_k = θ(n−k)^β/(k+1)^α` starting at `a_0 = 1`, so no factorial
//! is ever formed and negative exponents are handled the same way as
//! positive ones.

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::special::ln_factorial;

/// Largest `|α|`, `|β|`, `|ψ|` accepted by [`build_table`]. Beyond this the
/// law is numerically a point mass.
pub const PARAM_CAP: f64 = 50.0;

/// Relative slack used when comparing probabilities for ties.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmpbParams {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Natural parameter, `log θ`.
    pub psi: f64,
}

impl McmpbParams {
    pub fn new(n: usize, alpha: f64, beta: f64, psi: f64) -> Result<Self> {
        let p = Self {
            n,
            alpha,
            beta,
            psi,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n", "must be at least 1"));
        }
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("psi", self.psi),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, format!("must be finite, got {v}")));
            }
        }
        Ok(())
    }

    fn check_cap(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("psi", self.psi),
        ] {
            if v.abs() > PARAM_CAP {
                return Err(invalid(
                    name,
                    format!("|{name}| = {} exceeds the cap {PARAM_CAP}", v.abs()),
                ));
            }
        }
        Ok(())
    }

    pub fn theta(&self) -> f64 {
        self.psi.exp()
    }

    /// Estimated-parameter vector in the crate-wide order `(α, β, ψ)`.
    pub fn continuous(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.psi]
    }

    /// Arrival-type rate `θ(n−x)^β`, zero at `x = n`.
    pub fn up_rate(&self, x: usize) -> f64 {
        if x >= self.n {
            0.0
        } else {
            self.theta() * ((self.n - x) as f64).powf(self.beta)
        }
    }

    /// Service-type rate `x^α`, zero at `x = 0`.
    pub fn down_rate(&self, x: usize) -> f64 {
        if x == 0 || x > self.n {
            0.0
        } else {
            (x as f64).powf(self.alpha)
        }
    }
}

/// Log of the ratio `P(x+1)/P(x)`. The grouping makes the step of the
/// reflected law the exact negation of this one.
#[inline]
fn log_step(n: usize, alpha: f64, beta: f64, psi: f64, k: usize) -> f64 {
    psi + (beta * ((n - k) as f64).ln() - alpha * ((k + 1) as f64).ln())
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Log masses measured from the largest one, and the log of that largest
/// mass when `a_0 = 1`. Summing the ratios outward from the mode keeps the
/// weights that matter small in magnitude, so rounding stays relative to
/// the probabilities rather than to `log n!`.
pub(crate) fn anchored_log_weights(n: usize, alpha: f64, beta: f64, psi: f64) -> (Vec<f64>, f64) {
    let steps: Vec<f64> = (0..n).map(|k| log_step(n, alpha, beta, psi, k)).collect();
    let (mut anchor, mut best, mut acc) = (0, 0.0, 0.0);
    for (k, s) in steps.iter().enumerate() {
        acc += s;
        if acc > best {
            best = acc;
            anchor = k + 1;
        }
    }
    let mut w = vec![0.0; n + 1];
    let mut up = Compensated::default();
    for x in anchor + 1..=n {
        up.add(steps[x - 1]);
        w[x] = up.value();
    }
    let mut down = Compensated::default();
    for x in (0..anchor).rev() {
        down.add(-steps[x]);
        w[x] = down.value();
    }
    let mut offset = Compensated::default();
    for s in &steps[..anchor] {
        offset.add(*s);
    }
    (w, offset.value())
}

/// `log Σ exp(w)` for weights whose maximum is near zero, with the sum
/// compensated.
fn log_total(w: &[f64]) -> f64 {
    let max = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = Compensated::default();
    for v in w {
        total.add((v - max).exp());
    }
    max + total.value().ln()
}

/// Unnormalized log masses with `a_0` scaled to 1.
pub fn scaled_log_weights(n: usize, alpha: f64, beta: f64, psi: f64) -> Vec<f64> {
    let (w, offset) = anchored_log_weights(n, alpha, beta, psi);
    w.into_iter().map(|v| v + offset).collect()
}

/// Normalized log pmf over `{0..n}` without the parameter cap.
pub(crate) fn log_pmf_vector(n: usize, alpha: f64, beta: f64, psi: f64) -> Vec<f64> {
    let (mut w, _) = anchored_log_weights(n, alpha, beta, psi);
    let z = log_total(&w);
    for v in w.iter_mut() {
        *v -= z;
    }
    w
}

/// Absolute `log C*_n(α, β, ψ) = log Σ_k e^{kψ} / (k!^α (n−k)!^β)`.
pub fn log_norm_star(n: usize, alpha: f64, beta: f64, psi: f64) -> f64 {
    let (w, offset) = anchored_log_weights(n, alpha, beta, psi);
    offset + log_total(&w) - beta * ln_factorial(n)
}

/// Materialized pmf and cdf over `{0..n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable {
    pub params: McmpbParams,
    /// Log of the unnormalized masses, measured from the largest one.
    pub log_weights: Vec<f64>,
    /// `log Σ exp(log_weights)`.
    pub log_norm: f64,
    /// Log of the largest unnormalized mass when `a_0 = 1`.
    pub log_scale: f64,
    pub pmf: Vec<f64>,
    pub cdf: Vec<f64>,
}

pub fn build_table(params: &McmpbParams) -> Result<ProbTable> {
    params.validate()?;
    params.check_cap()?;
    let (log_weights, log_scale) =
        anchored_log_weights(params.n, params.alpha, params.beta, params.psi);
    let log_norm = log_total(&log_weights);
    let pmf: Vec<f64> = log_weights.iter().map(|w| (w - log_norm).exp()).collect();
    let mut cdf = Vec::with_capacity(pmf.len());
    let mut acc = Compensated::default();
    for p in &pmf {
        acc.add(*p);
        cdf.push(acc.value().min(1.0));
    }
    Ok(ProbTable {
        params: *params,
        log_weights,
        log_norm,
        log_scale,
        pmf,
        cdf,
    })
}

impl ProbTable {
    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn log_pmf(&self, x: usize) -> Result<f64> {
        if x > self.n() {
            return Err(Error::OutsideSupport { x, n: self.n() });
        }
        Ok(self.log_weights[x] - self.log_norm)
    }

    /// Absolute `log C_n(α, β, θ)`.
    pub fn log_normalizer(&self) -> f64 {
        self.log_scale + self.log_norm - self.params.beta * ln_factorial(self.n())
    }

    /// Smallest `x` with `cdf[x] ≥ u`.
    pub fn quantile(&self, u: f64) -> Result<usize> {
        if !(0.0..=1.0).contains(&u) {
            return Err(invalid("u", format!("must lie in [0, 1], got {u}")));
        }
        Ok(self.cdf.iter().position(|&c| c >= u).unwrap_or(self.n()))
    }

    /// Upper tail `P(X ≥ x)`, evaluated through the reflected law so that
    /// small tails are not lost to cancellation.
    pub fn sf(&self, x: usize) -> Result<f64> {
        if x > self.n() {
            return Ok(0.0);
        }
        if x == 0 {
            return Ok(1.0);
        }
        let reflected = build_table(&reflect(&self.params))?;
        Ok(reflected.cdf[self.n() - x])
    }
}

/// `log P(X = x)` from the closed form `xψ − α log x! − β log(n−x)! − log C_n`.
pub fn log_pmf(params: &McmpbParams, x: usize) -> Result<f64> {
    params.validate()?;
    if x > params.n {
        return Err(Error::OutsideSupport { x, n: params.n });
    }
    let table = build_table(params)?;
    Ok(x as f64 * params.psi
        - params.alpha * ln_factorial(x)
        - params.beta * ln_factorial(params.n - x)
        - table.log_normalizer())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean: f64,
    /// Central moments `μ₂, μ₃, μ₄`.
    pub central: [f64; 3],
    /// Raw moments `μ′₁ … μ′₄`.
    pub raw: [f64; 4],
    pub dispersion_index: f64,
    pub skewness: f64,
    pub kurtosis_excess: f64,
}

impl MomentSet {
    pub fn variance(&self) -> f64 {
        self.central[0]
    }
}

pub fn moments(table: &ProbTable) -> MomentSet {
    let mut raw = [0.0; 4];
    for (x, p) in table.pmf.iter().enumerate() {
        let xf = x as f64;
        let mut pw = 1.0;
        for r in raw.iter_mut() {
            pw *= xf;
            *r += pw * p;
        }
    }
    let mean = raw[0];
    let mut central = [0.0; 3];
    for (x, p) in table.pmf.iter().enumerate() {
        let d = x as f64 - mean;
        let d2 = d * d;
        central[0] += d2 * p;
        central[1] += d2 * d * p;
        central[2] += d2 * d2 * p;
    }
    central[0] = central[0].max(0.0);
    let var = central[0];
    MomentSet {
        mean,
        central,
        raw,
        dispersion_index: var / mean,
        skewness: central[1] / var.powf(1.5),
        kurtosis_excess: central[2] / (var * var) - 3.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Dispersion,
    Skewness,
    Kurtosis,
}

impl std::str::FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dispersion" => Ok(Self::Dispersion),
            "skewness" => Ok(Self::Skewness),
            "kurtosis" => Ok(Self::Kurtosis),
            other => Err(invalid("index", format!("unknown index `{other}`"))),
        }
    }
}

pub fn shape_index(params: &McmpbParams, kind: IndexKind) -> Result<f64> {
    let m = moments(&build_table(params)?);
    Ok(match kind {
        IndexKind::Dispersion => m.dispersion_index,
        IndexKind::Skewness => m.skewness,
        IndexKind::Kurtosis => m.kurtosis_excess,
    })
}

/// Means and covariance of the statistic `T = (X, log X!, log (n−X)!)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFamilyMoments {
    pub expectations: [f64; 3],
    pub covariance: Matrix3<f64>,
}

pub fn exp_family_derivatives(table: &ProbTable) -> ExpFamilyMoments {
    let n = table.n();
    let stat = |x: usize| [x as f64, ln_factorial(x), ln_factorial(n - x)];
    let mut mean = [0.0; 3];
    for (x, p) in table.pmf.iter().enumerate() {
        let t = stat(x);
        for i in 0..3 {
            mean[i] += p * t[i];
        }
    }
    let mut cov = Matrix3::zeros();
    for (x, p) in table.pmf.iter().enumerate() {
        let t = stat(x);
        let d = [t[0] - mean[0], t[1] - mean[1], t[2] - mean[2]];
        for i in 0..3 {
            for j in i..3 {
                cov[(i, j)] += p * d[i] * d[j];
            }
        }
    }
    for i in 0..3 {
        for j in 0..i {
            cov[(i, j)] = cov[(j, i)];
        }
    }
    ExpFamilyMoments {
        expectations: mean,
        covariance: cov,
    }
}

/// Draws `count` values by cdf inversion with a ChaCha generator seeded by `seed`.
pub fn sample(table: &ProbTable, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(table, count, &mut rng)
}

pub fn sample_with<R: Rng + ?Sized>(table: &ProbTable, count: usize, rng: &mut R) -> Vec<usize> {
    (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            table.cdf.iter().position(|&c| u < c).unwrap_or(table.n())
        })
        .collect()
}

/// The law of `n − X`: `(n, β, α, −ψ)`.
pub fn reflect(params: &McmpbParams) -> McmpbParams {
    McmpbParams {
        n: params.n,
        alpha: params.beta,
        beta: params.alpha,
        psi: -params.psi,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Modality {
    Unimodal {
        mode: usize,
    },
    Bimodal {
        low: usize,
        high: usize,
    },
    /// Two adjacent equal maxima at `a` and `a + 1`.
    FlatPair {
        a: usize,
    },
    Uniform,
}

impl std::fmt::Display for Modality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Modality::Unimodal { mode } => write!(f, "unimodal (mode {mode})"),
            Modality::Bimodal { low, high } => write!(f, "bimodal (modes {low} and {high})"),
            Modality::FlatPair { a } => write!(f, "flat pair (modes {a} and {})", a + 1),
            Modality::Uniform => write!(f, "uniform"),
        }
    }
}

pub fn classify_modality(table: &ProbTable) -> Modality {
    let p = &table.params;
    if p.alpha < 0.0 && p.beta < 0.0 {
        // Log-convex: only the endpoints can be modes.
        let ln_n = (p.n as f64).ln();
        let lower = p.alpha * ln_n;
        let upper = -p.beta * ln_n;
        if p.psi < lower {
            return Modality::Unimodal { mode: 0 };
        }
        if p.psi > upper {
            return Modality::Unimodal { mode: p.n };
        }
        if lower < p.psi && p.psi < upper {
            return Modality::Bimodal { low: 0, high: p.n };
        }
    }
    scan_modality(&table.log_weights)
}

fn scan_modality(lw: &[f64]) -> Modality {
    let same = |a: f64, b: f64| (a - b).abs() <= TIE_TOL;
    if lw.iter().all(|&w| same(w, lw[0])) {
        return Modality::Uniform;
    }
    // Runs of equal values: (start, len, value).
    let mut runs: Vec<(usize, usize, f64)> = Vec::new();
    for (i, &w) in lw.iter().enumerate() {
        match runs.last_mut() {
            Some(run) if same(run.2, w) => run.1 += 1,
            _ => runs.push((i, 1, w)),
        }
    }
    let peaks: Vec<(usize, usize)> = (0..runs.len())
        .filter(|&r| {
            let v = runs[r].2;
            let left_ok = r == 0 || runs[r - 1].2 < v;
            let right_ok = r + 1 == runs.len() || runs[r + 1].2 < v;
            left_ok && right_ok
        })
        .map(|r| (runs[r].0, runs[r].1))
        .collect();
    match peaks.as_slice() {
        [(start, 2)] => Modality::FlatPair { a: *start },
        [(start, _)] => Modality::Unimodal { mode: *start },
        [first, .., last] => Modality::Bimodal {
            low: first.0,
            high: last.0 + last.1 - 1,
        },
        [] => unreachable!("a finite sequence always has a maximal run"),
    }
}

/// `P(x+1) P(x−1) ≤ P(x)²` at every interior point, compared in log space.
pub fn log_concavity_check(table: &ProbTable) -> bool {
    let lw = &table.log_weights;
    (1..lw.len().saturating_sub(1)).all(|x| {
        let lhs = lw[x + 1] + lw[x - 1];
        let rhs = 2.0 * lw[x];
        lhs <= rhs + TIE_TOL * rhs.abs().max(1.0)
    })
}

/// `E[θ(n−X)^β f(X+1) − X^α f(X)]` under `pmf`, with the operator taken
/// from `params`. Zero for every `f` exactly when `pmf` is the law of `params`.
pub fn stein_residual<F>(params: &McmpbParams, pmf: &[f64], f: F) -> Result<f64>
where
    F: Fn(usize) -> f64,
{
    if pmf.len() != params.n + 1 {
        return Err(Error::DimensionMismatch {
            expected: params.n + 1,
            got: pmf.len(),
        });
    }
    let mut acc = 0.0;
    for (x, &p) in pmf.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        acc += p * (params.up_rate(x) * f(x + 1) - params.down_rate(x) * f(x));
    }
    Ok(acc)
}

/// pmf of the `w`-power biased variable, `x^w P(x) / E[X^w]`.
pub fn power_bias(table: &ProbTable, w: f64) -> Result<Vec<f64>> {
    if !w.is_finite() {
        return Err(Error::PowerBiasUndefined(format!("non-finite weight {w}")));
    }
    if w < 0.0 && table.pmf[0] > 0.0 {
        return Err(Error::PowerBiasUndefined(format!(
            "0^{w} is infinite and P(X = 0) > 0"
        )));
    }
    let weight = |x: usize| {
        if x == 0 {
            if w == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            (x as f64).powf(w)
        }
    };
    let biased: Vec<f64> = table
        .pmf
        .iter()
        .enumerate()
        .map(|(x, p)| weight(x) * p)
        .collect();
    let total: f64 = biased.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::PowerBiasUndefined(format!(
            "E[X^{w}] = {total} is not positive"
        )));
    }
    Ok(biased.into_iter().map(|b| b / total).collect())
}

/// Checks that the α-power biased variable is stochastically smaller than
/// `X + 1`, i.e. its cdf lies above the cdf of `X + 1` at every point of
/// `{0..n+1}`.
pub fn power_bias_dominated_by_shift(table: &ProbTable) -> Result<bool> {
    let biased = power_bias(table, table.params.alpha)?;
    let n = table.n();
    let mut cdf_bias = 0.0;
    let mut cdf_shift = 0.0;
    for t in 0..=n + 1 {
        if t <= n {
            cdf_bias += biased[t];
        }
        if t >= 1 {
            cdf_shift += table.pmf[t - 1];
        }
        if cdf_bias + 1e-12 < cdf_shift {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Parameters of the normalized geometric mixture
/// `binomial(n, p)^β · truncCMP(r, λ)^{1−β}`.
pub fn exponential_combination(
    n: usize,
    p: f64,
    lambda: f64,
    r: f64,
    beta: f64,
) -> Result<McmpbParams> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid("p", "must lie in (0, 1)"));
    }
    if !(lambda > 0.0) {
        return Err(invalid("lambda", "must be positive"));
    }
    let psi = lambda.ln() + beta * (p / (lambda * (1.0 - p))).ln();
    McmpbParams::new(n, beta * (1.0 - r) + r, beta, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::log_sum_exp;

    fn table(n: usize, a: f64, b: f64, psi: f64) -> ProbTable {
        build_table(&McmpbParams::new(n, a, b, psi).unwrap()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn uniform_and_binomial_cases() {
        let t = table(2, 0.0, 0.0, 0.0);
        for p in &t.pmf {
            assert!(close(*p, 1.0 / 3.0, 1e-15));
        }
        let t = table(2, 1.0, 1.0, 0.0);
        assert!(close(t.pmf[0], 0.25, 1e-15));
        assert!(close(t.pmf[1], 0.5, 1e-15));
        assert!(close(t.pmf[2], 0.25, 1e-15));
    }

    #[test]
    fn bacterial_fitted_law() {
        let t = table(19, 0.73, -1.00, 3.35);
        assert!(close(400.0 * t.pmf[0], 60.65, 0.5));
        assert!(close(400.0 * t.pmf[1], 91.01, 0.5));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(McmpbParams::new(0, 0.0, 0.0, 0.0).is_err());
        assert!(McmpbParams::new(3, f64::NAN, 0.0, 0.0).is_err());
        assert!(McmpbParams::new(3, 0.0, f64::INFINITY, 0.0).is_err());
        let over = McmpbParams::new(3, 50.5, 0.0, 0.0).unwrap();
        assert!(matches!(
            build_table(&over),
            Err(Error::InvalidParameter { name: "alpha", .. })
        ));
    }

    #[test]
    fn log_pmf_examples() {
        let p = McmpbParams::new(2, 0.0, 0.0, 0.0).unwrap();
        assert!(close(log_pmf(&p, 1).unwrap(), (1.0f64 / 3.0).ln(), 1e-14));
        let p = McmpbParams::new(5, 0.3, -0.2, 0.1).unwrap();
        assert_eq!(log_pmf(&p, 6), Err(Error::OutsideSupport { x: 6, n: 5 }));
        let p = McmpbParams::new(12, 0.93, 0.76, 0.37).unwrap();
        let v = 6115.0 * log_pmf(&p, 6).unwrap().exp();
        assert!(close(v / 6115.0, 1264.63 / 6115.0, 1e-3));
    }

    #[test]
    fn log_pmf_agrees_with_table() {
        let p = McmpbParams::new(40, -0.7, 1.3, 2.1).unwrap();
        let t = build_table(&p).unwrap();
        for x in 0..=40 {
            assert!(close(log_pmf(&p, x).unwrap(), t.log_pmf(x).unwrap(), 1e-12));
        }
    }

    #[test]
    fn moment_examples() {
        let m = moments(&table(2, 0.0, 0.0, 0.0));
        assert!(close(m.mean, 1.0, 1e-14));
        assert!(close(m.variance(), 2.0 / 3.0, 1e-14));
        let m = moments(&table(10, 1.0, 1.0, 0.0));
        assert!(close(m.mean, 5.0, 1e-12));
        assert!(close(m.variance(), 2.5, 1e-12));
        assert!(close(m.skewness, 0.0, 1e-12));
        assert!(moments(&table(15, 0.5, 0.2, 0.5)).dispersion_index > 1.0);
    }

    #[test]
    fn exp_family_uniform_case() {
        let e = exp_family_derivatives(&table(2, 0.0, 0.0, 0.0));
        assert!(close(e.covariance[(0, 0)], 2.0 / 3.0, 1e-14));
        assert!(close(e.expectations[1], 2f64.ln() / 3.0, 1e-14));
    }

    #[test]
    fn exp_family_degenerate_case() {
        let e = exp_family_derivatives(&table(4, 40.0, 40.0, 0.0));
        for i in 0..3 {
            assert!(e.covariance[(i, i)] < 1e-6);
        }
    }

    #[test]
    fn sampling_basics() {
        let t = table(4, 40.0, 40.0, 0.0);
        assert!(sample(&t, 0, 1).is_empty());
        assert!(sample(&t, 1000, 7).iter().all(|&x| x == 2));
        assert_eq!(sample(&t, 50, 3), sample(&t, 50, 3));
    }

    #[test]
    fn reflection_examples() {
        let p = McmpbParams::new(5, 0.5, -0.3, 2f64.ln()).unwrap();
        let r = reflect(&p);
        assert_eq!((r.n, r.alpha, r.beta), (5, -0.3, 0.5));
        assert!(close(r.psi, -(2f64.ln()), 0.0));
        assert_eq!(reflect(&r), p);
        let m1 = moments(&build_table(&p).unwrap()).mean;
        let m2 = moments(&build_table(&r).unwrap()).mean;
        assert!(close(m1 + m2, 5.0, 1e-12));
    }

    #[test]
    fn upper_tail_via_reflection() {
        let t = table(30, 0.4, 0.9, 1.2);
        for x in 0..=30 {
            let direct: f64 = t.pmf[x..].iter().sum();
            assert!(close(t.sf(x).unwrap(), direct, 1e-12));
        }
    }

    #[test]
    fn modality_examples() {
        assert_eq!(
            classify_modality(&table(20, -0.5, -0.5, 0.0)),
            Modality::Bimodal { low: 0, high: 20 }
        );
        match classify_modality(&table(20, 0.1, 0.05, 0.0)) {
            Modality::Unimodal { mode } => assert!(mode > 0 && mode < 20),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            classify_modality(&table(2, 0.0, 0.0, 0.0)),
            Modality::Uniform
        );
    }

    #[test]
    fn modality_negative_trichotomy_matches_scan() {
        for &psi in &[-3.0, -1.0, 0.0, 0.5, 1.0, 3.0] {
            let t = table(20, -0.5, -0.3, psi);
            assert_eq!(
                classify_modality(&t),
                scan_modality(&t.log_weights),
                "psi={psi}"
            );
        }
    }

    #[test]
    fn modality_flat_pair_and_mixed_signs() {
        // (a+1)^α = (n−a)^β at θ = 1 with n = 10, a = 3.
        let a = 7f64.ln();
        let b = 4f64.ln();
        assert_eq!(
            classify_modality(&table(10, a, b, 0.0)),
            Modality::FlatPair { a: 3 }
        );
        // α < 0 < β can put an extra mode at 0.
        let t = table(15, -0.5, 0.7, -2.4);
        assert!(matches!(
            classify_modality(&t),
            Modality::Bimodal { low: 0, .. }
        ));
    }

    #[test]
    fn log_concavity_examples() {
        assert!(log_concavity_check(&table(12, 0.3, 1.7, -0.4)));
        assert!(!log_concavity_check(&table(20, -0.5, -0.5, 0.0)));
        assert!(log_concavity_check(&table(9, 0.0, 0.0, 0.8)));
    }

    #[test]
    fn stein_examples() {
        let p = McmpbParams::new(11, 0.6, -0.4, 0.9).unwrap();
        let t = build_table(&p).unwrap();
        assert!(stein_residual(&p, &t.pmf, |_| 1.0).unwrap().abs() < 1e-12);
        assert!(stein_residual(&p, &t.pmf, |x| x as f64).unwrap().abs() < 1e-10);
        let other = table(11, 0.9, -0.4, 0.9);
        assert!(stein_residual(&p, &other.pmf, |x| x as f64).unwrap().abs() > 1e-3);
        assert!(stein_residual(&p, &t.pmf[..5], |_| 1.0).is_err());
    }

    #[test]
    fn power_bias_examples() {
        let t = table(6, 0.4, 0.3, 0.1);
        let same = power_bias(&t, 0.0).unwrap();
        for (a, b) in same.iter().zip(&t.pmf) {
            assert!(close(*a, *b, 1e-15));
        }
        let t = table(2, 1.0, 1.0, 0.0);
        let sb = power_bias(&t, 1.0).unwrap();
        assert!(close(sb[0], 0.0, 0.0) && close(sb[1], 0.5, 1e-15) && close(sb[2], 0.5, 1e-15));
        assert!(power_bias(&t, -1.0).is_err());
        let mut point = table(3, 0.0, 0.0, 0.0);
        point.pmf = vec![1.0, 0.0, 0.0, 0.0];
        assert!(matches!(
            power_bias(&point, 1.0),
            Err(Error::PowerBiasUndefined(_))
        ));
        let t = table(10, 0.8, 0.3, 0.2);
        assert!(power_bias_dominated_by_shift(&t).unwrap());
    }

    #[test]
    fn exponential_combination_matches_geometric_mixture() {
        let (n, p, lambda, r, beta) = (9usize, 0.35, 1.7, 0.6, 0.4);
        let params = exponential_combination(n, p, lambda, r, beta).unwrap();
        let t = build_table(&params).unwrap();
        let logs: Vec<f64> = (0..=n)
            .map(|x| {
                let lbin = crate::special::ln_binomial(n, x)
                    + x as f64 * p.ln()
                    + (n - x) as f64 * (1.0 - p).ln();
                let lcmp = x as f64 * lambda.ln() - r * ln_factorial(x);
                beta * lbin + (1.0 - beta) * lcmp
            })
            .collect();
        let z = log_sum_exp(&logs);
        for x in 0..=n {
            assert!(close(t.pmf[x], (logs[x] - z).exp(), 1e-12));
        }
    }
}
