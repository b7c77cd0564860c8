//! Single-server queue with capacity `n` and state-dependent rates.
//!
//! In state `x` customers arrive at rate `λ(n−x)^β` (zero at `x = n`) and
//! are served at rate `μx^α` (zero at `x = 0`). Both quantities are treated
//! as rates of the exponential clocks; with `θ = λ/μ` the stationary law is
//! MCMPB`(n, α, β, θ)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::mcmpb::McmpbParams;

/// Share of the horizon discarded before occupancy is recorded.
pub const BURN_IN_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueueSpec {
    pub n: usize,
    /// Service exponent.
    pub alpha: f64,
    /// Arrival exponent.
    pub beta: f64,
    pub mu: f64,
    pub lambda_rate: f64,
}

impl QueueSpec {
    pub fn new(n: usize, alpha: f64, beta: f64, mu: f64, lambda_rate: f64) -> Result<Self> {
        let spec = Self {
            n,
            alpha,
            beta,
            mu,
            lambda_rate,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n", "capacity must be at least 1"));
        }
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(invalid("alpha", "rate exponents must be finite"));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(invalid("mu", format!("must be positive, got {}", self.mu)));
        }
        if !(self.lambda_rate > 0.0 && self.lambda_rate.is_finite()) {
            return Err(invalid(
                "lambda",
                format!("must be positive, got {}", self.lambda_rate),
            ));
        }
        Ok(())
    }

    pub fn arrival_rate(&self, x: usize) -> f64 {
        if x >= self.n {
            0.0
        } else {
            self.lambda_rate * ((self.n - x) as f64).powf(self.beta)
        }
    }

    pub fn service_rate(&self, x: usize) -> f64 {
        if x == 0 || x > self.n {
            0.0
        } else {
            self.mu * (x as f64).powf(self.alpha)
        }
    }

    /// The MCMPB law this queue settles into.
    pub fn stationary_params(&self) -> Result<McmpbParams> {
        McmpbParams::new(
            self.n,
            self.alpha,
            self.beta,
            self.lambda_rate.ln() - self.mu.ln(),
        )
    }
}

/// Stationary law from the detailed-balance ladder
/// `π(x+1)/π(x) = λ(n−x)^β / (μ(x+1)^α)`. The ladder is located in log
/// space, then walked outward from its highest rung in linear space so that
/// neighbouring entries keep the exact rate ratio up to a few roundings.
pub fn stationary_exact(spec: &QueueSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = spec.n;
    let (ln_l, ln_m) = (spec.lambda_rate.ln(), spec.mu.ln());
    let (mut top, mut best, mut acc) = (0, 0.0, 0.0);
    for x in 0..n {
        acc += ln_l + spec.beta * ((n - x) as f64).ln() - ln_m - spec.alpha * ((x + 1) as f64).ln();
        if acc > best {
            best = acc;
            top = x + 1;
        }
    }
    let ratio = |x: usize| spec.arrival_rate(x) / spec.service_rate(x + 1);
    let mut pi = vec![0.0; n + 1];
    pi[top] = 1.0;
    for x in top..n {
        pi[x + 1] = pi[x] * ratio(x);
    }
    for x in (0..top).rev() {
        pi[x] = pi[x + 1] / ratio(x);
    }
    let total: f64 = pi.iter().sum();
    Ok(pi.into_iter().map(|p| p / total).collect())
}

/// Largest absolute entry of `Q^T p`, the right-hand side of the forward
/// equation at each state.
pub fn transient_residual(spec: &QueueSpec, pmf: &[f64]) -> Result<f64> {
    spec.validate()?;
    if pmf.len() != spec.n + 1 {
        return Err(Error::DimensionMismatch {
            expected: spec.n + 1,
            got: pmf.len(),
        });
    }
    let n = spec.n;
    let mut worst = 0.0f64;
    for x in 0..=n {
        // Net flow in across the edge below and the edge above.
        let mut d = 0.0;
        if x > 0 {
            d += spec.arrival_rate(x - 1) * pmf[x - 1] - spec.service_rate(x) * pmf[x];
        }
        if x < n {
            d += spec.service_rate(x + 1) * pmf[x + 1] - spec.arrival_rate(x) * pmf[x];
        }
        worst = worst.max(d.abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    /// Fraction of the recorded window spent in each state.
    pub occupancy: Vec<f64>,
    /// Transitions over the whole run, burn-in included.
    pub events: u64,
    pub recorded_time: f64,
}

/// Next-event simulation from state 0 over `[0, horizon]`; occupancy is
/// accumulated after the burn-in window.
pub fn simulate(spec: &QueueSpec, horizon: f64, seed: u64) -> Result<SimulationSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate_with(spec, horizon, &mut rng)
}

pub fn simulate_with<R: Rng + ?Sized>(
    spec: &QueueSpec,
    horizon: f64,
    rng: &mut R,
) -> Result<SimulationSummary> {
    spec.validate()?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(invalid(
            "horizon",
            format!("must be positive, got {horizon}"),
        ));
    }
    let n = spec.n;
    let up: Vec<f64> = (0..=n).map(|x| spec.arrival_rate(x)).collect();
    let down: Vec<f64> = (0..=n).map(|x| spec.service_rate(x)).collect();
    let start = BURN_IN_FRACTION * horizon;

    let mut occupancy = vec![0.0; n + 1];
    let mut state = 0usize;
    let mut t = 0.0f64;
    let mut events = 0u64;
    loop {
        let total = up[state] + down[state];
        let u: f64 = rng.random();
        // 1 - u lies in (0, 1], so the log is finite.
        let dt = -(1.0 - u).ln() / total;
        let next = t + dt;
        let lo = t.max(start);
        let hi = next.min(horizon);
        if hi > lo {
            occupancy[state] += hi - lo;
        }
        if next >= horizon {
            break;
        }
        t = next;
        events += 1;
        let pick: f64 = rng.random::<f64>() * total;
        state = if pick < up[state] {
            state + 1
        } else {
            state - 1
        };
    }
    let recorded_time = horizon - start;
    for o in occupancy.iter_mut() {
        *o /= recorded_time;
    }
    Ok(SimulationSummary {
        occupancy,
        events,
        recorded_time,
    })
}

/// Total-variation distance `½ Σ |p − q|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Long-run mean number of transitions per unit time.
pub fn mean_event_rate(spec: &QueueSpec) -> Result<f64> {
    let pi = stationary_exact(spec)?;
    Ok(pi
        .iter()
        .enumerate()
        .map(|(x, p)| p * (spec.arrival_rate(x) + spec.service_rate(x)))
        .sum())
}
