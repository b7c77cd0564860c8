//! Count models that can be fitted and compared: MCMPB and its competitors.

use serde::{Deserialize, Serialize};

use crate::cmp::{cmp_log_norm, CmpParams};
use crate::error::{invalid, Error, Result};
use crate::mcmpb::{log_pmf_vector, McmpbParams};
use crate::special::{ln_binomial, ln_factorial, ln_one_minus_exp, log_sum_exp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Mcmpb,
    Cmpb,
    #[serde(rename = "bb")]
    BetaBinomial,
    #[serde(rename = "nb")]
    NegativeBinomial,
    Cmp,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Mcmpb,
        ModelKind::Cmpb,
        ModelKind::BetaBinomial,
        ModelKind::Cmp,
        ModelKind::NegativeBinomial,
    ];

    /// Whether the support is `{0..n}` with `n` chosen by profile likelihood.
    pub fn bounded(self) -> bool {
        matches!(self, Self::Mcmpb | Self::Cmpb | Self::BetaBinomial)
    }

    /// Continuous parameters estimated by ML; the integer `n` is not counted.
    pub fn parameter_count(self) -> usize {
        self.parameter_names().len()
    }

    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            Self::Mcmpb => &["alpha", "beta", "psi"],
            Self::Cmpb => &["alpha", "psi"],
            Self::BetaBinomial => &["a", "b"],
            Self::NegativeBinomial => &["r", "p"],
            Self::Cmp => &["r", "lambda"],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Mcmpb => "MCMPB",
            Self::Cmpb => "CMPB",
            Self::BetaBinomial => "BB",
            Self::NegativeBinomial => "NB",
            Self::Cmp => "CMP",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mcmpb" => Ok(Self::Mcmpb),
            "cmpb" => Ok(Self::Cmpb),
            "bb" | "beta-binomial" => Ok(Self::BetaBinomial),
            "nb" | "negative-binomial" => Ok(Self::NegativeBinomial),
            "cmp" => Ok(Self::Cmp),
            other => Err(invalid("model", format!("unknown model `{other}`"))),
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A fully specified member of one of the model families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelParams {
    Mcmpb(McmpbParams),
    Cmpb {
        n: usize,
        alpha: f64,
        psi: f64,
    },
    #[serde(rename = "bb")]
    BetaBinomial {
        n: usize,
        a: f64,
        b: f64,
    },
    #[serde(rename = "nb")]
    NegativeBinomial {
        r: f64,
        p: f64,
    },
    Cmp {
        r: f64,
        lambda: f64,
    },
}

/// Log probabilities on `{0..upper}` plus the log mass above `upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogTable {
    pub log_pmf: Vec<f64>,
    pub log_tail: f64,
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            Self::Mcmpb(_) => ModelKind::Mcmpb,
            Self::Cmpb { .. } => ModelKind::Cmpb,
            Self::BetaBinomial { .. } => ModelKind::BetaBinomial,
            Self::NegativeBinomial { .. } => ModelKind::NegativeBinomial,
            Self::Cmp { .. } => ModelKind::Cmp,
        }
    }

    /// Upper end of the support for bounded families.
    pub fn support_max(&self) -> Option<usize> {
        match self {
            Self::Mcmpb(p) => Some(p.n),
            Self::Cmpb { n, .. } | Self::BetaBinomial { n, .. } => Some(*n),
            _ => None,
        }
    }

    /// Continuous parameters, in the order of [`ModelKind::parameter_names`].
    pub fn estimates(&self) -> Vec<f64> {
        match *self {
            Self::Mcmpb(p) => p.continuous().to_vec(),
            Self::Cmpb { alpha, psi, .. } => vec![alpha, psi],
            Self::BetaBinomial { a, b, .. } => vec![a, b],
            Self::NegativeBinomial { r, p } => vec![r, p],
            Self::Cmp { r, lambda } => vec![r, lambda],
        }
    }

    /// Replaces the continuous parameters, keeping `n`.
    pub fn with_estimates(&self, v: &[f64]) -> Self {
        match *self {
            Self::Mcmpb(p) => Self::Mcmpb(McmpbParams {
                n: p.n,
                alpha: v[0],
                beta: v[1],
                psi: v[2],
            }),
            Self::Cmpb { n, .. } => Self::Cmpb {
                n,
                alpha: v[0],
                psi: v[1],
            },
            Self::BetaBinomial { n, .. } => Self::BetaBinomial {
                n,
                a: v[0],
                b: v[1],
            },
            Self::NegativeBinomial { .. } => Self::NegativeBinomial { r: v[0], p: v[1] },
            Self::Cmp { .. } => Self::Cmp {
                r: v[0],
                lambda: v[1],
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.estimates().iter().all(|v| v.is_finite());
        if !finite {
            return Err(invalid("params", "parameters must be finite"));
        }
        match *self {
            Self::Mcmpb(p) => p.validate(),
            Self::Cmpb { n, .. } if n == 0 => Err(invalid("n", "must be at least 1")),
            Self::BetaBinomial { n, a, b } => {
                if n == 0 {
                    Err(invalid("n", "must be at least 1"))
                } else if !(a > 0.0 && b > 0.0) {
                    Err(invalid("a", "a and b must be positive"))
                } else {
                    Ok(())
                }
            }
            Self::NegativeBinomial { r, p } => {
                if !(r > 0.0) {
                    Err(invalid("r", "must be positive"))
                } else if !(p > 0.0 && p < 1.0) {
                    Err(invalid("p", "must lie in (0, 1)"))
                } else {
                    Ok(())
                }
            }
            Self::Cmp { r, lambda } => CmpParams::new(r, lambda).map(|_| ()),
            Self::Cmpb { .. } => Ok(()),
        }
    }

    /// Log pmf on `{0..upper}`; bounded families use `upper = n` and ignore
    /// the argument.
    pub fn log_table(&self, upper: usize) -> Result<LogTable> {
        self.validate()?;
        match *self {
            Self::Mcmpb(p) => Ok(mcmpb_log_table(p.n, p.alpha, p.beta, p.psi)),
            Self::Cmpb { n, alpha, psi } => Ok(mcmpb_log_table(n, alpha, alpha, psi)),
            Self::BetaBinomial { n, a, b } => Ok(LogTable {
                log_pmf: (0..=n).map(|x| beta_binomial_log_pmf(n, a, b, x)).collect(),
                log_tail: f64::NEG_INFINITY,
            }),
            Self::NegativeBinomial { r, p } => {
                let log_pmf: Vec<f64> = (0..=upper)
                    .map(|x| negative_binomial_log_pmf(r, p, x))
                    .collect();
                Ok(with_tail(log_pmf))
            }
            Self::Cmp { r, lambda } => {
                let log_z = cmp_log_norm(&CmpParams::new(r, lambda)?)?;
                let ln_l = lambda.ln();
                let log_pmf: Vec<f64> = (0..=upper)
                    .map(|x| x as f64 * ln_l - r * ln_factorial(x) - log_z)
                    .collect();
                Ok(with_tail(log_pmf))
            }
        }
    }

    pub fn log_pmf(&self, x: usize) -> Result<f64> {
        if let Some(n) = self.support_max() {
            if x > n {
                return Err(Error::OutsideSupport { x, n });
            }
        }
        Ok(self.log_table(x)?.log_pmf[x])
    }
}

fn with_tail(log_pmf: Vec<f64>) -> LogTable {
    let head = log_sum_exp(&log_pmf).min(0.0);
    LogTable {
        log_pmf,
        log_tail: ln_one_minus_exp(head),
    }
}

pub(crate) fn mcmpb_log_table(n: usize, alpha: f64, beta: f64, psi: f64) -> LogTable {
    LogTable {
        log_pmf: log_pmf_vector(n, alpha, beta, psi),
        log_tail: f64::NEG_INFINITY,
    }
}

/// `C(n, x) B(a + x, b + n − x) / B(a, b)`, evaluated as a ratio of rising
/// factorials so that large `a`, `b` do not cancel.
pub fn beta_binomial_log_pmf(n: usize, a: f64, b: f64, x: usize) -> f64 {
    let rising = |base: f64, len: usize| -> f64 { (0..len).map(|j| (base + j as f64).ln()).sum() };
    ln_binomial(n, x) + rising(a, x) + rising(b, n - x) - rising(a + b, n)
}

/// `C(r + x − 1, x) p^x (1 − p)^r`.
pub fn negative_binomial_log_pmf(r: f64, p: f64, x: usize) -> f64 {
    let rising: f64 = (0..x).map(|j| (r + j as f64).ln()).sum();
    rising - ln_factorial(x) + x as f64 * p.ln() + r * (-p).ln_1p()
}
