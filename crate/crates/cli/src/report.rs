//! Fit report documents (JSON) and the observed-vs-expected text table.

use std::fmt::Write;

use mcmpb_core::FitReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    /// File path or fixture name the data came from.
    pub dataset: String,
    pub fit: FitReport,
}

impl ReportDocument {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub fn render_table(fit: &FitReport) -> String {
    let mut out = String::new();
    let label = match fit.n() {
        Some(n) => format!("{} (n = {n})", fit.model),
        None => fit.model.to_string(),
    };
    let _ = writeln!(
        out,
        "{label}{}",
        if fit.truncated_at_zero {
            ", zero-truncated"
        } else {
            ""
        }
    );
    let _ = writeln!(out, "{:>6} {:>10} {:>12}", "x", "observed", "expected");
    for cell in &fit.cells {
        let x = if cell.tail {
            format!("{}+", cell.value)
        } else {
            cell.value.to_string()
        };
        let _ = writeln!(out, "{x:>6} {:>10} {:>12.2}", cell.observed, cell.expected);
    }
    let total: f64 = fit.expected().iter().sum();
    let _ = writeln!(out, "{:>6} {:>10} {:>12.2}", "total", fit.n_obs, total);
    out.push('\n');
    for (i, name) in fit.parameter_names.iter().enumerate() {
        let _ = write!(out, "{name:>8} = {:>12.6}", fit.estimates[i]);
        if let (Some(se), Some(ci)) = (&fit.se, &fit.ci95) {
            let _ = write!(
                out,
                "  se {:.6}  95% CI [{:.4}, {:.4}]",
                se[i], ci[i][0], ci[i][1]
            );
        }
        out.push('\n');
    }
    let chi = &fit.gof.chi_square;
    let _ = writeln!(out, "log-likelihood = {:.4}", fit.loglik);
    let _ = writeln!(out, "AIC = {:.2}", fit.aic);
    let _ = writeln!(
        out,
        "chi-square = {:.2}, df = {}{}, p-value = {:.4}",
        chi.chisq,
        chi.df,
        if chi.df_floored { " (floored)" } else { "" },
        chi.p_value
    );
    if fit.boundary {
        let _ = writeln!(out, "warning: estimate on the search boundary");
    }
    out
}
