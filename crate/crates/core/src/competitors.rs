//! Maximum-likelihood fits of the competing count models.
//!
//! Beta-binomial and CMPB choose `n` like MCMPB; every fit honours the
//! zero-truncation flag of the data.

use crate::data::FrequencyData;
use crate::error::Result;
use crate::inference::{fit_model, FitReport, NChoice};
use crate::models::ModelKind;

pub fn fit_bb(data: &FrequencyData, n: NChoice) -> Result<FitReport> {
    fit_model(ModelKind::BetaBinomial, data, n)
}

pub fn fit_cmpb(data: &FrequencyData, n: NChoice) -> Result<FitReport> {
    fit_model(ModelKind::Cmpb, data, n)
}

pub fn fit_nb(data: &FrequencyData) -> Result<FitReport> {
    fit_model(ModelKind::NegativeBinomial, data, NChoice::Auto)
}

pub fn fit_cmp(data: &FrequencyData) -> Result<FitReport> {
    fit_model(ModelKind::Cmp, data, NChoice::Auto)
}

/// Fits every model family to the same data, in [`ModelKind::ALL`] order.
pub fn compare_all(data: &FrequencyData, n: NChoice) -> Vec<(ModelKind, Result<FitReport>)> {
    ModelKind::ALL
        .into_iter()
        .map(|kind| (kind, fit_model(kind, data, n.clone())))
        .collect()
}
