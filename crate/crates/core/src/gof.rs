//! Pearson χ² with tail-cell merging, and AIC.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::special::chi_square_sf;

/// Every merged cell must carry at least this expected count.
pub const MIN_EXPECTED: f64 = 5.0;

/// A run of consecutive input cells pooled into one χ² cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellGroup {
    pub first: usize,
    pub last: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub chisq: f64,
    pub df: usize,
    pub p_value: f64,
    /// Pooled cells, as index ranges into the input arrays.
    pub groups: Vec<CellGroup>,
    /// Set when merging left fewer than `k + 2` cells and `df` was raised to 1.
    pub df_floored: bool,
}

impl ChiSquareTest {
    pub fn merged_cell_count(&self) -> usize {
        self.groups.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofSummary {
    pub aic: f64,
    pub chi_square: ChiSquareTest,
}

pub fn aic(loglik: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(invalid("k", "at least one estimated parameter is required"));
    }
    Ok(-2.0 * loglik + 2.0 * k as f64)
}

pub fn chisq_test(observed: &[f64], expected: &[f64], k_params: usize) -> Result<ChiSquareTest> {
    chisq_test_with_threshold(observed, expected, k_params, MIN_EXPECTED)
}

/// Pools cells inward from both tails until each pooled cell has expected
/// count at least `threshold`; any interior cell still short is joined to its
/// smaller neighbour.
pub fn chisq_test_with_threshold(
    observed: &[f64],
    expected: &[f64],
    k_params: usize,
    threshold: f64,
) -> Result<ChiSquareTest> {
    if observed.len() != expected.len() {
        return Err(Error::DimensionMismatch {
            expected: observed.len(),
            got: expected.len(),
        });
    }
    if observed.is_empty() {
        return Err(Error::InvalidData("no cells".into()));
    }
    let so: f64 = observed.iter().sum();
    let se: f64 = expected.iter().sum();
    if (so - se).abs() > 0.5 {
        return Err(Error::InvalidData(format!(
            "observed total {so} and expected total {se} differ by more than 0.5"
        )));
    }

    let groups = merge_cells(expected, threshold);
    let mut chisq = 0.0;
    for g in &groups {
        let o: f64 = observed[g.first..=g.last].iter().sum();
        let e: f64 = expected[g.first..=g.last].iter().sum();
        if e > 0.0 {
            chisq += (o - e) * (o - e) / e;
        } else if o > 0.0 {
            chisq = f64::INFINITY;
        }
    }
    let raw_df = groups.len() as i64 - 1 - k_params as i64;
    let df_floored = raw_df < 1;
    let df = raw_df.max(1) as usize;
    Ok(ChiSquareTest {
        chisq,
        df,
        p_value: chi_square_sf(chisq, df),
        groups,
        df_floored,
    })
}

fn merge_cells(expected: &[f64], threshold: f64) -> Vec<CellGroup> {
    let mut groups: Vec<(CellGroup, f64)> = expected
        .iter()
        .enumerate()
        .map(|(i, &e)| (CellGroup { first: i, last: i }, e))
        .collect();
    let join = |groups: &mut Vec<(CellGroup, f64)>, left: usize| {
        let (right, e) = groups.remove(left + 1);
        groups[left].0.last = right.last;
        groups[left].1 += e;
    };
    while groups.len() > 1 && groups[0].1 < threshold {
        join(&mut groups, 0);
    }
    while groups.len() > 1 && groups[groups.len() - 1].1 < threshold {
        let k = groups.len() - 2;
        join(&mut groups, k);
    }
    let mut i = 1;
    while groups.len() > 2 && i + 1 < groups.len() {
        if groups[i].1 < threshold {
            if groups[i - 1].1 <= groups[i + 1].1 {
                join(&mut groups, i - 1);
            } else {
                join(&mut groups, i);
            }
            i = 1;
        } else {
            i += 1;
        }
    }
    groups.into_iter().map(|(g, _)| g).collect()
}

impl std::fmt::Display for ChiSquareTest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let pooled: Vec<String> = self
            .groups
            .iter()
            .filter(|g| g.last > g.first)
            .map(|g| format!("[{}..{}]", g.first, g.last))
            .collect();
        write!(
            f,
            "chi2 = {:.4}, df = {}{}, p = {:.4}",
            self.chisq,
            self.df,
            if self.df_floored { " (floored)" } else { "" },
            self.p_value
        )?;
        if !pooled.is_empty() {
            write!(f, ", pooled cells {}", pooled.join(" "))?;
        }
        Ok(())
    }
}
