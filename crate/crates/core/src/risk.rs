//! Losses, empirical risks and the guaranteed-risk right-hand side.

use serde::Serialize;

use crate::error::{out_of_range, Error, Result};

/// Indicator loss: 1 iff `t <= 0`.
pub fn phi(t: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else {
        0.0
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma <= 1.0 {
        Ok(())
    } else {
        Err(out_of_range("gamma", format!("{gamma} not in (0, 1]")))
    }
}

/// Truncated hinge loss: 1 below zero, `1 - t/gamma` on `(0, gamma]`, 0 above.
pub fn phi_gamma(t: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(if t <= 0.0 {
        1.0
    } else if t <= gamma {
        1.0 - t / gamma
    } else {
        0.0
    })
}

fn mean_loss(row: &[f64], loss: impl Fn(f64) -> f64) -> Result<f64> {
    if row.is_empty() {
        return Err(Error::InvalidDataset("empty sample".into()));
    }
    Ok(row.iter().map(|&t| loss(t)).sum::<f64>() / row.len() as f64)
}

/// `(1/m) sum_i phi_gamma(f(Z_i))` for one tabulated margin function.
///
/// The row may hold either truncated or raw margins: `phi_gamma` does not
/// see the difference.
pub fn empirical_margin_risk(row: &[f64], gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    mean_loss(row, |t| phi_gamma(t, gamma).expect("gamma checked"))
}

/// Misclassification frequency. Ties (`f_g = 0`) count as errors.
pub fn empirical_risk(row: &[f64]) -> Result<f64> {
    mean_loss(row, phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskReport {
    pub empirical_risk: f64,
    pub empirical_margin_risk: f64,
    pub gamma: f64,
    pub sample_size: usize,
}

/// Both empirical risks of a raw (untruncated) margin row.
pub fn risk_report(margin_row: &[f64], gamma: f64) -> Result<RiskReport> {
    Ok(RiskReport {
        empirical_risk: empirical_risk(margin_row)?,
        empirical_margin_risk: empirical_margin_risk(margin_row, gamma)?,
        gamma,
        sample_size: margin_row.len(),
    })
}

/// `L_{gamma,m} + (2/gamma) R_m + sqrt(ln(1/delta) / (2m))`.
pub fn guaranteed_risk_rhs(
    empirical_margin_risk: f64,
    rademacher: f64,
    gamma: f64,
    delta: f64,
    m: usize,
) -> Result<f64> {
    check_gamma(gamma)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(out_of_range("delta", format!("{delta} not in (0, 1)")));
    }
    if m < 1 {
        return Err(out_of_range("m", "sample size must be >= 1"));
    }
    if !(0.0..=1.0).contains(&empirical_margin_risk) {
        return Err(out_of_range(
            "empirical_margin_risk",
            format!("{empirical_margin_risk} not in [0, 1]"),
        ));
    }
    if !(rademacher >= 0.0) {
        return Err(out_of_range("rademacher", format!("{rademacher} < 0")));
    }
    let concentration = ((1.0 / delta).ln() / (2.0 * m as f64)).sqrt();
    Ok(empirical_margin_risk + 2.0 / gamma * rademacher + concentration)
}
