use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Result};

/// Growth regime of the fat-shattering dimension exponent `d_G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Sub2,
    At2,
    Super2,
}

impl Regime {
    pub fn of(d_g: f64) -> Self {
        if d_g < 2.0 {
            Regime::Sub2
        } else if d_g == 2.0 {
            Regime::At2
        } else {
            Regime::Super2
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Sub2 => "sub2",
            Regime::At2 => "at2",
            Regime::Super2 => "super2",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Every constant the Rademacher bound depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub c_categories: u64,
    /// Sample size `m`. Stored as a float so sweeps can reach sizes beyond
    /// `u64`; always a whole number.
    pub sample_size: f64,
    pub gamma: f64,
    pub delta: f64,
    pub m_g: f64,
    pub k_g: f64,
    pub d_g: f64,
}

impl BoundParams {
    /// Validates the ranges of the individual parameters. Sample-size
    /// admissibility is a separate question, see [`regime_check`].
    pub fn new(c_categories: u64, sample_size: f64, gamma: f64, delta: f64, m_g: f64, k_g: f64, d_g: f64) -> Result<Self> {
        if c_categories < 1 {
            return Err(out_of_range("c_categories", "need C >= 1"));
        }
        if !(sample_size >= 1.0 && sample_size.is_finite() && sample_size.fract() == 0.0) {
            return Err(out_of_range("sample_size", format!("{sample_size} is not a positive integer")));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(out_of_range("gamma", format!("{gamma} not in (0, 1]")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(out_of_range("delta", format!("{delta} not in (0, 1)")));
        }
        if !(m_g >= 1.0 && m_g.is_finite()) {
            return Err(out_of_range("m_g", format!("{m_g} < 1")));
        }
        if !(k_g > 0.0 && k_g.is_finite()) {
            return Err(out_of_range("k_g", format!("{k_g} is not a positive real")));
        }
        if !(d_g > 0.0 && d_g.is_finite()) {
            return Err(out_of_range("d_g", format!("{d_g} is not a positive real")));
        }
        Ok(Self {
            c_categories,
            sample_size,
            gamma,
            delta,
            m_g,
            k_g,
            d_g,
        })
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.d_g)
    }

    /// `log_2(2C)`.
    pub fn log2_2c(&self) -> f64 {
        (2.0 * self.c_categories as f64).log2()
    }
}

/// Outcome of the sample-size admissibility check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeVerdict {
    pub regime: Regime,
    pub admissible: bool,
    pub violation: Option<String>,
}

/// `d_G <= 2` needs `m > C > 4`; `d_G > 2` needs `m >= C^{1.2}` and `C > 4`.
pub fn regime_check(params: &BoundParams) -> RegimeVerdict {
    let c = params.c_categories as f64;
    let m = params.sample_size;
    let regime = params.regime();
    let violation = if params.c_categories <= 4 {
        Some(format!("C > 4 fails (C = {})", params.c_categories))
    } else if params.d_g <= 2.0 {
        (m <= c).then(|| format!("m > C fails (m = {m}, C = {c})"))
    } else {
        let need = c.powf(1.2);
        (m < need).then(|| format!("m >= C^1.2 fails (m = {m}, C^1.2 = {need:.4})"))
    };
    RegimeVerdict {
        regime,
        admissible: violation.is_none(),
        violation,
    }
}
