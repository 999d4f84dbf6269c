use std::collections::BTreeMap;
use std::f64::consts::E;

use serde::Serialize;

use super::chaining::ChainingSchedule;
use super::params::{regime_check, BoundParams, Regime};
use crate::error::{Error, Result};

/// The Rademacher complexity bound with every factor it is built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RademacherBound {
    pub value: f64,
    pub regime: Regime,
    pub breakdown: BTreeMap<String, f64>,
}

/// `t + 1/(2t)` with `t = sqrt(ln(2 K'))`.
pub(crate) fn bracket(k_prime: f64) -> f64 {
    let t = (2.0 * k_prime).ln().sqrt();
    t + 1.0 / (2.0 * t)
}

/// Bound on the empirical Rademacher complexity of the truncated margin
/// class, in the regime selected by `d_G`. Inadmissible sample sizes are
/// rejected with the violated inequality.
pub fn rademacher_bound(params: &BoundParams) -> Result<RademacherBound> {
    let verdict = regime_check(params);
    if let Some(v) = verdict.violation {
        return Err(Error::Regime(v));
    }
    let c = params.c_categories as f64;
    let m = params.sample_size;
    let g = params.gamma;
    let d = params.d_g;
    let l = params.log2_2c();
    let mut b = BTreeMap::new();
    b.insert("log2_2c".to_string(), l);
    b.insert("alpha".to_string(), ChainingSchedule::default_alpha(d));
    let value = match verdict.regime {
        Regime::Sub2 => {
            let prefactor = 4.0 * (10.0 * 72f64.powf(d) * params.k_g / (2.0 * (2.0 - d))).sqrt();
            let sample = c.sqrt() * l.powf(0.5 + d / 2.0) / m.sqrt();
            let scale = g.powf(1.0 - d / 2.0) * (1.0 + 2f64.powf(2.0 / (2.0 - d)));
            let k = 14.0 * params.m_g * l.powf(1.0 / 7.0) / g;
            let k_prime = k.powf((2.0 - d) / 2.0);
            let br = bracket(k_prime);
            b.insert("prefactor".into(), prefactor);
            b.insert("sample_factor".into(), sample);
            b.insert("gamma_factor".into(), scale);
            b.insert("k_const".into(), k);
            b.insert("k_prime".into(), k_prime);
            b.insert("bracket".into(), br);
            prefactor * sample * scale * br
        }
        Regime::At2 => {
            let n = (m / c).sqrt().log2().ceil();
            let head = g * (c / m).sqrt();
            let log_term = (60.0 * E * m.powf(1.5) * l * params.m_g / (g * c.sqrt())).ln().sqrt();
            let tail = 180.0 * (2.0 * c * params.k_g / m).sqrt() * l * n * log_term;
            b.insert("n_steps".into(), n);
            b.insert("head".into(), head);
            b.insert("log_term".into(), log_term);
            b.insert("tail".into(), tail);
            head + tail
        }
        Regime::Super2 => {
            let head = g * (l * l / m).powf(1.0 / d);
            let constant = 8.0
                * (2.0 * params.k_g).sqrt()
                * 30f64.powf(d / 2.0)
                * d.powf(d - 2.0)
                * g.powf(1.0 - d / 2.0)
                * (1.0 + 2f64.powf(2.0 / (d - 2.0)));
            let sample = c.sqrt() * l.powf(2.0 - d / 2.0) * m.powf(-1.0 / d);
            let log_term = (60.0 * E * d * d * m.powf(1.0 + 1.0 / d) * params.m_g / (g * l)).ln().sqrt();
            let n = ((d - 2.0) / (2.0 * d) * (m / (l * l)).log2()).ceil();
            b.insert("n_steps".into(), n);
            b.insert("head".into(), head);
            b.insert("constant".into(), constant);
            b.insert("sample_factor".into(), sample);
            b.insert("log_term".into(), log_term);
            b.insert("tail".into(), constant * sample * log_term);
            head + constant * sample * log_term
        }
    };
    b.insert("value".into(), value);
    Ok(RademacherBound {
        value,
        regime: verdict.regime,
        breakdown: b,
    })
}
