use serde::Serialize;

use super::oracle::FatDimOracle;
use super::params::BoundParams;
use crate::error::{out_of_range, Error, Result};

/// A metric entropy bound with the dimensions it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyBound {
    pub value: f64,
    /// Dimension entering the formula.
    pub d_bound: f64,
    /// Dimension entering the sample-size precondition.
    pub d_precondition: f64,
}

fn check_common(epsilon: f64, p: u32, n: f64, m_f: f64) -> Result<()> {
    if p < 3 {
        return Err(out_of_range("p", format!("{p} < 3")));
    }
    if !(m_f >= 1.0 && m_f.is_finite()) {
        return Err(out_of_range("m_f", format!("{m_f} < 1")));
    }
    if !(epsilon > 0.0 && epsilon <= m_f) {
        return Err(out_of_range("epsilon", format!("{epsilon} not in (0, {m_f}]")));
    }
    if !(n >= 1.0) {
        return Err(out_of_range("n", format!("{n} < 1")));
    }
    Ok(())
}

fn check_sample(n: f64, d: f64, scale: &str) -> Result<()> {
    if n < d {
        return Err(Error::Precondition(format!("n = {n} < d({scale}) = {d}")));
    }
    Ok(())
}

/// `2 d ln(15 e p n M_F / (d epsilon))` with `d = d(epsilon / 15p)`, valid
/// when `n >= d`. Zero dimension gives 0.
pub fn entropy_bound_a(epsilon: f64, p: u32, n: f64, m_f: f64, d: &FatDimOracle) -> Result<EntropyBound> {
    check_common(epsilon, p, n, m_f)?;
    let pf = p as f64;
    let dim = d.eval(epsilon / (15.0 * pf))?;
    check_sample(n, dim, "epsilon/15p")?;
    let value = if dim == 0.0 {
        0.0
    } else {
        2.0 * dim * (15.0 * std::f64::consts::E * pf * n * m_f / (dim * epsilon)).ln()
    };
    Ok(EntropyBound {
        value,
        d_bound: dim,
        d_precondition: dim,
    })
}

/// `10 p d(epsilon / 36p) ln(7 p^{1/7} M_F / epsilon)`, valid when
/// `n >= d(epsilon / 37p)`.
pub fn entropy_bound_b(epsilon: f64, p: u32, n: f64, m_f: f64, d: &FatDimOracle) -> Result<EntropyBound> {
    check_common(epsilon, p, n, m_f)?;
    let pf = p as f64;
    let d_pre = d.eval(epsilon / (37.0 * pf))?;
    check_sample(n, d_pre, "epsilon/37p")?;
    let dim = d.eval(epsilon / (36.0 * pf))?;
    let value = if dim == 0.0 {
        0.0
    } else {
        10.0 * pf * dim * (7.0 * pf.powf(1.0 / 7.0) * m_f / epsilon).ln()
    };
    Ok(EntropyBound {
        value,
        d_bound: dim,
        d_precondition: d_pre,
    })
}

/// The two product-class entropy bounds, with `p = ceil(log2 C)` and
/// `L = log2(2C)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductEntropyBounds {
    /// `2 C d(epsilon / 30L) ln(30 e n L M_G / epsilon)`.
    pub with_sample_size: f64,
    /// `10 C L d(epsilon / 72L) ln(14 L^{1/7} M_G / epsilon)`.
    pub sample_free: f64,
    pub p: u32,
    pub log2_2c: f64,
    pub d_with_sample_size: f64,
    pub d_sample_free: f64,
}

/// Entropy bounds for the truncated margin class of `C > 4` categories at
/// `epsilon` in `(0, gamma]`, on `n = params.sample_size` points.
pub fn product_entropy_bounds(epsilon: f64, params: &BoundParams, d: &FatDimOracle) -> Result<ProductEntropyBounds> {
    let c = params.c_categories;
    if c <= 4 {
        return Err(out_of_range("c_categories", format!("C > 4 fails (C = {c})")));
    }
    if !(epsilon > 0.0 && epsilon <= params.gamma) {
        return Err(out_of_range("epsilon", format!("{epsilon} not in (0, {}]", params.gamma)));
    }
    let cf = c as f64;
    let l = params.log2_2c();
    let p = (c as f64).log2().ceil() as u32;
    let n = params.sample_size;
    let d3 = d.eval(epsilon / (30.0 * l))?;
    let d4 = d.eval(epsilon / (72.0 * l))?;
    let with_sample_size = if d3 == 0.0 {
        0.0
    } else {
        2.0 * cf * d3 * (30.0 * std::f64::consts::E * n * l * params.m_g / epsilon).ln()
    };
    let sample_free = if d4 == 0.0 {
        0.0
    } else {
        10.0 * cf * l * d4 * (14.0 * l.powf(1.0 / 7.0) * params.m_g / epsilon).ln()
    };
    Ok(ProductEntropyBounds {
        with_sample_size,
        sample_free,
        p,
        log2_2c: l,
        d_with_sample_size: d3,
        d_sample_free: d4,
    })
}
