use rayon::prelude::*;
use serde::Serialize;

use super::chaining::{chaining_best, covering_entropy, ChainingSchedule};
use super::params::{regime_check, BoundParams, Regime};
use super::complexity::rademacher_bound;
use crate::capacity::{rademacher_mc, LpNorm};
use crate::error::{Error, Result};
use crate::function_class::{truncate_class, TabulatedClass};
use crate::risk::{empirical_margin_risk, guaranteed_risk_rhs};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub c: Vec<u64>,
    pub m: Vec<f64>,
    pub gamma: Vec<f64>,
    pub d_g: Vec<f64>,
    pub k_g: f64,
    pub m_g: f64,
    pub delta: f64,
}

/// A margin class whose empirical columns are reported on rows with
/// `m` equal to its number of points.
#[derive(Debug, Clone, Copy)]
pub struct EmpiricalInput<'a> {
    pub margins: &'a TabulatedClass,
    pub trials: usize,
    pub seed: u64,
    pub exact_cap: usize,
    /// Largest chaining depth tried.
    pub max_steps: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "C")]
    pub c: u64,
    pub m: f64,
    pub gamma: f64,
    pub delta: f64,
    pub d_g: f64,
    pub k_g: f64,
    pub m_g: f64,
    pub regime: Regime,
    pub thm3_bound: Option<f64>,
    pub chaining_empirical: Option<f64>,
    pub rademacher_mc: Option<f64>,
    pub risk_rhs: Option<f64>,
    pub skipped_reason: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Empirical {
    chaining: f64,
    rademacher: f64,
    margin_risk: f64,
}

fn empirical_at(input: &EmpiricalInput<'_>, gamma: f64, d_g: f64) -> Result<Empirical> {
    let f = truncate_class(input.margins, gamma)?;
    let m = f.n_points() as f64;
    let p2 = LpNorm::integer(2)?;
    let (_, chaining) = chaining_best(
        ChainingSchedule::default_alpha(d_g),
        |e| covering_entropy(&f, e, p2, input.exact_cap),
        m,
        gamma,
        input.max_steps,
    )?;
    let rademacher = rademacher_mc(&f, input.trials, input.seed)?.value;
    let mut margin_risk = f64::INFINITY;
    for row in input.margins.rows() {
        margin_risk = margin_risk.min(empirical_margin_risk(row, gamma)?);
    }
    Ok(Empirical {
        chaining,
        rademacher,
        margin_risk,
    })
}

fn grid_points(grid: &SweepGrid) -> Vec<(u64, f64, f64, f64)> {
    let mut out = Vec::new();
    for &c in &grid.c {
        for &m in &grid.m {
            for &g in &grid.gamma {
                for &d in &grid.d_g {
                    out.push((c, m, g, d));
                }
            }
        }
    }
    out
}

/// One row per grid point, ordered with `C` outermost and `d_G` innermost.
/// Inadmissible points are kept with their violation as `skipped_reason`.
/// `risk_rhs` combines the bound with the smallest empirical margin risk of
/// the supplied class, or with zero margin risk when there is none.
pub fn sweep(grid: &SweepGrid, empirical: Option<&EmpiricalInput<'_>>) -> Result<Vec<SweepRow>> {
    let points = grid_points(grid);
    if points.is_empty() {
        return Err(Error::Precondition("empty sweep grid".into()));
    }
    let rows: Vec<Result<SweepRow>> = points
        .into_par_iter()
        .map(|(c, m, gamma, d_g)| {
            let params = BoundParams::new(c, m, gamma, grid.delta, grid.m_g, grid.k_g, d_g)?;
            let mut row = SweepRow {
                c,
                m,
                gamma,
                delta: grid.delta,
                d_g,
                k_g: grid.k_g,
                m_g: grid.m_g,
                regime: params.regime(),
                thm3_bound: None,
                chaining_empirical: None,
                rademacher_mc: None,
                risk_rhs: None,
                skipped_reason: None,
            };
            let verdict = regime_check(&params);
            if let Some(v) = verdict.violation {
                row.skipped_reason = Some(v);
                return Ok(row);
            }
            let bound = rademacher_bound(&params)?.value;
            row.thm3_bound = Some(bound);
            let emp = match empirical {
                Some(input) if input.margins.n_points() as f64 == m => Some(empirical_at(input, gamma, d_g)?),
                _ => None,
            };
            if let Some(e) = emp {
                row.chaining_empirical = Some(e.chaining);
                row.rademacher_mc = Some(e.rademacher);
            }
            let margin_risk = emp.map_or(0.0, |e| e.margin_risk);
            // beyond usize the concentration term is zero to double precision
            let m_int = if m < usize::MAX as f64 { m as usize } else { usize::MAX };
            row.risk_rhs = Some(guaranteed_risk_rhs(margin_risk, bound, gamma, grid.delta, m_int)?);
            Ok(row)
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    if rows.iter().all(|r| r.skipped_reason.is_some()) {
        return Err(Error::Regime("no admissible point in the sweep grid".into()));
    }
    Ok(rows)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// `lo, lo*mul, lo*mul^2, ...` up to `hi` (inclusive, with a relative slack
/// for rounding).
pub fn geometric_range(lo: f64, hi: f64, mul: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && mul > 1.0 && hi.is_finite()) {
        return Err(crate::error::out_of_range(
            "range",
            format!("need 0 < lo <= hi and mul > 1, got {lo}:{hi}:{mul}"),
        ));
    }
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi * (1.0 + 1e-12) {
        out.push(x);
        x *= mul;
    }
    Ok(out)
}
