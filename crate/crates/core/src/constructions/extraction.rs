use rand::seq::index;
use serde::Serialize;

use crate::capacity::{is_separated, LpNorm};
use crate::error::{out_of_range, Result};
use crate::function_class::TabulatedClass;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionReport {
    /// `112 (2M)^{2p} ln|F| / (3 epsilon^{2p})`, uncapped.
    pub q_bound: f64,
    pub subset_size: usize,
    /// `epsilon / 2^{(p+1)/p}`.
    pub epsilon_1: f64,
    pub attempts_used: usize,
    /// Sorted columns of the first subsample found, if any.
    pub indices: Option<Vec<usize>>,
}

impl ExtractionReport {
    pub fn succeeded(&self) -> bool {
        self.indices.is_some()
    }
}

/// The subsample size bound for an `epsilon`-separated class of `size`
/// functions with range `m_f`.
pub fn extraction_q_bound(size: usize, epsilon: f64, p: u32, m_f: f64) -> f64 {
    let two_p = 2.0 * p as f64;
    112.0 * (2.0 * m_f).powf(two_p) * (size as f64).ln() / (3.0 * epsilon.powf(two_p))
}

/// Searches for a set of columns on which the `epsilon`-separated class `f`
/// stays `epsilon_1`-separated, with the size given by the bound (capped at
/// `n`). Attempt `a` draws its subset from substream `a` of `seed`.
pub fn extract_subsample(
    f: &TabulatedClass,
    epsilon: f64,
    p: u32,
    seed: u64,
    attempts: usize,
) -> Result<ExtractionReport> {
    extract_subsample_sized(f, epsilon, p, seed, attempts, None)
}

/// As [`extract_subsample`], optionally overriding the subset size.
pub fn extract_subsample_sized(
    f: &TabulatedClass,
    epsilon: f64,
    p: u32,
    seed: u64,
    attempts: usize,
    subset_size: Option<usize>,
) -> Result<ExtractionReport> {
    if p < 1 {
        return Err(out_of_range("p", "need p >= 1"));
    }
    let norm = LpNorm::integer(p)?;
    is_separated(f, epsilon, norm)?;
    let n = f.n_points();
    let q_bound = extraction_q_bound(f.len(), epsilon, p, f.m_bound());
    let size = match subset_size {
        Some(k) if (1..=n).contains(&k) => k,
        Some(k) => return Err(out_of_range("subset_size", format!("{k} not in [1, {n}]"))),
        None => (q_bound.ceil().max(1.0) as usize).min(n),
    };
    let epsilon_1 = epsilon / 2f64.powf((p as f64 + 1.0) / p as f64);
    let mut report = ExtractionReport {
        q_bound,
        subset_size: size,
        epsilon_1,
        attempts_used: 0,
        indices: None,
    };
    if size == n {
        report.indices = Some((0..n).collect());
        return Ok(report);
    }
    for a in 0..attempts {
        let mut r = rng::substream(seed, a as u64);
        let mut cols = index::sample(&mut r, n, size).into_vec();
        cols.sort_unstable();
        report.attempts_used = a + 1;
        let sub = rows_on(f, &cols);
        if separated_rows(&sub, epsilon_1, norm) {
            report.indices = Some(cols);
            break;
        }
    }
    Ok(report)
}

fn rows_on(f: &TabulatedClass, cols: &[usize]) -> Vec<Vec<f64>> {
    f.rows().map(|r| cols.iter().map(|&c| r[c]).collect()).collect()
}

fn separated_rows(rows: &[Vec<f64>], epsilon: f64, p: LpNorm) -> bool {
    (0..rows.len()).all(|i| (i + 1..rows.len()).all(|j| p.dist(&rows[i], &rows[j]) >= epsilon))
}
