//! Random separated classes by rejection: draw candidates, keep a maximal
//! separated subset.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::capacity::{greedy_separated, LpNorm};
use crate::error::{out_of_range, Result};
use crate::function_class::TabulatedClass;
use crate::rng;

fn keep_separated(rows: Vec<Vec<f64>>, m_bound: f64, epsilon: f64, p: LpNorm) -> Result<TabulatedClass> {
    let all = TabulatedClass::new(rows, m_bound)?;
    let kept = greedy_separated(&all, epsilon, p);
    all.select(&kept)
}

/// Up to `candidates` uniform functions on `n_points` points with values in
/// `[-m_bound, m_bound]`, thinned to an `epsilon`-separated subset.
pub fn separated_class(
    n_points: usize,
    candidates: usize,
    m_bound: f64,
    epsilon: f64,
    p: LpNorm,
    seed: u64,
) -> Result<TabulatedClass> {
    if n_points == 0 || candidates == 0 {
        return Err(out_of_range("candidates", "need n_points >= 1 and candidates >= 1"));
    }
    let mut r = rng::stream(seed);
    let rows = (0..candidates)
        .map(|_| (0..n_points).map(|_| r.gen_range(-m_bound..=m_bound)).collect())
        .collect();
    keep_separated(rows, m_bound, epsilon, p)
}

/// As [`separated_class`], with every entry drawn from `levels`.
pub fn separated_integer_class(
    n_points: usize,
    candidates: usize,
    levels: &[f64],
    epsilon: f64,
    p: LpNorm,
    seed: u64,
) -> Result<TabulatedClass> {
    if n_points == 0 || candidates == 0 || levels.is_empty() {
        return Err(out_of_range("candidates", "need n_points, candidates and levels non-empty"));
    }
    let m_bound = levels.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let mut r = rng::stream(seed);
    let rows = (0..candidates)
        .map(|_| (0..n_points).map(|_| *levels.choose(&mut r).unwrap()).collect())
        .collect();
    keep_separated(rows, m_bound, epsilon, p)
}
