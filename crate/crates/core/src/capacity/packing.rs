//! `epsilon`-separated subsets: distinct members at distance `>= epsilon`.

use super::clique::max_clique;
use super::metric::{distance_matrix, LpNorm};
use super::{CapacityEstimate, Method, Mode};
use crate::error::{out_of_range, Error, Result};
use crate::function_class::TabulatedClass;

/// Largest class the exact packing search accepts by default.
pub const DEFAULT_PACKING_CAP: usize = 200;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(out_of_range("epsilon", format!("{epsilon} is not a positive real")))
    }
}

/// Scans rows in order and keeps each one separated from all kept so far.
/// The result is maximal by inclusion.
pub fn greedy_separated(f: &TabulatedClass, epsilon: f64, p: LpNorm) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..f.len() {
        if kept.iter().all(|&k| p.dist(f.row(k), f.row(i)) >= epsilon) {
            kept.push(i);
        }
    }
    kept
}

/// A maximum separated subset: a maximum clique of the graph joining
/// functions at distance `>= epsilon`.
pub fn exact_max_separated(f: &TabulatedClass, epsilon: f64, p: LpNorm, cap: usize) -> Result<Vec<usize>> {
    check_epsilon(epsilon)?;
    let n = f.len();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "exact packing class size",
            cap,
            got: n,
        });
    }
    let d = distance_matrix(f, p);
    Ok(max_clique(n, |u, v| d[u * n + v] >= epsilon))
}

/// `M(epsilon, F, d_p)` with the default exact cap.
pub fn packing_number(f: &TabulatedClass, epsilon: f64, p: LpNorm, mode: Mode) -> Result<CapacityEstimate> {
    packing_number_capped(f, epsilon, p, mode, DEFAULT_PACKING_CAP)
}

pub fn packing_number_capped(
    f: &TabulatedClass,
    epsilon: f64,
    p: LpNorm,
    mode: Mode,
    cap: usize,
) -> Result<CapacityEstimate> {
    check_epsilon(epsilon)?;
    match mode {
        Mode::Greedy => Ok(CapacityEstimate::count(
            greedy_separated(f, epsilon, p).len(),
            Method::GreedyLower,
            epsilon,
            p,
        )),
        Mode::Exact => Ok(CapacityEstimate::count(
            exact_max_separated(f, epsilon, p, cap)?.len(),
            Method::Exact,
            epsilon,
            p,
        )),
    }
}
