use serde::Serialize;

use crate::capacity::ShatterSearch as Search;
use crate::capacity::{is_separated, strong_dim, LpNorm};
use crate::combinatorics::k_p;
use crate::error::{Error, Result};
use crate::function_class::TabulatedClass;

/// Size limits for strongly shattered pair counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCaps {
    pub max_points: usize,
    /// Limit on the number of distinct values taken by the class.
    pub max_values: usize,
    pub max_functions: usize,
}

impl Default for PairCaps {
    fn default() -> Self {
        Self {
            max_points: 6,
            max_values: 4,
            max_functions: 64,
        }
    }
}

fn require_integer(f: &TabulatedClass) -> Result<()> {
    if f.is_integer_valued() {
        Ok(())
    } else {
        Err(Error::InvalidClass("expected an integer-valued class".into()))
    }
}

fn distinct_values(f: &TabulatedClass) -> usize {
    let mut v: Vec<f64> = f.rows().flatten().copied().collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

/// Number of pairs `(S, v)` strongly shattered by `f`, with `S` any subset of
/// the points (the empty set included) and `v` ranging over the integers
/// between the smallest and largest value of the class.
pub fn count_strongly_shattered_pairs(f: &TabulatedClass) -> Result<u128> {
    count_strongly_shattered_pairs_capped(f, PairCaps::default())
}

pub fn count_strongly_shattered_pairs_capped(f: &TabulatedClass, caps: PairCaps) -> Result<u128> {
    require_integer(f)?;
    let checks = [
        ("pair count point count", caps.max_points, f.n_points()),
        ("pair count distinct values", caps.max_values, distinct_values(f)),
        ("pair count class size", caps.max_functions, f.len()),
    ];
    for (what, cap, got) in checks {
        if got > cap {
            return Err(Error::CapExceeded { what, cap, got });
        }
    }
    Ok(Search::integer(f).count_pairs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CardinalityReport {
    pub size: usize,
    pub n: usize,
    /// Width of the value range, `max - min` (at least 1).
    pub b: u64,
    pub strong_dim: usize,
    /// `max(1, strong_dim)`.
    pub d: usize,
    /// `(e b n / d)^{2d}`; may be infinite for wide ranges.
    pub bound: f64,
    pub ln_size: f64,
    pub ln_bound: f64,
    pub holds: bool,
}

/// Checks `|F| <= (e b n / d)^{2d}` with `d = max(1, S-dim F)` for an
/// integer class that is `4 (4 K_p)^{1/p}`-separated. The class is shifted
/// so its smallest value is 0, which changes neither side.
pub fn check_cardinality_bound(f: &TabulatedClass, p: u32) -> Result<CardinalityReport> {
    require_integer(f)?;
    let eps = 4.0 * k_p(p)?.four_kp_root();
    is_separated(f, eps, LpNorm::integer(p)?)?;
    let lo = f.rows().flatten().copied().fold(f64::INFINITY, f64::min);
    let hi = f.rows().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let b = ((hi - lo) as u64).max(1);
    let s = strong_dim(f)?;
    let d = s.max(1);
    let n = f.n_points();
    let ln_bound = 2.0 * d as f64 * (std::f64::consts::E * b as f64 * n as f64 / d as f64).ln();
    let ln_size = (f.len() as f64).ln();
    Ok(CardinalityReport {
        size: f.len(),
        n,
        b,
        strong_dim: s,
        d,
        bound: ln_bound.exp(),
        ln_size,
        ln_bound,
        holds: ln_size <= ln_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(rows: Vec<Vec<f64>>, m: f64) -> TabulatedClass {
        TabulatedClass::new(rows, m).unwrap()
    }

    /// Counts pairs by trying every `(S, v)` with `v` in the value hull.
    fn brute_pairs(f: &TabulatedClass) -> u128 {
        let n = f.n_points();
        let lo = f.rows().flatten().copied().fold(f64::INFINITY, f64::min) as i64;
        let hi = f.rows().flatten().copied().fold(f64::NEG_INFINITY, f64::max) as i64;
        let width = (hi - lo + 1) as usize;
        let mut total = 0;
        for s in 0u32..1 << n {
            let pts: Vec<usize> = (0..n).filter(|&t| s >> t & 1 == 1).collect();
            let k = pts.len();
            for code in 0..width.pow(k as u32) {
                let v: Vec<f64> = (0..k).map(|b| (lo + (code / width.pow(b as u32) % width) as i64) as f64).collect();
                let ok = (0u32..1 << k).all(|sg| {
                    f.rows().any(|r| {
                        pts.iter().enumerate().all(|(b, &t)| {
                            if sg >> b & 1 == 1 {
                                r[t] - v[b] >= 1.0
                            } else {
                                v[b] - r[t] >= 1.0
                            }
                        })
                    })
                });
                total += ok as u128;
            }
        }
        total
    }

    #[test]
    fn pair_examples() {
        assert_eq!(count_strongly_shattered_pairs(&class(vec![vec![0.0], vec![2.0]], 2.0)).unwrap(), 2);
        assert_eq!(count_strongly_shattered_pairs(&class(vec![vec![5.0, 1.0]], 5.0)).unwrap(), 1);
        for d in 1..=4usize {
            let rows = (0u32..1 << d)
                .map(|s| (0..d).map(|b| if s >> b & 1 == 1 { 2.0 } else { 0.0 }).collect())
                .collect();
            let f = class(rows, 2.0);
            assert_eq!(count_strongly_shattered_pairs(&f).unwrap(), 1 << d);
        }
    }

    #[test]
    fn pairs_match_brute_force() {
        use crate::rng;
        use rand::Rng;
        let mut r = rng::stream(3);
        for _ in 0..60 {
            let n = r.gen_range(1..=3);
            let size = r.gen_range(1..=10);
            let levels = [0.0, 2.0, 3.0, 6.0];
            let rows = (0..size)
                .map(|_| (0..n).map(|_| levels[r.gen_range(0..4)]).collect())
                .collect();
            let f = class(rows, 6.0);
            assert_eq!(count_strongly_shattered_pairs(&f).unwrap(), brute_pairs(&f));
        }
    }

    #[test]
    fn pair_caps() {
        let f = class(vec![vec![0.0; 7], vec![1.0; 7]], 1.0);
        assert!(matches!(count_strongly_shattered_pairs(&f), Err(Error::CapExceeded { cap: 6, .. })));
        let g = class((0..5).map(|i| vec![i as f64]).collect(), 4.0);
        assert!(matches!(count_strongly_shattered_pairs(&g), Err(Error::CapExceeded { cap: 4, .. })));
        assert!(count_strongly_shattered_pairs(&class(vec![vec![0.5]], 1.0)).is_err());
    }

    #[test]
    fn cardinality_examples() {
        let eps = 4.0 * k_p(3).unwrap().four_kp_root();
        let b = eps.ceil();
        let f = class(vec![vec![0.0], vec![b]], b);
        let r = check_cardinality_bound(&f, 3).unwrap();
        assert_eq!((r.size, r.strong_dim, r.d), (2, 1, 1));
        assert!((r.bound - (std::f64::consts::E * b).powi(2)).abs() < 1e-9 * r.bound);
        assert!(r.holds);
        let single = class(vec![vec![3.0, 4.0]], 4.0);
        assert!(check_cardinality_bound(&single, 3).unwrap().holds);
        let close = class(vec![vec![0.0], vec![1.0]], 1.0);
        assert!(check_cardinality_bound(&close, 3).is_err());
    }
}
