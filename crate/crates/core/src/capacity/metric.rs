use serde::Serialize;

use crate::error::{out_of_range, Error, Result};
use crate::function_class::TabulatedClass;

/// Exponent of an empirical `L_p` pseudo-metric, `1 <= p <= inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LpNorm(f64);

impl LpNorm {
    pub const INFINITY: LpNorm = LpNorm(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p >= 1.0 {
            Ok(LpNorm(p))
        } else {
            Err(out_of_range("p", format!("{p} < 1")))
        }
    }

    pub fn integer(p: u32) -> Result<Self> {
        Self::new(p as f64)
    }

    pub fn exponent(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `((1/n) sum |a_i - b_i|^p)^{1/p}`, or `max |a_i - b_i|` for `p = inf`.
    pub(crate) fn dist(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        if self.0.is_infinite() {
            return diffs.fold(0.0, f64::max);
        }
        let n = a.len() as f64;
        let p = self.0;
        if p == 1.0 {
            return diffs.sum::<f64>() / n;
        }
        if p == 2.0 {
            return (diffs.map(|d| d * d).sum::<f64>() / n).sqrt();
        }
        let s: f64 = if p.fract() == 0.0 && p <= i32::MAX as f64 {
            let k = p as i32;
            diffs.map(|d| d.powi(k)).sum()
        } else {
            diffs.map(|d| d.powf(p)).sum()
        };
        (s / n).powf(1.0 / p)
    }
}

impl std::fmt::Display for LpNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl std::str::FromStr for LpNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" => Ok(LpNorm::INFINITY),
            s => {
                let p: f64 = s
                    .parse()
                    .map_err(|_| out_of_range("p", format!("`{s}` is not a number")))?;
                LpNorm::new(p)
            }
        }
    }
}

/// Empirical `L_p` distance between two tabulated functions.
pub fn lp_distance(f1: &[f64], f2: &[f64], p: LpNorm) -> Result<f64> {
    if f1.len() != f2.len() {
        return Err(Error::InvalidClass(format!(
            "rows of length {} and {}",
            f1.len(),
            f2.len()
        )));
    }
    if f1.is_empty() {
        return Err(Error::InvalidClass("empty rows".into()));
    }
    Ok(p.dist(f1, f2))
}

/// Symmetric `|F| x |F|` matrix of pairwise distances, row-major.
pub fn distance_matrix(f: &TabulatedClass, p: LpNorm) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = p.dist(f.row(i), f.row(j));
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    d
}

/// The closest pair `(i, j, distance)`, `None` for a singleton.
pub fn min_pairwise_distance(f: &TabulatedClass, p: LpNorm) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let d = p.dist(f.row(i), f.row(j));
            if best.is_none_or(|(_, _, b)| d < b) {
                best = Some((i, j, d));
            }
        }
    }
    best
}

/// Checks that all pairs are at distance `>= epsilon`, reporting the
/// closest offending pair otherwise.
pub fn is_separated(f: &TabulatedClass, epsilon: f64, p: LpNorm) -> Result<()> {
    match min_pairwise_distance(f, p) {
        Some((first, second, distance)) if distance < epsilon => Err(Error::NotSeparated {
            epsilon,
            first,
            second,
            distance,
        }),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn distance_examples() {
        let two = LpNorm::new(2.0).unwrap();
        assert_eq!(lp_distance(&[0.3, 0.4], &[0.3, 0.4], two).unwrap(), 0.0);
        assert_eq!(lp_distance(&[1.0, 1.0], &[0.0, 0.0], two).unwrap(), 1.0);
        assert_eq!(lp_distance(&[1.0, 0.0], &[0.0, 0.0], LpNorm::INFINITY).unwrap(), 1.0);
        assert_eq!(lp_distance(&[1.0, 0.0], &[0.0, 0.0], LpNorm::new(1.0).unwrap()).unwrap(), 0.5);
        assert!(LpNorm::new(0.5).is_err());
        assert!(LpNorm::new(f64::NAN).is_err());
        assert!(lp_distance(&[1.0], &[1.0, 2.0], two).is_err());
        assert_eq!("inf".parse::<LpNorm>().unwrap(), LpNorm::INFINITY);
    }

    fn rows(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
        let v = prop::collection::vec(-1.0f64..1.0, n);
        (v.clone(), v.clone(), v)
    }

    proptest! {
        #[test]
        fn pseudo_metric_axioms((a, b, c) in (1usize..8).prop_flat_map(rows), p in prop::sample::select(vec![1.0, 2.0, 3.0, 4.5, f64::INFINITY])) {
            let p = LpNorm::new(p).unwrap();
            let ab = p.dist(&a, &b);
            prop_assert!(ab >= 0.0);
            prop_assert!((ab - p.dist(&b, &a)).abs() < 1e-15);
            prop_assert!(p.dist(&a, &c) <= ab + p.dist(&b, &c) + 1e-12);
        }

        #[test]
        fn monotone_in_p((a, b, _c) in (1usize..8).prop_flat_map(rows)) {
            let ps = [1.0, 2.0, 3.0, 5.0, f64::INFINITY];
            for w in ps.windows(2) {
                let lo = LpNorm::new(w[0]).unwrap().dist(&a, &b);
                let hi = LpNorm::new(w[1]).unwrap().dist(&a, &b);
                prop_assert!(lo <= hi * (1.0 + 1e-12) + 1e-15);
            }
        }
    }
}
