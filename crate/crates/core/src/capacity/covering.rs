//! Internal `epsilon`-nets: every function has a center at distance `< epsilon`.

use super::metric::{distance_matrix, LpNorm};
use super::{CapacityEstimate, Method, Mode};
use crate::error::{out_of_range, Error, Result};
use crate::function_class::TabulatedClass;

/// Largest class the exact covering search accepts by default.
pub const DEFAULT_COVER_CAP: usize = 24;
const HARD_COVER_CAP: usize = 64;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(out_of_range("epsilon", format!("{epsilon} is not a positive real")))
    }
}

/// Farthest-point net: start from the first function and keep adding the
/// function farthest from the current centers until all are covered.
pub fn greedy_net(f: &TabulatedClass, epsilon: f64, p: LpNorm) -> Vec<usize> {
    let n = f.len();
    let mut centers = vec![0];
    let mut gap: Vec<f64> = (0..n).map(|j| p.dist(f.row(0), f.row(j))).collect();
    loop {
        let (far, &d) = gap
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
        if d < epsilon {
            return centers;
        }
        centers.push(far);
        for (j, g) in gap.iter_mut().enumerate() {
            *g = g.min(p.dist(f.row(far), f.row(j)));
        }
    }
}

/// A minimum internal net, by branch and bound over set covers.
///
/// Branches on the lowest-index uncovered function: some center must cover
/// it. The greedy net seeds the incumbent.
pub fn exact_cover(f: &TabulatedClass, epsilon: f64, p: LpNorm, cap: usize) -> Result<Vec<usize>> {
    check_epsilon(epsilon)?;
    let n = f.len();
    let cap = cap.min(HARD_COVER_CAP);
    if n > cap {
        return Err(Error::CapExceeded {
            what: "exact covering class size",
            cap,
            got: n,
        });
    }
    let d = distance_matrix(f, p);
    let masks: Vec<u64> = (0..n)
        .map(|i| (0..n).filter(|&j| d[i * n + j] < epsilon).fold(0u64, |m, j| m | 1 << j))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    // coverers[e] = centers whose ball contains e
    let coverers: Vec<Vec<usize>> = (0..n)
        .map(|e| (0..n).filter(|&c| masks[c] >> e & 1 == 1).collect())
        .collect();

    struct Search<'a> {
        masks: &'a [u64],
        coverers: &'a [Vec<usize>],
        full: u64,
        best: Vec<usize>,
        current: Vec<usize>,
    }

    impl Search<'_> {
        fn run(&mut self, covered: u64) {
            if covered == self.full {
                if self.current.len() < self.best.len() {
                    self.best = self.current.clone();
                }
                return;
            }
            if self.current.len() + 1 >= self.best.len() {
                return;
            }
            let e = (!covered).trailing_zeros() as usize;
            for idx in 0..self.coverers[e].len() {
                let c = self.coverers[e][idx];
                self.current.push(c);
                self.run(covered | self.masks[c]);
                self.current.pop();
            }
        }
    }

    let mut search = Search {
        masks: &masks,
        coverers: &coverers,
        full,
        best: greedy_net(f, epsilon, p),
        current: Vec::new(),
    };
    search.run(0);
    let mut best = search.best;
    best.sort_unstable();
    Ok(best)
}

/// `N(epsilon, F, d_p)` with the default exact cap.
pub fn covering_number(f: &TabulatedClass, epsilon: f64, p: LpNorm, mode: Mode) -> Result<CapacityEstimate> {
    covering_number_capped(f, epsilon, p, mode, DEFAULT_COVER_CAP)
}

pub fn covering_number_capped(
    f: &TabulatedClass,
    epsilon: f64,
    p: LpNorm,
    mode: Mode,
    cap: usize,
) -> Result<CapacityEstimate> {
    check_epsilon(epsilon)?;
    match mode {
        Mode::Greedy => Ok(CapacityEstimate::count(
            greedy_net(f, epsilon, p).len(),
            Method::GreedyUpper,
            epsilon,
            p,
        )),
        Mode::Exact => Ok(CapacityEstimate::count(
            exact_cover(f, epsilon, p, cap)?.len(),
            Method::Exact,
            epsilon,
            p,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constants(vals: &[f64], m: f64) -> TabulatedClass {
        TabulatedClass::new(vals.iter().map(|&v| vec![v]).collect(), m).unwrap()
    }

    /// Smallest net by trying every subset of centers.
    fn brute_cover(f: &TabulatedClass, eps: f64, p: LpNorm) -> usize {
        let n = f.len();
        (1u32..1 << n)
            .filter(|s| {
                (0..n).all(|j| (0..n).any(|c| s >> c & 1 == 1 && p.dist(f.row(c), f.row(j)) < eps))
            })
            .map(|s| s.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn grid_constants_exact_cover() {
        let f = constants(&[0.0, 1.0, 2.0, 3.0], 3.0);
        let p = LpNorm::new(2.0).unwrap();
        assert_eq!(brute_cover(&f, 1.5, p), 2);
        let net = exact_cover(&f, 1.5, p, DEFAULT_COVER_CAP).unwrap();
        assert_eq!(net.len(), 2);
        // strict inequality: at epsilon = 1 every ball is a singleton
        assert_eq!(covering_number(&f, 1.0, p, Mode::Exact).unwrap().as_count(), 4);
    }

    #[test]
    fn trivial_covers() {
        let p = LpNorm::INFINITY;
        let f = constants(&[-1.0, 0.2, 1.0], 1.0);
        assert_eq!(covering_number(&f, 2.01, p, Mode::Exact).unwrap().as_count(), 1);
        assert_eq!(covering_number(&f, 2.01, p, Mode::Greedy).unwrap().as_count(), 1);
        let s = constants(&[0.3], 1.0);
        assert_eq!(covering_number(&s, 1e-9, p, Mode::Exact).unwrap().as_count(), 1);
    }

    #[test]
    fn exact_refuses_over_cap() {
        let f = constants(&(0..30).map(|i| i as f64 / 30.0).collect::<Vec<_>>(), 1.0);
        let err = covering_number(&f, 0.1, LpNorm::INFINITY, Mode::Exact).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 24, got: 30, .. }));
        assert!(covering_number(&f, 0.0, LpNorm::INFINITY, Mode::Greedy).is_err());
    }

    #[test]
    fn exact_matches_brute_force_on_random_classes() {
        use crate::function_class::{generate_class, ClassKind, GeneratorParams};
        for seed in 0..40 {
            let params = GeneratorParams {
                n_points: 1 + (seed as usize % 3),
                size: 4 + (seed as usize % 7),
                ..Default::default()
            };
            let f = generate_class(ClassKind::UniformRandom, &params, seed)
                .unwrap()
                .into_tabulated()
                .unwrap();
            for p in [LpNorm::new(1.0).unwrap(), LpNorm::new(3.0).unwrap(), LpNorm::INFINITY] {
                for eps in [0.3, 0.7, 1.1] {
                    let exact = exact_cover(&f, eps, p, 24).unwrap();
                    assert_eq!(exact.len(), brute_cover(&f, eps, p), "seed {seed}");
                    assert!(greedy_net(&f, eps, p).len() >= exact.len());
                }
            }
        }
    }
}
