//! Exact fat-shattering and strong dimensions by exhaustive search.
//!
//! For a point `t` and witness `v` every function is either "above"
//! (`f(t) - gamma >= v`), "below" (`f(t) + gamma <= v`), or unusable. As `v`
//! moves, a function's status only changes at `f(t) - gamma` and
//! `f(t) + gamma`, so it suffices to try those breakpoints and one
//! representative of each open cell between consecutive breakpoints.

use crate::error::{out_of_range, Error, Result};
use crate::function_class::TabulatedClass;

/// Size limits for the brute-force searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShatterCaps {
    pub max_functions: usize,
    pub max_points: usize,
}

impl Default for ShatterCaps {
    fn default() -> Self {
        Self {
            max_functions: 4096,
            max_points: 12,
        }
    }
}

impl ShatterCaps {
    fn check(&self, f: &TabulatedClass) -> Result<()> {
        if f.len() > self.max_functions {
            return Err(Error::CapExceeded {
                what: "shattering search class size",
                cap: self.max_functions,
                got: f.len(),
            });
        }
        if f.n_points() > self.max_points {
            return Err(Error::CapExceeded {
                what: "shattering search point count",
                cap: self.max_points,
                got: f.n_points(),
            });
        }
        Ok(())
    }
}

/// A witness value standing for `weight` equivalent values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cell {
    pub value: f64,
    pub weight: u64,
}

/// Witness candidates for real witnesses at one point.
fn real_cells(column: &[f64], gamma: f64) -> Vec<Cell> {
    let lo = column.iter().copied().fold(f64::INFINITY, f64::min) + gamma;
    let hi = column.iter().copied().fold(f64::NEG_INFINITY, f64::max) - gamma;
    let mut bps: Vec<f64> = column
        .iter()
        .flat_map(|&x| [x - gamma, x + gamma])
        .filter(|&b| b >= lo && b <= hi)
        .collect();
    bps.sort_by(f64::total_cmp);
    bps.dedup();
    let mut cells = Vec::with_capacity(2 * bps.len());
    for (i, &b) in bps.iter().enumerate() {
        cells.push(Cell { value: b, weight: 1 });
        if let Some(&next) = bps.get(i + 1) {
            let mid = b + (next - b) / 2.0;
            if mid > b && mid < next {
                cells.push(Cell { value: mid, weight: 1 });
            }
        }
    }
    cells
}

/// Integer witness candidates at one point of an integer-valued class, with
/// `gamma = 1`. Each cell carries the number of integers it stands for.
pub(crate) fn integer_cells(column: &[f64]) -> Vec<Cell> {
    let lo = column.iter().copied().fold(f64::INFINITY, f64::min) + 1.0;
    let hi = column.iter().copied().fold(f64::NEG_INFINITY, f64::max) - 1.0;
    if lo > hi {
        return Vec::new();
    }
    let mut bps: Vec<f64> = column
        .iter()
        .flat_map(|&x| [x - 1.0, x + 1.0])
        .chain([lo, hi])
        .filter(|&b| b >= lo && b <= hi)
        .collect();
    bps.sort_by(f64::total_cmp);
    bps.dedup();
    let mut cells = Vec::with_capacity(2 * bps.len());
    for (i, &b) in bps.iter().enumerate() {
        cells.push(Cell { value: b, weight: 1 });
        if let Some(&next) = bps.get(i + 1) {
            let gap = next - b - 1.0;
            if gap >= 1.0 {
                cells.push(Cell {
                    value: b + 1.0,
                    weight: gap as u64,
                });
            }
        }
    }
    cells
}

/// Alive functions with the sign pattern they realize on the points chosen
/// so far.
type State = Vec<(u32, u32)>;

pub(crate) struct Search<'a> {
    f: &'a TabulatedClass,
    gamma: f64,
    cells: Vec<Vec<Cell>>,
}

impl<'a> Search<'a> {
    pub(crate) fn real(f: &'a TabulatedClass, gamma: f64) -> Self {
        let cells = (0..f.n_points())
            .map(|t| real_cells(&f.column(t).collect::<Vec<_>>(), gamma))
            .collect();
        Self { f, gamma, cells }
    }

    pub(crate) fn integer(f: &'a TabulatedClass) -> Self {
        let cells = (0..f.n_points())
            .map(|t| integer_cells(&f.column(t).collect::<Vec<_>>()))
            .collect();
        Self { f, gamma: 1.0, cells }
    }

    fn initial(&self) -> State {
        (0..self.f.len() as u32).map(|j| (j, 0)).collect()
    }

    /// Adds `point` with witness `v` at position `depth`. Returns the new
    /// state and whether every one of the `2^(depth+1)` patterns is realized
    /// by at least `2^(need-depth-1)` functions, which is necessary to reach
    /// `need` points in total.
    fn extend(&self, state: &State, point: usize, v: f64, depth: usize, need: usize) -> (State, bool) {
        let patterns = 1usize << (depth + 1);
        let mut next = Vec::with_capacity(state.len());
        let mut counts = vec![0u32; patterns];
        for &(j, pat) in state {
            let x = self.f.value(j as usize, point);
            let bit = if x - self.gamma >= v {
                1
            } else if x + self.gamma <= v {
                0
            } else {
                continue;
            };
            let np = pat | bit << depth;
            next.push((j, np));
            counts[np as usize] += 1;
        }
        let min = 1u32 << need.saturating_sub(depth + 1);
        let full = counts.iter().all(|&c| c >= min);
        (next, full)
    }

    /// Valid extensions at `point`, merging consecutive cells that act
    /// identically on the alive functions (dead functions never return).
    fn extensions(&self, state: &State, point: usize, depth: usize, need: usize) -> Vec<(f64, u64, State)> {
        let mut out: Vec<(f64, u64, State)> = Vec::new();
        let mut prev: Option<(State, bool)> = None;
        if state.len() < 1 << need.max(depth + 1) {
            return out;
        }
        for cell in &self.cells[point] {
            let (next, full) = self.extend(state, point, cell.value, depth, need);
            if let Some((p, pfull)) = &prev {
                if *p == next {
                    if *pfull {
                        out.last_mut().unwrap().1 += cell.weight;
                    }
                    continue;
                }
            }
            if full {
                out.push((cell.value, cell.weight, next.clone()));
            }
            prev = Some((next, full));
        }
        out
    }

    fn max_depth(
        &self,
        start: usize,
        state: &State,
        chosen: &mut Vec<(usize, f64)>,
        best: &mut Vec<(usize, f64)>,
        ceiling: usize,
    ) {
        let depth = chosen.len();
        let n = self.f.n_points();
        for point in start..n {
            if best.len() >= ceiling || depth + (n - point) <= best.len() {
                return;
            }
            // only extensions that can still beat the incumbent
            let need = (best.len() + 1).max(depth + 1);
            for (v, _, next) in self.extensions(state, point, depth, need) {
                chosen.push((point, v));
                if chosen.len() > best.len() {
                    *best = chosen.clone();
                }
                self.max_depth(point + 1, &next, chosen, best, ceiling);
                chosen.pop();
                if best.len() >= ceiling {
                    return;
                }
            }
        }
    }

    /// A largest shattered point set with its witness, as `(point, v)` pairs.
    pub(crate) fn largest(&self) -> Vec<(usize, f64)> {
        let ceiling = self.f.n_points().min(self.f.len().ilog2() as usize);
        let mut best = Vec::new();
        self.max_depth(0, &self.initial(), &mut Vec::new(), &mut best, ceiling);
        best
    }

    /// A witness shattering exactly `points`, if one exists.
    pub(crate) fn witness_for(&self, points: &[usize]) -> Option<Vec<f64>> {
        fn go(s: &Search<'_>, points: &[usize], state: &State, v: &mut Vec<f64>) -> bool {
            let depth = v.len();
            let Some(&point) = points.get(depth) else {
                return true;
            };
            for (value, _, next) in s.extensions(state, point, depth, points.len()) {
                v.push(value);
                if go(s, points, &next, v) {
                    return true;
                }
                v.pop();
            }
            false
        }
        let mut v = Vec::new();
        go(self, points, &self.initial(), &mut v).then_some(v)
    }

    /// Weighted number of shattered `(S, v)` pairs, the empty pair included.
    pub(crate) fn count_pairs(&self) -> u128 {
        fn go(s: &Search<'_>, start: usize, state: &State, depth: usize) -> u128 {
            let mut total = 0u128;
            for point in start..s.f.n_points() {
                for (_, w, next) in s.extensions(state, point, depth, depth + 1) {
                    total += w as u128 * (1 + go(s, point + 1, &next, depth + 1));
                }
            }
            total
        }
        1 + go(self, 0, &self.initial(), 0)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(out_of_range("gamma", format!("{gamma} is not a positive real")))
    }
}

/// Whether `points` (distinct column indices) is `gamma`-shattered by `f`.
pub fn is_gamma_shattered(f: &TabulatedClass, points: &[usize], gamma: f64) -> Result<bool> {
    Ok(shattering_witness(f, points, gamma)?.is_some())
}

/// A witness `v` (one value per entry of `points`) for `gamma`-shattering.
pub fn shattering_witness(f: &TabulatedClass, points: &[usize], gamma: f64) -> Result<Option<Vec<f64>>> {
    check_gamma(gamma)?;
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != points.len() || sorted.last().is_some_and(|&t| t >= f.n_points()) {
        return Err(out_of_range("points", "indices must be distinct columns of the class"));
    }
    if points.len() > 31 {
        return Ok(None);
    }
    Ok(Search::real(f, gamma).witness_for(points))
}

/// `gamma`-dim of `f` with the default caps.
pub fn fat_shattering_dim(f: &TabulatedClass, gamma: f64) -> Result<usize> {
    fat_shattering_dim_capped(f, gamma, ShatterCaps::default())
}

pub fn fat_shattering_dim_capped(f: &TabulatedClass, gamma: f64, caps: ShatterCaps) -> Result<usize> {
    check_gamma(gamma)?;
    caps.check(f)?;
    Ok(Search::real(f, gamma).largest().len())
}

/// Strong dimension of an integer-valued class with the default caps.
pub fn strong_dim(f: &TabulatedClass) -> Result<usize> {
    strong_dim_capped(f, ShatterCaps::default())
}

pub fn strong_dim_capped(f: &TabulatedClass, caps: ShatterCaps) -> Result<usize> {
    if !f.is_integer_valued() {
        return Err(Error::InvalidClass("strong dimension needs integer values".into()));
    }
    caps.check(f)?;
    Ok(Search::integer(f).largest().len())
}
