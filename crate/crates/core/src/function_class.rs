//! Finite tabulated function classes and the margin transforms.
//!
//! A class is stored as a `|F| x n` table of values at sample points; the
//! abstract input space never appears, a point is just a column index.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::rng;

/// Largest product class [`margin_class`] enumerates by default.
pub const DEFAULT_PRODUCT_CAP: usize = 4096;

/// A finite class of functions tabulated on `n_points` sample points.
///
/// Rows are pairwise distinct (duplicates are merged on construction, first
/// occurrence wins) and every entry lies in `[-m_bound, m_bound]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TabulatedClass {
    values: Vec<f64>,
    n_rows: usize,
    n_points: usize,
    m_bound: f64,
}

impl TabulatedClass {
    pub fn new(rows: Vec<Vec<f64>>, m_bound: f64) -> Result<Self> {
        if !(m_bound.is_finite() && m_bound > 0.0) {
            return Err(out_of_range("m_bound", format!("{m_bound} is not a positive real")));
        }
        let n_points = match rows.first() {
            Some(r) if !r.is_empty() => r.len(),
            Some(_) => return Err(Error::InvalidClass("rows have no points".into())),
            None => return Err(Error::InvalidClass("class has no functions".into())),
        };
        let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(rows.len());
        let mut values = Vec::with_capacity(rows.len() * n_points);
        let mut n_rows = 0;
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_points {
                return Err(Error::InvalidClass(format!(
                    "row {i} has {} points, expected {n_points}",
                    row.len()
                )));
            }
            for &v in &row {
                if !v.is_finite() || v.abs() > m_bound {
                    return Err(Error::InvalidClass(format!(
                        "row {i} has entry {v} outside [-{m_bound}, {m_bound}]"
                    )));
                }
            }
            // -0.0 and 0.0 must merge
            let row: Vec<f64> = row.into_iter().map(|v| v + 0.0).collect();
            if seen.insert(row.iter().map(|v| v.to_bits()).collect()) {
                values.extend_from_slice(&row);
                n_rows += 1;
            }
        }
        Ok(Self {
            values,
            n_rows,
            n_points,
            m_bound,
        })
    }

    /// Number of (distinct) functions.
    pub fn len(&self) -> usize {
        self.n_rows
    }

    pub fn is_empty(&self) -> bool {
        self.n_rows == 0
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn m_bound(&self) -> f64 {
        self.m_bound
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_points..(i + 1) * self.n_points]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.n_points)
    }

    pub fn value(&self, row: usize, point: usize) -> f64 {
        self.values[row * self.n_points + point]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Values of every function at `point`.
    pub fn column(&self, point: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[point])
    }

    /// The class restricted to the listed columns, in the listed order.
    /// Columns may repeat. Functions that coincide on the restriction merge.
    pub fn restrict(&self, columns: &[usize]) -> Result<Self> {
        if let Some(&bad) = columns.iter().find(|&&c| c >= self.n_points) {
            return Err(Error::InvalidDataset(format!(
                "column {bad} out of range for {} points",
                self.n_points
            )));
        }
        let rows = self
            .rows()
            .map(|r| columns.iter().map(|&c| r[c]).collect())
            .collect();
        Self::new(rows, self.m_bound)
    }

    /// The subclass made of the listed rows.
    pub fn select(&self, rows: &[usize]) -> Result<Self> {
        let rows = rows.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::new(rows, self.m_bound)
    }

    /// Same table, different range bound.
    pub fn with_m_bound(&self, m_bound: f64) -> Result<Self> {
        Self::new(self.to_rows(), m_bound)
    }

    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.fract() == 0.0)
    }
}

/// A product class `G = G_1 x ... x G_C` of per-category scorer classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductScorerClass {
    components: Vec<TabulatedClass>,
    m_bound: f64,
}

impl ProductScorerClass {
    pub fn new(components: Vec<TabulatedClass>) -> Result<Self> {
        if components.len() < 3 {
            return Err(out_of_range(
                "c_categories",
                format!("need at least 3 categories, got {}", components.len()),
            ));
        }
        let n_points = components[0].n_points();
        let m_bound = components[0].m_bound();
        if m_bound < 1.0 {
            return Err(out_of_range("m_bound", format!("M_G = {m_bound} must be >= 1")));
        }
        for (k, g) in components.iter().enumerate() {
            if g.n_points() != n_points || g.m_bound() != m_bound {
                return Err(Error::InvalidClass(format!(
                    "component {} has ({} points, M = {}), expected ({n_points}, {m_bound})",
                    k + 1,
                    g.n_points(),
                    g.m_bound()
                )));
            }
        }
        Ok(Self {
            components,
            m_bound,
        })
    }

    pub fn c_categories(&self) -> usize {
        self.components.len()
    }

    pub fn m_bound(&self) -> f64 {
        self.m_bound
    }

    pub fn n_points(&self) -> usize {
        self.components[0].n_points()
    }

    pub fn components(&self) -> &[TabulatedClass] {
        &self.components
    }

    /// Size of the full Cartesian product, `None` on overflow.
    pub fn cardinality(&self) -> Option<usize> {
        self.components
            .iter()
            .try_fold(1usize, |acc, g| acc.checked_mul(g.len()))
    }
}

/// Sample points paired with category labels in `1..=C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDataset {
    point_ids: Vec<usize>,
    labels: Vec<usize>,
}

impl LabeledDataset {
    pub fn new(point_ids: Vec<usize>, labels: Vec<usize>) -> Result<Self> {
        if point_ids.len() != labels.len() {
            return Err(Error::InvalidDataset(format!(
                "{} points but {} labels",
                point_ids.len(),
                labels.len()
            )));
        }
        if point_ids.is_empty() {
            return Err(Error::InvalidDataset("empty sample".into()));
        }
        if labels.contains(&0) {
            return Err(Error::InvalidDataset("labels are 1-based".into()));
        }
        Ok(Self { point_ids, labels })
    }

    /// Points `0..labels.len()` with the given labels.
    pub fn sequential(labels: Vec<usize>) -> Result<Self> {
        Self::new((0..labels.len()).collect(), labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn point_ids(&self) -> &[usize] {
        &self.point_ids
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.point_ids.iter().copied().zip(self.labels.iter().copied())
    }

    fn validate_for(&self, c: usize, n_points: usize) -> Result<()> {
        for (col, label) in self.iter() {
            if label > c {
                return Err(Error::InvalidDataset(format!(
                    "label {label} outside 1..={c}"
                )));
            }
            if col >= n_points {
                return Err(Error::InvalidDataset(format!(
                    "point {col} out of range for {n_points} points"
                )));
            }
        }
        Ok(())
    }
}

/// `1/2 (scores[k] - max_{l != k} scores[l])` with `label = k + 1`.
pub fn margin_value(scores: &[f64], label: usize) -> f64 {
    let k = label - 1;
    let best_other = scores
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != k)
        .map(|(_, &s)| s)
        .fold(f64::NEG_INFINITY, f64::max);
    0.5 * (scores[k] - best_other)
}

/// The margin class `F_G` tabulated on the labeled sample.
pub fn margin_class(g: &ProductScorerClass, data: &LabeledDataset) -> Result<TabulatedClass> {
    margin_class_capped(g, data, DEFAULT_PRODUCT_CAP)
}

pub fn margin_class_capped(
    g: &ProductScorerClass,
    data: &LabeledDataset,
    cap: usize,
) -> Result<TabulatedClass> {
    data.validate_for(g.c_categories(), g.n_points())?;
    let total = g.cardinality().unwrap_or(usize::MAX);
    if total > cap {
        return Err(Error::CapExceeded {
            what: "product class cardinality",
            cap,
            got: total,
        });
    }
    let comps = g.components();
    let mut choice = vec![0usize; comps.len()];
    let mut scores = vec![0.0; comps.len()];
    let mut rows = Vec::with_capacity(total);
    'outer: loop {
        let row = data
            .iter()
            .map(|(col, label)| {
                for (k, comp) in comps.iter().enumerate() {
                    scores[k] = comp.value(choice[k], col);
                }
                margin_value(&scores, label)
            })
            .collect();
        rows.push(row);
        // mixed-radix increment
        for (k, comp) in comps.iter().enumerate() {
            choice[k] += 1;
            if choice[k] < comp.len() {
                continue 'outer;
            }
            choice[k] = 0;
        }
        break;
    }
    TabulatedClass::new(rows, g.m_bound())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma <= 1.0 {
        Ok(())
    } else {
        Err(out_of_range("gamma", format!("{gamma} not in (0, 1]")))
    }
}

/// `max(0, min(gamma, t))`.
pub fn clip_margin(t: f64, gamma: f64) -> f64 {
    t.min(gamma).max(0.0)
}

/// The truncated class `F_{G,gamma}`: entries clipped into `[0, gamma]`.
pub fn truncate_class(f: &TabulatedClass, gamma: f64) -> Result<TabulatedClass> {
    check_gamma(gamma)?;
    let rows = f
        .rows()
        .map(|r| r.iter().map(|&t| clip_margin(t, gamma)).collect())
        .collect();
    TabulatedClass::new(rows, gamma)
}

/// Synthetic class families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    /// `size` rows of i.i.d. uniform values in `[-m_bound, m_bound]`.
    UniformRandom,
    /// Constants `0, step, ..., (size-1) step` on one point.
    GridConstants,
    /// All `2^dim` sign patterns `±m_bound` on the first `dim` points.
    StaircaseKnownFatdim,
    /// `c_categories` uniform random components of `size` rows each.
    ProductRandom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub n_points: usize,
    pub size: usize,
    pub m_bound: f64,
    #[serde(default = "one")]
    pub step: f64,
    #[serde(default)]
    pub dim: usize,
    #[serde(default = "three")]
    pub c_categories: usize,
}

fn one() -> f64 {
    1.0
}

fn three() -> usize {
    3
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            n_points: 1,
            size: 1,
            m_bound: 1.0,
            step: 1.0,
            dim: 0,
            c_categories: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratedClass {
    Tabulated(TabulatedClass),
    Product(ProductScorerClass),
}

impl GeneratedClass {
    pub fn into_tabulated(self) -> Option<TabulatedClass> {
        match self {
            GeneratedClass::Tabulated(f) => Some(f),
            GeneratedClass::Product(_) => None,
        }
    }

    pub fn into_product(self) -> Option<ProductScorerClass> {
        match self {
            GeneratedClass::Product(g) => Some(g),
            GeneratedClass::Tabulated(_) => None,
        }
    }
}

fn uniform_rows(rng: &mut rng::StreamRng, size: usize, n: usize, m: f64) -> Vec<Vec<f64>> {
    (0..size)
        .map(|_| (0..n).map(|_| rng.gen_range(-m..=m)).collect())
        .collect()
}

/// Builds a synthetic instance. Deterministic for a fixed `seed`.
pub fn generate_class(kind: ClassKind, params: &GeneratorParams, seed: u64) -> Result<GeneratedClass> {
    let GeneratorParams {
        n_points,
        size,
        m_bound,
        step,
        dim,
        c_categories,
    } = *params;
    if !(m_bound.is_finite() && m_bound > 0.0) {
        return Err(out_of_range("m_bound", format!("{m_bound}")));
    }
    let mut rng = rng::stream(seed);
    match kind {
        ClassKind::UniformRandom => {
            if size == 0 || n_points == 0 {
                return Err(out_of_range("size", "need size >= 1 and n_points >= 1"));
            }
            let rows = uniform_rows(&mut rng, size, n_points, m_bound);
            TabulatedClass::new(rows, m_bound).map(GeneratedClass::Tabulated)
        }
        ClassKind::GridConstants => {
            if size == 0 || !(step > 0.0) {
                return Err(out_of_range("step", "need size >= 1 and step > 0"));
            }
            let top = (size - 1) as f64 * step;
            if top > m_bound {
                return Err(out_of_range(
                    "m_bound",
                    format!("largest constant {top} exceeds m_bound {m_bound}"),
                ));
            }
            let rows = (0..size).map(|i| vec![i as f64 * step]).collect();
            TabulatedClass::new(rows, m_bound).map(GeneratedClass::Tabulated)
        }
        ClassKind::StaircaseKnownFatdim => {
            if dim == 0 || dim > n_points {
                return Err(out_of_range(
                    "dim",
                    format!("need 1 <= dim <= n_points, got dim = {dim}, n_points = {n_points}"),
                ));
            }
            if dim > 16 {
                return Err(out_of_range("dim", format!("{dim} > 16 sign-pattern points")));
            }
            let rows = (0..1usize << dim)
                .map(|mask| {
                    (0..n_points)
                        .map(|i| match i < dim {
                            true if mask >> i & 1 == 1 => m_bound,
                            true => -m_bound,
                            false => 0.0,
                        })
                        .collect()
                })
                .collect();
            TabulatedClass::new(rows, m_bound).map(GeneratedClass::Tabulated)
        }
        ClassKind::ProductRandom => {
            if size == 0 || n_points == 0 {
                return Err(out_of_range("size", "need size >= 1 and n_points >= 1"));
            }
            let comps = (0..c_categories)
                .map(|_| TabulatedClass::new(uniform_rows(&mut rng, size, n_points, m_bound), m_bound))
                .collect::<Result<Vec<_>>>()?;
            ProductScorerClass::new(comps).map(GeneratedClass::Product)
        }
    }
}
