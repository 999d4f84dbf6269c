//! Empirical capacity measures of tabulated classes.

mod clique;
mod covering;
mod metric;
mod packing;
mod rademacher;
mod shattering;

use serde::Serialize;

pub use clique::max_clique;
pub use covering::{covering_number, covering_number_capped, exact_cover, greedy_net, DEFAULT_COVER_CAP};
pub use metric::{distance_matrix, is_separated, lp_distance, min_pairwise_distance, LpNorm};
pub use packing::{
    exact_max_separated, greedy_separated, packing_number, packing_number_capped, DEFAULT_PACKING_CAP,
};
pub use rademacher::rademacher_mc;
pub use shattering::{
    fat_shattering_dim, fat_shattering_dim_capped, is_gamma_shattered, shattering_witness, strong_dim,
    strong_dim_capped, ShatterCaps,
};

pub(crate) use shattering::Search as ShatterSearch;

/// How a capacity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    GreedyUpper,
    GreedyLower,
    MonteCarlo,
}

/// Greedy or exact search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Greedy,
    Exact,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Mode::Greedy),
            "exact" => Ok(Mode::Exact),
            other => Err(format!("unknown mode `{other}` (expected greedy or exact)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityEstimate {
    pub value: f64,
    pub method: Method,
    pub stderr: f64,
    pub trials: usize,
    pub epsilon: Option<f64>,
    pub p: Option<f64>,
}

impl CapacityEstimate {
    pub(crate) fn count(value: usize, method: Method, epsilon: f64, p: LpNorm) -> Self {
        Self {
            value: value as f64,
            method,
            stderr: 0.0,
            trials: 0,
            epsilon: Some(epsilon),
            p: Some(p.exponent()),
        }
    }

    /// The value of a counting estimate.
    pub fn as_count(&self) -> usize {
        self.value as usize
    }
}
