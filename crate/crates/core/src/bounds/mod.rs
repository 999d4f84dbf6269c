//! Closed-form bounds: metric entropy from the fat-shattering dimension, the
//! chaining sum, and the Rademacher complexity bound in the three growth
//! regimes of `d_G`.

mod chaining;
mod entropy;
mod integral;
mod oracle;
mod params;
mod sweep;
mod complexity;

pub use chaining::{chaining_best, chaining_eval, covering_entropy, ChainingSchedule};
pub use entropy::{product_entropy_bounds, entropy_bound_a, entropy_bound_b, ProductEntropyBounds, EntropyBound};
pub use integral::{integral_l_check, IntegralCheck};
pub use oracle::FatDimOracle;
pub use params::{regime_check, BoundParams, Regime, RegimeVerdict};
pub use sweep::{geometric_range, log_log_slope, sweep, EmpiricalInput, SweepGrid, SweepRow};
pub use complexity::{rademacher_bound, RademacherBound};
