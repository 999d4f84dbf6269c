//! Generalization bounds for multi-category margin classifiers, and the
//! machinery to check them numerically on small tabulated function classes.
//!
//! The crate is organised along the chain of capacity measures the bounds
//! pass through:
//!
//! * [`function_class`]: tabulated classes, margin and truncation transforms.
//! * [`risk`]: indicator and truncated hinge losses, empirical risks and the
//!   guaranteed-risk right-hand side.
//! * [`capacity`]: `L_p` pseudo-metrics, covering and packing numbers,
//!   Monte Carlo Rademacher complexity, fat-shattering and strong dimensions.
//! * [`combinatorics`]: the series `K_p`, the Eulerian recursion and the
//!   Sauer-type count.
//! * [`constructions`]: discretization, separation transfer, subsample
//!   extraction, separating trees and strongly shattered pairs.
//! * [`bounds`]: closed-form metric entropy bounds, the chaining sum and the
//!   Rademacher complexity bound in its three growth regimes.
//! * [`verify`] and [`report`]: the suites and output writers behind the CLI.

pub mod bounds;
pub mod capacity;
pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod function_class;
pub mod io;
pub mod report;
pub mod risk;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use function_class::{LabeledDataset, ProductScorerClass, TabulatedClass};

/// Version string embedded in every output file.
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
