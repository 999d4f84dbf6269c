//! The combinatorial machinery behind the metric entropy bounds, in
//! executable form: discretization of separated classes, subsample
//! extraction, separating trees and strongly shattered pairs.

mod cardinality;
mod discretize;
mod extraction;
mod generate;
mod tree;

pub use cardinality::{
    check_cardinality_bound, count_strongly_shattered_pairs, count_strongly_shattered_pairs_capped, CardinalityReport,
    PairCaps,
};
pub use discretize::{discretize, verify_separation_transfer, DiscretizationPlan, TransferReport, Variant};
pub use extraction::{extract_subsample, extract_subsample_sized, extraction_q_bound, ExtractionReport};
pub use generate::{separated_class, separated_integer_class};
pub use tree::{build_separating_tree, tree_half_gap, SeparatingTree, SplitCertificate, TreeNode};

pub(crate) use discretize::transfer_check;
