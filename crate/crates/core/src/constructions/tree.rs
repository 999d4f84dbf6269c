use serde::Serialize;

use crate::capacity::{is_separated, LpNorm};
use crate::combinatorics::k_p;
use crate::error::{out_of_range, Result};
use crate::function_class::TabulatedClass;

/// A certified split of a node at one coordinate. Every member of the plus
/// son exceeds `threshold + half_gap` there, every member of the minus son
/// is below `threshold - half_gap`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitCertificate {
    pub coordinate: usize,
    pub threshold: f64,
    pub half_gap: f64,
    /// Mass parameter, `|F_-| = (1 - beta)|F|` or the same with the sons
    /// swapped; `None` for a fallback split.
    pub beta: Option<f64>,
    /// Whether the sons meet the mass conditions `|F_+| >= (beta/2)|F|` and
    /// `|F_-| >= (1 - beta)|F|` (or swapped) with `beta` in `(0, 1/2]`.
    pub mass_conditions: bool,
    pub plus_count: usize,
    pub minus_count: usize,
    /// `min F_+ - max F_-` at the coordinate.
    pub achieved_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeNode {
    /// Row indices into the class the tree was built on.
    pub members: Vec<usize>,
    pub split: Option<SplitCertificate>,
    /// `[plus, minus]` node indices.
    pub children: Option<[usize; 2]>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparatingTree {
    pub epsilon: f64,
    pub p: u32,
    /// Separation between sons required by the tree definition:
    /// `epsilon / (4 (4 K_p)^{1/p})`.
    pub gap: f64,
    /// Node 0 is the root.
    pub nodes: Vec<TreeNode>,
}

impl SeparatingTree {
    pub fn leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }

    pub fn leaf_sets(&self) -> Vec<&[usize]> {
        self.nodes
            .iter()
            .filter(|n| n.is_leaf())
            .map(|n| n.members.as_slice())
            .collect()
    }

    /// Nodes where no split met the mass conditions: splits taken as a
    /// fallback, and non-singleton leaves with no split at all.
    pub fn mass_failures(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| match &n.split {
                Some(s) => !s.mass_conditions,
                None => n.members.len() > 1,
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Re-checks the structure against the class: sons are disjoint subsets
    /// of their parent and strictly more than `gap` apart at the certified
    /// coordinate.
    pub fn check(&self, f: &TabulatedClass) -> std::result::Result<(), String> {
        for (i, node) in self.nodes.iter().enumerate() {
            let (Some([a, b]), Some(split)) = (node.children, &node.split) else {
                continue;
            };
            let (plus, minus) = (&self.nodes[a].members, &self.nodes[b].members);
            if plus.iter().any(|m| minus.contains(m)) {
                return Err(format!("node {i}: sons overlap"));
            }
            if plus.iter().chain(minus).any(|m| !node.members.contains(m)) {
                return Err(format!("node {i}: son is not a subset"));
            }
            let t = split.coordinate;
            let lo = plus.iter().map(|&m| f.value(m, t)).fold(f64::INFINITY, f64::min);
            let hi = minus.iter().map(|&m| f.value(m, t)).fold(f64::NEG_INFINITY, f64::max);
            if !(lo > hi + self.gap) {
                return Err(format!("node {i}: gap {} not above {}", lo - hi, self.gap));
            }
        }
        Ok(())
    }
}

/// `epsilon / (8 (4 K_p)^{1/p})`.
pub fn tree_half_gap(epsilon: f64, p: u32) -> Result<f64> {
    Ok(epsilon / (8.0 * k_p(p)?.four_kp_root()))
}

struct Candidate {
    coordinate: usize,
    threshold: f64,
    plus: usize,
    minus: usize,
    mass: Option<f64>,
}

/// `beta` if the counts meet the mass conditions in either orientation.
fn mass_beta(plus: usize, minus: usize, size: usize) -> Option<f64> {
    let check = |big: usize, small: usize| small >= 1 && 2 * big >= size && size - big <= 2 * small;
    if check(minus, plus) {
        Some(1.0 - minus as f64 / size as f64)
    } else if check(plus, minus) {
        Some(1.0 - plus as f64 / size as f64)
    } else {
        None
    }
}

fn best_split(f: &TabulatedClass, members: &[usize], h: f64) -> Option<Candidate> {
    let size = members.len();
    let mut best: Option<Candidate> = None;
    let better = |c: &Candidate, b: &Candidate| {
        let key = |x: &Candidate| (x.mass.is_some(), x.plus.min(x.minus));
        key(c) > key(b)
    };
    for t in 0..f.n_points() {
        let mut vals: Vec<f64> = members.iter().map(|&m| f.value(m, t)).collect();
        vals.sort_by(f64::total_cmp);
        let mut bps: Vec<f64> = vals.iter().flat_map(|&v| [v - h, v + h]).collect();
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        for w in bps.windows(2) {
            let a = w[0] + (w[1] - w[0]) / 2.0;
            if !(a > w[0] && a < w[1]) {
                continue;
            }
            let minus = vals.partition_point(|&v| v < a - h);
            let plus = size - vals.partition_point(|&v| v <= a + h);
            if plus == 0 || minus == 0 {
                continue;
            }
            let c = Candidate {
                coordinate: t,
                threshold: a,
                plus,
                minus,
                mass: mass_beta(plus, minus, size),
            };
            if best.as_ref().is_none_or(|b| better(&c, b)) {
                best = Some(c);
            }
        }
    }
    best
}

/// Builds a separating tree of an `epsilon`-separated class by recursive
/// coordinate splits with half-gap `epsilon / (8 (4 K_p)^{1/p})`.
///
/// At each node the split meeting the mass conditions with the most
/// balanced sons is taken (ties: lowest coordinate, then lowest threshold).
/// Without such a split, the most balanced valid split is used and the node
/// is listed by [`SeparatingTree::mass_failures`].
pub fn build_separating_tree(f: &TabulatedClass, epsilon: f64, p: u32) -> Result<SeparatingTree> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(out_of_range("epsilon", format!("{epsilon} is not a positive real")));
    }
    let h = tree_half_gap(epsilon, p)?;
    is_separated(f, epsilon, LpNorm::integer(p)?)?;
    let mut nodes = vec![TreeNode {
        members: (0..f.len()).collect(),
        split: None,
        children: None,
    }];
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        if nodes[i].members.len() < 2 {
            continue;
        }
        let Some(c) = best_split(f, &nodes[i].members, h) else {
            continue;
        };
        let t = c.coordinate;
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        for &m in &nodes[i].members {
            let v = f.value(m, t);
            if v > c.threshold + h {
                plus.push(m);
            } else if v < c.threshold - h {
                minus.push(m);
            }
        }
        let lo = plus.iter().map(|&m| f.value(m, t)).fold(f64::INFINITY, f64::min);
        let hi = minus.iter().map(|&m| f.value(m, t)).fold(f64::NEG_INFINITY, f64::max);
        nodes[i].split = Some(SplitCertificate {
            coordinate: t,
            threshold: c.threshold,
            half_gap: h,
            beta: c.mass,
            mass_conditions: c.mass.is_some(),
            plus_count: plus.len(),
            minus_count: minus.len(),
            achieved_gap: lo - hi,
        });
        let a = nodes.len();
        nodes.push(TreeNode {
            members: plus,
            split: None,
            children: None,
        });
        nodes.push(TreeNode {
            members: minus,
            split: None,
            children: None,
        });
        nodes[i].children = Some([a, a + 1]);
        stack.push(a + 1);
        stack.push(a);
    }
    Ok(SeparatingTree {
        epsilon,
        p,
        gap: 2.0 * h,
        nodes,
    })
}
