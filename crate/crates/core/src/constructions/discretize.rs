use serde::Serialize;

use crate::capacity::{is_separated, LpNorm};
use crate::combinatorics::k_p;
use crate::error::{out_of_range, Result};
use crate::function_class::TabulatedClass;

/// Which step size the plan uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `eta = epsilon / (epsilon' + 2)`, on all `n` points.
    A,
    /// `eta = epsilon_1 / (epsilon' + 2)` with `epsilon_1 = epsilon / 2^{(p+1)/p}`,
    /// for use on an extracted subsample.
    B,
}

/// Grid used to map a real class in `[-M, M]` to integers in `[0, N]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscretizationPlan {
    pub variant: Variant,
    pub epsilon: f64,
    pub p: u32,
    pub m_f: f64,
    /// `4 (4 K_p)^{1/p}`.
    pub epsilon_prime: f64,
    /// The separation scale the grid is sized for: `epsilon` or `epsilon_1`.
    pub scale: f64,
    pub eta: f64,
    /// `N = floor(2 M / eta)`.
    pub levels: u64,
}

impl DiscretizationPlan {
    pub fn new(variant: Variant, epsilon: f64, p: u32, m_f: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(out_of_range("epsilon", format!("{epsilon} is not a positive real")));
        }
        if !(m_f > 0.0 && m_f.is_finite()) {
            return Err(out_of_range("m_f", format!("{m_f} is not a positive real")));
        }
        let kp = k_p(p)?;
        let epsilon_prime = 4.0 * kp.four_kp_root();
        let scale = match variant {
            Variant::A => epsilon,
            Variant::B => epsilon / 2f64.powf((p as f64 + 1.0) / p as f64),
        };
        let eta = scale / (epsilon_prime + 2.0);
        let levels = (2.0 * m_f / eta).floor();
        if levels < 1.0 {
            return Err(out_of_range(
                "epsilon",
                format!("step {eta} exceeds the range 2M = {}", 2.0 * m_f),
            ));
        }
        Ok(Self {
            variant,
            epsilon,
            p,
            m_f,
            epsilon_prime,
            scale,
            eta,
            levels: levels as u64,
        })
    }

    /// `floor((x + M) / eta)`.
    pub fn level(&self, x: f64) -> f64 {
        ((x + self.m_f) / self.eta).floor().min(self.levels as f64)
    }

    pub fn norm(&self) -> LpNorm {
        LpNorm::new(self.p as f64).expect("p >= 3")
    }
}

fn discretized_rows(f: &TabulatedClass, plan: &DiscretizationPlan) -> Vec<Vec<f64>> {
    f.rows().map(|r| r.iter().map(|&x| plan.level(x)).collect()).collect()
}

/// The integer class `x -> floor((x + M) / eta)`, with range bound `N`.
///
/// Entries must lie in `[-M, M]` for the plan's `M`.
pub fn discretize(f: &TabulatedClass, plan: &DiscretizationPlan) -> Result<TabulatedClass> {
    if f.m_bound() > plan.m_f {
        return Err(out_of_range(
            "m_f",
            format!("class range {} exceeds the plan's {}", f.m_bound(), plan.m_f),
        ));
    }
    TabulatedClass::new(discretized_rows(f, plan), plan.levels as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    pub pairs_checked: usize,
    pub violations: usize,
    /// Smallest discretized distance minus the target, over all pairs.
    pub worst_margin: Option<f64>,
    pub worst_pair: Option<(usize, usize)>,
    pub target: f64,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Pairwise check of the discretized rows against `target`. Rows that
/// collapse onto each other count as violations at distance zero.
pub(crate) fn transfer_check(f: &TabulatedClass, plan: &DiscretizationPlan, target: f64) -> TransferReport {
    let rows = discretized_rows(f, plan);
    let p = plan.norm();
    let mut report = TransferReport {
        pairs_checked: 0,
        violations: 0,
        worst_margin: None,
        worst_pair: None,
        target,
    };
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let d = p.dist(&rows[i], &rows[j]);
            report.pairs_checked += 1;
            if d < target {
                report.violations += 1;
            }
            let margin = d - target;
            if report.worst_margin.is_none_or(|w| margin < w) {
                report.worst_margin = Some(margin);
                report.worst_pair = Some((i, j));
            }
        }
    }
    report
}

/// Checks that discretizing an `epsilon`-separated class (the plan's scale)
/// yields an `epsilon'`-separated integer class. The input separation is
/// verified first.
pub fn verify_separation_transfer(f: &TabulatedClass, plan: &DiscretizationPlan) -> Result<TransferReport> {
    if f.m_bound() > plan.m_f {
        return Err(out_of_range(
            "m_f",
            format!("class range {} exceeds the plan's {}", f.m_bound(), plan.m_f),
        ));
    }
    is_separated(f, plan.scale, plan.norm())?;
    Ok(transfer_check(f, plan, plan.epsilon_prime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn plan_constants() {
        let plan = DiscretizationPlan::new(Variant::A, 1.0, 3, 1.0).unwrap();
        // 4 (4 * 26)^{1/3}
        assert!((plan.epsilon_prime - 4.0 * 104f64.cbrt()).abs() < 1e-9);
        assert!((plan.eta - 1.0 / (plan.epsilon_prime + 2.0)).abs() < 1e-15);
        assert_eq!(plan.levels, (2.0 / plan.eta).floor() as u64);
        let b = DiscretizationPlan::new(Variant::B, 1.0, 3, 1.0).unwrap();
        assert!((b.scale - 2f64.powf(-4.0 / 3.0)).abs() < 1e-15);
        assert!(DiscretizationPlan::new(Variant::A, 0.0, 3, 1.0).is_err());
        assert!(DiscretizationPlan::new(Variant::A, 1.0, 2, 1.0).is_err());
    }

    #[test]
    fn level_examples() {
        let mut plan = DiscretizationPlan::new(Variant::A, 1.0, 3, 1.0).unwrap();
        assert_eq!(plan.level(-1.0), 0.0);
        plan.eta = 0.5;
        plan.levels = 4;
        assert_eq!(plan.level(0.3), 2.0);
        // shifting by exactly eta moves every level by one
        for x in [-0.9, -0.3, 0.1, 0.4] {
            assert_eq!(plan.level(x + 0.5), plan.level(x) + 1.0);
        }
    }

    #[test]
    fn two_constants_transfer() {
        let eps = 0.5;
        let f = TabulatedClass::new(vec![vec![0.0], vec![eps]], 1.0).unwrap();
        let plan = DiscretizationPlan::new(Variant::A, eps, 4, 1.0).unwrap();
        let r = verify_separation_transfer(&f, &plan).unwrap();
        assert!(r.holds());
        assert_eq!(r.pairs_checked, 1);
        assert!(r.worst_margin.unwrap() >= 0.0);
        let d = discretize(&f, &plan).unwrap();
        assert!(d.is_integer_valued());
    }

    #[test]
    fn singleton_and_unseparated() {
        let plan = DiscretizationPlan::new(Variant::A, 0.5, 3, 1.0).unwrap();
        let s = TabulatedClass::new(vec![vec![0.1, 0.2]], 1.0).unwrap();
        let r = verify_separation_transfer(&s, &plan).unwrap();
        assert_eq!((r.pairs_checked, r.violations, r.worst_margin), (0, 0, None));
        let close = TabulatedClass::new(vec![vec![0.0], vec![0.4]], 1.0).unwrap();
        assert!(matches!(
            verify_separation_transfer(&close, &plan),
            Err(Error::NotSeparated { first: 0, second: 1, .. })
        ));
    }
}
