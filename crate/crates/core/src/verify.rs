//! Verification suites run by `margin-bounds verify`. Each check evaluates
//! one inequality on a family of generated instances and records the number
//! of instances, the violations and the smallest slack.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::bounds::{
    chaining_best, product_entropy_bounds, covering_entropy, entropy_bound_a, entropy_bound_b, integral_l_check,
    regime_check, rademacher_bound, BoundParams, FatDimOracle,
};
use crate::capacity::{
    covering_number_capped, lp_distance, packing_number_capped, rademacher_mc, LpNorm, Mode,
};
use crate::combinatorics::{eulerian_psi, eulerian_psi_exact, eulerian_psi_int, k_p, sauer_count_bound};
use crate::constructions::{
    build_separating_tree, check_cardinality_bound, count_strongly_shattered_pairs, discretize,
    extract_subsample_sized, separated_class, separated_integer_class, transfer_check,
    verify_separation_transfer, DiscretizationPlan, Variant,
};
use crate::error::{Error, Result};
use crate::function_class::{
    clip_margin, generate_class, margin_class, truncate_class, ClassKind, GeneratorParams, LabeledDataset, ProductScorerClass,
    TabulatedClass,
};
use crate::risk::{empirical_margin_risk, guaranteed_risk_rhs, risk_report};
use crate::rng;

/// Every operation the suites are required to exercise.
pub const OPERATION_ANCHORS: &[&str] = &[
    "margin_class",
    "truncate_class",
    "phi",
    "phi_gamma",
    "empirical_margin_risk",
    "guaranteed_risk_rhs",
    "lp_distance",
    "covering_number",
    "packing_number",
    "rademacher_mc",
    "fat_shattering_dim",
    "strong_dim",
    "k_p",
    "eulerian_psi",
    "sauer_count_bound",
    "discretize",
    "verify_separation_transfer",
    "extract_subsample",
    "build_separating_tree",
    "count_strongly_shattered_pairs",
    "check_cardinality_bound",
    "entropy_bound_a",
    "entropy_bound_b",
    "product_entropy_bounds",
    "chaining_eval",
    "rademacher_bound",
    "integral_L_check",
    "regime_check",
];

/// Deliberate breakages used to test that failures are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Uses `2 p^p` in place of `K_p`.
    KpConstant,
    /// Checks the discretized class against `4 epsilon'`.
    TransferConstant,
}

impl std::fmt::Display for Fault {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Fault::KpConstant => "kp-constant",
            Fault::TransferConstant => "transfer-constant",
        })
    }
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "kp-constant" => Ok(Fault::KpConstant),
            "transfer-constant" => Ok(Fault::TransferConstant),
            other => Err(format!("unknown fault `{other}`")),
        }
    }
}

/// Instance counts per suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteSizes {
    pub transfer: usize,
    pub pairs: usize,
    pub entropy: usize,
    pub decomposition: usize,
    pub chaining: usize,
    pub product_entropy: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        Self {
            transfer: 200,
            pairs: 100,
            entropy: 60,
            decomposition: 50,
            chaining: 20,
            product_entropy: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Monte Carlo trials for the Rademacher estimates.
    pub trials: usize,
    /// Exact covering cap; suites on product classes raise it to the class size.
    pub exact_cap: usize,
    pub sizes: SuiteSizes,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100_000,
            exact_cap: 24,
            sizes: SuiteSizes::default(),
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub anchors: Vec<&'static str>,
    pub instances: usize,
    pub skipped: usize,
    pub violations: usize,
    /// Smallest slack of the inequality over the checked instances.
    pub worst_margin: Option<f64>,
    /// First violation, if any.
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, anchors: &[&'static str]) -> Self {
        Self {
            name: name.to_string(),
            anchors: anchors.to_vec(),
            instances: 0,
            skipped: 0,
            violations: 0,
            worst_margin: None,
            detail: String::new(),
        }
    }

    /// Records one instance; `slack < 0` is a violation.
    fn record(&mut self, slack: f64, what: impl FnOnce() -> String) {
        self.record_ok(slack >= 0.0, slack, what);
    }

    fn record_ok(&mut self, ok: bool, slack: f64, what: impl FnOnce() -> String) {
        self.instances += 1;
        if self.worst_margin.is_none_or(|w| slack < w) {
            self.worst_margin = Some(slack);
        }
        if !ok {
            self.violations += 1;
            if self.detail.is_empty() {
                self.detail = what();
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.instances > 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect()
    }

    /// Anchors from [`OPERATION_ANCHORS`] that no check exercised.
    pub fn uncovered_anchors(&self) -> Vec<&'static str> {
        OPERATION_ANCHORS
            .iter()
            .copied()
            .filter(|a| !self.checks.iter().any(|c| c.anchors.contains(a)))
            .collect()
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Seeds are derived per suite so that suites are independent of each other.
fn suite_rng(cfg: &VerifyConfig, suite: u64, instance: usize) -> rng::StreamRng {
    rng::substream(cfg.seed ^ suite.wrapping_mul(0x9e37_79b9_7f4a_7c15), instance as u64)
}

pub fn series_suite(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut below = CheckResult::new("series.kp_below_p_pow_p", &["k_p"]);
    for p in 3..=20u32 {
        let kp = k_p(p)?;
        let pp = (p as f64).powi(p as i32);
        let upper = match cfg.fault {
            Some(Fault::KpConstant) => 2.0 * pp,
            _ => kp.upper(),
        };
        let ok = match cfg.fault {
            Some(Fault::KpConstant) => upper < pp,
            _ => kp.certifies_p_pow_p() && upper < pp,
        };
        below.record_ok(ok, (pp - upper) / pp, || format!("p = {p}: K_p + tail = {upper} >= p^p = {pp}"));
    }
    let mut closed = CheckResult::new("series.closed_forms", &["k_p"]);
    for (p, expect) in [(3u32, 26.0f64), (4, 150.0)] {
        // x(1+4x+x^2)/(1-x)^4 and x(1+11x+11x^2+x^3)/(1-x)^5 at x = 1/2
        let x = 0.5f64;
        let oracle = if p == 3 {
            x * (1.0 + 4.0 * x + x * x) / (1.0 - x).powi(4)
        } else {
            x * (1.0 + 11.0 * x + 11.0 * x * x + x.powi(3)) / (1.0 - x).powi(5)
        };
        let v = k_p(p)?.value;
        let err = rel_err(v, oracle).max(rel_err(oracle, expect));
        closed.record(1e-10 - err, || format!("K_{p} = {v}, oracle {oracle}"));
    }
    let mut euler = CheckResult::new("series.eulerian_identity", &["eulerian_psi", "k_p"]);
    let minus_two = BigRational::from_integer(BigInt::from(-2));
    for p in 3..=10u32 {
        let psi = eulerian_psi_exact(p, &minus_two).to_f64().unwrap_or(f64::NAN);
        let fast = eulerian_psi(p, -2.0);
        let kp = k_p(p)?.value;
        let err = rel_err(2.0 * psi, kp).max(rel_err(fast, psi));
        euler.record(1e-10 - err, || format!("p = {p}: 2 psi(-2) = {}, K_p = {kp}", 2.0 * psi));
    }
    let mut base = CheckResult::new("series.base_case", &["eulerian_psi"]);
    let psi3 = eulerian_psi_int(3, -2);
    let ok = psi3 == BigInt::from(13) && BigInt::from(2) * &psi3 < BigInt::from(27);
    base.record_ok(ok, 13.5 - psi3.to_f64().unwrap_or(f64::NAN), || format!("psi_3(-2) = {psi3}"));
    Ok(vec![below, closed, euler, base])
}

/// A random `epsilon`-separated class on at most 8 points with between 2
/// and 60 functions in `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct SeparatedInstance {
    pub class: TabulatedClass,
    pub epsilon: f64,
    pub p: u32,
}

pub fn separated_family(seed: u64, count: usize) -> Result<Vec<SeparatedInstance>> {
    let cfg = VerifyConfig {
        seed,
        ..Default::default()
    };
    (0..count)
        .map(|i| {
            let mut r = suite_rng(&cfg, 2, i);
            // redraw classes that collapse to a single function
            loop {
                let p = [3u32, 4, 5][r.gen_range(0..3)];
                let n = r.gen_range(1..=8);
                let candidates = r.gen_range(2..=60);
                let epsilon = r.gen_range(0.3..0.9);
                let class = separated_class(n, candidates, 1.0, epsilon, LpNorm::integer(p)?, r.gen())?;
                if class.len() >= 2 {
                    return Ok(SeparatedInstance { class, epsilon, p });
                }
            }
        })
        .collect()
}

fn separated_rows(f: &TabulatedClass, cols: &[usize], epsilon: f64, p: LpNorm) -> Result<bool> {
    let rows: Vec<Vec<f64>> = f.rows().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if lp_distance(&rows[i], &rows[j], p)? < epsilon {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Discretization, separation transfer and subsample extraction.
pub fn transfer_suite(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let family = separated_family(cfg.seed, cfg.sizes.transfer)?;
    let mut transfer = CheckResult::new("transfer.separation", &["verify_separation_transfer"]);
    let mut transfer_b = CheckResult::new("transfer.separation_scaled", &["verify_separation_transfer"]);
    let mut range = CheckResult::new("transfer.discretized_range", &["discretize"]);
    let mut extract = CheckResult::new("transfer.extraction", &["extract_subsample", "lp_distance"]);
    for (i, inst) in family.iter().enumerate() {
        let f = &inst.class;
        let plan = DiscretizationPlan::new(Variant::A, inst.epsilon, inst.p, 1.0)?;
        let rep = match cfg.fault {
            Some(Fault::TransferConstant) => transfer_check(f, &plan, 4.0 * plan.epsilon_prime),
            _ => verify_separation_transfer(f, &plan)?,
        };
        match rep.worst_margin {
            Some(w) => transfer.record_ok(rep.holds(), w, || {
                format!("instance {i}: {} of {} pairs below {}", rep.violations, rep.pairs_checked, rep.target)
            }),
            None => transfer.skipped += 1,
        }
        let plan_b = DiscretizationPlan::new(Variant::B, inst.epsilon, inst.p, 1.0)?;
        let rep_b = verify_separation_transfer(f, &plan_b)?;
        if let Some(w) = rep_b.worst_margin {
            transfer_b.record_ok(rep_b.holds(), w, || format!("instance {i}: {} violations", rep_b.violations));
        } else {
            transfer_b.skipped += 1;
        }
        let d = discretize(f, &plan)?;
        let top = plan.levels as f64;
        let ok = d.rows().flatten().all(|&v| v >= 0.0 && v <= top && v.fract() == 0.0);
        range.record_ok(ok, 0.0, || format!("instance {i}: level outside [0, {top}]"));
        let n = f.n_points();
        let size = (n / 2).max(1);
        let ext = extract_subsample_sized(f, inst.epsilon, inst.p, cfg.seed.wrapping_add(i as u64), 20, Some(size))?;
        match &ext.indices {
            Some(cols) => {
                let ok = separated_rows(f, cols, ext.epsilon_1, LpNorm::integer(inst.p)?)?;
                extract.record_ok(ok, 0.0, || format!("instance {i}: subsample {cols:?} not separated"));
            }
            None => extract.skipped += 1,
        }
    }
    Ok(vec![transfer, transfer_b, range, extract])
}

/// Separating trees on the separated family.
pub fn tree_suite(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let family = separated_family(cfg.seed, cfg.sizes.transfer)?;
    let mut leaves = CheckResult::new("tree.leaves", &["build_separating_tree"]);
    for (i, inst) in family.iter().enumerate() {
        tree_check(&mut leaves, i, &inst.class, inst.epsilon, inst.p)?;
    }
    Ok(vec![leaves])
}

fn tree_check(out: &mut CheckResult, i: usize, f: &TabulatedClass, epsilon: f64, p: u32) -> Result<usize> {
    let tree = build_separating_tree(f, epsilon, p)?;
    let need = (f.len() as f64).sqrt().ceil() as usize;
    let got = tree.leaves();
    let failures = tree.mass_failures();
    let structure = tree.check(f);
    let ok = got >= need && failures.is_empty() && structure.is_ok();
    out.record_ok(ok, got as f64 - need as f64, || {
        format!(
            "instance {i}: {got} leaves, need {need}; mass failures at {failures:?}; {}",
            structure.err().unwrap_or_else(|| "structure ok".into())
        )
    });
    Ok(got)
}

/// Integer classes that are `4 (4 K_p)^{1/p}`-separated, with at most 6
/// points, 4 distinct values and 64 functions.
pub fn integer_family(seed: u64, count: usize) -> Result<Vec<(TabulatedClass, u32)>> {
    let cfg = VerifyConfig {
        seed,
        ..Default::default()
    };
    (0..count)
        .map(|i| {
            let mut r = suite_rng(&cfg, 4, i);
            let p = [3u32, 4, 5][r.gen_range(0..3)];
            let n = r.gen_range(1..=6);
            let eps = 4.0 * k_p(p)?.four_kp_root();
            let spacing = (eps * (n as f64).powf(1.0 / p as f64)).ceil();
            let k = r.gen_range(2..=4);
            let mut levels = vec![0.0];
            for _ in 1..k {
                let last = *levels.last().unwrap();
                levels.push(last + spacing + r.gen_range(0..=3) as f64);
            }
            let candidates = r.gen_range(2..=64);
            let f = separated_integer_class(n, candidates, &levels, eps, LpNorm::integer(p)?, r.gen())?;
            Ok((f, p))
        })
        .collect()
}

/// Strongly shattered pairs, separating trees and the cardinality bound on
/// integer classes.
pub fn pairs_suite(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let family = integer_family(cfg.seed, cfg.sizes.pairs)?;
    let mut leaves = CheckResult::new("tree.integer_leaves", &["build_separating_tree"]);
    let mut pairs = CheckResult::new("pairs.at_least_leaves", &["count_strongly_shattered_pairs"]);
    let mut card = CheckResult::new("pairs.cardinality_bound", &["check_cardinality_bound", "strong_dim"]);
    let mut sauer = CheckResult::new("pairs.below_sauer_sum", &["sauer_count_bound"]);
    for (i, (f, p)) in family.iter().enumerate() {
        let eps = 4.0 * k_p(*p)?.four_kp_root();
        let got = tree_check(&mut leaves, i, f, eps, *p)?;
        let count = count_strongly_shattered_pairs(f)?;
        pairs.record(count as f64 - got as f64, || format!("instance {i}: {count} pairs < {got} leaves"));
        let rep = check_cardinality_bound(f, *p)?;
        card.record_ok(rep.holds, rep.ln_bound - rep.ln_size, || {
            format!("instance {i}: ln|F| = {} > {}", rep.ln_size, rep.ln_bound)
        });
        let s = sauer_count_bound(f.n_points() as u64, rep.d as u64, rep.b)?;
        let ok = s.holds && num_bigint::BigUint::from(count) <= s.exact_sum;
        sauer.record_ok(ok, s.sum - count as f64, || {
            format!("instance {i}: {count} pairs, sum {}, bound {}", s.exact_sum, s.bound)
        });
    }
    Ok(vec![leaves, pairs, card, sauer])
}

fn fit_scales(extra: &[f64]) -> Vec<f64> {
    let mut s: Vec<f64> = (0..=12).map(|k| 2f64.powi(-k)).collect();
    s.extend_from_slice(extra);
    s
}

/// Power-law exponent used when fitting oracles at desk scale.
const FIT_EXPONENT: f64 = 0.05;

/// Metric entropy bounds against exact covering numbers.
pub fn entropy_suite(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut a = CheckResult::new("entropy.a_dominates", &["entropy_bound_a", "fat_shattering_dim", "covering_number"]);
    let mut b = CheckResult::new("entropy.b_dominates", &["entropy_bound_b", "fat_shattering_dim", "covering_number"]);
    for i in 0..cfg.sizes.entropy {
        let mut r = suite_rng(cfg, 5, i);
        let params = GeneratorParams {
            n_points: r.gen_range(2..=6),
            size: r.gen_range(2..=20),
            m_bound: 1.0,
            ..Default::default()
        };
        let f = generate_class(ClassKind::UniformRandom, &params, r.gen())?
            .into_tabulated()
            .expect("tabulated kind");
        let p = [3u32, 4][r.gen_range(0..2)];
        let eps = r.gen_range(0.1..1.0);
        let pf = p as f64;
        let oracle = FatDimOracle::fit(&f, FIT_EXPONENT, &fit_scales(&[eps / (15.0 * pf), eps / (36.0 * pf), eps / (37.0 * pf)]))?;
        let norm = LpNorm::integer(p)?;
        let cover = covering_number_capped(&f, eps, norm, Mode::Exact, cfg.exact_cap.max(f.len()))?;
        let ln_n = (cover.value).ln();
        let n = f.n_points() as f64;
        for (check, bound) in [
            (&mut a, entropy_bound_a(eps, p, n, f.m_bound(), &oracle)),
            (&mut b, entropy_bound_b(eps, p, n, f.m_bound(), &oracle)),
        ] {
            match bound {
                Ok(v) => check.record(v.value - ln_n, || format!("instance {i}: bound {} < ln N = {ln_n}", v.value)),
                Err(Error::Precondition(_)) => check.skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(vec![a, b])
}

fn random_product(r: &mut rng::StreamRng, c: usize, sizes: std::ops::RangeInclusive<usize>, n: usize) -> Result<ProductScorerClass> {
    let params = GeneratorParams {
        n_points: n,
        size: r.gen_range(sizes.clone()),
        m_bound: 1.0,
        c_categories: c,
        ..Default::default()
    };
    let g = generate_class(ClassKind::ProductRandom, &params, r.gen())?
        .into_product()
        .expect("product kind");
    // vary the component sizes
    let comps = g
        .components()
        .iter()
        .map(|h| {
            let k = r.gen_range(sizes.clone()).min(h.len());
            let mut idx: Vec<usize> = (0..h.len()).collect();
            idx.shuffle(r);
            idx.truncate(k);
            idx.sort_unstable();
            h.select(&idx)
        })
        .collect::<Result<Vec<_>>>()?;
    ProductScorerClass::new(comps)
}

fn random_labels(r: &mut rng::StreamRng, c: usize, n: usize) -> Result<LabeledDataset> {
    LabeledDataset::sequential((0..n).map(|_| r.gen_range(1..=c)).collect())
}

fn exact_cover_count(f: &TabulatedClass, eps: f64, p: LpNorm) -> Result<usize> {
    Ok(covering_number_capped(f, eps, p, Mode::Exact, f.len().max(1))?.as_count())
}

/// Decomposition and `p`-monotonicity of covering numbers on product classes.
pub fn covering_suite(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut decomp = CheckResult::new(
        "covering.product_decomposition",
        &["covering_number", "margin_class", "truncate_class"],
    );
    let mut mono = CheckResult::new("covering.p_monotonicity", &["covering_number"]);
    let mut sandwich = CheckResult::new("covering.packing_sandwich", &["covering_number", "packing_number"]);
    let norms = [LpNorm::integer(1)?, LpNorm::integer(2)?, LpNorm::integer(3)?, LpNorm::integer(4)?, LpNorm::INFINITY];
    for i in 0..cfg.sizes.decomposition {
        let mut r = suite_rng(cfg, 6, i);
        let n = r.gen_range(1..=4);
        let g = random_product(&mut r, 3, 1..=3, n)?;
        let data = random_labels(&mut r, 3, n)?;
        let gamma = r.gen_range(0.2..=1.0);
        let f = truncate_class(&margin_class(&g, &data)?, gamma)?;
        let eps = r.gen_range(0.05..0.8) * gamma;
        let p = norms[r.gen_range(0..norms.len())];
        let shrink = if p.is_infinite() { 1.0 } else { 3f64.powf(1.0 / p.exponent()) };
        let lhs = (exact_cover_count(&f, eps, p)? as f64).ln();
        let mut rhs = 0.0;
        for h in g.components() {
            rhs += (exact_cover_count(h, eps / shrink, p)? as f64).ln();
        }
        decomp.record(rhs - lhs, || format!("instance {i}: ln N = {lhs} > sum {rhs} (p = {p}, eps = {eps})"));
        let counts = norms
            .iter()
            .map(|&q| exact_cover_count(&f, eps, q))
            .collect::<Result<Vec<_>>>()?;
        let ok = counts.windows(2).all(|w| w[0] <= w[1]);
        let slack = counts.windows(2).map(|w| w[1] as f64 - w[0] as f64).fold(f64::INFINITY, f64::min);
        mono.record_ok(ok, slack, || format!("instance {i}: counts over p = {counts:?}"));
        let cover = exact_cover_count(&f, eps, p)? as f64;
        let pack = packing_number_capped(&f, eps, p, Mode::Exact, 200)?.value;
        let pack2 = packing_number_capped(&f, 2.0 * eps, p, Mode::Exact, 200)?.value;
        let slack = (pack - cover).min(cover - pack2);
        sandwich.record(slack, || format!("instance {i}: M(2e) = {pack2}, N(e) = {cover}, M(e) = {pack}"));
    }
    Ok(vec![decomp, mono, sandwich])
}

/// Exact chaining sums against Monte Carlo Rademacher estimates on truncated
/// margin classes, with the assembled risk bounds.
pub fn chaining_suite(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut dom = CheckResult::new(
        "chaining.dominance",
        &["chaining_eval", "rademacher_mc", "covering_number", "margin_class", "truncate_class"],
    );
    let mut rhs = CheckResult::new("risk.rhs_ordering", &["guaranteed_risk_rhs"]);
    let mut risks = CheckResult::new(
        "risk.margin_loss_dominates",
        &["phi", "phi_gamma", "empirical_margin_risk"],
    );
    let mut invariance = CheckResult::new("risk.truncation_invariance", &["empirical_margin_risk", "phi_gamma"]);
    for i in 0..cfg.sizes.chaining {
        let mut r = suite_rng(cfg, 7, i);
        let n = r.gen_range(4..=10);
        let g = random_product(&mut r, 3, 2..=3, n)?;
        let data = random_labels(&mut r, 3, n)?;
        let gamma = [0.25, 0.5, 1.0][r.gen_range(0..3)];
        let margins = margin_class(&g, &data)?;
        let f = truncate_class(&margins, gamma)?;
        let p2 = LpNorm::integer(2)?;
        let cap = f.len().max(cfg.exact_cap);
        let (_, chain) = chaining_best(1.0, |e| covering_entropy(&f, e, p2, cap), n as f64, gamma, 12)?;
        let mc = rademacher_mc(&f, cfg.trials, cfg.seed.wrapping_add(i as u64))?;
        let slack = chain - (mc.value - 3.0 * mc.stderr);
        dom.record(slack, || format!("instance {i}: chaining {chain} < {} - 3 * {}", mc.value, mc.stderr));
        let delta = 0.05;
        let mut worst = f64::INFINITY;
        for row in margins.rows() {
            let trow: Vec<f64> = row.iter().map(|&t| clip_margin(t, gamma)).collect();
            let rep = risk_report(row, gamma)?;
            risks.record(rep.empirical_margin_risk - rep.empirical_risk, || {
                format!("instance {i}: L = {} > L_gamma = {}", rep.empirical_risk, rep.empirical_margin_risk)
            });
            let t = empirical_margin_risk(&trow, gamma)?;
            invariance.record_ok(t == rep.empirical_margin_risk, 0.0, || {
                format!("instance {i}: {t} != {}", rep.empirical_margin_risk)
            });
            worst = worst.min(rep.empirical_margin_risk);
        }
        let upper = guaranteed_risk_rhs(worst, chain, gamma, delta, n)?;
        let lower = guaranteed_risk_rhs(worst, (mc.value - 3.0 * mc.stderr).max(0.0), gamma, delta, n)?;
        rhs.record(upper - lower, || format!("instance {i}: {upper} < {lower}"));
    }
    Ok(vec![dom, rhs, risks, invariance])
}

/// Closed-form bounds: frozen values, regime table, the integral bound and
/// the product-class entropy bounds against exact covering numbers.
pub fn bounds_suite(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut frozen = CheckResult::new(
        "bounds.reference_values",
        &["entropy_bound_a", "entropy_bound_b", "product_entropy_bounds", "rademacher_bound"],
    );
    let two = FatDimOracle::Constant(2.0);
    let one = FatDimOracle::Constant(1.0);
    let params8 = BoundParams::new(8, 100.0, 1.0, 0.05, 1.0, 1.0, 1.0)?;
    let cor = product_entropy_bounds(1.0, &params8, &one)?;
    let t3 = rademacher_bound(&BoundParams { sample_size: 1e6, ..params8 })?;
    let cases = [
        ("entropy_a", entropy_bound_a(1.0, 3, 100.0, 1.0, &two)?.value, 34.874741980793863),
        ("entropy_b", entropy_bound_b(1.0, 3, 100.0, 1.0, &two)?.value, 126.17128570333117),
        ("with_sample_size", cor.with_sample_size, 166.28259086032220),
        ("sample_free", cor.sample_free, 907.87180198522061),
        ("rademacher", t3.value, 7.71601763253892),
    ];
    for (name, got, want) in cases {
        frozen.record(1e-9 - rel_err(got, want), || format!("{name}: {got} vs {want}"));
    }

    let mut regime = CheckResult::new("bounds.regime_table", &["regime_check", "rademacher_bound"]);
    let table = [(8u64, 100.0, 2.0, true), (50, 100.0, 3.0, false), (4, 10.0, 1.0, false), (8, 8.0, 3.0, false)];
    for (c, m, d, admissible) in table {
        let params = BoundParams::new(c, m, 1.0, 0.05, 1.0, 1.0, d)?;
        let v = regime_check(&params);
        let rejected = rademacher_bound(&params).is_err();
        regime.record_ok(v.admissible == admissible && rejected != admissible, 0.0, || {
            format!("C = {c}, m = {m}, d_G = {d}: verdict {v:?}")
        });
    }

    let mut integral = CheckResult::new("bounds.integral_closed_form", &["integral_L_check"]);
    for k in [1.1, 10.0, 1e3, 1e6] {
        for d in [0.5, 1.0, 1.5] {
            let c = integral_l_check(k, d, 10_000)?;
            integral.record(c.closed_form - c.quadrature, || {
                format!("K = {k}, d_G = {d}: {} < {}", c.closed_form, c.quadrature)
            });
        }
    }

    let mut product_entropy = CheckResult::new("entropy.product_dominance", &["product_entropy_bounds", "fat_shattering_dim"]);
    for i in 0..cfg.sizes.product_entropy {
        let mut r = suite_rng(cfg, 8, i);
        let n = r.gen_range(2..=3);
        let g = random_product(&mut r, 5, 2..=2, n)?;
        let data = random_labels(&mut r, 5, n)?;
        let gamma = [0.5, 1.0][r.gen_range(0..2)];
        let f = truncate_class(&margin_class(&g, &data)?, gamma)?;
        let eps = r.gen_range(0.1..=1.0) * gamma;
        let params = BoundParams::new(5, n as f64, gamma, 0.05, g.m_bound(), 1.0, 1.0)?;
        let l = params.log2_2c();
        let scales = fit_scales(&[eps / (30.0 * l), eps / (72.0 * l)]);
        let mut k = 0.0f64;
        for h in g.components() {
            if let FatDimOracle::PowerLaw { k_g, .. } = FatDimOracle::fit(h, FIT_EXPONENT, &scales)? {
                k = k.max(k_g);
            }
        }
        let oracle = FatDimOracle::power_law(k, FIT_EXPONENT)?;
        let b = product_entropy_bounds(eps, &params, &oracle)?;
        if (n as f64) < b.d_with_sample_size.max(b.d_sample_free) {
            product_entropy.skipped += 1;
            continue;
        }
        let p = LpNorm::integer(b.p)?;
        let ln_n = (exact_cover_count(&f, eps, p)? as f64).ln();
        product_entropy.record(b.with_sample_size.min(b.sample_free) - ln_n, || {
            format!("instance {i}: with_sample_size = {}, sample_free = {}, ln N = {ln_n}", b.with_sample_size, b.sample_free)
        });
    }
    Ok(vec![frozen, regime, integral, product_entropy])
}

/// All suites in a fixed order.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.trials < 1 {
        return Err(crate::error::out_of_range("trials", "need at least one trial"));
    }
    let mut checks = Vec::new();
    checks.extend(series_suite(cfg)?);
    checks.extend(covering_suite(cfg)?);
    checks.extend(transfer_suite(cfg)?);
    checks.extend(tree_suite(cfg)?);
    checks.extend(pairs_suite(cfg)?);
    checks.extend(entropy_suite(cfg)?);
    checks.extend(chaining_suite(cfg)?);
    checks.extend(bounds_suite(cfg)?);
    Ok(VerifyReport { checks })
}
