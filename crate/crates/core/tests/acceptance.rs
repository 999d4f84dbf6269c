//! Exit criteria. Runs without the libtest harness so that every criterion
//! prints its verdict line; the process fails if any criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use margin_bounds::bounds::{geometric_range, integral_l_check, log_log_slope, sweep, SweepGrid};
use margin_bounds::capacity::{is_separated, LpNorm};
use margin_bounds::combinatorics::{eulerian_psi, eulerian_psi_int, k_p};
use margin_bounds::verify::{
    chaining_suite, covering_suite, integer_family, pairs_suite, separated_family, entropy_suite, transfer_suite,
    tree_suite, CheckResult, VerifyConfig,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

/// Joins sub-verdicts; failing parts are marked.
fn all(parts: Vec<Verdict>) -> Verdict {
    let pass = parts.iter().all(|v| v.pass);
    let detail = parts
        .iter()
        .map(|v| if v.pass { v.detail.clone() } else { format!("[failed] {}", v.detail) })
        .collect::<Vec<_>>()
        .join("; ");
    verdict(pass, detail)
}

fn within(elapsed: Duration, limit: Duration) -> Verdict {
    verdict(
        elapsed < limit,
        format!("{:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()),
    )
}

fn clean(checks: &[CheckResult], name: &str, min_instances: usize) -> Verdict {
    match checks.iter().find(|c| c.name == name) {
        None => verdict(false, format!("{name} missing")),
        Some(c) => verdict(
            c.violations == 0 && c.instances >= min_instances,
            format!(
                "{name}: {} instances, {} violations{}",
                c.instances,
                c.violations,
                if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) }
            ),
        ),
    }
}

/// Ordered Bell numbers by `a(n) = sum_{k=1}^n C(n, k) a(n - k)`.
fn ordered_bell(n: usize) -> Vec<u128> {
    let mut a = vec![1u128];
    for m in 1..=n {
        let mut binom = 1u128;
        let mut sum = 0u128;
        for k in 1..=m {
            binom = binom * (m - k + 1) as u128 / k as u128;
            sum += binom * a[m - k];
        }
        a.push(sum);
    }
    a
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let bell = ordered_bell(20);
    let mut parts = Vec::new();
    let mut worst_gap = f64::INFINITY;
    let mut below = true;
    let mut worst_closed = 0.0f64;
    for p in 3..=20u32 {
        let k = k_p(p).unwrap();
        let ceiling = (p as f64).powi(p as i32);
        below &= k.value + k.tail_bound < ceiling;
        worst_gap = worst_gap.min(1.0 - (k.value + k.tail_bound) / ceiling);
        // sum_k k^p / 2^k is twice the ordered Bell number
        worst_closed = worst_closed.max(rel(k.value, 2.0 * bell[p as usize] as f64));
    }
    parts.push(verdict(below, format!("K_p + tail < p^p on [3, 20], min relative gap {worst_gap:.3e}")));
    let k3 = k_p(3).unwrap().value;
    let k4 = k_p(4).unwrap().value;
    parts.push(verdict(
        rel(k3, 26.0) <= 1e-10 && rel(k4, 150.0) <= 1e-10 && worst_closed <= 1e-10,
        format!("K_3 = {k3}, K_4 = {k4}, worst closed-form error {worst_closed:.2e}"),
    ));
    let mut worst_psi = 0.0f64;
    for p in 3..=10u32 {
        worst_psi = worst_psi.max(rel(2.0 * eulerian_psi(p, -2.0), k_p(p).unwrap().value));
    }
    parts.push(verdict(worst_psi <= 1e-10, format!("2 psi_p(-2) vs K_p worst {worst_psi:.2e}")));
    let psi3 = eulerian_psi_int(3, -2);
    parts.push(verdict(psi3 == 13.into(), format!("psi_3(-2) = {psi3} < 13.5")));
    parts.push(within(start.elapsed(), Duration::from_secs(1)));
    all(parts)
}

fn criterion_2(cfg: &VerifyConfig) -> Verdict {
    let start = Instant::now();
    let family = separated_family(cfg.seed, cfg.sizes.transfer).unwrap();
    let shape_ok = family.iter().all(|inst| {
        inst.class.len() <= 60
            && inst.class.n_points() <= 8
            && [3, 4, 5].contains(&inst.p)
            && is_separated(&inst.class, inst.epsilon, LpNorm::integer(inst.p).unwrap()).is_ok()
    });
    let checks = transfer_suite(cfg).unwrap();
    all(vec![
        verdict(shape_ok, format!("{} separated classes within |F| <= 60, n <= 8", family.len())),
        clean(&checks, "transfer.separation", 200),
        within(start.elapsed(), Duration::from_secs(30)),
    ])
}

fn criterion_3(cfg: &VerifyConfig) -> Verdict {
    let checks = tree_suite(cfg).unwrap();
    clean(&checks, "tree.leaves", 200)
}

fn criterion_4(cfg: &VerifyConfig) -> Verdict {
    let start = Instant::now();
    let family = integer_family(cfg.seed, cfg.sizes.pairs).unwrap();
    let shape_ok = family.iter().all(|(f, _)| {
        let values: BTreeSet<u64> = f.rows().flatten().map(|v| v.to_bits()).collect();
        f.n_points() <= 6 && f.len() <= 64 && values.len() <= 4 && f.is_integer_valued()
    });
    let checks = pairs_suite(cfg).unwrap();
    all(vec![
        verdict(shape_ok, format!("{} integer classes with n <= 6, |B| <= 4, |F| <= 64", family.len())),
        clean(&checks, "tree.integer_leaves", 100),
        clean(&checks, "pairs.at_least_leaves", 100),
        clean(&checks, "pairs.cardinality_bound", 100),
        within(start.elapsed(), Duration::from_secs(120)),
    ])
}

fn criterion_5(cfg: &VerifyConfig) -> Verdict {
    let checks = entropy_suite(cfg).unwrap();
    all(vec![
        clean(&checks, "entropy.a_dominates", 1),
        clean(&checks, "entropy.b_dominates", 1),
    ])
}

fn criterion_6(cfg: &VerifyConfig) -> Verdict {
    let checks = covering_suite(cfg).unwrap();
    all(vec![
        clean(&checks, "covering.product_decomposition", 50),
        clean(&checks, "covering.p_monotonicity", 50),
    ])
}

fn criterion_7(cfg: &VerifyConfig) -> Verdict {
    let start = Instant::now();
    let checks = chaining_suite(cfg).unwrap();
    all(vec![
        verdict(cfg.trials == 100_000, format!("trials = {}", cfg.trials)),
        clean(&checks, "chaining.dominance", 20),
        within(start.elapsed(), Duration::from_secs(120)),
    ])
}

fn bound_column(c: Vec<u64>, m: Vec<f64>, d_g: f64) -> Vec<f64> {
    let grid = SweepGrid {
        c,
        m,
        gamma: vec![1.0],
        d_g: vec![d_g],
        k_g: 1.0,
        m_g: 1.0,
        delta: 0.05,
    };
    sweep(&grid, None)
        .unwrap()
        .iter()
        .map(|r| r.thm3_bound.expect("admissible grid"))
        .collect()
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let cs = geometric_range(8.0, 4096.0, 2.0).unwrap();
    let c_grid: Vec<u64> = cs.iter().map(|&c| c as u64).collect();
    let c_slope = log_log_slope(&cs, &bound_column(c_grid, vec![1e8], 1.0));
    let mut parts = vec![verdict(
        (0.5..=0.62).contains(&c_slope),
        format!("slope in C = {c_slope:.4} (target [0.5, 0.62])"),
    )];
    let small_m = geometric_range(1e3, 1e9, 10.0).unwrap();
    for d in [0.5, 1.0, 1.5] {
        let s = log_log_slope(&small_m, &bound_column(vec![8], small_m.clone(), d));
        parts.push(verdict((s + 0.5).abs() <= 0.01, format!("slope in m at d_G = {d}: {s:.4}")));
    }
    let large_m = geometric_range(1e20, 1e30, 10.0).unwrap();
    for d in [3.0, 4.0] {
        let s = log_log_slope(&large_m, &bound_column(vec![8], large_m.clone(), d));
        parts.push(verdict(
            (s + 1.0 / d).abs() <= 0.01,
            format!("slope in m at d_G = {d}: {s:.4} (target {:.4})", -1.0 / d),
        ));
    }
    parts.push(within(start.elapsed(), Duration::from_secs(5)));
    all(parts)
}

fn criterion_9() -> Verdict {
    let mut failures = Vec::new();
    let mut n = 0;
    for k in [1.1, 10.0, 1e3, 1e6] {
        for d in [0.5, 1.0, 1.5] {
            let c = integral_l_check(k, d, 10_000).unwrap();
            n += 1;
            if !c.dominates() {
                failures.push(format!("K = {k}, d_G = {d}: {} < {}", c.closed_form, c.quadrature));
            }
        }
    }
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{n} pairs dominated")
        } else {
            failures.join(", ")
        },
    )
}

fn run_twice(dir: &Path, name: &str, args: &[&str]) -> Verdict {
    let exe = env!("CARGO_BIN_EXE_margin-bounds");
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.join(format!("{name}-{run}"));
        let status = Command::new(exe)
            .args(args)
            .arg("--out")
            .arg(&out)
            .status()
            .expect("binary runs");
        if !status.success() {
            return verdict(false, format!("{name} exited with {status}"));
        }
        outputs.push(std::fs::read(&out).expect("output written"));
    }
    verdict(
        outputs[0] == outputs[1],
        format!("{name}: {} bytes, identical = {}", outputs[0].len(), outputs[0] == outputs[1]),
    )
}

fn criterion_10() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let class = dir.path().join("class.json");
    let exe = env!("CARGO_BIN_EXE_margin-bounds");
    let made = Command::new(exe)
        .args(["simulate", "--kind", "uniform_random", "--n-points", "6", "--size", "8", "--seed", "3", "--out"])
        .arg(&class)
        .status()
        .expect("binary runs");
    let sweep_args = [
        "sweep",
        "--c",
        "5,8",
        "--m",
        "6,100",
        "--gamma",
        "0.5",
        "--dg",
        "1,3",
        "--seed",
        "11",
        "--trials",
        "2000",
        "--class",
        class.to_str().unwrap(),
    ];
    all(vec![
        verdict(made.success(), "class file generated"),
        run_twice(dir.path(), "verify.csv", &["verify", "--seed", "7"]),
        run_twice(dir.path(), "verify.json", &["verify", "--seed", "7", "--format", "json"]),
        run_twice(dir.path(), "sweep.csv", &sweep_args),
        run_twice(dir.path(), "sweep.json", &[&sweep_args[..], &["--format", "json"]].concat()),
    ])
}

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("series constant below p^p", Box::new(criterion_1)),
        ("separation transfer", Box::new(|| criterion_2(&cfg))),
        ("separating tree leaves", Box::new(|| criterion_3(&cfg))),
        ("shattered pairs and cardinality", Box::new(|| criterion_4(&cfg))),
        ("metric entropy dominance", Box::new(|| criterion_5(&cfg))),
        ("covering decomposition and p-monotonicity", Box::new(|| criterion_6(&cfg))),
        ("chaining dominance", Box::new(|| criterion_7(&cfg))),
        ("bound scaling in C and m", Box::new(criterion_8)),
        ("integral closed form", Box::new(criterion_9)),
        ("deterministic outputs", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<44} {}  {}",
            i + 1,
            name,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
