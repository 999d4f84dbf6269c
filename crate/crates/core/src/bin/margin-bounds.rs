use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use serde::Serialize;

use margin_bounds::bounds::{
    product_entropy_bounds, geometric_range, regime_check, sweep, rademacher_bound, BoundParams, EmpiricalInput,
    FatDimOracle, SweepGrid,
};
use margin_bounds::capacity::{
    covering_number_capped, fat_shattering_dim, packing_number_capped, rademacher_mc, strong_dim, CapacityEstimate,
    LpNorm, Mode, DEFAULT_PACKING_CAP,
};
use margin_bounds::function_class::{generate_class, ClassKind, GeneratedClass, GeneratorParams};
use margin_bounds::io::{load_class_file, ClassFile};
use margin_bounds::report::{self, format_number, Format, RunMetadata};
use margin_bounds::verify::{run_verify, Fault, VerifyConfig};
use margin_bounds::{rng, Error};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "margin-bounds", version, about = "Multi-category margin bounds and capacity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every verification suite and write a per-check report.
    Verify(VerifyArgs),
    /// Capacity measures of a class file.
    Capacity(CapacityArgs),
    /// The Rademacher complexity bound at one parameter point.
    Bound(BoundArgs),
    /// The bound over a grid of parameters.
    Sweep(SweepArgs),
    /// Write a synthetic class file.
    Simulate(SimulateArgs),
}

#[derive(Args, Serialize)]
struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    #[serde(serialize_with = "display")]
    format: Format,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    trials: usize,
    #[arg(long, default_value_t = 24)]
    exact_cap: usize,
    #[arg(long, hide = true)]
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "display_opt")]
    inject_fault: Option<Fault>,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Serialize)]
struct CapacityArgs {
    #[arg(long)]
    class: PathBuf,
    /// Exponent of the L_p pseudo-metric, or `inf`.
    #[arg(long, default_value = "2")]
    #[serde(serialize_with = "display")]
    p: LpNorm,
    /// Scale of the covering and packing numbers.
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Scale of the fat-shattering dimension.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Largest class solved exactly; greedy estimates above it.
    #[arg(long, default_value_t = 24)]
    exact_cap: usize,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Serialize)]
struct ModelArgs {
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    kg: f64,
    #[arg(long, default_value_t = 1.0)]
    mg: f64,
}

#[derive(Args, Serialize)]
struct BoundArgs {
    #[arg(long)]
    c: u64,
    #[arg(long)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long)]
    dg: f64,
    /// Also report the metric entropy bounds at this scale.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    /// Comma-separated values of C.
    #[arg(long, value_delimiter = ',', conflicts_with = "c_range")]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    c: Vec<u64>,
    /// Geometric grid lo:hi:mul.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    c_range: Option<String>,
    #[arg(long, value_delimiter = ',', conflicts_with = "m_range")]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    m: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    m_range: Option<String>,
    #[arg(long, value_delimiter = ',', conflicts_with = "gamma_range")]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    gamma: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma_range: Option<String>,
    #[arg(long, value_delimiter = ',', conflicts_with = "dg_range")]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    dg: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dg_range: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    /// Class file for the empirical columns.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 24)]
    exact_cap: usize,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    /// uniform_random, grid_constants, staircase_known_fatdim or product_random.
    #[arg(long, default_value = "uniform_random")]
    kind: String,
    #[arg(long, default_value_t = 4)]
    n_points: usize,
    #[arg(long, default_value_t = 8)]
    size: usize,
    /// Bound on the absolute value of every entry.
    #[arg(long, default_value_t = 1.0)]
    mg: f64,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[arg(long, default_value_t = 0)]
    dim: usize,
    #[arg(long, default_value_t = 3)]
    c: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn display_opt<T: std::fmt::Display, S: serde::Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// Resolved flags of a command, without its output path.
fn flag_map<T: Serialize>(args: &T) -> BTreeMap<String, String> {
    let value = serde_json::to_value(args).expect("flags serialize");
    let mut out = BTreeMap::new();
    if let serde_json::Value::Object(map) = value {
        for (k, v) in map {
            let text = match v {
                serde_json::Value::String(s) => s,
                serde_json::Value::Array(items) => items
                    .iter()
                    .map(|i| i.as_str().map_or_else(|| i.to_string(), str::to_string))
                    .collect::<Vec<_>>()
                    .join(","),
                other => other.to_string(),
            };
            out.insert(k.replace('_', "-"), text);
        }
    }
    out
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    let cfg = VerifyConfig {
        seed: args.seed,
        trials: args.trials,
        exact_cap: args.exact_cap,
        fault: args.inject_fault,
        ..VerifyConfig::default()
    };
    let report = run_verify(&cfg)?;
    let meta = RunMetadata::new("verify", args.seed, flag_map(args));
    let text = match args.output.format {
        Format::Csv => report::verify_csv(&meta, &report)?,
        Format::Json => report::verify_json(&meta, &report),
    };
    emit(args.output.out.as_deref(), &text)?;
    let failures = report.failures();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("failed checks: {}", failures.join(", "))))
    }
}

#[derive(Serialize)]
struct Measure {
    measure: &'static str,
    #[serde(flatten)]
    estimate: CapacityEstimate,
}

fn cmd_capacity(args: &CapacityArgs) -> CmdResult {
    let f = load_class_file(&args.class)?.margins()?;
    let mode = |len: usize, cap: usize| if len <= cap { Mode::Exact } else { Mode::Greedy };
    let cover_mode = mode(f.len(), args.exact_cap);
    let pack_mode = mode(f.len(), DEFAULT_PACKING_CAP.max(args.exact_cap));
    let count = |value: usize| CapacityEstimate {
        value: value as f64,
        method: margin_bounds::capacity::Method::Exact,
        stderr: 0.0,
        trials: 0,
        epsilon: None,
        p: None,
    };
    let mut measures = vec![
        Measure {
            measure: "covering_number",
            estimate: covering_number_capped(&f, args.epsilon, args.p, cover_mode, args.exact_cap)?,
        },
        Measure {
            measure: "packing_number",
            estimate: packing_number_capped(&f, args.epsilon, args.p, pack_mode, DEFAULT_PACKING_CAP.max(args.exact_cap))?,
        },
        Measure {
            measure: "rademacher",
            estimate: rademacher_mc(&f, args.trials, args.seed)?,
        },
        Measure {
            measure: "fat_shattering_dim",
            estimate: CapacityEstimate {
                epsilon: Some(args.gamma),
                ..count(fat_shattering_dim(&f, args.gamma)?)
            },
        },
    ];
    if f.is_integer_valued() {
        measures.push(Measure {
            measure: "strong_dim",
            estimate: count(strong_dim(&f)?),
        });
    }
    let meta = RunMetadata::new("capacity", args.seed, flag_map(args));
    let text = match args.output.format {
        Format::Json => report::json_document(&meta, "measures", &measures),
        Format::Csv => {
            let rows = measures
                .iter()
                .map(|m| {
                    let e = &m.estimate;
                    let method = serde_json::to_value(e.method).expect("method serializes");
                    vec![
                        m.measure.to_string(),
                        format_number(e.value),
                        method.as_str().unwrap_or_default().to_string(),
                        format_number(e.stderr),
                        e.trials.to_string(),
                        e.epsilon.map(format_number).unwrap_or_default(),
                        e.p.map(format_number).unwrap_or_default(),
                    ]
                })
                .collect();
            report::table_csv(&meta, &["measure", "value", "method", "stderr", "trials", "epsilon", "p"], rows)?
        }
    };
    emit(args.output.out.as_deref(), &text)
}

fn cmd_bound(args: &BoundArgs) -> CmdResult {
    let m = &args.model;
    let params = BoundParams::new(args.c, args.m, args.gamma, m.delta, m.mg, m.kg, args.dg)?;
    let verdict = regime_check(&params);
    if let Some(v) = verdict.violation {
        return Err(Failure::Usage(format!("inadmissible sample size: {v}")));
    }
    let bound = rademacher_bound(&params)?;
    let mut values: Vec<(String, f64)> = vec![("thm3_bound".into(), bound.value)];
    values.extend(bound.breakdown.iter().map(|(k, v)| (k.clone(), *v)));
    if let Some(eps) = args.epsilon {
        let oracle = FatDimOracle::power_law(m.kg, args.dg)?;
        let cor = product_entropy_bounds(eps, &params, &oracle)?;
        values.extend([
            ("entropy_with_sample_size".into(), cor.with_sample_size),
            ("entropy_sample_free".into(), cor.sample_free),
            ("entropy_p".into(), cor.p as f64),
            ("entropy_d_with_sample_size".into(), cor.d_with_sample_size),
            ("entropy_d_sample_free".into(), cor.d_sample_free),
        ]);
    }
    let meta = RunMetadata::new("bound", 0, flag_map(args));
    let text = match args.output.format {
        Format::Json => {
            let mut body = serde_json::Map::new();
            body.insert("regime".into(), bound.regime.as_str().into());
            for (k, v) in &values {
                body.insert(k.clone(), serde_json::json!(v));
            }
            report::json_document(&meta, "bound", &body)
        }
        Format::Csv => {
            let mut rows = vec![vec!["regime".to_string(), bound.regime.as_str().to_string()]];
            rows.extend(values.iter().map(|(k, v)| vec![k.clone(), format_number(*v)]));
            report::table_csv(&meta, &["quantity", "value"], rows)?
        }
    };
    emit(args.output.out.as_deref(), &text)
}

fn parse_range(name: &str, spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Failure::Usage(format!("--{name}: expected lo:hi:mul, got `{spec}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums = parts
        .iter()
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(geometric_range(nums[0], nums[1], nums[2])?)
}

fn axis(name: &str, list: &[f64], range: Option<&str>) -> Result<Vec<f64>, Failure> {
    match range {
        Some(spec) => parse_range(&format!("{name}-range"), spec),
        None if list.is_empty() => Err(Failure::Usage(format!("give --{name} or --{name}-range"))),
        None => Ok(list.to_vec()),
    }
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    let c = match args.c_range.as_deref() {
        Some(spec) => parse_range("c-range", spec)?.into_iter().map(|x| x.round() as u64).collect(),
        None if args.c.is_empty() => return Err(Failure::Usage("give --c or --c-range".into())),
        None => args.c.clone(),
    };
    let grid = SweepGrid {
        c,
        m: axis("m", &args.m, args.m_range.as_deref())?,
        gamma: axis("gamma", &args.gamma, args.gamma_range.as_deref())?,
        d_g: axis("dg", &args.dg, args.dg_range.as_deref())?,
        k_g: args.model.kg,
        m_g: args.model.mg,
        delta: args.model.delta,
    };
    let margins = args
        .class
        .as_deref()
        .map(|p| load_class_file(p).and_then(|c| c.margins()))
        .transpose()?;
    let input = margins.as_ref().map(|margins| EmpiricalInput {
        margins,
        trials: args.trials,
        seed: args.seed,
        exact_cap: args.exact_cap,
        max_steps: 12,
    });
    let rows = sweep(&grid, input.as_ref())?;
    let meta = RunMetadata::new("sweep", args.seed, flag_map(args));
    let text = match args.output.format {
        Format::Csv => report::sweep_csv(&meta, &rows)?,
        Format::Json => report::sweep_json(&meta, &rows),
    };
    emit(args.output.out.as_deref(), &text)
}

fn cmd_simulate(args: &SimulateArgs) -> CmdResult {
    let kind: ClassKind = serde_json::from_value(serde_json::Value::String(args.kind.clone()))
        .map_err(|_| Failure::Usage(format!("unknown class kind `{}`", args.kind)))?;
    let params = GeneratorParams {
        n_points: args.n_points,
        size: args.size,
        m_bound: args.mg,
        step: args.step,
        dim: args.dim,
        c_categories: args.c,
    };
    let file = match generate_class(kind, &params, args.seed)? {
        GeneratedClass::Tabulated(f) => ClassFile::from_tabulated(&f),
        GeneratedClass::Product(g) => {
            let mut r = rng::substream(args.seed, 1);
            let labels = (0..g.n_points()).map(|_| r.gen_range(1..=g.c_categories())).collect();
            ClassFile::from_product(&g, Some(labels))
        }
    };
    emit(args.out.as_deref(), &(file.to_json() + "\n"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Capacity(a) => cmd_capacity(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Simulate(a) => cmd_simulate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("margin-bounds: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("margin-bounds: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
