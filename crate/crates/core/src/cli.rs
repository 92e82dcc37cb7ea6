//! Command-line front end.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::avoid::{avoiders, count_avoiders};
use crate::bounds::{basis_obstruction, multinomial_growth, prop6_check, shortest_bound, Method};
use crate::cache::Cache;
use crate::checks;
use crate::engine::{exact_allowed, exact_basic_forbidden, exact_forbidden, shortest_forbidden_length};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::mapspec::{LoadedMap, MapSpec};
use crate::numeric::{sampled_allowed, SampleConfig};
use crate::perm::{Antichain, PatternSet};
use crate::pwl::{Orientation, PwlMap};

/// Largest exact `n` accepted without `--unsafe`.
pub const DEFAULT_N_MAX: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "patlab", version, about = "Forbidden ordinal patterns of interval maps")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ExactArgs {
    /// Map: tent | sawtooth:N | alt_sawtooth:N | logistic:4 | JSON | path.
    #[arg(long)]
    map: String,
    #[arg(long)]
    n: usize,
    /// Allow n above the default ceiling.
    #[arg(long = "unsafe")]
    allow_large: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact allowed patterns of length n.
    Allowed(ExactArgs),
    /// Exact forbidden patterns of length n.
    Forbidden(ExactArgs),
    /// Exact basic forbidden patterns of length n.
    Basic(ExactArgs),
    /// Length of the shortest forbidden pattern, searching up to --n-max.
    Shortest {
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
        #[arg(long = "unsafe")]
        allow_large: bool,
    },
    /// Upper bound on the shortest forbidden length from the diagonal structure.
    Bound {
        #[arg(long)]
        map: String,
        #[arg(long, default_value = "simple")]
        method: String,
        #[arg(long, default_value = "below")]
        orientation: String,
    },
    /// Permutations avoiding the given consecutive patterns.
    Avoiders {
        #[arg(long)]
        patterns: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Number of permutations avoiding the given consecutive patterns.
    Count {
        #[arg(long)]
        patterns: String,
        #[arg(long)]
        n: usize,
    },
    /// Sampled (approximate) allowed patterns of any catalog map.
    Sample {
        #[arg(long)]
        map: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        grid: u64,
        #[arg(long, default_value_t = 100_000)]
        random: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tie_eps: f64,
    },
    /// Orders m for which the explicit obstruction witness avoids the patterns.
    CheckBasis {
        #[arg(long)]
        patterns: String,
        #[arg(long, default_value_t = 5)]
        m_max: usize,
    },
    /// Counting condition on the lengths of a candidate basis.
    Prop6 {
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<usize>,
        /// Also report (r·ℓ)!/(ℓ!)^r for this r.
        #[arg(long)]
        growth_r: Option<usize>,
    },
    /// Recompute the reference values and report pass/fail per check.
    VerifyPaper,
}

struct Report {
    map: Option<Value>,
    n: Option<usize>,
    exact: bool,
    note: Option<&'static str>,
    result: Value,
    csv: String,
    failed: bool,
}

impl Report {
    fn new(result: Value, csv: String) -> Self {
        Report { map: None, n: None, exact: true, note: None, result, csv, failed: false }
    }
}

fn patterns_csv(set: &PatternSet) -> String {
    let mut s = String::from("pattern\n");
    for p in set {
        s.push_str(&p.to_string());
        s.push('\n');
    }
    s
}

fn value_csv(key: &str, v: &Value) -> String {
    format!("{key}\n{}\n", match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    })
}

fn object_csv(v: &Value) -> String {
    let mut s = String::from("key,value\n");
    if let Value::Object(map) = v {
        for (k, v) in map {
            s.push_str(&format!("{k},{}\n", v.to_string().replace(',', ";")));
        }
    }
    s
}

fn load_exact(spec_text: &str) -> Result<(MapSpec, PwlMap, Option<&'static str>)> {
    let spec = MapSpec::parse(spec_text)?;
    match spec.resolve()? {
        LoadedMap::Exact { map, note } => Ok((spec, map, note)),
        LoadedMap::Numeric(m) => Err(Error::Validation(format!(
            "{} has no exact piecewise-linear form; use `sample` for approximate results",
            m.describe()
        ))),
    }
}

fn check_ceiling(n: usize, allow_large: bool) -> Result<()> {
    if n > DEFAULT_N_MAX && !allow_large {
        return Err(Error::Validation(format!(
            "n = {n} exceeds the default ceiling {DEFAULT_N_MAX}; pass --unsafe to proceed"
        )));
    }
    Ok(())
}

fn exact_set(kind: &'static str, args: &ExactArgs, limits: &mut Limits) -> Result<Report> {
    check_ceiling(args.n, args.allow_large)?;
    if args.allow_large {
        limits.max_forbidden_n = limits.max_forbidden_n.max(args.n);
    }
    let (spec, map, note) = load_exact(&args.map)?;
    let compute = || match kind {
        "allowed" => exact_allowed(&map, args.n, limits),
        "forbidden" => exact_forbidden(&map, args.n, limits),
        _ => exact_basic_forbidden(&map, args.n, limits),
    };
    let set = match Cache::from_env() {
        Some(cache) => cache.get_or_compute(&Cache::key(&spec.to_json(), kind, args.n), compute)?.0,
        None => compute()?,
    };
    let mut r = Report::new(serde_json::to_value(&set).expect("serializable"), patterns_csv(&set));
    r.map = Some(serde_json::to_value(&spec).expect("serializable"));
    r.n = Some(args.n);
    r.note = note;
    Ok(r)
}

fn execute(command: &Command) -> Result<Report> {
    let mut limits = Limits::default();
    match command {
        Command::Allowed(a) => exact_set("allowed", a, &mut limits),
        Command::Forbidden(a) => exact_set("forbidden", a, &mut limits),
        Command::Basic(a) => exact_set("basic", a, &mut limits),
        Command::Shortest { map, n_max, allow_large } => {
            check_ceiling(*n_max, *allow_large)?;
            let (spec, map, note) = load_exact(map)?;
            let len = shortest_forbidden_length(&map, *n_max, &limits)?;
            let v = json!(len);
            let mut r = Report::new(v.clone(), value_csv("shortest_forbidden_length", &v));
            r.map = Some(serde_json::to_value(&spec).expect("serializable"));
            r.n = Some(*n_max);
            r.note = note;
            Ok(r)
        }
        Command::Bound { map, method, orientation } => {
            let method: Method = method.parse()?;
            let orientation: Orientation = orientation.parse()?;
            let (spec, map, note) = load_exact(map)?;
            let report = shortest_bound(&map, method, orientation);
            let v = serde_json::to_value(&report).expect("serializable");
            let mut r = Report::new(v.clone(), object_csv(&v));
            r.map = Some(serde_json::to_value(&spec).expect("serializable"));
            r.note = note;
            Ok(r)
        }
        Command::Avoiders { patterns, n, count_only } => {
            let sigma = Antichain::parse_list(patterns)?;
            let mut r = if *count_only {
                let c = count_avoiders(&sigma, *n, &limits)?;
                Report::new(json!(c), value_csv("count", &json!(c)))
            } else {
                let set = avoiders(&sigma, *n, &limits)?;
                Report::new(serde_json::to_value(&set).expect("serializable"), patterns_csv(&set))
            };
            r.n = Some(*n);
            Ok(r)
        }
        Command::Count { patterns, n } => {
            let sigma = Antichain::parse_list(patterns)?;
            let c = count_avoiders(&sigma, *n, &limits)?;
            let mut r = Report::new(json!(c), value_csv("count", &json!(c)));
            r.n = Some(*n);
            Ok(r)
        }
        Command::Sample { map, n, grid, random, seed, tie_eps } => {
            let spec = MapSpec::parse(map)?;
            let numeric = spec.numeric()?;
            let cfg = SampleConfig { grid_count: *grid, random_count: *random, seed: *seed, tie_epsilon: *tie_eps };
            let set = sampled_allowed(&numeric, *n, &cfg)?;
            let mut r = Report::new(serde_json::to_value(&set).expect("serializable"), patterns_csv(&set));
            r.map = Some(serde_json::to_value(&spec).expect("serializable"));
            r.n = Some(*n);
            r.exact = false;
            r.note = Some("sampled lower bound on the allowed set");
            Ok(r)
        }
        Command::CheckBasis { patterns, m_max } => {
            if *m_max == 0 {
                return Err(Error::BadParameter("--m-max must be at least 1".into()));
            }
            let sigma = Antichain::parse_list(patterns)?;
            let obstructed = basis_obstruction(&sigma, *m_max);
            let all = obstructed.len() == *m_max;
            let verdict = if all {
                format!("obstructed up to m_max = {m_max}")
            } else {
                format!("obstructed for {} of {m_max} orders", obstructed.len())
            };
            let v = json!({ "m_max": m_max, "obstructed": obstructed, "verdict": verdict });
            Ok(Report::new(v.clone(), object_csv(&v)))
        }
        Command::Prop6 { lengths, growth_r } => {
            let check = prop6_check(lengths)?;
            let mut v = serde_json::to_value(&check).expect("serializable");
            if let Some(r) = growth_r {
                let g = multinomial_growth(check.ell.max(1), *r)?;
                v["multinomial_growth"] = json!(g.to_string());
            }
            Ok(Report::new(v.clone(), object_csv(&v)))
        }
        Command::VerifyPaper => {
            let outcomes = checks::run_all(&limits);
            let failed = outcomes.iter().any(|o| !o.passed);
            let mut csv = String::from("criterion,passed,name,detail\n");
            for o in &outcomes {
                csv.push_str(&format!("{},{},{},{}\n", o.id, o.passed, o.name.replace(',', ";"), o.detail.replace(',', ";")));
            }
            let mut r = Report::new(serde_json::to_value(&outcomes).expect("serializable"), csv);
            r.failed = failed;
            Ok(r)
        }
    }
}

fn render(report: &Report, format: Format, elapsed_ms: u128) -> String {
    match format {
        Format::Csv => report.csv.clone(),
        Format::Json => {
            let mut v = json!({
                "map": report.map,
                "n": report.n,
                "exact": report.exact,
                "result": report.result,
                "engine_version": crate::ENGINE_VERSION,
                "elapsed_ms": elapsed_ms as u64,
            });
            if let Some(note) = report.note {
                v["note"] = json!(note);
            }
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit status with the rendered report. Diagnostics go to stderr.
pub fn run_capture<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return (2, format!("error: cannot start worker pool: {e}\n")),
    };
    let start = Instant::now();
    let report = match pool.install(|| execute(&cli.command)) {
        Ok(r) => r,
        Err(e) => return (e.exit_code(), format!("error: {e}\n")),
    };
    let text = render(&report, cli.format, start.elapsed().as_millis());
    let code = if report.failed { 1 } else { 0 };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => (code, String::new()),
            Err(e) => (1, format!("error: writing {}: {e}\n", path.display())),
        },
        None => (code, text),
    }
}

/// Entry point for the binary.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (code, text) = run_capture(argv);
    if code == 0 || code == 1 && !text.starts_with("error") {
        let _ = std::io::stdout().write_all(text.as_bytes());
    } else {
        let _ = std::io::stderr().write_all(text.as_bytes());
    }
    code
}
