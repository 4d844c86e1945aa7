//! The `rado` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
//! 3 a result left indeterminate by a search budget, 4 non-rectangular rows,
//! 5 an empty matrix.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Number, Value};

use crate::classify::{self, decompose, max_density, max_one_density, DensityReport};
use crate::error::Error;
use crate::experiments::{
    estimate_probability, format_rational, parse_rational, threshold_probability, threshold_sweep,
    write_csv, CurveRow, ExponentSource, Property, SweepConfig, TrialConfig,
};
use crate::extremal::{extremal_number, supersaturation_min, Budget, SupersatMode, DEFAULT_SUPERSAT_CAP};
use crate::io::parse_system;
use crate::partition::{realized_patterns, realized_patterns_in};
use crate::solutions::{
    degree_upper_bound, enumerate_solutions, max_ell_degree, support_profile, GroundSet,
    SolutionClass,
};
use crate::system::{ColumnSet, LinearSystem};

type DensityFn = fn(&LinearSystem) -> crate::Result<DensityReport>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

/// Environment variable holding the number of worker threads.
pub const WORKERS_ENV: &str = "RADO_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "rado", version, about = "Integer linear systems: classification, counting, extremal numbers and random-set experiments")]
struct Cli {
    /// Print a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Abort exact searches after this many nodes
    #[arg(long)]
    node_limit: Option<u64>,
    /// Abort exact searches after this many seconds
    #[arg(long)]
    time_limit: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            nodes: self.node_limit,
            time: self.time_limit.map(Duration::from_secs_f64),
        }
    }

    fn echo(&self) -> Value {
        json!({ "node_limit": self.node_limit, "time_limit": self.time_limit })
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum DensityChoice {
    M1,
    M,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Irredundancy, positivity, abundance, regularity and maximum densities
    Classify { file: PathBuf },
    /// m1(A) and m(A) with the maximising column sets
    Density {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        kind: DensityChoice,
    },
    /// The subsystem A[Q] for a set of 1-based columns
    Subsystem {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        cols: Vec<usize>,
    },
    /// Repetition patterns of non-trivial solutions
    Patterns {
        file: PathBuf,
        /// Only patterns realised with entries in [n]
        #[arg(long)]
        n: Option<usize>,
    },
    /// Count solutions with entries in [n]
    Count {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all")]
        class: SolutionClass,
    },
    /// List solutions with entries in [n]
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all")]
        class: SolutionClass,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Maximum l-degrees of the proper-solution hypergraph on [n]
    Degrees {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        /// Defaults to every l from 1 to the number of columns
        #[arg(long)]
        ell: Option<usize>,
    },
    /// ex(n, A) for one or more n
    Extremal {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Fewest proper solutions in a subset of [n] of density delta
    Supersat {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: String,
        /// Sample this many subsets instead of trying all of them
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SUPERSAT_CAP)]
        cap: u64,
    },
    /// Estimate the probability of a property of [n]_p
    Simulate {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        /// Probability; alternatively give --C and --exponent
        #[arg(long)]
        p: Option<f64>,
        #[arg(long = "C")]
        c: Option<String>,
        #[arg(long)]
        exponent: Option<ExponentSource>,
        #[arg(long, default_value = "contains")]
        property: Property,
        #[arg(long, default_value = "proper")]
        class: SolutionClass,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Estimates over a grid of n and C with p = C n^(-1/exponent)
    Sweep {
        file: PathBuf,
        #[arg(long, default_value = "contains")]
        property: Property,
        #[arg(long, default_value = "m")]
        exponent: ExponentSource,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long = "C", value_delimiter = ',', required = true)]
        c: Vec<String>,
        #[arg(long, default_value = "proper")]
        class: SolutionClass,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Also write the rows as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Density { .. } => "density",
            Command::Subsystem { .. } => "subsystem",
            Command::Patterns { .. } => "patterns",
            Command::Count { .. } => "count",
            Command::Enumerate { .. } => "enumerate",
            Command::Degrees { .. } => "degrees",
            Command::Extremal { .. } => "extremal",
            Command::Supersat { .. } => "supersat",
            Command::Simulate { .. } => "simulate",
            Command::Sweep { .. } => "sweep",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Classify { file }
            | Command::Density { file, .. }
            | Command::Subsystem { file, .. }
            | Command::Patterns { file, .. }
            | Command::Count { file, .. }
            | Command::Enumerate { file, .. }
            | Command::Degrees { file, .. }
            | Command::Extremal { file, .. }
            | Command::Supersat { file, .. }
            | Command::Simulate { file, .. }
            | Command::Sweep { file, .. } => file,
        }
    }
}

/// Result of one command before rendering.
struct Report {
    config: Value,
    result: Value,
    text: String,
    indeterminate: bool,
}

/// Runs the tool on `args` (including the program name) and returns the exit
/// code. Output goes to `out`, diagnostics to `err`.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let system = match parse_system(cli.command.file()) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let report = match run(&cli.command, &system) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return error_code(&e);
        }
    };
    if cli.json {
        let doc = json!({
            "command": cli.command.name(),
            "system": {
                "name": system.name(),
                "rows": system.matrix().row_vecs().iter().map(|r| r.iter().map(int).collect::<Vec<_>>()).collect::<Vec<_>>(),
            },
            "config": report.config,
            "result": report.result,
            "version": env!("CARGO_PKG_VERSION"),
        });
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serialisable"));
    } else {
        let _ = write!(out, "{}", report.text);
    }
    if report.indeterminate {
        EXIT_INDETERMINATE
    } else {
        EXIT_OK
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::IndexOutOfRange { .. } | Error::EmptySubsystem(_) => EXIT_USAGE,
        _ => EXIT_INPUT,
    }
}

/// Sizes the global thread pool from [`WORKERS_ENV`] if it is set.
pub fn configure_workers() -> Result<(), String> {
    let Ok(value) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let workers: usize = value
        .parse()
        .ok()
        .filter(|&w| w > 0)
        .ok_or_else(|| format!("{WORKERS_ENV} must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| e.to_string())
}

fn int(v: &BigInt) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integer literal"))
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn rational(q: &BigRational) -> Value {
    Value::String(format_rational(q))
}

fn vector(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn density_json(d: &DensityReport) -> Value {
    json!({ "value": rational(&d.value), "witness": d.witness.one_based() })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn label(a: &LinearSystem) -> String {
    match a.name() {
        Some(name) => format!("{name} {}", a.matrix()),
        None => a.matrix().to_string(),
    }
}

fn run(command: &Command, a: &LinearSystem) -> crate::Result<Report> {
    let mut text = String::new();
    let mut indeterminate = false;
    let (config, result) = match command {
        Command::Classify { .. } => {
            let r = classify::classify(a)?;
            let failing = match r.abundance {
                classify::Abundance::Fails(i, j) => Some([i + 1, j + 1]),
                _ => None,
            };
            writeln!(text, "system               {}", label(a)).unwrap();
            writeln!(text, "irredundant          {}{}", yes(r.irredundant), r.proper_witness.as_ref().map(|x| format!("  proper solution {}", vector(x))).unwrap_or_default()).unwrap();
            writeln!(text, "positive             {}{}", yes(r.positive), r.positive_witness.as_ref().map(|x| format!("  solution {}", vector(x))).unwrap_or_default()).unwrap();
            writeln!(text, "abundant             {}{}", yes(r.abundant()), failing.map(|[i, j]| format!("  deleting columns {i},{j} drops the rank")).unwrap_or_default()).unwrap();
            let blocks = r.column_condition.as_ref().map(|b| b.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
            writeln!(text, "column condition     {}{}", yes(blocks.is_some()), blocks.as_ref().map(|b| format!("  blocks {b}")).unwrap_or_default()).unwrap();
            writeln!(text, "partition regular    {}", yes(r.partition_regular)).unwrap();
            writeln!(text, "invariant            {}", yes(r.invariant)).unwrap();
            writeln!(text, "density regular      {}", yes(r.density_regular)).unwrap();
            for (name, d) in [("m1", &r.m1), ("m ", &r.m)] {
                match d {
                    Some(d) => writeln!(text, "{name}                   {}  at Q = {}", format_rational(&d.value), d.witness).unwrap(),
                    None => writeln!(text, "{name}                   undefined").unwrap(),
                }
            }
            (
                json!({}),
                json!({
                    "irredundant": r.irredundant,
                    "positive": r.positive,
                    "abundant": r.abundant(),
                    "partitionRegular": r.partition_regular,
                    "densityRegular": r.density_regular,
                    "invariant": r.invariant,
                    "m1": r.m1.as_ref().map(density_json),
                    "m": r.m.as_ref().map(density_json),
                    "witnesses": {
                        "properSolution": r.proper_witness.as_deref().map(ints),
                        "positiveSolution": r.positive_witness.as_deref().map(ints),
                        "failingColumnPair": failing,
                        "columnBlocks": r.column_condition.as_ref().map(|b| b.iter().map(ColumnSet::one_based).collect::<Vec<_>>()),
                    },
                }),
            )
        }
        Command::Density { kind, .. } => {
            let mut result = serde_json::Map::new();
            let wanted: &[(&str, DensityFn)] = match kind {
                DensityChoice::M1 => &[("m1", max_one_density)],
                DensityChoice::M => &[("m", max_density)],
                DensityChoice::Both => &[("m1", max_one_density), ("m", max_density)],
            };
            for (name, f) in wanted {
                let d = f(a)?;
                writeln!(text, "{name:<3}{}  at Q = {}", format_rational(&d.value), d.witness).unwrap();
                result.insert(name.to_string(), density_json(&d));
            }
            (json!({ "kind": format!("{kind:?}").to_lowercase() }), Value::Object(result))
        }
        Command::Subsystem { cols, .. } => {
            let q = ColumnSet::from_one_based(cols, a.cols())?;
            let d = decompose(a, &q)?;
            let sub = &d.subsystem;
            writeln!(text, "A[{q}] = {}  (rank {} = r_Q)", sub.matrix(), sub.rank()).unwrap();
            writeln!(text, "retained rows {}", d.retained).unwrap();
            (
                json!({ "cols": q.one_based() }),
                json!({
                    "rows": sub.matrix().row_vecs().iter().map(|r| ints(r)).collect::<Vec<_>>(),
                    "rank": sub.rank(),
                    "retained": d.retained.row_vecs().iter().map(|r| ints(r)).collect::<Vec<_>>(),
                }),
            )
        }
        Command::Patterns { n: None, .. } => {
            let patterns = realized_patterns(a)?;
            for p in &patterns {
                writeln!(text, "{}  witness {}", p.partition, vector(&p.witness)).unwrap();
            }
            (
                json!({}),
                Value::Array(
                    patterns
                        .iter()
                        .map(|p| json!({ "partition": p.partition.to_string(), "witness": ints(&p.witness) }))
                        .collect(),
                ),
            )
        }
        Command::Patterns { n: Some(n), .. } => {
            let patterns = realized_patterns_in(a, &GroundSet::range(*n))?;
            for p in &patterns {
                writeln!(text, "{p}").unwrap();
            }
            (json!({ "n": n }), Value::Array(patterns.iter().map(|p| Value::String(p.to_string())).collect()))
        }
        Command::Count { n, class, .. } => {
            let profile = support_profile(a, &GroundSet::range(*n), *class, None)?;
            writeln!(text, "{}", profile.total()).unwrap();
            (
                json!({ "n": n, "class": class.to_string() }),
                json!({ "count": profile.total(), "bySupportSize": profile.by_support }),
            )
        }
        Command::Enumerate { n, class, limit, .. } => {
            let t = GroundSet::range(*n);
            let sols: Vec<Vec<i64>> =
                enumerate_solutions(a, &t, *class, None)?.take(limit.unwrap_or(usize::MAX)).collect();
            for x in &sols {
                let parts: Vec<String> = x.iter().map(ToString::to_string).collect();
                writeln!(text, "{}", parts.join(" ")).unwrap();
            }
            (json!({ "n": n, "class": class.to_string(), "limit": limit }), json!(sols))
        }
        Command::Degrees { n, ell, .. } => {
            let ells: Vec<usize> = match ell {
                Some(l) => vec![*l],
                None => (1..=a.cols()).collect(),
            };
            let mut rows = Vec::new();
            writeln!(text, "ell  max degree  attained at  upper bound").unwrap();
            for l in ells {
                let d = max_ell_degree(a, *n, l)?;
                let bound = degree_upper_bound(a, *n, l)?;
                writeln!(text, "{l:<4} {:<11} {:<12} {bound}", d.max_degree, format!("{:?}", d.attaining)).unwrap();
                rows.push(json!({ "ell": l, "maxDegree": d.max_degree, "attaining": d.attaining, "upperBound": bound.to_string() }));
            }
            (json!({ "n": n, "ell": ell }), Value::Array(rows))
        }
        Command::Extremal { n, budget, .. } => {
            let mut ns = n.clone();
            ns.sort_unstable();
            ns.dedup();
            let mut rows = Vec::new();
            writeln!(text, "n     ex(n)  ex(n)/n  exact  witness").unwrap();
            for &n in &ns {
                let r = extremal_number(a, n, budget.budget())?;
                indeterminate |= !r.exact;
                let ratio = BigRational::new(r.value.into(), n.into());
                writeln!(text, "{n:<5} {:<6} {:<8} {:<6} {:?}", r.value, format_rational(&ratio), yes(r.exact), r.witness).unwrap();
                rows.push(json!({
                    "n": n, "value": r.value, "ratio": rational(&ratio), "exact": r.exact,
                    "upperBound": r.upper_bound, "witness": r.witness.elements(),
                }));
            }
            (json!({ "n": ns, "budget": budget.echo() }), Value::Array(rows))
        }
        Command::Supersat { n, delta, samples, seed, cap, .. } => {
            let delta_q = parse_rational(delta)?;
            let mode = match (samples, seed) {
                (Some(samples), Some(seed)) => SupersatMode::Sampled { samples: *samples, seed: *seed },
                (Some(_), None) => return Err(Error::InvalidArgument("--samples needs --seed".into())),
                (None, _) => SupersatMode::Exact { cap: *cap },
            };
            let r = supersaturation_min(a, *n, &delta_q, mode)?;
            writeln!(text, "subsets of size {} in [{}]: at least {} of {} proper solutions (zeta {}), {}", r.size, r.n, r.min_count, r.total_count, format_rational(&r.zeta_empirical), if r.exact { "exact" } else { "sampled upper bound" }).unwrap();
            writeln!(text, "minimiser {:?}", r.witness).unwrap();
            (
                json!({ "n": n, "delta": rational(&delta_q), "samples": samples, "seed": seed, "cap": cap }),
                json!({
                    "size": r.size, "minCount": r.min_count, "totalCount": r.total_count,
                    "zetaEmpirical": rational(&r.zeta_empirical), "exact": r.exact, "witness": r.witness.elements(),
                }),
            )
        }
        Command::Simulate { n, p, c, exponent, property, class, trials, seed, budget, .. } => {
            let (p, c_q) = match (p, c, exponent) {
                (Some(p), None, None) => (*p, None),
                (None, Some(c), Some(e)) => {
                    let c_q = parse_rational(c)?;
                    (threshold_probability(&c_q, *n, &e.value(a)?), Some(c_q))
                }
                _ => return Err(Error::InvalidArgument("give either --p or both --C and --exponent".into())),
            };
            let config = TrialConfig { n: *n, p, trials: *trials, seed: *seed, class: *class, property: property.clone(), budget: budget.budget() };
            let mut row = estimate_probability(a, &config)?;
            row.c = c_q;
            indeterminate = row.indeterminate > 0;
            render_rows(&mut text, std::slice::from_ref(&row));
            (
                json!({
                    "n": n, "p": p, "C": c.clone(), "exponent": exponent.map(|e| e.to_string()),
                    "property": property.to_string(), "class": class.to_string(),
                    "trials": trials, "seed": seed, "budget": budget.echo(),
                }),
                row_json(&row),
            )
        }
        Command::Sweep { property, exponent, n, c, class, trials, seed, csv, budget, .. } => {
            let cs = c.iter().map(|s| parse_rational(s)).collect::<crate::Result<Vec<_>>>()?;
            let config = SweepConfig {
                ns: n.clone(),
                cs,
                exponent: *exponent,
                property: property.clone(),
                class: *class,
                trials: *trials,
                seed: *seed,
                budget: budget.budget(),
            };
            let curve = threshold_sweep(a, &config)?;
            indeterminate = curve.rows.iter().any(|r| r.indeterminate > 0);
            writeln!(text, "p = C n^(-1/{}), {} = {}", exponent, exponent, format_rational(&curve.exponent)).unwrap();
            if let Some(rc) = curve.reference_c {
                writeln!(text, "reference c = ((1 - eps)/4)^(1/(m-1)) = {rc:.6}").unwrap();
            }
            render_rows(&mut text, &curve.rows);
            if let Some(path) = csv {
                let file = std::fs::File::create(path)
                    .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
                write_csv(file, a, property, *class, *seed, &curve.rows)?;
            }
            (
                json!({
                    "property": property.to_string(), "exponent": exponent.to_string(), "n": n, "C": c,
                    "class": class.to_string(), "trials": trials, "seed": seed,
                    "csv": csv.as_ref().map(|p| p.display().to_string()), "budget": budget.echo(),
                }),
                json!({
                    "exponentValue": rational(&curve.exponent),
                    "referenceC": curve.reference_c,
                    "rows": curve.rows.iter().map(row_json).collect::<Vec<_>>(),
                }),
            )
        }
    };
    Ok(Report { config, result, text, indeterminate })
}

fn render_rows(text: &mut String, rows: &[CurveRow]) {
    writeln!(text, "n       C       p          trials  successes  indet  estimate  95% interval").unwrap();
    for r in rows {
        writeln!(
            text,
            "{:<7} {:<7} {:<10.4e} {:<7} {:<10} {:<6} {:<9.4} [{:.4}, {:.4}]",
            r.n,
            r.c.as_ref().map(format_rational).unwrap_or_else(|| "-".into()),
            r.p,
            r.trials,
            r.successes,
            r.indeterminate,
            r.estimate,
            r.ci_low,
            r.ci_high
        )
        .unwrap();
    }
}

fn row_json(r: &CurveRow) -> Value {
    json!({
        "n": r.n, "C": r.c.as_ref().map(format_rational), "p": r.p, "trials": r.trials,
        "successes": r.successes, "indeterminate": r.indeterminate, "estimate": r.estimate,
        "ciLow": r.ci_low, "ciHigh": r.ci_high,
    })
}
