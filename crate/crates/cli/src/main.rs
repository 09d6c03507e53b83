//! `hodd`: command-line front end for higher-order derivative analysis.

mod emit;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hodd_core::classify::{
    analyze_with, check_isolated_with, condition_table_with, least_isolated_order_with, CellStatus, IsolationMode,
    LeastIsolated, LeastStatus,
};
use hodd_core::deriv::sampling::sphere_directions;
use hodd_core::deriv::{hadamard_zero, studniarski_deriv, LiminfSchedule};
use hodd_core::funcspec::{corpus, corpus_lookup, parse_function, CorpusEntry, FunctionSpec};
use hodd_core::invex::check_invex_order;
use hodd_core::probe::Probe;
use hodd_core::subdiff::{TriState, Verdict};
use hodd_core::Error;
use serde::Serialize;

use emit::{condition_text, emit_report, sweep_csv, to_json, Format, SweepRow};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;

#[derive(Parser, Debug)]
#[command(name = "hodd", version, about = "Higher-order lower directional derivatives and optimality checks")]
struct Cli {
    /// Seed for all direction sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (falls back to HODD_THREADS, then to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Unit directions sampled for universally quantified checks.
    #[arg(long, global = true, default_value_t = 16)]
    sphere_samples: usize,
    /// Liminf schedule as a JSON file.
    #[arg(long, global = true)]
    schedule: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Target {
    /// `corpus:NAME`, `expr:SOURCE` or `@FILE` (a file holding an expression).
    #[arg(long)]
    func: String,
    /// Dimension; defaults to the length of the point.
    #[arg(long)]
    dim: Option<usize>,
    /// Comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
    point: Coords,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full point report.
    Analyze {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        max_order: usize,
        /// Also write the report here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Hadamard and Studniarski values over sampled unit directions.
    Sweep {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        directions: usize,
        /// Also write the CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Dini / necessary / sufficient / Ginchev condition table.
    Compare {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Isolation verdicts and least isolation order.
    Classify {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Grid scan for invexity of a given order.
    Invex {
        #[arg(long)]
        func: String,
        #[arg(long)]
        order: usize,
        /// `lo1,hi1,lo2,hi2,...`
        #[arg(long = "box", allow_hyphen_values = true, value_parser = parse_list)]
        bounds: Coords,
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Built-in test functions.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    /// One `name<TAB>dim<TAB>provenance` line per entry.
    List,
}

/// A comma-separated list of finite numbers.
#[derive(Debug, Clone, PartialEq)]
struct Coords(Vec<f64>);

impl std::ops::Deref for Coords {
    type Target = Vec<f64>;
    fn deref(&self) -> &Vec<f64> {
        &self.0
    }
}

fn parse_list(s: &str) -> std::result::Result<Coords, String> {
    s.split(',')
        .map(|p| {
            let v: f64 = p.trim().parse().map_err(|_| format!("not a number: {p:?}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("coordinate must be finite: {p:?}"))
            }
        })
        .collect::<std::result::Result<_, _>>()
        .map(Coords)
}

/// Exit status carried through `anyhow` for errors that are not plain failures.
#[derive(Debug)]
struct Exit(u8);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit {}", self.0)
    }
}

impl std::error::Error for Exit {}

fn load_function(func: &str, dim: Option<usize>, point_len: Option<usize>) -> Result<CorpusEntry> {
    let expr = |src: &str, name: &str| -> Result<CorpusEntry> {
        let d = dim.or(point_len).context("--dim is required for expressions")?;
        let spec = parse_function(src.trim(), d)?;
        Ok(CorpusEntry { name: name.to_string(), spec, provenance: "user expression".into(), checkpoints: Vec::new() })
    };
    let entry = if let Some(name) = func.strip_prefix("corpus:") {
        corpus_lookup(name)?
    } else if let Some(src) = func.strip_prefix("expr:") {
        expr(src, "expr")?
    } else if let Some(path) = func.strip_prefix('@') {
        let src = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        expr(&src, path)?
    } else {
        return Err(anyhow::Error::new(Exit(EXIT_USAGE))
            .context(format!("--func must start with corpus:, expr: or @, got {func:?}")));
    };
    if let Some(d) = dim {
        if d != entry.spec.dim() {
            return Err(Error::DimensionMismatch { expected: entry.spec.dim(), got: d }.into());
        }
    }
    Ok(entry)
}

fn load_target(t: &Target) -> Result<FunctionSpec> {
    let e = load_function(&t.func, t.dim, Some(t.point.len()))?;
    e.spec.check_point(&t.point)?;
    Ok(e.spec)
}

fn load_schedule(path: Option<&Path>, seed: u64) -> Result<LiminfSchedule> {
    let sched = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing schedule {}", p.display()))?
        }
        None => LiminfSchedule::default(),
    };
    let sched = sched.with_seed(seed);
    sched.validate()?;
    Ok(sched)
}

fn init_threads(flag: Option<usize>) -> Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("HODD_THREADS") {
            Ok(v) => Some(v.trim().parse().with_context(|| format!("HODD_THREADS={v:?} is not a count"))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n.filter(|&n| n > 0) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

/// Prints `text` and optionally mirrors it to a file.
fn output(text: &str, path: Option<&Path>) -> Result<()> {
    print!("{text}");
    if let Some(p) = path {
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn status(inconclusive: bool) -> u8 {
    if inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    point: Vec<f64>,
    seed: u64,
    sphere_samples: usize,
    max_order: usize,
    isolated: BTreeMap<usize, TriState>,
    isolated_critical_only: BTreeMap<usize, TriState>,
    least_isolated_order: LeastIsolated,
}

#[derive(Serialize)]
struct CompareReport<'a> {
    point: &'a [f64],
    seed: u64,
    sphere_samples: usize,
    table: &'a hodd_core::classify::ConditionTable,
}

fn run(cli: Cli) -> Result<u8> {
    init_threads(cli.threads)?;
    let sched = load_schedule(cli.schedule.as_deref(), cli.seed)?;
    let samples = cli.sphere_samples;
    match &cli.command {
        Command::Analyze { target, max_order, json, format } => {
            let f = load_target(target)?;
            let probe = Probe::new(&f, &target.point, *max_order, &sched, samples)?;
            let report = analyze_with(&probe, samples)?;
            let bytes = emit_report(&report, *format)?;
            output(std::str::from_utf8(&bytes)?, json.as_deref())?;
            Ok(status(report.verdicts.any_inconclusive()))
        }
        Command::Sweep { target, order, directions, csv } => {
            let f = load_target(target)?;
            let rows = sphere_directions(f.dim(), *directions, sched.seed)
                .into_iter()
                .take(*directions)
                .map(|u| {
                    let h = hadamard_zero(&f, &target.point, *order, &u, &sched)?;
                    let s = studniarski_deriv(&f, &target.point, *order, &u, &sched)?;
                    Ok(SweepRow {
                        direction: u,
                        hadamard: h.value,
                        studniarski: s.value,
                        sign: format!("{:?}", h.sign).to_lowercase(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            output(&sweep_csv(f.dim(), &rows)?, csv.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Compare { target, max_order, json } => {
            let f = load_target(target)?;
            let probe = Probe::new(&f, &target.point, *max_order, &sched, samples)?;
            let table = condition_table_with(&probe, *max_order)?;
            let report =
                CompareReport { point: &target.point, seed: sched.seed, sphere_samples: samples, table: &table };
            let json_text = to_json(&report)?;
            println!("{}", condition_text(&table));
            output(&json_text, json.as_deref())?;
            let unsure = table.rows.values().flat_map(|r| r.values()).any(|c| c.status == CellStatus::Inconclusive);
            Ok(status(unsure))
        }
        Command::Classify { target, max_order, json } => {
            let f = load_target(target)?;
            let probe = Probe::new(&f, &target.point, *max_order, &sched, samples)?;
            let mut isolated = BTreeMap::new();
            let mut critical = BTreeMap::new();
            for n in 1..=*max_order {
                isolated.insert(n, check_isolated_with(&probe, n, IsolationMode::FullSphere)?);
                critical.insert(n, check_isolated_with(&probe, n, IsolationMode::critical(n))?);
            }
            let least = least_isolated_order_with(&probe, *max_order)?;
            let unsure = isolated.values().chain(critical.values()).any(|t| t.verdict == Verdict::Inconclusive)
                || least.status == LeastStatus::Inconclusive;
            let report = ClassifyReport {
                point: target.point.to_vec(),
                seed: sched.seed,
                sphere_samples: samples,
                max_order: *max_order,
                isolated,
                isolated_critical_only: critical,
                least_isolated_order: least,
            };
            output(&to_json(&report)?, json.as_deref())?;
            Ok(status(unsure))
        }
        Command::Invex { func, order, bounds, grid, json } => {
            if bounds.len() % 2 != 0 {
                return Err(anyhow::Error::new(Exit(EXIT_USAGE)).context("--box needs lo,hi pairs"));
            }
            let pairs: Vec<(f64, f64)> = bounds.chunks(2).map(|c| (c[0], c[1])).collect();
            let entry = load_function(func, None, Some(pairs.len()))?;
            let report = check_invex_order(&entry, *order, &pairs, *grid, &sched, samples)?;
            output(&to_json(&report)?, json.as_deref())?;
            Ok(status(report.verdict.verdict == Verdict::Inconclusive))
        }
        Command::Corpus { action: CorpusAction::List } => {
            let mut text = String::new();
            for e in corpus() {
                text.push_str(&format!("{}\t{}\t{}\n", e.name, e.spec.dim(), e.provenance));
            }
            output(&text, None)?;
            Ok(EXIT_OK)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(Exit(code)) = err.downcast_ref::<Exit>() {
        return *code;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Syntax { .. } | Error::UnknownIdentifier { .. } | Error::VariableOutOfRange { .. }) => EXIT_PARSE,
        _ => EXIT_ERROR,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
