mod generators;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use generators::{all_names, build, GenArgs};
use orient::algorithms::{AlgorithmRegistry, AlgorithmSpec};
use orient::checks::{run_suite, Suite};
use orient::harness::{evaluate, write_csv, ReportRow};
use orient::model::{parse_instance, reduce, serialize_instance};
use orient::Instance;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_ACCEPTANCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "orient",
    version,
    about = "Two-stage query experiments on uncertain intervals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as JSON.
    Generate {
        /// Construction or random family name.
        name: String,
        #[command(flatten)]
        params: GenArgs,
        /// Seed for random families.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate algorithms on instances and write one CSV row per pair.
    Run(RunArgs),
    /// Run an acceptance suite.
    Check {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List generator, algorithm and solver names.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Instance JSON file (repeatable).
    #[arg(long = "instance", short = 'i')]
    instances: Vec<PathBuf>,
    /// Generator as `name` or `name:key=value,...` (repeatable).
    #[arg(long = "gen", short = 'g')]
    gens: Vec<String>,
    /// Algorithm names, comma separated or repeated.
    #[arg(long = "algo", short = 'a', value_delimiter = ',', required = true)]
    algorithms: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Declared approximation factor of the vertex-cover solver.
    #[arg(long)]
    alpha: Option<f64>,
    /// Threshold: a number, or `auto` for the optimum given alpha.
    #[arg(long, default_value = "auto")]
    d: String,
    /// Accuracy of sampled mandatory probabilities.
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// Failure probability of sampled mandatory probabilities.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Vertex-cover solver.
    #[arg(long, default_value = "exact")]
    vc: String,
    /// Stage-1 ids for `fixed-cover`, comma separated.
    #[arg(long, value_delimiter = ',')]
    cover: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write wall_ms as 0 so output bytes are reproducible.
    #[arg(long)]
    zero_wall: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Generate {
            name,
            params,
            seed,
            output,
        } => {
            let inst = build(&name, &params, seed)?;
            emit(output.as_deref(), serialize_instance(&inst).as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Run(args) => run(args),
        Command::Check {
            suite,
            seed,
            threads,
        } => {
            set_threads(threads)?;
            let results = run_suite(Suite::from_name(&suite)?, seed, |r| println!("{r}"));
            let passed = results.iter().filter(|r| r.passed).count();
            println!("{passed} of {} criteria passed", results.len());
            Ok(if passed == results.len() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_ACCEPTANCE)
            })
        }
        Command::List => {
            let registry = AlgorithmRegistry::builtin();
            println!("generators: {}", all_names().join(", "));
            println!("algorithms: {}", registry.names().join(", "));
            println!("solvers: {}", registry.solvers().names().join(", "));
            println!("suites: {}", Suite::NAMES.join(", "));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    if let Some(t) = threads {
        if t == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()?;
    }
    Ok(())
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => Ok(io::stdout().lock().write_all(bytes)?),
    }
}

fn load(args: &RunArgs) -> Result<Vec<(String, Instance)>> {
    let mut out = Vec::new();
    for path in &args.instances {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let inst = parse_instance(&text).with_context(|| path.display().to_string())?;
        let id = path.file_stem().map_or_else(
            || path.display().to_string(),
            |s| s.to_string_lossy().into(),
        );
        out.push((id, inst));
    }
    for spec in &args.gens {
        let (name, params) = spec.split_once(':').unwrap_or((spec.as_str(), ""));
        let inst = build(name, &GenArgs::parse_inline(params)?, args.seed)
            .with_context(|| format!("generator {spec}"))?;
        out.push((spec.clone(), inst));
    }
    if out.is_empty() {
        bail!("no instances; pass --instance or --gen");
    }
    Ok(out
        .into_iter()
        .map(|(id, inst)| {
            let r = reduce(&inst);
            if !r.forced.is_empty() {
                eprintln!(
                    "{id}: always-mandatory vertices removed: {}",
                    r.forced.join(", ")
                );
            }
            (id, r.instance)
        })
        .collect())
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let Format::Csv = args.format;
    if args.samples == 0 {
        bail!("--samples must be at least 1");
    }
    let d = match args.d.as_str() {
        "auto" => None,
        s => Some(s.parse::<f64>().with_context(|| format!("--d {s}"))?),
    };
    set_threads(args.threads)?;
    let registry = AlgorithmRegistry::builtin();
    registry.solvers().get(&args.vc)?;
    let spec = AlgorithmSpec {
        alpha: args.alpha,
        d,
        epsilon: args.eps,
        delta: args.delta,
        vc: args.vc.clone(),
        cover: args.cover.clone(),
    };
    let mut rows = Vec::new();
    for (id, inst) in load(&args)? {
        for name in &args.algorithms {
            let report = registry
                .create(name, &spec)
                .and_then(|alg| evaluate(&inst, &id, alg.as_ref(), args.samples, args.seed));
            rows.push(match report {
                Ok(r) => ReportRow::Ok(r),
                Err(e) => ReportRow::Failed {
                    instance_id: id.clone(),
                    algorithm: name.clone(),
                    n_samples: args.samples,
                    seed: args.seed,
                    message: e.to_string(),
                },
            });
        }
    }
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows, args.zero_wall)?;
    emit(args.output.as_deref(), &buf)?;
    Ok(ExitCode::SUCCESS)
}
