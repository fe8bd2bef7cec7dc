//! `mcerm`: dimensions, splitting plans, class generators, properness
//! numbers and the seeded experiments, from the command line.
//!
//! Exit status: 0 on success, 2 on an invalid configuration, 3 when a search
//! exceeds its cap, 1 on any other error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use multiclass_erm::class_file::{format_class, read_class, read_function};
use multiclass_erm::constructions::{
    cantor_explicit, properness_witness, two_block_witness, two_constant_class, DEFAULT_EXPLICIT_CAP,
};
use multiclass_erm::dimensions::{ds_dimension, graph_dimension, vc_dimension, DimensionCaps};
use multiclass_erm::experiments::{
    emit_coupon_report, emit_reports, run_coupon, run_lower_bound, run_upper_bound, ExperimentConfig,
    ExperimentResult,
};
use multiclass_erm::properness::{properness_exact, properness_greedy};
use multiclass_erm::rng::RandomSource;
use multiclass_erm::splitting::Splitter;
use multiclass_erm::{Error, Result};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "mcerm", version, about = "Multiclass learning with majorities of ERM learners")]
struct Cli {
    /// Master seed; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials per grid point; overrides the configuration.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output directory for reports (or file for make-class).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Experiment configuration in the flat key = value format.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Vc,
    Graph,
    Ds,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    None,
    Hanneke,
    Bagging,
    Three,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassFamily {
    Cantor,
    Witness,
    TwoConst,
}

#[derive(Subcommand)]
enum Command {
    /// Brute-force dimensions of an explicit class file.
    Dims {
        #[arg(long)]
        class: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
        #[arg(long, default_value_t = DimensionCaps::default().max_points)]
        max_points: u32,
        #[arg(long, default_value_t = DimensionCaps::default().max_subset)]
        max_subset: usize,
    },
    /// Print the index plan of a splitting scheme as JSON.
    Split {
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
    },
    /// Write an explicit class file.
    MakeClass {
        #[arg(long, value_enum)]
        family: ClassFamily,
        /// Cantor set budget, or the witness block size (a perfect square).
        #[arg(long)]
        d: Option<u32>,
        /// Domain size (Cantor and two-const).
        #[arg(long)]
        n: Option<u32>,
        /// Comma-separated witness block sizes, e.g. `4,9`; overrides `--d`.
        #[arg(long, value_delimiter = ',')]
        blocks: Option<Vec<u32>>,
    },
    /// Properness number of a function with respect to an explicit class.
    Properness {
        #[arg(long)]
        class: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// Coupon-collector draws on the Cantor universe.
    Coupon,
    /// Lower-bound sweep: the adversarial ERM alone and under each splitter.
    LowerBound,
    /// Upper-bound sweep on an enumerated class with a certified Graph dimension.
    UpperBound,
}

const LOWER_BOUND_DEFAULT: &str = "\
family = cantor
d = 10
epsilon = 0.01
learner = bad
splitters = none,hanneke,bagging,three
m = 31,62,125,250,278,400,800
trials = 200
seed = 1
";

const UPPER_BOUND_DEFAULT: &str = "\
family = cantor
d = 3
domain_size = 15
explicit = true
marginal = geometric:0.5
learner = bad
splitters = hanneke,three
m = 48,96,192,384
trials = 300
seed = 1
";

const COUPON_DEFAULT: &str = "\
family = cantor
d = 10
epsilon = 0.01
m = 1
trials = 10000
seed = 1
";

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidConfig(_) => 2,
        Error::OverCap { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            if !v.is_null() {
                println!("{}", serde_json::to_string_pretty(&v).expect("JSON values serialise"));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn experiment_config(cli: &Cli, default: &str) -> Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::read(path)?,
        None => ExperimentConfig::parse(default)?,
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(trials) = cli.trials {
        config.trials = trials;
    }
    if let Some(out) = &cli.out {
        config.out = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: &Cli) -> Result<Value> {
    match &cli.command {
        Command::Dims {
            class,
            which,
            max_points,
            max_subset,
        } => dims(class, *which, DimensionCaps {
            max_points: *max_points,
            max_subset: *max_subset,
        }),
        Command::Split { scheme, m, rho, delta } => {
            let splitter = match scheme {
                Scheme::None => Splitter::None,
                Scheme::Hanneke => Splitter::Hanneke,
                Scheme::Bagging => Splitter::Bagging {
                    rho: *rho,
                    delta: *delta,
                },
                Scheme::Three => Splitter::Three,
            };
            let plan = splitter.plan(*m, &RandomSource::new(cli.seed.unwrap_or(0)))?;
            Ok(serde_json::to_value(plan)?)
        }
        Command::MakeClass { family, d, n, blocks } => make_class(cli, *family, *d, *n, blocks.as_deref()),
        Command::Properness { class, function } => {
            let class = read_class(class)?;
            let f = read_function(function, Some(class.labels().len()))?;
            let exact = properness_exact(&f, &class)?;
            let greedy = properness_greedy(&f, &class)?;
            Ok(json!({ "value": exact.value, "cover": exact.cover, "greedy_upper_bound": greedy.value }))
        }
        Command::Coupon => {
            let config = experiment_config(cli, COUPON_DEFAULT)?;
            let (stats, counts) = run_coupon(&config)?;
            if let Some(out) = &config.out {
                emit_coupon_report(&config, &stats, &counts, out)?;
            }
            Ok(json!({
                "stats": stats,
                "relative_mean_error": stats.relative_mean_error(),
            }))
        }
        Command::LowerBound => {
            let config = experiment_config(cli, LOWER_BOUND_DEFAULT)?;
            let results = run_lower_bound(&config)?;
            write_reports(&results, config.out.as_deref())?;
            Ok(json!({
                "thresholds": results.first().and_then(|r| r.thresholds),
                "epsilon": config.epsilon,
                "results": results.iter().map(overview).collect::<Vec<_>>(),
            }))
        }
        Command::UpperBound => {
            let config = experiment_config(cli, UPPER_BOUND_DEFAULT)?;
            let (results, checks) = run_upper_bound(&config)?;
            write_reports(&results, config.out.as_deref())?;
            Ok(json!({
                "graph_dimension": results.first().and_then(|r| r.graph_dimension),
                "results": results.iter().map(overview).collect::<Vec<_>>(),
                "rate_checks": checks,
            }))
        }
    }
}

fn write_reports(results: &[ExperimentResult], out: Option<&Path>) -> Result<()> {
    match out {
        Some(dir) => emit_reports(results, dir),
        None => Ok(()),
    }
}

fn overview(r: &ExperimentResult) -> Value {
    json!({
        "splitter": r.splitter.name(),
        "lemma_violations": r.lemma_violations,
        "per_m": r.aggregates.iter().map(|a| {
            let maj = &a.metrics["majority_error"];
            json!({
                "m": a.m,
                "voters": a.voters_mean,
                "median_majority_error": maj.median,
                "p_majority_above_eps": maj.p_above_eps,
                "p_majority_at_least_2eps": maj.p_at_least_2eps,
                "median_list_error": a.metrics["list_error"].median,
                "fitted_constant": a.fitted_constant,
            })
        }).collect::<Vec<_>>(),
    })
}

fn dims(path: &Path, which: Which, caps: DimensionCaps) -> Result<Value> {
    let class = read_class(path)?;
    let mut out = serde_json::Map::new();
    out.insert("points".into(), json!(class.domain_size()));
    out.insert("labels".into(), json!(class.labels().len()));
    out.insert("hypotheses".into(), json!(class.len()));
    if matches!(which, Which::Graph | Which::All) {
        out.insert("graph".into(), serde_json::to_value(graph_dimension(&class, &caps)?)?);
    }
    if matches!(which, Which::Ds | Which::All) {
        out.insert("ds".into(), serde_json::to_value(ds_dimension(&class, &caps)?)?);
    }
    match which {
        Which::Vc => {
            out.insert("vc".into(), serde_json::to_value(vc_dimension(&class, &caps)?)?);
        }
        Which::All if class.is_binary() => {
            out.insert("vc".into(), serde_json::to_value(vc_dimension(&class, &caps)?)?);
        }
        _ => {}
    }
    Ok(Value::Object(out))
}

fn make_class(cli: &Cli, family: ClassFamily, d: Option<u32>, n: Option<u32>, blocks: Option<&[u32]>) -> Result<Value> {
    let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| Error::config(format!("--{flag} is required for this family")));
    let class = match family {
        ClassFamily::Cantor => cantor_explicit(need(d, "d")? as usize, need(n, "n")?, DEFAULT_EXPLICIT_CAP)?,
        ClassFamily::TwoConst => two_constant_class(need(n, "n")?)?,
        ClassFamily::Witness => match blocks {
            Some(b) => two_block_witness(b)?,
            None => properness_witness(need(d, "d")?)?.class.as_ref().clone(),
        },
    };
    let text = format_class(&class);
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &text)?;
            Ok(json!({
                "written": path,
                "points": class.domain_size(),
                "labels": class.labels().len(),
                "hypotheses": class.len(),
            }))
        }
        None => {
            print!("{text}");
            Ok(Value::Null)
        }
    }
}
