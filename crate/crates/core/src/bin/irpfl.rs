use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use irpfl::harness::{bench, bench_csv, certify, ExperimentConfig};
use irpfl::instance::{
    generate_random, generate_random_iap, make_partition_gadget, parse, serialize, GenParams, IapGenParams, Problem,
    Variant,
};
use irpfl::lp::{build_csiap_lp, build_cssirpfl_lp, build_usirpfl_lp, export_mps};
use irpfl::num::{fmt_rat, int, parse_rat};
use irpfl::oracle::{exact_iap, exact_sirpfl, OracleError};
use irpfl::rounding::{solve, SolveError};

/// Approximation algorithms and exact oracles for star inventory routing
/// with facility opening costs.
#[derive(Parser)]
#[command(name = "irpfl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Sirpfl,
    Iap,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random instance.
    Generate {
        #[arg(long, value_enum, default_value = "sirpfl")]
        problem: Kind,
        #[arg(long, default_value = "UNCAP")]
        variant: Variant,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(short = 'T', long = "horizon", default_value_t = 3)]
        horizon: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long)]
        capacity: Option<i64>,
        #[arg(long)]
        max_demands: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Round the LP relaxation of an instance into a schedule.
    Solve {
        input: PathBuf,
        /// Solve as this variant instead of the one in the file.
        #[arg(long)]
        variant: Option<Variant>,
        /// Also write the LP relaxation in free MPS format.
        #[arg(long)]
        lp_export: Option<PathBuf>,
        /// Schedule output (JSON); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the schedule as CSV, one row per trip.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Solve an instance exactly (small instances only).
    Oracle {
        input: PathBuf,
        #[arg(long)]
        variant: Option<Variant>,
        /// Witness schedule output (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a certification experiment; exits 2 on any violated bound.
    Certify {
        config: PathBuf,
        /// CSV report; overrides the config's `output`, stdout if neither.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the unsplittable IAP gadget for a number-partition instance.
    Gadget {
        #[arg(required = true)]
        items: Vec<u64>,
        #[arg(long)]
        w: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the pipeline stages for each seed of a configuration.
    Bench {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Invalid(anyhow::Error),
    Violation(String),
    TooLarge(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path, variant: Option<Variant>) -> anyhow::Result<Problem> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let problem = parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(match variant {
        Some(v) => problem.with_variant(v),
        None => problem,
    })
}

fn load_config(path: &Path) -> anyhow::Result<ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ExperimentConfig::from_json(&text)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { problem, variant, n, horizon, density, capacity, max_demands, seed, out } => {
            let capacity = capacity.map(int);
            let generated = match problem {
                Kind::Sirpfl => {
                    let params = GenParams {
                        n,
                        horizon,
                        demand_density: density,
                        capacity,
                        variant,
                        max_demands,
                        ..GenParams::default()
                    };
                    Problem::Sirpfl(generate_random(&params, seed).map_err(|e| anyhow!(e))?)
                }
                Kind::Iap => {
                    let params = IapGenParams {
                        horizon,
                        demand_density: density,
                        capacity,
                        variant,
                        ..IapGenParams::default()
                    };
                    Problem::Iap(generate_random_iap(&params, seed).map_err(|e| anyhow!(e))?)
                }
            };
            emit(out.as_deref(), &serialize(&generated))?;
        }
        Command::Solve { input, variant, lp_export, out, csv } => {
            let problem = load(&input, variant)?;
            if let Some(path) = &lp_export {
                let model = match &problem {
                    Problem::Sirpfl(i) if i.variant == Variant::Uncap => build_usirpfl_lp(i),
                    Problem::Sirpfl(i) => build_cssirpfl_lp(&i.with_variant(Variant::CapSplit)),
                    Problem::Iap(i) if i.variant == Variant::Uncap => {
                        Err(irpfl::lp::BuildError::Variant { expected: "a capacitated IAP", found: i.variant })
                    }
                    Problem::Iap(i) => build_csiap_lp(&i.with_variant(Variant::CapSplit)),
                }
                .map_err(|e| anyhow!(e))?;
                emit(Some(path), &export_mps(&model))?;
            }
            let solved = solve(&problem).map_err(|e| match e {
                SolveError::Oracle(OracleError::TooLarge(m)) => Failure::TooLarge(m),
                other => Failure::Invalid(anyhow!(other)),
            })?;
            let s = &solved.schedule;
            eprintln!(
                "cost {} (facility {}, routing {}, holding {}){}",
                fmt_rat(&s.total_cost()),
                fmt_rat(&s.costs.facility),
                fmt_rat(&s.costs.routing),
                fmt_rat(&s.costs.holding),
                solved.lp.as_ref().map(|lp| format!("; LP bound {}", fmt_rat(&lp.objective))).unwrap_or_default()
            );
            emit(out.as_deref(), &s.to_json())?;
            if let Some(path) = &csv {
                emit(Some(path), &s.to_csv())?;
            }
        }
        Command::Oracle { input, variant, out } => {
            let problem = load(&input, variant)?;
            let violations = problem.validate();
            if !violations.is_empty() {
                let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                return Err(Failure::Invalid(anyhow!("invalid instance: {}", text.join("; "))));
            }
            let result = match &problem {
                Problem::Sirpfl(i) => exact_sirpfl(i),
                Problem::Iap(i) => exact_iap(i),
            }
            .map_err(|e| match e {
                OracleError::TooLarge(m) => Failure::TooLarge(m),
                other => Failure::Invalid(anyhow!(other)),
            })?;
            println!("optimum {}", fmt_rat(&result.optimum));
            println!("method {}", result.method);
            if let Some(path) = &out {
                emit(Some(path), &result.witness.to_json())?;
            }
        }
        Command::Certify { config, out } => {
            let config = load_config(&config)?;
            let report = certify(&config).map_err(|e| anyhow!(e))?;
            let target = out.or_else(|| config.output.clone());
            emit(target.as_deref(), &report.to_csv())?;
            eprintln!("{}", report.summary());
            if !report.all_pass() {
                let seeds: Vec<String> =
                    report.rows.iter().filter(|r| !r.pass()).map(|r| r.seed.to_string()).collect();
                return Err(Failure::Violation(format!("bound violations at seeds {}", seeds.join(", "))));
            }
        }
        Command::Gadget { items, w, out } => {
            let w = parse_rat(&w).ok_or_else(|| anyhow!("`{w}` is not a rational"))?;
            let gadget = make_partition_gadget(&items, w).map_err(|e| anyhow!(e))?;
            emit(out.as_deref(), &serialize(&Problem::Iap(gadget)))?;
        }
        Command::Bench { config, out } => {
            let config = load_config(&config)?;
            let rows = bench(&config).map_err(|e| anyhow!(e))?;
            emit(out.as_deref(), &bench_csv(&rows))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(m)) => {
            eprintln!("violation: {m}");
            ExitCode::from(2)
        }
        Err(Failure::TooLarge(m)) => {
            eprintln!("too large: {m}");
            ExitCode::from(3)
        }
    }
}
