//! Seeded certification runs: every instance goes through the full pipeline
//! and its rounded cost is compared, exactly, against the proven factors.

mod config;
mod report;

use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::instance::{Problem, Variant};
use crate::lp::{self, LpSolution};
use crate::num::{int, Rat};
use crate::oracle::{exact_iap, exact_sirpfl, OracleError};
use crate::rounding::{self, SolveError, Solved};
use crate::schedule::CostModel;

pub use config::{ExperimentConfig, ProblemKind, Seeds};
pub use report::{RatioReport, RatioRow, Usage, CSV_COLUMNS};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("seed {seed}: {source}")]
    Pipeline { seed: u64, source: SolveError },
    #[error("seed {seed}: oracle failed: {source}")]
    Oracle { seed: u64, source: OracleError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Proven factors for one problem class. `None` means the component does not
/// exist for that class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub total: i64,
    pub facility: Option<i64>,
    pub routing: i64,
    pub holding: i64,
}

pub fn bounds(kind: ProblemKind, variant: Variant) -> Bounds {
    match (kind, variant) {
        (ProblemKind::Sirpfl, Variant::Uncap) => Bounds { total: 12, facility: Some(4), routing: 12, holding: 2 },
        (ProblemKind::Sirpfl, Variant::CapSplit) => Bounds { total: 24, facility: Some(4), routing: 24, holding: 2 },
        (ProblemKind::Sirpfl, Variant::CapUnsplit) => Bounds { total: 48, facility: Some(4), routing: 48, holding: 2 },
        (ProblemKind::Iap, Variant::CapSplit) => Bounds { total: 3, facility: None, routing: 3, holding: 2 },
        (ProblemKind::Iap, Variant::CapUnsplit) => Bounds { total: 6, facility: None, routing: 6, holding: 2 },
        (ProblemKind::Iap, Variant::Uncap) => Bounds { total: 1, facility: None, routing: 1, holding: 1 },
    }
}

/// `value <= factor · base`, with `0 <= factor · 0` allowed.
fn within(value: &Rat, factor: i64, base: &Rat) -> bool {
    *value <= base * int(factor)
}

fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("IRPFL_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Runs the configured seeds in parallel; rows come back in seed order.
pub fn certify(config: &ExperimentConfig) -> Result<RatioReport, HarnessError> {
    config.check()?;
    let seeds = config.seeds.to_vec();
    let rows: Result<Vec<RatioRow>, HarnessError> =
        thread_pool().install(|| seeds.par_iter().map(|&seed| certify_seed(config, seed)).collect());
    Ok(RatioReport::new(rows?))
}

/// Pipeline and checks for a single seed.
pub fn certify_seed(config: &ExperimentConfig, seed: u64) -> Result<RatioRow, HarnessError> {
    let problem = config.instance(seed)?;
    let solved = rounding::solve(&problem).map_err(|source| HarnessError::Pipeline { seed, source })?;
    let oracle = if config.oracle {
        let result = match &problem {
            Problem::Sirpfl(inst) => exact_sirpfl(inst),
            Problem::Iap(iap) => exact_iap(iap),
        };
        match result {
            Ok(r) => Some(r.optimum),
            Err(OracleError::TooLarge(_)) => None,
            Err(source) => return Err(HarnessError::Oracle { seed, source }),
        }
    } else {
        None
    };
    Ok(evaluate(config.problem, seed, &problem, &solved, oracle))
}

/// Applies every invariant check to a solved instance.
pub fn evaluate(kind: ProblemKind, seed: u64, problem: &Problem, solved: &Solved, oracle: Option<Rat>) -> RatioRow {
    let lp = solved.lp.clone().expect("certified instances are solved through an LP");
    let b = bounds(kind, problem.variant());
    let schedule = &solved.schedule;
    let costs = &schedule.costs;
    let total = schedule.total_cost();
    let mut checks: Vec<(&'static str, bool)> = Vec::new();

    let feasible = match problem {
        Problem::Sirpfl(inst) => schedule.check(inst).is_ok(),
        Problem::Iap(iap) => schedule.check(iap).is_ok(),
    };
    checks.push(("feasible", feasible));
    checks.push(("lp_le_rounded", lp.objective <= total));
    checks.push(("total_bound", within(&total, b.total, &lp.objective)));
    checks.push(("holding_bound", within(&costs.holding, b.holding, &lp.holding_cost)));
    checks.push(("routing_bound", within(&costs.routing, b.routing, &lp.routing_cost)));
    if let Some(f) = b.facility {
        checks.push(("facility_bound", within(&costs.facility, f, &lp.facility_cost)));
    }
    checks.push(("anchors_disjoint", solved.plans.iter().all(|p| p.anchors_disjoint() && p.is_consistent())));
    if let Some(balls) = &solved.balls {
        checks.push(("ball_mass", balls.mass_bound_holds(&lp)));
        checks.push(("ball_selection", balls.selection_is_maximal()));
    }
    if let Some(split) = &solved.split {
        let doubled = split
            .deliveries
            .iter()
            .zip(&schedule.deliveries)
            .all(|(a, b)| a.day == b.day && a.client == b.client && b.trips.len() <= 2 * a.trips.len());
        checks.push(("repack_trips", doubled && split.deliveries.len() == schedule.deliveries.len()));
        checks.push(("repack_holding", split.costs.holding == costs.holding));
        checks.push(("unsplit_vs_split", within(&total, 2, &split.total_cost())));
        let cap = problem_capacity(problem);
        let small_trips_ok = schedule.deliveries.iter().all(|d| {
            d.trips.iter().filter(|t| t.load() * int(2) <= cap).count() <= 1
        });
        checks.push(("repack_small_trips", small_trips_ok));
    }
    if let Some(opt) = &oracle {
        checks.push(("oracle_ge_lp", lp.objective <= *opt));
        checks.push(("rounded_ge_oracle", *opt <= total));
        checks.push(("opt_ratio_bound", within(&total, b.total, opt)));
    }

    RatioRow {
        seed,
        variant: problem.variant(),
        n: problem.vertex_count(),
        horizon: problem.horizon(),
        num_demands: problem.num_demands(),
        f_used: Usage::of(&costs.facility, &lp.facility_cost),
        r_used: Usage::of(&costs.routing, &lp.routing_cost),
        h_used: Usage::of(&costs.holding, &lp.holding_cost),
        ratio_vs_lp: Usage::of(&total, &lp.objective),
        ratio_vs_opt: oracle.as_ref().map(|o| Usage::of(&total, o)),
        lp,
        rounded_total: total,
        oracle_opt: oracle,
        checks,
    }
}

fn problem_capacity(problem: &Problem) -> Rat {
    match problem {
        Problem::Sirpfl(inst) => CostModel::capacity(inst).cloned(),
        Problem::Iap(iap) => CostModel::capacity(iap).cloned(),
    }
    .unwrap_or_else(Rat::zero)
}

/// Per-seed stage timings, in milliseconds.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub seed: u64,
    pub n: usize,
    pub horizon: usize,
    pub num_demands: usize,
    pub lp_vars: usize,
    pub lp_rows: usize,
    pub lp_ms: f64,
    pub round_ms: f64,
    pub oracle_ms: Option<f64>,
}

fn build_lp(problem: &Problem) -> Result<lp::LpModel, SolveError> {
    Ok(match problem {
        Problem::Sirpfl(inst) if inst.variant == Variant::Uncap => lp::build_usirpfl_lp(inst)?,
        Problem::Sirpfl(inst) => lp::build_cssirpfl_lp(&inst.with_variant(Variant::CapSplit))?,
        Problem::Iap(iap) => lp::build_csiap_lp(&iap.with_variant(Variant::CapSplit))?,
    })
}

fn round_only(problem: &Problem, lp: &LpSolution) -> Result<(), SolveError> {
    match problem {
        Problem::Sirpfl(inst) if inst.variant == Variant::Uncap => {
            rounding::round_usirpfl(inst, lp);
        }
        Problem::Sirpfl(inst) => {
            let split = rounding::round_cssirpfl(&inst.with_variant(Variant::CapSplit), lp);
            if inst.variant == Variant::CapUnsplit {
                rounding::repack_schedule(&split.schedule, inst)?;
            }
        }
        Problem::Iap(iap) => {
            let split = rounding::round_csiap(&iap.with_variant(Variant::CapSplit), lp);
            if iap.variant == Variant::CapUnsplit {
                rounding::repack_schedule(&split.schedule, iap)?;
            }
        }
    }
    Ok(())
}

/// Times LP solving, rounding and (optionally) the oracle, sequentially so
/// the numbers are not distorted by contention.
pub fn bench(config: &ExperimentConfig) -> Result<Vec<BenchRow>, HarnessError> {
    config.check()?;
    let mut rows = Vec::new();
    for seed in config.seeds.to_vec() {
        let problem = config.instance(seed)?;
        let wrap = |source| HarnessError::Pipeline { seed, source };
        let start = Instant::now();
        let model = build_lp(&problem).map_err(wrap)?;
        let solution = lp::solve_lp(&model).map_err(|e| wrap(e.into()))?;
        let lp_ms = start.elapsed().as_secs_f64() * 1e3;
        let start = Instant::now();
        round_only(&problem, &solution).map_err(wrap)?;
        let round_ms = start.elapsed().as_secs_f64() * 1e3;
        let oracle_ms = if config.oracle {
            let start = Instant::now();
            let result = match &problem {
                Problem::Sirpfl(inst) => exact_sirpfl(inst).map(|_| ()),
                Problem::Iap(iap) => exact_iap(iap).map(|_| ()),
            };
            match result {
                Ok(()) => Some(start.elapsed().as_secs_f64() * 1e3),
                Err(OracleError::TooLarge(_)) => None,
                Err(source) => return Err(HarnessError::Oracle { seed, source }),
            }
        } else {
            None
        };
        rows.push(BenchRow {
            seed,
            n: problem.vertex_count(),
            horizon: problem.horizon(),
            num_demands: problem.num_demands(),
            lp_vars: model.num_vars(),
            lp_rows: model.num_constraints(),
            lp_ms,
            round_ms,
            oracle_ms,
        });
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["seed", "n", "T", "num_demands", "lp_vars", "lp_rows", "lp_ms", "round_ms", "oracle_ms"])
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.seed.to_string(),
            r.n.to_string(),
            r.horizon.to_string(),
            r.num_demands.to_string(),
            r.lp_vars.to_string(),
            r.lp_rows.to_string(),
            format!("{:.3}", r.lp_ms),
            format!("{:.3}", r.round_ms),
            r.oracle_ms.map(|m| format!("{m:.3}")).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
