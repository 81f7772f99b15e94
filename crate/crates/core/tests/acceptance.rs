//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use irpfl::harness::{certify, ExperimentConfig, ProblemKind, RatioReport, Seeds};
use irpfl::instance::{generate_random_iap, make_partition_gadget, IapGenParams, Variant};
use irpfl::lp::{solve_lp, solve_lp_with, Family, LpError, LpModel, PivotRule, Relation, SolveOptions, VarTag};
use irpfl::num::{frac, int, Rat};
use irpfl::oracle::{exact_iap, partition_exists, visit_enum, ww_dp};

struct Outcome {
    ok: bool,
    detail: String,
}

fn config(problem: ProblemKind, variant: Variant, n: (usize, usize), horizon: (usize, usize), count: u64) -> ExperimentConfig {
    ExperimentConfig {
        problem,
        variant,
        n,
        horizon,
        density: 0.5,
        capacity: None,
        weight_range: (0, 10),
        facility_range: (0, 20),
        holding_slope_range: (0, 3),
        demand_range: (1, 5),
        max_demands: Some(8),
        seeds: Seeds::Range { start: 1, count },
        oracle: true,
        output: None,
    }
}

fn iap_config(variant: Variant) -> ExperimentConfig {
    ExperimentConfig {
        density: 0.7,
        capacity: Some(10),
        weight_range: (1, 10),
        demand_range: (1, 8),
        ..config(ProblemKind::Iap, variant, (1, 1), (1, 6), 50)
    }
}

fn network_config(variant: Variant) -> ExperimentConfig {
    ExperimentConfig {
        capacity: Some(8),
        demand_range: (1, 8),
        ..config(ProblemKind::Sirpfl, variant, (2, 4), (1, 3), 30)
    }
}

/// Every named check passes on every row; lists the offending seeds.
fn all_checks(report: &RatioReport, names: &[&str]) -> (bool, Vec<String>) {
    let mut bad = Vec::new();
    for row in &report.rows {
        for name in names {
            if row.check(name) != Some(true) {
                bad.push(format!("seed {} {name}", row.seed));
            }
        }
    }
    (bad.is_empty(), bad)
}

fn timed(budget: Duration, start: Instant, mut outcome: Outcome) -> Outcome {
    let elapsed = start.elapsed();
    if elapsed > budget {
        outcome.ok = false;
        outcome.detail.push_str(&format!("; over time budget {:?}", budget));
    }
    outcome.detail.push_str(&format!(" ({:.1}s)", elapsed.as_secs_f64()));
    outcome
}

fn summarize(report: &RatioReport, ok: bool, bad: Vec<String>) -> Outcome {
    let mut detail = report.summary();
    if !bad.is_empty() {
        detail.push_str(&format!("; failures: {}", bad.join(", ")));
    }
    Outcome { ok: ok && !report.rows.is_empty(), detail }
}

struct Reports {
    uncap: RatioReport,
    csiap: RatioReport,
    cuiap: RatioReport,
    cs: RatioReport,
    cu: RatioReport,
}

fn run(cfg: &ExperimentConfig) -> RatioReport {
    certify(cfg).unwrap_or_else(|e| panic!("certification aborted: {e}"))
}

fn criterion_uncap() -> (Outcome, RatioReport) {
    let start = Instant::now();
    let report = run(&config(ProblemKind::Sirpfl, Variant::Uncap, (2, 5), (1, 4), 30));
    let (ok, bad) = all_checks(
        &report,
        &["feasible", "lp_le_rounded", "total_bound", "holding_bound", "routing_bound", "facility_bound"],
    );
    let out = summarize(&report, ok, bad);
    (timed(Duration::from_secs(60), start, out), report)
}

fn planted_lp(rng: &mut ChaCha8Rng) -> (LpModel, Rat) {
    let rows = rng.gen_range(1..=5);
    let cols = rows + rng.gen_range(1..=5);
    let a: Vec<Vec<Rat>> = (0..rows).map(|_| (0..cols).map(|_| int(rng.gen_range(-5..=5))).collect()).collect();
    let mut basis: Vec<usize> = (0..cols).collect();
    for i in 0..rows {
        let j = rng.gen_range(i..cols);
        basis.swap(i, j);
    }
    let basis = &basis[..rows];
    let x: Vec<Rat> = (0..cols)
        .map(|j| if basis.contains(&j) { frac(rng.gen_range(1..=9), rng.gen_range(1..=4)) } else { Rat::zero() })
        .collect();
    let relations: Vec<Relation> = (0..rows)
        .map(|_| match rng.gen_range(0..3) {
            0 => Relation::Ge,
            1 => Relation::Le,
            _ => Relation::Eq,
        })
        .collect();
    // Dual signs for a minimisation: >= rows take y >= 0, <= rows y <= 0.
    let y: Vec<Rat> = relations
        .iter()
        .map(|r| {
            let mag = frac(rng.gen_range(0..=6), rng.gen_range(1..=3));
            match r {
                Relation::Ge => mag,
                Relation::Le => -mag,
                Relation::Eq => if rng.gen_bool(0.5) { mag } else { -mag },
            }
        })
        .collect();
    let b: Vec<Rat> = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
    let c: Vec<Rat> = (0..cols)
        .map(|j| {
            let aty: Rat = (0..rows).map(|i| &a[i][j] * &y[i]).sum();
            if basis.contains(&j) { aty } else { aty + frac(rng.gen_range(1..=7), rng.gen_range(1..=3)) }
        })
        .collect();
    let mut model = LpModel::new();
    for (j, cj) in c.iter().enumerate() {
        model.add_var(VarTag::Free(j), cj.clone());
    }
    for i in 0..rows {
        let terms = a[i].iter().cloned().enumerate().collect();
        model.add_constraint(terms, relations[i], b[i].clone(), Family::Generic);
    }
    let primal: Rat = c.iter().zip(&x).map(|(p, q)| p * q).sum();
    let dual: Rat = b.iter().zip(&y).map(|(p, q)| p * q).sum();
    assert_eq!(primal, dual, "planted certificate is inconsistent");
    (model, primal)
}

fn beale() -> LpModel {
    let mut m = LpModel::new();
    let costs = [frac(-3, 4), int(20), frac(-1, 2), int(6)];
    let cols: Vec<usize> = costs.iter().enumerate().map(|(j, c)| m.add_var(VarTag::Free(j), c.clone())).collect();
    let row = |coefs: [Rat; 4]| -> Vec<(usize, Rat)> { cols.iter().copied().zip(coefs).collect() };
    m.add_constraint(row([frac(1, 4), int(-8), int(-1), int(9)]), Relation::Le, int(0), Family::Generic);
    m.add_constraint(row([frac(1, 2), int(-12), frac(-1, 2), int(3)]), Relation::Le, int(0), Family::Generic);
    m.add_constraint(vec![(cols[2], int(1))], Relation::Le, int(1), Family::Generic);
    m
}

fn criterion_lp() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = Vec::new();
    for k in 0..200 {
        let (model, optimum) = planted_lp(&mut rng);
        match solve_lp(&model) {
            Ok(sol) if sol.objective == optimum => {}
            Ok(sol) => mismatches.push(format!("#{k}: got {} want {optimum}", sol.objective)),
            Err(e) => mismatches.push(format!("#{k}: {e}")),
        }
    }
    let bland = solve_lp_with(&beale(), SolveOptions { rule: PivotRule::Bland, max_pivots: Some(1000) });
    let bland_ok = matches!(&bland, Ok(s) if s.objective == frac(-5, 4));
    let dantzig = solve_lp_with(&beale(), SolveOptions { rule: PivotRule::Dantzig, max_pivots: Some(100) });
    let dantzig_note = match dantzig {
        Err(LpError::PivotLimit(_)) => "largest-coefficient rule cycles".to_string(),
        Ok(s) => format!("largest-coefficient rule reached {}", s.objective),
        Err(e) => format!("largest-coefficient rule: {e}"),
    };
    let ok = mismatches.is_empty() && bland_ok;
    let detail = format!(
        "200 planted optima, {} mismatches{}; cycling example under Bland: {}; {dantzig_note}",
        mismatches.len(),
        if mismatches.is_empty() { String::new() } else { format!(" [{}]", mismatches.join("; ")) },
        match &bland {
            Ok(s) => format!("objective {}", s.objective),
            Err(e) => e.to_string(),
        }
    );
    timed(Duration::from_secs(60), start, Outcome { ok, detail })
}

fn criterion_gadget() -> Outcome {
    let start = Instant::now();
    let mut sets: Vec<Vec<u64>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..6 {
        frontier = frontier
            .iter()
            .flat_map(|s| {
                let lo = s.last().copied().unwrap_or(1);
                (lo..=9).map(move |x| {
                    let mut t = s.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
        sets.extend(frontier.iter().cloned());
    }
    let mut checked = 0;
    let mut yes = 0;
    let mut wrong = Vec::new();
    for (k, s) in sets.iter().enumerate() {
        let total: u64 = s.iter().sum();
        if s.is_empty() || s.iter().any(|&x| 2 * x > total) {
            continue;
        }
        let w = int(1 + (k % 7) as i64);
        let gadget = make_partition_gadget(s, w.clone()).expect("valid gadget");
        let optimum = exact_iap(&gadget).expect("gadget within oracle limits").optimum;
        let split = partition_exists(s);
        if (optimum == &w * int(2)) != split {
            wrong.push(format!("{s:?}"));
        }
        checked += 1;
        yes += split as usize;
    }
    let ok = wrong.is_empty() && checked > 0;
    let detail = format!(
        "{checked} multisets ({yes} with a partition), {} disagreements{}",
        wrong.len(),
        if wrong.is_empty() { String::new() } else { format!(": {}", wrong.join(" ")) }
    );
    timed(Duration::from_secs(60), start, Outcome { ok, detail })
}

fn criterion_lot_sizing() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut wrong = Vec::new();
    for k in 0..100 {
        let params = IapGenParams {
            horizon: rng.gen_range(1..=12),
            demand_density: rng.gen_range(0.2..=1.0),
            distance_range: (0, 15),
            holding_slope_range: (0, 4),
            demand_range: (1, 6),
            capacity: None,
            variant: Variant::Uncap,
        };
        let iap = generate_random_iap(&params, k).expect("valid parameters");
        let dp = ww_dp(&iap).expect("uncapacitated");
        let brute = visit_enum(&iap).expect("at most 12 days");
        if dp.optimum != brute.optimum || dp.witness.check(&iap).is_err() {
            wrong.push(k.to_string());
        }
    }
    (wrong.is_empty(), format!("lot-sizing DP vs visit enumeration: {} of 100 disagree{}", wrong.len(),
        if wrong.is_empty() { String::new() } else { format!(" (seeds {})", wrong.join(",")) }))
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = Vec::new();

    let (outcome, uncap) = criterion_uncap();
    results.push(("C1 uncapacitated network: total <= 12 LP, components 2/12/4", outcome));

    let start = Instant::now();
    let csiap = run(&iap_config(Variant::CapSplit));
    let (ok, bad) = all_checks(&csiap, &["feasible", "lp_le_rounded", "total_bound", "holding_bound", "routing_bound"]);
    results.push((
        "C2 capacitated splittable IAP: total <= 3 LP, holding <= 2h, routing <= 3r",
        timed(Duration::from_secs(30), start, summarize(&csiap, ok, bad)),
    ));

    let start = Instant::now();
    let cuiap = run(&iap_config(Variant::CapUnsplit));
    let (ok, bad) = all_checks(
        &cuiap,
        &["feasible", "total_bound", "unsplit_vs_split", "repack_trips", "repack_holding", "repack_small_trips"],
    );
    results.push((
        "C3 capacitated unsplittable IAP: <= 2x splittable, <= 6 LP, n' <= 2n, holding unchanged",
        timed(Duration::from_secs(30), start, summarize(&cuiap, ok, bad)),
    ));

    let start = Instant::now();
    let cs = run(&network_config(Variant::CapSplit));
    let cu = run(&network_config(Variant::CapUnsplit));
    let (ok_s, bad_s) = all_checks(
        &cs,
        &["feasible", "lp_le_rounded", "total_bound", "holding_bound", "routing_bound", "facility_bound"],
    );
    let (ok_u, bad_u) = all_checks(
        &cu,
        &["feasible", "lp_le_rounded", "total_bound", "unsplit_vs_split", "repack_trips", "repack_holding"],
    );
    let mut out = summarize(&cs, ok_s, bad_s);
    let out_u = summarize(&cu, ok_u, bad_u);
    out.ok &= out_u.ok;
    out.detail = format!("splittable: {}; unsplittable: {}", out.detail, out_u.detail);
    results.push((
        "C4 capacitated network: splittable <= 24 LP, unsplittable <= 48 LP",
        timed(Duration::from_secs(120), start, out),
    ));

    let reports = Reports { uncap, csiap, cuiap, cs, cu };
    let all = [&reports.uncap, &reports.csiap, &reports.cuiap, &reports.cs, &reports.cu];
    let mut bad = Vec::new();
    let mut balls = 0;
    for report in all {
        for row in &report.rows {
            for name in ["ball_mass", "ball_selection"] {
                match row.check(name) {
                    Some(false) => bad.push(format!("{} seed {} {name}", row.variant, row.seed)),
                    Some(true) if name == "ball_mass" => balls += 1,
                    _ => {}
                }
            }
            if row.check("anchors_disjoint") != Some(true) {
                bad.push(format!("{} seed {} anchors", row.variant, row.seed));
            }
        }
    }
    let instances: usize = all.iter().map(|r| r.rows.len()).sum();
    results.push((
        "C5 selected balls carry opening mass >= 1/4; anchor intervals disjoint under both visit rules",
        Outcome {
            ok: bad.is_empty() && balls > 0,
            detail: format!(
                "{instances} instances, {balls} with ball systems, {} failures{}",
                bad.len(),
                if bad.is_empty() { String::new() } else { format!(": {}", bad.join(", ")) }
            ),
        },
    ));

    let mut bad = Vec::new();
    let mut gated = 0;
    for report in all {
        for row in &report.rows {
            if row.check("lp_le_rounded") != Some(true) {
                bad.push(format!("{} seed {} rounded < LP", row.variant, row.seed));
            }
            if row.oracle_opt.is_some() {
                gated += 1;
                for name in ["oracle_ge_lp", "rounded_ge_oracle"] {
                    if row.check(name) != Some(true) {
                        bad.push(format!("{} seed {} {name}", row.variant, row.seed));
                    }
                }
            }
        }
    }
    let (dp_ok, dp_detail) = criterion_lot_sizing();
    results.push((
        "C6 oracle agreement: LP <= OPT <= rounded; lot-sizing DP matches enumeration",
        Outcome {
            ok: bad.is_empty() && gated > 0 && dp_ok,
            detail: format!(
                "{gated} instances with exact optima, {} ordering failures{}; {dp_detail}",
                bad.len(),
                if bad.is_empty() { String::new() } else { format!(": {}", bad.join(", ")) }
            ),
        },
    ));

    results.push(("C7 partition gadget: optimum is 2w exactly when a partition exists", criterion_gadget()));
    results.push(("C8 exact simplex: planted optima and termination on a cycling example", criterion_lp()));

    let mut failed = 0;
    for (name, outcome) in &results {
        println!("[{}] {name} -- {}", if outcome.ok { "PASS" } else { "FAIL" }, outcome.detail);
        failed += !outcome.ok as usize;
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
