//! LP rounding for every variant, plus the end-to-end `solve` dispatcher.

mod balls;
mod repack;
mod visits;

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::instance::{IapInstance, Instance, Problem, Variant, Violation, IAP_CLIENT, IAP_DEPOT};
use crate::lp::{self, BuildError, LpError, LpSolution};
use crate::num::{ceil_usize, Rat};
use crate::oracle::{self, OracleError};
pub use crate::schedule::Schedule;
use crate::schedule::{CostModel, Delivery, Parcel, Trip};

pub use balls::{build_balls, select_balls, Ball, BallSystem};
pub use repack::{trip_loads, unsplit_repack, RepackError};
pub use visits::{
    compute_s_star, compute_s_star_iap, latest_half_mass_day, plan_visits_capacitated,
    plan_visits_uncapacitated, PlanInput, PlanItem, VisitPlan,
};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid instance: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Repack(#[from] RepackError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A rounded schedule together with the intermediate structures, so callers
/// can audit the invariants the rounding relies on.
#[derive(Debug, Clone)]
pub struct Rounded {
    pub schedule: Schedule,
    pub plans: Vec<VisitPlan>,
    pub balls: Option<BallSystem>,
}

/// Output of [`solve`].
#[derive(Debug, Clone)]
pub struct Solved {
    pub schedule: Schedule,
    /// Absent when the instance was solved exactly without an LP.
    pub lp: Option<LpSolution>,
    pub plans: Vec<VisitPlan>,
    pub balls: Option<BallSystem>,
    /// For unsplittable inputs: the splittable schedule before repacking.
    /// Its deliveries line up one-to-one with the final schedule's.
    pub split: Option<Schedule>,
}

/// Fills trips in order, splitting a parcel across trips when it does not
/// fit, so exactly `⌈load / cap⌉` trips are used. Without a capacity
/// everything rides in one trip.
pub(crate) fn fill_trips(parcels: Vec<Parcel>, cap: Option<&Rat>) -> Vec<Trip> {
    let Some(cap) = cap else {
        return vec![Trip { parcels }];
    };
    let mut trips = vec![Trip::default()];
    let mut room = cap.clone();
    for mut p in parcels {
        while p.amount.is_positive() {
            if room.is_zero() {
                trips.push(Trip::default());
                room = cap.clone();
            }
            let take = if p.amount <= room { p.amount.clone() } else { room.clone() };
            room -= &take;
            p.amount -= &take;
            trips.last_mut().expect("nonempty").parcels.push(Parcel {
                demand: p.demand,
                deadline: p.deadline,
                amount: take,
            });
        }
    }
    trips
}

fn deliveries_for(plan: &VisitPlan, facility: usize, model: &impl CostModel) -> Vec<Delivery> {
    let cap = model.capacity().filter(|_| model.variant().is_capacitated());
    plan.visit_days
        .iter()
        .map(|&day| {
            let parcels = plan
                .served_on(day)
                .map(|i| {
                    let (_, deadline, amount) = model.demand(i.demand);
                    Parcel { demand: i.demand, deadline, amount }
                })
                .collect();
            Delivery { client: plan.client, day, facility, trips: fill_trips(parcels, cap) }
        })
        .collect()
}

fn network_inputs(inst: &Instance, lp: &LpSolution, v: usize) -> Vec<PlanInput> {
    inst.demands
        .iter()
        .enumerate()
        .filter(|(_, d)| d.vertex == v)
        .map(|(i, d)| PlanInput { demand: i, deadline: d.day, s_star: compute_s_star(lp, inst, v, d.day) })
        .collect()
}

fn round_network(inst: &Instance, lp: &LpSolution, capacitated: bool) -> Rounded {
    let plans: Vec<VisitPlan> = inst
        .clients()
        .into_iter()
        .map(|v| {
            let inputs = network_inputs(inst, lp, v);
            if capacitated {
                plan_visits_capacitated(v, &inputs)
            } else {
                plan_visits_uncapacitated(v, &inputs)
            }
        })
        .collect();
    let balls = select_balls(inst, build_balls(inst, lp, &plans));
    let deliveries = plans
        .iter()
        .flat_map(|p| deliveries_for(p, balls.facility_of[&p.client], inst))
        .collect();
    let schedule = Schedule::new(balls.opened.clone(), deliveries, inst);
    Rounded { schedule, plans, balls: Some(balls) }
}

/// Uncapacitated network rounding: backward visit rule, ball selection, one
/// trip per visit day from the client's nearest open facility.
pub fn round_usirpfl(inst: &Instance, lp: &LpSolution) -> Rounded {
    round_network(inst, lp, false)
}

/// Capacitated splittable network rounding; each visit day uses
/// `⌈load / U⌉` trips.
pub fn round_cssirpfl(inst: &Instance, lp: &LpSolution) -> Rounded {
    round_network(inst, lp, true)
}

/// Capacitated splittable IAP rounding.
pub fn round_csiap(iap: &IapInstance, lp: &LpSolution) -> Rounded {
    let inputs: Vec<PlanInput> = iap
        .demands
        .iter()
        .enumerate()
        .map(|(j, d)| PlanInput { demand: j, deadline: d.day, s_star: compute_s_star_iap(lp, j, d.day) })
        .collect();
    let plan = plan_visits_capacitated(IAP_CLIENT, &inputs);
    let deliveries = deliveries_for(&plan, IAP_DEPOT, iap);
    let schedule = Schedule::new(BTreeSet::from([IAP_DEPOT]), deliveries, iap);
    Rounded { schedule, plans: vec![plan], balls: None }
}

/// Repacks every delivery of a splittable schedule into whole-demand trips.
/// Each delivery must carry every one of its demands completely.
pub fn repack_schedule(split: &Schedule, model: &impl CostModel) -> Result<Schedule, RepackError> {
    let cap = model.capacity().expect("repacking needs a capacity").clone();
    let mut deliveries = Vec::with_capacity(split.deliveries.len());
    for d in &split.deliveries {
        let carried: Vec<(usize, Rat)> = d.delivered().into_iter().collect();
        let sizes: Vec<Rat> = carried.iter().map(|(_, a)| a.clone()).collect();
        let packing = unsplit_repack(&sizes, &cap, d.trips.len())?;
        let trips = packing
            .into_iter()
            .map(|items| Trip {
                parcels: items
                    .into_iter()
                    .map(|i| {
                        let (demand, amount) = carried[i].clone();
                        let (_, deadline, _) = model.demand(demand);
                        Parcel { demand, deadline, amount }
                    })
                    .collect(),
            })
            .collect();
        deliveries.push(Delivery { client: d.client, day: d.day, facility: d.facility, trips });
    }
    Ok(Schedule::new(split.opened.clone(), deliveries, model))
}

fn check_valid(problem: &Problem) -> Result<(), SolveError> {
    let violations = problem.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(SolveError::Invalid(violations))
    }
}

/// Validates, builds and solves the matching relaxation, rounds, and repacks
/// for unsplittable variants. Uncapacitated IAPs are solved exactly.
pub fn solve(problem: &Problem) -> Result<Solved, SolveError> {
    check_valid(problem)?;
    match problem {
        Problem::Iap(iap) if iap.variant == Variant::Uncap => {
            let exact = oracle::ww_dp(iap)?;
            Ok(Solved { schedule: exact.witness, lp: None, plans: Vec::new(), balls: None, split: None })
        }
        Problem::Iap(iap) => {
            let split_iap = iap.with_variant(Variant::CapSplit);
            let lp = lp::solve_lp(&lp::build_csiap_lp(&split_iap)?)?;
            let rounded = round_csiap(&split_iap, &lp);
            finish(rounded, lp, iap)
        }
        Problem::Sirpfl(inst) if inst.variant == Variant::Uncap => {
            let lp = lp::solve_lp(&lp::build_usirpfl_lp(inst)?)?;
            let rounded = round_usirpfl(inst, &lp);
            finish(rounded, lp, inst)
        }
        Problem::Sirpfl(inst) => {
            let split_inst = inst.with_variant(Variant::CapSplit);
            let lp = lp::solve_lp(&lp::build_cssirpfl_lp(&split_inst)?)?;
            let rounded = round_cssirpfl(&split_inst, &lp);
            finish(rounded, lp, inst)
        }
    }
}

fn finish(rounded: Rounded, lp: LpSolution, model: &impl CostModel) -> Result<Solved, SolveError> {
    let Rounded { schedule, plans, balls } = rounded;
    if model.variant() == Variant::CapUnsplit {
        let repacked = repack_schedule(&schedule, model)?;
        Ok(Solved { schedule: repacked, lp: Some(lp), plans, balls, split: Some(schedule) })
    } else {
        Ok(Solved { schedule, lp: Some(lp), plans, balls, split: None })
    }
}

/// Trips the splittable rule uses for a given day load.
pub fn split_trip_count(load: &Rat, cap: &Rat) -> usize {
    ceil_usize(&(load / cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{make_partition_gadget, DemandPoint, IapDemand};
    use crate::num::int;

    fn single_vertex(amount: i64, variant: Variant, cap: Option<i64>) -> Instance {
        Instance::new(
            1,
            variant,
            cap.map(int),
            vec![vec![int(0)]],
            vec![int(5)],
            vec![DemandPoint { vertex: 0, day: 1, amount: int(amount), holding: vec![int(0)] }],
        )
    }

    fn two_vertices(amount: i64, variant: Variant, cap: Option<i64>) -> Instance {
        Instance::new(
            1,
            variant,
            cap.map(int),
            vec![vec![int(0), int(2)], vec![int(2), int(0)]],
            vec![int(1), int(100)],
            vec![DemandPoint { vertex: 1, day: 1, amount: int(amount), holding: vec![int(0)] }],
        )
    }

    #[test]
    fn fill_trips_splits_sequentially() {
        let parcels = vec![
            Parcel { demand: 0, deadline: 1, amount: int(3) },
            Parcel { demand: 1, deadline: 2, amount: int(4) },
        ];
        let trips = fill_trips(parcels, Some(&int(5)));
        assert_eq!(trips.len(), 2);
        assert_eq!(trips[0].load(), int(5));
        assert_eq!(trips[1].load(), int(2));
    }

    #[test]
    fn single_vertex_is_served_in_place() {
        let solved = solve(&Problem::Sirpfl(single_vertex(1, Variant::Uncap, None))).unwrap();
        assert_eq!(solved.schedule.total_cost(), int(5));
        let solved = solve(&Problem::Sirpfl(single_vertex(3, Variant::CapSplit, Some(3)))).unwrap();
        assert_eq!(solved.schedule.total_cost(), int(5));
    }

    #[test]
    fn two_vertex_examples() {
        let inst = two_vertices(1, Variant::Uncap, None);
        let solved = solve(&Problem::Sirpfl(inst.clone())).unwrap();
        solved.schedule.check(&inst).unwrap();
        assert_eq!(solved.schedule.total_cost(), int(3));

        // Demand twice the capacity fails validation, so round directly.
        let inst = two_vertices(2, Variant::CapSplit, Some(1));
        let lp = lp::solve_lp(&lp::build_cssirpfl_lp(&inst).unwrap()).unwrap();
        let rounded = round_cssirpfl(&inst, &lp);
        rounded.schedule.check(&inst).unwrap();
        assert_eq!(rounded.schedule.total_cost(), int(5));
        assert_eq!(rounded.schedule.trip_count(), 2);
        assert!(matches!(solve(&Problem::Sirpfl(inst)), Err(SolveError::Invalid(_))));
    }

    #[test]
    fn csiap_unit_example_visits_both_days() {
        let iap = IapInstance {
            distance: int(1),
            horizon: 2,
            variant: Variant::CapSplit,
            capacity: Some(int(1)),
            demands: vec![IapDemand { day: 1, amount: int(1) }, IapDemand { day: 2, amount: int(1) }],
            holding: vec![vec![int(0)], vec![int(10), int(0)]],
        };
        let solved = solve(&Problem::Iap(iap.clone())).unwrap();
        solved.schedule.check(&iap).unwrap();
        assert_eq!(solved.schedule.total_cost(), int(2));
        assert_eq!(solved.plans[0].visit_days, BTreeSet::from([1, 2]));
    }

    #[test]
    fn gadget_is_packed_whole() {
        let g = make_partition_gadget(&[1, 2, 3, 4], int(7)).unwrap();
        let solved = solve(&Problem::Iap(g.clone())).unwrap();
        solved.schedule.check(&g).unwrap();
        let cost = solved.schedule.total_cost();
        assert!(cost >= int(14));
        assert!(cost <= solved.lp.unwrap().objective * int(6));
    }

    #[test]
    fn uncapacitated_iap_goes_to_the_exact_solver() {
        let iap = IapInstance {
            distance: int(4),
            horizon: 3,
            variant: Variant::Uncap,
            capacity: None,
            demands: (1..=3).map(|t| IapDemand { day: t, amount: int(1) }).collect(),
            holding: (1..=3).map(|t| (1..=t).map(|s| int((t - s) as i64)).collect()).collect(),
        };
        let solved = solve(&Problem::Iap(iap.clone())).unwrap();
        assert_eq!(solved.schedule.total_cost(), int(7));
        assert!(solved.lp.is_none());
    }
}
