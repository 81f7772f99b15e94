//! Builders for the three relaxations.

use num_traits::{One, Zero};
use thiserror::Error;

use super::{Family, LpModel, Relation, VarTag};
use crate::instance::{IapInstance, Instance, Variant};
use crate::num::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("expected a {expected} instance, got {found}")]
    Variant { expected: &'static str, found: Variant },
    #[error("capacitated relaxation needs a vehicle capacity")]
    MissingCapacity,
}

/// Column count of the uncapacitated relaxation:
/// `n + n²T + n·Σt + Σt` over the demand deadlines `t`.
pub fn usirpfl_variable_count(n: usize, horizon: usize, deadlines: impl IntoIterator<Item = usize>) -> usize {
    let sum_t: usize = deadlines.into_iter().sum();
    n + n * n * horizon + n * sum_t + sum_t
}

fn one() -> Rat {
    Rat::one()
}

fn minus_one() -> Rat {
    -Rat::one()
}

fn col(m: &LpModel, tag: VarTag) -> usize {
    m.var(&tag).expect("column registered before use")
}

/// Columns and rows shared by both network relaxations.
fn network_core(inst: &Instance, facility_edge_rows: bool) -> LpModel {
    let mut m = LpModel::new();
    let n = inst.n;
    let horizon = inst.horizon;

    for u in 0..n {
        m.add_var(VarTag::Facility(u), inst.facility_costs[u].clone());
    }
    for u in 0..n {
        for v in 0..n {
            for s in 1..=horizon {
                let tag = VarTag::Edge { facility: u, client: v, day: s };
                m.add_var(tag, inst.weights[u][v].clone());
            }
        }
    }
    for d in &inst.demands {
        for u in 0..n {
            for s in 1..=d.day {
                let tag = VarTag::Assign { facility: u, client: d.vertex, day: s, deadline: d.day };
                m.add_var(tag, Rat::zero());
            }
        }
    }
    for d in &inst.demands {
        for s in 1..=d.day {
            let tag = VarTag::Serve { client: d.vertex, day: s, deadline: d.day };
            m.add_var(tag, d.aggregate_holding(s));
        }
    }

    for d in &inst.demands {
        let (v, t) = (d.vertex, d.day);
        let terms = (1..=t)
            .map(|s| (col(&m, VarTag::Serve { client: v, day: s, deadline: t }), one()))
            .collect();
        m.add_constraint(terms, Relation::Ge, one(), Family::Service);
    }
    for d in &inst.demands {
        let (v, t) = (d.vertex, d.day);
        for s in 1..=t {
            let mut terms: Vec<(usize, Rat)> = (0..n)
                .map(|u| (col(&m, VarTag::Assign { facility: u, client: v, day: s, deadline: t }), one()))
                .collect();
            terms.push((col(&m, VarTag::Serve { client: v, day: s, deadline: t }), minus_one()));
            m.add_constraint(terms, Relation::Ge, Rat::zero(), Family::Connection);
        }
    }
    for d in &inst.demands {
        let (v, t) = (d.vertex, d.day);
        for u in 0..n {
            let mut terms = vec![(col(&m, VarTag::Facility(u)), one())];
            terms.extend((1..=t).map(|s| {
                (col(&m, VarTag::Assign { facility: u, client: v, day: s, deadline: t }), minus_one())
            }));
            m.add_constraint(terms, Relation::Ge, Rat::zero(), Family::FacilityAssign);
        }
    }
    for d in &inst.demands {
        let (v, t) = (d.vertex, d.day);
        for u in 0..n {
            for s in 1..=t {
                let terms = vec![
                    (col(&m, VarTag::Edge { facility: u, client: v, day: s }), one()),
                    (col(&m, VarTag::Assign { facility: u, client: v, day: s, deadline: t }), minus_one()),
                ];
                m.add_constraint(terms, Relation::Ge, Rat::zero(), Family::EdgeAssign);
            }
        }
    }
    if facility_edge_rows {
        for u in 0..n {
            for v in 0..n {
                for s in 1..=horizon {
                    let terms = vec![
                        (col(&m, VarTag::Facility(u)), one()),
                        (col(&m, VarTag::Edge { facility: u, client: v, day: s }), minus_one()),
                    ];
                    m.add_constraint(terms, Relation::Ge, Rat::zero(), Family::FacilityEdge);
                }
            }
        }
    }
    m
}

/// Relaxation of uncapacitated SIRPFL, including the in-order service rows.
pub fn build_usirpfl_lp(inst: &Instance) -> Result<LpModel, BuildError> {
    if inst.variant != Variant::Uncap {
        return Err(BuildError::Variant {
            expected: "UNCAP",
            found: inst.variant,
        });
    }
    let mut m = network_core(inst, true);
    let n = inst.n;
    for v in inst.clients() {
        let days: Vec<usize> = inst.client_demands(v).map(|d| d.day).collect();
        for (i, &early) in days.iter().enumerate() {
            for &late in &days[i + 1..] {
                for start in 1..=early {
                    let mut terms = Vec::new();
                    for u in 0..n {
                        for s in start..=late {
                            let tag = VarTag::Assign { facility: u, client: v, day: s, deadline: late };
                            terms.push((col(&m, tag), one()));
                        }
                        for s in start..=early {
                            let tag = VarTag::Assign { facility: u, client: v, day: s, deadline: early };
                            terms.push((col(&m, tag), minus_one()));
                        }
                    }
                    m.add_constraint(terms, Relation::Ge, Rat::zero(), Family::ServiceInterval);
                }
            }
        }
    }
    Ok(m)
}

/// Relaxation of capacitated splittable SIRPFL (also used for the
/// unsplittable variant). Edge columns count trips, so the rows tying edges
/// to facility opening are left out: they would cap trips at the opening
/// level and cut off integral multi-trip schedules.
pub fn build_cssirpfl_lp(inst: &Instance) -> Result<LpModel, BuildError> {
    capacitated_network(inst, false)
}

fn capacitated_network(inst: &Instance, facility_edge_rows: bool) -> Result<LpModel, BuildError> {
    if !inst.variant.is_capacitated() {
        return Err(BuildError::Variant {
            expected: "CAP_SPLIT or CAP_UNSPLIT",
            found: inst.variant,
        });
    }
    let cap = inst.capacity.as_ref().ok_or(BuildError::MissingCapacity)?;
    let mut m = network_core(inst, facility_edge_rows);
    let n = inst.n;
    for v in inst.clients() {
        let demands: Vec<_> = inst.client_demands(v).collect();
        let last = demands.iter().map(|d| d.day).max().unwrap_or(0);
        for s in 1..=last {
            let due: Vec<_> = demands.iter().filter(|d| d.day >= s).collect();
            let mut terms: Vec<(usize, Rat)> = (0..n)
                .map(|u| (col(&m, VarTag::Edge { facility: u, client: v, day: s }), one()))
                .collect();
            for d in &due {
                let tag = VarTag::Serve { client: v, day: s, deadline: d.day };
                terms.push((col(&m, tag), -(&d.amount / cap)));
            }
            m.add_constraint(terms, Relation::Ge, Rat::zero(), Family::ClientCapacity);

            for u in 0..n {
                let mut terms = vec![(col(&m, VarTag::Edge { facility: u, client: v, day: s }), one())];
                for d in &due {
                    let tag = VarTag::Assign { facility: u, client: v, day: s, deadline: d.day };
                    terms.push((col(&m, tag), -(&d.amount / cap)));
                }
                m.add_constraint(terms, Relation::Ge, Rat::zero(), Family::EdgeCapacity);
            }
        }
    }
    Ok(m)
}

/// Relaxation of capacitated splittable IAP. Columns are indexed by demand
/// item, so several items may share a deadline.
pub fn build_csiap_lp(iap: &IapInstance) -> Result<LpModel, BuildError> {
    if !iap.variant.is_capacitated() {
        return Err(BuildError::Variant {
            expected: "CAP_SPLIT or CAP_UNSPLIT",
            found: iap.variant,
        });
    }
    let cap = iap.capacity.as_ref().ok_or(BuildError::MissingCapacity)?;
    let mut m = LpModel::new();
    for s in 1..=iap.horizon {
        m.add_var(VarTag::Trips(s), iap.distance.clone());
    }
    for (j, d) in iap.demands.iter().enumerate() {
        for s in 1..=d.day {
            let cost = iap.unit_holding(s, d.day) * &d.amount;
            m.add_var(VarTag::Deliver { day: s, demand: j }, cost);
        }
    }
    for (j, d) in iap.demands.iter().enumerate() {
        let terms = (1..=d.day)
            .map(|s| (col(&m, VarTag::Deliver { day: s, demand: j }), one()))
            .collect();
        m.add_constraint(terms, Relation::Ge, one(), Family::Service);
    }
    for s in 1..=iap.horizon {
        let due: Vec<(usize, &Rat)> = iap
            .demands
            .iter()
            .enumerate()
            .filter(|(_, d)| d.day >= s)
            .map(|(j, d)| (j, &d.amount))
            .collect();
        if due.is_empty() {
            continue;
        }
        let mut terms = vec![(col(&m, VarTag::Trips(s)), one())];
        for (j, amount) in due {
            terms.push((col(&m, VarTag::Deliver { day: s, demand: j }), -(amount / cap)));
        }
        m.add_constraint(terms, Relation::Ge, Rat::zero(), Family::TripCapacity);
    }
    for (j, d) in iap.demands.iter().enumerate() {
        for s in 1..=d.day {
            let terms = vec![
                (col(&m, VarTag::Trips(s)), one()),
                (col(&m, VarTag::Deliver { day: s, demand: j }), minus_one()),
            ];
            m.add_constraint(terms, Relation::Ge, Rat::zero(), Family::TripPresence);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_random, make_partition_gadget, DemandPoint, GenParams, IapDemand};
    use crate::lp::solve_lp;
    use crate::num::int;

    pub(crate) fn single_vertex(f: i64, amount: i64, variant: Variant, cap: Option<i64>) -> Instance {
        Instance::new(
            1,
            variant,
            cap.map(int),
            vec![vec![int(0)]],
            vec![int(f)],
            vec![DemandPoint { vertex: 0, day: 1, amount: int(amount), holding: vec![int(0)] }],
        )
    }

    pub(crate) fn two_vertices(amount: i64, variant: Variant, cap: Option<i64>) -> Instance {
        Instance::new(
            1,
            variant,
            cap.map(int),
            vec![vec![int(0), int(2)], vec![int(2), int(0)]],
            vec![int(1), int(100)],
            vec![DemandPoint { vertex: 1, day: 1, amount: int(amount), holding: vec![int(0)] }],
        )
    }

    fn unit_iap() -> IapInstance {
        IapInstance {
            distance: int(1),
            horizon: 2,
            variant: Variant::CapSplit,
            capacity: Some(int(1)),
            demands: vec![IapDemand { day: 1, amount: int(1) }, IapDemand { day: 2, amount: int(1) }],
            holding: vec![vec![int(0)], vec![int(10), int(0)]],
        }
    }

    #[test]
    fn single_vertex_forces_opening() {
        let lp = solve_lp(&build_usirpfl_lp(&single_vertex(5, 1, Variant::Uncap, None)).unwrap()).unwrap();
        assert_eq!(lp.objective, int(5));
        assert_eq!(lp.facility_cost, int(5));
    }

    #[test]
    fn two_vertex_uncapacitated_optimum() {
        let lp = solve_lp(&build_usirpfl_lp(&two_vertices(1, Variant::Uncap, None)).unwrap()).unwrap();
        assert_eq!(lp.objective, int(3));
        assert_eq!(&lp.facility_cost + &lp.routing_cost + &lp.holding_cost, lp.objective);
    }

    #[test]
    fn variable_and_row_counts_match_closed_form() {
        let params = GenParams { n: 4, horizon: 4, demand_density: 0.6, ..GenParams::default() };
        let inst = generate_random(&params, 3).unwrap();
        let m = build_usirpfl_lp(&inst).unwrap();
        let n = inst.n;
        let sum_t: usize = inst.demands.iter().map(|d| d.day).sum();
        let count = usirpfl_variable_count(n, inst.horizon, inst.demands.iter().map(|d| d.day));
        assert_eq!(m.num_vars(), count);
        assert_eq!(count, n + n * n * inst.horizon + n * sum_t + sum_t);
        assert_eq!(m.family_count(Family::Service), inst.demands.len());
        assert_eq!(m.family_count(Family::Connection), sum_t);
        assert_eq!(m.family_count(Family::FacilityAssign), n * inst.demands.len());
        assert_eq!(m.family_count(Family::EdgeAssign), n * sum_t);
        assert_eq!(m.family_count(Family::FacilityEdge), n * n * inst.horizon);
        let intervals: usize = inst
            .clients()
            .into_iter()
            .map(|v| {
                let days: Vec<usize> = inst.client_demands(v).map(|d| d.day).collect();
                (0..days.len()).map(|i| days[i] * (days.len() - i - 1)).sum::<usize>()
            })
            .sum();
        assert_eq!(m.family_count(Family::ServiceInterval), intervals);
    }

    #[test]
    fn rejects_wrong_variants() {
        let cap = single_vertex(5, 1, Variant::CapSplit, Some(1));
        assert!(build_usirpfl_lp(&cap).is_err());
        assert!(build_cssirpfl_lp(&single_vertex(5, 1, Variant::Uncap, None)).is_err());
        let mut iap = unit_iap();
        iap.capacity = None;
        assert_eq!(build_csiap_lp(&iap).unwrap_err(), BuildError::MissingCapacity);
    }

    #[test]
    fn csiap_unit_example() {
        let lp = solve_lp(&build_csiap_lp(&unit_iap()).unwrap()).unwrap();
        assert_eq!(lp.objective, int(2));
        assert_eq!(lp.routing_cost, int(2));
        assert_eq!(lp.holding_cost, int(0));
    }

    #[test]
    fn csiap_full_load_single_demand() {
        let iap = IapInstance {
            distance: int(3),
            horizon: 1,
            variant: Variant::CapSplit,
            capacity: Some(int(4)),
            demands: vec![IapDemand { day: 1, amount: int(4) }],
            holding: vec![vec![int(0)]],
        };
        assert_eq!(solve_lp(&build_csiap_lp(&iap).unwrap()).unwrap().objective, int(3));
    }

    #[test]
    fn partition_gadget_has_fractional_gap() {
        let g = make_partition_gadget(&[2, 2, 2], int(1)).unwrap();
        let lp = solve_lp(&build_csiap_lp(&g).unwrap()).unwrap();
        assert_eq!(lp.objective, int(2));
    }

    #[test]
    fn cssirpfl_small_examples() {
        let lp = solve_lp(&build_cssirpfl_lp(&single_vertex(5, 3, Variant::CapSplit, Some(3))).unwrap()).unwrap();
        assert_eq!(lp.objective, int(5));
        let lp = solve_lp(&build_cssirpfl_lp(&two_vertices(2, Variant::CapSplit, Some(1))).unwrap()).unwrap();
        assert_eq!(lp.objective, int(5));
        assert_eq!(lp.routing_cost, int(4));
    }

    #[test]
    fn opening_cap_on_edges_would_cut_off_two_trips() {
        let inst = two_vertices(2, Variant::CapSplit, Some(1));
        let capped = solve_lp(&capacitated_network(&inst, true).unwrap()).unwrap();
        assert_eq!(capped.objective, int(6));
    }
}
