//! Exact IAP solvers: lot-sizing DP, visit-set enumeration, trip-vector
//! enumeration (splittable) and assignment-plus-packing DP (unsplittable).

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::packing::{bins_by_subset, packing_for};
use super::{OracleError, OracleMethod, OracleResult};
use crate::instance::{IapInstance, Variant, IAP_CLIENT, IAP_DEPOT};
use crate::lp::{solve_lp, Family, LpModel, Relation, VarTag};
use crate::num::{ceil_usize, int, Rat};
use crate::rounding::fill_trips;
use crate::schedule::{Delivery, Parcel, Schedule, Trip};

pub const IAP_MAX_HORIZON: usize = 6;
pub const UNSPLIT_MAX_ITEMS: usize = 12;
const VISIT_ENUM_MAX_DAYS: usize = 16;
const MAX_TRIP_VECTORS: usize = 200_000;

fn witness(iap: &IapInstance, deliveries: Vec<Delivery>) -> Schedule {
    Schedule::new(BTreeSet::from([IAP_DEPOT]), deliveries, iap)
}

fn whole(iap: &IapInstance, j: usize) -> Parcel {
    Parcel { demand: j, deadline: iap.demands[j].day, amount: iap.demands[j].amount.clone() }
}

fn one_trip(iap: &IapInstance, day: usize, items: impl IntoIterator<Item = usize>) -> Delivery {
    Delivery {
        client: IAP_CLIENT,
        day,
        facility: IAP_DEPOT,
        trips: vec![Trip { parcels: items.into_iter().map(|j| whole(iap, j)).collect() }],
    }
}

fn require_uncap(iap: &IapInstance) -> Result<(), OracleError> {
    if iap.variant == Variant::Uncap {
        Ok(())
    } else {
        Err(OracleError::Unsupported(format!(
            "the lot-sizing solvers need an uncapacitated instance, got {}",
            iap.variant
        )))
    }
}

/// Uncapacitated IAP by the lot-sizing recurrence over demand items in
/// deadline order: each visit serves a consecutive block of items, on the
/// deadline of the block's first item.
pub fn ww_dp(iap: &IapInstance) -> Result<OracleResult, OracleError> {
    require_uncap(iap)?;
    let items = &iap.demands;
    let m = items.len();
    let mut best: Vec<Option<(Rat, usize)>> = vec![None; m + 1];
    best[0] = Some((Rat::zero(), 0));
    for j in 1..=m {
        for i in 0..j {
            let day = items[i].day;
            let mut cost = best[i].as_ref().expect("filled").0.clone() + &iap.distance;
            for k in i..j {
                cost += &items[k].amount * iap.unit_holding(day, items[k].day);
            }
            if best[j].as_ref().map_or(true, |(b, _)| cost < *b) {
                best[j] = Some((cost, i));
            }
        }
    }
    let mut deliveries = Vec::new();
    let mut j = m;
    while j > 0 {
        let i = best[j].as_ref().expect("filled").1;
        deliveries.push(one_trip(iap, items[i].day, i..j));
        j = i;
    }
    deliveries.reverse();
    let schedule = witness(iap, deliveries);
    let optimum = best[m].take().expect("filled").0;
    debug_assert_eq!(schedule.total_cost(), optimum);
    Ok(OracleResult { optimum, witness: schedule, method: OracleMethod::WwDp })
}

/// Uncapacitated IAP by trying every set of visit days drawn from the
/// demand deadlines; each demand rides with the latest visit before it.
pub fn visit_enum(iap: &IapInstance) -> Result<OracleResult, OracleError> {
    require_uncap(iap)?;
    let days: Vec<usize> = iap.demands.iter().map(|d| d.day).collect::<BTreeSet<_>>().into_iter().collect();
    if days.len() > VISIT_ENUM_MAX_DAYS {
        return Err(OracleError::TooLarge(format!(
            "{} distinct demand days, limit {VISIT_ENUM_MAX_DAYS}",
            days.len()
        )));
    }
    let mut best: Option<(Rat, Vec<usize>)> = None;
    for mask in 0usize..(1 << days.len()) {
        let visits: Vec<usize> = (0..days.len()).filter(|i| mask >> i & 1 == 1).map(|i| days[i]).collect();
        let mut cost = &iap.distance * int(visits.len() as i64);
        let mut feasible = true;
        for d in &iap.demands {
            match visits.iter().rev().find(|&&s| s <= d.day) {
                Some(&s) => cost += &d.amount * iap.unit_holding(s, d.day),
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if feasible && best.as_ref().map_or(true, |(b, _)| cost < *b) {
            best = Some((cost, visits));
        }
    }
    let (optimum, visits) = best.unwrap_or((Rat::zero(), Vec::new()));
    let mut served: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (j, d) in iap.demands.iter().enumerate() {
        let s = *visits.iter().rev().find(|&&s| s <= d.day).expect("feasible visit set");
        served.entry(s).or_default().push(j);
    }
    let deliveries = served.into_iter().map(|(s, js)| one_trip(iap, s, js)).collect();
    Ok(OracleResult { optimum, witness: witness(iap, deliveries), method: OracleMethod::VisitEnum })
}

/// Exact optimum of an IAP of any variant.
pub fn exact_iap(iap: &IapInstance) -> Result<OracleResult, OracleError> {
    match iap.variant {
        Variant::Uncap => ww_dp(iap),
        Variant::CapSplit => exact_split(iap),
        Variant::CapUnsplit => exact_unsplit(iap),
    }
}

fn capacity(iap: &IapInstance) -> Result<&Rat, OracleError> {
    iap.capacity
        .as_ref()
        .ok_or_else(|| OracleError::Unsupported("capacitated instance without a capacity".into()))
}

fn gate_horizon(iap: &IapInstance) -> Result<(), OracleError> {
    if iap.horizon > IAP_MAX_HORIZON {
        return Err(OracleError::TooLarge(format!(
            "horizon {} exceeds {IAP_MAX_HORIZON}",
            iap.horizon
        )));
    }
    Ok(())
}

/// Splittable: enumerate trips per day, cheapest trip totals first, and
/// solve the fractional assignment for each vector as a transportation LP.
fn exact_split(iap: &IapInstance) -> Result<OracleResult, OracleError> {
    gate_horizon(iap)?;
    let cap = capacity(iap)?;
    let horizon = iap.horizon;
    let total = iap.total_demand();
    let budget = ceil_usize(&(&total / cap)) + horizon;
    // More trips on day s than the load still due on or after s never help.
    let limits: Vec<usize> = (1..=horizon)
        .map(|s| {
            let due: Rat = iap.demands.iter().filter(|d| d.day >= s).map(|d| d.amount.clone()).sum();
            ceil_usize(&(due / cap)).min(budget)
        })
        .collect();
    let count: usize = limits.iter().map(|l| l + 1).product();
    if count > MAX_TRIP_VECTORS {
        return Err(OracleError::TooLarge(format!("{count} trip vectors, limit {MAX_TRIP_VECTORS}")));
    }

    let mut vectors: Vec<Vec<usize>> = vec![Vec::new()];
    for &limit in &limits {
        vectors = vectors
            .into_iter()
            .flat_map(|v| {
                (0..=limit).map(move |k| {
                    let mut next = v.clone();
                    next.push(k);
                    next
                })
            })
            .collect();
    }
    vectors.retain(|k| k.iter().sum::<usize>() <= budget);
    vectors.sort_by_key(|k| (k.iter().sum::<usize>(), std::cmp::Reverse(k.clone())));

    let mut best: Option<(Rat, Schedule)> = None;
    for k in vectors {
        let trips: usize = k.iter().sum();
        let floor = &iap.distance * int(trips as i64);
        if best.as_ref().is_some_and(|(b, _)| floor >= *b) {
            break;
        }
        if !prefix_feasible(iap, cap, &k) {
            continue;
        }
        let schedule = transport(iap, cap, &k)?;
        let cost = schedule.total_cost();
        if best.as_ref().map_or(true, |(b, _)| cost < *b) {
            best = Some((cost, schedule));
        }
    }
    let (optimum, witness) = match best {
        Some(b) => b,
        None => (Rat::zero(), witness(iap, Vec::new())),
    };
    Ok(OracleResult { optimum, witness, method: OracleMethod::TripEnum })
}

/// Demand due by each day fits in the trips made up to that day.
fn prefix_feasible(iap: &IapInstance, cap: &Rat, k: &[usize]) -> bool {
    let mut supply = Rat::zero();
    for t in 1..=iap.horizon {
        supply += cap * int(k[t - 1] as i64);
        let due: Rat = iap.demands.iter().filter(|d| d.day <= t).map(|d| d.amount.clone()).sum();
        if due > supply {
            return false;
        }
    }
    true
}

fn transport(iap: &IapInstance, cap: &Rat, k: &[usize]) -> Result<Schedule, OracleError> {
    let mut m = LpModel::new();
    for (j, d) in iap.demands.iter().enumerate() {
        for s in 1..=d.day {
            if k[s - 1] > 0 {
                m.add_var(VarTag::Deliver { day: s, demand: j }, iap.unit_holding(s, d.day) * &d.amount);
            }
        }
    }
    for (j, d) in iap.demands.iter().enumerate() {
        let terms = (1..=d.day)
            .filter_map(|s| m.var(&VarTag::Deliver { day: s, demand: j }).map(|c| (c, int(1))))
            .collect();
        m.add_constraint(terms, Relation::Eq, int(1), Family::Service);
    }
    for s in 1..=iap.horizon {
        let terms: Vec<(usize, Rat)> = iap
            .demands
            .iter()
            .enumerate()
            .filter_map(|(j, d)| m.var(&VarTag::Deliver { day: s, demand: j }).map(|c| (c, d.amount.clone())))
            .collect();
        if !terms.is_empty() {
            m.add_constraint(terms, Relation::Le, cap * int(k[s - 1] as i64), Family::Supply);
        }
    }
    let lp = solve_lp(&m)?;
    let mut deliveries = Vec::new();
    for s in 1..=iap.horizon {
        let parcels: Vec<Parcel> = iap
            .demands
            .iter()
            .enumerate()
            .filter_map(|(j, d)| {
                let x = lp.value(&VarTag::Deliver { day: s, demand: j });
                (!x.is_zero()).then(|| Parcel { demand: j, deadline: d.day, amount: x * &d.amount })
            })
            .collect();
        if !parcels.is_empty() {
            deliveries.push(Delivery {
                client: IAP_CLIENT,
                day: s,
                facility: IAP_DEPOT,
                trips: fill_trips(parcels, Some(cap)),
            });
        }
    }
    Ok(witness(iap, deliveries))
}

/// Unsplittable: dynamic program over days whose state is the set of items
/// served on later days; each day pays for an optimal bin packing of the
/// items it serves.
fn exact_unsplit(iap: &IapInstance) -> Result<OracleResult, OracleError> {
    gate_horizon(iap)?;
    let cap = capacity(iap)?.clone();
    let m = iap.demands.len();
    if m > UNSPLIT_MAX_ITEMS {
        return Err(OracleError::TooLarge(format!("{m} demand items, limit {UNSPLIT_MAX_ITEMS}")));
    }
    if iap.demands.iter().any(|d| d.amount > cap) {
        return Err(OracleError::Unsupported("a demand exceeds the vehicle capacity".into()));
    }
    let sizes: Vec<Rat> = iap.demands.iter().map(|d| d.amount.clone()).collect();
    let bins = bins_by_subset(&sizes, &cap);
    let full = (1usize << m) - 1;
    let horizon = iap.horizon;

    // day_cost[s][mask]: cheapest way to serve exactly `mask` on day s, for
    // masks whose deadlines all allow day s.
    let day_cost: Vec<Vec<Rat>> = (0..=horizon)
        .map(|s| {
            (0..=full)
                .map(|mask| {
                    let mut c = &iap.distance * int(bins[mask] as i64);
                    for j in 0..m {
                        if mask >> j & 1 == 1 && s >= 1 && iap.demands[j].day >= s {
                            c += &sizes[j] * iap.unit_holding(s, iap.demands[j].day);
                        }
                    }
                    c
                })
                .collect()
        })
        .collect();

    // After processing day s, value[done] is the cheapest way to serve the
    // items outside `done` on days 1..=s; with no days left, everything must
    // already be served.
    let mut value: Vec<Option<Rat>> = vec![None; full + 1];
    let mut choice: Vec<Vec<usize>> = vec![vec![0; full + 1]; horizon + 1];
    value[full] = Some(Rat::zero());
    for s in 1..=horizon {
        let eligible: usize = (0..m).filter(|&j| iap.demands[j].day >= s).fold(0, |a, j| a | 1 << j);
        let mut next: Vec<Option<Rat>> = vec![None; full + 1];
        for done in 0..=full {
            let open = eligible & !done;
            let mut sub = open;
            loop {
                if let Some(rest) = &value[done | sub] {
                    let c = if sub == 0 { rest.clone() } else { rest + &day_cost[s][sub] };
                    if next[done].as_ref().map_or(true, |b| c < *b) {
                        next[done] = Some(c);
                        choice[s][done] = sub;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & open;
            }
        }
        value = next;
    }
    let optimum = value[0].clone().expect("serving everything on its deadline is feasible");

    let mut deliveries = Vec::new();
    let mut done = 0usize;
    for s in (1..=horizon).rev() {
        let sub = choice[s][done];
        if sub != 0 {
            let packing = packing_for(&sizes, &cap, &bins, sub);
            let trips = packing
                .into_iter()
                .map(|bin| Trip { parcels: bin.into_iter().map(|j| whole(iap, j)).collect() })
                .collect();
            deliveries.push(Delivery { client: IAP_CLIENT, day: s, facility: IAP_DEPOT, trips });
        }
        done |= sub;
    }
    deliveries.reverse();
    let schedule = witness(iap, deliveries);
    debug_assert_eq!(schedule.total_cost(), optimum);
    Ok(OracleResult { optimum, witness: schedule, method: OracleMethod::PackEnum })
}
