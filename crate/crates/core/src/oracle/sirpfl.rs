//! Exact SIRPFL by facility-subset enumeration: once the open set is fixed,
//! each client faces its own IAP against the nearest open facility.

use std::collections::{BTreeSet, HashMap};

use super::{exact_iap, OracleError, OracleMethod, OracleResult};
use crate::instance::Instance;
use crate::num::Rat;
use crate::schedule::Schedule;

pub const SIRPFL_MAX_VERTICES: usize = 5;
pub const SIRPFL_MAX_HORIZON: usize = 4;
pub const SIRPFL_MAX_DEMANDS: usize = 8;

pub fn exact_sirpfl(inst: &Instance) -> Result<OracleResult, OracleError> {
    if inst.n > SIRPFL_MAX_VERTICES || inst.horizon > SIRPFL_MAX_HORIZON || inst.demands.len() > SIRPFL_MAX_DEMANDS {
        return Err(OracleError::TooLarge(format!(
            "n = {}, T = {}, |D| = {}; limits are {SIRPFL_MAX_VERTICES}, {SIRPFL_MAX_HORIZON}, {SIRPFL_MAX_DEMANDS}",
            inst.n,
            inst.horizon,
            inst.demands.len()
        )));
    }
    let clients = inst.clients();
    let mut cache: HashMap<(usize, Rat), OracleResult> = HashMap::new();
    let mut best: Option<(Rat, BTreeSet<usize>, Vec<(usize, usize)>)> = None;

    for mask in 1usize..(1 << inst.n) {
        let open: BTreeSet<usize> = (0..inst.n).filter(|u| mask >> u & 1 == 1).collect();
        let mut cost: Rat = open.iter().map(|&u| inst.facility_costs[u].clone()).sum();
        let mut served_from = Vec::with_capacity(clients.len());
        for &v in &clients {
            let u = *open
                .iter()
                .min_by(|&&a, &&b| inst.distance(a, v).cmp(inst.distance(b, v)).then(a.cmp(&b)))
                .expect("nonempty open set");
            let w = inst.distance(u, v).clone();
            if !cache.contains_key(&(v, w.clone())) {
                let result = exact_iap(&inst.client_iap(v, w.clone()))?;
                cache.insert((v, w.clone()), result);
            }
            cost += &cache[&(v, w)].optimum;
            served_from.push((v, u));
        }
        if best.as_ref().map_or(true, |(b, _, _)| cost < *b) {
            best = Some((cost, open, served_from));
        }
    }

    let (optimum, opened, served_from) = best.expect("at least one vertex");
    let mut deliveries = Vec::new();
    for (v, u) in served_from {
        let ids: Vec<usize> = inst
            .demands
            .iter()
            .enumerate()
            .filter(|(_, d)| d.vertex == v)
            .map(|(i, _)| i)
            .collect();
        let sub = &cache[&(v, inst.distance(u, v).clone())];
        deliveries.extend(sub.witness.relabel_iap(u, v, &ids));
    }
    let witness = Schedule::new(opened, deliveries, inst);
    debug_assert_eq!(witness.total_cost(), optimum);
    Ok(OracleResult { optimum, witness, method: OracleMethod::FacilityEnum })
}
