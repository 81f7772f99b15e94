//! Half-mass days and the two visit rules.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::instance::Instance;
use crate::lp::{LpSolution, VarTag};
use crate::num::{half, Rat};

/// `masses[s - 1]` is the LP mass delivered on day `s` for a demand due on
/// day `masses.len()`. Returns the latest day whose suffix mass is at least ½.
pub fn latest_half_mass_day(masses: &[Rat]) -> usize {
    let threshold = half();
    let mut acc = Rat::zero();
    for s in (1..=masses.len()).rev() {
        acc += &masses[s - 1];
        if acc >= threshold {
            return s;
        }
    }
    panic!("demand carries LP mass {acc} < 1/2; the LP solution is not feasible");
}

/// `s*` for network demand `(v, t)`, from the assignment columns.
pub fn compute_s_star(lp: &LpSolution, inst: &Instance, v: usize, t: usize) -> usize {
    let masses: Vec<Rat> = (1..=t)
        .map(|s| {
            (0..inst.n)
                .map(|u| lp.value(&VarTag::Assign { facility: u, client: v, day: s, deadline: t }))
                .sum()
        })
        .collect();
    latest_half_mass_day(&masses)
}

/// `s*` for IAP demand item `j` due on day `t`.
pub fn compute_s_star_iap(lp: &LpSolution, j: usize, t: usize) -> usize {
    let masses: Vec<Rat> = (1..=t)
        .map(|s| lp.value(&VarTag::Deliver { day: s, demand: j }))
        .collect();
    latest_half_mass_day(&masses)
}

/// Input to a visit rule: one demand of the client.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanInput {
    /// Index of the demand in its instance.
    pub demand: usize,
    pub deadline: usize,
    pub s_star: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanItem {
    pub demand: usize,
    pub deadline: usize,
    pub s_star: usize,
    /// Day the demand is delivered.
    pub day: usize,
    pub anchor: bool,
}

/// Visit days of one client and the day each of its demands is served.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitPlan {
    pub client: usize,
    /// Ordered by deadline, then demand index.
    pub items: Vec<PlanItem>,
    pub visit_days: BTreeSet<usize>,
}

impl VisitPlan {
    fn from_items(client: usize, mut items: Vec<PlanItem>) -> Self {
        items.sort_by_key(|i| (i.deadline, i.demand));
        let visit_days = items.iter().filter(|i| i.anchor).map(|i| i.s_star).collect();
        VisitPlan { client, items, visit_days }
    }

    pub fn anchors(&self) -> impl Iterator<Item = &PlanItem> {
        self.items.iter().filter(|i| i.anchor)
    }

    /// Deadline → serving day. Only meaningful when deadlines are distinct.
    pub fn assignment(&self) -> BTreeMap<usize, usize> {
        self.items.iter().map(|i| (i.deadline, i.day)).collect()
    }

    pub fn s_star(&self) -> BTreeMap<usize, usize> {
        self.items.iter().map(|i| (i.deadline, i.s_star)).collect()
    }

    /// Demands served on each visit day.
    pub fn served_on(&self, day: usize) -> impl Iterator<Item = &PlanItem> {
        self.items.iter().filter(move |i| i.day == day)
    }

    /// `[s*, t]` intervals of the anchors are pairwise disjoint.
    pub fn anchors_disjoint(&self) -> bool {
        let mut intervals: Vec<(usize, usize)> = self.anchors().map(|a| (a.s_star, a.deadline)).collect();
        intervals.sort_unstable();
        intervals.windows(2).all(|w| w[0].1 < w[1].0)
    }

    /// Every demand is served on a visit day in `[s*, t]`, and the visit days
    /// are exactly the anchors' half-mass days.
    pub fn is_consistent(&self) -> bool {
        let days: BTreeSet<usize> = self.anchors().map(|a| a.s_star).collect();
        days == self.visit_days
            && self
                .items
                .iter()
                .all(|i| self.visit_days.contains(&i.day) && i.s_star <= i.day && i.day <= i.deadline)
    }
}

/// Backward sweep: the latest unserved demand becomes an anchor unless it is
/// due no earlier than the current anchor's half-mass day.
pub fn plan_visits_uncapacitated(client: usize, inputs: &[PlanInput]) -> VisitPlan {
    let mut order = inputs.to_vec();
    order.sort_by(|a, b| b.deadline.cmp(&a.deadline).then(a.demand.cmp(&b.demand)));
    let mut current: Option<usize> = None;
    let mut items = Vec::with_capacity(order.len());
    for p in order {
        let (day, anchor) = match current {
            Some(s) if p.deadline >= s => (s, false),
            _ => {
                current = Some(p.s_star);
                (p.s_star, true)
            }
        };
        items.push(PlanItem { demand: p.demand, deadline: p.deadline, s_star: p.s_star, day, anchor });
    }
    VisitPlan::from_items(client, items)
}

/// Repeatedly anchors the unserved demand with the latest half-mass day
/// (ties: latest deadline, then lowest index) and serves on that day every
/// unserved demand due no earlier.
pub fn plan_visits_capacitated(client: usize, inputs: &[PlanInput]) -> VisitPlan {
    let mut open: Vec<PlanInput> = inputs.to_vec();
    let mut items = Vec::with_capacity(open.len());
    while let Some(anchor) = open
        .iter()
        .copied()
        .max_by(|a, b| {
            (a.s_star, a.deadline)
                .cmp(&(b.s_star, b.deadline))
                .then(b.demand.cmp(&a.demand))
        })
    {
        let day = anchor.s_star;
        open.retain(|p| {
            if p.deadline >= day {
                items.push(PlanItem {
                    demand: p.demand,
                    deadline: p.deadline,
                    s_star: p.s_star,
                    day,
                    anchor: p.demand == anchor.demand,
                });
                false
            } else {
                true
            }
        });
    }
    VisitPlan::from_items(client, items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::frac;

    fn inputs(pairs: &[(usize, usize)]) -> Vec<PlanInput> {
        pairs
            .iter()
            .enumerate()
            .map(|(i, &(t, s))| PlanInput { demand: i, deadline: t, s_star: s })
            .collect()
    }

    #[test]
    fn half_mass_day() {
        assert_eq!(latest_half_mass_day(&[frac(2, 5), frac(3, 10), frac(3, 10)]), 2);
        assert_eq!(latest_half_mass_day(&[frac(0, 1), frac(0, 1), frac(1, 1)]), 3);
        assert_eq!(latest_half_mass_day(&[frac(1, 2), frac(0, 1), frac(0, 1)]), 1);
    }

    #[test]
    #[should_panic]
    fn half_mass_requires_feasible_mass() {
        latest_half_mass_day(&[frac(1, 5), frac(1, 5)]);
    }

    #[test]
    fn uncapacitated_separate_days() {
        let plan = plan_visits_uncapacitated(0, &inputs(&[(1, 1), (2, 2), (3, 3)]));
        assert_eq!(plan.anchors().count(), 3);
        assert_eq!(plan.assignment(), BTreeMap::from([(1, 1), (2, 2), (3, 3)]));
        assert!(plan.anchors_disjoint() && plan.is_consistent());
    }

    #[test]
    fn uncapacitated_absorbs_into_anchor() {
        let plan = plan_visits_uncapacitated(0, &inputs(&[(2, 1), (3, 2)]));
        let anchors: Vec<usize> = plan.anchors().map(|a| a.deadline).collect();
        assert_eq!(anchors, vec![3]);
        assert_eq!(plan.assignment(), BTreeMap::from([(2, 2), (3, 2)]));
        assert_eq!(plan.visit_days, BTreeSet::from([2]));
    }

    #[test]
    fn capacitated_single_demand() {
        let plan = plan_visits_capacitated(4, &inputs(&[(1, 1)]));
        assert_eq!(plan.visit_days, BTreeSet::from([1]));
        assert_eq!(plan.client, 4);
    }

    #[test]
    fn capacitated_tie_prefers_latest_deadline() {
        let plan = plan_visits_capacitated(0, &inputs(&[(1, 1), (2, 2), (3, 2)]));
        let anchors: Vec<usize> = plan.anchors().map(|a| a.deadline).collect();
        assert_eq!(anchors, vec![1, 3]);
        assert_eq!(plan.assignment(), BTreeMap::from([(1, 1), (2, 2), (3, 2)]));
        assert!(plan.anchors_disjoint() && plan.is_consistent());
    }
}
