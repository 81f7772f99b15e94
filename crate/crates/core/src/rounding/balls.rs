//! Balls around clients and the greedy disjoint selection that decides which
//! facilities open.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::visits::VisitPlan;
use crate::instance::Instance;
use crate::lp::{LpSolution, VarTag};
use crate::num::{frac, int, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub client: usize,
    /// `W_{v,t}` per anchor deadline.
    pub anchor_weights: BTreeMap<usize, Rat>,
    /// `W_v`, the minimum over anchors; the ball radius is `4 W_v`.
    pub seed: Rat,
    pub members: BTreeSet<usize>,
    /// Cheapest vertex of the ball, lowest id on ties.
    pub cheapest: usize,
}

impl Ball {
    pub fn radius(&self) -> Rat {
        &self.seed * int(4)
    }

    /// LP opening mass inside the ball.
    pub fn mass(&self, lp: &LpSolution) -> Rat {
        self.members.iter().map(|&u| lp.value(&VarTag::Facility(u))).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BallSystem {
    /// One ball per client, ascending client id.
    pub balls: Vec<Ball>,
    /// Centers of the chosen balls, in selection order.
    pub selected: Vec<usize>,
    pub opened: BTreeSet<usize>,
    pub facility_of: BTreeMap<usize, usize>,
}

impl BallSystem {
    pub fn ball(&self, client: usize) -> Option<&Ball> {
        self.balls.iter().find(|b| b.client == client)
    }

    /// Opening mass of every selected ball, in selection order.
    pub fn selected_masses(&self, lp: &LpSolution) -> Vec<(usize, Rat)> {
        self.selected
            .iter()
            .map(|&v| (v, self.ball(v).expect("selected ball exists").mass(lp)))
            .collect()
    }

    /// Every selected ball carries opening mass at least ¼.
    pub fn mass_bound_holds(&self, lp: &LpSolution) -> bool {
        let quarter = frac(1, 4);
        self.selected_masses(lp).iter().all(|(_, m)| *m >= quarter)
    }

    /// Selected balls are pairwise disjoint and every other ball meets a
    /// selected ball with no larger radius.
    pub fn selection_is_maximal(&self) -> bool {
        let chosen: Vec<&Ball> = self.selected.iter().filter_map(|&v| self.ball(v)).collect();
        let disjoint = chosen.iter().enumerate().all(|(i, a)| {
            chosen[i + 1..].iter().all(|b| a.members.is_disjoint(&b.members))
        });
        disjoint
            && self.balls.iter().all(|b| {
                self.selected.contains(&b.client)
                    || chosen.iter().any(|c| c.seed <= b.seed && !c.members.is_disjoint(&b.members))
            })
    }
}

/// `W_{v,t}` for every anchor, the seed `W_v`, ball members and cheapest
/// vertex for each planned client.
pub fn build_balls(inst: &Instance, lp: &LpSolution, plans: &[VisitPlan]) -> BallSystem {
    let mut balls: Vec<Ball> = plans
        .iter()
        .map(|plan| {
            let v = plan.client;
            let anchor_weights: BTreeMap<usize, Rat> = plan
                .anchors()
                .map(|a| {
                    let mut w = Rat::zero();
                    for u in 0..inst.n {
                        let dist = inst.distance(u, v);
                        if dist.is_zero() {
                            continue;
                        }
                        for s in a.s_star..=a.deadline {
                            let y = lp.value(&VarTag::Assign { facility: u, client: v, day: s, deadline: a.deadline });
                            w += dist * y;
                        }
                    }
                    (a.deadline, w)
                })
                .collect();
            let seed = anchor_weights.values().min().cloned().expect("a plan has at least one anchor");
            let radius = &seed * int(4);
            let members: BTreeSet<usize> = (0..inst.n).filter(|&u| *inst.distance(u, v) <= radius).collect();
            let cheapest = *members
                .iter()
                .min_by(|&&a, &&b| inst.facility_costs[a].cmp(&inst.facility_costs[b]).then(a.cmp(&b)))
                .expect("a ball contains its center");
            Ball { client: v, anchor_weights, seed, members, cheapest }
        })
        .collect();
    balls.sort_by_key(|b| b.client);
    BallSystem { balls, ..BallSystem::default() }
}

/// Greedy selection by increasing radius (ties: lowest client id); opens the
/// cheapest vertex of each selected ball and assigns every client to its
/// nearest open facility (ties: lowest id).
pub fn select_balls(inst: &Instance, mut system: BallSystem) -> BallSystem {
    let mut order: Vec<&Ball> = system.balls.iter().collect();
    order.sort_by(|a, b| a.seed.cmp(&b.seed).then(a.client.cmp(&b.client)));
    let mut taken: BTreeSet<usize> = BTreeSet::new();
    let mut selected = Vec::new();
    let mut opened = BTreeSet::new();
    for ball in order {
        if ball.members.is_disjoint(&taken) {
            taken.extend(&ball.members);
            selected.push(ball.client);
            opened.insert(ball.cheapest);
        }
    }
    let facility_of = system
        .balls
        .iter()
        .map(|b| {
            let u = *opened
                .iter()
                .min_by(|&&a, &&c| inst.distance(a, b.client).cmp(inst.distance(c, b.client)).then(a.cmp(&c)))
                .expect("at least one facility opens");
            (b.client, u)
        })
        .collect();
    system.selected = selected;
    system.opened = opened;
    system.facility_of = facility_of;
    system
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(client: usize, seed: Rat, members: &[usize]) -> Ball {
        Ball {
            client,
            anchor_weights: BTreeMap::new(),
            seed,
            members: members.iter().copied().collect(),
            cheapest: client,
        }
    }

    fn line(points: &[i64]) -> Instance {
        let weights = points
            .iter()
            .map(|a| points.iter().map(|b| int((a - b).abs())).collect())
            .collect();
        Instance::new(1, crate::Variant::Uncap, None, weights, vec![int(1); points.len()], vec![])
    }

    #[test]
    fn line_example_selects_outer_balls() {
        // Vertices at 0, 1.5 (scaled by 2: 0, 3) and 10 (scaled: 20);
        // radii 1, 2, 1.5 scaled likewise.
        let inst = line(&[0, 3, 20]);
        let within = |c: i64, r: i64| -> Vec<usize> {
            [0i64, 3, 20].iter().enumerate().filter(|(_, &p)| (p - c).abs() <= r).map(|(i, _)| i).collect()
        };
        let system = BallSystem {
            balls: vec![
                ball(0, frac(2, 4), &within(0, 2)),
                ball(1, frac(4, 4), &within(3, 4)),
                ball(2, frac(3, 4), &within(20, 3)),
            ],
            ..BallSystem::default()
        };
        let chosen = select_balls(&inst, system);
        assert_eq!(chosen.selected, vec![0, 2]);
        assert!(chosen.selection_is_maximal());
        assert_eq!(chosen.facility_of[&1], 0);
    }

    #[test]
    fn single_client_opens_its_cheapest() {
        let inst = line(&[0]);
        let system = BallSystem { balls: vec![ball(0, Rat::zero(), &[0])], ..BallSystem::default() };
        let chosen = select_balls(&inst, system);
        assert_eq!(chosen.opened, BTreeSet::from([0]));
        assert_eq!(chosen.facility_of[&0], 0);
    }
}
