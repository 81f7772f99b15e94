//! Integral delivery plans and their cost accounting.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::instance::{IapInstance, Instance, Variant, IAP_CLIENT, IAP_DEPOT};
use crate::num::{fmt_rat, Rat};

/// Read-only view of the cost data a schedule is evaluated against.
/// Demands are addressed by their index in the instance's demand list.
pub trait CostModel {
    fn variant(&self) -> Variant;
    fn capacity(&self) -> Option<&Rat>;
    fn distance(&self, facility: usize, client: usize) -> Rat;
    fn facility_cost(&self, u: usize) -> Rat;
    fn demand_count(&self) -> usize;
    /// `(client, deadline, amount)` of demand `index`.
    fn demand(&self, index: usize) -> (usize, usize, Rat);
    fn unit_holding(&self, index: usize, s: usize) -> Rat;
}

impl CostModel for Instance {
    fn variant(&self) -> Variant {
        self.variant
    }
    fn capacity(&self) -> Option<&Rat> {
        self.capacity.as_ref()
    }
    fn distance(&self, facility: usize, client: usize) -> Rat {
        self.weights[facility][client].clone()
    }
    fn facility_cost(&self, u: usize) -> Rat {
        self.facility_costs[u].clone()
    }
    fn demand_count(&self) -> usize {
        self.demands.len()
    }
    fn demand(&self, index: usize) -> (usize, usize, Rat) {
        let d = &self.demands[index];
        (d.vertex, d.day, d.amount.clone())
    }
    fn unit_holding(&self, index: usize, s: usize) -> Rat {
        self.demands[index].unit_holding(s).clone()
    }
}

impl CostModel for IapInstance {
    fn variant(&self) -> Variant {
        self.variant
    }
    fn capacity(&self) -> Option<&Rat> {
        self.capacity.as_ref()
    }
    fn distance(&self, facility: usize, client: usize) -> Rat {
        if facility == client {
            Rat::zero()
        } else {
            self.distance.clone()
        }
    }
    fn facility_cost(&self, _u: usize) -> Rat {
        Rat::zero()
    }
    fn demand_count(&self) -> usize {
        self.demands.len()
    }
    fn demand(&self, index: usize) -> (usize, usize, Rat) {
        let d = &self.demands[index];
        (IAP_CLIENT, d.day, d.amount.clone())
    }
    fn unit_holding(&self, index: usize, s: usize) -> Rat {
        self.unit_holding(s, self.demands[index].day).clone()
    }
}

/// Part of one demand carried by one trip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parcel {
    pub demand: usize,
    pub deadline: usize,
    pub amount: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trip {
    pub parcels: Vec<Parcel>,
}

impl Trip {
    pub fn load(&self) -> Rat {
        self.parcels.iter().map(|p| p.amount.clone()).sum()
    }
}

/// All trips from `facility` to `client` on `day`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delivery {
    pub client: usize,
    pub day: usize,
    pub facility: usize,
    pub trips: Vec<Trip>,
}

impl Delivery {
    /// Amount delivered per demand index on this day.
    pub fn delivered(&self) -> BTreeMap<usize, Rat> {
        let mut out: BTreeMap<usize, Rat> = BTreeMap::new();
        for p in self.trips.iter().flat_map(|t| &t.parcels) {
            *out.entry(p.demand).or_insert_with(Rat::zero) += &p.amount;
        }
        out
    }

    pub fn load(&self) -> Rat {
        self.trips.iter().map(Trip::load).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CostBreakdown {
    pub facility: Rat,
    pub routing: Rat,
    pub holding: Rat,
}

impl CostBreakdown {
    pub fn total(&self) -> Rat {
        &self.facility + &self.routing + &self.holding
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub opened: BTreeSet<usize>,
    pub deliveries: Vec<Delivery>,
    pub costs: CostBreakdown,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("delivery to {client} on day {day} uses facility {facility}, which is not open")]
    ClosedFacility {
        client: usize,
        day: usize,
        facility: usize,
    },
    #[error("parcel for demand {demand} has the wrong client or a non-positive amount")]
    BadParcel { demand: usize },
    #[error("demand {demand} delivered on day {day}, after its deadline")]
    Late { demand: usize, day: usize },
    #[error("demand {demand} received {delivered}, needs {required}")]
    Unbalanced {
        demand: usize,
        delivered: String,
        required: String,
    },
    #[error("trip to {client} on day {day} carries {load}, capacity is {capacity}")]
    Overloaded {
        client: usize,
        day: usize,
        load: String,
        capacity: String,
    },
    #[error("demand {demand} is split across trips in an unsplittable instance")]
    Split { demand: usize },
    #[error("recorded costs do not match the schedule")]
    CostMismatch,
}

impl Schedule {
    /// Builds a schedule and prices it against `model`.
    pub fn new(opened: BTreeSet<usize>, deliveries: Vec<Delivery>, model: &impl CostModel) -> Self {
        let mut schedule = Schedule {
            opened,
            deliveries,
            costs: CostBreakdown::default(),
        };
        schedule.costs = schedule.evaluate(model);
        schedule
    }

    pub fn total_cost(&self) -> Rat {
        self.costs.total()
    }

    pub fn trip_count(&self) -> usize {
        self.deliveries.iter().map(|d| d.trips.len()).sum()
    }

    pub fn evaluate(&self, model: &impl CostModel) -> CostBreakdown {
        let facility = self.opened.iter().map(|&u| model.facility_cost(u)).sum();
        let mut routing = Rat::zero();
        let mut holding = Rat::zero();
        for d in &self.deliveries {
            routing += model.distance(d.facility, d.client) * Rat::from_integer(d.trips.len().into());
            for p in d.trips.iter().flat_map(|t| &t.parcels) {
                holding += &p.amount * model.unit_holding(p.demand, d.day);
            }
        }
        CostBreakdown {
            facility,
            routing,
            holding,
        }
    }

    /// Checks full, on-time delivery, capacity, unsplittability and the
    /// recorded cost breakdown.
    pub fn check(&self, model: &impl CostModel) -> Result<(), ScheduleError> {
        let mut received = vec![Rat::zero(); model.demand_count()];
        let mut pieces = vec![0usize; model.demand_count()];
        for d in &self.deliveries {
            if !self.opened.contains(&d.facility) {
                return Err(ScheduleError::ClosedFacility {
                    client: d.client,
                    day: d.day,
                    facility: d.facility,
                });
            }
            for trip in &d.trips {
                if let Some(cap) = model.capacity().filter(|_| model.variant().is_capacitated()) {
                    let load = trip.load();
                    if &load > cap {
                        return Err(ScheduleError::Overloaded {
                            client: d.client,
                            day: d.day,
                            load: fmt_rat(&load),
                            capacity: fmt_rat(cap),
                        });
                    }
                }
                for p in &trip.parcels {
                    if p.demand >= model.demand_count() {
                        return Err(ScheduleError::BadParcel { demand: p.demand });
                    }
                    let (client, deadline, _) = model.demand(p.demand);
                    if client != d.client || !p.amount.is_positive() || deadline != p.deadline {
                        return Err(ScheduleError::BadParcel { demand: p.demand });
                    }
                    if d.day == 0 || d.day > deadline {
                        return Err(ScheduleError::Late {
                            demand: p.demand,
                            day: d.day,
                        });
                    }
                    received[p.demand] += &p.amount;
                    pieces[p.demand] += 1;
                }
            }
        }
        for (i, got) in received.iter().enumerate() {
            let (_, _, amount) = model.demand(i);
            if got != &amount {
                return Err(ScheduleError::Unbalanced {
                    demand: i,
                    delivered: fmt_rat(got),
                    required: fmt_rat(&amount),
                });
            }
            if model.variant() == Variant::CapUnsplit && pieces[i] != 1 {
                return Err(ScheduleError::Split { demand: i });
            }
        }
        if self.costs != self.evaluate(model) {
            return Err(ScheduleError::CostMismatch);
        }
        Ok(())
    }

    /// Relabels an IAP schedule onto a network: the depot becomes `facility`
    /// and the client becomes `client`; demand indices are remapped.
    pub fn relabel_iap(&self, facility: usize, client: usize, demand_ids: &[usize]) -> Vec<Delivery> {
        self.deliveries
            .iter()
            .map(|d| Delivery {
                client,
                day: d.day,
                facility: if d.facility == IAP_DEPOT { facility } else { client },
                trips: d
                    .trips
                    .iter()
                    .map(|t| Trip {
                        parcels: t
                            .parcels
                            .iter()
                            .map(|p| Parcel {
                                demand: demand_ids[p.demand],
                                deadline: p.deadline,
                                amount: p.amount.clone(),
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ScheduleDoc::from(self)).expect("schedule serializes")
    }

    /// One CSV row per trip.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["client", "day", "facility", "trip", "load", "parcels"])
            .expect("in-memory write");
        for d in &self.deliveries {
            for (i, trip) in d.trips.iter().enumerate() {
                let parcels: Vec<String> = trip
                    .parcels
                    .iter()
                    .map(|p| format!("{}@{}:{}", p.demand, p.deadline, fmt_rat(&p.amount)))
                    .collect();
                w.write_record([
                    d.client.to_string(),
                    d.day.to_string(),
                    d.facility.to_string(),
                    i.to_string(),
                    fmt_rat(&trip.load()),
                    parcels.join(";"),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
    }
}

#[derive(Serialize)]
struct ScheduleDoc {
    opened: Vec<usize>,
    deliveries: Vec<DeliveryDoc>,
    costs: CostsDoc,
}

#[derive(Serialize)]
struct DeliveryDoc {
    client: usize,
    day: usize,
    facility: usize,
    trips: Vec<String>,
    delivered: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct CostsDoc {
    facility: String,
    routing: String,
    holding: String,
    total: String,
}

impl From<&Schedule> for ScheduleDoc {
    fn from(s: &Schedule) -> Self {
        ScheduleDoc {
            opened: s.opened.iter().copied().collect(),
            deliveries: s
                .deliveries
                .iter()
                .map(|d| {
                    let mut delivered = BTreeMap::new();
                    for p in d.trips.iter().flat_map(|t| &t.parcels) {
                        let e = delivered
                            .entry(p.deadline)
                            .or_insert_with(Rat::zero);
                        *e += &p.amount;
                    }
                    DeliveryDoc {
                        client: d.client,
                        day: d.day,
                        facility: d.facility,
                        trips: d.trips.iter().map(|t| fmt_rat(&t.load())).collect(),
                        delivered: delivered
                            .into_iter()
                            .map(|(t, a)| (t.to_string(), fmt_rat(&a)))
                            .collect(),
                    }
                })
                .collect(),
            costs: CostsDoc {
                facility: fmt_rat(&s.costs.facility),
                routing: fmt_rat(&s.costs.routing),
                holding: fmt_rat(&s.costs.holding),
                total: fmt_rat(&s.costs.total()),
            },
        }
    }
}
