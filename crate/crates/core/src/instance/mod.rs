//! Problem data: SIRPFL instances over a metric graph and single-client IAP
//! instances, plus validation, generation and the file format.

mod gadget;
mod generate;
mod io;
mod validate;

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::num::Rat;

pub use gadget::{make_partition_gadget, GadgetError};
pub use generate::{generate_random, generate_random_iap, GenerateError, GenParams, IapGenParams};
pub use io::{parse, parse_iap, parse_instance, serialize, serialize_iap, serialize_instance, ParseError};
pub use validate::Violation;

/// Vertex id of the depot when an IAP is viewed as a two-vertex network.
pub const IAP_DEPOT: usize = 0;
/// Vertex id of the client when an IAP is viewed as a two-vertex network.
pub const IAP_CLIENT: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "UNCAP")]
    Uncap,
    #[serde(rename = "CAP_SPLIT")]
    CapSplit,
    #[serde(rename = "CAP_UNSPLIT")]
    CapUnsplit,
}

impl Variant {
    pub fn is_capacitated(self) -> bool {
        !matches!(self, Variant::Uncap)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Uncap => "UNCAP",
            Variant::CapSplit => "CAP_SPLIT",
            Variant::CapUnsplit => "CAP_UNSPLIT",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "UNCAP" => Ok(Variant::Uncap),
            "CAP_SPLIT" => Ok(Variant::CapSplit),
            "CAP_UNSPLIT" => Ok(Variant::CapUnsplit),
            other => Err(format!("unknown variant `{other}`")),
        }
    }
}

/// A demand point `(v, t)` with its amount and unit holding costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandPoint {
    pub vertex: usize,
    pub day: usize,
    pub amount: Rat,
    /// `holding[s - 1]` is the unit cost of delivering on day `s <= day`.
    pub holding: Vec<Rat>,
}

impl DemandPoint {
    pub fn unit_holding(&self, s: usize) -> &Rat {
        &self.holding[s - 1]
    }

    /// Cost of storing the whole demand from day `s` until its deadline.
    pub fn aggregate_holding(&self, s: usize) -> Rat {
        &self.amount * self.unit_holding(s)
    }
}

/// A SIRPFL instance. Vertices are `0..n`, days are `1..=horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub horizon: usize,
    pub variant: Variant,
    pub capacity: Option<Rat>,
    pub weights: Vec<Vec<Rat>>,
    pub facility_costs: Vec<Rat>,
    /// Sorted by `(vertex, day)`, at most one entry per pair.
    pub demands: Vec<DemandPoint>,
}

impl Instance {
    pub fn new(
        horizon: usize,
        variant: Variant,
        capacity: Option<Rat>,
        weights: Vec<Vec<Rat>>,
        facility_costs: Vec<Rat>,
        mut demands: Vec<DemandPoint>,
    ) -> Self {
        demands.sort_by_key(|d| (d.vertex, d.day));
        Instance {
            n: facility_costs.len(),
            horizon,
            variant,
            capacity,
            weights,
            facility_costs,
            demands,
        }
    }

    pub fn distance(&self, u: usize, v: usize) -> &Rat {
        &self.weights[u][v]
    }

    pub fn demand(&self, v: usize, t: usize) -> Option<&DemandPoint> {
        self.demands
            .binary_search_by_key(&(v, t), |d| (d.vertex, d.day))
            .ok()
            .map(|i| &self.demands[i])
    }

    /// Vertices with at least one demand point, ascending.
    pub fn clients(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.demands.iter().map(|d| d.vertex).collect();
        out.dedup();
        out
    }

    pub fn client_demands(&self, v: usize) -> impl Iterator<Item = &DemandPoint> + '_ {
        self.demands.iter().filter(move |d| d.vertex == v)
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate::validate_instance(self)
    }

    /// The IAP faced by client `v` once it is served from a facility at
    /// distance `distance`.
    pub fn client_iap(&self, v: usize, distance: Rat) -> IapInstance {
        let demands: Vec<&DemandPoint> = self.client_demands(v).collect();
        let mut holding: Vec<Vec<Rat>> = (1..=self.horizon)
            .map(|t| vec![Rat::zero(); t])
            .collect();
        for d in &demands {
            holding[d.day - 1] = d.holding.clone();
        }
        IapInstance {
            distance,
            horizon: self.horizon,
            variant: self.variant,
            capacity: self.capacity.clone(),
            demands: demands
                .iter()
                .map(|d| IapDemand {
                    day: d.day,
                    amount: d.amount.clone(),
                })
                .collect(),
            holding,
        }
    }

    pub fn with_variant(&self, variant: Variant) -> Instance {
        Instance {
            variant,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IapDemand {
    pub day: usize,
    pub amount: Rat,
}

/// Single depot, single client. Several demands may share a deadline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IapInstance {
    pub distance: Rat,
    pub horizon: usize,
    pub variant: Variant,
    pub capacity: Option<Rat>,
    /// Sorted by day; ties keep insertion order.
    pub demands: Vec<IapDemand>,
    /// `holding[t - 1][s - 1]` is the unit cost from day `s` to deadline `t`.
    pub holding: Vec<Vec<Rat>>,
}

impl IapInstance {
    pub fn unit_holding(&self, s: usize, t: usize) -> &Rat {
        &self.holding[t - 1][s - 1]
    }

    pub fn total_demand(&self) -> Rat {
        self.demands.iter().map(|d| d.amount.clone()).sum()
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate::validate_iap(self)
    }

    pub fn with_variant(&self, variant: Variant) -> IapInstance {
        IapInstance {
            variant,
            ..self.clone()
        }
    }
}

/// Either kind of input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    Sirpfl(Instance),
    Iap(IapInstance),
}

impl Problem {
    pub fn variant(&self) -> Variant {
        match self {
            Problem::Sirpfl(i) => i.variant,
            Problem::Iap(i) => i.variant,
        }
    }

    pub fn with_variant(&self, variant: Variant) -> Problem {
        match self {
            Problem::Sirpfl(i) => Problem::Sirpfl(i.with_variant(variant)),
            Problem::Iap(i) => Problem::Iap(i.with_variant(variant)),
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        match self {
            Problem::Sirpfl(i) => i.validate(),
            Problem::Iap(i) => i.validate(),
        }
    }

    pub fn num_demands(&self) -> usize {
        match self {
            Problem::Sirpfl(i) => i.demands.len(),
            Problem::Iap(i) => i.demands.len(),
        }
    }

    pub fn horizon(&self) -> usize {
        match self {
            Problem::Sirpfl(i) => i.horizon,
            Problem::Iap(i) => i.horizon,
        }
    }

    /// Vertex count; an IAP is a two-vertex network.
    pub fn vertex_count(&self) -> usize {
        match self {
            Problem::Sirpfl(i) => i.n,
            Problem::Iap(_) => 2,
        }
    }
}
