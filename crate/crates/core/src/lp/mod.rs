//! LP relaxations and an exact rational simplex.

mod build;
mod export;
mod simplex;

use std::collections::HashMap;

use num_traits::Zero;
use thiserror::Error;

use crate::num::Rat;

pub use build::{
    build_csiap_lp, build_cssirpfl_lp, build_usirpfl_lp, usirpfl_variable_count, BuildError,
};
pub use export::export_mps;
pub use simplex::{solve_lp, solve_lp_with, PivotRule, SolveOptions};

/// Semantic name of an LP column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarTag {
    /// `z_u`: facility opened at `u`.
    Facility(usize),
    /// `y^{uv}_s`: edge from facility `u` to client `v` built on day `s`.
    Edge { facility: usize, client: usize, day: usize },
    /// `y^{uv}_{st}`: demand `(v, t)` served on day `s` from `u`.
    Assign { facility: usize, client: usize, day: usize, deadline: usize },
    /// `x^v_{s,t}`: demand `(v, t)` served on day `s`.
    Serve { client: usize, day: usize, deadline: usize },
    /// IAP `y_s`: number of trips on day `s`.
    Trips(usize),
    /// IAP `x_{s,j}`: fraction of demand item `j` delivered on day `s`.
    Deliver { day: usize, demand: usize },
    /// Column of a model without semantic structure.
    Free(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostClass {
    Facility,
    Routing,
    Holding,
    Untracked,
}

impl VarTag {
    pub fn cost_class(&self) -> CostClass {
        match self {
            VarTag::Facility(_) => CostClass::Facility,
            VarTag::Edge { .. } | VarTag::Trips(_) => CostClass::Routing,
            VarTag::Serve { .. } | VarTag::Deliver { .. } => CostClass::Holding,
            VarTag::Assign { .. } | VarTag::Free(_) => CostClass::Untracked,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

/// Which constraint family a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Service,
    Connection,
    FacilityAssign,
    EdgeAssign,
    FacilityEdge,
    ServiceInterval,
    ClientCapacity,
    EdgeCapacity,
    TripCapacity,
    TripPresence,
    Supply,
    Generic,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Service => "service",
            Family::Connection => "connection",
            Family::FacilityAssign => "facility_assign",
            Family::EdgeAssign => "edge_assign",
            Family::FacilityEdge => "facility_edge",
            Family::ServiceInterval => "service_interval",
            Family::ClientCapacity => "client_capacity",
            Family::EdgeCapacity => "edge_capacity",
            Family::TripCapacity => "trip_capacity",
            Family::TripPresence => "trip_presence",
            Family::Supply => "supply",
            Family::Generic => "row",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(usize, Rat)>,
    pub relation: Relation,
    pub rhs: Rat,
    pub family: Family,
}

impl Constraint {
    pub fn lhs(&self, values: &[Rat]) -> Rat {
        self.terms.iter().map(|(j, a)| a * &values[*j]).sum()
    }

    pub fn holds(&self, values: &[Rat]) -> bool {
        let lhs = self.lhs(values);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// `min c·x` subject to the rows, `x >= 0`.
#[derive(Debug, Clone, Default)]
pub struct LpModel {
    tags: Vec<VarTag>,
    objective: Vec<Rat>,
    index: HashMap<VarTag, usize>,
    constraints: Vec<Constraint>,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a column; panics if the tag already exists.
    pub fn add_var(&mut self, tag: VarTag, cost: Rat) -> usize {
        let j = self.tags.len();
        let previous = self.index.insert(tag, j);
        assert!(previous.is_none(), "duplicate LP column {tag:?}");
        self.tags.push(tag);
        self.objective.push(cost);
        j
    }

    pub fn var(&self, tag: &VarTag) -> Option<usize> {
        self.index.get(tag).copied()
    }

    pub fn add_constraint(
        &mut self,
        terms: Vec<(usize, Rat)>,
        relation: Relation,
        rhs: Rat,
        family: Family,
    ) {
        let terms = terms.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        self.constraints.push(Constraint {
            terms,
            relation,
            rhs,
            family,
        });
    }

    pub fn tags(&self) -> &[VarTag] {
        &self.tags
    }

    pub fn objective(&self) -> &[Rat] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_vars(&self) -> usize {
        self.tags.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn family_count(&self, family: Family) -> usize {
        self.constraints.iter().filter(|c| c.family == family).count()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("the LP is infeasible")]
    Infeasible,
    #[error("the LP is unbounded")]
    Unbounded,
    #[error("pivot limit of {0} reached")]
    PivotLimit(usize),
    #[error("solution failed verification: {0}")]
    Verification(String),
}

/// Optimal values with the objective split into its cost families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    values: HashMap<VarTag, Rat>,
    pub objective: Rat,
    pub facility_cost: Rat,
    pub routing_cost: Rat,
    pub holding_cost: Rat,
}

impl LpSolution {
    pub(crate) fn from_model(model: &LpModel, x: Vec<Rat>) -> Self {
        let mut facility = Rat::zero();
        let mut routing = Rat::zero();
        let mut holding = Rat::zero();
        let mut objective = Rat::zero();
        for ((tag, c), v) in model.tags.iter().zip(&model.objective).zip(&x) {
            if c.is_zero() || v.is_zero() {
                continue;
            }
            let cost = c * v;
            match tag.cost_class() {
                CostClass::Facility => facility += &cost,
                CostClass::Routing => routing += &cost,
                CostClass::Holding => holding += &cost,
                CostClass::Untracked => {}
            }
            objective += cost;
        }
        LpSolution {
            values: model.tags.iter().copied().zip(x).collect(),
            objective,
            facility_cost: facility,
            routing_cost: routing,
            holding_cost: holding,
        }
    }

    /// A solution assembled by hand, e.g. to exercise rounding on chosen
    /// fractional values. Cost fields are left at zero.
    pub fn from_values(values: impl IntoIterator<Item = (VarTag, Rat)>) -> Self {
        LpSolution {
            values: values.into_iter().collect(),
            objective: Rat::zero(),
            facility_cost: Rat::zero(),
            routing_cost: Rat::zero(),
            holding_cost: Rat::zero(),
        }
    }

    /// Value of a column; absent columns are zero.
    pub fn value(&self, tag: &VarTag) -> Rat {
        self.values.get(tag).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn values(&self) -> impl Iterator<Item = (&VarTag, &Rat)> {
        self.values.iter()
    }
}
