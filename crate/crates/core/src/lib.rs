//! LP-rounding approximations for star-shaped inventory routing where the
//! depots themselves must be opened (SIRPFL), and for its single-client core,
//! the inventory access problem (IAP).
//!
//! The crate is organised as a pipeline:
//!
//! * [`instance`] holds the problem data, validation, seeded generators, the
//!   number-partition gadget and the JSON file format.
//! * [`lp`] builds the three LP relaxations and solves them exactly with a
//!   rational simplex using Bland's rule.
//! * [`rounding`] turns an optimal LP solution into a feasible [`Schedule`]
//!   whose cost is within a constant factor of the LP bound.
//! * [`oracle`] contains exact solvers used as ground truth.
//! * [`harness`] runs seeded certification experiments and writes CSV reports.
//!
//! All numbers are exact rationals ([`Rat`]); no floating point enters any
//! decision.

pub mod harness;
pub mod instance;
pub mod lp;
pub mod num;
pub mod oracle;
pub mod rounding;
pub mod schedule;

pub use instance::{IapInstance, Instance, Problem, Variant};
pub use lp::{LpModel, LpSolution};
pub use num::Rat;
pub use schedule::Schedule;
