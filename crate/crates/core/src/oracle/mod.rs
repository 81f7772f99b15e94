//! Exact solvers used as ground truth. Every solver refuses inputs above its
//! size gate instead of returning an approximation.

mod iap;
mod packing;
mod sirpfl;

use std::fmt;

use thiserror::Error;

use crate::lp::LpError;
use crate::num::Rat;
use crate::schedule::Schedule;

pub use iap::{exact_iap, visit_enum, ww_dp, IAP_MAX_HORIZON, UNSPLIT_MAX_ITEMS};
pub use packing::{min_bins, partition_exists};
pub use sirpfl::{exact_sirpfl, SIRPFL_MAX_DEMANDS, SIRPFL_MAX_HORIZON, SIRPFL_MAX_VERTICES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    WwDp,
    VisitEnum,
    TripEnum,
    FacilityEnum,
    PackEnum,
}

impl fmt::Display for OracleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMethod::WwDp => "WW_DP",
            OracleMethod::VisitEnum => "VISIT_ENUM",
            OracleMethod::TripEnum => "TRIP_ENUM",
            OracleMethod::FacilityEnum => "FACILITY_ENUM",
            OracleMethod::PackEnum => "PACK_ENUM",
        })
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub optimum: Rat,
    /// A schedule attaining `optimum`.
    pub witness: Schedule,
    pub method: OracleMethod,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for exact solving: {0}")]
    TooLarge(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}
