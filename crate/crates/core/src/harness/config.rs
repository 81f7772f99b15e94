use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::instance::{generate_random, generate_random_iap, GenParams, IapGenParams, Problem, Variant};
use crate::num::int;
use crate::oracle::{IAP_MAX_HORIZON, SIRPFL_MAX_DEMANDS, SIRPFL_MAX_HORIZON, SIRPFL_MAX_VERTICES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "SIRPFL")]
    Sirpfl,
    #[serde(rename = "IAP")]
    Iap,
}

/// Either an explicit list or `{"start": a, "count": k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    List(Vec<u64>),
    Range { start: u64, count: u64 },
}

impl Seeds {
    pub fn to_vec(&self) -> Vec<u64> {
        match self {
            Seeds::List(v) => v.clone(),
            Seeds::Range { start, count } => (*start..start + count).collect(),
        }
    }
}

fn default_n() -> (usize, usize) {
    (2, 4)
}
fn default_t() -> (usize, usize) {
    (1, 3)
}
fn default_density() -> f64 {
    0.5
}
fn default_weights() -> (i64, i64) {
    (0, 10)
}
fn default_facility() -> (i64, i64) {
    (0, 20)
}
fn default_slope() -> (i64, i64) {
    (0, 3)
}
fn default_demand() -> (i64, i64) {
    (1, 5)
}

/// A certification run. Ranges are inclusive `[lo, hi]` pairs; each seed
/// draws its own `n` and `T` from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    pub variant: Variant,
    #[serde(default = "default_n")]
    pub n: (usize, usize),
    #[serde(rename = "T", default = "default_t")]
    pub horizon: (usize, usize),
    #[serde(default = "default_density")]
    pub density: f64,
    #[serde(default)]
    pub capacity: Option<u64>,
    /// Grid extent for SIRPFL coordinates, or the distance range for IAPs.
    #[serde(default = "default_weights")]
    pub weight_range: (i64, i64),
    #[serde(default = "default_facility")]
    pub facility_range: (i64, i64),
    #[serde(default = "default_slope")]
    pub holding_slope_range: (i64, i64),
    #[serde(default = "default_demand")]
    pub demand_range: (i64, i64),
    #[serde(default)]
    pub max_demands: Option<usize>,
    pub seeds: Seeds,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    pub fn check(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        for (name, (lo, hi)) in [("n", self.n), ("T", self.horizon)] {
            if lo == 0 || lo > hi {
                return bad(format!("range {name} = [{lo}, {hi}] is empty or starts at 0"));
            }
        }
        if self.problem == ProblemKind::Iap && self.variant == Variant::Uncap {
            return bad("uncapacitated IAPs are solved exactly; there is no rounding to certify".into());
        }
        if self.variant.is_capacitated() && !self.capacity.is_some_and(|u| u > 0) {
            return bad(format!("variant {} needs a positive capacity", self.variant));
        }
        if self.oracle {
            let within = match self.problem {
                ProblemKind::Sirpfl => {
                    let demands = self.max_demands.unwrap_or(self.n.1 * self.horizon.1);
                    self.n.1 <= SIRPFL_MAX_VERTICES
                        && self.horizon.1 <= SIRPFL_MAX_HORIZON
                        && demands.min(self.n.1 * self.horizon.1) <= SIRPFL_MAX_DEMANDS
                }
                ProblemKind::Iap => self.horizon.1 <= IAP_MAX_HORIZON,
            };
            if !within {
                return bad("ranges exceed the exact oracle's size gates; disable `oracle` or shrink them".into());
            }
        }
        Ok(())
    }

    /// The instance for one seed.
    pub fn instance(&self, seed: u64) -> Result<Problem, HarnessError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
        let n = rng.gen_range(self.n.0..=self.n.1);
        let horizon = rng.gen_range(self.horizon.0..=self.horizon.1);
        let capacity = self.capacity.filter(|_| self.variant.is_capacitated()).map(|u| int(u as i64));
        let generated = match self.problem {
            ProblemKind::Sirpfl => {
                let params = GenParams {
                    n,
                    horizon,
                    demand_density: self.density,
                    weight_range: self.weight_range,
                    facility_range: self.facility_range,
                    holding_slope_range: self.holding_slope_range,
                    demand_range: self.demand_range,
                    capacity,
                    variant: self.variant,
                    max_demands: self.max_demands,
                };
                generate_random(&params, seed).map(Problem::Sirpfl)
            }
            ProblemKind::Iap => {
                let params = IapGenParams {
                    horizon,
                    demand_density: self.density,
                    distance_range: self.weight_range,
                    holding_slope_range: self.holding_slope_range,
                    demand_range: self.demand_range,
                    capacity,
                    variant: self.variant,
                };
                generate_random_iap(&params, seed).map(Problem::Iap)
            }
        };
        generated.map_err(|e| HarnessError::Config(e.to_string()))
    }
}
