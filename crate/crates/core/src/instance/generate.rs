use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{DemandPoint, IapDemand, IapInstance, Instance, Variant};
use crate::num::{int, Rat};

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("vertex count must be at least 1")]
    NoVertices,
    #[error("horizon must be at least 1")]
    EmptyHorizon,
    #[error("demand density must lie in (0, 1], got {0}")]
    Density(f64),
    #[error("range {0} is empty or negative")]
    Range(&'static str),
    #[error("variant {0} needs a positive capacity")]
    Capacity(Variant),
}

/// Parameters for [`generate_random`]. Ranges are inclusive integer ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub horizon: usize,
    pub demand_density: f64,
    /// Grid extent for vertex coordinates; weights are L1 distances.
    pub weight_range: (i64, i64),
    pub facility_range: (i64, i64),
    pub holding_slope_range: (i64, i64),
    pub demand_range: (i64, i64),
    pub capacity: Option<Rat>,
    pub variant: Variant,
    /// Keep at most this many demand points (a seeded subset).
    pub max_demands: Option<usize>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 4,
            horizon: 3,
            demand_density: 0.5,
            weight_range: (0, 10),
            facility_range: (0, 20),
            holding_slope_range: (0, 3),
            demand_range: (1, 5),
            capacity: None,
            variant: Variant::Uncap,
            max_demands: None,
        }
    }
}

fn check_range(name: &'static str, (lo, hi): (i64, i64)) -> Result<(), GenerateError> {
    if lo < 0 || lo > hi {
        return Err(GenerateError::Range(name));
    }
    Ok(())
}

fn check_common(
    horizon: usize,
    density: f64,
    capacity: Option<&Rat>,
    variant: Variant,
) -> Result<(), GenerateError> {
    if horizon == 0 {
        return Err(GenerateError::EmptyHorizon);
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(GenerateError::Density(density));
    }
    if variant.is_capacitated() && !capacity.is_some_and(|u| u > &Rat::zero()) {
        return Err(GenerateError::Capacity(variant));
    }
    Ok(())
}

fn draw_amount(rng: &mut ChaCha8Rng, range: (i64, i64), capacity: Option<&Rat>) -> Rat {
    let amount = int(rng.gen_range(range.0.max(1)..=range.1.max(1)));
    match capacity {
        Some(u) if &amount > u => u.clone(),
        _ => amount,
    }
}

/// Seeded random metric instance. Vertices are grid points and weights are
/// their L1 distances, so the triangle inequality holds exactly. Unit holding
/// costs are `slope_v * (t - s)`, which is monotone by construction.
pub fn generate_random(params: &GenParams, seed: u64) -> Result<Instance, GenerateError> {
    if params.n == 0 {
        return Err(GenerateError::NoVertices);
    }
    check_common(
        params.horizon,
        params.demand_density,
        params.capacity.as_ref(),
        params.variant,
    )?;
    check_range("weight_range", params.weight_range)?;
    check_range("facility_range", params.facility_range)?;
    check_range("holding_slope_range", params.holding_slope_range)?;
    check_range("demand_range", params.demand_range)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.n;
    let (lo, hi) = params.weight_range;
    let points: Vec<(i64, i64)> = (0..n)
        .map(|_| (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi)))
        .collect();
    let weights: Vec<Vec<Rat>> = points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| int((a.0 - b.0).abs() + (a.1 - b.1).abs()))
                .collect()
        })
        .collect();
    let facility_costs: Vec<Rat> = (0..n)
        .map(|_| int(rng.gen_range(params.facility_range.0..=params.facility_range.1)))
        .collect();
    let slopes: Vec<i64> = (0..n)
        .map(|_| rng.gen_range(params.holding_slope_range.0..=params.holding_slope_range.1))
        .collect();

    let mut cells: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        for t in 1..=params.horizon {
            if rng.gen_bool(params.demand_density) {
                cells.push((v, t));
            }
        }
    }
    if cells.is_empty() {
        cells.push((rng.gen_range(0..n), rng.gen_range(1..=params.horizon)));
    }
    if let Some(max) = params.max_demands {
        if cells.len() > max.max(1) {
            cells.shuffle(&mut rng);
            cells.truncate(max.max(1));
            cells.sort_unstable();
        }
    }
    let demands = cells
        .into_iter()
        .map(|(v, t)| DemandPoint {
            vertex: v,
            day: t,
            amount: draw_amount(&mut rng, params.demand_range, params.capacity.as_ref()),
            holding: (1..=t).map(|s| int(slopes[v] * (t - s) as i64)).collect(),
        })
        .collect();

    Ok(Instance::new(
        params.horizon,
        params.variant,
        params.capacity.clone(),
        weights,
        facility_costs,
        demands,
    ))
}

/// Parameters for [`generate_random_iap`].
#[derive(Debug, Clone, PartialEq)]
pub struct IapGenParams {
    pub horizon: usize,
    pub demand_density: f64,
    pub distance_range: (i64, i64),
    pub holding_slope_range: (i64, i64),
    pub demand_range: (i64, i64),
    pub capacity: Option<Rat>,
    pub variant: Variant,
}

impl Default for IapGenParams {
    fn default() -> Self {
        IapGenParams {
            horizon: 4,
            demand_density: 0.7,
            distance_range: (1, 10),
            holding_slope_range: (0, 3),
            demand_range: (1, 5),
            capacity: None,
            variant: Variant::Uncap,
        }
    }
}

/// Seeded random IAP with at most one demand per day.
pub fn generate_random_iap(params: &IapGenParams, seed: u64) -> Result<IapInstance, GenerateError> {
    check_common(
        params.horizon,
        params.demand_density,
        params.capacity.as_ref(),
        params.variant,
    )?;
    check_range("distance_range", params.distance_range)?;
    check_range("holding_slope_range", params.holding_slope_range)?;
    check_range("demand_range", params.demand_range)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let distance = int(rng.gen_range(params.distance_range.0..=params.distance_range.1));
    let slope = rng.gen_range(params.holding_slope_range.0..=params.holding_slope_range.1);
    let mut days: Vec<usize> = (1..=params.horizon)
        .filter(|_| rng.gen_bool(params.demand_density))
        .collect();
    if days.is_empty() {
        days.push(rng.gen_range(1..=params.horizon));
    }
    let demands = days
        .into_iter()
        .map(|day| IapDemand {
            day,
            amount: draw_amount(&mut rng, params.demand_range, params.capacity.as_ref()),
        })
        .collect();
    let holding = (1..=params.horizon)
        .map(|t| (1..=t).map(|s| int(slope * (t - s) as i64)).collect())
        .collect();
    Ok(IapInstance {
        distance,
        horizon: params.horizon,
        variant: params.variant,
        capacity: params.capacity.clone(),
        demands,
        holding,
    })
}
