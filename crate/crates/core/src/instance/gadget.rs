use num_traits::Zero;
use thiserror::Error;

use super::{IapDemand, IapInstance, Variant};
use crate::num::{int, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("the multiset is empty")]
    Empty,
    #[error("elements must be positive integers")]
    NonPositive,
    #[error("element {element} exceeds half the total ({total}/2)")]
    ElementTooLarge { element: u64, total: u64 },
    #[error("the depot distance must be positive")]
    Distance,
}

/// Builds the unsplittable IAP whose optimum is `2w` exactly when `items`
/// splits into two halves of equal sum: every item is a day-1 demand and the
/// vehicle carries half the total.
pub fn make_partition_gadget(items: &[u64], w: Rat) -> Result<IapInstance, GadgetError> {
    if items.is_empty() {
        return Err(GadgetError::Empty);
    }
    if items.contains(&0) {
        return Err(GadgetError::NonPositive);
    }
    if w <= Rat::zero() {
        return Err(GadgetError::Distance);
    }
    let total: u64 = items.iter().sum();
    if let Some(&element) = items.iter().find(|&&a| 2 * a > total) {
        return Err(GadgetError::ElementTooLarge { element, total });
    }
    Ok(IapInstance {
        distance: w,
        horizon: 1,
        variant: Variant::CapUnsplit,
        capacity: Some(Rat::new(total.into(), 2u64.into())),
        demands: items
            .iter()
            .map(|&a| IapDemand {
                day: 1,
                amount: int(a as i64),
            })
            .collect(),
        holding: vec![vec![Rat::zero()]],
    })
}
