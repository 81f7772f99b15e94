//! Turning a splittable day of trips into whole-demand trips.

use num_traits::Zero;
use thiserror::Error;

use crate::num::{ceil_usize, int, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepackError {
    #[error("item {index} exceeds the vehicle capacity")]
    ItemTooLarge { index: usize },
    #[error("{n_split} split trips cannot carry the load; at least {required} are needed")]
    TooFewTrips { n_split: usize, required: usize },
}

/// Packs whole items into trips of capacity `cap`. Items above `cap / 2` ride
/// alone; the rest go first-fit in decreasing size order (stable on index).
/// Returns item indices per trip; at most `2 · n_split` trips are used.
pub fn unsplit_repack(sizes: &[Rat], cap: &Rat, n_split: usize) -> Result<Vec<Vec<usize>>, RepackError> {
    if let Some(index) = sizes.iter().position(|s| s > cap) {
        return Err(RepackError::ItemTooLarge { index });
    }
    let total: Rat = sizes.iter().cloned().sum();
    let required = ceil_usize(&(total / cap));
    if n_split < required {
        return Err(RepackError::TooFewTrips { n_split, required });
    }

    let mut trips: Vec<(Vec<usize>, Rat)> = Vec::new();
    let mut small = Vec::new();
    for (i, s) in sizes.iter().enumerate() {
        if s * int(2) > *cap {
            trips.push((vec![i], s.clone()));
        } else {
            small.push(i);
        }
    }
    small.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    for i in small {
        let size = &sizes[i];
        match trips.iter_mut().find(|(_, load)| &(&*load + size) <= cap) {
            Some((items, load)) => {
                items.push(i);
                *load += size;
            }
            None => trips.push((vec![i], size.clone())),
        }
    }
    debug_assert!(trips.iter().filter(|(_, l)| l * int(2) <= *cap && !l.is_zero()).count() <= 1);
    Ok(trips.into_iter().map(|(items, _)| items).collect())
}

/// Loads of a packing.
pub fn trip_loads(sizes: &[Rat], packing: &[Vec<usize>]) -> Vec<Rat> {
    packing.iter().map(|t| t.iter().map(|&i| sizes[i].clone()).sum()).collect()
}
