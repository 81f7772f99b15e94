use num_traits::Zero;

use super::OracleError;
use crate::num::Rat;

/// Whether `items` splits into two halves of equal sum. The empty multiset
/// counts as splittable.
pub fn partition_exists(items: &[u64]) -> bool {
    let total: u64 = items.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    let target = (total / 2) as usize;
    let mut reach = vec![false; target + 1];
    reach[0] = true;
    for &x in items {
        let x = x as usize;
        for s in (x..=target).rev() {
            if reach[s - x] {
                reach[s] = true;
            }
        }
    }
    reach[target]
}

pub(crate) const MAX_PACK_ITEMS: usize = 16;

/// Fewest bins of capacity `cap` holding every item whole, for each subset
/// of `sizes` (indexed by bitmask). Runs in `O(3^k)`.
pub(crate) fn bins_by_subset(sizes: &[Rat], cap: &Rat) -> Vec<usize> {
    let k = sizes.len();
    let full = 1usize << k;
    let mut sum = vec![Rat::zero(); full];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        sum[mask] = &sum[mask & (mask - 1)] + &sizes[low];
    }
    let fits: Vec<bool> = sum.iter().map(|s| s <= cap).collect();
    let mut bins = vec![usize::MAX; full];
    bins[0] = 0;
    for mask in 1..full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // The bin holding the lowest item: `low` plus any subset of `rest`.
        let mut sub = rest;
        loop {
            let bin = sub | low;
            if fits[bin] && bins[mask ^ bin] != usize::MAX {
                bins[mask] = bins[mask].min(bins[mask ^ bin] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    bins
}

/// Exact minimum number of bins, with one optimal packing.
pub fn min_bins(sizes: &[Rat], cap: &Rat) -> Result<(usize, Vec<Vec<usize>>), OracleError> {
    if sizes.len() > MAX_PACK_ITEMS {
        return Err(OracleError::TooLarge(format!(
            "{} items to pack, limit {MAX_PACK_ITEMS}",
            sizes.len()
        )));
    }
    if sizes.iter().any(|s| s > cap) {
        return Err(OracleError::Unsupported("an item exceeds the bin capacity".into()));
    }
    let bins = bins_by_subset(sizes, cap);
    let full = (1usize << sizes.len()) - 1;
    Ok((bins[full], packing_for(sizes, cap, &bins, full)))
}

/// Recovers an optimal packing of `mask` from the subset table.
pub(crate) fn packing_for(sizes: &[Rat], cap: &Rat, bins: &[usize], mut mask: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let bin = sub | low;
            let load: Rat = (0..sizes.len()).filter(|i| bin >> i & 1 == 1).map(|i| sizes[i].clone()).sum();
            if &load <= cap && bins[mask ^ bin] != usize::MAX && bins[mask ^ bin] + 1 == bins[mask] {
                out.push((0..sizes.len()).filter(|i| bin >> i & 1 == 1).collect());
                mask ^= bin;
                break;
            }
            assert!(sub != 0, "subset table is inconsistent");
            sub = (sub - 1) & rest;
        }
    }
    out
}
