use rustc_hash::FxHashSet;

use super::Element;
use crate::error::{Error, Result};

/// All elements of `<gens>` by breadth-first closure, failing once more
/// than `bound` elements have been found.
pub fn enumerate_small<E: Element>(identity: &E, gens: &[E], bound: usize) -> Result<FxHashSet<E>> {
    let mut seen = FxHashSet::default();
    seen.insert(identity.clone());
    let mut queue = vec![identity.clone()];
    let mut k = 0;
    while k < queue.len() {
        for g in gens {
            let y = g.mul(&queue[k]);
            if !seen.contains(&y) {
                if seen.len() >= bound {
                    return Err(Error::OrderGuard(bound as u128));
                }
                seen.insert(y.clone());
                queue.push(y);
            }
        }
        k += 1;
    }
    Ok(seen)
}

/// Period by repeated multiplication, up to `bound` steps.
pub fn period_by_powers<E: Element>(g: &E, bound: u64) -> Option<u64> {
    let mut x = g.clone();
    for k in 1..=bound {
        if x.is_identity() {
            return Some(k);
        }
        x = x.mul(g);
    }
    None
}
