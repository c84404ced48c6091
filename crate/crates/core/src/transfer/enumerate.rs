//! Exhaustive enumeration of transfer systems.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Relation, TransferSystem};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::SubgroupLattice;
use crate::limits::Limits;

/// Proper inclusions `k ⊊ h`, grouped into orbits under simultaneous conjugation.
/// Orbits are sorted, and ordered by their least pair.
pub fn proper_pair_orbits(lattice: &SubgroupLattice) -> Vec<Vec<(usize, usize)>> {
    let n = lattice.len();
    let order = lattice.group().order();
    let mut seen = vec![false; n * n];
    let mut orbits = Vec::new();
    for k in 0..n {
        for h in lattice.supersets(k).iter().filter(|&h| h != k) {
            if seen[k * n + h] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for g in 0..order {
                let pair = (lattice.conjugate(k, g), lattice.conjugate(h, g));
                seen[pair.0 * n + pair.1] = true;
                orbit.insert(pair);
            }
            orbits.push(orbit.into_iter().collect());
        }
    }
    orbits
}

fn sort_canonically(systems: &mut [TransferSystem]) {
    systems.sort_by_cached_key(|t| (t.size(), t.proper_pairs().collect::<Vec<_>>()));
}

/// All transfer systems on the lattice, sorted by size and then by pair list.
///
/// Backtracks over conjugation orbits of proper inclusions. Excluding an orbit
/// forbids it; including one replaces the current system by the closure, which
/// is pruned if it reaches a forbidden orbit.
pub fn enumerate(lattice: Arc<SubgroupLattice>, limits: &Limits) -> Result<Vec<TransferSystem>> {
    let mut out = Vec::new();
    for_each_transfer_system(lattice, limits, |t| out.push(t.clone()))?;
    sort_canonically(&mut out);
    Ok(out)
}

/// Visits every transfer system once, in search order, without storing them.
/// Returns the number visited.
pub fn for_each_transfer_system(
    lattice: Arc<SubgroupLattice>,
    limits: &Limits,
    mut visit: impl FnMut(&TransferSystem),
) -> Result<usize> {
    if lattice.len() > limits.max_enumerate_subgroups {
        return Err(Error::resource(format!(
            "lattice has {} subgroups, enumeration is gated at {}",
            lattice.len(),
            limits.max_enumerate_subgroups
        )));
    }
    let orbits = proper_pair_orbits(&lattice);
    let reps: Vec<(usize, usize)> = orbits.iter().map(|o| o[0]).collect();
    let mut forbidden = Vec::new();
    let mut count = 0;
    descend(&reps, 0, TransferSystem::diagonal(lattice), &mut forbidden, &mut |t| {
        count += 1;
        visit(t)
    });
    Ok(count)
}

fn descend(
    reps: &[(usize, usize)],
    i: usize,
    current: TransferSystem,
    forbidden: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&TransferSystem),
) {
    let Some(&(k, h)) = reps.get(i) else {
        visit(&current);
        return;
    };
    if current.relates(k, h) {
        descend(reps, i + 1, current, forbidden, visit);
        return;
    }
    forbidden.push((k, h));
    descend(reps, i + 1, current.clone(), forbidden, visit);
    forbidden.pop();
    let grown = current.extended([(k, h)]);
    if forbidden.iter().all(|&(a, b)| !grown.relates(a, b)) {
        descend(reps, i + 1, grown, forbidden, visit);
    }
}

fn is_transfer_system(lattice: &SubgroupLattice, rel: &Relation) -> bool {
    let n = lattice.len();
    let order = lattice.group().order();
    for k in 0..n {
        for h in rel[k].iter() {
            if !rel[h].is_subset(&rel[k]) {
                return false;
            }
            for g in 1..order {
                if !rel[lattice.conjugate(k, g)].contains(lattice.conjugate(h, g)) {
                    return false;
                }
            }
            for l in 0..n {
                if !rel[lattice.intersection(k, l)].contains(lattice.intersection(h, l)) {
                    return false;
                }
            }
        }
    }
    true
}

/// All transfer systems by filtering every subset of proper inclusions.
/// Refuses lattices with more than 20 proper inclusions.
pub fn enumerate_naive(lattice: Arc<SubgroupLattice>) -> Result<Vec<TransferSystem>> {
    let n = lattice.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|k| lattice.supersets(k).iter().filter(move |&h| h != k).map(move |h| (k, h)))
        .collect();
    if pairs.len() > 20 {
        return Err(Error::resource(format!(
            "naive enumeration over 2^{} candidates is gated at 2^20",
            pairs.len()
        )));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let mut rel: Relation = (0..n).map(|k| BitSet::from_indices(n, [k])).collect();
        for (bit, &(k, h)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                rel[k].insert(h);
            }
        }
        if is_transfer_system(&lattice, &rel) {
            out.push(TransferSystem::from_closed(lattice.clone(), rel));
        }
    }
    sort_canonically(&mut out);
    Ok(out)
}
