//! Seeded random instances of the double coset formula and the interchange law.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::burnside::{BurnsideElement, TambaraContext};
use crate::error::{Error, Result};
use crate::gset::{GMap, GSet, SlicedGSet};
use crate::lattice::SubgroupLattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LawTally {
    pub mackey_checked: usize,
    pub mackey_failed: usize,
    pub interchange_checked: usize,
    pub interchange_failed: usize,
    /// Interchange instances dropped because a dependent product exceeded the limits.
    pub skipped: usize,
}

impl LawTally {
    pub fn failures(&self) -> usize {
        self.mackey_failed + self.interchange_failed
    }
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, items: &[T]) -> Option<T> {
    items.choose(rng).copied()
}

fn random_element(lat: &Arc<SubgroupLattice>, level: usize, rng: &mut ChaCha8Rng) -> Result<BurnsideElement> {
    let subs: Vec<usize> = lat.subsets(level).iter().collect();
    let terms: Vec<(usize, i64)> = (0..rng.gen_range(1..=3))
        .map(|_| (pick(rng, &subs).expect("the trivial subgroup"), rng.gen_range(-2..=3)))
        .collect();
    BurnsideElement::from_terms(lat.clone(), level, &terms)
}

/// One random instance of each law for the context.
fn one_round(ctx: &TambaraContext, rng: &mut ChaCha8Rng, tally: &mut LawTally) -> Result<()> {
    let lat = ctx.lattice().clone();
    let (tm, ta) = (ctx.multiplicative(), ctx.additive());
    let top = lat.top();

    // double coset formula: L → H additive, K ≤ H arbitrary
    let additive: Vec<(usize, usize)> = ta.pairs().collect();
    let (l, h) = pick(rng, &additive).expect("reflexive pairs");
    let k = pick(rng, &lat.subsets(h).iter().collect::<Vec<_>>()).expect("the trivial subgroup");
    let x = random_element(&lat, l, rng)?;
    tally.mackey_checked += 1;
    if !ctx.verify_mackey_dcf(k, h, &x)? {
        tally.mackey_failed += 1;
    }

    // interchange: n = G/K → G/H multiplicative, t = G/J ⊔ G/K → G/K with J → K additive
    let multiplicative: Vec<(usize, usize)> = tm.pairs().collect();
    let (k, h) = pick(rng, &multiplicative).expect("reflexive pairs");
    let below: Vec<usize> = (0..lat.len()).filter(|&j| ta.relates(j, k)).collect();
    let j = pick(rng, &below).expect("K itself");
    let n = GMap::quotient(lat.clone(), top, k, h)?;
    let b = n.source().clone();
    let q = GMap::quotient(lat.clone(), top, j, k)?;
    let a = GSet::disjoint_union(&[q.source().clone(), b.clone()])?;
    let t_map = (0..q.source().size())
        .map(|p| q.apply(p) as u32)
        .chain((0..b.size()).map(|p| p as u32))
        .collect();
    let t = GMap::new(a.clone(), b, t_map)?;
    // x over A: one orbit G/M → G/J and one G/M' → G/K, each a quotient
    let m1 = pick(rng, &lat.subsets(j).iter().collect::<Vec<_>>()).expect("the trivial subgroup");
    let m2 = pick(rng, &lat.subsets(k).iter().collect::<Vec<_>>()).expect("the trivial subgroup");
    let f1 = GMap::quotient(lat.clone(), top, m1, j)?;
    let f2 = GMap::quotient(lat.clone(), top, m2, k)?;
    let total = GSet::disjoint_union(&[f1.source().clone(), f2.source().clone()])?;
    let offset = f1.target().size();
    let proj = (0..f1.source().size())
        .map(|p| f1.apply(p) as u32)
        .chain((0..f2.source().size()).map(|p| (offset + f2.apply(p)) as u32))
        .collect();
    let x = SlicedGSet::new(GMap::new(total, a, proj)?);
    match ctx.verify_tambara_interchange(&t, &n, &x) {
        Ok(ok) => {
            tally.interchange_checked += 1;
            if !ok {
                tally.interchange_failed += 1;
            }
        }
        Err(Error::Resource(_)) => tally.skipped += 1,
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Runs `rounds` random instances of both laws, reproducibly from `seed`.
pub fn check_laws(ctx: &TambaraContext, rounds: usize, seed: u64) -> Result<LawTally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = LawTally::default();
    for _ in 0..rounds {
        one_round(ctx, &mut rng, &mut tally)?;
    }
    Ok(tally)
}
