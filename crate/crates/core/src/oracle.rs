//! Compatibility decided through coinduction: a pair is compatible exactly when
//! coinducing any additively admissible `K`-set along a multiplicative arrow
//! `K → H` yields an additively admissible `H`-set.
//!
//! Only sets with at most `[H:K]` orbits are tried. A `K`-map `H → X` takes at
//! most `[H:K]` values, so it lies in the coinduction of a sub-`K`-set with at
//! most that many orbits, and has the same stabilizer there.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gset::{CoinductionPlan, GMap, GSet};
use crate::lattice::SubgroupLattice;
use crate::limits::Limits;
use crate::transfer::{compatible, enumerate, proper_pair_orbits, TransferSystem};

/// Whether every orbit stabilizer `L` of the `H`-set `x` has `L → H`.
pub fn admissible_hset(ta: &TransferSystem, x: &GSet) -> bool {
    let h = x.acting();
    x.orbits().iter().all(|o| ta.relates(x.stabilizer(o[0]), h))
}

/// Largest number of orbits in the test sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrbitCap {
    /// `[H:K]` orbits.
    #[default]
    Index,
    /// `[H:K] + n` orbits.
    IndexPlus(usize),
}

/// A coinduced orbit that the additive system does not admit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailingInstance {
    pub k: usize,
    pub h: usize,
    /// The `K`-set as `(L, multiplicity)` for orbits `K/L`.
    pub kset: Vec<(usize, usize)>,
    /// Stabilizer (class representative in `H`) of the inadmissible coinduced orbit.
    pub stabilizer: usize,
}

impl FailingInstance {
    /// The `K`-set as a disjoint union of canonical orbits.
    pub fn realize(&self, lattice: &Arc<SubgroupLattice>) -> Result<GSet> {
        let mut parts = vec![GSet::empty(lattice.clone(), self.k)];
        for &(l, mult) in &self.kset {
            let orbit = GSet::transitive(lattice.clone(), self.k, l)?;
            parts.extend(std::iter::repeat(orbit).take(mult));
        }
        GSet::disjoint_union(&parts)
    }

    /// Re-derives the failure from scratch, materializing the coinduced set when
    /// it fits within `limits` and counting through fixed points otherwise.
    pub fn recheck(&self, tm: &TransferSystem, ta: &TransferSystem, limits: &Limits) -> Result<bool> {
        let lat = tm.lattice();
        if !tm.relates(self.k, self.h) || !self.kset.iter().all(|&(l, _)| ta.relates(l, self.k)) {
            return Ok(false);
        }
        if ta.relates(self.stabilizer, self.h) {
            return Ok(false);
        }
        let x = self.realize(lat)?;
        let profile = match x.coinduce(self.h, limits) {
            Ok(co) => co.orbit_profile(),
            Err(Error::Resource(_)) => x.coinduce_profile(self.h)?,
            Err(e) => return Err(e),
        };
        Ok(profile.count(self.stabilizer) > 0)
    }

    pub fn describe(&self, lattice: &SubgroupLattice) -> String {
        let lb = |s: usize| lattice.label(s);
        let kset: Vec<String> = self
            .kset
            .iter()
            .map(|&(l, m)| format!("{m}*[{}/{}]", lb(self.k), lb(l)))
            .collect();
        format!(
            "coinducing {} along {} -> {} gives an orbit {}/{} that is not additively admissible",
            kset.join(" + "),
            lb(self.k),
            lb(self.h),
            lb(self.h),
            lb(self.stabilizer)
        )
    }

    pub fn to_json(&self, lattice: &SubgroupLattice) -> Value {
        let lb = |s: usize| lattice.label(s).to_string();
        json!({
            "k": lb(self.k),
            "h": lb(self.h),
            "kset": self.kset.iter().map(|&(l, m)| json!([lb(l), m])).collect::<Vec<_>>(),
            "orbit_stabilizer": lb(self.stabilizer),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub failing: Option<FailingInstance>,
    /// Conjugacy classes of multiplicative arrows `K → H` (with `K ≠ H`) scanned.
    pub pairs_scanned: usize,
    /// Test sets coinduced.
    pub instances: usize,
}

impl OracleReport {
    pub fn is_compatible(&self) -> bool {
        self.failing.is_none()
    }
}

/// Per-lattice data shared by every oracle run: one representative `(K, H)` per
/// conjugacy class of proper inclusions, with its counting plan and the table
/// `|(K/L)^J|` for `J, L ≤ K`.
pub struct OracleCache {
    lattice: Arc<SubgroupLattice>,
    entries: Vec<CacheEntry>,
}

struct CacheEntry {
    k: usize,
    h: usize,
    plan: CoinductionPlan,
    /// `K`-conjugacy class representatives `L ≤ K`, each with `j ↦ |(K/L)^J|` over all `J ≤ K`.
    orbit_marks: Vec<(usize, Vec<(usize, usize)>)>,
}

impl OracleCache {
    pub fn new(lattice: Arc<SubgroupLattice>, limits: &Limits) -> Result<Self> {
        let order = lattice.group().order();
        if order > limits.max_oracle_order {
            return Err(Error::resource(format!(
                "coinduction oracle is gated at order {}, group has order {order}",
                limits.max_oracle_order
            )));
        }
        let entries = proper_pair_orbits(&lattice)
            .into_iter()
            .map(|orbit| {
                let (k, h) = orbit[0];
                let plan = CoinductionPlan::new(lattice.clone(), k, h)?;
                let subs: Vec<usize> = lattice.subsets(k).iter().collect();
                let orbit_marks = lattice
                    .class_reps_in(k)
                    .into_iter()
                    .map(|l| {
                        let orbit = GSet::transitive(lattice.clone(), k, l)?;
                        Ok((l, subs.iter().map(|&j| (j, orbit.fixed_count(j))).collect()))
                    })
                    .collect::<Result<_>>()?;
                Ok(CacheEntry { k, h, plan, orbit_marks })
            })
            .collect::<Result<_>>()?;
        Ok(OracleCache { lattice, entries })
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }
}

/// Multisets of size `1..=cap` over `t` types, as count vectors, by size then lexicographically.
fn multisets(t: usize, cap: usize) -> Vec<Vec<usize>> {
    fn rec(t: usize, i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i + 1 == t {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            rec(t, i + 1, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if t == 0 {
        return out;
    }
    for size in 1..=cap {
        rec(t, 0, size, &mut Vec::with_capacity(t), &mut out);
    }
    out
}

pub fn coinduction_compatible(tm: &TransferSystem, ta: &TransferSystem, cap: OrbitCap, limits: &Limits) -> Result<OracleReport> {
    let cache = OracleCache::new(tm.lattice().clone(), limits)?;
    coinduction_compatible_cached(&cache, tm, ta, cap)
}

pub fn coinduction_compatible_cached(
    cache: &OracleCache,
    tm: &TransferSystem,
    ta: &TransferSystem,
    cap: OrbitCap,
) -> Result<OracleReport> {
    if !Arc::ptr_eq(tm.lattice(), &cache.lattice) || !Arc::ptr_eq(ta.lattice(), &cache.lattice) {
        return Err(Error::domain("transfer systems live on a different lattice"));
    }
    if !tm.refines(ta)? {
        return Err(Error::domain("the multiplicative system does not refine the additive one"));
    }
    let lat = &cache.lattice;
    let mut report = OracleReport {
        failing: None,
        pairs_scanned: 0,
        instances: 0,
    };
    for entry in cache.entries.iter().filter(|e| tm.relates(e.k, e.h)) {
        report.pairs_scanned += 1;
        let (k, h) = (entry.k, entry.h);
        let index = lat.order(h) / lat.order(k);
        let limit = match cap {
            OrbitCap::Index => index,
            OrbitCap::IndexPlus(n) => index + n,
        };
        let types: Vec<&(usize, Vec<(usize, usize)>)> =
            entry.orbit_marks.iter().filter(|(l, _)| ta.relates(*l, k)).collect();
        let sets = multisets(types.len(), limit);
        report.instances += sets.len();
        let failure = sets.par_iter().find_map_first(|counts| {
            let fixed = |j: usize| -> usize {
                types
                    .iter()
                    .zip(counts)
                    .map(|((_, marks), &c)| c * marks.iter().find(|&&(jj, _)| jj == j).map_or(0, |&(_, f)| f))
                    .sum()
            };
            entry
                .plan
                .stabilizer_counts(fixed)
                .into_iter()
                .find(|&(l, _)| !ta.relates(l, h))
                .map(|(l, _)| FailingInstance {
                    k,
                    h,
                    kset: types
                        .iter()
                        .zip(counts)
                        .filter(|&(_, &c)| c > 0)
                        .map(|((l, _), &c)| (*l, c))
                        .collect(),
                    stabilizer: l,
                })
        });
        if failure.is_some() {
            report.failing = failure;
            break;
        }
    }
    Ok(report)
}

/// Coinduces `f` along `K → H` and asks whether the result is an additively admissible map.
pub fn check_map_coinduction(
    tm: &TransferSystem,
    ta: &TransferSystem,
    k: usize,
    h: usize,
    f: &GMap,
    limits: &Limits,
) -> Result<bool> {
    let lat = tm.lattice();
    if !lat.contains(h, k) || !tm.relates(k, h) {
        return Err(Error::domain(format!(
            "{} -> {} is not a multiplicative arrow",
            lat.label(k),
            lat.label(h)
        )));
    }
    if f.source().acting() != k {
        return Err(Error::domain("map is not a map of K-sets"));
    }
    if !ta.map_in_indexing(f)? {
        return Err(Error::domain("map is not additively admissible"));
    }
    ta.map_in_indexing(&f.coinduce(h, limits)?)
}

/// Subgroups `K, L ≤ H` where every transfer on the right of the double coset
/// formula for `R^H_K T^H_L` exists but `T^H_L` itself does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MackeyGap {
    pub k: usize,
    pub h: usize,
    pub l: usize,
    /// Some `K ∩ γLγ⁻¹` is a proper subgroup of `K`, so a right-hand transfer is not an identity.
    pub proper: bool,
}

/// All Mackey gaps of an additive system, one `(K, H, L)` per triple of subgroups.
pub fn mackey_gaps(ta: &TransferSystem) -> Vec<MackeyGap> {
    let lat = ta.lattice();
    let mut out = Vec::new();
    for h in 0..lat.len() {
        for l in lat.subsets(h).iter().filter(|&l| !ta.relates(l, h)) {
            for k in lat.subsets(h).iter() {
                let meets: Vec<usize> = lat
                    .double_coset_reps_in(h, k, l)
                    .into_iter()
                    .map(|g| lat.intersection(k, lat.conjugate(l, g)))
                    .collect();
                if meets.iter().all(|&m| ta.relates(m, k)) {
                    out.push(MackeyGap { k, h, l, proper: meets.iter().any(|&m| m != k) });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub tm: usize,
    pub ta: usize,
    pub combinatorial: bool,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub group: String,
    pub systems: usize,
    pub pairs_tested: usize,
    pub agreements: usize,
    pub compatible_pairs: usize,
    pub disagreements: Vec<Disagreement>,
    /// Proper Mackey gaps summed over the enumerated systems used additively.
    pub mackey_gaps: usize,
    /// The first proper gap found, as `(additive system, K, H, L)` labels.
    pub mackey_gap_example: Option<(Vec<[String; 2]>, String, String, String)>,
}

impl EquivalenceReport {
    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group,
            "systems": self.systems,
            "pairs_tested": self.pairs_tested,
            "agreements": self.agreements,
            "compatible_pairs": self.compatible_pairs,
            "disagreements": self.disagreements,
            "mackey_gaps": {
                "proper": self.mackey_gaps,
                "example": self.mackey_gap_example.as_ref().map(|(ta, k, h, l)| json!({"ta": ta, "k": k, "h": h, "l": l})),
            },
        })
    }
}

/// Compares the combinatorial check and the oracle on every refining pair of
/// enumerated transfer systems.
pub fn verify_equivalence(lattice: Arc<SubgroupLattice>, limits: &Limits) -> Result<EquivalenceReport> {
    let order = lattice.group().order();
    if order > limits.max_sweep_order {
        return Err(Error::resource(format!(
            "equivalence sweep is gated at order {}, group has order {order}",
            limits.max_sweep_order
        )));
    }
    let systems = enumerate(lattice.clone(), limits)?;
    let cache = OracleCache::new(lattice.clone(), limits)?;
    let pairs: Vec<(usize, usize)> = (0..systems.len())
        .flat_map(|i| (0..systems.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| systems[i].refines(&systems[j]).unwrap_or(false))
        .collect();
    let verdicts: Vec<(bool, bool)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (tm, ta) = (&systems[i], &systems[j]);
            let comb = compatible(tm, ta)?.is_compatible();
            let orc = coinduction_compatible_cached(&cache, tm, ta, OrbitCap::Index)?.is_compatible();
            Ok((comb, orc))
        })
        .collect::<Result<_>>()?;
    let mut report = EquivalenceReport {
        group: lattice.group().name().to_string(),
        systems: systems.len(),
        pairs_tested: pairs.len(),
        agreements: 0,
        compatible_pairs: 0,
        disagreements: Vec::new(),
        mackey_gaps: 0,
        mackey_gap_example: None,
    };
    let lb = |s: usize| lattice.label(s).to_string();
    for ta in &systems {
        for gap in mackey_gaps(ta).into_iter().filter(|g| g.proper) {
            report.mackey_gaps += 1;
            report.mackey_gap_example.get_or_insert_with(|| {
                let pairs = ta.proper_pairs().map(|(k, h)| [lb(k), lb(h)]).collect();
                (pairs, lb(gap.k), lb(gap.h), lb(gap.l))
            });
        }
    }
    for (&(i, j), &(comb, orc)) in pairs.iter().zip(&verdicts) {
        if comb == orc {
            report.agreements += 1;
            report.compatible_pairs += comb as usize;
        } else {
            report.disagreements.push(Disagreement {
                tm: i,
                ta: j,
                combinatorial: comb,
                oracle: orc,
            });
        }
    }
    Ok(report)
}
