//! Restriction, induction and coinduction along subgroup inclusions.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{GMap, GSet, OrbitProfile};
use crate::error::{Error, Result};
use crate::lattice::SubgroupLattice;
use crate::limits::Limits;

fn require_inclusion(lattice: &SubgroupLattice, k: usize, h: usize) -> Result<()> {
    if lattice.contains(h, k) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{} is not a subgroup of {}",
            lattice.label(k),
            lattice.label(h)
        )))
    }
}

/// Map from elements of `h` to the index of their coset in `reps`.
fn coset_index(lattice: &SubgroupLattice, h: usize, k: usize, reps: &[usize], right: bool) -> Vec<u32> {
    let g = lattice.group();
    let mut idx = vec![u32::MAX; g.order()];
    for (i, &r) in reps.iter().enumerate() {
        for &y in lattice.subgroup(k).elements() {
            idx[if right { g.mul(y, r) } else { g.mul(r, y) }] = i as u32;
        }
    }
    debug_assert!(lattice.subgroup(h).elements().iter().all(|&x| idx[x] != u32::MAX));
    idx
}

impl GSet {
    /// Restriction to a subgroup `k` of the acting subgroup.
    pub fn restrict(&self, k: usize) -> Result<GSet> {
        let lat = &self.lattice;
        require_inclusion(lat, k, self.acting)?;
        let mut act = Vec::with_capacity(lat.order(k) * self.size);
        for &g in lat.subgroup(k).elements() {
            let pos = lat.position(self.acting, g).expect("subgroup element");
            act.extend_from_slice(&self.act[pos * self.size..(pos + 1) * self.size]);
        }
        Ok(GSet::from_table(self.lattice.clone(), k, self.size, act))
    }

    /// Induction `H ×_K X` along `K ≤ H`, where `K` is the acting subgroup.
    ///
    /// The point `(i, x)` stands for `r_i ×_K x` with `r_i` the `i`-th least
    /// left coset representative of `H/K`, and has index `i * |X| + x`.
    pub fn induce(&self, h: usize, limits: &Limits) -> Result<GSet> {
        let lat = self.lattice.clone();
        let k = self.acting;
        require_inclusion(&lat, k, h)?;
        let reps = lat.left_coset_reps(h, k);
        let size = reps.len() * self.size;
        if size.saturating_mul(lat.order(h)) > limits.max_action_entries {
            return Err(Error::resource(format!("induced set with {size} points is too large")));
        }
        let cos = coset_index(&lat, h, k, &reps, false);
        let g = lat.group();
        let n = self.size;
        Ok(GSet::from_fn(lat.clone(), h, size, |a, p| {
            let (i, x) = (p / n, p % n);
            let y = g.mul(a, reps[i]);
            let j = cos[y] as usize;
            let kk = g.mul(g.inv(reps[j]), y);
            j * n + self.act(kk, x)
        }))
    }

    /// Coinduction `Map_K(H, X)` along `K ≤ H`, where `K` is the acting subgroup.
    ///
    /// With `t_0 = e, t_1, ...` the least right coset representatives of `K\H`,
    /// a `K`-map `f` is stored as the digits `f(t_i)` in base `|X|`, least
    /// significant first. The action is `(h·f)(t) = f(t h)`.
    pub fn coinduce(&self, h: usize, limits: &Limits) -> Result<GSet> {
        let lat = self.lattice.clone();
        let k = self.acting;
        require_inclusion(&lat, k, h)?;
        let reps = lat.right_coset_reps(h, k);
        let m = reps.len();
        let n = self.size;
        let size = u32::try_from(m)
            .ok()
            .and_then(|m| n.checked_pow(m))
            .filter(|&s| s <= limits.max_coinduce_points && s.saturating_mul(lat.order(h)) <= limits.max_action_entries)
            .ok_or_else(|| Error::resource(format!("coinduced set with {n}^{m} points is too large")))?;
        let cos = coset_index(&lat, h, k, &reps, true);
        let g = lat.group();
        let helems = lat.subgroup(h).elements();
        let mut act = Vec::with_capacity(helems.len() * size);
        let mut digits = vec![0usize; m];
        let mut moves = Vec::with_capacity(m);
        for &a in helems {
            // t_i a = k_i t_{j_i}
            moves.clear();
            for &t in &reps {
                let y = g.mul(t, a);
                let j = cos[y] as usize;
                let kk = g.mul(y, g.inv(reps[j]));
                moves.push((j, lat.position(k, kk).expect("coset decomposition")));
            }
            for p in 0..size {
                let mut q = p;
                for d in digits.iter_mut() {
                    *d = q % n;
                    q /= n;
                }
                let mut image = 0;
                for &(j, pos) in moves.iter().rev() {
                    image = image * n + self.act_at(pos, digits[j]);
                }
                act.push(image as u32);
            }
        }
        Ok(GSet::from_table(lat, h, size, act))
    }

    /// The orbit profile of `Map_K(H, X)` computed from fixed-point counts,
    /// without materializing the coinduced set.
    pub fn coinduce_profile(&self, h: usize) -> Result<OrbitProfile> {
        let plan = CoinductionPlan::new(self.lattice.clone(), self.acting, h)?;
        plan.profile(self)
    }
}

impl GMap {
    /// Coinduction of a map of `K`-sets along `K ≤ H`: post-composition with the map.
    pub fn coinduce(&self, h: usize, limits: &Limits) -> Result<GMap> {
        let source = self.source().coinduce(h, limits)?;
        let target = self.target().coinduce(h, limits)?;
        let lat = self.source().lattice();
        let m = lat.order(h) / lat.order(self.source().acting());
        let (n, t) = (self.source().size(), self.target().size());
        let map = (0..source.size())
            .map(|p| {
                let (mut q, mut image, mut weight) = (p, 0usize, 1usize);
                for _ in 0..m {
                    image += self.apply(q % n) * weight;
                    q /= n;
                    weight *= t;
                }
                image as u32
            })
            .collect();
        GMap::new(source, target, map)
    }
}

/// Precomputed double-coset data for counting orbit types of `Map_K(H, -)`.
///
/// For `M ≤ H` the `M`-fixed points of `Map_K(H, X)` number
/// `∏_{γ ∈ K\H/M} |X^{K ∩ γMγ⁻¹}|`; Möbius inversion over the subgroups of
/// `H` turns these marks into counts of points with a given stabilizer.
#[derive(Debug, Clone)]
pub struct CoinductionPlan {
    lattice: Arc<SubgroupLattice>,
    k: usize,
    h: usize,
    /// Every subgroup of `H`, in lattice order.
    subs: Vec<usize>,
    /// For each entry of `subs`, the subgroups `K ∩ γMγ⁻¹` over the double cosets.
    factors: Vec<Vec<usize>>,
    /// `H`-conjugacy-class representatives with `[N_H(L) : L]`.
    reps: Vec<(usize, usize)>,
}

impl CoinductionPlan {
    pub fn new(lattice: Arc<SubgroupLattice>, k: usize, h: usize) -> Result<Self> {
        require_inclusion(&lattice, k, h)?;
        let subs: Vec<usize> = lattice.subsets(h).iter().collect();
        let factors = subs
            .iter()
            .map(|&m| {
                lattice
                    .double_coset_reps_in(h, k, m)
                    .into_iter()
                    .map(|gamma| lattice.intersection(k, lattice.conjugate(m, gamma)))
                    .collect()
            })
            .collect();
        let reps = lattice
            .class_reps_in(h)
            .into_iter()
            .map(|l| (l, lattice.normalizer_order_in(h, l) / lattice.order(l)))
            .collect();
        Ok(CoinductionPlan {
            lattice,
            k,
            h,
            subs,
            factors,
            reps,
        })
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Orbit counts per `H`-class of stabilizers, given `|X^J|` for subgroups `J ≤ K`.
    /// Only classes with a positive count are returned.
    pub fn stabilizer_counts(&self, mut fixed: impl FnMut(usize) -> usize) -> Vec<(usize, BigUint)> {
        let n = self.lattice.len();
        let mut cache: Vec<Option<BigUint>> = vec![None; n];
        let marks: Vec<BigUint> = self
            .factors
            .iter()
            .map(|js| {
                let mut prod = BigUint::one();
                for &j in js {
                    let f = cache[j].get_or_insert_with(|| BigUint::from(fixed(j)));
                    prod *= &*f;
                }
                prod
            })
            .collect();
        let mut out = Vec::new();
        for &(l, norm_index) in &self.reps {
            let mut exact = BigInt::zero();
            for (&m, mark) in self.subs.iter().zip(&marks) {
                let mu = self.lattice.mobius(l, m);
                if mu != 0 {
                    exact += BigInt::from(mu) * BigInt::from(mark.clone());
                }
            }
            debug_assert!(!exact.is_negative());
            if exact.is_zero() {
                continue;
            }
            let exact = exact.to_biguint().expect("point counts are non-negative");
            debug_assert!((&exact % norm_index).is_zero());
            out.push((l, exact / norm_index));
        }
        out
    }

    /// Orbit profile of `Map_K(H, X)`, failing if a count overflows `usize`.
    pub fn profile(&self, x: &GSet) -> Result<OrbitProfile> {
        if x.acting != self.k || !Arc::ptr_eq(&x.lattice, &self.lattice) {
            return Err(Error::domain("set is not acted on by the plan's subgroup"));
        }
        let mut profile = OrbitProfile::new(self.h);
        for (l, count) in self.stabilizer_counts(|j| x.fixed_count(j)) {
            let count = count
                .to_usize()
                .ok_or_else(|| Error::resource("orbit count does not fit in a machine word"))?;
            profile.add(&self.lattice, l, count);
        }
        Ok(profile)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    fn lat(spec: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(Group::builtin(spec).unwrap()).unwrap())
    }

    #[test]
    fn restriction_keeps_points() {
        let l = lat("S3");
        let x = GSet::orbit(l.clone(), 1).unwrap();
        for k in l.subsets(l.top()).iter() {
            let r = x.restrict(k).unwrap();
            assert_eq!(r.size(), 3);
            assert!(r.check_action().is_ok());
        }
        let c2 = GSet::transitive(l.clone(), 1, 0).unwrap();
        assert!(c2.restrict(2).is_err());
    }

    #[test]
    fn induction_of_orbits_is_an_orbit() {
        let l = lat("S3");
        let lim = Limits::default();
        for h in 0..l.len() {
            for k in l.subsets(h).iter() {
                for j in l.subsets(k).iter() {
                    let orbit = GSet::transitive(l.clone(), k, j).unwrap();
                    let ind = orbit.induce(h, &lim).unwrap();
                    assert!(ind.check_action().is_ok());
                    let direct = GSet::transitive(l.clone(), h, j).unwrap();
                    assert!(ind.is_isomorphic(&direct).unwrap());
                }
            }
        }
    }

    #[test]
    fn coinduction_sizes_and_axioms() {
        let l = lat("C4");
        let lim = Limits::default();
        let free = GSet::transitive(l.clone(), 1, 0).unwrap();
        let co = free.coinduce(2, &lim).unwrap();
        assert_eq!(co.size(), 4);
        assert!(co.check_action().is_ok());
        let empty = GSet::empty(l.clone(), 1);
        assert_eq!(empty.coinduce(2, &lim).unwrap().size(), 0);
        let same = free.coinduce(1, &lim).unwrap();
        assert!(same.is_isomorphic(&free).unwrap());
    }

    #[test]
    fn coinduction_of_a_point_is_a_point() {
        let l = lat("S3");
        let lim = Limits::default();
        for h in 0..l.len() {
            for k in l.subsets(h).iter() {
                let pt = GSet::trivial(l.clone(), k, 1);
                let co = pt.coinduce(h, &lim).unwrap();
                assert_eq!(co.size(), 1);
            }
        }
    }

    #[test]
    fn marks_route_matches_materialized_coinduction() {
        let lim = Limits::default();
        for spec in ["C4", "C2xC2", "S3", "C6", "D4"] {
            let l = lat(spec);
            for h in 0..l.len() {
                for k in l.subsets(h).iter() {
                    for j in l.subsets(k).iter() {
                        let orbit = GSet::transitive(l.clone(), k, j).unwrap();
                        let two = GSet::disjoint_union(&[orbit.clone(), GSet::trivial(l.clone(), k, 1)]).unwrap();
                        for x in [orbit, two] {
                            let Ok(co) = x.coinduce(h, &lim) else { continue };
                            assert_eq!(co.orbit_profile(), x.coinduce_profile(h).unwrap(), "{spec} {k} {h} {j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coinduction_is_right_adjoint_to_restriction_on_counts() {
        // |Hom_H(H/L, Map_K(H, X))| = |(Map_K(H,X))^L| for every L.
        let l = lat("S3");
        let lim = Limits::default();
        let h = l.top();
        let k = 1;
        let x = GSet::transitive(l.clone(), k, 0).unwrap();
        let co = x.coinduce(h, &lim).unwrap();
        let plan = CoinductionPlan::new(l.clone(), k, h).unwrap();
        for (m, js) in plan.subs.iter().zip(&plan.factors) {
            let expected: usize = js.iter().map(|&j| x.fixed_count(j)).product();
            assert_eq!(co.fixed_count(*m), expected);
        }
    }

    #[test]
    fn oversized_coinduction_is_refused() {
        let l = lat("C8");
        let x = GSet::transitive(l.clone(), 0, 0).unwrap();
        let big = GSet::trivial(l.clone(), 0, 8);
        assert!(x.coinduce(l.top(), &Limits::default()).is_ok());
        assert!(matches!(big.coinduce(l.top(), &Limits::default()), Err(Error::Resource(_))));
        assert!(big.coinduce_profile(l.top()).is_ok());
    }
}
