//! Finite sets with an action of a subgroup of the lattice's group.
//!
//! An `H`-set for `H ≤ G` is stored against the ambient lattice of `G`, so
//! stabilizers are plain lattice indices and orbit types are keyed by
//! `H`-conjugacy-class representatives.

mod functors;
mod slice;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;


use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::SubgroupLattice;

pub use functors::CoinductionPlan;
pub use slice::{dependent_product, exponential_diagram, pullback, DependentProduct, ExponentialDiagram, Pullback, SlicedGSet};

#[derive(Clone)]
pub struct GSet {
    lattice: Arc<SubgroupLattice>,
    acting: usize,
    size: usize,
    /// `act[pos * size + x]`, where `pos` is the position of the group element in the acting subgroup.
    act: Arc<[u32]>,
}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GSet")
            .field("acting", &self.lattice.label(self.acting))
            .field("size", &self.size)
            .finish()
    }
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice)
            && self.acting == other.acting
            && self.size == other.size
            && (Arc::ptr_eq(&self.act, &other.act) || self.act == other.act)
    }
}

impl Eq for GSet {}

impl GSet {
    /// Validating constructor. `act[pos * size + x]` is the image of `x` under the
    /// `pos`-th element (in increasing index order) of the acting subgroup.
    pub fn new(lattice: Arc<SubgroupLattice>, acting: usize, size: usize, act: Vec<u32>) -> Result<GSet> {
        if acting >= lattice.len() {
            return Err(Error::domain(format!("no subgroup with index {acting}")));
        }
        let h = lattice.order(acting);
        if act.len() != h * size {
            return Err(Error::domain(format!(
                "action table has {} entries, expected {}",
                act.len(),
                h * size
            )));
        }
        if act.iter().any(|&y| y as usize >= size) {
            return Err(Error::domain("action table leaves the set"));
        }
        let set = GSet::from_table(lattice, acting, size, act);
        set.check_action()?;
        Ok(set)
    }

    pub(crate) fn from_table(lattice: Arc<SubgroupLattice>, acting: usize, size: usize, act: Vec<u32>) -> GSet {
        GSet {
            lattice,
            acting,
            size,
            act: act.into(),
        }
    }

    /// Builds the action table from `image(g, x)` for every `g` in the acting subgroup.
    pub(crate) fn from_fn(
        lattice: Arc<SubgroupLattice>,
        acting: usize,
        size: usize,
        mut image: impl FnMut(usize, usize) -> usize,
    ) -> GSet {
        let elements = lattice.subgroup(acting).elements().to_vec();
        let mut act = Vec::with_capacity(elements.len() * size);
        for &g in &elements {
            for x in 0..size {
                act.push(image(g, x) as u32);
            }
        }
        GSet::from_table(lattice, acting, size, act)
    }

    /// Checks the identity and compatibility axioms exhaustively.
    pub fn check_action(&self) -> Result<()> {
        let elements = self.lattice.subgroup(self.acting).elements();
        let g = self.lattice.group();
        for x in 0..self.size {
            if self.act(0, x) != x {
                return Err(Error::domain("identity does not act trivially"));
            }
        }
        for &a in elements {
            for &b in elements {
                let ab = g.mul(a, b);
                for x in 0..self.size {
                    if self.act(a, self.act(b, x)) != self.act(ab, x) {
                        return Err(Error::domain("action is not compatible with multiplication"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    /// Lattice index of the acting subgroup.
    pub fn acting(&self) -> usize {
        self.acting
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Image of point `x` under group element `g`, which must lie in the acting subgroup.
    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        let pos = self
            .lattice
            .position(self.acting, g)
            .unwrap_or_else(|| panic!("element {g} does not lie in the acting subgroup"));
        self.act[pos * self.size + x] as usize
    }

    #[inline]
    fn act_at(&self, pos: usize, x: usize) -> usize {
        self.act[pos * self.size + x] as usize
    }

    pub(crate) fn same_action(&self, other: &GSet) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice) && self.acting == other.acting
    }

    pub(crate) fn require_same_action(&self, other: &GSet) -> Result<()> {
        if self.same_action(other) {
            Ok(())
        } else {
            Err(Error::domain("G-sets are acted on by different groups"))
        }
    }

    /// The empty set.
    pub fn empty(lattice: Arc<SubgroupLattice>, acting: usize) -> GSet {
        GSet::from_table(lattice, acting, 0, Vec::new())
    }

    /// `size` points, all fixed.
    pub fn trivial(lattice: Arc<SubgroupLattice>, acting: usize, size: usize) -> GSet {
        GSet::from_fn(lattice, acting, size, |_, x| x)
    }

    /// The orbit `H/K` (left cosets, canonical least representatives, `eK` first).
    pub fn transitive(lattice: Arc<SubgroupLattice>, h: usize, k: usize) -> Result<GSet> {
        if !lattice.contains(h, k) {
            return Err(Error::domain(format!(
                "{} is not a subgroup of {}",
                lattice.label(k),
                lattice.label(h)
            )));
        }
        let reps = lattice.left_coset_reps(h, k);
        let g = lattice.group();
        let mut coset = vec![u32::MAX; g.order()];
        for (i, &r) in reps.iter().enumerate() {
            for &y in lattice.subgroup(k).elements() {
                coset[g.mul(r, y)] = i as u32;
            }
        }
        let size = reps.len();
        let table_lattice = lattice.clone();
        Ok(GSet::from_fn(lattice, h, size, |a, i| {
            coset[table_lattice.group().mul(a, reps[i])] as usize
        }))
    }

    /// `G/K` acted on by the whole group.
    pub fn orbit(lattice: Arc<SubgroupLattice>, k: usize) -> Result<GSet> {
        let top = lattice.top();
        GSet::transitive(lattice, top, k)
    }

    pub fn stabilizer(&self, x: usize) -> usize {
        let elements = self.lattice.subgroup(self.acting).elements();
        let n = self.lattice.group().order();
        let members = BitSet::from_indices(
            n,
            elements
                .iter()
                .enumerate()
                .filter(|&(pos, _)| self.act_at(pos, x) == x)
                .map(|(_, &g)| g),
        );
        self.lattice
            .index_of(&members)
            .expect("stabilizers are subgroups")
    }

    /// Orbits as sorted point lists, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let h = self.lattice.order(self.acting);
        let mut seen = BitSet::new(self.size);
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen.contains(x) {
                continue;
            }
            let mut orbit = Vec::new();
            for pos in 0..h {
                let y = self.act_at(pos, x);
                if seen.insert(y) {
                    orbit.push(y);
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn orbit_profile(&self) -> OrbitProfile {
        let mut counts = BTreeMap::new();
        for orbit in self.orbits() {
            let stab = self.stabilizer(orbit[0]);
            *counts.entry(self.lattice.class_rep_in(self.acting, stab)).or_insert(0usize) += 1;
        }
        OrbitProfile {
            acting: self.acting,
            counts,
        }
    }

    /// Isomorphism of finite `H`-sets, decided by orbit profiles.
    pub fn is_isomorphic(&self, other: &GSet) -> Result<bool> {
        self.require_same_action(other)?;
        Ok(self.size == other.size && self.orbit_profile() == other.orbit_profile())
    }

    pub fn disjoint_union(sets: &[GSet]) -> Result<GSet> {
        let Some(first) = sets.first() else {
            return Err(Error::domain("disjoint union of an empty list has no acting group"));
        };
        for s in sets {
            first.require_same_action(s)?;
        }
        let mut offsets = Vec::with_capacity(sets.len());
        let mut total = 0;
        for s in sets {
            offsets.push(total);
            total += s.size;
        }
        let h = first.lattice.order(first.acting);
        let mut act = Vec::with_capacity(h * total);
        for pos in 0..h {
            for (s, &off) in sets.iter().zip(&offsets) {
                for x in 0..s.size {
                    act.push((off + s.act_at(pos, x)) as u32);
                }
            }
        }
        Ok(GSet::from_table(first.lattice.clone(), first.acting, total, act))
    }

    /// Cartesian product with the diagonal action; the point `(x, y)` has index `x * |Y| + y`.
    pub fn product(&self, other: &GSet) -> Result<GSet> {
        self.require_same_action(other)?;
        let (n, m) = (self.size, other.size);
        let h = self.lattice.order(self.acting);
        let mut act = Vec::with_capacity(h * n * m);
        for pos in 0..h {
            for x in 0..n {
                let gx = self.act_at(pos, x);
                for y in 0..m {
                    act.push((gx * m + other.act_at(pos, y)) as u32);
                }
            }
        }
        Ok(GSet::from_table(self.lattice.clone(), self.acting, n * m, act))
    }

    /// The set `X` viewed as a set acted on by `g L g^-1`, where `(g l g^-1)·x = l·x`.
    pub fn conjugated(&self, g: usize) -> GSet {
        let lat = &self.lattice;
        let group = lat.group();
        let target = lat.conjugate(self.acting, g);
        let ginv = group.inv(g);
        GSet::from_fn(self.lattice.clone(), target, self.size, |a, x| {
            self.act(group.mul(group.mul(ginv, a), g), x)
        })
    }

    /// Number of points fixed by every element of subgroup `j` (which must act).
    pub fn fixed_count(&self, j: usize) -> usize {
        let elems: Vec<usize> = self
            .lattice
            .subgroup(j)
            .elements()
            .iter()
            .map(|&g| self.lattice.position(self.acting, g).expect("fixing subgroup must act"))
            .collect();
        (0..self.size)
            .filter(|&x| elems.iter().all(|&pos| self.act_at(pos, x) == x))
            .count()
    }
}

/// Multiset of orbit types: conjugacy-class representative of the stabilizer, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitProfile {
    acting: usize,
    counts: BTreeMap<usize, usize>,
}

impl OrbitProfile {
    pub fn new(acting: usize) -> Self {
        OrbitProfile {
            acting,
            counts: BTreeMap::new(),
        }
    }

    /// Adds `count` orbits of type `[H/L]`; `l` is normalized to its class representative.
    pub fn add(&mut self, lattice: &SubgroupLattice, l: usize, count: usize) {
        if count > 0 {
            *self.counts.entry(lattice.class_rep_in(self.acting, l)).or_insert(0) += count;
        }
    }

    pub fn acting(&self) -> usize {
        self.acting
    }

    /// `(class representative, multiplicity)` in lattice order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn count(&self, rep: usize) -> usize {
        self.counts.get(&rep).copied().unwrap_or(0)
    }

    pub fn orbit_count(&self) -> usize {
        self.counts.values().sum()
    }

    /// Number of points of any set with this profile.
    pub fn cardinality(&self, lattice: &SubgroupLattice) -> usize {
        let h = lattice.order(self.acting);
        self.counts.iter().map(|(&l, &c)| c * (h / lattice.order(l))).sum()
    }

    /// Sorted `(label, multiplicity)` pairs.
    pub fn labelled(&self, lattice: &SubgroupLattice) -> Vec<(String, usize)> {
        let mut v: Vec<(String, usize)> = self.counts.iter().map(|(&l, &c)| (lattice.label(l).to_string(), c)).collect();
        v.sort();
        v
    }

    /// Human-readable sum such as `2*[C2/C2] + 1*[C2/e]`.
    pub fn display(&self, lattice: &SubgroupLattice) -> String {
        if self.counts.is_empty() {
            return "0".into();
        }
        let h = lattice.label(self.acting);
        self.counts
            .iter()
            .map(|(&l, &c)| format!("{c}*[{h}/{}]", lattice.label(l)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Equivariant map between two sets with the same acting subgroup.
#[derive(Clone, PartialEq, Eq)]
pub struct GMap {
    source: GSet,
    target: GSet,
    map: Arc<[u32]>,
}

impl fmt::Debug for GMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GMap")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("map", &self.map)
            .finish()
    }
}

impl GMap {
    /// Validating constructor: checks totality and equivariance.
    pub fn new(source: GSet, target: GSet, map: Vec<u32>) -> Result<GMap> {
        source.require_same_action(&target)?;
        if map.len() != source.size {
            return Err(Error::domain("map is not total on its source"));
        }
        if map.iter().any(|&y| y as usize >= target.size) {
            return Err(Error::domain("map leaves its target"));
        }
        let h = source.lattice.order(source.acting);
        for pos in 0..h {
            for x in 0..source.size {
                if map[source.act_at(pos, x)] as usize != target.act_at(pos, map[x] as usize) {
                    return Err(Error::domain("map is not equivariant"));
                }
            }
        }
        Ok(GMap {
            source,
            target,
            map: map.into(),
        })
    }

    pub fn identity(x: &GSet) -> GMap {
        GMap {
            source: x.clone(),
            target: x.clone(),
            map: (0..x.size as u32).collect::<Vec<_>>().into(),
        }
    }

    /// The unique map to the one-point set.
    pub fn to_point(x: &GSet) -> GMap {
        GMap {
            source: x.clone(),
            target: GSet::trivial(x.lattice.clone(), x.acting, 1),
            map: vec![0u32; x.size].into(),
        }
    }

    /// The fold map `X ⊔ ... ⊔ X → X` with `copies` summands.
    pub fn fold(x: &GSet, copies: usize) -> Result<GMap> {
        let source = GSet::disjoint_union(&vec![x.clone(); copies.max(1)])?;
        let source = if copies == 0 { GSet::empty(x.lattice.clone(), x.acting) } else { source };
        let map = (0..source.size).map(|p| (p % x.size.max(1)) as u32).collect();
        GMap::new(source, x.clone(), map)
    }

    /// The canonical quotient `A/K → A/H` for `K ≤ H ≤ A`.
    pub fn quotient(lattice: Arc<SubgroupLattice>, ambient: usize, k: usize, h: usize) -> Result<GMap> {
        if !lattice.contains(h, k) {
            return Err(Error::domain(format!(
                "{} is not a subgroup of {}",
                lattice.label(k),
                lattice.label(h)
            )));
        }
        let src = GSet::transitive(lattice.clone(), ambient, k)?;
        let tgt = GSet::transitive(lattice.clone(), ambient, h)?;
        let reps = lattice.left_coset_reps(ambient, k);
        let g = lattice.group();
        let hreps = lattice.left_coset_reps(ambient, h);
        let map = reps
            .iter()
            .map(|&r| {
                hreps
                    .iter()
                    .position(|&s| lattice.subgroup(h).contains(g.mul(g.inv(s), r)))
                    .expect("every element lies in some coset") as u32
            })
            .collect();
        GMap::new(src, tgt, map)
    }

    pub fn source(&self) -> &GSet {
        &self.source
    }

    pub fn target(&self) -> &GSet {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.map
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GMap) -> Result<GMap> {
        if self.target != other.source {
            return Err(Error::domain("maps are not composable"));
        }
        Ok(GMap {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&x| other.map[x as usize]).collect::<Vec<_>>().into(),
        })
    }

    /// Points of the source over `y`, in increasing order.
    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.source.size).filter(|&x| self.apply(x) == y).collect()
    }
}
