//! Transfer systems on a subgroup lattice and compatibility of pairs of them.

mod enumerate;
mod format;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::gset::GMap;
use crate::lattice::SubgroupLattice;

pub use enumerate::{enumerate, enumerate_naive, for_each_transfer_system, proper_pair_orbits};
pub use format::{parse_transfer_file, LiftMode, TransferFile, TransferSystemJson};

/// A relation on subgroup indices, as rows: `rel[k]` holds every `h` with `k → h`.
pub type Relation = Vec<BitSet>;

/// One failed instance of a transfer-system axiom. Pairs are `(k, h)` meaning `k → h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    Reflexivity { k: usize },
    Inclusion { k: usize, h: usize },
    /// `k → h → l` without `k → l`.
    Transitivity { k: usize, h: usize, l: usize },
    /// `k → h` without `gkg⁻¹ → ghg⁻¹`.
    Conjugation { k: usize, h: usize, g: usize },
    /// `k → h` without `k∩l → h∩l`.
    Intersection { k: usize, h: usize, l: usize },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::Reflexivity { .. } => "reflexivity",
            Violation::Inclusion { .. } => "inclusion",
            Violation::Transitivity { .. } => "transitivity",
            Violation::Conjugation { .. } => "conjugation",
            Violation::Intersection { .. } => "intersection",
        }
    }

    /// The pair whose absence (or, for inclusion, presence) breaks the axiom.
    pub fn missing(&self, lattice: &SubgroupLattice) -> (usize, usize) {
        match *self {
            Violation::Reflexivity { k } => (k, k),
            Violation::Inclusion { k, h } => (k, h),
            Violation::Transitivity { k, l, .. } => (k, l),
            Violation::Conjugation { k, h, g } => (lattice.conjugate(k, g), lattice.conjugate(h, g)),
            Violation::Intersection { k, h, l } => (lattice.intersection(k, l), lattice.intersection(h, l)),
        }
    }

    pub fn describe(&self, lattice: &SubgroupLattice) -> String {
        let lb = |s: usize| lattice.label(s).to_string();
        match *self {
            Violation::Reflexivity { k } => format!("reflexivity: missing {0} -> {0}", lb(k)),
            Violation::Inclusion { k, h } => format!("inclusion: {} -> {} but {} is not contained in {}", lb(k), lb(h), lb(k), lb(h)),
            Violation::Transitivity { k, h, l } => {
                format!("transitivity: {} -> {} -> {} but not {} -> {}", lb(k), lb(h), lb(l), lb(k), lb(l))
            }
            Violation::Conjugation { k, h, g } => {
                let (a, b) = self.missing(lattice);
                format!(
                    "conjugation: {} -> {} but not its conjugate {} -> {} (by element {})",
                    lb(k),
                    lb(h),
                    lb(a),
                    lb(b),
                    g
                )
            }
            Violation::Intersection { k, h, l } => {
                let (a, b) = self.missing(lattice);
                format!(
                    "intersection: {} -> {} meets {} in {} -> {}, which is missing",
                    lb(k),
                    lb(h),
                    lb(l),
                    lb(a),
                    lb(b)
                )
            }
        }
    }
}

fn check_shape(lattice: &SubgroupLattice, rel: &Relation) -> Result<()> {
    let n = lattice.len();
    if rel.len() != n || rel.iter().any(|row| row.capacity() != n) {
        return Err(Error::domain(format!("relation is not {n} x {n}")));
    }
    Ok(())
}

/// Every violated axiom instance, one per missing pair and axiom, least instance first.
pub fn validate(lattice: &SubgroupLattice, rel: &Relation) -> Result<Vec<Violation>> {
    check_shape(lattice, rel)?;
    let n = lattice.len();
    let order = lattice.group().order();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |v: Violation, out: &mut Vec<Violation>| {
        if seen.insert((v.axiom(), v.missing(lattice))) {
            out.push(v);
        }
    };
    for k in 0..n {
        if !rel[k].contains(k) {
            push(Violation::Reflexivity { k }, &mut out);
        }
    }
    for k in 0..n {
        for h in rel[k].iter() {
            if !lattice.contains(h, k) {
                push(Violation::Inclusion { k, h }, &mut out);
            }
        }
    }
    for k in 0..n {
        for h in rel[k].iter() {
            for l in rel[h].iter() {
                if !rel[k].contains(l) {
                    push(Violation::Transitivity { k, h, l }, &mut out);
                }
            }
        }
    }
    for k in 0..n {
        for h in rel[k].iter() {
            for g in 0..order {
                if !rel[lattice.conjugate(k, g)].contains(lattice.conjugate(h, g)) {
                    push(Violation::Conjugation { k, h, g }, &mut out);
                }
            }
        }
    }
    for k in 0..n {
        for h in rel[k].iter() {
            for l in 0..n {
                if !rel[lattice.intersection(k, l)].contains(lattice.intersection(h, l)) {
                    push(Violation::Intersection { k, h, l }, &mut out);
                }
            }
        }
    }
    Ok(out)
}

/// A transfer system: a relation on subgroups that is reflexive, transitive,
/// refines inclusion and is closed under conjugation and under intersecting
/// with any subgroup.
#[derive(Clone)]
pub struct TransferSystem {
    lattice: Arc<SubgroupLattice>,
    rel: Relation,
}

impl PartialEq for TransferSystem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice) && self.rel == other.rel
    }
}

impl Eq for TransferSystem {}

impl fmt::Debug for TransferSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .proper_pairs()
            .map(|(k, h)| format!("{}->{}", self.lattice.label(k), self.lattice.label(h)))
            .collect();
        write!(f, "TransferSystem[{}]", pairs.join(", "))
    }
}

impl TransferSystem {
    /// Accepts a relation only if it satisfies every axiom.
    pub fn new(lattice: Arc<SubgroupLattice>, rel: Relation) -> Result<Self> {
        let violations = validate(&lattice, &rel)?;
        if let Some(v) = violations.first() {
            return Err(Error::domain(format!("not a transfer system: {}", v.describe(&lattice))));
        }
        Ok(TransferSystem { lattice, rel })
    }

    pub(crate) fn from_closed(lattice: Arc<SubgroupLattice>, rel: Relation) -> Self {
        debug_assert!(validate(&lattice, &rel).map(|v| v.is_empty()).unwrap_or(false));
        TransferSystem { lattice, rel }
    }

    /// Only the reflexive pairs.
    pub fn diagonal(lattice: Arc<SubgroupLattice>) -> Self {
        let n = lattice.len();
        let rel = (0..n).map(|k| BitSet::from_indices(n, [k])).collect();
        TransferSystem { lattice, rel }
    }

    /// Every inclusion.
    pub fn complete(lattice: Arc<SubgroupLattice>) -> Self {
        let rel = (0..lattice.len()).map(|k| lattice.supersets(k).clone()).collect();
        TransferSystem { lattice, rel }
    }

    /// The least transfer system containing `pairs`.
    pub fn generate(lattice: Arc<SubgroupLattice>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = lattice.len();
        for &(k, h) in pairs {
            if k >= n || h >= n {
                return Err(Error::domain("subgroup index out of range"));
            }
            if !lattice.contains(h, k) {
                return Err(Error::domain(format!(
                    "{} is not contained in {}",
                    lattice.label(k),
                    lattice.label(h)
                )));
            }
        }
        let base = TransferSystem::diagonal(lattice);
        Ok(base.extended(pairs.iter().copied()))
    }

    /// The least transfer system containing `self` and `pairs`, which must be inclusions.
    pub(crate) fn extended(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let lat = &self.lattice;
        let n = lat.len();
        let order = lat.group().order();
        let mut rel = self.rel.clone();
        // transposed relation: rev[h] holds every k with k → h
        let mut rev: Relation = (0..n).map(|_| BitSet::new(n)).collect();
        for (k, row) in rel.iter().enumerate() {
            for h in row.iter() {
                rev[h].insert(k);
            }
        }
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        let add = |k: usize, h: usize, rel: &mut Relation, rev: &mut Relation, queue: &mut VecDeque<(usize, usize)>| {
            if rel[k].insert(h) {
                rev[h].insert(k);
                queue.push_back((k, h));
            }
        };
        for (k, h) in pairs {
            add(k, h, &mut rel, &mut rev, &mut queue);
        }
        while let Some((k, h)) = queue.pop_front() {
            for g in 0..order {
                add(lat.conjugate(k, g), lat.conjugate(h, g), &mut rel, &mut rev, &mut queue);
            }
            for l in 0..n {
                add(lat.intersection(k, l), lat.intersection(h, l), &mut rel, &mut rev, &mut queue);
            }
            let below: Vec<usize> = rev[k].iter().collect();
            for x in below {
                add(x, h, &mut rel, &mut rev, &mut queue);
            }
            let above: Vec<usize> = rel[h].iter().collect();
            for y in above {
                add(k, y, &mut rel, &mut rev, &mut queue);
            }
        }
        TransferSystem::from_closed(self.lattice.clone(), rel)
    }

    /// Lifts arrows between conjugacy classes: every inclusion between a member of
    /// the class of `k` and a member of the class of `h` is added before closing.
    pub fn generate_by_class(lattice: Arc<SubgroupLattice>, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut lifted = Vec::new();
        for &(k, h) in pairs {
            let before = lifted.len();
            let kc = lattice.class_in(lattice.top(), k);
            let hc = lattice.class_in(lattice.top(), h);
            for &a in &kc {
                for &b in &hc {
                    if lattice.contains(b, a) {
                        lifted.push((a, b));
                    }
                }
            }
            if lifted.len() == before {
                return Err(Error::domain(format!(
                    "no member of the class of {} lies in a member of the class of {}",
                    lattice.label(k),
                    lattice.label(h)
                )));
            }
        }
        TransferSystem::generate(lattice, &lifted)
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn relation(&self) -> &Relation {
        &self.rel
    }

    #[inline]
    pub fn relates(&self, k: usize, h: usize) -> bool {
        self.rel[k].contains(h)
    }

    /// Every pair `k → h`, reflexive ones included, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rel.iter().enumerate().flat_map(|(k, row)| row.iter().map(move |h| (k, h)))
    }

    pub fn proper_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs().filter(|&(k, h)| k != h)
    }

    /// Number of non-reflexive pairs.
    pub fn size(&self) -> usize {
        self.rel.iter().map(BitSet::count).sum::<usize>() - self.lattice.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.size() == 0
    }

    pub fn is_complete(&self) -> bool {
        (0..self.lattice.len()).all(|k| self.rel[k] == *self.lattice.supersets(k))
    }

    fn require_same_lattice(&self, other: &TransferSystem) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) {
            Ok(())
        } else {
            Err(Error::domain("transfer systems live on different lattices"))
        }
    }

    /// `self ≤ other` entrywise.
    pub fn refines(&self, other: &TransferSystem) -> Result<bool> {
        self.require_same_lattice(other)?;
        Ok(self.rel.iter().zip(&other.rel).all(|(a, b)| a.is_subset(b)))
    }

    /// Whether `k → h`, rejecting pairs that are not inclusions.
    pub fn admissible(&self, k: usize, h: usize) -> Result<bool> {
        if !self.lattice.contains(h, k) {
            return Err(Error::domain(format!(
                "{} is not contained in {}",
                self.lattice.label(k),
                self.lattice.label(h)
            )));
        }
        Ok(self.relates(k, h))
    }

    /// Whether every point `s` of the source has `stab(s) → stab(f(s))`.
    pub fn map_in_indexing(&self, f: &GMap) -> Result<bool> {
        if !Arc::ptr_eq(f.source().lattice(), &self.lattice) {
            return Err(Error::domain("map lives over a different lattice"));
        }
        let (src, tgt) = (f.source(), f.target());
        Ok((0..src.size()).all(|s| self.relates(src.stabilizer(s), tgt.stabilizer(f.apply(s)))))
    }

    /// The least point `s` of the source with `stab(s) ↛ stab(f(s))`.
    pub fn first_inadmissible_point(&self, f: &GMap) -> Option<usize> {
        let (src, tgt) = (f.source(), f.target());
        (0..src.size()).find(|&s| !self.relates(src.stabilizer(s), tgt.stabilizer(f.apply(s))))
    }
}

/// Why a pair of transfer systems fails to be compatible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `k → h` in the multiplicative system but not in the additive one.
    NotRefining { k: usize, h: usize },
    /// `b → a` multiplicatively and `b∩c → b` additively, yet `c ↛ a` additively.
    Diamond { a: usize, b: usize, c: usize },
}

impl Witness {
    pub fn to_json(&self, lattice: &SubgroupLattice) -> serde_json::Value {
        let lb = |s: usize| lattice.label(s);
        match *self {
            Witness::NotRefining { k, h } => serde_json::json!({"kind": "not_refining", "k": lb(k), "h": lb(h)}),
            Witness::Diamond { a, b, c } => serde_json::json!({"kind": "diamond", "a": lb(a), "b": lb(b), "c": lb(c)}),
        }
    }

    pub fn describe(&self, lattice: &SubgroupLattice) -> String {
        let lb = |s: usize| lattice.label(s);
        match *self {
            Witness::NotRefining { k, h } => {
                format!("{} -> {} is a multiplicative arrow missing from the additive system", lb(k), lb(h))
            }
            Witness::Diamond { a, b, c } => format!(
                "A = {}, B = {}, C = {}: B -> A (mult), B∩C = {} -> B (add), but C -> A is not additive",
                lb(a),
                lb(b),
                lb(c),
                lb(lattice.intersection(b, c))
            ),
        }
    }
}

/// Compatibility verdict; `witness` is the least failing instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Compatibility {
    pub witness: Option<Witness>,
}

impl Compatibility {
    pub fn is_compatible(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks `tm ≤ ta` and, for all `B, C ≤ A` with `B → A` in `tm` and `B∩C → B`
/// in `ta`, that `C → A` in `ta`.
pub fn compatible(tm: &TransferSystem, ta: &TransferSystem) -> Result<Compatibility> {
    tm.require_same_lattice(ta)?;
    if let Some((k, h)) = tm.pairs().find(|&(k, h)| !ta.relates(k, h)) {
        return Ok(Compatibility {
            witness: Some(Witness::NotRefining { k, h }),
        });
    }
    let lat = &tm.lattice;
    for a in 0..lat.len() {
        for b in lat.subsets(a).iter().filter(|&b| b != a && tm.relates(b, a)) {
            for c in lat.subsets(a).iter() {
                if ta.relates(lat.intersection(b, c), b) && !ta.relates(c, a) {
                    return Ok(Compatibility {
                        witness: Some(Witness::Diamond { a, b, c }),
                    });
                }
            }
        }
    }
    Ok(Compatibility { witness: None })
}
