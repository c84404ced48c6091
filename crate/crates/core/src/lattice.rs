use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::limits::Limits;

/// A subgroup of the lattice's group, identified by its member bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: BitSet,
    elements: Vec<usize>,
}

impl Subgroup {
    fn new(members: BitSet) -> Self {
        let elements = members.iter().collect();
        Subgroup { members, elements }
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    /// Members in increasing element-index order; the identity comes first.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.contains(g)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.elements)
    }
}

/// Set-level data for a pair of subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupPairOps {
    pub intersection: usize,
    pub product_set: BitSet,
    pub product_is_subgroup: bool,
}

/// Every subgroup of a finite group, with inclusion and conjugation data.
///
/// Subgroups are ordered by order, then lexicographically by member list, so
/// index 0 is the trivial subgroup and the last index is the whole group.
pub struct SubgroupLattice {
    group: Group,
    subgroups: Vec<Subgroup>,
    index: HashMap<BitSet, usize>,
    /// `supersets[a]` holds every `b` with `A ⊆ B`.
    supersets: Vec<BitSet>,
    /// `subsets[a]` holds every `b` with `B ⊆ A`.
    subsets: Vec<BitSet>,
    conj: Vec<u32>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    /// `position[s][g]` is the position of `g` in `subgroups[s].elements()`, or `u32::MAX`.
    position: Vec<Vec<u32>>,
    names: Vec<String>,
    labels: Vec<String>,
    mobius: OnceLock<Vec<i64>>,
}

impl fmt::Debug for SubgroupLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupLattice")
            .field("group", &self.group)
            .field("subgroups", &self.subgroups.len())
            .finish()
    }
}

fn closure(group: &Group, gens: &[usize]) -> BitSet {
    let mut set = BitSet::new(group.order());
    set.insert(0);
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for &s in gens {
            let y = group.mul(x, s);
            if set.insert(y) {
                stack.push(y);
            }
        }
    }
    set
}

impl SubgroupLattice {
    pub fn new(group: Group) -> Result<Self> {
        Self::with_limits(group, &Limits::default())
    }

    /// Seeds with the cyclic subgroups and closes under joins with cyclic
    /// subgroups; every subgroup is such an iterated join.
    pub fn with_limits(group: Group, limits: &Limits) -> Result<Self> {
        if group.order() > limits.max_lattice_order {
            return Err(Error::resource(format!(
                "subgroup lattice of a group of order {} exceeds the gate {}",
                group.order(),
                limits.max_lattice_order
            )));
        }
        let n = group.order();
        let mut found: HashMap<BitSet, Vec<usize>> = HashMap::new();
        let mut cyclic: Vec<(BitSet, usize)> = Vec::new();
        for g in 0..n {
            let set = closure(&group, &[g]);
            if !found.contains_key(&set) {
                found.insert(set.clone(), vec![g]);
                cyclic.push((set, g));
            }
        }
        let mut work: Vec<BitSet> = cyclic.iter().map(|(s, _)| s.clone()).collect();
        while let Some(s) = work.pop() {
            let gens = found[&s].clone();
            for (c, g) in &cyclic {
                if c.is_subset(&s) {
                    continue;
                }
                let mut jg = gens.clone();
                jg.push(*g);
                let j = closure(&group, &jg);
                if !found.contains_key(&j) {
                    found.insert(j.clone(), jg);
                    work.push(j);
                }
            }
        }

        let mut sets: Vec<BitSet> = found.into_keys().collect();
        sets.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp_members(b)));
        let subgroups: Vec<Subgroup> = sets.into_iter().map(Subgroup::new).collect();
        let m = subgroups.len();
        let index: HashMap<BitSet, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members.clone(), i))
            .collect();

        let mut supersets = vec![BitSet::new(m); m];
        let mut subsets = vec![BitSet::new(m); m];
        for a in 0..m {
            for b in 0..m {
                if subgroups[a].members.is_subset(&subgroups[b].members) {
                    supersets[a].insert(b);
                    subsets[b].insert(a);
                }
            }
        }

        let mut conj = vec![0u32; m * n];
        for (s, sub) in subgroups.iter().enumerate() {
            for g in 0..n {
                let image = BitSet::from_indices(n, sub.elements.iter().map(|&x| group.conjugate(g, x)));
                conj[s * n + g] = index[&image] as u32;
            }
        }

        let mut class_of = vec![usize::MAX; m];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for s in 0..m {
            if class_of[s] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members: Vec<usize> = (0..n).map(|g| conj[s * n + g] as usize).collect();
            members.sort_unstable();
            members.dedup();
            for &t in &members {
                class_of[t] = id;
            }
            classes.push(members);
        }

        let position = subgroups
            .iter()
            .map(|s| {
                let mut pos = vec![u32::MAX; n];
                for (i, &g) in s.elements.iter().enumerate() {
                    pos[g] = i as u32;
                }
                pos
            })
            .collect();

        let names: Vec<String> = subgroups.iter().map(|s| structure_name(&group, &s.elements)).collect();
        let mut totals: HashMap<&str, usize> = HashMap::new();
        for nm in &names {
            *totals.entry(nm.as_str()).or_default() += 1;
        }
        let mut seen: HashMap<&str, usize> = HashMap::new();
        let labels = names
            .iter()
            .map(|nm| {
                let k = seen.entry(nm.as_str()).or_default();
                *k += 1;
                if totals[nm.as_str()] == 1 {
                    nm.clone()
                } else {
                    format!("{nm}#{k}")
                }
            })
            .collect();

        Ok(SubgroupLattice {
            group,
            subgroups,
            index,
            supersets,
            subsets,
            conj,
            class_of,
            classes,
            position,
            names,
            labels,
            mobius: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroup(&self, s: usize) -> &Subgroup {
        &self.subgroups[s]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub const fn trivial(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn order(&self, s: usize) -> usize {
        self.subgroups[s].order()
    }

    pub fn index_of(&self, members: &BitSet) -> Option<usize> {
        self.index.get(members).copied()
    }

    /// Index of the subgroup with exactly these elements, if it is one.
    pub fn find(&self, elements: &[usize]) -> Option<usize> {
        if elements.iter().any(|&g| g >= self.group.order()) {
            return None;
        }
        self.index_of(&BitSet::from_indices(self.group.order(), elements.iter().copied()))
    }

    /// `A ⊆ B`
    #[inline]
    pub fn contains(&self, b: usize, a: usize) -> bool {
        self.supersets[a].contains(b)
    }

    /// Subgroups containing `a`.
    pub fn supersets(&self, a: usize) -> &BitSet {
        &self.supersets[a]
    }

    /// Subgroups of `a`.
    pub fn subsets(&self, a: usize) -> &BitSet {
        &self.subsets[a]
    }

    /// `g S g^-1`
    #[inline]
    pub fn conjugate(&self, s: usize, g: usize) -> usize {
        self.conj[s * self.group.order() + g] as usize
    }

    pub fn intersection(&self, a: usize, b: usize) -> usize {
        let m = self.subgroups[a].members.intersection(&self.subgroups[b].members);
        self.index[&m]
    }

    /// The subgroup generated by `a` and `b`.
    pub fn join(&self, a: usize, b: usize) -> usize {
        let mut gens = self.subgroups[a].elements.clone();
        gens.extend_from_slice(&self.subgroups[b].elements);
        self.index[&closure(&self.group, &gens)]
    }

    pub fn pair_ops(&self, a: usize, b: usize) -> SubgroupPairOps {
        let n = self.group.order();
        let mut product = BitSet::new(n);
        for &x in &self.subgroups[a].elements {
            for &y in &self.subgroups[b].elements {
                product.insert(self.group.mul(x, y));
            }
        }
        let product_is_subgroup = self.index.contains_key(&product);
        SubgroupPairOps {
            intersection: self.intersection(a, b),
            product_set: product,
            product_is_subgroup,
        }
    }

    /// Intersection of all `G`-conjugates of `h`.
    pub fn core(&self, h: usize) -> usize {
        self.core_in(self.top(), h)
    }

    /// Intersection of the conjugates of `h` by elements of `ambient`.
    pub fn core_in(&self, ambient: usize, h: usize) -> usize {
        let mut m = self.subgroups[h].members.clone();
        for &g in &self.subgroups[ambient].elements {
            m = m.intersection(&self.subgroups[self.conjugate(h, g)].members);
        }
        self.index[&m]
    }

    pub fn is_normal(&self, h: usize) -> bool {
        self.classes[self.class_of[h]].len() == 1
    }

    /// `G`-conjugacy class id of `s`; ids are ordered by least member.
    pub fn class_of(&self, s: usize) -> usize {
        self.class_of[s]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Least subgroup index conjugate to `s` by an element of `ambient`.
    pub fn class_rep_in(&self, ambient: usize, s: usize) -> usize {
        self.subgroups[ambient]
            .elements
            .iter()
            .map(|&g| self.conjugate(s, g))
            .min()
            .expect("subgroups are nonempty")
    }

    /// The `ambient`-conjugates of `s`, in index order.
    pub fn class_in(&self, ambient: usize, s: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.subgroups[ambient]
            .elements
            .iter()
            .map(|&g| self.conjugate(s, g))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Representatives (least index) of the `ambient`-conjugacy classes of subgroups of `ambient`.
    pub fn class_reps_in(&self, ambient: usize) -> Vec<usize> {
        self.subsets[ambient]
            .iter()
            .filter(|&s| self.class_rep_in(ambient, s) == s)
            .collect()
    }

    /// Order of the normalizer of `s` in `ambient`.
    pub fn normalizer_order_in(&self, ambient: usize, s: usize) -> usize {
        self.subgroups[ambient]
            .elements
            .iter()
            .filter(|&&g| self.conjugate(s, g) == s)
            .count()
    }

    /// Möbius function `μ(a, b)` of the subgroup lattice (zero unless `A ⊆ B`).
    pub fn mobius(&self, a: usize, b: usize) -> i64 {
        let n = self.subgroups.len();
        let table = self.mobius.get_or_init(|| {
            let mut mu = vec![0i64; n * n];
            for a in 0..n {
                mu[a * n + a] = 1;
                for b in self.supersets[a].iter().filter(|&b| b != a) {
                    let s: i64 = self.subsets[b]
                        .iter()
                        .filter(|&p| p != b && self.supersets[a].contains(p))
                        .map(|p| mu[a * n + p])
                        .sum();
                    mu[a * n + b] = -s;
                }
            }
            mu
        });
        table[a * n + b]
    }

    /// Position of `g` in the sorted element list of `s`.
    #[inline]
    pub fn position(&self, s: usize, g: usize) -> Option<usize> {
        let p = self.position[s][g];
        (p != u32::MAX).then_some(p as usize)
    }

    /// Least representatives of the left cosets `xK` in `H`, in increasing order.
    /// The identity always comes first.
    pub fn left_coset_reps(&self, h: usize, k: usize) -> Vec<usize> {
        self.coset_reps(h, k, false)
    }

    /// Least representatives of the right cosets `Kx` in `H`, in increasing order.
    pub fn right_coset_reps(&self, h: usize, k: usize) -> Vec<usize> {
        self.coset_reps(h, k, true)
    }

    fn coset_reps(&self, h: usize, k: usize, right: bool) -> Vec<usize> {
        let g = &self.group;
        let mut covered = BitSet::new(g.order());
        let mut reps = Vec::new();
        for &x in &self.subgroups[h].elements {
            if covered.contains(x) {
                continue;
            }
            reps.push(x);
            for &y in &self.subgroups[k].elements {
                covered.insert(if right { g.mul(y, x) } else { g.mul(x, y) });
            }
        }
        reps
    }

    /// One representative per double coset `KγL` of the whole group.
    pub fn double_coset_reps(&self, k: usize, l: usize) -> Vec<usize> {
        self.double_coset_reps_in(self.top(), k, l)
    }

    /// One representative per double coset `KγL` inside `ambient`, each the
    /// least element of its double coset (so the identity comes first).
    pub fn double_coset_reps_in(&self, ambient: usize, k: usize, l: usize) -> Vec<usize> {
        let g = &self.group;
        let mut covered = BitSet::new(g.order());
        let mut reps = Vec::new();
        for &x in &self.subgroups[ambient].elements {
            if covered.contains(x) {
                continue;
            }
            reps.push(x);
            for &a in &self.subgroups[k].elements {
                let ax = g.mul(a, x);
                for &b in &self.subgroups[l].elements {
                    covered.insert(g.mul(ax, b));
                }
            }
        }
        reps
    }

    /// Isomorphism-type name guessed from element-order statistics, such as `C2` or `S3`.
    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    /// Unique display label: the name, suffixed `#k` when several subgroups share it.
    pub fn label(&self, s: usize) -> &str {
        &self.labels[s]
    }

    /// Resolves a label: `e`, `G`, a printed label (`C2#1`, `S3`), a unique name with
    /// `#1`, or an explicit element list `[0,1,2]`.
    pub fn resolve(&self, label: &str) -> Result<usize> {
        let label = label.trim();
        if label == "G" {
            return Ok(self.top());
        }
        if let Some(i) = self.labels.iter().position(|l| l == label) {
            return Ok(i);
        }
        if let Some(base) = label.strip_suffix("#1") {
            if let Some(i) = self.labels.iter().position(|l| l == base) {
                return Ok(i);
            }
        }
        if let Some(inner) = label.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let elements: std::result::Result<Vec<usize>, _> = inner
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<usize>())
                .collect();
            let elements = elements.map_err(|_| Error::parse(0, format!("bad element list '{label}'")))?;
            return self
                .find(&elements)
                .ok_or_else(|| Error::domain(format!("{label} is not a subgroup of {}", self.group.name())));
        }
        Err(Error::domain(format!("unknown subgroup label '{label}' in {}", self.group.name())))
    }

    /// Member list label, `[0,1,3]`.
    pub fn element_label(&self, s: usize) -> String {
        let parts: Vec<String> = self.subgroups[s].elements.iter().map(|g| g.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

fn primes_of(mut n: usize) -> Vec<usize> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            ps.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

fn power(group: &Group, a: usize, k: usize) -> usize {
    (0..k).fold(0, |acc, _| group.mul(acc, a))
}

/// Invariant factors of a finite abelian group given by its elements.
fn abelian_invariants(group: &Group, elements: &[usize]) -> Vec<usize> {
    let n = elements.len();
    // Primary parts: the number of a_i >= k equals log_p |{x : x^(p^k) = 1}| - log_p |{x : x^(p^(k-1)) = 1}|.
    let mut primary: Vec<Vec<usize>> = Vec::new();
    for p in primes_of(n) {
        let mut logs = vec![0usize];
        let mut pk = 1;
        loop {
            pk *= p;
            let count = elements.iter().filter(|&&x| power(group, x, pk) == 0).count();
            let mut l = 0;
            let mut c = count;
            while c > 1 {
                c /= p;
                l += 1;
            }
            if l == *logs.last().unwrap() {
                break;
            }
            logs.push(l);
        }
        // parts >= k counts, converted to a partition of exponents
        let ge: Vec<usize> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        let mut exps = Vec::new();
        for (k, &c) in ge.iter().enumerate() {
            let next = ge.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(c - next) {
                exps.push(k + 1);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        primary.push(exps.into_iter().map(|e| p.pow(e as u32)).collect());
    }
    let width = primary.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<usize> = (0..width)
        .map(|i| primary.iter().map(|v| v.get(i).copied().unwrap_or(1)).product())
        .collect();
    factors.sort_unstable();
    factors
}

/// Heuristic isomorphism-type name for display.
fn structure_name(group: &Group, elements: &[usize]) -> String {
    let n = elements.len();
    if n == 1 {
        return "e".into();
    }
    let orders: Vec<usize> = elements.iter().map(|&x| group.element_order(x)).collect();
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for &o in &orders {
        *hist.entry(o).or_default() += 1;
    }
    if hist.contains_key(&n) {
        return format!("C{n}");
    }
    let abelian = elements
        .iter()
        .all(|&a| elements.iter().all(|&b| group.mul(a, b) == group.mul(b, a)));
    if abelian {
        let f = abelian_invariants(group, elements);
        return f.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join("x");
    }
    let involutions = hist.get(&2).copied().unwrap_or(0);
    let half = n / 2;
    if let Some(&r) = elements.iter().find(|&&x| group.element_order(x) == half) {
        let rot: Vec<usize> = (0..half).map(|k| power(group, r, k)).collect();
        let outside_all_involutions = elements
            .iter()
            .filter(|x| !rot.contains(x))
            .all(|&x| group.element_order(x) == 2);
        if outside_all_involutions {
            return if half == 3 { "S3".into() } else { format!("D{half}") };
        }
        if n == 8 && involutions == 1 {
            return "Q8".into();
        }
    }
    let max_order = *hist.keys().last().unwrap();
    match (n, involutions, max_order) {
        (12, 3, 3) => "A4".into(),
        (24, 9, 4) => "S4".into(),
        (60, 15, 5) => "A5".into(),
        (120, 25, 6) => "S5".into(),
        _ => format!("H{n}"),
    }
}
