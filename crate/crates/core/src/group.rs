use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::limits::Limits;

/// A permutation of `{0, .., n-1}` in image notation: `p[i]` is the image of `i`.
pub type Perm = Vec<u32>;

/// A finite group given by an exact multiplication table.
///
/// Elements are the indices `0..order`. Index 0 is always the identity.
#[derive(Clone)]
pub struct Group {
    name: String,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    perms: Vec<Perm>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

fn compose(a: &[u32], b: &[u32]) -> Perm {
    // (a*b)(i) = a(b(i))
    b.iter().map(|&x| a[x as usize]).collect()
}

impl Group {
    /// Closes `gens` (permutations of `degree` points) under composition.
    ///
    /// Elements are numbered in breadth-first order from the identity, trying
    /// generators in the order given. The product is composition of functions,
    /// `(a*b)(i) = a(b(i))`, so the group acts on the points from the left.
    pub fn from_generators(
        name: impl Into<String>,
        degree: usize,
        gens: &[Perm],
        limits: &Limits,
    ) -> Result<Group> {
        for (gi, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(Error::domain(format!(
                    "generator {gi} has length {}, expected {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                let x = x as usize;
                if x >= degree || seen[x] {
                    return Err(Error::domain(format!("generator {gi} is not a bijection")));
                }
                seen[x] = true;
            }
        }

        let identity: Perm = (0..degree as u32).collect();
        let mut index: HashMap<Perm, u32> = HashMap::new();
        let mut perms = vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = compose(g, &perms[x]);
                if !index.contains_key(&y) {
                    if perms.len() >= limits.max_group_order {
                        return Err(Error::resource(format!(
                            "generator closure exceeds order cap {}",
                            limits.max_group_order
                        )));
                    }
                    index.insert(y.clone(), perms.len() as u32);
                    queue.push_back(perms.len());
                    perms.push(y);
                }
            }
        }

        let n = perms.len();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = index[&compose(&perms[a], &perms[b])];
            }
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        Ok(Group {
            name: name.into(),
            order: n,
            mul,
            inv,
            perms,
        })
    }

    /// Builds a group from a spec string such as `C4`, `C2xC2`, `D4`, `S3xC2`, `A5`, `Q8`.
    pub fn builtin(spec: &str) -> Result<Group> {
        Self::builtin_with(spec, &Limits::default())
    }

    pub fn builtin_with(spec: &str, limits: &Limits) -> Result<Group> {
        let atoms = parse_spec(spec)?;
        let mut degree = 0usize;
        let mut gens: Vec<Perm> = Vec::new();
        let mut blocks = Vec::new();
        for atom in &atoms {
            let (d, g) = atom.permutation_generators();
            blocks.push((degree, d, g));
            degree += d;
        }
        for (offset, d, g) in blocks {
            for p in g {
                let mut full: Perm = (0..degree as u32).collect();
                for i in 0..d {
                    full[offset + i] = (offset as u32) + p[i];
                }
                gens.push(full);
            }
        }
        Group::from_generators(spec, degree, &gens, limits)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub const fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g a g^-1`
    #[inline]
    pub fn conjugate(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    /// The permutation realizing element `a` in the defining representation.
    pub fn permutation(&self, a: usize) -> &[u32] {
        &self.perms[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Exhaustive check of the group axioms on the table.
    pub fn check_axioms(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a)
            && (0..n).all(|a| self.mul(a, self.inv(a)) == 0 && self.mul(self.inv(a), a) == 0)
            && (0..n).all(|a| {
                (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Atom {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion,
}

fn cycle(n: usize, points: &[usize]) -> Perm {
    let mut p: Perm = (0..n as u32).collect();
    for w in 0..points.len() {
        p[points[w]] = points[(w + 1) % points.len()] as u32;
    }
    p
}

impl Atom {
    /// Degree and generators of a faithful permutation representation.
    fn permutation_generators(self) -> (usize, Vec<Perm>) {
        match self {
            Atom::Cyclic(n) => {
                let all: Vec<usize> = (0..n).collect();
                (n, if n > 1 { vec![cycle(n, &all)] } else { vec![] })
            }
            Atom::Dihedral(n) => {
                // Left-regular action on r^i s^j, encoded as i + n*j.
                let d = 2 * n;
                let r = (0..d)
                    .map(|p| {
                        let (i, j) = (p % n, p / n);
                        ((i + 1) % n + n * j) as u32
                    })
                    .collect();
                let s = (0..d)
                    .map(|p| {
                        let (i, j) = (p % n, p / n);
                        ((n - i) % n + n * (1 - j)) as u32
                    })
                    .collect();
                (d, vec![r, s])
            }
            Atom::Symmetric(n) => {
                if n < 2 {
                    return (n.max(1), vec![]);
                }
                let all: Vec<usize> = (0..n).collect();
                (n, vec![cycle(n, &[0, 1]), cycle(n, &all)])
            }
            Atom::Alternating(n) => {
                if n < 3 {
                    return (n.max(1), vec![]);
                }
                (n, (0..n - 2).map(|i| cycle(n, &[i, i + 1, i + 2])).collect())
            }
            Atom::Quaternion => {
                // Left-regular action on {1,i,j,k} x {+,-}, encoded as unit + 4*sign.
                // Left multiplication tables: i*(1,i,j,k) = (i,-1,k,-j), j*(1,i,j,k) = (j,-k,-1,i).
                let table = |img: [(usize, usize); 4]| -> Perm {
                    (0..8)
                        .map(|p| {
                            let (u, s) = (p % 4, p / 4);
                            let (v, t) = img[u];
                            (v + 4 * ((s + t) % 2)) as u32
                        })
                        .collect()
                };
                let li = table([(1, 0), (0, 1), (3, 0), (2, 1)]);
                let lj = table([(2, 0), (3, 1), (0, 1), (1, 0)]);
                (8, vec![li, lj])
            }
        }
    }
}

/// `group := atom ('x' atom)*`, `atom := ('C'|'D'|'S'|'A') digits | 'Q8'`
pub(crate) fn parse_spec(spec: &str) -> Result<Vec<Atom>> {
    let bytes = spec.as_bytes();
    let mut pos = 0;
    let mut atoms = Vec::new();
    loop {
        let start = pos;
        let Some(&kind) = bytes.get(pos) else {
            return Err(Error::parse(pos, "expected a group atom"));
        };
        pos += 1;
        let digits_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let digits = &spec[digits_start..pos];
        if digits.is_empty() {
            return Err(Error::parse(digits_start, "expected digits"));
        }
        let n: usize = digits
            .parse()
            .map_err(|_| Error::parse(digits_start, "number out of range"))?;
        let atom = match kind {
            b'C' if n >= 1 => Atom::Cyclic(n),
            b'D' if n >= 1 => Atom::Dihedral(n),
            b'S' if n >= 1 => Atom::Symmetric(n),
            b'A' if n >= 1 => Atom::Alternating(n),
            b'Q' if n == 8 => Atom::Quaternion,
            b'C' | b'D' | b'S' | b'A' => return Err(Error::parse(digits_start, "index must be positive")),
            b'Q' => return Err(Error::parse(digits_start, "only Q8 is supported")),
            _ => return Err(Error::parse(start, format!("unknown group atom '{}'", kind as char))),
        };
        atoms.push(atom);
        match bytes.get(pos) {
            None => return Ok(atoms),
            Some(b'x') => pos += 1,
            Some(_) => return Err(Error::parse(pos, "expected 'x' or end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(spec: &str) -> usize {
        Group::builtin(spec).unwrap().order()
    }

    #[test]
    fn builtin_orders() {
        assert_eq!(order("C1"), 1);
        assert_eq!(order("C4"), 4);
        assert_eq!(order("C2xC2"), 4);
        assert_eq!(order("D1"), 2);
        assert_eq!(order("D4"), 8);
        assert_eq!(order("D5"), 10);
        assert_eq!(order("S3"), 6);
        assert_eq!(order("S4"), 24);
        assert_eq!(order("A4"), 12);
        assert_eq!(order("A5"), 60);
        assert_eq!(order("Q8"), 8);
        assert_eq!(order("S3xC2"), 12);
        assert_eq!(order("C2xC2xC2"), 8);
    }

    #[test]
    fn tables_satisfy_axioms() {
        for spec in ["C6", "D4", "Q8", "S3", "A4", "C2xC4"] {
            let g = Group::builtin(spec).unwrap();
            assert!(g.check_axioms(), "{spec}");
        }
    }

    #[test]
    fn q8_has_one_involution() {
        let g = Group::builtin("Q8").unwrap();
        let inv = (0..8).filter(|&a| g.element_order(a) == 2).count();
        assert_eq!(inv, 1);
        let d4 = Group::builtin("D4").unwrap();
        assert_eq!((0..8).filter(|&a| d4.element_order(a) == 2).count(), 5);
    }

    #[test]
    fn trivial_closure_from_no_generators() {
        let g = Group::from_generators("triv", 1, &[], &Limits::default()).unwrap();
        assert_eq!(g.order(), 1);
        let c4 = Group::from_generators("c4", 4, &[vec![1, 2, 3, 0]], &Limits::default()).unwrap();
        assert_eq!(c4.order(), 4);
    }

    #[test]
    fn parse_errors_report_position() {
        assert_eq!(Group::builtin("C2xB3").unwrap_err(), Error::parse(3, "unknown group atom 'B'"));
        assert!(matches!(Group::builtin("C"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(Group::builtin("C2x"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(Group::builtin("C2 "), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(Group::builtin("Q4"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(Group::builtin("c4"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(Group::builtin(""), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn order_cap_is_enforced() {
        assert!(matches!(Group::builtin("S8"), Err(Error::Resource(_))));
        let tight = Limits { max_group_order: 5, ..Limits::default() };
        assert!(matches!(Group::builtin_with("C6", &tight), Err(Error::Resource(_))));
    }

    #[test]
    fn rejects_non_bijections() {
        let r = Group::from_generators("bad", 3, &[vec![0, 0, 1]], &Limits::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
