//! Sets over a base: pullbacks, dependent products and the exponential diagram.

use super::{GMap, GSet, OrbitProfile};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// A set `A` together with an equivariant map `A → C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicedGSet {
    proj: GMap,
}

impl SlicedGSet {
    pub fn new(proj: GMap) -> Self {
        SlicedGSet { proj }
    }

    pub fn proj(&self) -> &GMap {
        &self.proj
    }

    pub fn total(&self) -> &GSet {
        self.proj.source()
    }

    pub fn base(&self) -> &GSet {
        self.proj.target()
    }

    /// For each orbit of the base, its least point `c` and the fiber over `c`
    /// as a `G_c`-set, described by its orbit profile.
    pub fn fiber_profiles(&self) -> Result<Vec<(usize, OrbitProfile)>> {
        let base = self.base();
        let total = self.total();
        let mut out = Vec::new();
        for orbit in base.orbits() {
            let c = orbit[0];
            let stab = base.stabilizer(c);
            let fiber = self.proj.fiber(c);
            let mut local = vec![u32::MAX; total.size()];
            for (i, &a) in fiber.iter().enumerate() {
                local[a] = i as u32;
            }
            let lat = base.lattice().clone();
            let set = GSet::from_fn(lat, stab, fiber.len(), |g, i| local[total.act(g, fiber[i])] as usize);
            out.push((c, set.orbit_profile()));
        }
        Ok(out)
    }

    /// Isomorphism over a common base.
    pub fn is_isomorphic_over(&self, other: &SlicedGSet) -> Result<bool> {
        if self.base() != other.base() {
            return Err(Error::domain("sliced sets live over different bases"));
        }
        Ok(self.total().size() == other.total().size() && self.fiber_profiles()? == other.fiber_profiles()?)
    }
}

/// The pullback `A ×_C B` of `f: A → C` and `g: B → C`.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub apex: GSet,
    pub p1: GMap,
    pub p2: GMap,
}

/// Points `(a, b)` with `f(a) = g(b)`, ordered lexicographically.
pub fn pullback(f: &GMap, g: &GMap) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::domain("pullback of maps with different targets"));
    }
    let (a_set, b_set) = (f.source(), g.source());
    let c_size = f.target().size();
    let mut g_fibers: Vec<Vec<usize>> = vec![Vec::new(); c_size];
    let mut pos_in_fiber = vec![0usize; b_set.size()];
    for b in 0..b_set.size() {
        let c = g.apply(b);
        pos_in_fiber[b] = g_fibers[c].len();
        g_fibers[c].push(b);
    }
    let mut offset = Vec::with_capacity(a_set.size());
    let mut pairs = Vec::new();
    for a in 0..a_set.size() {
        offset.push(pairs.len());
        for &b in &g_fibers[f.apply(a)] {
            pairs.push((a, b));
        }
    }
    let lat = a_set.lattice().clone();
    let apex = GSet::from_fn(lat, a_set.acting(), pairs.len(), |h, p| {
        let (a, b) = pairs[p];
        offset[a_set.act(h, a)] + pos_in_fiber[b_set.act(h, b)]
    });
    let p1 = GMap::new(apex.clone(), a_set.clone(), pairs.iter().map(|&(a, _)| a as u32).collect())?;
    let p2 = GMap::new(apex.clone(), b_set.clone(), pairs.iter().map(|&(_, b)| b as u32).collect())?;
    Ok(Pullback { apex, p1, p2 })
}

/// The dependent product `f_*(A)` over `Y`, for `f: X → Y` and `A` over `X`.
///
/// A point over `y` is a section of `A → X` over the fiber `f⁻¹(y)`.
#[derive(Debug, Clone)]
pub struct DependentProduct {
    sliced: SlicedGSet,
    /// Base point and digit list of every point.
    points: Vec<(usize, Vec<u32>)>,
    /// `f`-fiber of each base point.
    x_fibers: Vec<Vec<usize>>,
    /// Position of each `x` in its `f`-fiber.
    x_pos: Vec<usize>,
    /// `A`-fiber of each `x`.
    a_fibers: Vec<Vec<usize>>,
}

impl DependentProduct {
    pub fn sliced(&self) -> &SlicedGSet {
        &self.sliced
    }

    pub fn into_sliced(self) -> SlicedGSet {
        self.sliced
    }

    /// Value of section `point` at `x`, or `None` if `x` is not in its domain.
    pub fn eval(&self, point: usize, x: usize) -> Option<usize> {
        let (y, digits) = &self.points[point];
        let i = self.x_pos[x];
        (self.x_fibers[*y].get(i) == Some(&x)).then(|| self.a_fibers[x][digits[i] as usize])
    }
}

pub fn dependent_product(f: &GMap, a: &SlicedGSet, limits: &Limits) -> Result<DependentProduct> {
    if a.base() != f.source() {
        return Err(Error::domain("dependent product needs a set over the source of the map"));
    }
    let (x_set, y_set) = (f.source(), f.target());
    let a_set = a.total();
    let mut x_fibers: Vec<Vec<usize>> = vec![Vec::new(); y_set.size()];
    let mut x_pos = vec![0usize; x_set.size()];
    for x in 0..x_set.size() {
        let y = f.apply(x);
        x_pos[x] = x_fibers[y].len();
        x_fibers[y].push(x);
    }
    let mut a_fibers: Vec<Vec<usize>> = vec![Vec::new(); x_set.size()];
    let mut a_pos = vec![0u32; a_set.size()];
    for p in 0..a_set.size() {
        let x = a.proj().apply(p);
        a_pos[p] = a_fibers[x].len() as u32;
        a_fibers[x].push(p);
    }

    let mut offset = Vec::with_capacity(y_set.size());
    let mut total = 0usize;
    for fib in &x_fibers {
        offset.push(total);
        let count = fib
            .iter()
            .try_fold(1usize, |acc, &x| acc.checked_mul(a_fibers[x].len()))
            .filter(|&c| c <= limits.max_sections)
            .ok_or_else(|| Error::resource("dependent product has too many sections"))?;
        total = total
            .checked_add(count)
            .filter(|&t| t <= limits.max_sections)
            .ok_or_else(|| Error::resource("dependent product has too many sections"))?;
    }
    if total.saturating_mul(y_set.lattice().order(y_set.acting())) > limits.max_action_entries {
        return Err(Error::resource("dependent product action table is too large"));
    }

    // digits[i] indexes into a_fibers[x_i], first digit least significant
    let mut points = Vec::with_capacity(total);
    for (y, fib) in x_fibers.iter().enumerate() {
        let radices: Vec<usize> = fib.iter().map(|&x| a_fibers[x].len()).collect();
        let count: usize = radices.iter().product();
        for mut q in 0..count {
            let digits: Vec<u32> = radices
                .iter()
                .map(|&r| {
                    let d = q % r;
                    q /= r;
                    d as u32
                })
                .collect();
            points.push((y, digits));
        }
    }
    let encode = |y: usize, digits: &[u32]| -> usize {
        let mut idx = 0;
        for (i, &d) in digits.iter().enumerate().rev() {
            idx = idx * a_fibers[x_fibers[y][i]].len() + d as usize;
        }
        offset[y] + idx
    };

    let group = x_set.lattice().group();
    let mut digits: Vec<u32> = Vec::new();
    let d_set = GSet::from_fn(y_set.lattice().clone(), y_set.acting(), total, |g, p| {
        let (y, ref s) = points[p];
        let gy = y_set.act(g, y);
        let ginv = group.inv(g);
        digits.clear();
        for &x2 in &x_fibers[gy] {
            let x = x_set.act(ginv, x2);
            let value = a_fibers[x][s[x_pos[x]] as usize];
            digits.push(a_pos[a_set.act(g, value)]);
        }
        encode(gy, &digits)
    });
    let proj = GMap::new(d_set, y_set.clone(), points.iter().map(|&(y, _)| y as u32).collect())?;
    Ok(DependentProduct {
        sliced: SlicedGSet::new(proj),
        points,
        x_fibers,
        x_pos,
        a_fibers,
    })
}

/// The exponential diagram of `t: A → B` and `n: B → C`:
///
/// ```text
///   A <--r'-- P --n'--> D
///   |t        |p        |t'
///   v         v         v
///   B ======= B --n---> C
/// ```
///
/// with `D = n_*(A)` and `P = B ×_C D`.
#[derive(Debug, Clone)]
pub struct ExponentialDiagram {
    pub d: DependentProduct,
    pub t_prime: GMap,
    pub p: GSet,
    pub p_to_b: GMap,
    pub n_prime: GMap,
    pub r_prime: GMap,
}

pub fn exponential_diagram(t: &GMap, n: &GMap, limits: &Limits) -> Result<ExponentialDiagram> {
    let a = SlicedGSet::new(t.clone());
    let d = dependent_product(n, &a, limits)?;
    let t_prime = d.sliced().proj().clone();
    let pb = pullback(n, &t_prime)?;
    let r_map = (0..pb.apex.size())
        .map(|q| {
            let (b, s) = (pb.p1.apply(q), pb.p2.apply(q));
            d.eval(s, b).expect("b lies over the base point of s") as u32
        })
        .collect();
    let r_prime = GMap::new(pb.apex.clone(), t.source().clone(), r_map)?;
    let diagram = ExponentialDiagram {
        d,
        t_prime,
        p: pb.apex,
        p_to_b: pb.p1,
        n_prime: pb.p2,
        r_prime,
    };
    diagram.check(t, n)?;
    Ok(diagram)
}

impl ExponentialDiagram {
    /// Verifies `t ∘ r' = p` and `n ∘ p = t' ∘ n'`.
    pub fn check(&self, t: &GMap, n: &GMap) -> Result<()> {
        if self.r_prime.then(t)? != self.p_to_b {
            return Err(Error::Internal("left square of the exponential diagram does not commute".into()));
        }
        if self.p_to_b.then(n)? != self.n_prime.then(&self.t_prime)? {
            return Err(Error::Internal("right square of the exponential diagram does not commute".into()));
        }
        Ok(())
    }
}
