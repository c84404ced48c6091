//! The Burnside Tambara functor with transfers gated by an additive transfer
//! system and norms gated by a compatible multiplicative one.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gset::{dependent_product, exponential_diagram, pullback, CoinductionPlan, GMap, GSet, OrbitProfile, SlicedGSet};
use crate::lattice::SubgroupLattice;
use crate::limits::Limits;
use crate::transfer::{compatible, Compatibility, TransferSystem, Witness};

/// An element of the Burnside ring of `H`: an integer combination of orbits `[H/L]`,
/// keyed by the least member of each `H`-conjugacy class.
#[derive(Clone)]
pub struct BurnsideElement {
    lattice: Arc<SubgroupLattice>,
    level: usize,
    coeffs: BTreeMap<usize, i64>,
}

impl PartialEq for BurnsideElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice) && self.level == other.level && self.coeffs == other.coeffs
    }
}

impl Eq for BurnsideElement {}

impl fmt::Debug for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

fn overflow() -> Error {
    Error::resource("coefficient overflow")
}

impl BurnsideElement {
    pub fn zero(lattice: Arc<SubgroupLattice>, level: usize) -> Self {
        BurnsideElement {
            lattice,
            level,
            coeffs: BTreeMap::new(),
        }
    }

    /// The unit `[H/H]`.
    pub fn one(lattice: Arc<SubgroupLattice>, level: usize) -> Self {
        Self::orbit(lattice, level, level).expect("H is a subgroup of itself")
    }

    /// The orbit `[H/L]`.
    pub fn orbit(lattice: Arc<SubgroupLattice>, level: usize, l: usize) -> Result<Self> {
        Self::from_terms(lattice, level, &[(l, 1)])
    }

    /// `Σ c·[H/L]` over `(L, c)`.
    pub fn from_terms(lattice: Arc<SubgroupLattice>, level: usize, terms: &[(usize, i64)]) -> Result<Self> {
        let mut x = Self::zero(lattice, level);
        for &(l, c) in terms {
            if !x.lattice.contains(level, l) {
                return Err(Error::domain(format!(
                    "{} is not a subgroup of {}",
                    x.lattice.label(l),
                    x.lattice.label(level)
                )));
            }
            x.add_term(l, c)?;
        }
        Ok(x)
    }

    pub fn from_profile(lattice: Arc<SubgroupLattice>, profile: &OrbitProfile) -> Result<Self> {
        let mut x = Self::zero(lattice, profile.acting());
        for (l, c) in profile.entries() {
            x.add_term(l, i64::try_from(c).map_err(|_| overflow())?)?;
        }
        Ok(x)
    }

    pub fn from_gset(x: &GSet) -> Result<Self> {
        Self::from_profile(x.lattice().clone(), &x.orbit_profile())
    }

    fn add_term(&mut self, l: usize, c: i64) -> Result<()> {
        let key = self.lattice.class_rep_in(self.level, l);
        let entry = self.coeffs.entry(key).or_insert(0);
        *entry = entry.checked_add(c).ok_or_else(overflow)?;
        if *entry == 0 {
            self.coeffs.remove(&key);
        }
        Ok(())
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Nonzero `(class representative, coefficient)` pairs in lattice order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&l, &c)| (l, c))
    }

    pub fn coeff(&self, l: usize) -> i64 {
        self.coeffs
            .get(&self.lattice.class_rep_in(self.level, l))
            .copied()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// All coefficients non-negative, so the element is the class of a genuine set.
    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0)
    }

    /// Cardinality of the underlying virtual set.
    pub fn cardinality(&self) -> i64 {
        let h = self.lattice.order(self.level) as i64;
        self.terms().map(|(l, c)| c * (h / self.lattice.order(l) as i64)).sum()
    }

    fn require_level(&self, other: &BurnsideElement) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) && self.level == other.level {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "elements live at different levels ({} and {})",
                self.lattice.label(self.level),
                other.lattice.label(other.level)
            )))
        }
    }

    pub fn add(&self, other: &BurnsideElement) -> Result<Self> {
        self.require_level(other)?;
        let mut out = self.clone();
        for (l, c) in other.terms() {
            out.add_term(l, c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Result<Self> {
        let mut out = Self::zero(self.lattice.clone(), self.level);
        for (l, c) in self.terms() {
            out.add_term(l, c.checked_mul(k).ok_or_else(overflow)?)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<Self> {
        self.scale(-1)
    }

    pub fn sub(&self, other: &BurnsideElement) -> Result<Self> {
        self.add(&other.neg()?)
    }

    /// Product, extending `[H/L]·[H/K] = Σ_{γ ∈ L\H/K} [H/(L ∩ γKγ⁻¹)]` bilinearly.
    pub fn mul(&self, other: &BurnsideElement) -> Result<Self> {
        self.require_level(other)?;
        let lat = &self.lattice;
        let mut out = Self::zero(lat.clone(), self.level);
        for (l, a) in self.terms() {
            for (k, b) in other.terms() {
                let ab = a.checked_mul(b).ok_or_else(overflow)?;
                for gamma in lat.double_coset_reps_in(self.level, l, k) {
                    out.add_term(lat.intersection(l, lat.conjugate(k, gamma)), ab)?;
                }
            }
        }
        Ok(out)
    }

    /// Restriction to `K ≤ H`: `[H/L] ↦ Σ_{γ ∈ K\H/L} [K/(K ∩ γLγ⁻¹)]`.
    pub fn restrict(&self, k: usize) -> Result<Self> {
        let lat = &self.lattice;
        if !lat.contains(self.level, k) {
            return Err(Error::domain(format!(
                "{} is not a subgroup of {}",
                lat.label(k),
                lat.label(self.level)
            )));
        }
        let mut out = Self::zero(lat.clone(), k);
        for (l, c) in self.terms() {
            for gamma in lat.double_coset_reps_in(self.level, k, l) {
                out.add_term(lat.intersection(k, lat.conjugate(l, gamma)), c)?;
            }
        }
        Ok(out)
    }

    /// Induction to `H ≥ K`: `[K/L] ↦ [H/L]`.
    pub fn induce(&self, h: usize) -> Result<Self> {
        let lat = &self.lattice;
        if !lat.contains(h, self.level) {
            return Err(Error::domain(format!(
                "{} is not a subgroup of {}",
                lat.label(self.level),
                lat.label(h)
            )));
        }
        let mut out = Self::zero(lat.clone(), h);
        for (l, c) in self.terms() {
            out.add_term(l, c)?;
        }
        Ok(out)
    }

    /// Number of points fixed by `J` in the set this element stands for (its mark at `J`).
    pub fn mark(&self, j: usize) -> Result<usize> {
        let lat = &self.lattice;
        if !lat.contains(self.level, j) {
            return Err(Error::domain(format!("{} is not a subgroup of {}", lat.label(j), lat.label(self.level))));
        }
        let mut total = 0i64;
        for (l, c) in self.terms() {
            let fixed = GSet::transitive(lat.clone(), self.level, l)?.fixed_count(j) as i64;
            total = fixed.checked_mul(c).and_then(|v| total.checked_add(v)).ok_or_else(overflow)?;
        }
        usize::try_from(total).map_err(|_| Error::domain("marks of virtual elements can be negative"))
    }

    /// Coinduction to `H ≥ K` of an effective element.
    pub fn coinduce(&self, h: usize) -> Result<Self> {
        if !self.is_effective() {
            return Err(Error::domain("norms are only defined on effective elements"));
        }
        let lat = &self.lattice;
        let plan = CoinductionPlan::new(lat.clone(), self.level, h)?;
        let marks: Vec<usize> = lat.subsets(self.level).iter().map(|j| self.mark(j)).collect::<Result<_>>()?;
        let positions: Vec<usize> = lat.subsets(self.level).iter().collect();
        let counts = plan.stabilizer_counts(|j| marks[positions.binary_search(&j).expect("J lies in the level")]);
        let mut out = Self::zero(lat.clone(), h);
        for (l, c) in counts {
            out.add_term(l, c.to_i64().ok_or_else(overflow)?)?;
        }
        Ok(out)
    }

    /// Conjugation by `g`, landing at level `gHg⁻¹`.
    pub fn conjugate(&self, g: usize) -> Result<Self> {
        let lat = &self.lattice;
        if g >= lat.group().order() {
            return Err(Error::domain(format!("no group element {g}")));
        }
        let mut out = Self::zero(lat.clone(), lat.conjugate(self.level, g));
        for (l, c) in self.terms() {
            out.add_term(lat.conjugate(l, g), c)?;
        }
        Ok(out)
    }

    /// The element as a set: coefficient-many copies of each canonical orbit, in lattice order.
    pub fn realize(&self) -> Result<GSet> {
        self.realize_with(&Limits::default())
    }

    pub fn realize_with(&self, limits: &Limits) -> Result<GSet> {
        if !self.is_effective() {
            return Err(Error::domain("only effective elements are classes of sets"));
        }
        let entries = (self.cardinality() as u128) * self.lattice.order(self.level) as u128;
        if entries > limits.max_action_entries as u128 {
            return Err(Error::resource(format!(
                "a set of {} points is too large to materialize",
                self.cardinality()
            )));
        }
        let mut parts = vec![GSet::empty(self.lattice.clone(), self.level)];
        for (l, c) in self.terms() {
            let orbit = GSet::transitive(self.lattice.clone(), self.level, l)?;
            parts.extend(std::iter::repeat(orbit).take(c as usize));
        }
        GSet::disjoint_union(&parts)
    }

    /// Human-readable sum such as `2*[C2/C2] + 1*[C2/e]`.
    pub fn display(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let h = self.lattice.label(self.level);
        self.terms()
            .map(|(l, c)| format!("{c}*[{h}/{}]", self.lattice.label(l)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `{"level": label, "coeffs": [[label, c], ...]}` with coefficients sorted by label.
    pub fn to_json(&self) -> Value {
        let mut coeffs: Vec<(String, i64)> = self
            .terms()
            .map(|(l, c)| (self.lattice.label(l).to_string(), c))
            .collect();
        coeffs.sort();
        json!({
            "level": self.lattice.label(self.level),
            "coeffs": coeffs.into_iter().map(|(l, c)| json!([l, c])).collect::<Vec<_>>(),
        })
    }
}

/// A compatible pair of transfer systems, checked once at construction.
#[derive(Debug, Clone)]
pub struct TambaraContext {
    tm: TransferSystem,
    ta: TransferSystem,
    certificate: Compatibility,
    limits: Limits,
}

impl TambaraContext {
    /// Fails with the witness when the pair is not compatible.
    pub fn new(tm: TransferSystem, ta: TransferSystem) -> Result<Self> {
        Self::with_limits(tm, ta, Limits::default())
    }

    pub fn with_limits(tm: TransferSystem, ta: TransferSystem, limits: Limits) -> Result<Self> {
        let certificate = compatible(&tm, &ta)?;
        if let Some(w) = certificate.witness {
            return Err(Error::Gating(format!(
                "transfer systems are not compatible: {}",
                w.describe(tm.lattice())
            )));
        }
        Ok(TambaraContext {
            tm,
            ta,
            certificate,
            limits,
        })
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        self.tm.lattice()
    }

    pub fn multiplicative(&self) -> &TransferSystem {
        &self.tm
    }

    pub fn additive(&self) -> &TransferSystem {
        &self.ta
    }

    pub fn certificate(&self) -> Option<Witness> {
        self.certificate.witness
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    fn require_lattice(&self, x: &BurnsideElement) -> Result<()> {
        if Arc::ptr_eq(x.lattice(), self.lattice()) {
            Ok(())
        } else {
            Err(Error::domain("element lives over a different lattice"))
        }
    }

    pub fn element(&self, level: usize, terms: &[(usize, i64)]) -> Result<BurnsideElement> {
        BurnsideElement::from_terms(self.lattice().clone(), level, terms)
    }

    /// Restriction from the element's level to `k`.
    pub fn res(&self, k: usize, x: &BurnsideElement) -> Result<BurnsideElement> {
        self.require_lattice(x)?;
        x.restrict(k)
    }

    /// Transfer from the element's level `K` to `h`, if `K → h` is additive.
    pub fn tr(&self, h: usize, x: &BurnsideElement) -> Result<BurnsideElement> {
        self.require_lattice(x)?;
        let (lat, k) = (self.lattice(), x.level());
        if lat.contains(h, k) && !self.ta.relates(k, h) {
            return Err(Error::Gating(format!(
                "transfer {} -> {} is not in the additive system",
                lat.label(k),
                lat.label(h)
            )));
        }
        x.induce(h)
    }

    /// Norm from the element's level `K` to `h`, if `K → h` is multiplicative.
    pub fn norm(&self, h: usize, x: &BurnsideElement) -> Result<BurnsideElement> {
        self.require_lattice(x)?;
        let (lat, k) = (self.lattice(), x.level());
        if lat.contains(h, k) && !self.tm.relates(k, h) {
            return Err(Error::Gating(format!(
                "norm {} -> {} is not in the multiplicative system",
                lat.label(k),
                lat.label(h)
            )));
        }
        x.coinduce(h)
    }

    pub fn conj(&self, g: usize, x: &BurnsideElement) -> Result<BurnsideElement> {
        self.require_lattice(x)?;
        x.conjugate(g)
    }

    /// Evaluates both sides of the double coset formula
    /// `R^H_K T^H_L x = Σ_γ T^K_{K∩γLγ⁻¹} R^{γLγ⁻¹}_{K∩γLγ⁻¹} c_γ x` for `x` at level `L`.
    pub fn verify_mackey_dcf(&self, k: usize, h: usize, x: &BurnsideElement) -> Result<bool> {
        let lat = self.lattice().clone();
        let l = x.level();
        if !lat.contains(h, k) {
            return Err(Error::domain(format!("{} is not a subgroup of {}", lat.label(k), lat.label(h))));
        }
        let left = self.res(k, &self.tr(h, x)?)?;
        let mut right = BurnsideElement::zero(lat.clone(), k);
        for gamma in lat.double_coset_reps_in(h, k, l) {
            let moved = self.conj(gamma, x)?;
            let meet = lat.intersection(k, moved.level());
            let term = self.tr(k, &self.res(meet, &moved)?).map_err(|e| match e {
                Error::Gating(msg) => Error::Internal(format!("restricted transfer is not additive: {msg}")),
                other => other,
            })?;
            right = right.add(&term)?;
        }
        Ok(left == right)
    }

    fn require_indexed(&self, ts: &TransferSystem, f: &GMap, what: &str) -> Result<()> {
        if ts.map_in_indexing(f)? {
            Ok(())
        } else {
            Err(Error::Gating(format!("{what} map is not in the corresponding indexing category")))
        }
    }

    /// Compares `N_n T_t x` with `T_{t'} N_{n'} R_{r'} x` for a set `x` over `A`,
    /// where `t: A → B` is additive and `n: B → C` multiplicative.
    pub fn verify_tambara_interchange(&self, t: &GMap, n: &GMap, x: &SlicedGSet) -> Result<bool> {
        self.require_indexed(&self.ta, t, "transfer")?;
        self.require_indexed(&self.tm, n, "norm")?;
        if x.base() != t.source() {
            return Err(Error::domain("element does not live over the source of the transfer"));
        }
        let limits = &self.limits;
        // N_n T_t x: compose, then push forward along n
        let composed = SlicedGSet::new(x.proj().then(t)?);
        let left = dependent_product(n, &composed, limits)?.into_sliced();

        let diagram = exponential_diagram(t, n, limits)?;
        self.require_indexed(&self.ta, &diagram.t_prime, "derived transfer")
            .map_err(|e| Error::Internal(e.to_string()))?;
        self.require_indexed(&self.tm, &diagram.n_prime, "derived norm")
            .map_err(|e| Error::Internal(e.to_string()))?;
        let pulled = pullback(x.proj(), &diagram.r_prime)?;
        let normed = dependent_product(&diagram.n_prime, &SlicedGSet::new(pulled.p2), limits)?;
        let right = SlicedGSet::new(normed.sliced().proj().then(&diagram.t_prime)?);
        left.is_isomorphic_over(&right)
    }
}

/// A span `X ← A → Y`, standing for the transfer along `right` after the restriction along `left`.
#[derive(Debug, Clone)]
pub struct Span {
    pub left: GMap,
    pub right: GMap,
}

impl Span {
    pub fn new(left: GMap, right: GMap) -> Result<Self> {
        if left.source() != right.source() {
            return Err(Error::domain("span legs need a common source"));
        }
        Ok(Span { left, right })
    }

    pub fn identity(x: &GSet) -> Self {
        Span {
            left: GMap::identity(x),
            right: GMap::identity(x),
        }
    }

    /// The apex as a set over `X × Y`.
    fn over_product(&self) -> Result<SlicedGSet> {
        let (x, y) = (self.left.target(), self.right.target());
        let prod = x.product(y)?;
        let map = (0..self.left.source().size())
            .map(|a| (self.left.apply(a) * y.size() + self.right.apply(a)) as u32)
            .collect();
        Ok(SlicedGSet::new(GMap::new(self.left.source().clone(), prod, map)?))
    }

    /// Isomorphism of spans: an isomorphism of apexes commuting with both legs.
    pub fn is_isomorphic(&self, other: &Span) -> Result<bool> {
        if self.left.target() != other.left.target() || self.right.target() != other.right.target() {
            return Ok(false);
        }
        self.over_product()?.is_isomorphic_over(&other.over_product()?)
    }
}

/// Composes `X ← A → Y` then `Y ← B → Z` into `X ← A ×_Y B → Z`. The transfer legs must be
/// additive; the composite's transfer leg is then checked rather than assumed.
pub fn compose_spans(ta: &TransferSystem, first: &Span, second: &Span) -> Result<Span> {
    if first.right.target() != second.left.target() {
        return Err(Error::domain("spans are not composable"));
    }
    for leg in [&first.right, &second.right] {
        if !ta.map_in_indexing(leg)? {
            return Err(Error::Gating("span transfer leg is not additive".into()));
        }
    }
    let pb = pullback(&first.right, &second.left)?;
    let span = Span {
        left: pb.p1.then(&first.left)?,
        right: pb.p2.then(&second.right)?,
    };
    if !ta.map_in_indexing(&span.right)? {
        return Err(Error::Internal("composite transfer leg left the indexing category".into()));
    }
    Ok(span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    fn lat(spec: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(Group::builtin(spec).unwrap()).unwrap())
    }

    fn complete(l: &Arc<SubgroupLattice>) -> TambaraContext {
        TambaraContext::new(TransferSystem::complete(l.clone()), TransferSystem::complete(l.clone())).unwrap()
    }

    #[test]
    fn c2_basics() {
        let l = lat("C2");
        let ctx = complete(&l);
        let free = ctx.element(1, &[(0, 1)]).unwrap();
        assert_eq!(ctx.res(0, &free).unwrap(), ctx.element(0, &[(0, 2)]).unwrap());
        let pt = ctx.element(0, &[(0, 1)]).unwrap();
        assert_eq!(ctx.tr(1, &pt).unwrap(), free);
        assert_eq!(free.mul(&free).unwrap(), free.scale(2).unwrap());
        let one = BurnsideElement::one(l.clone(), 1);
        assert_eq!(one.mul(&free).unwrap(), free);
        for n in 1..=6i64 {
            let x = ctx.element(0, &[(0, n)]).unwrap();
            let expected = ctx.element(1, &[(1, n), (0, n * (n - 1) / 2)]).unwrap();
            assert_eq!(ctx.norm(1, &x).unwrap(), expected);
        }
    }

    #[test]
    fn gating() {
        let l = lat("C2");
        let d = TransferSystem::diagonal(l.clone());
        let c = TransferSystem::complete(l.clone());
        assert!(matches!(TambaraContext::new(c.clone(), d.clone()), Err(Error::Gating(_))));
        let ctx = TambaraContext::new(d.clone(), d.clone()).unwrap();
        let pt = ctx.element(0, &[(0, 1)]).unwrap();
        assert!(matches!(ctx.tr(1, &pt), Err(Error::Gating(_))));
        assert!(matches!(ctx.norm(1, &pt), Err(Error::Gating(_))));
        let ctx = TambaraContext::new(d, c).unwrap();
        assert!(ctx.tr(1, &pt).is_ok());
        assert!(matches!(ctx.norm(1, &pt), Err(Error::Gating(_))));
        assert!(ctx.norm(1, &pt.neg().unwrap()).is_err());
    }

    #[test]
    fn restriction_matches_sets() {
        for spec in ["S3", "D4", "A4"] {
            let l = lat(spec);
            for h in 0..l.len() {
                for m in l.subsets(h).iter() {
                    let x = BurnsideElement::orbit(l.clone(), h, m).unwrap();
                    let set = GSet::transitive(l.clone(), h, m).unwrap();
                    for k in l.subsets(h).iter() {
                        let direct = BurnsideElement::from_gset(&set.restrict(k).unwrap()).unwrap();
                        assert_eq!(x.restrict(k).unwrap(), direct);
                    }
                }
            }
        }
    }

    #[test]
    fn products_match_sets() {
        for spec in ["S3", "C2xC2", "D4"] {
            let l = lat(spec);
            let top = l.top();
            for a in 0..l.len() {
                for b in 0..l.len() {
                    let x = BurnsideElement::orbit(l.clone(), top, a).unwrap();
                    let y = BurnsideElement::orbit(l.clone(), top, b).unwrap();
                    let set = GSet::orbit(l.clone(), a).unwrap().product(&GSet::orbit(l.clone(), b).unwrap()).unwrap();
                    assert_eq!(x.mul(&y).unwrap(), BurnsideElement::from_gset(&set).unwrap());
                }
            }
        }
    }

    #[test]
    fn conjugation() {
        let l = lat("S3");
        let x = BurnsideElement::orbit(l.clone(), 1, 0).unwrap();
        let g = l.group();
        for a in 0..g.order() {
            let y = x.conjugate(a).unwrap();
            assert_eq!(y.level(), l.conjugate(1, a));
            for b in 0..g.order() {
                assert_eq!(y.conjugate(b).unwrap(), x.conjugate(g.mul(b, a)).unwrap());
            }
        }
        let top = BurnsideElement::orbit(l.clone(), l.top(), 1).unwrap();
        assert_eq!(top.conjugate(3).unwrap(), top);
    }

    #[test]
    fn mackey_on_c2() {
        let l = lat("C2");
        let ctx = complete(&l);
        let pt = ctx.element(0, &[(0, 1)]).unwrap();
        assert!(ctx.verify_mackey_dcf(0, 1, &pt).unwrap());
        assert_eq!(ctx.res(0, &ctx.tr(1, &pt).unwrap()).unwrap(), pt.scale(2).unwrap());
    }

    #[test]
    fn interchange_on_c2() {
        let l = lat("C2");
        let ctx = complete(&l);
        let free = GSet::orbit(l.clone(), 0).unwrap();
        let t = GMap::fold(&free, 2).unwrap();
        let n = GMap::to_point(&free);
        let x = SlicedGSet::new(GMap::identity(t.source()));
        assert!(ctx.verify_tambara_interchange(&t, &n, &x).unwrap());
        let id = GMap::identity(&free);
        assert!(ctx.verify_tambara_interchange(&id, &n, &SlicedGSet::new(GMap::identity(&free))).unwrap());
    }

    #[test]
    fn spans() {
        let l = lat("C2");
        let ta = TransferSystem::complete(l.clone());
        let free = GSet::orbit(l.clone(), 0).unwrap();
        let pt = GSet::orbit(l.clone(), 1).unwrap();
        let s = Span::new(GMap::identity(&free), GMap::to_point(&free)).unwrap();
        let c = compose_spans(&ta, &s, &Span::identity(&pt)).unwrap();
        assert!(c.is_isomorphic(&s).unwrap());
        let c = compose_spans(&ta, &Span::identity(&free), &s).unwrap();
        assert!(c.is_isomorphic(&s).unwrap());
        let d = TransferSystem::diagonal(l.clone());
        assert!(matches!(compose_spans(&d, &s, &Span::identity(&pt)), Err(Error::Gating(_))));
    }

    #[test]
    fn marks_and_realize_gate() {
        let l = lat("C2");
        let x = BurnsideElement::from_terms(l.clone(), 1, &[(0, 3), (1, 2)]).unwrap();
        assert_eq!((x.mark(0).unwrap(), x.mark(1).unwrap()), (8, 2));
        let huge = BurnsideElement::from_terms(l, 1, &[(0, 1 << 40)]).unwrap();
        assert!(matches!(huge.realize(), Err(Error::Resource(_))));
    }

    #[test]
    fn json_sorted_by_label() {
        let l = lat("C2xC2");
        let x = BurnsideElement::from_terms(l.clone(), 4, &[(4, 2), (0, 1), (1, 3)]).unwrap();
        assert_eq!(
            x.to_json(),
            json!({"level": "C2xC2", "coeffs": [["C2#1", 3], ["C2xC2", 2], ["e", 1]]})
        );
    }
}
