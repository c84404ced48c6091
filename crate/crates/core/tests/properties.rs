use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use tambara_core::transfer::validate;
use tambara_core::{compatible, BurnsideElement, GSet, Group, Limits, SubgroupLattice, TambaraContext, TransferSystem};

const SPECS: [&str; 6] = ["C4", "C2xC2", "S3", "C6", "D4", "Q8"];

fn lattices() -> &'static Vec<Arc<SubgroupLattice>> {
    static CELL: OnceLock<Vec<Arc<SubgroupLattice>>> = OnceLock::new();
    CELL.get_or_init(|| {
        SPECS
            .iter()
            .map(|s| Arc::new(SubgroupLattice::new(Group::builtin(s).unwrap()).unwrap()))
            .collect()
    })
}

fn proper_pairs(lat: &SubgroupLattice) -> Vec<(usize, usize)> {
    (0..lat.len())
        .flat_map(|h| lat.subsets(h).iter().filter(move |&k| k != h).map(move |k| (k, h)))
        .collect()
}

/// A lattice and a transfer system generated by a random set of inclusions.
fn system() -> impl Strategy<Value = TransferSystem> {
    (0..SPECS.len(), prop::collection::vec(any::<prop::sample::Index>(), 0..4)).prop_map(|(g, picks)| {
        let lat = lattices()[g].clone();
        let pairs = proper_pairs(&lat);
        let chosen: Vec<(usize, usize)> = picks.iter().map(|i| pairs[i.index(pairs.len())]).collect();
        TransferSystem::generate(lat, &chosen).unwrap()
    })
}

/// An effective element at the top level with small coefficients.
fn element(lat: &Arc<SubgroupLattice>, coeffs: &[u8]) -> BurnsideElement {
    let terms: Vec<(usize, i64)> = lat
        .class_reps_in(lat.top())
        .into_iter()
        .zip(coeffs)
        .map(|(l, &c)| (l, c as i64))
        .collect();
    BurnsideElement::from_terms(lat.clone(), lat.top(), &terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_systems_satisfy_the_axioms(t in system()) {
        prop_assert!(validate(t.lattice(), t.relation()).unwrap().is_empty());
        let again = TransferSystem::generate(t.lattice().clone(), &t.proper_pairs().collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(again, t);
    }

    #[test]
    fn generation_is_monotone(a in system(), extra in any::<prop::sample::Index>()) {
        let lat = a.lattice().clone();
        let pairs = proper_pairs(&lat);
        let mut gens: Vec<(usize, usize)> = a.proper_pairs().collect();
        gens.push(pairs[extra.index(pairs.len())]);
        let b = TransferSystem::generate(lat, &gens).unwrap();
        prop_assert!(a.refines(&b).unwrap());
    }

    #[test]
    fn extreme_pairs_are_compatible(t in system()) {
        let lat = t.lattice().clone();
        prop_assert!(compatible(&t, &TransferSystem::complete(lat.clone())).unwrap().is_compatible());
        prop_assert!(compatible(&TransferSystem::diagonal(lat.clone()), &t).unwrap().is_compatible());
    }

    #[test]
    fn burnside_ring_laws(g in 0..SPECS.len(), a in prop::collection::vec(0u8..3, 8), b in prop::collection::vec(0u8..3, 8), c in prop::collection::vec(0u8..3, 8)) {
        let lat = &lattices()[g];
        let (a, b, c) = (element(lat, &a), element(lat, &b), element(lat, &c));
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&BurnsideElement::one(lat.clone(), lat.top())).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap().cardinality(), a.cardinality() * b.cardinality());
    }

    #[test]
    fn restriction_is_a_ring_map_and_matches_sets(g in 0..SPECS.len(), k in any::<prop::sample::Index>(), a in prop::collection::vec(0u8..3, 8), b in prop::collection::vec(0u8..3, 8)) {
        let lat = &lattices()[g];
        let k = k.index(lat.len());
        let (a, b) = (element(lat, &a), element(lat, &b));
        let lhs = a.mul(&b).unwrap().restrict(k).unwrap();
        prop_assert_eq!(lhs, a.restrict(k).unwrap().mul(&b.restrict(k).unwrap()).unwrap());
        let as_set = BurnsideElement::from_gset(&a.realize().unwrap().restrict(k).unwrap()).unwrap();
        prop_assert_eq!(as_set, a.restrict(k).unwrap());
    }

    /// Norms are multiplicative and send 1 to 1, and the fixed-point route
    /// agrees with coinducing the actual set.
    #[test]
    fn norms(g in 0..SPECS.len(), pair in any::<prop::sample::Index>(), a in prop::collection::vec(0u8..2, 4), b in prop::collection::vec(0u8..2, 4)) {
        let lat = &lattices()[g];
        let pairs = proper_pairs(lat);
        let (k, h) = pairs[pair.index(pairs.len())];
        let full = TransferSystem::complete(lat.clone());
        let ctx = TambaraContext::new(full.clone(), full).unwrap();
        let at_k = |coeffs: &[u8]| {
            let terms: Vec<(usize, i64)> = lat.class_reps_in(k).into_iter().zip(coeffs).map(|(l, &c)| (l, c as i64)).collect();
            BurnsideElement::from_terms(lat.clone(), k, &terms).unwrap()
        };
        let (a, b) = (at_k(&a), at_k(&b));
        prop_assert_eq!(ctx.norm(h, &a.mul(&b).unwrap()).unwrap(), ctx.norm(h, &a).unwrap().mul(&ctx.norm(h, &b).unwrap()).unwrap());
        prop_assert_eq!(ctx.norm(h, &BurnsideElement::one(lat.clone(), k)).unwrap(), BurnsideElement::one(lat.clone(), h));
        let x = a.realize().unwrap();
        let index = (lat.order(h) / lat.order(k)) as u32;
        if (x.size() as u64).pow(index) <= 20_000 {
            let direct = BurnsideElement::from_gset(&x.coinduce(h, &Limits::default()).unwrap()).unwrap();
            prop_assert_eq!(direct, ctx.norm(h, &a).unwrap());
        }
    }

    #[test]
    fn coinduction_cardinality(g in 0..SPECS.len(), pair in any::<prop::sample::Index>(), n in 0usize..4) {
        let lat = &lattices()[g];
        let pairs = proper_pairs(lat);
        let (k, h) = pairs[pair.index(pairs.len())];
        let x = GSet::trivial(lat.clone(), k, n);
        let profile = x.coinduce_profile(h).unwrap();
        let index = (lat.order(h) / lat.order(k)) as u32;
        prop_assert_eq!(profile.cardinality(lat), n.pow(index));
    }
}
