//! Acceptance criteria, one line per criterion.
//!
//! Criterion 3 cannot hold for the figure as drawn; it is run unchanged and
//! reported as a failure. Every other failure makes the target fail.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tambara_core::gset::dependent_product;
use tambara_core::oracle::{coinduction_compatible, verify_equivalence, OrbitCap};
use tambara_core::transfer::{enumerate, enumerate_naive, for_each_transfer_system, validate, TransferFile};
use tambara_core::{
    compatible, BurnsideElement, GMap, GSet, Group, Limits, SlicedGSet, SubgroupLattice, TambaraContext,
    TransferSystem, Witness,
};

/// Criteria that are run in full but known not to hold.
const EXPECTED_FAILURES: &[usize] = &[3];

type Check = fn() -> Result<String, String>;

fn lattice(spec: &str) -> Arc<SubgroupLattice> {
    Arc::new(SubgroupLattice::new(Group::builtin(spec).unwrap()).unwrap())
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn load(name: &str) -> TransferFile {
    let text = std::fs::read_to_string(root().join("fixtures").join(name)).unwrap();
    TransferFile::parse(&text).unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    ensure(start.elapsed() < budget, format!("took {:.2?}, budget {budget:?}", start.elapsed()))
}

fn figure_one() -> Result<String, String> {
    let start = Instant::now();
    let lat = lattice("C4");
    let left = load("fig1-left.ts").relation(&lat).unwrap();
    let right = load("fig1-right.ts").relation(&lat).unwrap();
    let left_v = validate(&lat, &left).unwrap();
    ensure(left_v.is_empty(), format!("left relation has violations: {left_v:?}"))?;
    let right_v = validate(&lat, &right).unwrap();
    ensure(right_v.len() == 1, format!("expected one violation, got {right_v:?}"))?;
    let v = &right_v[0];
    let (k, h) = v.missing(&lat);
    ensure(
        v.axiom() == "intersection" && lat.label(k) == "e" && lat.label(h) == "C2",
        v.describe(&lat),
    )?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("right relation: {}", v.describe(&lat)))
}

fn figure_two() -> Result<String, String> {
    let start = Instant::now();
    let lat = lattice("C2xC2");
    let tm = load("fig2-tm.ts").build(lat.clone()).unwrap();
    let ta = load("fig2-ta.ts").build(lat.clone()).unwrap();
    let w = compatible(&tm, &ta).unwrap().witness.ok_or("combinatorial check says compatible")?;
    let Witness::Diamond { a, b, c } = w else {
        return Err(format!("unexpected witness {w:?}"));
    };
    ensure(a == lat.top() && lat.intersection(b, c) == 0, w.describe(&lat))?;
    let report = coinduction_compatible(&tm, &ta, OrbitCap::Index, &Limits::default()).unwrap();
    let failing = report.failing.ok_or("oracle says compatible")?;
    ensure(failing.recheck(&tm, &ta, &Limits::default()).unwrap(), "failing instance does not recheck")?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("witness ({}, {}, {}); oracle: {}", lat.label(a), lat.label(b), lat.label(c), failing.describe(&lat)))
}

fn figure_three() -> Result<String, String> {
    let start = Instant::now();
    let lat = lattice("A5");
    let tm = load("fig3-tm.ts").build(lat.clone()).map_err(|e| e.to_string())?;
    let ta = load("fig3-ta.ts").build(lat.clone()).map_err(|e| e.to_string())?;
    for t in [&tm, &ta] {
        let v = validate(&lat, t.relation()).unwrap();
        ensure(v.is_empty(), format!("lift is not a transfer system: {v:?}"))?;
    }
    // the drawn arrows are classes; the lift is recorded rather than assumed
    let lift = serde_json::json!({
        "tm": tm.hasse_pairs().iter().map(|&(k, h)| [lat.label(k), lat.label(h)]).collect::<Vec<_>>(),
        "ta": ta.hasse_pairs().iter().map(|&(k, h)| [lat.label(k), lat.label(h)]).collect::<Vec<_>>(),
        "tm_size": tm.size(),
        "ta_size": ta.size(),
    });
    check_snapshot("figure3_lift.json", &lift)?;
    let verdict = compatible(&tm, &ta).unwrap();
    let report = coinduction_compatible(&tm, &ta, OrbitCap::Index, &Limits::default()).map_err(|e| e.to_string())?;
    let oracle = match &report.failing {
        None => "compatible".to_string(),
        Some(f) => format!("incompatible, {}", f.describe(&lat)),
    };
    within(start, Duration::from_secs(300))?;
    match verdict.witness {
        None if report.is_compatible() => Ok(format!("|Tm| = {}, |Ta| = {}", tm.size(), ta.size())),
        None => Err(format!("combinatorial check compatible but oracle {oracle}")),
        Some(w) => Err(format!(
            "lift (|Tm| = {}, |Ta| = {}) is incompatible: witness {}; oracle {oracle}",
            tm.size(),
            ta.size(),
            w.describe(&lat)
        )),
    }
}

fn norm_formula() -> Result<String, String> {
    let start = Instant::now();
    let lat = lattice("C2");
    let full = TransferSystem::complete(lat.clone());
    let ctx = TambaraContext::new(full.clone(), full).unwrap();
    for n in 1..=6usize {
        let x = GSet::trivial(lat.clone(), 0, n);
        let co = x.coinduce(1, &Limits::default()).unwrap().orbit_profile();
        let pairs = n * (n - 1) / 2;
        ensure(co.count(1) == n && co.count(0) == pairs, format!("n = {n}: {}", co.display(&lat)))?;
        let normed = ctx.norm(1, &ctx.element(0, &[(0, n as i64)]).unwrap()).unwrap();
        let expected = BurnsideElement::from_terms(lat.clone(), 1, &[(1, n as i64), (0, pairs as i64)]).unwrap();
        ensure(normed == expected, format!("n = {n}: {}", normed.display()))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("n = 1..6".into())
}

fn interchange() -> Result<String, String> {
    let start = Instant::now();
    let lat = lattice("C2");
    let full = TransferSystem::complete(lat.clone());
    let ctx = TambaraContext::new(full.clone(), full).unwrap();
    let free = GSet::orbit(lat.clone(), 0).unwrap();
    // A = C2/e ⊔ C2/e folds onto B = C2/e, which maps to the point C = C2/C2
    let t = GMap::fold(&free, 2).unwrap();
    let n = GMap::to_point(&free);
    let mut lines = Vec::new();
    for (ka, kb) in [(1usize, 1usize), (2, 1)] {
        // x over A: ka points over each point of the first copy, kb over the second
        let x = GSet::disjoint_union(&vec![free.clone(); ka + kb]).unwrap();
        let map: Vec<u32> = (0..x.size()).map(|p| if p / 2 < ka { (p % 2) as u32 } else { 2 + (p % 2) as u32 }).collect();
        let sliced = SlicedGSet::new(GMap::new(x, t.source().clone(), map).unwrap());
        ensure(ctx.verify_tambara_interchange(&t, &n, &sliced).unwrap(), format!("diagram fails for a = {ka}, b = {kb}"))?;

        let left_set = dependent_product(&n, &SlicedGSet::new(sliced.proj().then(&t).unwrap()), &Limits::default())
            .unwrap()
            .into_sliced();
        let left = BurnsideElement::from_gset(left_set.total()).unwrap();
        let a = ctx.element(0, &[(0, ka as i64)]).unwrap();
        let b = ctx.element(0, &[(0, kb as i64)]).unwrap();
        let norm_sum = ctx.norm(1, &a.add(&b).unwrap()).unwrap();
        // the non-identity element of C2 is 1; c_σ on level e is the identity
        let cross = ctx.tr(1, &a.mul(&ctx.conj(1, &b).unwrap()).unwrap()).unwrap();
        let right = ctx
            .norm(1, &a)
            .unwrap()
            .add(&ctx.norm(1, &b).unwrap())
            .unwrap()
            .add(&cross)
            .unwrap();
        ensure(norm_sum == right && left == norm_sum, format!("N(a+b) = {} but right side {}", norm_sum.display(), right.display()))?;
        lines.push(format!("a = {ka}[e/e], b = {kb}[e/e]: {}", norm_sum.display()));
    }
    within(start, Duration::from_secs(1))?;
    Ok(lines.join("; "))
}

fn equivalence_sweep() -> Result<String, String> {
    let start = Instant::now();
    let mut lines = Vec::new();
    for spec in ["C2", "C3", "C4", "C2xC2", "C6", "S3", "C8", "D4", "Q8"] {
        let report = verify_equivalence(lattice(spec), &Limits::default()).unwrap();
        ensure(report.disagreements.is_empty(), format!("{spec}: {:?}", report.disagreements))?;
        lines.push(format!("{spec} {}/{}", report.compatible_pairs, report.pairs_tested));
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("compatible/refining: {}", lines.join(", ")))
}

fn enumeration_snapshot() -> Result<String, String> {
    let mut counts = BTreeMap::new();
    for spec in ["C2", "C4", "C2xC2", "S3"] {
        let lat = lattice(spec);
        let fast = enumerate(lat.clone(), &Limits::default()).unwrap();
        let naive = enumerate_naive(lat).unwrap();
        ensure(fast.len() == naive.len(), format!("{spec}: backtracking {} vs naive {}", fast.len(), naive.len()))?;
        counts.insert(spec.to_string(), fast.len());
    }
    for spec in ["C3", "C6", "C8", "D4", "Q8"] {
        counts.insert(spec.to_string(), enumerate(lattice(spec), &Limits::default()).unwrap().len());
    }
    check_snapshot("enumeration_counts.json", &serde_json::to_value(&counts).unwrap())?;
    Ok(format!("{counts:?}"))
}

/// Compares with the recorded snapshot, writing it on the first run.
fn check_snapshot(name: &str, value: &serde_json::Value) -> Result<(), String> {
    let path = root().join("crates/core/tests/snapshots").join(name);
    if path.exists() {
        let recorded: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        ensure(&recorded == value, format!("{name} changed: recorded {recorded}, now {value}"))
    } else {
        std::fs::write(&path, serde_json::to_string_pretty(value).unwrap() + "\n").map_err(|e| e.to_string())
    }
}

/// The non-abelian group C3 ⋊ C4 of order 12, which has no built-in spec.
fn dicyclic12() -> Arc<SubgroupLattice> {
    let a: Vec<u32> = vec![1, 2, 0, 3, 4, 5, 6];
    let b: Vec<u32> = vec![0, 2, 1, 4, 5, 6, 3];
    let g = Group::from_generators("Dic3", 7, &[a, b], &Limits::default()).unwrap();
    assert_eq!(g.order(), 12);
    Arc::new(SubgroupLattice::new(g).unwrap())
}

struct ClosureTally {
    systems: usize,
    instances: usize,
    failures: Vec<String>,
}

/// The three closure properties for one transfer system. `induced[(j, k, h)]`
/// holds the stabilizers of `H ×_K K/J`.
fn closure_properties(
    t: &TransferSystem,
    induced: &HashMap<(usize, usize, usize), Vec<usize>>,
    tally: &mut ClosureTally,
) {
    let lat = t.lattice();
    tally.systems += 1;
    for (k, h) in t.pairs() {
        for l in 0..lat.len() {
            tally.instances += 1;
            if !t.relates(lat.intersection(k, l), lat.intersection(h, l)) {
                tally.failures.push(format!("restriction: {:?} with {}", t, lat.label(l)));
            }
        }
        tally.instances += 1;
        if !t.relates(lat.core(k), lat.core(h)) {
            tally.failures.push(format!("core: {:?} at {} -> {}", t, lat.label(k), lat.label(h)));
        }
        for j in lat.subsets(k).iter() {
            if t.relates(j, k) {
                tally.instances += 1;
                if !induced[&(j, k, h)].iter().all(|&s| t.relates(s, h)) {
                    tally.failures.push(format!("induction: {:?} at {} -> {} -> {}", t, lat.label(j), lat.label(k), lat.label(h)));
                }
            }
        }
    }
}

fn induced_stabilizers(lat: &Arc<SubgroupLattice>) -> HashMap<(usize, usize, usize), Vec<usize>> {
    let mut out = HashMap::new();
    for h in 0..lat.len() {
        for k in lat.subsets(h).iter() {
            for j in lat.subsets(k).iter() {
                let x = GSet::transitive(lat.clone(), k, j).unwrap().induce(h, &Limits::default()).unwrap();
                let stabs: BTreeSet<usize> = (0..x.size()).map(|p| x.stabilizer(p)).collect();
                out.insert((j, k, h), stabs.into_iter().collect());
            }
        }
    }
    out
}

fn closure_suite() -> Result<String, String> {
    let start = Instant::now();
    let specs = [
        "C1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "C7", "C8", "C2xC4", "D4", "Q8", "C9", "C3xC3", "C10", "D5",
        "C11", "C12", "C2xC6", "A4", "D6",
    ];
    let mut lattices: Vec<Arc<SubgroupLattice>> = specs.iter().map(|s| lattice(s)).collect();
    lattices.push(dicyclic12());
    let mut tally = ClosureTally { systems: 0, instances: 0, failures: Vec::new() };
    for lat in &lattices {
        let induced = induced_stabilizers(lat);
        for_each_transfer_system(lat.clone(), &Limits::default(), |t| closure_properties(t, &induced, &mut tally))
            .unwrap();
    }
    // C2xC2xC2 has too many transfer systems to visit; sample generated ones
    let lat = lattice("C2xC2xC2");
    let induced = induced_stabilizers(&lat);
    let proper: Vec<(usize, usize)> = (0..lat.len())
        .flat_map(|h| lat.subsets(h).iter().filter(move |&k| k != h).map(move |k| (k, h)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let sampled = 400;
    for _ in 0..sampled {
        let p = rng.gen_range(0.0..0.25);
        let gens: Vec<(usize, usize)> = proper.iter().copied().filter(|_| rng.gen_bool(p)).collect();
        closure_properties(&TransferSystem::generate(lat.clone(), &gens).unwrap(), &induced, &mut tally);
    }
    ensure(tally.failures.is_empty(), format!("{} failures, first: {}", tally.failures.len(), tally.failures.first().map_or("", |s| s)))?;
    Ok(format!(
        "{} groups, {} systems ({} sampled on C2xC2xC2), {} instances, 0 failures in {:.1?}",
        lattices.len() + 1,
        tally.systems,
        sampled,
        tally.instances,
        start.elapsed()
    ))
}

/// L-sets with at most three orbits, each of at most three points.
fn small_lsets(lat: &Arc<SubgroupLattice>, l: usize) -> Vec<GSet> {
    let types: Vec<usize> = lat
        .class_reps_in(l)
        .into_iter()
        .filter(|&j| lat.order(l) / lat.order(j) <= 3)
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((from, chosen)) = stack.pop() {
        if !chosen.is_empty() {
            let orbits: Vec<GSet> = chosen.iter().map(|&j| GSet::transitive(lat.clone(), l, j).unwrap()).collect();
            out.push(GSet::disjoint_union(&orbits).unwrap());
        }
        if chosen.len() < 3 {
            for i in from..types.len() {
                let mut next = chosen.clone();
                next.push(types[i]);
                stack.push((i, next));
            }
        }
    }
    out
}

fn coinduction_double_cosets() -> Result<String, String> {
    let start = Instant::now();
    let limits = Limits::default();
    let (mut instances, mut materialized) = (0usize, 0usize);
    for spec in ["S3", "D4", "A4"] {
        let lat = lattice(spec);
        let top = lat.top();
        for l in 0..lat.len() {
            let index = (lat.order(top) / lat.order(l)) as u32;
            for x in small_lsets(&lat, l) {
                let whole = BurnsideElement::from_gset(&x).unwrap().coinduce(top).unwrap();
                let small = (x.size() as u64).pow(index) <= 4096;
                let whole_set = if small { Some(x.coinduce(top, &limits).unwrap()) } else { None };
                for k in 0..lat.len() {
                    instances += 1;
                    let left = whole.restrict(k).unwrap();
                    let mut right = BurnsideElement::one(lat.clone(), k);
                    let mut right_set: Option<GSet> = None;
                    for gamma in lat.double_coset_reps(k, l) {
                        let moved = x.conjugated(gamma);
                        let meet = lat.intersection(k, moved.acting());
                        let part = moved.restrict(meet).unwrap();
                        let factor = BurnsideElement::from_gset(&part).unwrap().coinduce(k).unwrap();
                        right = right.mul(&factor).unwrap();
                        if small {
                            let factor_set = part.coinduce(k, &limits).unwrap();
                            right_set = Some(match right_set {
                                None => factor_set,
                                Some(acc) => acc.product(&factor_set).unwrap(),
                            });
                        }
                    }
                    ensure(
                        left == right,
                        format!(
                            "{spec}: K = {}, L = {}, X = {}: {} vs {}",
                            lat.label(k),
                            lat.label(l),
                            x.orbit_profile().display(&lat),
                            left.display(),
                            right.display()
                        ),
                    )?;
                    if let (Some(w), Some(r)) = (&whole_set, &right_set) {
                        materialized += 1;
                        ensure(
                            w.restrict(k).unwrap().is_isomorphic(r).unwrap(),
                            format!("{spec}: sets differ at K = {}, L = {}", lat.label(k), lat.label(l)),
                        )?;
                    }
                }
            }
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{instances} instances ({materialized} also as sets), 0 failures"))
}

fn has_trivial_core_arrow_to_top(t: &TransferSystem) -> bool {
    let lat = t.lattice();
    (0..lat.len()).any(|h| h != lat.top() && lat.core(h) == 0 && t.relates(h, lat.top()))
}

fn trivial_core_forces_complete() -> Result<String, String> {
    let start = Instant::now();
    let mut summary = Vec::new();
    for spec in ["S3", "S4"] {
        let lat = lattice(spec);
        let limits = Limits { max_enumerate_subgroups: lat.len(), ..Limits::default() };
        let systems = enumerate(lat.clone(), &limits).unwrap();
        let (mut checked, mut oracle_checked) = (0usize, 0usize);
        for tm in systems.iter().filter(|t| has_trivial_core_arrow_to_top(t)) {
            for ta in &systems {
                if !tm.refines(ta).unwrap() {
                    continue;
                }
                let compat = compatible(tm, ta).unwrap().is_compatible();
                if compat {
                    checked += 1;
                    ensure(ta.is_complete(), format!("{spec}: compatible ({tm:?}, {ta:?}) with incomplete additive system"))?;
                }
                // single-pair oracle checks on S4, a few per multiplicative system
                if spec == "S3" || (oracle_checked < 12 && !ta.is_complete()) {
                    let report = coinduction_compatible(tm, ta, OrbitCap::Index, &limits).unwrap();
                    oracle_checked += 1;
                    ensure(
                        report.is_compatible() == compat,
                        format!("{spec}: oracle disagrees on ({tm:?}, {ta:?})"),
                    )?;
                }
            }
        }
        summary.push(format!("{spec}: {checked} compatible pairs, {oracle_checked} oracle checks"));
    }
    Ok(format!("{} in {:.1?}", summary.join("; "), start.elapsed()))
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("Figure 1 regression", figure_one),
        ("Figure 2 regression", figure_two),
        ("Figure 3 regression", figure_three),
        ("norm formula on C2", norm_formula),
        ("interchange on C2", interchange),
        ("equivalence sweep", equivalence_sweep),
        ("enumeration self-consistency", enumeration_snapshot),
        ("closure properties, order <= 12", closure_suite),
        ("coinduction double coset formula", coinduction_double_cosets),
        ("trivial core forces complete additive system", trivial_core_forces_complete),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut unexpected = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {n:>2} PASS  {name} [{secs:.2}s]: {detail}"),
            Err(detail) if EXPECTED_FAILURES.contains(&n) => {
                println!("criterion {n:>2} FAIL  {name} [{secs:.2}s] (known, see notes/decisions.md): {detail}")
            }
            Err(detail) => {
                unexpected += 1;
                println!("criterion {n:>2} FAIL  {name} [{secs:.2}s]: {detail}");
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
