//! `tambara`: subgroup lattices, transfer systems, compatible pairs and
//! Burnside computations from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 resource limit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use tambara_core::gset::CoinductionPlan;
use tambara_core::oracle::{coinduction_compatible, verify_equivalence, OrbitCap};
use tambara_core::transfer::{compatible, enumerate, validate, TransferFile, TransferSystem};
use tambara_core::{dot, expr, laws, Error, Group, Limits, SubgroupLattice, TambaraContext};

#[derive(Parser)]
#[command(name = "tambara", version, about = "Transfer systems, compatible pairs and Burnside Tambara functors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest group whose subgroup lattice is computed.
    #[arg(long, global = true)]
    max_order: Option<usize>,
    /// Largest lattice (number of subgroups) accepted by enumeration.
    #[arg(long, global = true)]
    max_subgroups: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the subgroup lattice with labels, orders and conjugacy classes.
    Lattice {
        group: String,
        #[arg(long)]
        json: bool,
    },
    /// Transfer-system files and enumeration.
    #[command(subcommand)]
    Ts(TsCommand),
    /// Compatibility of pairs of transfer systems.
    #[command(subcommand)]
    Compat(CompatCommand),
    /// Exhaustive and randomized verifications.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Orbit profile of the coinduction of a K-set to H.
    Coinduce {
        group: String,
        k: String,
        h: String,
        /// Set specification such as `2*[K/e] + [K/K]`.
        kset: String,
        #[arg(long)]
        json: bool,
    },
    /// Burnside Tambara functor computations.
    #[command(subcommand)]
    Burnside(BurnsideCommand),
    /// Graphviz drawing: solid arrows for the first system, dashed for arrows only in the second.
    Dot {
        tm: PathBuf,
        ta: Option<PathBuf>,
        /// Collapse subgroups to conjugacy classes.
        #[arg(long)]
        by_class: bool,
    },
}

#[derive(Subcommand)]
enum TsCommand {
    /// Check whether the arrows of a file already form a transfer system.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List every transfer system of a group.
    Enumerate {
        group: String,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
        #[arg(long)]
        dot: bool,
        #[arg(long, requires = "dot")]
        by_class: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Compatible,
    Incompatible,
}

#[derive(Subcommand)]
enum CompatCommand {
    /// Decide compatibility of a pair, with a witness when it fails.
    Check {
        group: String,
        tm: PathBuf,
        ta: PathBuf,
        /// Also run the coinduction oracle.
        #[arg(long)]
        oracle: bool,
        /// Verdict required for exit code 0.
        #[arg(long, value_enum, default_value = "compatible")]
        expect: Expect,
        /// Allow this many orbits beyond the index in the oracle's test sets.
        #[arg(long, default_value_t = 0)]
        cap_extra: usize,
        #[arg(long)]
        json: bool,
    },
    /// Every compatible refining pair among the enumerated transfer systems.
    Pairs {
        group: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Compare the combinatorial check with the coinduction oracle on every refining pair (JSON report).
    Equivalence {
        group: String,
        /// Add the wall-clock time to the report, which makes it non-reproducible.
        #[arg(long)]
        timing: bool,
    },
    /// Random instances of the double coset formula and the interchange law.
    Laws {
        group: String,
        tm: PathBuf,
        ta: PathBuf,
        #[arg(long, default_value_t = 50)]
        rounds: usize,
    },
}

#[derive(Subcommand)]
enum BurnsideCommand {
    /// Evaluate an expression such as `norm(e,C2,3*[e/e]) + tr(e,C2,[e/e])`.
    Eval {
        group: String,
        tm: PathBuf,
        ta: PathBuf,
        expr: String,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Core(Error),
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<String, Failure>;

struct Env {
    limits: Limits,
    seed: u64,
}

impl Env {
    fn lattice(&self, spec: &str) -> Result<Arc<SubgroupLattice>, Failure> {
        let group = Group::builtin_with(spec, &self.limits)?;
        Ok(Arc::new(SubgroupLattice::with_limits(group, &self.limits)?))
    }

    fn load(&self, path: &Path, lattice: &Arc<SubgroupLattice>) -> Result<TransferSystem, Failure> {
        Ok(read_file(path)?.build(lattice.clone())?)
    }
}

fn read_file(path: &Path) -> Result<TransferFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    TransferFile::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn labels(lat: &SubgroupLattice, pairs: impl Iterator<Item = (usize, usize)>) -> Vec<[String; 2]> {
    pairs.map(|(k, h)| [lat.label(k).to_string(), lat.label(h).to_string()]).collect()
}

fn lattice_cmd(env: &Env, spec: &str, as_json: bool) -> Outcome {
    let lat = env.lattice(spec)?;
    let g = lat.group();
    if as_json {
        let subgroups: Vec<Value> = (0..lat.len())
            .map(|s| {
                json!({
                    "index": s,
                    "label": lat.label(s),
                    "name": lat.name(s),
                    "order": lat.order(s),
                    "class": lat.class_of(s),
                    "normal": lat.is_normal(s),
                    "elements": lat.subgroup(s).elements(),
                })
            })
            .collect();
        let classes: Vec<Vec<&str>> = lat
            .classes()
            .iter()
            .map(|c| c.iter().map(|&s| lat.label(s)).collect())
            .collect();
        return Ok(pretty(&json!({
            "group": g.name(),
            "order": g.order(),
            "subgroups": subgroups,
            "classes": classes,
        })));
    }
    let mut out = String::new();
    writeln!(
        out,
        "group {} of order {}: {} subgroups in {} conjugacy classes",
        g.name(),
        g.order(),
        lat.len(),
        lat.classes().len()
    )
    .unwrap();
    let width = (0..lat.len()).map(|s| lat.label(s).len()).max().unwrap_or(1).max(5);
    writeln!(out, "{:>4}  {:<width$}  {:>5}  {:>5}  normal  elements", "idx", "label", "order", "class").unwrap();
    for s in 0..lat.len() {
        writeln!(
            out,
            "{:>4}  {:<width$}  {:>5}  {:>5}  {:<6}  {:?}",
            s,
            lat.label(s),
            lat.order(s),
            lat.class_of(s),
            if lat.is_normal(s) { "yes" } else { "no" },
            lat.subgroup(s).elements()
        )
        .unwrap();
    }
    Ok(out)
}

fn ts_validate(env: &Env, path: &Path, as_json: bool) -> Outcome {
    let file = read_file(path)?;
    let lat = env.lattice(&file.group)?;
    let rel = file.relation(&lat)?;
    let violations = validate(&lat, &rel)?;
    let out = if as_json {
        pretty(&json!({
            "group": lat.group().name(),
            "valid": violations.is_empty(),
            "violations": violations.iter().map(|v| {
                let (k, h) = v.missing(&lat);
                json!({"axiom": v.axiom(), "pair": [lat.label(k), lat.label(h)], "detail": v.describe(&lat)})
            }).collect::<Vec<_>>(),
        }))
    } else if violations.is_empty() {
        let t = TransferSystem::new(lat.clone(), rel)?;
        format!("ok: transfer system on {} with {} non-reflexive arrows\n", lat.group().name(), t.size())
    } else {
        let mut s = format!("{} violation(s):\n", violations.len());
        for v in &violations {
            writeln!(s, "  {}", v.describe(&lat)).unwrap();
        }
        s
    };
    if violations.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification)
    }
}

fn ts_enumerate(env: &Env, spec: &str, as_json: bool, as_dot: bool, by_class: bool) -> Outcome {
    let lat = env.lattice(spec)?;
    let systems = enumerate(lat.clone(), &env.limits)?;
    let mut out = String::new();
    if as_json {
        let list: Vec<Value> = systems
            .iter()
            .map(|t| serde_json::to_value(t.to_json()).expect("serializable"))
            .collect();
        out = pretty(&json!({"group": lat.group().name(), "count": systems.len(), "systems": list}));
    } else if as_dot {
        for (i, t) in systems.iter().enumerate() {
            out.push_str(&dot::render(&format!("T{i}"), t, None, by_class)?);
        }
    } else {
        writeln!(out, "{} transfer systems on {}", systems.len(), lat.group().name()).unwrap();
        for (i, t) in systems.iter().enumerate() {
            let arrows: Vec<String> = t
                .hasse_pairs()
                .into_iter()
                .map(|(k, h)| format!("{} -> {}", lat.label(k), lat.label(h)))
                .collect();
            writeln!(out, "T{i}: {}", if arrows.is_empty() { "(diagonal)".into() } else { arrows.join(", ") }).unwrap();
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn compat_check(
    env: &Env,
    spec: &str,
    tm_path: &Path,
    ta_path: &Path,
    run_oracle: bool,
    expect: Expect,
    cap_extra: usize,
    as_json: bool,
) -> Outcome {
    let lat = env.lattice(spec)?;
    let tm = env.load(tm_path, &lat)?;
    let ta = env.load(ta_path, &lat)?;
    let verdict = compatible(&tm, &ta)?;
    let mut text = String::new();
    writeln!(text, "multiplicative: {:?}", tm).unwrap();
    writeln!(text, "additive:       {:?}", ta).unwrap();
    writeln!(text, "combinatorial: {}", if verdict.is_compatible() { "compatible" } else { "incompatible" }).unwrap();
    if let Some(w) = verdict.witness {
        writeln!(text, "  witness: {}", w.describe(&lat)).unwrap();
    }
    let mut oracle_json = Value::Null;
    let mut agree = true;
    if run_oracle {
        if tm.refines(&ta)? {
            let cap = if cap_extra == 0 { OrbitCap::Index } else { OrbitCap::IndexPlus(cap_extra) };
            let report = coinduction_compatible(&tm, &ta, cap, &env.limits)?;
            agree = report.is_compatible() == verdict.is_compatible();
            writeln!(
                text,
                "oracle: {} ({} arrow classes, {} test sets)",
                if report.is_compatible() { "compatible" } else { "incompatible" },
                report.pairs_scanned,
                report.instances
            )
            .unwrap();
            let mut failing = Value::Null;
            if let Some(f) = &report.failing {
                let confirmed = f.recheck(&tm, &ta, &env.limits)?;
                agree &= confirmed;
                writeln!(text, "  failing instance: {}", f.describe(&lat)).unwrap();
                writeln!(text, "  recheck: {}", if confirmed { "confirmed" } else { "NOT confirmed" }).unwrap();
                let mut v = f.to_json(&lat);
                v["recheck"] = json!(confirmed);
                failing = v;
            }
            oracle_json = json!({
                "verdict": if report.is_compatible() { "compatible" } else { "incompatible" },
                "pairs_scanned": report.pairs_scanned,
                "instances": report.instances,
                "failing": failing,
            });
        } else {
            writeln!(text, "oracle: skipped, the multiplicative system does not refine the additive one").unwrap();
        }
    }
    if !agree {
        writeln!(text, "the combinatorial check and the oracle disagree").unwrap();
    }
    let out = if as_json {
        pretty(&json!({
            "group": lat.group().name(),
            "tm": labels(&lat, tm.proper_pairs()),
            "ta": labels(&lat, ta.proper_pairs()),
            "combinatorial": {
                "verdict": if verdict.is_compatible() { "compatible" } else { "incompatible" },
                "witness": verdict.witness.map(|w| w.to_json(&lat)),
            },
            "oracle": oracle_json,
        }))
    } else {
        text
    };
    let expected = expect == Expect::Compatible;
    if agree && verdict.is_compatible() == expected {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification)
    }
}

fn compat_pairs(env: &Env, spec: &str, as_json: bool) -> Outcome {
    let lat = env.lattice(spec)?;
    let systems = enumerate(lat.clone(), &env.limits)?;
    let mut refining = 0usize;
    let mut pairs = Vec::new();
    for (i, tm) in systems.iter().enumerate() {
        for (j, ta) in systems.iter().enumerate() {
            if tm.refines(ta)? {
                refining += 1;
                if compatible(tm, ta)?.is_compatible() {
                    pairs.push((i, j));
                }
            }
        }
    }
    if as_json {
        return Ok(pretty(&json!({
            "group": lat.group().name(),
            "systems": systems.iter().map(|t| labels(&lat, t.hasse_pairs().into_iter())).collect::<Vec<_>>(),
            "refining_pairs": refining,
            "compatible_pairs": pairs.len(),
            "pairs": pairs.iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
        })));
    }
    let mut out = String::new();
    writeln!(out, "{} transfer systems on {}", systems.len(), lat.group().name()).unwrap();
    writeln!(out, "{refining} refining pairs, {} compatible", pairs.len()).unwrap();
    for (i, t) in systems.iter().enumerate() {
        writeln!(out, "T{i}: {:?}", t).unwrap();
    }
    for (i, j) in pairs {
        writeln!(out, "(T{i}, T{j})").unwrap();
    }
    Ok(out)
}

fn verify_equivalence_cmd(env: &Env, spec: &str, timing: bool) -> Outcome {
    let lat = env.lattice(spec)?;
    let start = std::time::Instant::now();
    let report = verify_equivalence(lat, &env.limits)?;
    let mut v = report.to_json();
    if timing {
        v["seconds"] = json!(start.elapsed().as_secs_f64());
    }
    let out = pretty(&v);
    if report.disagreements.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification)
    }
}

fn verify_laws(env: &Env, spec: &str, tm: &Path, ta: &Path, rounds: usize) -> Outcome {
    let lat = env.lattice(spec)?;
    let ctx = TambaraContext::with_limits(env.load(tm, &lat)?, env.load(ta, &lat)?, env.limits)?;
    let tally = laws::check_laws(&ctx, rounds, env.seed)?;
    let out = pretty(&json!({
        "group": lat.group().name(),
        "seed": env.seed,
        "rounds": rounds,
        "mackey_checked": tally.mackey_checked,
        "mackey_failed": tally.mackey_failed,
        "interchange_checked": tally.interchange_checked,
        "interchange_failed": tally.interchange_failed,
        "skipped": tally.skipped,
    }));
    if tally.failures() == 0 {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification)
    }
}

fn count_json(c: &BigUint) -> Value {
    match u64::try_from(c) {
        Ok(v) if v < (1u64 << 53) => json!(v),
        _ => json!(c.to_string()),
    }
}

fn coinduce_cmd(env: &Env, spec: &str, k: &str, h: &str, kset: &str, as_json: bool) -> Outcome {
    let lat = env.lattice(spec)?;
    let (k, h) = (lat.resolve(k)?, lat.resolve(h)?);
    let x = expr::parse_kset_element(&lat, k, kset)?;
    let plan = CoinductionPlan::new(lat.clone(), k, h)?;
    let subs: Vec<usize> = lat.subsets(k).iter().collect();
    let marks: Vec<usize> = subs.iter().map(|&j| x.mark(j)).collect::<Result<_, _>>()?;
    let counts = plan.stabilizer_counts(|j| marks[subs.binary_search(&j).expect("J lies in K")]);
    // cross-check against the materialized set when it is small enough
    if let Ok(co) = x.realize_with(&env.limits).and_then(|set| set.coinduce(h, &env.limits)) {
        let direct = co.orbit_profile();
        let agrees = counts.len() == direct.entries().count()
            && counts.iter().all(|(l, c)| BigUint::from(direct.count(*l)) == *c);
        if !agrees {
            return Err(Error::Internal("fixed-point counts disagree with the materialized coinduction".into()).into());
        }
    }
    let index = (lat.order(h) / lat.order(k)) as u32;
    let size = BigUint::from(x.cardinality() as u64).pow(index);
    let mut entries: Vec<(String, &BigUint)> = counts.iter().map(|(l, c)| (lat.label(*l).to_string(), c)).collect();
    entries.sort();
    if as_json {
        return Ok(pretty(&json!({
            "group": lat.group().name(),
            "k": lat.label(k),
            "h": lat.label(h),
            "kset": x.to_json()["coeffs"],
            "size": count_json(&size),
            "profile": entries.iter().map(|(l, c)| json!([l, count_json(c)])).collect::<Vec<_>>(),
        })));
    }
    let terms: Vec<String> = counts
        .iter()
        .map(|(l, c)| format!("{c}*[{}/{}]", lat.label(h), lat.label(*l)))
        .collect();
    Ok(format!(
        "coinduction of {} from {} to {}: {} points\n{}\n",
        x.display(),
        lat.label(k),
        lat.label(h),
        size,
        if terms.is_empty() { "0".into() } else { terms.join(" + ") }
    ))
}

fn burnside_eval(env: &Env, spec: &str, tm: &Path, ta: &Path, text: &str, as_json: bool) -> Outcome {
    let lat = env.lattice(spec)?;
    let ctx = match TambaraContext::with_limits(env.load(tm, &lat)?, env.load(ta, &lat)?, env.limits) {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("error: {e}");
            return Err(Failure::Verification);
        }
    };
    let value = expr::eval(&ctx, text)?;
    Ok(if as_json {
        pretty(&value.to_json())
    } else {
        format!("{}\n", value.display())
    })
}

fn dot_cmd(env: &Env, tm: &Path, ta: Option<&Path>, by_class: bool) -> Outcome {
    let file = read_file(tm)?;
    let lat = env.lattice(&file.group)?;
    let first = file.build(lat.clone())?;
    let second = ta.map(|p| env.load(p, &lat)).transpose()?;
    Ok(dot::render("transfer_system", &first, second.as_ref(), by_class)?)
}

fn run(cli: Cli) -> Outcome {
    let mut limits = Limits::default();
    if let Some(n) = cli.max_order {
        limits.max_lattice_order = n;
    }
    if let Some(n) = cli.max_subgroups {
        limits.max_enumerate_subgroups = n;
    }
    let env = Env { limits, seed: cli.seed };
    match cli.command {
        Command::Lattice { group, json } => lattice_cmd(&env, &group, json),
        Command::Ts(TsCommand::Validate { file, json }) => ts_validate(&env, &file, json),
        Command::Ts(TsCommand::Enumerate { group, json, dot, by_class }) => ts_enumerate(&env, &group, json, dot, by_class),
        Command::Compat(CompatCommand::Check {
            group,
            tm,
            ta,
            oracle,
            expect,
            cap_extra,
            json,
        }) => compat_check(&env, &group, &tm, &ta, oracle, expect, cap_extra, json),
        Command::Compat(CompatCommand::Pairs { group, json }) => compat_pairs(&env, &group, json),
        Command::Verify(VerifyCommand::Equivalence { group, timing }) => verify_equivalence_cmd(&env, &group, timing),
        Command::Verify(VerifyCommand::Laws { group, tm, ta, rounds }) => verify_laws(&env, &group, &tm, &ta, rounds),
        Command::Coinduce { group, k, h, kset, json } => coinduce_cmd(&env, &group, &k, &h, &kset, json),
        Command::Burnside(BurnsideCommand::Eval { group, tm, ta, expr, json }) => burnside_eval(&env, &group, &tm, &ta, &expr, json),
        Command::Dot { tm, ta, by_class } => dot_cmd(&env, &tm, ta.as_deref(), by_class),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource(_) => 3,
                Error::Internal(_) => 1,
                _ => 2,
            })
        }
    }
}
