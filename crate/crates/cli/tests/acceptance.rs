//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any criterion fails. Runs without the libtest harness so the
//! lines reach the terminal under plain `cargo test`.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quantale_core::girard::{check_characterization, check_dualizing_is_join, check_quantale, find_cyclic_dualizing, quantale_laws};
use quantale_core::io::parse;
use quantale_core::ortho::{check_orthomodular, check_ortholattice, downset_oml};
use quantale_core::residuation::{boolean_residuation, derive_residua, godel_chain, lukasiewicz_chain};
use quantale_core::search::{
    confirm_integral_iff_boolean, search_integral_residuation, search_unital_residuation, SearchConfig,
    DEFAULT_UNITAL_BUDGET,
};
use quantale_core::subspace::{check_basis_independence, verify_theorem_rn};
use quantale_core::{subspace, zoo, Context64, FiniteLattice, MulTable, OrthoLattice, ResiduatedStructure};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn examples_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/examples")
}

fn integral_iff_boolean_to_8() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_quantale"))
        .args(["--format", "machine", "enumerate", "--max-n", "8", "--confirm-thm2"])
        .output()
        .expect("run the cli");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let cli_ok = out.status.code() == Some(0)
        && stdout.lines().any(|l| l.starts_with("search.integral-iff-boolean\tPASS"));

    let c = confirm_integral_iff_boolean(8, SearchConfig::default()).expect("within bounds");
    let rows_ok = c.rows.iter().all(|r| r.agrees());
    let boolean = c.rows.iter().filter(|r| r.boolean).count();
    // on the Boolean rows the single table must also be idempotent
    let idempotent = c
        .rows
        .iter()
        .filter(|r| r.boolean)
        .all(|r| r.found == 1 && r.only_meet);
    let elapsed = start.elapsed();
    outcome(
        cli_ok && rows_ok && idempotent && c.report.passed() && elapsed < Duration::from_secs(600),
        format!("{} complemented lattices, {boolean} Boolean, {elapsed:.2?}", c.rows.len()),
    )
}

fn negative_instances() -> Outcome {
    let start = Instant::now();
    let m3 = search_integral_residuation(&zoo::m3());
    let o6 = search_integral_residuation(zoo::o6().lattice());
    let b3 = zoo::boolean(3);
    let b = search_integral_residuation(&b3);
    let ok = m3.found.is_empty()
        && m3.exhausted
        && o6.found.is_empty()
        && o6.exhausted
        && b.exhausted
        && b.tables() == vec![&MulTable::meet_of(&b3)];
    outcome(
        ok,
        format!("M3 {} found, O6 {} found, 2^3 {} found, {:.2?}", m3.found.len(), o6.found.len(), b.found.len(), start.elapsed()),
    )
}

fn rn_bundle() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in [1, 2, 3, 4, 6, 8] {
        let ctx = Context64::new(n).expect("valid dimension");
        let reports = verify_theorem_rn(&ctx, 1000, 42).expect("valid context");
        for r in reports.iter().filter(|r| !r.passed()) {
            failures.push(format!("n={n} {}", r.law));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(30);
    let detail = if failures.is_empty() {
        format!("6 dimensions x 1000 trials, {elapsed:.2?}")
    } else {
        failures.join(", ")
    };
    outcome(ok, detail)
}

fn dualizing_is_join() -> Outcome {
    let mut structures: Vec<(String, ResiduatedStructure)> =
        (3..=5).map(|m| (format!("Ł{m}"), lukasiewicz_chain(m))).collect();
    for k in 0..=3 {
        structures.push((format!("2^{k}"), boolean_residuation(&zoo::boolean(k)).expect("Boolean")));
    }
    let mut bad = Vec::new();
    for (name, s) in &structures {
        let l = s.lattice().expect("lattice");
        let bottom = l.bottom();
        let cert = find_cyclic_dualizing(s).into_iter().find(|c| c.d == bottom);
        let exact = cert.as_ref().is_some_and(|c| {
            let join = l.join_all((0..s.len()).map(|x| s.mul(x, c.neg.apply(x))));
            join == c.d && check_dualizing_is_join(s, c).passed()
        });
        if !exact {
            bad.push(name.clone());
        }
    }
    let ctx = Context64::new(2).expect("valid dimension");
    let rn = subspace::check_dualizing_is_join(&ctx, 100, 42).expect("valid context");
    if !rn.passed() {
        bad.push(format!("C(R^2): {}", rn.witness));
    }
    let detail = if bad.is_empty() {
        format!("{} finite structures exact, C(R^2) over 100 samples", structures.len())
    } else {
        format!("failed on {}", bad.join(", "))
    };
    outcome(bad.is_empty(), detail)
}

/// Naive oracles, kept separate from the library's scanners.
fn naive_associative(m: &MulTable) -> bool {
    let n = m.len();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| m.get(m.get(x, y), z) == m.get(x, m.get(y, z)))))
}

fn naive_preserves_joins(l: &FiniteLattice, m: &MulTable) -> bool {
    let n = l.len();
    let z = l.bottom();
    (0..n).all(|x| m.get(x, z) == z && m.get(z, x) == z)
        && (0..n).all(|x| {
            (0..n).all(|a| {
                (0..n).all(|b| {
                    m.get(x, l.join(a, b)) == l.join(m.get(x, a), m.get(x, b))
                        && m.get(l.join(a, b), x) == l.join(m.get(a, x), m.get(b, x))
                })
            })
        })
}

/// Rewrites one cell of a chain table with a value that keeps rows and
/// columns monotone and the bottom row and column fixed, so only
/// associativity can break.
fn monotone_chain_mutation(m: &MulTable, rng: &mut ChaCha8Rng) -> Option<MulTable> {
    let n = m.len();
    for _ in 0..200 {
        let x = rng.random_range(1..n);
        let y = rng.random_range(1..n);
        let lo = m.get(x - 1, y).max(m.get(x, y - 1));
        let hi = if x + 1 < n { m.get(x + 1, y) } else { n - 1 };
        let hi = if y + 1 < n { hi.min(m.get(x, y + 1)) } else { hi };
        if lo >= hi {
            continue;
        }
        let v = rng.random_range(lo..=hi);
        if v != m.get(x, y) {
            let mut out = m.clone();
            out.set(x, y, v);
            return Some(out);
        }
    }
    None
}

fn characterization_agreement() -> Outcome {
    let mut suite: Vec<ResiduatedStructure> = Vec::new();
    for k in 1..=3 {
        suite.push(boolean_residuation(&zoo::boolean(k)).expect("Boolean"));
    }
    for m in 2..=6 {
        suite.push(lukasiewicz_chain(m));
    }
    for m in 3..=5 {
        suite.push(godel_chain(m));
    }
    suite.push(zoo::sugihara3());

    // mutated chain tables that stay residuated and keep the top as unit
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mutants = 0;
    for attempt in 0..2000 {
        if mutants == 10 {
            break;
        }
        let base = if attempt % 2 == 0 { lukasiewicz_chain(5) } else { godel_chain(5) };
        let l = base.lattice().expect("chain").clone();
        let Some(m) = monotone_chain_mutation(base.mul_table(), &mut rng) else { continue };
        let top = l.top();
        let unital = (0..m.len()).all(|x| m.get(top, x) == x && m.get(x, top) == x);
        if unital && naive_associative(&m) && naive_preserves_joins(&l, &m) {
            suite.push(ResiduatedStructure::from_lattice(&l, m).expect("residuated by construction"));
            mutants += 1;
        }
    }

    // unital residuations on a non-Boolean orthomodular lattice
    let hits = search_unital_residuation(&zoo::mo(2), DEFAULT_UNITAL_BUDGET);
    suite.extend(hits.found.iter().take(10).cloned());

    let mut positives = 0;
    let mut negatives = 0;
    let mut disagreements = Vec::new();
    for (i, s) in suite.iter().enumerate() {
        match check_characterization(s, None) {
            Some(c) if c.report.passed() => {
                if c.girard {
                    positives += 1;
                } else {
                    negatives += 1;
                }
            }
            Some(c) => disagreements.push(format!("#{i} {}", c.report.witness)),
            None => disagreements.push(format!("#{i} not decided")),
        }
    }
    let ok = disagreements.is_empty() && suite.len() >= 20 && positives > 0 && negatives > 0 && mutants > 0;
    let detail = if disagreements.is_empty() {
        format!("{} structures ({mutants} mutants), {positives} Girard, {negatives} not", suite.len())
    } else {
        format!("disagreement on {}", disagreements.join(", "))
    };
    outcome(ok, detail)
}

fn downsets_orthomodular() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (name, o) in [("MO2", zoo::mo(2)), ("MO3", zoo::mo(3)), ("2^3", zoo::boolean_ortho(3))] {
        for a in 0..o.len() {
            checked += 1;
            let ok = match downset_oml(&o, a) {
                Ok(d) => {
                    check_ortholattice(d.oml.lattice(), d.oml.ortho_map()).passed()
                        && check_orthomodular(&d.oml).iter().all(|r| r.passed())
                }
                Err(_) => false,
            };
            if !ok {
                bad.push(format!("{name}:{}", o.lattice().label(a)));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{checked} downsets")
    } else {
        format!("failed at {}", bad.join(", "))
    };
    outcome(bad.is_empty(), detail)
}

fn orthomodular_forms_agree() -> Outcome {
    let verdicts = |o: &OrthoLattice| check_orthomodular(o).map(|r| r.passed());
    let mut shipped = 0;
    let mut bad = Vec::new();
    let mut paths: Vec<_> = std::fs::read_dir(examples_dir())
        .expect("examples directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "struct"))
        .collect();
    paths.sort();
    for path in paths {
        let f = parse(&std::fs::read_to_string(&path).expect("readable")).expect("parses");
        if f.ortho.is_none() {
            continue;
        }
        let o = f.ortholattice().expect("shipped ortho sections are ortholattices");
        shipped += 1;
        let v = verdicts(&o);
        if v.iter().any(|&x| x != v[0]) {
            bad.push(path.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    let o6 = verdicts(&zoo::o6()) == [false; 3];
    let mo2 = verdicts(&zoo::mo(2)) == [true; 3];
    let boolean = (0..=3).all(|k| verdicts(&zoo::boolean_ortho(k)) == [true; 3]);
    let ok = bad.is_empty() && shipped > 0 && o6 && mo2 && boolean;
    outcome(
        ok,
        format!("{shipped} shipped ortholattices, disagreements {bad:?}, O6 fails all {o6}, MO2 and 2^k pass all {}", mo2 && boolean),
    )
}

fn basis_independence() -> Outcome {
    let mut bad = Vec::new();
    for n in [2, 3, 4, 6] {
        let ctx = Context64::new(n).expect("valid dimension");
        let r = check_basis_independence(&ctx, 500, 42).expect("valid context");
        if !r.passed() {
            bad.push(format!("n={n} {}", r.witness));
        }
    }
    let detail = if bad.is_empty() { "500 trials each at n = 2, 3, 4, 6".to_string() } else { bad.join(", ") };
    outcome(bad.is_empty(), detail)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Injected {
    Zero,
    JoinPreservation,
    Associativity,
}

fn inject(kind: Injected, l: &FiniteLattice, m: &MulTable, rng: &mut ChaCha8Rng) -> Option<MulTable> {
    let n = l.len();
    match kind {
        Injected::Zero => {
            let x = rng.random_range(1..n);
            let mut out = m.clone();
            out.set(l.bottom(), x, x);
            Some(out)
        }
        Injected::JoinPreservation => {
            for _ in 0..200 {
                let (x, y, v) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                let mut out = m.clone();
                out.set(x, y, v);
                // the bottom row and column stay put so the zero law holds
                if x != l.bottom() && y != l.bottom() && !naive_preserves_joins(l, &out) {
                    return Some(out);
                }
            }
            None
        }
        Injected::Associativity => {
            for _ in 0..200 {
                let out = monotone_chain_mutation(m, rng)?;
                if !naive_associative(&out) {
                    return Some(out);
                }
            }
            None
        }
    }
}

fn oracle_cross_checks() -> Outcome {
    let b3 = zoo::boolean(3);
    let derived = derive_residua(b3.poset(), &MulTable::meet_of(&b3)).expect("meet is residuated");
    let table_ok = &derived == boolean_residuation(&b3).expect("Boolean").residua();

    let chains: Vec<ResiduatedStructure> = vec![lukasiewicz_chain(4), lukasiewicz_chain(5), godel_chain(4), godel_chain(5)];
    let general: Vec<(FiniteLattice, MulTable)> = vec![
        (zoo::boolean(2), MulTable::meet_of(&zoo::boolean(2))),
        (zoo::boolean(3), MulTable::meet_of(&zoo::boolean(3))),
        (zoo::n5(), MulTable::meet_of(&zoo::n5())),
        (zoo::chain(4), MulTable::meet_of(&zoo::chain(4))),
    ];
    let chain_pairs: Vec<(FiniteLattice, MulTable)> = chains
        .iter()
        .map(|s| (s.lattice().expect("chain").clone(), s.mul_table().clone()))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let kinds = [Injected::Zero, Injected::JoinPreservation, Injected::Associativity];
    let mut instances = 0;
    let mut agreement_failures = Vec::new();
    let mut flipped = [0usize; 3];
    let mut sublaw_hit = [0usize; 3];
    let mut i = 0;
    while instances < 50 && i < 1000 {
        let kind = kinds[i % 3];
        let (l, base) = match kind {
            Injected::Associativity => &chain_pairs[i / 3 % chain_pairs.len()],
            _ if i % 2 == 0 => &general[i / 3 % general.len()],
            _ => &chain_pairs[i / 3 % chain_pairs.len()],
        };
        i += 1;
        let Some(m) = inject(kind, l, base, &mut rng) else { continue };
        instances += 1;
        let quantale = check_quantale(l, &m).passed();
        let residuated = derive_residua(l.poset(), &m).is_ok();
        if quantale != residuated {
            agreement_failures.push(format!("{kind:?}#{instances}"));
        }
        let k = kinds.iter().position(|&x| x == kind).unwrap();
        let base_verdict = check_quantale(l, base).passed();
        if base_verdict && !quantale {
            flipped[k] += 1;
        }
        let laws = quantale_laws(l, &m);
        let hit = match kind {
            Injected::Zero => laws[3].failed(),
            Injected::JoinPreservation => laws[1].failed() || laws[2].failed(),
            Injected::Associativity => laws[0].failed(),
        };
        if hit {
            sublaw_hit[k] += 1;
        }
    }
    let ok = table_ok
        && instances == 50
        && agreement_failures.is_empty()
        && flipped.iter().all(|&f| f > 0)
        && sublaw_hit.iter().all(|&h| h > 0);
    outcome(
        ok,
        format!(
            "2^3 residua match {table_ok}, {instances} mutants, disagreements {agreement_failures:?}, flips zero/join/assoc {flipped:?}"
        ),
    )
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture are accepted and ignored
    let criteria: [Criterion; 9] = [
        ("integral residuation on complemented lattices up to 8 iff Boolean", integral_iff_boolean_to_8),
        ("M3 and O6 admit no integral residuation, 2^3 only the meet", negative_instances),
        ("subspace quantale laws for n in 1,2,3,4,6,8", rn_bundle),
        ("dualizing element is the join of x times its negation", dualizing_is_join),
        ("Girard deciders agree on at least 20 structures", characterization_agreement),
        ("downsets of MO2, MO3, 2^3 are orthomodular", downsets_orthomodular),
        ("orthomodular conditions agree", orthomodular_forms_agree),
        ("subspace product is basis independent", basis_independence),
        ("residua oracles cross-check under mutation", oracle_cross_checks),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        if !o.ok {
            failed += 1;
        }
        println!("{verdict} [{}] {name}: {}", i + 1, o.detail);
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
