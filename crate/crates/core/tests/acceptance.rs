//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use jsl_core::arrow::arrow_table;
use jsl_core::atlas::{self, classify, Atlas, ChainReport, Flag, Predicate};
use jsl_core::corpus::{self, ModelReport, RunReport};
use jsl_core::distributivity::{check, Notion};
use jsl_core::ideals::verify_characterizations;
use jsl_core::JoinSemilattice;

type Outcome = Result<String, String>;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn models_up_to(n: usize) -> Vec<JoinSemilattice> {
    (1..=n).flat_map(|k| atlas::enumerate_jsl(k).unwrap()).collect()
}

fn corpus_models(report: &RunReport) -> Vec<(String, JoinSemilattice)> {
    report
        .models
        .iter()
        .filter_map(|m| Some((m.name.clone(), m.record.as_ref()?.model().ok()?)))
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn find<'a>(report: &'a RunReport, name: &str) -> Result<&'a ModelReport, String> {
    report.models.iter().find(|m| m.name == name).ok_or_else(|| format!("model {name} missing"))
}

/// The expectation `key value` is present on `model` and passed.
fn fact(report: &RunReport, model: &str, key: &str, value: bool) -> Result<(), String> {
    let m = find(report, model)?;
    let e = m
        .expectations
        .iter()
        .find(|e| e.flag == key && e.expected == value)
        .ok_or_else(|| format!("{model}: no `expect {key} {value}`"))?;
    ensure(e.passed(), || format!("{model}: {key} expected {value}, got {:?} {:?}", e.actual, e.error))
}

fn corpus_regression() -> Outcome {
    let start = Instant::now();
    let report = corpus::run_corpus(&corpus_dir()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(report.passed(), || format!("{} failing expectations", report.failures))?;
    for (model, key, value) in [
        ("vee", "K", true),
        ("vee", "GS", false),
        ("bh", "B", true),
        ("bh", "ND", false),
        ("bh", "ARROW_TOTAL", false),
        ("fdjns", "D_LATTICE", true),
        ("fdjns_black", "JOIN_CLOSED", true),
        ("fdjns_black", "ISO(m3)", true),
        ("fdjns_black", "ND", false),
        ("b9sub", "JOIN_CLOSED", true),
        ("b9sub", "ARROW_CLOSED", true),
        ("b9sub", "ARROW_DEFINED(hh,00)", false),
    ] {
        fact(&report, model, key, value)?;
    }
    within(elapsed, Duration::from_secs(5), "corpus run")?;
    let checked: usize = report.models.iter().map(|m| m.expectations.len()).sum();
    Ok(format!("{} models, {checked} expectations, {elapsed:?}", report.models.len()))
}

/// Rows `a, b, 1`, columns `a, b, 1`, entries `a → b`.
const JSL1_TABLE: [[&str; 3]; 3] = [["1", "b", "1"], ["a", "1", "1"], ["a", "b", "1"]];

fn jsl1_arrow() -> Outcome {
    let start = Instant::now();
    let j = corpus::builtin_model("jsl1").map_err(|e| e.to_string())?;
    let table = arrow_table(&j);
    let labels = ["a", "b", "1"];
    for (row, a) in labels.iter().enumerate() {
        for (col, b) in labels.iter().enumerate() {
            let ia = j.index_of(a).ok_or("label a")?;
            let ib = j.index_of(b).ok_or("label b")?;
            let got = table.get(ia, ib).value().map(|r| j.name(r).to_owned());
            let want = JSL1_TABLE[row][col];
            ensure(got.as_deref() == Some(want), || format!("{a} -> {b}: got {got:?}, want {want}"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1), "arrow table")?;
    Ok(format!("9/9 entries, {elapsed:?}"))
}

fn characterizations() -> Outcome {
    let report = corpus::run_corpus(&corpus_dir()).map_err(|e| e.to_string())?;
    let mut models = corpus_models(&report);
    models.extend(models_up_to(6).into_iter().map(|j| (j.poset().canonical_code(), j)));
    let mut disagreements = Vec::new();
    for (name, j) in &models {
        let c = verify_characterizations(j).map_err(|e| e.to_string())?;
        for pair in c.pairs() {
            if !pair.agrees() {
                disagreements.push(format!("{name}: {} vs {}", pair.notion, pair.family));
            }
        }
    }
    ensure(disagreements.is_empty(), || disagreements.join("; "))?;
    Ok(format!("{} models, 3 pairs each, 0 disagreements", models.len()))
}

fn equivalence_cluster() -> Outcome {
    let models = models_up_to(6);
    let mut disagreements = Vec::new();
    for j in &models {
        let holds = |n| check(j, n).map(|r| r.holds).map_err(|e| e.to_string());
        let nd = holds(Notion::Nd)?;
        let mut cluster = vec![(Notion::Lr, holds(Notion::Lr)?)];
        for k in 2..=3 {
            // Arities beyond the size repeat arguments and add nothing.
            let k = k.min(j.len());
            cluster.push((Notion::CN(k), holds(Notion::CN(k))?));
            cluster.push((Notion::DveeN(k), holds(Notion::DveeN(k))?));
        }
        for (n, v) in cluster {
            if v != nd {
                disagreements.push(format!("{n} on {}", j.poset().canonical_code()));
            }
        }
    }
    ensure(disagreements.is_empty(), || disagreements.join("; "))?;
    Ok(format!("{} models, ND = LR = C2 = C3 = DVEE2 = DVEE3", models.len()))
}

fn chain_is_clean(report: &ChainReport) -> Result<(), String> {
    ensure(report.is_clean(), || {
        let first: Vec<String> =
            report.findings.iter().take(5).map(|f| format!("{} {}", f.code, f.check)).collect();
        format!("{} findings: {}", report.findings.len(), first.join("; "))
    })?;
    let violations: usize = report.sizes.iter().map(|s| s.chain_violations + s.total_disagreements()).sum();
    ensure(violations == 0, || format!("{violations} violations"))
}

fn implication_chain(reports: &mut Vec<ChainReport>) -> Outcome {
    let mut timings = Vec::new();
    for (workers, limit) in [(1, 600), (8, 120)] {
        let start = Instant::now();
        let report = Atlas::with_workers(workers).verify_chain(6).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        chain_is_clean(&report)?;
        within(elapsed, Duration::from_secs(limit), &format!("{workers}-worker run"))?;
        ensure(report.total_models() == 77, || format!("{} models, expected 77", report.total_models()))?;
        timings.push(format!("{workers} worker(s) {elapsed:?}"));
        reports.push(report);
    }
    let lattices = models_up_to(6)
        .into_iter()
        .filter(|j| j.is_lattice())
        .map(|j| classify(&j).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    for r in &lattices {
        let d = r.flag(Flag::Notion(Notion::DLattice)).ok_or("D_LATTICE missing")?;
        for n in [Notion::Gs, Notion::K, Notion::Nd, Notion::B, Notion::S(2), Notion::S(3)] {
            ensure(r.flag(Flag::Notion(n)) == Some(d), || format!("{n} differs from D on lattice {}", r.code))?;
        }
    }
    Ok(format!("77 models clean, {} lattices agree with D; {}", lattices.len(), timings.join(", ")))
}

/// Codes of the smallest models satisfying `pred`, by brute force over labelled models.
fn oracle_minimal(pred: impl Fn(&common::Model) -> bool, max_n: usize) -> Option<(usize, BTreeSet<String>)> {
    (1..=max_n).find_map(|n| {
        let hits: BTreeSet<String> = common::classes(common::labeled_jsls(n))
            .into_iter()
            .filter(|m| pred(m))
            .map(|m| m.to_poset().canonical_code())
            .collect();
        (!hits.is_empty()).then_some((n, hits))
    })
}

fn minimal_search(pred: &str, max_n: usize) -> Result<(Option<usize>, BTreeSet<String>), String> {
    let p: Predicate = pred.parse().map_err(|e: jsl_core::Error| e.to_string())?;
    let found = Atlas::default().find_minimal(&p, max_n).map_err(|e| e.to_string())?;
    Ok((found.size, found.models.iter().map(|r| r.code.clone()).collect()))
}

fn countermodels() -> Outcome {
    let code = |name: &str| corpus::builtin_model(name).map(|j| j.poset().canonical_code()).map_err(|e| e.to_string());

    let (size, codes) = minimal_search("K & !GS", 6)?;
    ensure(size == Some(3) && codes == BTreeSet::from([code("vee")?]), || format!("K & !GS: {size:?} {codes:?}"))?;
    let oracle = oracle_minimal(|m| common::k(m) && !common::gs(m), 4);
    ensure(oracle == Some((3, codes.clone())), || format!("K & !GS oracle {oracle:?}"))?;

    let (size, codes) = minimal_search("B & !ND", 6)?;
    ensure(size == Some(4) && codes.contains(&code("bh")?), || format!("B & !ND: {size:?} {codes:?}"))?;
    let oracle = oracle_minimal(|m| common::b(m) && !common::nd(m), 4);
    ensure(oracle == Some((4, codes.clone())), || format!("B & !ND oracle {oracle:?}"))?;
    let b_not_nd = codes.len();

    for pred in ["ND & !K", "S2 & !S3"] {
        let (size, codes) = minimal_search(pred, 6)?;
        ensure(size.is_none() && codes.is_empty(), || format!("{pred}: {size:?} {codes:?}"))?;
    }
    Ok(format!(
        "K&!GS = {{vee}} at 3; B&!ND at 4 = {b_not_nd} models incl. BH (matches oracle); ND&!K, S2&!S3 empty to 6"
    ))
}

fn enumeration_oracle() -> Outcome {
    let mut counts = Vec::new();
    for n in 1..=4 {
        let lib: BTreeSet<String> =
            atlas::enumerate_jsl(n).map_err(|e| e.to_string())?.iter().map(|j| j.poset().canonical_code()).collect();
        let naive: BTreeSet<String> =
            common::classes(common::labeled_jsls(n)).iter().map(|m| m.to_poset().canonical_code()).collect();
        ensure(lib == naive, || format!("size {n}: {lib:?} vs {naive:?}"))?;
        counts.push(lib.len());
    }
    ensure(counts == [1, 1, 2, 5], || format!("counts {counts:?}"))?;
    Ok(format!("classes {counts:?}"))
}

fn witness_replay(reports: &[ChainReport]) -> Outcome {
    let report = reports.first().ok_or("no atlas run available")?;
    let (mut w, mut wf, mut c, mut cf) = (0, 0, 0, 0);
    for s in &report.sizes {
        w += s.replay.witnesses;
        wf += s.replay.witness_failures;
        c += s.replay.certificates;
        cf += s.replay.certificate_failures;
    }
    ensure(w > 0 && c > 0, || "nothing was replayed".to_owned())?;
    ensure(wf == 0 && cf == 0, || format!("{wf}/{w} witnesses, {cf}/{c} certificates failed"))?;
    Ok(format!("{w}/{w} witnesses, {c}/{c} certificates"))
}

fn main() -> ExitCode {
    let mut reports = Vec::new();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "corpus regression", corpus_regression()),
        (2, "jsl1 arrow table", jsl1_arrow()),
        (3, "ideal characterizations", characterizations()),
        (4, "equivalence cluster", equivalence_cluster()),
        (5, "implication chain", implication_chain(&mut reports)),
        (6, "minimal countermodels", countermodels()),
        (7, "enumeration oracle", enumeration_oracle()),
        (8, "witness replay", witness_replay(&reports)),
    ];
    let mut failed = 0;
    for (n, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {n} ({name}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n} ({name}): {why}");
            }
        }
    }
    println!("{}/{} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
