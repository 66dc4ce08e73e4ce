use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use jsl_core::arrow::{arrow_table, closed_subalgebra_report, ArrowEntry};
use jsl_core::atlas::{Atlas, Predicate, SpectrumRecord};
use jsl_core::corpus::{builtin, resolve, run_corpus, run_parsed, ModelReport, RunReport};
use jsl_core::format::{parse_documents, ModelDocument};
use jsl_core::ideals::{all_ideals, id_fp, ideals_with_empty, IdealFamily};
use jsl_core::{ElemSet, JoinSemilattice, Poset};
use serde::Serialize;
use serde_json::{json, Value};

use crate::Format;

/// Documents from a file, or a single built-in model by name.
fn load(arg: &str) -> Result<Vec<ModelDocument>> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let docs = parse_documents(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(docs);
    }
    match builtin(arg) {
        Some(doc) => Ok(vec![doc]),
        None => bail!("no such file or built-in model `{arg}`"),
    }
}

/// `println!` that ends the process quietly when stdout is closed early.
macro_rules! out {
    ($($arg:tt)*) => {
        emit(format_args!($($arg)*))
    };
}

fn emit(args: std::fmt::Arguments) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_fmt(args).and_then(|()| stdout.write_all(b"\n")) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    out!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn labels(p: &Poset, s: ElemSet) -> Vec<String> {
    p.labels_of(s).into_iter().map(str::to_owned).collect()
}

fn covers(p: &Poset) -> Vec<[String; 2]> {
    p.covers()
        .into_iter()
        .map(|(a, b)| [p.name(a).to_owned(), p.name(b).to_owned()])
        .collect()
}

pub fn validate(arg: &str, format: Format) -> Result<bool> {
    let docs = load(arg)?;
    let mut ok = true;
    let mut out = Vec::new();
    for doc in &docs {
        let entry = match resolve(doc, &docs) {
            Err(e) => {
                ok = false;
                json!({ "name": doc.name, "poset": false, "join_semilattice": false, "error": e.to_string() })
            }
            Ok(r) => match JoinSemilattice::new(r.poset.clone()) {
                Err(e) => {
                    ok = false;
                    json!({
                        "name": doc.name, "size": r.poset.len(), "poset": true,
                        "join_semilattice": false, "covers": covers(&r.poset), "error": e.to_string(),
                    })
                }
                Ok(j) => json!({
                    "name": doc.name,
                    "size": j.len(),
                    "poset": true,
                    "join_semilattice": true,
                    "lattice": j.is_lattice(),
                    "downward_directed": j.is_downward_directed(),
                    "top": j.name(j.top()),
                    "bottom": j.bottom().map(|b| j.name(b).to_owned()),
                    "covers": covers(&j),
                }),
            },
        };
        out.push(entry);
    }
    match format {
        Format::Json => print_json(&out)?,
        Format::Table => {
            for e in &out {
                let status = if e["join_semilattice"] == true { "join-semilattice" } else { "INVALID" };
                print!("{:<16} {status}", e["name"].as_str().unwrap_or(""));
                if let Some(size) = e["size"].as_u64() {
                    print!("  size={size}");
                }
                if e["join_semilattice"] == true {
                    print!("  lattice={}  downward_directed={}", e["lattice"], e["downward_directed"]);
                }
                if let Some(err) = e["error"].as_str() {
                    print!("  {err}");
                }
                out!("");
            }
        }
    }
    Ok(ok)
}

fn print_model_table(m: &ModelReport) {
    out!("{} (size {})", m.name, m.size);
    if let Some(err) = &m.error {
        out!("  error: {err}");
    }
    if !m.flags.is_empty() {
        let flags: Vec<String> = m.flags.iter().map(|(k, v)| format!("{k}={v}")).collect();
        for line in flags.chunks(6) {
            out!("  {}", line.join("  "));
        }
    }
    for (flag, w) in &m.witnesses {
        out!("  witness {flag}: {w}");
    }
    for [a, b, first, second] in &m.arrow_undefined {
        out!("  arrow {a} -> {b} undefined: {first}, {second} maximal");
    }
    for e in &m.expectations {
        let verdict = if e.passed() { "ok" } else { "FAIL" };
        let actual = e.actual.map_or_else(|| "?".to_owned(), |v| v.to_string());
        print!("  expect {} {} -> {actual} {verdict}", e.flag, e.expected);
        if let Some(err) = &e.error {
            print!(" ({err})");
        }
        out!("");
    }
}

fn print_run(report: &RunReport, format: Format, whole: bool) -> Result<()> {
    match format {
        Format::Json if whole => print_json(report),
        Format::Json => print_json(&report.models),
        Format::Table => {
            for m in &report.models {
                print_model_table(m);
            }
            if whole {
                out!(
                    "{} model(s), {} failure(s), {} ms",
                    report.models.len(),
                    report.failures,
                    report.elapsed_ms
                );
            }
            Ok(())
        }
    }
}

pub fn classify(arg: &str, format: Format) -> Result<bool> {
    let docs = load(arg)?;
    let report = run_parsed(&docs);
    print_run(&report, format, false)?;
    Ok(report.passed())
}

pub fn corpus(dir: &Path, format: Format) -> Result<bool> {
    let report = run_corpus(dir).with_context(|| format!("running corpus {}", dir.display()))?;
    print_run(&report, format, true)?;
    Ok(report.passed())
}

fn family_json(f: &IdealFamily, j: &JoinSemilattice) -> Value {
    json!({
        "family": f.variant.to_string(),
        "members": f.members.iter().map(|&s| labels(j, s)).collect::<Vec<_>>(),
        "distributive_lattice": f.is_distributive_lattice(),
    })
}

pub fn ideals(arg: &str, format: Format) -> Result<bool> {
    let docs = load(arg)?;
    let mut ok = true;
    let mut out = Vec::new();
    for doc in &docs {
        let j = resolve(doc, &docs)?.model().with_context(|| format!("model {}", doc.name))?;
        let families = [all_ideals(&j)?, ideals_with_empty(&j)?, id_fp(&j)?];
        let chars = jsl_core::ideals::verify_characterizations(&j)?;
        ok &= chars.all_agree();
        out.push(json!({
            "name": doc.name,
            "families": families.iter().map(|f| family_json(f, &j)).collect::<Vec<_>>(),
            "characterizations": chars.pairs(),
        }));
    }
    match format {
        Format::Json => print_json(&out)?,
        Format::Table => {
            for m in &out {
                out!("{}", m["name"].as_str().unwrap_or(""));
                for f in m["families"].as_array().into_iter().flatten() {
                    let members: Vec<String> = f["members"]
                        .as_array()
                        .into_iter()
                        .flatten()
                        .map(|s| {
                            let ls: Vec<&str> = s.as_array().into_iter().flatten().filter_map(Value::as_str).collect();
                            if ls.is_empty() { "∅".to_owned() } else { format!("{{{}}}", ls.join(",")) }
                        })
                        .collect();
                    out!(
                        "  {:<9} distributive={:<5} {}",
                        f["family"].as_str().unwrap_or(""),
                        f["distributive_lattice"],
                        members.join(" ")
                    );
                }
                for p in m["characterizations"].as_array().into_iter().flatten() {
                    let agree = p["notion_holds"] == p["family_distributive"];
                    out!(
                        "  {} = {} vs {} distributive = {}  {}",
                        p["notion"].as_str().unwrap_or(""),
                        p["notion_holds"],
                        p["family"].as_str().unwrap_or(""),
                        p["family_distributive"],
                        if agree { "agree" } else { "DISAGREE" }
                    );
                }
            }
        }
    }
    Ok(ok)
}

pub fn arrow(arg: &str, format: Format) -> Result<bool> {
    let docs = load(arg)?;
    let mut out = Vec::new();
    for doc in &docs {
        let resolved = resolve(doc, &docs)?;
        let j = resolved.model().with_context(|| format!("model {}", doc.name))?;
        let table = arrow_table(&j);
        let name = |e| j.name(e).to_owned();
        let entries: Vec<Value> = table
            .iter()
            .map(|(a, b, e)| match e {
                ArrowEntry::Defined(r) => json!({ "a": name(a), "b": name(b), "value": name(r) }),
                ArrowEntry::Undefined { first, second } => json!({
                    "a": name(a), "b": name(b), "value": null, "certificate": [name(first), name(second)],
                }),
            })
            .collect();
        let mut entry = json!({
            "name": doc.name,
            "elements": j.names(),
            "total": table.is_total(),
            "table": entries,
        });
        if let Some((ambient, set)) = &resolved.ambient {
            let sub = match closed_subalgebra_report(ambient, *set) {
                Ok(r) => json!({
                    "join_closed": true,
                    "arrow_closed": r.arrow_closed,
                    "escaping": r.escaping.iter()
                        .map(|&(a, b, c)| [ambient.name(a), ambient.name(b), ambient.name(c)])
                        .collect::<Vec<_>>(),
                    "intrinsic_undefined": r.intrinsic_undefined().iter()
                        .map(|&(a, b)| [ambient.name(a), ambient.name(b)])
                        .collect::<Vec<_>>(),
                }),
                Err(e) => json!({ "error": e.to_string() }),
            };
            entry["subalgebra"] = sub;
        }
        out.push(entry);
    }
    match format {
        Format::Json => print_json(&out)?,
        Format::Table => {
            for m in &out {
                print_arrow_table(m);
            }
        }
    }
    Ok(true)
}

fn print_arrow_table(m: &Value) {
    let names: Vec<&str> = m["elements"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
    let width = names.iter().map(|n| n.len()).max().unwrap_or(1).max(1);
    out!("{} (arrow total: {})", m["name"].as_str().unwrap_or(""), m["total"]);
    print!("  {:>width$} |", "->");
    for n in &names {
        print!(" {n:>width$}");
    }
    out!("");
    let entries = m["table"].as_array().cloned().unwrap_or_default();
    for (row, a) in names.iter().enumerate() {
        print!("  {a:>width$} |");
        for col in 0..names.len() {
            let v = entries[row * names.len() + col]["value"].as_str().unwrap_or("-");
            print!(" {v:>width$}");
        }
        out!("");
    }
    for e in &entries {
        if let Some(c) = e["certificate"].as_array() {
            out!(
                "  {} -> {} undefined: {} and {} are incomparable maximal candidates",
                e["a"].as_str().unwrap_or(""),
                e["b"].as_str().unwrap_or(""),
                c[0].as_str().unwrap_or(""),
                c[1].as_str().unwrap_or("")
            );
        }
    }
    if let Some(sub) = m.get("subalgebra") {
        out!("  subalgebra: {sub}");
    }
}

pub fn atlas(max_n: usize, workers: usize, format: Format) -> Result<bool> {
    let start = Instant::now();
    let report = Atlas::with_workers(workers).verify_chain(max_n)?;
    eprintln!("verify_chain({max_n}) with {workers} worker(s): {} ms", start.elapsed().as_millis());
    match format {
        Format::Json => print_json(&report)?,
        Format::Table => {
            out!("size  models  violations  disagreements  witnesses  replay-fail  certificates  cert-fail");
            for s in &report.sizes {
                out!(
                    "{:>4}  {:>6}  {:>10}  {:>13}  {:>9}  {:>11}  {:>12}  {:>9}",
                    s.size,
                    s.models,
                    s.chain_violations,
                    s.total_disagreements(),
                    s.replay.witnesses,
                    s.replay.witness_failures,
                    s.replay.certificates,
                    s.replay.certificate_failures
                );
            }
            out!("{} model(s), {} finding(s)", report.total_models(), report.findings.len());
            for f in &report.findings {
                out!("  {}  {}", f.code, f.check);
            }
        }
    }
    Ok(report.is_clean())
}

fn record_json(r: &SpectrumRecord) -> Result<Value> {
    let j = r.model()?;
    Ok(json!({
        "code": r.code,
        "size": r.size,
        "covers": covers(&j),
        "flags": r.flags.iter().map(|(f, &v)| (f.to_string(), Value::Bool(v))).collect::<serde_json::Map<_, _>>(),
        "witnesses": r.labeled_witnesses(&j),
    }))
}

pub fn search(pred: &str, max_n: usize, workers: usize, format: Format) -> Result<bool> {
    let predicate: Predicate = pred.parse()?;
    let found = Atlas::with_workers(workers).find_minimal(&predicate, max_n)?;
    let models: Vec<Value> = found.models.iter().map(record_json).collect::<Result<_>>()?;
    match format {
        Format::Json => print_json(&json!({
            "predicate": found.predicate,
            "searched_up_to": found.searched_up_to,
            "size": found.size,
            "models": models,
        }))?,
        Format::Table => match found.size {
            None => out!("no model of size <= {max_n} satisfies {}", found.predicate),
            Some(size) => {
                out!("{} model(s) of size {size} satisfy {}", models.len(), found.predicate);
                for m in &models {
                    let cs: Vec<String> = m["covers"]
                        .as_array()
                        .into_iter()
                        .flatten()
                        .map(|c| format!("{}<{}", c[0].as_str().unwrap_or(""), c[1].as_str().unwrap_or("")))
                        .collect();
                    out!("  {}  covers: {}", m["code"].as_str().unwrap_or(""), cs.join(" "));
                }
            }
        },
    }
    Ok(true)
}
