//! Built-in models, corpus runs and expectation checking.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::arrow::{arrow, arrow_table, closed_subalgebra_report};
use crate::atlas::{classify, SpectrumRecord};
use crate::distributivity::LabeledWitness;
use crate::format::{parse_documents, ExpectKey, Expectation, Generator, ModelDocument};
use crate::order::{JoinSemilattice, Poset};
use crate::set::{ElemSet, ElementId};
use crate::{Error, Result};

const BUILTINS: &str = "\
model vee
elements a b 1
le a 1
le b 1

model jsl1
elements a b 1
le a 1
le b 1

model chain3
generator chain 3

model m3
elements 0 a b c 1
le 0 a
le 0 b
le 0 c
le a 1
le b 1
le c 1

model n5
elements 0 a b c 1
le 0 a
le a b
le b 1
le 0 c
le c 1

model bh
elements a b c 1
le a 1
le b 1
le c 1

model fdjns
elements 0 p q r a b c 1
le 0 p
le 0 q
le 0 r
le p a
le q a
le p b
le r b
le q c
le r c
le a 1
le b 1
le c 1

model fdjns_black
generator sub fdjns 0 a b c 1

model grid3x3
generator grid 3

model b9sub
generator sub grid3x3 00 01 10 hh h1 1h 11
";

/// Names of the built-in models, in definition order. `hk<n>` is also
/// accepted by [`builtin`] for any `n >= 1`.
pub fn builtin_names() -> Vec<String> {
    builtin_documents().into_iter().map(|d| d.name).collect()
}

fn builtin_documents() -> Vec<ModelDocument> {
    parse_documents(BUILTINS).expect("built-in documents parse")
}

/// A built-in document by name, without expectations.
pub fn builtin(name: &str) -> Option<ModelDocument> {
    if let Some(n) = name.strip_prefix("hk").and_then(|n| n.parse::<usize>().ok()) {
        return (n >= 1).then(|| ModelDocument {
            name: name.to_owned(),
            elements: Vec::new(),
            relations: Vec::new(),
            expect: Vec::new(),
            generator: Some(Generator::Hk(n)),
        });
    }
    builtin_documents().into_iter().find(|d| d.name == name)
}

/// The join-semilattice of a built-in model.
pub fn builtin_model(name: &str) -> Result<JoinSemilattice> {
    let doc = builtin(name).ok_or_else(|| Error::UnknownLabel(name.to_owned()))?;
    resolve(&doc, &[])?.model()
}

/// A document with its order; `sub` documents also carry the ambient model
/// and the subset's ambient ids.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub poset: Poset,
    pub ambient: Option<(JoinSemilattice, ElemSet)>,
}

impl Resolved {
    pub fn model(&self) -> Result<JoinSemilattice> {
        JoinSemilattice::new(self.poset.clone())
    }
}

/// Resolves `doc`, looking up `sub` ambients among `docs` first and then the
/// built-in models.
pub fn resolve(doc: &ModelDocument, docs: &[ModelDocument]) -> Result<Resolved> {
    resolve_depth(doc, docs, 0)
}

fn resolve_depth(doc: &ModelDocument, docs: &[ModelDocument], depth: usize) -> Result<Resolved> {
    let Some(Generator::Sub { model, labels }) = &doc.generator else {
        return Ok(Resolved { poset: doc.poset()?, ambient: None });
    };
    if depth > docs.len() + 1 {
        return Err(Error::Predicate(format!("`sub` references of `{}` form a loop", doc.name)));
    }
    let ambient_doc = find_document(model, docs).ok_or_else(|| Error::UnknownLabel(model.clone()))?;
    let ambient = resolve_depth(&ambient_doc, docs, depth + 1)?.model()?;
    let set = ambient.set_of(labels)?;
    let poset = ambient.induced(set);
    Ok(Resolved { poset, ambient: Some((ambient, set)) })
}

fn find_document(name: &str, docs: &[ModelDocument]) -> Option<ModelDocument> {
    docs.iter().find(|d| d.name == name).cloned().or_else(|| builtin(name))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectationResult {
    pub flag: String,
    pub expected: bool,
    pub actual: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ExpectationResult {
    pub fn passed(&self) -> bool {
        self.actual == Some(self.expected)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<PathBuf>,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    pub flags: BTreeMap<String, bool>,
    pub witnesses: BTreeMap<String, LabeledWitness>,
    /// Undefined arrow entries as `(a, b, first, second)` labels.
    pub arrow_undefined: Vec<[String; 4]>,
    pub expectations: Vec<ExpectationResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub record: Option<SpectrumRecord>,
}

impl ModelReport {
    pub fn failures(&self) -> usize {
        self.expectations.iter().filter(|e| !e.passed()).count() + usize::from(self.error.is_some())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub models: Vec<ModelReport>,
    pub failures: usize,
    pub elapsed_ms: u128,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Classifies one document and checks its expectations.
pub fn evaluate(doc: &ModelDocument, docs: &[ModelDocument]) -> ModelReport {
    let mut report = ModelReport {
        name: doc.name.clone(),
        source: None,
        size: 0,
        code: None,
        flags: BTreeMap::new(),
        witnesses: BTreeMap::new(),
        arrow_undefined: Vec::new(),
        expectations: Vec::new(),
        error: None,
        record: None,
    };
    let resolved = match resolve(doc, docs) {
        Ok(r) => r,
        Err(e) => {
            report.error = Some(e.to_string());
            report.expectations = doc.expect.iter().map(|x| unchecked(x, &e)).collect();
            return report;
        }
    };
    report.size = resolved.poset.len();
    report.code = Some(resolved.poset.canonical_code());
    let model = resolved.model();
    match &model {
        Ok(j) => match classify(j) {
            Ok(record) => {
                report.flags = record.flags.iter().map(|(f, &v)| (f.to_string(), v)).collect();
                report.witnesses = record.labeled_witnesses(j);
                report.arrow_undefined = record
                    .arrow_certificates
                    .iter()
                    .map(|c| [c.a, c.b, c.first, c.second].map(|e| j.name(e).to_owned()))
                    .collect();
                report.record = Some(record);
            }
            Err(e) => report.error = Some(e.to_string()),
        },
        Err(e) => report.error = Some(e.to_string()),
    }
    report.expectations = doc
        .expect
        .iter()
        .map(|x| match check_expectation(x, &resolved, model.as_ref().ok(), report.record.as_ref(), docs) {
            Ok(actual) => ExpectationResult {
                flag: x.key.to_string(),
                expected: x.value,
                actual: Some(actual),
                error: None,
            },
            Err(e) => unchecked(x, &e),
        })
        .collect();
    report
}

fn unchecked(x: &Expectation, e: &Error) -> ExpectationResult {
    ExpectationResult {
        flag: x.key.to_string(),
        expected: x.value,
        actual: None,
        error: Some(e.to_string()),
    }
}

fn check_expectation(
    x: &Expectation,
    resolved: &Resolved,
    model: Option<&JoinSemilattice>,
    record: Option<&SpectrumRecord>,
    docs: &[ModelDocument],
) -> Result<bool> {
    let need_model = || model.ok_or_else(|| Error::Predicate("model is not a join-semilattice".into()));
    let id = |j: &JoinSemilattice, l: &str| j.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_owned()));
    let need_ambient = || {
        resolved
            .ambient
            .as_ref()
            .ok_or_else(|| Error::Predicate(format!("{} needs a `sub` document", x.key)))
    };
    match &x.key {
        ExpectKey::Flag(flag) => {
            let record = record.ok_or_else(|| Error::Predicate("model was not classified".into()))?;
            record
                .flag(*flag)
                .ok_or_else(|| Error::Predicate(format!("flag {flag} is not recorded")))
        }
        ExpectKey::Iso(name) => {
            let other = find_document(name, docs).ok_or_else(|| Error::UnknownLabel(name.clone()))?;
            Ok(resolve(&other, docs)?.poset.isomorphic(&resolved.poset))
        }
        ExpectKey::Arrow(a, b, r) => {
            let j = need_model()?;
            Ok(arrow(j, id(j, a)?, id(j, b)?) == Some(id(j, r)?))
        }
        ExpectKey::ArrowDefined(a, b) => {
            let j = need_model()?;
            Ok(arrow(j, id(j, a)?, id(j, b)?).is_some())
        }
        ExpectKey::JoinClosed => {
            let (ambient, set) = need_ambient()?;
            match ambient.sub_join_semilattice(*set) {
                Ok(_) => Ok(true),
                Err(Error::NotJoinClosed { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        }
        ExpectKey::ArrowClosed => {
            let (ambient, set) = need_ambient()?;
            match closed_subalgebra_report(ambient, *set) {
                Ok(r) => Ok(r.arrow_closed),
                Err(Error::NotJoinClosed { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        }
    }
}

/// Parses every `*.jsl` file in `dir` (sorted by name), then evaluates each
/// document. Parse errors abort the run.
pub fn run_corpus(dir: &Path) -> Result<RunReport> {
    let start = Instant::now();
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "jsl"));
    files.sort();
    let mut docs = Vec::new();
    for path in &files {
        let text = std::fs::read_to_string(path)?;
        let parsed = parse_documents(&text).map_err(|e| match e {
            Error::Parse { line, column, message } => Error::Parse {
                line,
                column,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        })?;
        docs.extend(parsed.into_iter().map(|d| (path.clone(), d)));
    }
    let all: Vec<ModelDocument> = docs.iter().map(|(_, d)| d.clone()).collect();
    Ok(run_documents(&all, |i| Some(docs[i].0.clone()), start))
}

/// Evaluates documents that are already parsed.
pub fn run_parsed(docs: &[ModelDocument]) -> RunReport {
    run_documents(docs, |_| None, Instant::now())
}

fn run_documents(docs: &[ModelDocument], source: impl Fn(usize) -> Option<PathBuf>, start: Instant) -> RunReport {
    let models: Vec<ModelReport> = docs
        .iter()
        .enumerate()
        .map(|(i, d)| ModelReport { source: source(i), ..evaluate(d, docs) })
        .collect();
    let failures = models.iter().map(ModelReport::failures).sum();
    RunReport { models, failures, elapsed_ms: start.elapsed().as_millis() }
}

/// Arrow table of the infinite two-chain model as stated for the infinite model, row `a`,
/// column `b` holding `a → b`. `xn`/`yn` stand for the chain elements beyond
/// `x2`/`y2`.
pub const HK_REFERENCE_LABELS: [&str; 13] = ["x1", "x2", "xn", "y1", "y2", "yn", "f", "d", "e", "c", "b", "a", "1"];

pub const HK_REFERENCE_ARROW: [[&str; 13]; 13] = [
    ["1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1"],
    ["y1", "1", "1", "y1", "1", "1", "1", "1", "1", "1", "1", "1", "1"],
    ["y1", "y2", "1", "y1", "y2", "1", "1", "1", "1", "1", "1", "1", "1"],
    ["e", "e", "e", "1", "1", "1", "e", "e", "e", "1", "1", "1", "1"],
    ["e", "e", "e", "y1", "1", "1", "e", "e", "e", "1", "1", "1", "1"],
    ["x1", "x2", "e", "y1", "y2", "1", "1", "1", "1", "1", "1", "1", "1"],
    ["y1", "y2", "yn", "y1", "y2", "yn", "1", "a", "1", "c", "1", "a", "1"],
    ["y1", "y2", "yn", "y1", "y2", "yn", "b", "1", "1", "b", "b", "1", "1"],
    ["y1", "y2", "yn", "y1", "y2", "yn", "b", "a", "1", "c", "b", "a", "1"],
    ["x1", "x2", "xn", "y1", "y2", "yn", "e", "e", "e", "1", "1", "1", "1"],
    ["x1", "x2", "xn", "y1", "y2", "yn", "e", "d", "e", "a", "1", "a", "1"],
    ["x1", "x2", "xn", "y1", "y2", "yn", "f", "e", "e", "b", "b", "1", "1"],
    ["x1", "x2", "xn", "y1", "y2", "yn", "f", "d", "e", "c", "b", "a", "1"],
];

/// One entry of the reference table against the truncations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HkArrowEntry {
    pub a: &'static str,
    pub b: &'static str,
    pub reference: &'static str,
    /// Symbolic value per depth; `None` where the arrow is undefined.
    pub computed: Vec<Option<String>>,
    pub stable: bool,
}

impl HkArrowEntry {
    pub fn matches(&self) -> bool {
        self.stable && self.computed[0].as_deref() == Some(self.reference)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HkArrowComparison {
    pub depths: Vec<usize>,
    pub entries: Vec<HkArrowEntry>,
}

impl HkArrowComparison {
    pub fn stable(&self) -> impl Iterator<Item = &HkArrowEntry> {
        self.entries.iter().filter(|e| e.stable)
    }

    /// Stable entries whose value differs from the reference value.
    pub fn divergent(&self) -> impl Iterator<Item = &HkArrowEntry> {
        self.stable().filter(|e| !e.matches())
    }
}

/// Compares the reference table with the arrow of `hk(n)` for each depth
/// (all at least 3, so that `x1`, `x2` and `xn` are distinct).
pub fn hk_arrow_comparison(depths: &[usize]) -> Result<HkArrowComparison> {
    if depths.is_empty() || depths.iter().any(|&n| n < 3) {
        return Err(Error::ArityOutOfRange { n: depths.iter().copied().min().unwrap_or(0), min: 3, max: usize::MAX });
    }
    let models: Vec<JoinSemilattice> = depths
        .iter()
        .map(|&n| builtin_model(&format!("hk{n}")))
        .collect::<Result<_>>()?;
    let tables: Vec<_> = models.iter().map(arrow_table).collect();
    let mut entries = Vec::new();
    for (ri, a) in HK_REFERENCE_LABELS.iter().enumerate() {
        for (ci, b) in HK_REFERENCE_LABELS.iter().enumerate() {
            let computed: Vec<Option<String>> = depths
                .iter()
                .zip(models.iter().zip(&tables))
                .map(|(&n, (j, t))| {
                    let ea = concrete(j, a, n);
                    let eb = concrete(j, b, n);
                    t.get(ea, eb).value().map(|r| symbolic(j.name(r), n))
                })
                .collect();
            let stable = computed.windows(2).all(|w| w[0] == w[1]);
            entries.push(HkArrowEntry { a, b, reference: HK_REFERENCE_ARROW[ri][ci], computed, stable });
        }
    }
    Ok(HkArrowComparison { depths: depths.to_vec(), entries })
}

fn concrete(j: &JoinSemilattice, symbol: &str, n: usize) -> ElementId {
    let label = match symbol {
        "xn" => format!("x{n}"),
        "yn" => format!("y{n}"),
        s => s.to_owned(),
    };
    j.index_of(&label).expect("reference label exists in every truncation")
}

fn symbolic(label: &str, n: usize) -> String {
    for stem in ["x", "y"] {
        if let Some(i) = label.strip_prefix(stem).and_then(|i| i.parse::<usize>().ok()) {
            return match i {
                1 | 2 => label.to_owned(),
                i if i == n => format!("{stem}n"),
                _ => format!("{stem}_mid"),
            };
        }
    }
    label.to_owned()
}
