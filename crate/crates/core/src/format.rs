//! Line-oriented model documents.
//!
//! ```text
//! # comment
//! model vee
//! elements a b 1
//! le a 1
//! le b 1
//! expect K true
//! expect GS false
//! ```
//!
//! `le a b` adds one relation pair; the order is its reflexive-transitive
//! closure. Instead of `elements`/`le` a document may name a generator:
//! `generator hk 3`, `generator grid 3`, `generator chain 4`, or
//! `generator sub <model> <label>...` for the restriction of another
//! document's order to a subset. A file may hold several documents.
//!
//! Besides flag names, `expect` accepts the keys `JOIN_CLOSED`,
//! `ARROW_CLOSED`, `ISO(<model>)`, `ARROW(a,b,r)` and `ARROW_DEFINED(a,b)`.

use std::fmt;
use std::str::FromStr;

use crate::atlas::Flag;
use crate::order::Poset;
use crate::set::MAX_ELEMENTS;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Finite truncation of the two-chain model with chains `x_1..x_n`, `y_1..y_n`.
    Hk(usize),
    /// `L × L` for the chain `L` with `k` elements, componentwise order.
    Grid(usize),
    Chain(usize),
    /// Restriction of another document's order to the listed labels.
    Sub { model: String, labels: Vec<String> },
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Hk(n) => write!(f, "hk {n}"),
            Generator::Grid(k) => write!(f, "grid {k}"),
            Generator::Chain(n) => write!(f, "chain {n}"),
            Generator::Sub { model, labels } => write!(f, "sub {model} {}", labels.join(" ")),
        }
    }
}

/// Pairs `(a, b)` meaning `a <= b`.
pub type Relations = Vec<(String, String)>;

impl Generator {
    /// Elements and relation pairs of a self-contained generator; `None` for `sub`.
    pub fn expand(&self) -> Option<(Vec<String>, Relations)> {
        let pair = |a: &str, b: &str| (a.to_owned(), b.to_owned());
        match *self {
            Generator::Hk(n) => {
                let x = |i: usize| format!("x{i}");
                let y = |i: usize| format!("y{i}");
                let mut elements: Vec<String> = (1..=n).map(x).chain((1..=n).map(y)).collect();
                elements.extend(["f", "d", "e", "c", "b", "a", "1"].map(String::from));
                let mut le = Vec::new();
                for i in 1..=n {
                    le.push((x(i), y(i)));
                    if i < n {
                        le.push((x(i), x(i + 1)));
                        le.push((y(i), y(i + 1)));
                    }
                }
                // The missing node below f, c and d is closed off by x_n.
                for top in ["f", "d", "c"] {
                    le.push((x(n), top.to_owned()));
                }
                le.push((y(n), "c".to_owned()));
                for (a, b) in [
                    ("c", "a"), ("c", "b"), ("d", "a"), ("d", "e"), ("f", "e"), ("f", "b"),
                    ("a", "1"), ("b", "1"), ("e", "1"),
                ] {
                    le.push(pair(a, b));
                }
                Some((elements, le))
            }
            Generator::Grid(k) => {
                let names = chain_labels(k);
                let mut elements = Vec::new();
                let mut le = Vec::new();
                for (i, a) in names.iter().enumerate() {
                    for (j, b) in names.iter().enumerate() {
                        let me = format!("{a}{b}");
                        if i + 1 < k {
                            le.push((me.clone(), format!("{}{b}", names[i + 1])));
                        }
                        if j + 1 < k {
                            le.push((me.clone(), format!("{a}{}", names[j + 1])));
                        }
                        elements.push(me);
                    }
                }
                Some((elements, le))
            }
            Generator::Chain(n) => {
                let elements: Vec<String> = (0..n).map(|i| i.to_string()).collect();
                let le = elements.windows(2).map(|w| pair(&w[0], &w[1])).collect();
                Some((elements, le))
            }
            Generator::Sub { .. } => None,
        }
    }
}

/// Labels of a `k`-element chain: `0 h 1` for three, `0..k-1` otherwise.
fn chain_labels(k: usize) -> Vec<String> {
    match k {
        2 => vec!["0".into(), "1".into()],
        3 => vec!["0".into(), "h".into(), "1".into()],
        _ => (0..k).map(|i| i.to_string()).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpectKey {
    Flag(Flag),
    /// The document's elements are join-closed in the `sub` ambient.
    JoinClosed,
    /// The ambient arrow maps pairs of the subset back into it.
    ArrowClosed,
    /// Isomorphic to the named document or built-in model.
    Iso(String),
    /// `a → b = r`; for `sub` documents the intrinsic arrow.
    Arrow(String, String, String),
    ArrowDefined(String, String),
}

impl fmt::Display for ExpectKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectKey::Flag(flag) => write!(f, "{flag}"),
            ExpectKey::JoinClosed => f.write_str("JOIN_CLOSED"),
            ExpectKey::ArrowClosed => f.write_str("ARROW_CLOSED"),
            ExpectKey::Iso(m) => write!(f, "ISO({m})"),
            ExpectKey::Arrow(a, b, r) => write!(f, "ARROW({a},{b},{r})"),
            ExpectKey::ArrowDefined(a, b) => write!(f, "ARROW_DEFINED({a},{b})"),
        }
    }
}

impl FromStr for ExpectKey {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let upper = s.to_ascii_uppercase();
        match upper.as_str() {
            "JOIN_CLOSED" => return Ok(ExpectKey::JoinClosed),
            "ARROW_CLOSED" => return Ok(ExpectKey::ArrowClosed),
            _ => {}
        }
        let call = s.split_once('(').and_then(|(head, rest)| {
            let args = rest.strip_suffix(')')?;
            Some((head.to_ascii_uppercase(), args.split(',').map(|a| a.trim().to_owned()).collect::<Vec<_>>()))
        });
        if let Some((head, args)) = call {
            let valid = args.iter().all(|a| !a.is_empty());
            match (head.as_str(), args.as_slice()) {
                ("ISO", [m]) if valid => return Ok(ExpectKey::Iso(m.clone())),
                ("ARROW", [a, b, r]) if valid => return Ok(ExpectKey::Arrow(a.clone(), b.clone(), r.clone())),
                ("ARROW_DEFINED", [a, b]) if valid => return Ok(ExpectKey::ArrowDefined(a.clone(), b.clone())),
                _ => {}
            }
        }
        s.parse::<Flag>()
            .map(ExpectKey::Flag)
            .map_err(|_| format!("unknown expectation key `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub key: ExpectKey,
    pub value: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelDocument {
    pub name: String,
    pub elements: Vec<String>,
    pub relations: Vec<(String, String)>,
    pub expect: Vec<Expectation>,
    pub generator: Option<Generator>,
}

impl ModelDocument {
    /// The order, for documents that do not depend on another document.
    /// A `sub` document fails with the name of the model it needs.
    pub fn poset(&self) -> Result<Poset> {
        match &self.generator {
            None => build(&self.elements, &self.relations),
            Some(Generator::Sub { model, .. }) => Err(Error::UnknownLabel(model.clone())),
            Some(g) => {
                let (elements, le) = g.expand().expect("self-contained generator");
                build(&elements, &le)
            }
        }
    }
}

fn build(elements: &[String], le: &[(String, String)]) -> Result<Poset> {
    Poset::from_hasse_with_cap(elements, le, MAX_ELEMENTS)
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Whitespace-separated words with 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

/// Parses a file with one or more documents.
pub fn parse_documents(text: &str) -> Result<Vec<ModelDocument>> {
    let mut docs: Vec<(usize, ModelDocument)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let ws = words(line);
        let Some(&(col, keyword)) = ws.first() else { continue };
        let args = &ws[1..];
        if keyword == "model" {
            let [(_, name)] = args else {
                return Err(parse_error(line_no, col, "`model` takes exactly one name"));
            };
            docs.push((
                line_no,
                ModelDocument {
                    name: (*name).to_owned(),
                    elements: Vec::new(),
                    relations: Vec::new(),
                    expect: Vec::new(),
                    generator: None,
                },
            ));
            continue;
        }
        let Some((_, doc)) = docs.last_mut() else {
            return Err(parse_error(line_no, col, "expected `model <name>` first"));
        };
        match keyword {
            "elements" => {
                if args.is_empty() {
                    return Err(parse_error(line_no, col, "empty elements list"));
                }
                if !doc.elements.is_empty() {
                    return Err(parse_error(line_no, col, "duplicate `elements` line"));
                }
                for &(c, label) in args {
                    if doc.elements.iter().any(|e| e == label) {
                        return Err(parse_error(line_no, c, format!("duplicate label `{label}`")));
                    }
                    doc.elements.push(label.to_owned());
                }
            }
            "le" => {
                let [(ca, a), (cb, b)] = args else {
                    return Err(parse_error(line_no, col, "`le` takes two labels"));
                };
                for (c, l) in [(ca, a), (cb, b)] {
                    if !doc.elements.iter().any(|e| e == l) {
                        return Err(parse_error(line_no, *c, format!("unknown label `{l}`")));
                    }
                }
                doc.relations.push(((*a).to_owned(), (*b).to_owned()));
            }
            "expect" => {
                let [(ck, key), (cv, value)] = args else {
                    return Err(parse_error(line_no, col, "`expect` takes a key and true|false"));
                };
                let key: ExpectKey = key.parse().map_err(|m| parse_error(line_no, *ck, m))?;
                let value = match *value {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(parse_error(line_no, *cv, format!("expected true or false, got `{other}`")))
                    }
                };
                doc.expect.push(Expectation { key, value });
            }
            "generator" => {
                if doc.generator.is_some() {
                    return Err(parse_error(line_no, col, "duplicate `generator` line"));
                }
                doc.generator = Some(parse_generator(line_no, col, args)?);
            }
            other => return Err(parse_error(line_no, col, format!("unknown keyword `{other}`"))),
        }
    }
    for (line_no, doc) in &docs {
        match (&doc.generator, doc.elements.is_empty()) {
            (None, true) => return Err(parse_error(*line_no, 1, format!("model `{}` has no elements", doc.name))),
            (Some(_), false) => {
                return Err(parse_error(*line_no, 1, format!("model `{}` has both elements and a generator", doc.name)))
            }
            (None, false) => {
                doc.poset()?;
            }
            (Some(_), true) => {}
        }
    }
    Ok(docs.into_iter().map(|(_, d)| d).collect())
}

fn parse_generator(line: usize, col: usize, args: &[(usize, &str)]) -> Result<Generator> {
    let Some(&(_, family)) = args.first() else {
        return Err(parse_error(line, col, "`generator` needs a family"));
    };
    let number = || -> Result<usize> {
        match args {
            [_, (c, n)] => n
                .parse()
                .map_err(|_| parse_error(line, *c, format!("expected a number, got `{n}`"))),
            _ => Err(parse_error(line, col, format!("`{family}` takes one number"))),
        }
    };
    let at_least = |n: usize, min: usize| {
        if n < min {
            Err(parse_error(line, col, format!("`{family}` needs at least {min}")))
        } else {
            Ok(n)
        }
    };
    match family {
        "hk" => Ok(Generator::Hk(at_least(number()?, 1)?)),
        "grid" => Ok(Generator::Grid(at_least(number()?, 1)?)),
        "chain" => Ok(Generator::Chain(at_least(number()?, 1)?)),
        "sub" => match args {
            [_, (_, model), rest @ ..] if !rest.is_empty() => Ok(Generator::Sub {
                model: (*model).to_owned(),
                labels: rest.iter().map(|(_, l)| (*l).to_owned()).collect(),
            }),
            _ => Err(parse_error(line, col, "`sub` takes a model name and labels")),
        },
        other => Err(parse_error(line, col, format!("unknown generator `{other}`"))),
    }
}

/// Parses a text holding exactly one document.
pub fn parse_model(text: &str) -> Result<ModelDocument> {
    let mut docs = parse_documents(text)?;
    match docs.len() {
        1 => Ok(docs.remove(0)),
        0 => Err(parse_error(1, 1, "no model")),
        _ => Err(parse_error(1, 1, "more than one model")),
    }
}

pub fn serialize(doc: &ModelDocument) -> String {
    let mut out = format!("model {}\n", doc.name);
    if let Some(g) = &doc.generator {
        out.push_str(&format!("generator {g}\n"));
    } else {
        out.push_str(&format!("elements {}\n", doc.elements.join(" ")));
        for (a, b) in &doc.relations {
            out.push_str(&format!("le {a} {b}\n"));
        }
    }
    for e in &doc.expect {
        out.push_str(&format!("expect {} {}\n", e.key, e.value));
    }
    out
}

pub fn serialize_documents(docs: &[ModelDocument]) -> String {
    docs.iter().map(serialize).collect::<Vec<_>>().join("\n")
}
