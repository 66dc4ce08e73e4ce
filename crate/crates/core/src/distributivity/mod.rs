//! Exhaustive checkers for the distributivity notions of join-semilattices.
//!
//! Every checker evaluates its quantifiers directly over the finite model.
//! Variables are scanned in the order in which the notion quantifies them,
//! elements by index and argument sets by bitmask value, so the reported
//! witness is the lexicographically first violating assignment.
//!
//! Argument tuples `a_1, ..., a_n` are scanned as nonempty sets of at most
//! `n` elements: repetition and reordering do not change joins, meets or
//! unions of bound sets.

mod replay;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::order::{JoinSemilattice, Poset};
use crate::set::{ElemSet, ElementId};
use crate::{Error, Result};

pub use replay::{witness_violates, witness_violates_poset};

/// A distributivity notion, possibly with an arity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Notion {
    /// Lattice distributivity `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`.
    DLattice,
    Gs,
    /// GS with `a' ∨ b' <= x` in place of equality; equivalent to downward directedness.
    GsWeak,
    K,
    /// The binary bound-set condition; the same notion as H and LR.
    Nd,
    /// n-ary form of ND with a free upper element `c`.
    DveeN(usize),
    /// Set-theoretic n-ary rendering of H.
    CN(usize),
    Lr,
    /// LR for bare posets.
    LrPoset,
    B,
    S(usize),
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Notion::DLattice => f.write_str("D_LATTICE"),
            Notion::Gs => f.write_str("GS"),
            Notion::GsWeak => f.write_str("GS_WEAK"),
            Notion::K => f.write_str("K"),
            Notion::Nd => f.write_str("ND"),
            Notion::DveeN(n) => write!(f, "DVEE{n}"),
            Notion::CN(n) => write!(f, "C{n}"),
            Notion::Lr => f.write_str("LR"),
            Notion::LrPoset => f.write_str("LR_POSET"),
            Notion::B => f.write_str("B"),
            Notion::S(n) => write!(f, "S{n}"),
        }
    }
}

impl FromStr for Notion {
    type Err = Error;

    /// Accepts the display names, `S(2)`-style arities and the alias `H` for ND.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Predicate(format!("unknown notion `{s}`"));
        let upper = s.to_ascii_uppercase();
        let simple = match upper.as_str() {
            "D_LATTICE" | "D" => Some(Notion::DLattice),
            "GS" => Some(Notion::Gs),
            "GS_WEAK" => Some(Notion::GsWeak),
            "K" => Some(Notion::K),
            "ND" | "H" => Some(Notion::Nd),
            "LR" => Some(Notion::Lr),
            "LR_POSET" | "LRP" => Some(Notion::LrPoset),
            "B" => Some(Notion::B),
            _ => None,
        };
        if let Some(n) = simple {
            return Ok(n);
        }
        let (stem, arity) = split_arity(&upper).ok_or_else(bad)?;
        match stem {
            "DVEE" if arity >= 1 => Ok(Notion::DveeN(arity)),
            "C" if arity >= 1 => Ok(Notion::CN(arity)),
            "S" if arity >= 2 => Ok(Notion::S(arity)),
            _ => Err(bad()),
        }
    }
}

/// `S3` or `S(3)` into `("S", 3)`.
fn split_arity(s: &str) -> Option<(&str, usize)> {
    let s = s.strip_suffix(')').map_or(s, |rest| rest);
    let split = s.find(|c: char| c.is_ascii_digit())?;
    let (stem, digits) = s.split_at(split);
    let stem = stem.strip_suffix('(').unwrap_or(stem);
    Some((stem, digits.parse().ok()?))
}

/// Failure witness: the violating assignment of the notion's variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Witness {
    /// `(a, b, x)` for GS, GS_WEAK and K.
    Decomposition { a: ElementId, b: ElementId, x: ElementId },
    /// `(h, a, b, c)` for ND.
    Context { h: ElementId, a: ElementId, b: ElementId, c: ElementId },
    /// `(a, b, c)` for LR, LR_POSET and D_LATTICE.
    Triple { a: ElementId, b: ElementId, c: ElementId },
    /// `(x, A, c)` for DVEE_n, `(x, A)` for C_n.
    Join { x: ElementId, args: ElemSetWire, c: Option<ElementId> },
    /// `(A, x)` for B and S_n.
    Meet { args: ElemSetWire, x: ElementId },
}

/// Serialisable view of an argument set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElemSetWire(pub ElemSet);

impl Serialize for ElemSetWire {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

impl Witness {
    /// Variable assignment with element labels, in quantifier order.
    pub fn labeled(&self, p: &Poset) -> LabeledWitness {
        let one = |e: ElementId| vec![p.name(e).to_owned()];
        let many = |s: ElemSet| p.labels_of(s).into_iter().map(str::to_owned).collect();
        let vars = match *self {
            Witness::Decomposition { a, b, x } => vec![("a", one(a)), ("b", one(b)), ("x", one(x))],
            Witness::Context { h, a, b, c } => {
                vec![("h", one(h)), ("a", one(a)), ("b", one(b)), ("c", one(c))]
            }
            Witness::Triple { a, b, c } => vec![("a", one(a)), ("b", one(b)), ("c", one(c))],
            Witness::Join { x, args, c } => {
                let mut v = vec![("x", one(x)), ("args", many(args.0))];
                if let Some(c) = c {
                    v.push(("c", one(c)));
                }
                v
            }
            Witness::Meet { args, x } => vec![("args", many(args.0)), ("x", one(x))],
        };
        LabeledWitness(vars)
    }
}

/// A witness with labels; `args` holds a set, every other variable one label.
/// Serialises as a map in quantifier order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledWitness(pub Vec<(&'static str, Vec<String>)>);

impl Serialize for LabeledWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (var, labels) in &self.0 {
            if *var == "args" {
                map.serialize_entry(var, labels)?;
            } else {
                map.serialize_entry(var, &labels[0])?;
            }
        }
        map.end()
    }
}

impl fmt::Display for LabeledWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (var, labels)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *var == "args" {
                write!(f, "{var}={{{}}}", labels.join(","))?;
            } else {
                write!(f, "{var}={}", labels[0])?;
            }
        }
        Ok(())
    }
}

/// Verdict of one checker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    #[serde(serialize_with = "serialize_display")]
    pub notion: Notion,
    pub holds: bool,
    pub witness: Option<Witness>,
}

fn serialize_display<T: fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl CheckReport {
    fn from_witness(notion: Notion, witness: Option<Witness>) -> Self {
        CheckReport {
            notion,
            holds: witness.is_none(),
            witness,
        }
    }
}

/// Runs the checker for `notion`. Arity errors surface for out-of-range `n`.
pub fn check(j: &JoinSemilattice, notion: Notion) -> Result<CheckReport> {
    match notion {
        Notion::DLattice => check_distributive_lattice(j),
        Notion::Gs => Ok(check_gs(j)),
        Notion::GsWeak => Ok(check_gs_weak(j)),
        Notion::K => Ok(check_k(j)),
        Notion::Nd => Ok(check_nd(j)),
        Notion::DveeN(n) => check_dvee_n(j, n),
        Notion::CN(n) => check_c_n(j, n),
        Notion::Lr => Ok(check_lr(j)),
        Notion::LrPoset => Ok(check_lr_poset(j.poset())),
        Notion::B => Ok(check_b(j)),
        Notion::S(n) => check_sn(j, n),
    }
}

/// `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)` for all `a, b, c`. Requires a lattice.
pub fn check_distributive_lattice(j: &JoinSemilattice) -> Result<CheckReport> {
    if let Some((a, b)) = j.meetless_pair() {
        return Err(Error::NotALattice {
            a: j.name(a).to_owned(),
            b: j.name(b).to_owned(),
        });
    }
    let meet = |x, y| j.meet(x, y).expect("lattice");
    let witness = triples(j).find(|&(a, b, c)| {
        meet(a, j.join(b, c)) != j.join(meet(a, b), meet(a, c))
    });
    Ok(CheckReport::from_witness(
        Notion::DLattice,
        witness.map(|(a, b, c)| Witness::Triple { a, b, c }),
    ))
}

/// GS: if `x <= a ∨ b` then `x = a' ∨ b'` for some `a' <= a`, `b' <= b`.
pub fn check_gs(j: &JoinSemilattice) -> CheckReport {
    let witness = triples(j).find(|&(a, b, x)| {
        j.le(x, j.join(a, b)) && !decomposes(j, a, b, |y| y == x)
    });
    CheckReport::from_witness(Notion::Gs, witness.map(|(a, b, x)| Witness::Decomposition { a, b, x }))
}

/// GS with the conclusion weakened to `a' ∨ b' <= x`.
pub fn check_gs_weak(j: &JoinSemilattice) -> CheckReport {
    let witness = triples(j).find(|&(a, b, x)| {
        j.le(x, j.join(a, b)) && !decomposes(j, a, b, |y| j.le(y, x))
    });
    CheckReport::from_witness(
        Notion::GsWeak,
        witness.map(|(a, b, x)| Witness::Decomposition { a, b, x }),
    )
}

/// K: the GS decomposition is demanded only when `x` is below neither `a` nor `b`.
pub fn check_k(j: &JoinSemilattice) -> CheckReport {
    let witness = triples(j).find(|&(a, b, x)| {
        j.le(x, j.join(a, b)) && !j.le(x, a) && !j.le(x, b) && !decomposes(j, a, b, |y| y == x)
    });
    CheckReport::from_witness(Notion::K, witness.map(|(a, b, x)| Witness::Decomposition { a, b, x }))
}

fn decomposes(j: &JoinSemilattice, a: ElementId, b: ElementId, accept: impl Fn(ElementId) -> bool) -> bool {
    j.down(a)
        .iter()
        .any(|a1| j.down(b).iter().any(|b1| accept(j.join(a1, b1))))
}

/// ND: `{h,a}^l ∪ {h,b}^l ⊆ {c}^l` implies `{h, a ∨ b}^l ⊆ {c}^l`.
pub fn check_nd(j: &JoinSemilattice) -> CheckReport {
    let lb = |x: ElementId, y: ElementId| j.down(x) & j.down(y);
    let mut witness = None;
    'scan: for h in j.elements() {
        for a in j.elements() {
            for b in j.elements() {
                let premise = lb(h, a) | lb(h, b);
                let conclusion = lb(h, j.join(a, b));
                for c in j.elements() {
                    if premise.is_subset(j.down(c)) && !conclusion.is_subset(j.down(c)) {
                        witness = Some(Witness::Context { h, a, b, c });
                        break 'scan;
                    }
                }
            }
        }
    }
    CheckReport::from_witness(Notion::Nd, witness)
}

fn check_arity(n: usize, min: usize, max: usize) -> Result<()> {
    if n < min || n > max {
        Err(Error::ArityOutOfRange { n, min, max })
    } else {
        Ok(())
    }
}

/// Nonempty sets of at most `n` elements, by increasing bitmask.
fn argument_sets(j: &JoinSemilattice, n: usize) -> impl Iterator<Item = ElemSet> {
    j.all().subsets().filter(move |s| !s.is_empty() && s.len() <= n)
}

/// n-ary ND: `⋃ {x,a_i}^l ⊆ {c}^l` implies `{x, a_1 ∨ ... ∨ a_n}^l ⊆ {c}^l`.
pub fn check_dvee_n(j: &JoinSemilattice, n: usize) -> Result<CheckReport> {
    check_arity(n, 1, j.len())?;
    let sets: Vec<ElemSet> = argument_sets(j, n).collect();
    let mut witness = None;
    'scan: for x in j.elements() {
        for &args in &sets {
            let premise = args.iter().fold(ElemSet::EMPTY, |acc, a| acc | (j.down(x) & j.down(a)));
            let top = j.join_all(args).unwrap();
            let conclusion = j.down(x) & j.down(top);
            for c in j.elements() {
                if premise.is_subset(j.down(c)) && !conclusion.is_subset(j.down(c)) {
                    witness = Some(Witness::Join { x, args: ElemSetWire(args), c: Some(c) });
                    break 'scan;
                }
            }
        }
    }
    Ok(CheckReport::from_witness(Notion::DveeN(n), witness))
}

/// C: `x <= a_1 ∨ ... ∨ a_n` implies `x ∈ (⋃ {x,a_i}^l)^{ul}`.
pub fn check_c_n(j: &JoinSemilattice, n: usize) -> Result<CheckReport> {
    check_arity(n, 1, j.len())?;
    let sets: Vec<ElemSet> = argument_sets(j, n).collect();
    let mut witness = None;
    'scan: for x in j.elements() {
        for &args in &sets {
            if !j.le(x, j.join_all(args).unwrap()) {
                continue;
            }
            let union = args.iter().fold(ElemSet::EMPTY, |acc, a| acc | (j.down(x) & j.down(a)));
            let closure = j.lower_bounds(j.upper_bounds(union));
            if !closure.contains(x) {
                witness = Some(Witness::Join { x, args: ElemSetWire(args), c: None });
                break 'scan;
            }
        }
    }
    Ok(CheckReport::from_witness(Notion::CN(n), witness))
}

/// LR: `{c, a ∨ b}^l ⊆ ({c,a}^l ∪ {c,b}^l)^{ul}`.
pub fn check_lr(j: &JoinSemilattice) -> CheckReport {
    let witness = triples(j).find(|&(a, b, c)| {
        let union = (j.down(c) & j.down(a)) | (j.down(c) & j.down(b));
        let closure = j.lower_bounds(j.upper_bounds(union));
        !(j.down(c) & j.down(j.join(a, b))).is_subset(closure)
    });
    CheckReport::from_witness(Notion::Lr, witness.map(|(a, b, c)| Witness::Triple { a, b, c }))
}

/// LR on a bare poset: `({c,a}^l ∪ {c,b}^l)^{ul} = ({c} ∪ {a,b}^u)^l`.
///
/// The left side is always contained in the right one, so only the reverse
/// inclusion is scanned.
pub fn check_lr_poset(p: &Poset) -> CheckReport {
    let mut witness = None;
    'scan: for a in p.elements() {
        for b in p.elements() {
            let ab_upper = p.upper_bounds(ElemSet::singleton(a).with(b));
            for c in p.elements() {
                let union = (p.down(c) & p.down(a)) | (p.down(c) & p.down(b));
                let left = p.lower_bounds(p.upper_bounds(union));
                let right = p.lower_bounds(ab_upper.with(c));
                debug_assert!(left.is_subset(right));
                if !right.is_subset(left) {
                    witness = Some(Witness::Triple { a, b, c });
                    break 'scan;
                }
            }
        }
    }
    CheckReport::from_witness(Notion::LrPoset, witness)
}

/// B: whenever `∧A` exists, `∧{x ∨ a : a ∈ A}` exists and equals `x ∨ ∧A`.
pub fn check_b(j: &JoinSemilattice) -> CheckReport {
    let failures = meet_distribution_failures(j, j.len());
    let witness = failures.into_iter().flatten().min_by_key(|(args, _)| *args);
    CheckReport::from_witness(
        Notion::B,
        witness.map(|(args, x)| Witness::Meet { args: ElemSetWire(args), x }),
    )
}

/// S_n: the B condition for argument tuples of length `n`.
pub fn check_sn(j: &JoinSemilattice, n: usize) -> Result<CheckReport> {
    check_arity(n, 2, usize::MAX)?;
    Ok(sn_from_failures(&meet_distribution_failures(j, n), n))
}

/// Reports for S_k, `k = 2..=max_arity`, from a single scan.
pub fn check_sn_range(j: &JoinSemilattice, max_arity: usize) -> Vec<CheckReport> {
    let failures = meet_distribution_failures(j, max_arity);
    (2..=max_arity).map(|k| sn_from_failures(&failures, k)).collect()
}

fn sn_from_failures(failures: &[Option<(ElemSet, ElementId)>], n: usize) -> CheckReport {
    let witness = failures
        .iter()
        .take(n + 1)
        .flatten()
        .min_by_key(|(args, _)| *args)
        .copied();
    CheckReport::from_witness(
        Notion::S(n),
        witness.map(|(args, x)| Witness::Meet { args: ElemSetWire(args), x }),
    )
}

/// For each argument-set size `s <= max_size`, the first failing `(A, x)`
/// with `|A| = s` in scan order.
fn meet_distribution_failures(j: &JoinSemilattice, max_size: usize) -> Vec<Option<(ElemSet, ElementId)>> {
    let limit = max_size.min(j.len());
    let mut first = vec![None; limit + 1];
    for args in argument_sets(j, limit) {
        let size = args.len();
        if first[size].is_some() {
            continue;
        }
        let Some(meet) = j.glb(args) else { continue };
        for x in j.elements() {
            let shifted: ElemSet = args.iter().map(|a| j.join(x, a)).collect();
            if j.glb(shifted) != Some(j.join(x, meet)) {
                first[size] = Some((args, x));
                break;
            }
        }
    }
    first
}

fn triples(j: &JoinSemilattice) -> impl Iterator<Item = (ElementId, ElementId, ElementId)> + '_ {
    j.elements().flat_map(move |a| {
        j.elements()
            .flat_map(move |b| j.elements().map(move |c| (a, b, c)))
    })
}
