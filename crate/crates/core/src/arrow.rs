//! The arrow operation: `a → b` is the maximum of
//! `{c : every common lower bound of a and c is below b}`.
//!
//! Computed literally as the maximum of the candidate set, since meets need
//! not exist. When the maximum is missing, the entry stores two incomparable
//! maximal candidates as a certificate.

use serde::Serialize;

use crate::order::JoinSemilattice;
use crate::set::{ElemSet, ElementId};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrowEntry {
    Defined(ElementId),
    /// Two maximal candidates, neither above the other.
    Undefined { first: ElementId, second: ElementId },
}

impl ArrowEntry {
    pub fn value(self) -> Option<ElementId> {
        match self {
            ArrowEntry::Defined(r) => Some(r),
            ArrowEntry::Undefined { .. } => None,
        }
    }
}

/// `{c : {a, c}^l ⊆ {b}^l}`. Never empty: `b` is always a member.
pub fn candidates(j: &JoinSemilattice, a: ElementId, b: ElementId) -> ElemSet {
    j.elements()
        .filter(|&c| (j.down(a) & j.down(c)).is_subset(j.down(b)))
        .collect()
}

pub fn arrow_entry(j: &JoinSemilattice, a: ElementId, b: ElementId) -> ArrowEntry {
    let cands = candidates(j, a, b);
    match j.maximum(cands) {
        Some(r) => ArrowEntry::Defined(r),
        None => {
            let mut maximal = j.maximal(cands).iter();
            let first = maximal.next().expect("nonempty candidate set");
            let second = maximal.next().expect("no maximum implies two maximal candidates");
            ArrowEntry::Undefined { first, second }
        }
    }
}

pub fn arrow(j: &JoinSemilattice, a: ElementId, b: ElementId) -> Option<ElementId> {
    arrow_entry(j, a, b).value()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowTable {
    size: usize,
    entries: Vec<ArrowEntry>,
}

impl ArrowTable {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, a: ElementId, b: ElementId) -> ArrowEntry {
        self.entries[a.index() * self.size + b.index()]
    }

    pub fn is_total(&self) -> bool {
        self.entries.iter().all(|e| e.value().is_some())
    }

    /// `(a, b, entry)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (ElementId, ElementId, ArrowEntry)> + '_ {
        self.entries.iter().enumerate().map(move |(i, &e)| {
            (ElementId::new(i / self.size), ElementId::new(i % self.size), e)
        })
    }

    pub fn undefined(&self) -> impl Iterator<Item = (ElementId, ElementId, ArrowEntry)> + '_ {
        self.iter().filter(|(_, _, e)| e.value().is_none())
    }
}

pub fn arrow_table(j: &JoinSemilattice) -> ArrowTable {
    let entries = j
        .elements()
        .flat_map(|a| j.elements().map(move |b| arrow_entry(j, a, b)))
        .collect();
    ArrowTable { size: j.len(), entries }
}

pub fn is_arrow_total(j: &JoinSemilattice) -> bool {
    j.elements().all(|a| j.elements().all(|b| arrow(j, a, b).is_some()))
}

/// Re-checks one entry against the elimination and introduction conditions,
/// or its undefinedness certificate, quantifying element-wise.
pub fn entry_is_valid(j: &JoinSemilattice, a: ElementId, b: ElementId, entry: ArrowEntry) -> bool {
    let implies_b = |c: ElementId| j.elements().all(|x| !(j.le(x, a) && j.le(x, c)) || j.le(x, b));
    match entry {
        // (→E) for r itself, (→I) for every c.
        ArrowEntry::Defined(r) => implies_b(r) && j.elements().all(|c| !implies_b(c) || j.le(c, r)),
        ArrowEntry::Undefined { first, second } => {
            let maximal = |m: ElementId| {
                implies_b(m) && j.elements().all(|c| c == m || !j.le(m, c) || !implies_b(c))
            };
            maximal(first) && maximal(second) && !j.comparable(first, second)
        }
    }
}

/// Arrow behaviour of a join-closed subset of an ambient model with total arrow.
#[derive(Clone, Debug)]
pub struct SubalgebraReport {
    /// Ambient ids of the subset, in the order used by `sub` and `intrinsic`.
    pub elements: Vec<ElementId>,
    /// Ambient arrow maps every pair of the subset back into the subset.
    pub arrow_closed: bool,
    /// Pairs `(a, b, a → b)` in ambient ids whose ambient arrow escapes.
    pub escaping: Vec<(ElementId, ElementId, ElementId)>,
    pub sub: JoinSemilattice,
    /// Arrow computed inside the subset with the restricted order.
    pub intrinsic: ArrowTable,
}

impl SubalgebraReport {
    /// Ambient pairs whose intrinsic arrow is undefined.
    pub fn intrinsic_undefined(&self) -> Vec<(ElementId, ElementId)> {
        self.intrinsic
            .undefined()
            .map(|(a, b, _)| (self.elements[a.index()], self.elements[b.index()]))
            .collect()
    }

    /// Intrinsic entry at ambient ids; `None` if either is outside the subset.
    pub fn intrinsic_at(&self, a: ElementId, b: ElementId) -> Option<ArrowEntry> {
        let pos = |e| self.elements.iter().position(|&x| x == e).map(ElementId::new);
        Some(self.intrinsic.get(pos(a)?, pos(b)?))
    }
}

pub fn closed_subalgebra_report(j: &JoinSemilattice, set: ElemSet) -> Result<SubalgebraReport> {
    if set.is_empty() {
        return Err(Error::Empty);
    }
    let ambient = arrow_table(j);
    if let Some((a, b, _)) = ambient.undefined().next() {
        return Err(Error::ArrowNotTotal {
            a: j.name(a).to_owned(),
            b: j.name(b).to_owned(),
        });
    }
    let sub = j.sub_join_semilattice(set)?;
    let escaping: Vec<_> = set
        .iter()
        .flat_map(|a| set.iter().map(move |b| (a, b)))
        .filter_map(|(a, b)| {
            let r = ambient.get(a, b).value().expect("total");
            (!set.contains(r)).then_some((a, b, r))
        })
        .collect();
    let intrinsic = arrow_table(&sub);
    Ok(SubalgebraReport {
        elements: set.iter().collect(),
        arrow_closed: escaping.is_empty(),
        escaping,
        sub,
        intrinsic,
    })
}

/// On a lattice, compares the arrow with `max {c : a ∧ c <= b}` entry by entry.
pub fn meet_relative_complement_agreement(j: &JoinSemilattice) -> Result<bool> {
    if let Some((a, b)) = j.meetless_pair() {
        return Err(Error::NotALattice {
            a: j.name(a).to_owned(),
            b: j.name(b).to_owned(),
        });
    }
    let agree = j.elements().all(|a| {
        j.elements().all(|b| {
            let rel: ElemSet = j
                .elements()
                .filter(|&c| j.le(j.meet(a, c).expect("lattice"), b))
                .collect();
            j.maximum(rel) == arrow(j, a, b)
        })
    });
    Ok(agree)
}
