//! Ideals of a finite join-semilattice and the three ideal families.
//!
//! An ideal is a nonempty, down-closed, join-closed subset. The families are
//! `Id(J)` (all ideals), `Id(J) ∪ {∅}`, and `Id_fp(J)`, the intersections of
//! finitely many principal ideals. `Id_fp` contains `∅` exactly when some
//! pair of elements has no common lower bound.

use std::fmt;

use serde::Serialize;

use crate::distributivity::{check_gs, check_k, check_nd, Notion};
use crate::order::{JoinSemilattice, Poset};
use crate::set::{ElemSet, ElementId, MAX_ELEMENTS};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ideal(ElemSet);

impl Ideal {
    pub fn members(self) -> ElemSet {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilyVariant {
    IdAll,
    IdAllPlusEmpty,
    IdFp,
}

impl fmt::Display for FamilyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyVariant::IdAll => "Id",
            FamilyVariant::IdAllPlusEmpty => "Id+empty",
            FamilyVariant::IdFp => "Id_fp",
        })
    }
}

/// A family of subsets (ideals, possibly `∅`) ordered by inclusion.
#[derive(Clone, Debug)]
pub struct IdealFamily {
    pub variant: FamilyVariant,
    /// Members in increasing bitmask order; `∅`, when present, comes first.
    pub members: Vec<ElemSet>,
    order: Poset,
}

impl IdealFamily {
    fn new(j: &JoinSemilattice, variant: FamilyVariant, mut members: Vec<ElemSet>) -> Result<Self> {
        members.sort();
        members.dedup();
        let names = members.iter().map(|&s| set_label(j, s)).collect();
        let order = Poset::from_fn(
            names,
            |a, b| members[a].is_subset(members[b]),
            MAX_ELEMENTS,
        )?;
        Ok(IdealFamily { variant, members, order })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_empty(&self) -> bool {
        self.members.first() == Some(&ElemSet::EMPTY)
    }

    /// Inclusion order on the members; element `i` is `members[i]`.
    pub fn poset(&self) -> &Poset {
        &self.order
    }

    /// Whether the inclusion order is a lattice that satisfies the
    /// distributive law. Non-lattices count as not distributive.
    pub fn is_distributive_lattice(&self) -> bool {
        match JoinSemilattice::new(self.order.clone()) {
            Ok(l) => l.is_distributive_lattice().unwrap_or(false),
            Err(_) => false,
        }
    }
}

fn set_label(j: &JoinSemilattice, s: ElemSet) -> String {
    if s.is_empty() {
        "∅".to_owned()
    } else {
        format!("{{{}}}", j.labels_of(s).join(","))
    }
}

pub fn is_ideal(j: &JoinSemilattice, s: ElemSet) -> bool {
    !s.is_empty()
        && s.iter().all(|x| j.down(x).is_subset(s))
        && s.iter().all(|x| s.iter().all(|y| s.contains(j.join(x, y))))
}

/// `(a]`.
pub fn principal_ideal(j: &JoinSemilattice, a: ElementId) -> Ideal {
    Ideal(j.down(a))
}

/// Every ideal, found as a down-set generated by an antichain and kept if
/// it is join-closed.
pub fn all_ideals(j: &JoinSemilattice) -> Result<IdealFamily> {
    IdealFamily::new(j, FamilyVariant::IdAll, ideal_sets(j))
}

/// `Id(J) ∪ {∅}`.
pub fn ideals_with_empty(j: &JoinSemilattice) -> Result<IdealFamily> {
    let mut members = ideal_sets(j);
    members.push(ElemSet::EMPTY);
    IdealFamily::new(j, FamilyVariant::IdAllPlusEmpty, members)
}

fn ideal_sets(j: &JoinSemilattice) -> Vec<ElemSet> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    antichain_downsets(j, 0, ElemSet::EMPTY, &mut stack, &mut out);
    out.retain(|&s| is_ideal(j, s));
    out
}

/// Visits every antichain whose members are chosen from indices `>= from`
/// and records the down-set it generates.
fn antichain_downsets(
    j: &JoinSemilattice,
    from: usize,
    downset: ElemSet,
    chosen: &mut Vec<ElementId>,
    out: &mut Vec<ElemSet>,
) {
    out.push(downset);
    for i in from..j.len() {
        let e = ElementId::new(i);
        if chosen.iter().any(|&c| j.comparable(c, e)) {
            continue;
        }
        chosen.push(e);
        antichain_downsets(j, i + 1, downset | j.down(e), chosen, out);
        chosen.pop();
    }
}

/// Closure of the principal ideals under pairwise intersection.
pub fn id_fp(j: &JoinSemilattice) -> Result<IdealFamily> {
    let mut members: Vec<ElemSet> = j.elements().map(|a| j.down(a)).collect();
    members.sort();
    members.dedup();
    loop {
        let mut next = members.clone();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                next.push(x & y);
            }
        }
        next.sort();
        next.dedup();
        if next.len() == members.len() {
            break;
        }
        members = next;
    }
    IdealFamily::new(j, FamilyVariant::IdFp, members)
}

/// Least ideal containing `set`: close under joins, then under lower bounds.
pub fn generated_ideal(j: &JoinSemilattice, set: ElemSet) -> Result<Ideal> {
    if set.is_empty() {
        return Err(Error::Empty);
    }
    let mut closed = set;
    loop {
        let mut next = closed;
        for x in closed.iter() {
            for y in closed.iter() {
                next.insert(j.join(x, y));
            }
        }
        if next == closed {
            break;
        }
        closed = next;
    }
    let down = closed.iter().fold(ElemSet::EMPTY, |acc, x| acc | j.down(x));
    Ok(Ideal(down))
}

/// `{a ∨ b : a ∈ I1, b ∈ I2}`, defined for downward-directed models.
///
/// On GS-distributive models this is the ideal generated by `I1 ∪ I2`; in
/// general it need not be down-closed (e.g. the atoms of M3).
pub fn ideal_join_formula(j: &JoinSemilattice, i1: Ideal, i2: Ideal) -> Result<ElemSet> {
    if let Some((a, b)) = j.undirected_pair() {
        return Err(Error::NotDownwardDirected {
            a: j.name(a).to_owned(),
            b: j.name(b).to_owned(),
        });
    }
    Ok(i1
        .0
        .iter()
        .flat_map(|a| i2.0.iter().map(move |b| j.join(a, b)))
        .collect())
}

/// Inclusion order of a family as a standalone poset.
pub fn family_poset(f: &IdealFamily) -> Poset {
    f.order.clone()
}

/// One side-by-side comparison of a checker with an ideal-lattice property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterizationPair {
    #[serde(serialize_with = "notion_name")]
    pub notion: Notion,
    pub family: FamilyVariant,
    pub notion_holds: bool,
    pub family_distributive: bool,
}

fn notion_name<S: serde::Serializer>(n: &Notion, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(n)
}

impl CharacterizationPair {
    pub fn agrees(&self) -> bool {
        self.notion_holds == self.family_distributive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Characterizations {
    pub gs: CharacterizationPair,
    pub k: CharacterizationPair,
    pub nd: CharacterizationPair,
}

impl Characterizations {
    pub fn all_agree(&self) -> bool {
        self.pairs().iter().all(CharacterizationPair::agrees)
    }

    pub fn pairs(&self) -> [CharacterizationPair; 3] {
        [self.gs, self.k, self.nd]
    }
}

/// GS vs `Id(J)`, K vs `Id(J) ∪ {∅}`, ND vs `Id_fp(J)`.
pub fn verify_characterizations(j: &JoinSemilattice) -> Result<Characterizations> {
    let pair = |notion, holds, family: IdealFamily| CharacterizationPair {
        notion,
        family: family.variant,
        notion_holds: holds,
        family_distributive: family.is_distributive_lattice(),
    };
    Ok(Characterizations {
        gs: pair(Notion::Gs, check_gs(j).holds, all_ideals(j)?),
        k: pair(Notion::K, check_k(j).holds, ideals_with_empty(j)?),
        nd: pair(Notion::Nd, check_nd(j).holds, id_fp(j)?),
    })
}
