//! Orderly generation of finite join-semilattices up to isomorphism.
//!
//! A join-semilattice on `n + 1` elements arises from one on `n` elements by
//! adding a new minimal element `m` whose strict up-set `U` is an up-closed
//! set such that `U ∩ ↑y` has a least element for every old `y` (that least
//! element is `m ∨ y`). Removing a minimal element always leaves a
//! join-semilattice, so every model has a parent.
//!
//! Each child is accepted only from the parent obtained by deleting its
//! designated minimal element (the first minimal element in canonical
//! order, up to automorphism). Children of distinct parents are therefore
//! non-isomorphic, and siblings are deduplicated by canonical code.

use std::collections::BTreeMap;

use crate::order::{JoinSemilattice, Poset};
use crate::set::{ElemSet, ElementId};

/// The singleton join-semilattice labelled `0`.
pub fn root() -> JoinSemilattice {
    JoinSemilattice::new(Poset::from_rows_unchecked(vec!["0".into()], vec![ElemSet::full(1)]))
        .expect("singleton")
}

/// Up-closed sets `U` admissible as the strict up-set of a new minimal element.
fn admissible_upsets(parent: &JoinSemilattice) -> Vec<ElemSet> {
    let mut out = Vec::new();
    for anti in parent.all().subsets() {
        if anti.is_empty() || parent.minimal(anti) != anti {
            continue;
        }
        let up = anti.iter().fold(ElemSet::EMPTY, |acc, a| acc | parent.up(a));
        let ok = parent
            .elements()
            .all(|y| parent.minimum(up & parent.up(y)).is_some());
        if ok {
            out.push(up);
        }
    }
    out
}

/// Canonical children of `parent` with their codes, relabelled into
/// canonical order with labels `0..n`, sorted by code.
pub fn children(parent: &JoinSemilattice) -> Vec<(String, JoinSemilattice)> {
    let n = parent.len();
    let new = ElementId::new(n);
    let names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let mut found: BTreeMap<String, JoinSemilattice> = BTreeMap::new();
    for up in admissible_upsets(parent) {
        let mut rows: Vec<ElemSet> = parent.elements().map(|e| parent.up(e)).collect();
        rows.push(up.with(new));
        let poset = Poset::from_rows_unchecked(names.clone(), rows);
        debug_assert!(poset.is_partial_order());
        let order = poset.canonical_order();
        let designated = order
            .iter()
            .copied()
            .find(|&e| poset.down(e) == ElemSet::singleton(e))
            .expect("a finite poset has a minimal element");
        if designated != new && poset.pointed_code(new) != poset.pointed_code(designated) {
            continue;
        }
        let child = poset.reindexed(&order).relabeled(names.clone());
        let code = child.canonical_code();
        found.entry(code).or_insert_with(|| {
            JoinSemilattice::new(child).expect("admissible up-sets keep joins")
        });
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_levels() {
        let kids = children(&root());
        assert_eq!(kids.len(), 1);
        let grand: Vec<_> = kids.iter().flat_map(|(_, k)| children(k)).collect();
        assert_eq!(grand.len(), 2);
    }

    #[test]
    fn upsets_of_vee() {
        let vee = JoinSemilattice::from_hasse(&["a", "b", "1"], &[("a", "1"), ("b", "1")]).unwrap();
        // {1}, {a,1}, {b,1}, {a,b,1}; the last is below both atoms.
        assert_eq!(admissible_upsets(&vee).len(), 4);
    }
}
