use std::ops::Deref;

use super::Poset;
use crate::set::{ElemSet, ElementId};
use crate::{Error, Result};

/// A poset in which every pair of elements has a least upper bound.
///
/// Immutable after validation. Dereferences to the underlying [`Poset`] for
/// order queries.
#[derive(Clone, PartialEq, Eq)]
pub struct JoinSemilattice {
    poset: Poset,
    join: Vec<ElementId>,
    top: ElementId,
}

/// Checks that every pair has a lub and precomputes the join table.
pub fn validate_join_semilattice(poset: Poset) -> Result<JoinSemilattice> {
    JoinSemilattice::new(poset)
}

impl JoinSemilattice {
    pub fn new(poset: Poset) -> Result<Self> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut join = vec![ElementId::new(0); n * n];
        for a in poset.elements() {
            for b in poset.elements().skip(a.index()) {
                let pair = ElemSet::singleton(a).with(b);
                let Some(j) = poset.lub(pair) else {
                    return Err(Error::NotAJoinSemilattice {
                        a: poset.name(a).to_owned(),
                        b: poset.name(b).to_owned(),
                    });
                };
                join[a.index() * n + b.index()] = j;
                join[b.index() * n + a.index()] = j;
            }
        }
        let top = poset.maximum(poset.all()).expect("finite join-semilattice has a top");
        Ok(JoinSemilattice { poset, join, top })
    }

    pub fn from_hasse<S: AsRef<str>>(names: &[S], covers: &[(S, S)]) -> Result<Self> {
        Self::new(Poset::from_hasse(names, covers)?)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn into_poset(self) -> Poset {
        self.poset
    }

    #[inline]
    pub fn join(&self, a: ElementId, b: ElementId) -> ElementId {
        self.join[a.index() * self.poset.len() + b.index()]
    }

    /// Join of a nonempty set; `None` for the empty set.
    pub fn join_all(&self, set: ElemSet) -> Option<ElementId> {
        let mut it = set.iter();
        let first = it.next()?;
        Some(it.fold(first, |acc, e| self.join(acc, e)))
    }

    /// Derived meet: the glb of `{a, b}` when it exists.
    pub fn meet(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        self.poset.glb(ElemSet::singleton(a).with(b))
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn bottom(&self) -> Option<ElementId> {
        self.poset.minimum(self.poset.all())
    }

    /// First pair (in index order) without a glb.
    pub fn meetless_pair(&self) -> Option<(ElementId, ElementId)> {
        self.pairs().find(|&(a, b)| self.meet(a, b).is_none())
    }

    pub fn is_lattice(&self) -> bool {
        self.meetless_pair().is_none()
    }

    /// First pair (in index order) without a common lower bound.
    pub fn undirected_pair(&self) -> Option<(ElementId, ElementId)> {
        self.pairs().find(|&(a, b)| (self.down(a) & self.down(b)).is_empty())
    }

    pub fn is_downward_directed(&self) -> bool {
        self.undirected_pair().is_none()
    }

    /// Whether the lattice law `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)` holds;
    /// `NotALattice` when some meet is missing.
    pub fn is_distributive_lattice(&self) -> Result<bool> {
        crate::distributivity::check_distributive_lattice(self).map(|r| r.holds)
    }

    /// The sub-join-semilattice on `set`, provided `set` is closed under joins.
    pub fn sub_join_semilattice(&self, set: ElemSet) -> Result<JoinSemilattice> {
        if set.is_empty() {
            return Err(Error::Empty);
        }
        assert!(set.is_subset(self.poset.all()), "subset out of range");
        for a in set.iter() {
            for b in set.iter() {
                let j = self.join(a, b);
                if !set.contains(j) {
                    return Err(Error::NotJoinClosed {
                        a: self.name(a).to_owned(),
                        b: self.name(b).to_owned(),
                        join: self.name(j).to_owned(),
                    });
                }
            }
        }
        let sub = JoinSemilattice::new(self.poset.induced(set))?;
        debug_assert!(set.iter().enumerate().all(|(i, a)| set
            .iter()
            .enumerate()
            .all(|(k, b)| sub.name(sub.join(ElementId::new(i), ElementId::new(k)))
                == self.name(self.join(a, b)))));
        Ok(sub)
    }

    /// The same model with elements reordered into canonical order.
    pub fn canonical(&self) -> JoinSemilattice {
        JoinSemilattice::new(self.poset.reindexed(&self.poset.canonical_order()))
            .expect("reindexing preserves joins")
    }

    /// All unordered pairs `a <= b` by index, including `a == b`.
    fn pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.elements()
            .flat_map(move |a| self.elements().skip(a.index()).map(move |b| (a, b)))
    }
}

impl Deref for JoinSemilattice {
    type Target = Poset;

    fn deref(&self) -> &Poset {
        &self.poset
    }
}

impl std::fmt::Debug for JoinSemilattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.poset.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> ElementId {
        ElementId::new(i)
    }

    fn m3() -> JoinSemilattice {
        JoinSemilattice::from_hasse(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .unwrap()
    }

    /// The eight-element Boolean lattice with coatoms a, b, c.
    fn fdjns() -> JoinSemilattice {
        JoinSemilattice::from_hasse(
            &["0", "p", "q", "r", "a", "b", "c", "1"],
            &[
                ("0", "p"), ("0", "q"), ("0", "r"),
                ("p", "a"), ("q", "a"), ("p", "b"),
                ("r", "b"), ("q", "c"), ("r", "c"),
                ("a", "1"), ("b", "1"), ("c", "1"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn vee_is_valid() {
        let v = JoinSemilattice::from_hasse(&["a", "b", "1"], &[("a", "1"), ("b", "1")]).unwrap();
        assert_eq!(v.join(e(0), e(1)), e(2));
        assert_eq!(v.top(), e(2));
        assert_eq!(v.bottom(), None);
        assert!(!v.is_lattice());
        assert!(!v.is_downward_directed());
        assert_eq!(v.meetless_pair(), Some((e(0), e(1))));
    }

    #[test]
    fn antichain_is_rejected() {
        let p = Poset::from_hasse::<&str>(&["p", "q"], &[]).unwrap();
        match validate_join_semilattice(p) {
            Err(Error::NotAJoinSemilattice { a, b }) => assert_eq!((a.as_str(), b.as_str()), ("p", "q")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lattice_tests() {
        let m = m3();
        assert!(m.is_lattice());
        assert!(m.is_downward_directed());
        assert!(!m.is_distributive_lattice().unwrap());
        let chain = JoinSemilattice::from_hasse(&["x", "y", "z"], &[("x", "y"), ("y", "z")]).unwrap();
        assert!(chain.is_lattice());
        assert!(chain.is_distributive_lattice().unwrap());
        assert!(fdjns().is_distributive_lattice().unwrap());
    }

    #[test]
    fn fdjns_black_subset_is_m3() {
        let big = fdjns();
        let black = big.set_of(&["0", "a", "b", "c", "1"]).unwrap();
        let sub = big.sub_join_semilattice(black).unwrap();
        assert!(sub.isomorphic(&m3()));
        assert!(!sub.is_distributive_lattice().unwrap());
    }

    #[test]
    fn sub_of_everything_is_identity() {
        let big = fdjns();
        assert_eq!(big.sub_join_semilattice(big.all()).unwrap(), big);
    }

    #[test]
    fn non_closed_subset_reports_pair() {
        let big = fdjns();
        let s = big.set_of(&["a", "r"]).unwrap();
        match big.sub_join_semilattice(s) {
            Err(Error::NotJoinClosed { a, b, join }) => {
                assert_eq!((a.as_str(), b.as_str(), join.as_str()), ("r", "a", "1"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
