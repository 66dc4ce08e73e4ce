//! Finite posets and join-semilattices.
//!
//! A [`Poset`] stores, for every element, its principal down-set and up-set
//! as bitsets; every order query is a couple of word operations. A
//! [`JoinSemilattice`] is a poset validated to have all binary joins, with
//! the join table precomputed. Meets are never stored, only derived.

mod canon;
mod semilattice;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::set::{ElemSet, ElementId, MAX_ELEMENTS};
use crate::{Error, Result};

pub use semilattice::{validate_join_semilattice, JoinSemilattice};

/// Default element cap. Anything up to [`MAX_ELEMENTS`] can be requested
/// explicitly through [`Poset::from_hasse_with_cap`].
pub const DEFAULT_CAP: usize = 24;

/// One step of a bound-set script: `S^l` or `S^u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundOp {
    Lower,
    Upper,
}

impl BoundOp {
    /// Parses scripts such as `"lu"` or `"ul"`.
    pub fn parse_script(script: &str) -> Result<Vec<BoundOp>> {
        script
            .chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                'l' => Ok(BoundOp::Lower),
                'u' => Ok(BoundOp::Upper),
                other => Err(Error::Parse {
                    line: 1,
                    column: i + 1,
                    message: format!("bound script accepts only `l` and `u`, found `{other}`"),
                }),
            })
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    /// `down[a]` = { x : x <= a }
    down: Vec<ElemSet>,
    /// `up[a]` = { x : a <= x }
    up: Vec<ElemSet>,
}

impl Poset {
    /// Builds a poset from labels and any relation pairs `(lower, upper)`
    /// whose reflexive-transitive closure is a partial order.
    pub fn from_hasse<S: AsRef<str>>(names: &[S], covers: &[(S, S)]) -> Result<Poset> {
        Self::from_hasse_with_cap(names, covers, DEFAULT_CAP)
    }

    pub fn from_hasse_with_cap<S: AsRef<str>>(
        names: &[S],
        covers: &[(S, S)],
        cap: usize,
    ) -> Result<Poset> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(name.clone()));
            }
        }
        let lookup = |label: &str| {
            index
                .get(label)
                .copied()
                .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
        };
        let edges = covers
            .iter()
            .map(|(lo, hi)| Ok((lookup(lo.as_ref())?, lookup(hi.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_edges(names, &edges, cap)
    }

    /// Builds a poset from index pairs `(lower, upper)`; the closure is computed here.
    pub fn from_edges(names: Vec<String>, edges: &[(usize, usize)], cap: usize) -> Result<Poset> {
        let n = names.len();
        let cap = cap.min(MAX_ELEMENTS);
        if n > cap {
            return Err(Error::TooManyElements { size: n, cap });
        }
        let mut up: Vec<ElemSet> = (0..n).map(|i| ElemSet::singleton(ElementId::new(i))).collect();
        for &(lo, hi) in edges {
            assert!(lo < n && hi < n, "edge ({lo}, {hi}) out of range");
            up[lo].insert(ElementId::new(hi));
        }
        // Warshall over bit rows.
        for k in 0..n {
            let kid = ElementId::new(k);
            let row_k = up[k];
            for row in up.iter_mut() {
                if row.contains(kid) {
                    *row |= row_k;
                }
            }
        }
        let mut down = vec![ElemSet::EMPTY; n];
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b.index()].insert(ElementId::new(a));
            }
        }
        for a in 0..n {
            let both = up[a] & down[a];
            if both.len() > 1 {
                let b = both.difference(ElemSet::singleton(ElementId::new(a))).first().unwrap();
                let cycle = find_cycle(n, edges, a, b.index())
                    .into_iter()
                    .map(|i| names[i].clone())
                    .collect();
                return Err(Error::Cycle { cycle });
            }
        }
        Ok(Poset { names, down, up })
    }

    /// Builds a poset from an order predicate `le(a, b)`. The predicate is
    /// closed transitively; antisymmetry is checked.
    pub fn from_fn(names: Vec<String>, le: impl Fn(usize, usize) -> bool, cap: usize) -> Result<Poset> {
        let n = names.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && le(a, b) {
                    edges.push((a, b));
                }
            }
        }
        Self::from_edges(names, &edges, cap)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: ElementId) -> &str {
        &self.names[e.index()]
    }

    pub fn index_of(&self, label: &str) -> Option<ElementId> {
        self.names.iter().position(|n| n == label).map(ElementId::new)
    }

    /// Resolves labels to a set, failing on the first unknown label.
    pub fn set_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<ElemSet> {
        labels
            .iter()
            .map(|l| {
                self.index_of(l.as_ref())
                    .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_owned()))
            })
            .collect()
    }

    pub fn labels_of(&self, set: ElemSet) -> Vec<&str> {
        set.iter().map(|e| self.name(e)).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.len()).map(ElementId::new)
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    #[inline]
    pub fn le(&self, a: ElementId, b: ElementId) -> bool {
        self.down[b.index()].contains(a)
    }

    #[inline]
    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.le(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: ElementId, b: ElementId) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    /// Principal down-set `(a]`.
    #[inline]
    pub fn down(&self, a: ElementId) -> ElemSet {
        self.down[a.index()]
    }

    /// Principal up-set `[a)`.
    #[inline]
    pub fn up(&self, a: ElementId) -> ElemSet {
        self.up[a.index()]
    }

    /// `S^l`: common lower bounds of `set`. `lower_bounds(∅)` is every element.
    pub fn lower_bounds(&self, set: ElemSet) -> ElemSet {
        set.iter().fold(self.all(), |acc, s| acc & self.down(s))
    }

    /// `S^u`: common upper bounds of `set`. `upper_bounds(∅)` is every element.
    pub fn upper_bounds(&self, set: ElemSet) -> ElemSet {
        set.iter().fold(self.all(), |acc, s| acc & self.up(s))
    }

    /// Applies the bound operators left to right, e.g. `[Lower, Upper]` gives `S^{lu}`.
    pub fn bound_closure(&self, set: ElemSet, script: &[BoundOp]) -> ElemSet {
        script.iter().fold(set, |acc, op| match op {
            BoundOp::Lower => self.lower_bounds(acc),
            BoundOp::Upper => self.upper_bounds(acc),
        })
    }

    /// Greatest element of `set`, if any.
    pub fn maximum(&self, set: ElemSet) -> Option<ElementId> {
        set.iter().find(|&m| set.is_subset(self.down(m)))
    }

    /// Least element of `set`, if any.
    pub fn minimum(&self, set: ElemSet) -> Option<ElementId> {
        set.iter().find(|&m| set.is_subset(self.up(m)))
    }

    /// Maximal elements of `set`.
    pub fn maximal(&self, set: ElemSet) -> ElemSet {
        set.iter()
            .filter(|&m| (self.up(m) & set).len() == 1)
            .collect()
    }

    /// Minimal elements of `set`.
    pub fn minimal(&self, set: ElemSet) -> ElemSet {
        set.iter()
            .filter(|&m| (self.down(m) & set).len() == 1)
            .collect()
    }

    /// Least upper bound of `set`, if it exists.
    pub fn lub(&self, set: ElemSet) -> Option<ElementId> {
        self.minimum(self.upper_bounds(set))
    }

    /// Greatest lower bound of `set`, if it exists.
    pub fn glb(&self, set: ElemSet) -> Option<ElementId> {
        self.maximum(self.lower_bounds(set))
    }

    /// Covering pairs `(lower, upper)` of the Hasse diagram.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        let mut out = Vec::new();
        for a in self.elements() {
            let above = self.up(a).difference(ElemSet::singleton(a));
            for b in self.minimal(above) {
                out.push((a, b));
            }
        }
        out
    }

    /// Restriction of the order to `set`, keeping labels and relative order.
    pub fn induced(&self, set: ElemSet) -> Poset {
        let keep: Vec<ElementId> = set.iter().collect();
        self.reindexed(&keep)
    }

    /// The poset whose element `k` is `order[k]` of `self`.
    pub fn reindexed(&self, order: &[ElementId]) -> Poset {
        let n = order.len();
        let mut down = vec![ElemSet::EMPTY; n];
        let mut up = vec![ElemSet::EMPTY; n];
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                if self.le(a, b) {
                    down[j].insert(ElementId::new(i));
                    up[i].insert(ElementId::new(j));
                }
            }
        }
        Poset {
            names: order.iter().map(|&e| self.names[e.index()].clone()).collect(),
            down,
            up,
        }
    }

    /// Same order, new labels.
    pub fn relabeled(&self, names: Vec<String>) -> Poset {
        assert_eq!(names.len(), self.len());
        Poset {
            names,
            down: self.down.clone(),
            up: self.up.clone(),
        }
    }

    /// Isomorphism-invariant text code of the order.
    pub fn canonical_code(&self) -> String {
        canon::canonical_form(self, None).code
    }

    /// Code of the structure with `point` distinguished. Two points of the
    /// same poset get equal codes iff some automorphism maps one to the other.
    pub fn pointed_code(&self, point: ElementId) -> String {
        canon::canonical_form(self, Some(point)).code
    }

    /// Elements listed in canonical order.
    pub fn canonical_order(&self) -> Vec<ElementId> {
        canon::canonical_form(self, None).order
    }

    pub fn isomorphic(&self, other: &Poset) -> bool {
        self.len() == other.len() && self.canonical_code() == other.canonical_code()
    }

    /// Decodes a canonical code into a poset labelled `0..n-1`.
    pub fn from_code(code: &str) -> Result<Poset> {
        canon::decode(code).ok_or_else(|| Error::InvalidCode(code.to_owned()))
    }

    pub(crate) fn from_rows_unchecked(names: Vec<String>, up: Vec<ElemSet>) -> Poset {
        let n = up.len();
        let mut down = vec![ElemSet::EMPTY; n];
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b.index()].insert(ElementId::new(a));
            }
        }
        Poset { names, down, up }
    }

    /// Checks reflexivity, antisymmetry and transitivity of the stored relation.
    pub fn is_partial_order(&self) -> bool {
        self.elements().all(|a| {
            self.le(a, a)
                && (self.up(a) & self.down(a)) == ElemSet::singleton(a)
                && self.up(a).iter().all(|b| self.up(b).is_subset(self.up(a)))
        })
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.name(a), self.name(b)))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.names)
            .field("covers", &covers)
            .finish()
    }
}

/// Path `a -> ... -> b -> ... -> a` in the input edge graph.
fn find_cycle(n: usize, edges: &[(usize, usize)], a: usize, b: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(lo, hi) in edges {
        adj[lo].push(hi);
    }
    let path = |from: usize, to: usize| -> Vec<usize> {
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut out = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            out.push(cur);
        }
        out.reverse();
        out
    };
    let mut cycle = path(a, b);
    cycle.extend(path(b, a).into_iter().skip(1));
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vee() -> Poset {
        Poset::from_hasse(&["a", "b", "1"], &[("a", "1"), ("b", "1")]).unwrap()
    }

    fn m3() -> Poset {
        Poset::from_hasse(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .unwrap()
    }

    fn e(i: usize) -> ElementId {
        ElementId::new(i)
    }

    #[test]
    fn vee_from_covers() {
        let p = vee();
        assert_eq!(p.len(), 3);
        assert!(p.le(e(0), e(2)) && p.le(e(1), e(2)));
        assert!(!p.comparable(e(0), e(1)));
    }

    #[test]
    fn singleton_poset() {
        let p = Poset::from_hasse::<&str>(&["x"], &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.le(e(0), e(0)));
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = Poset::from_hasse(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        match err {
            Error::Cycle { cycle } => assert_eq!(cycle, vec!["a", "b", "a"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn longer_cycle_reports_path() {
        let err = Poset::from_hasse(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")])
            .unwrap_err();
        let Error::Cycle { cycle } = err else { panic!() };
        assert_eq!(cycle.first(), cycle.last());
        assert_eq!(cycle.len(), 4);
    }

    #[test]
    fn unknown_and_duplicate_labels() {
        assert!(matches!(
            Poset::from_hasse(&["a"], &[("a", "z")]),
            Err(Error::UnknownLabel(l)) if l == "z"
        ));
        assert!(matches!(
            Poset::from_hasse::<&str>(&["a", "a"], &[]),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn redundant_edges_tolerated() {
        let p = Poset::from_hasse(&["x", "y", "z"], &[("x", "y"), ("y", "z"), ("x", "z")]).unwrap();
        assert_eq!(p.covers().len(), 2);
    }

    #[test]
    fn cap_enforced() {
        let names: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        assert!(matches!(
            Poset::from_edges(names, &[], 4),
            Err(Error::TooManyElements { size: 5, cap: 4 })
        ));
    }

    #[test]
    fn bound_sets() {
        let p = vee();
        assert_eq!(p.lower_bounds(p.set_of(&["a", "b"]).unwrap()), ElemSet::EMPTY);
        assert_eq!(p.lower_bounds(ElemSet::EMPTY), p.all());
        assert_eq!(p.lower_bounds(ElemSet::singleton(e(2))), p.all());

        let m = m3();
        let ab = m.set_of(&["a", "b"]).unwrap();
        assert_eq!(m.lower_bounds(ab), m.set_of(&["0"]).unwrap());
        assert_eq!(m.upper_bounds(ab), m.set_of(&["1"]).unwrap());
    }

    #[test]
    fn bound_closure_scripts() {
        let p = vee();
        let lu = BoundOp::parse_script("lu").unwrap();
        assert_eq!(p.bound_closure(p.set_of(&["a", "b"]).unwrap(), &lu), p.all());
        assert_eq!(p.bound_closure(ElemSet::singleton(e(0)), &lu), p.up(e(0)));

        let m = m3();
        let ul = BoundOp::parse_script("ul").unwrap();
        assert_eq!(m.bound_closure(m.set_of(&["a", "b"]).unwrap(), &ul), m.all());
        assert!(BoundOp::parse_script("lx").is_err());
    }

    #[test]
    fn lub_examples() {
        let p = vee();
        assert_eq!(p.lub(p.set_of(&["a", "b"]).unwrap()), Some(e(2)));
        let chain = Poset::from_hasse(&["x", "y", "z"], &[("x", "y"), ("y", "z")]).unwrap();
        assert_eq!(chain.lub(chain.set_of(&["x", "y"]).unwrap()), Some(e(1)));
        assert_eq!(chain.glb(chain.set_of(&["y", "z"]).unwrap()), Some(e(1)));
        let anti = Poset::from_hasse::<&str>(&["p", "q"], &[]).unwrap();
        assert_eq!(anti.lub(anti.all()), None);
    }

    #[test]
    fn reindex_and_induce() {
        let m = m3();
        let sub = m.induced(m.set_of(&["a", "b", "1"]).unwrap());
        assert_eq!(sub.names(), &["a", "b", "1"]);
        assert!(sub.isomorphic(&vee()));
        assert!(sub.is_partial_order());
    }
}
