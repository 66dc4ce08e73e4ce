//! Element identifiers and word-sized element sets.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not};

use serde::Serialize;

/// Hard upper bound on the number of elements of any model: one machine word.
pub const MAX_ELEMENTS: usize = 64;

/// Position of an element in the element table of its model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ElementId(u8);

impl ElementId {
    pub fn new(index: usize) -> Self {
        assert!(index < MAX_ELEMENTS, "element index {index} out of range");
        ElementId(index as u8)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of `0..n` stored as a bitmask.
///
/// Used for bound sets, down-sets, ideals and the rows of order relations.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, 1, ..., n - 1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == MAX_ELEMENTS {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(e: ElementId) -> Self {
        ElemSet(1u64 << e.index())
    }

    #[inline]
    pub fn contains(self, e: ElementId) -> bool {
        self.0 >> e.index() & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: ElementId) {
        self.0 |= 1u64 << e.index();
    }

    #[inline]
    pub fn remove(&mut self, e: ElementId) {
        self.0 &= !(1u64 << e.index());
    }

    #[inline]
    pub fn with(self, e: ElementId) -> Self {
        ElemSet(self.0 | 1u64 << e.index())
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn difference(self, other: ElemSet) -> Self {
        ElemSet(self.0 & !other.0)
    }

    /// Lowest member.
    #[inline]
    pub fn first(self) -> Option<ElementId> {
        if self.0 == 0 {
            None
        } else {
            Some(ElementId::new(self.0.trailing_zeros() as usize))
        }
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self`, in increasing order of their bitmask value.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.index())).finish()
    }
}

impl FromIterator<ElementId> for ElemSet {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl IntoIterator for ElemSet {
    type Item = ElementId;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl BitAnd for ElemSet {
    type Output = ElemSet;
    #[inline]
    fn bitand(self, rhs: ElemSet) -> ElemSet {
        ElemSet(self.0 & rhs.0)
    }
}

impl BitOr for ElemSet {
    type Output = ElemSet;
    #[inline]
    fn bitor(self, rhs: ElemSet) -> ElemSet {
        ElemSet(self.0 | rhs.0)
    }
}

impl BitAndAssign for ElemSet {
    #[inline]
    fn bitand_assign(&mut self, rhs: ElemSet) {
        self.0 &= rhs.0;
    }
}

impl BitOrAssign for ElemSet {
    #[inline]
    fn bitor_assign(&mut self, rhs: ElemSet) {
        self.0 |= rhs.0;
    }
}

/// Complement within the full 64-bit universe; mask with [`ElemSet::full`] when needed.
impl Not for ElemSet {
    type Output = ElemSet;
    #[inline]
    fn not(self) -> ElemSet {
        ElemSet(!self.0)
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = ElementId;

    #[inline]
    fn next(&mut self) -> Option<ElementId> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(ElementId::new(i))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = ElemSet;

    fn next(&mut self) -> Option<ElemSet> {
        let cur = self.next?;
        // Standard submask increment: visits submasks in increasing numeric order.
        let succ = (cur | !self.mask).wrapping_add(1) & self.mask;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(ElemSet(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_increasing_and_complete() {
        let mask = ElemSet::from_bits(0b10110);
        let subs: Vec<u64> = mask.subsets().map(|s| s.bits()).collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert!(subs.iter().all(|&s| s & !mask.bits() == 0));
    }

    #[test]
    fn full_word() {
        assert_eq!(ElemSet::full(64).len(), 64);
        assert_eq!(ElemSet::full(0), ElemSet::EMPTY);
        assert_eq!(ElemSet::full(3).bits(), 0b111);
    }

    #[test]
    fn iteration_order() {
        let s: ElemSet = [5, 1, 3].into_iter().map(ElementId::new).collect();
        let v: Vec<usize> = s.iter().map(|e| e.index()).collect();
        assert_eq!(v, vec![1, 3, 5]);
        assert_eq!(s.first(), Some(ElementId::new(1)));
    }
}
