use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

use super::FiniteAbelianGroup;

/// Subset of a finite group, stored as a bitset over element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: FixedBitSet,
}

impl ElementSet {
    pub fn empty(order: usize) -> Self {
        ElementSet {
            bits: FixedBitSet::with_capacity(order),
        }
    }

    pub fn full(order: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(order);
        bits.insert_range(..);
        ElementSet { bits }
    }

    pub fn from_elements(order: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(order);
        for e in elems {
            s.insert(e);
        }
        s
    }

    /// Set whose members are the one bits of `mask` (for exhaustive sweeps).
    pub fn from_mask(order: usize, mask: u64) -> Self {
        Self::from_elements(order, (0..order).filter(|&i| mask >> i & 1 == 1))
    }

    /// Size of the ambient group.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, e: usize) {
        self.bits.insert(e);
    }

    pub fn remove(&mut self, e: usize) {
        self.bits.set(e, false);
    }

    pub fn contains(&self, e: usize) -> bool {
        self.bits.contains(e)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Members in ascending (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        self.bits.union_with(&other.bits);
    }

    /// `{a + x : x ∈ self}`.
    pub fn translate<G: FiniteAbelianGroup>(&self, group: &G, a: usize) -> ElementSet {
        ElementSet::from_elements(self.universe(), self.iter().map(|x| group.add(a, x)))
    }

    /// Lexicographic comparison of the sorted member lists.
    pub fn lex_cmp(&self, other: &ElementSet) -> Ordering {
        self.iter().cmp(other.iter())
    }

    pub fn labels<G: FiniteAbelianGroup>(&self, group: &G) -> Vec<String> {
        self.iter().map(|e| group.label(e)).collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
