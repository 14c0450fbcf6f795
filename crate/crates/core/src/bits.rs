//! Packed membership vectors over a group `G` or a square `G x G`.
//!
//! Over `G x G` the pair `(x, y)` has logical index `x * |G| + y`. Each row
//! `x` is stored in its own run of whole words so rows can be combined with
//! word-level AND and popcount.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndicatorSet {
    order: usize,
    product: bool,
    row_words: usize,
    words: Vec<u64>,
    count: usize,
}

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

impl IndicatorSet {
    /// Empty subset of `G` with `|G| = order`.
    pub fn empty(order: usize) -> Self {
        IndicatorSet { order, product: false, row_words: words_for(order), words: vec![0; words_for(order)], count: 0 }
    }

    /// Empty subset of `G x G` with `|G| = order`.
    pub fn empty_product(order: usize) -> Self {
        let row_words = words_for(order);
        IndicatorSet { order, product: true, row_words, words: vec![0; row_words * order], count: 0 }
    }

    pub fn full(order: usize) -> Self {
        let mut s = Self::empty(order);
        (0..order).for_each(|x| s.insert(x));
        s
    }

    pub fn full_product(order: usize) -> Self {
        let mut s = Self::empty_product(order);
        (0..s.base_size()).for_each(|i| s.insert(i));
        s
    }

    pub fn from_members(order: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(order);
        for x in members {
            s.try_insert(x)?;
        }
        Ok(s)
    }

    pub fn from_pairs(order: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut s = Self::empty_product(order);
        for (x, y) in pairs {
            if x >= order || y >= order {
                return Err(Error::InvalidParameter(alloc::format!("pair ({x},{y}) out of range")));
            }
            s.insert(x * order + y);
        }
        Ok(s)
    }

    /// `S x T` for subsets of the same group.
    pub fn product_of(s: &IndicatorSet, t: &IndicatorSet) -> Result<Self> {
        if s.product || t.product || s.order != t.order {
            return Err(Error::InvalidParameter("factors must be subsets of one base group".into()));
        }
        let mut out = Self::empty_product(s.order);
        for x in s.iter() {
            for y in t.iter() {
                out.insert(x * s.order + y);
            }
        }
        Ok(out)
    }

    /// `|G|`.
    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn is_product(&self) -> bool {
        self.product
    }

    /// `N`: `|G|` or `|G|^2`.
    pub fn base_size(&self) -> usize {
        if self.product {
            self.order * self.order
        } else {
            self.order
        }
    }

    #[inline]
    fn locate(&self, i: usize) -> (usize, u64) {
        let (row, col) = if self.product { (i / self.order, i % self.order) } else { (0, i) };
        (row * self.row_words + col / 64, 1u64 << (col % 64))
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        let (w, m) = self.locate(i);
        self.words[w] & m != 0
    }

    #[inline]
    pub fn contains_pair(&self, x: usize, y: usize) -> bool {
        debug_assert!(self.product);
        self.words[x * self.row_words + y / 64] & (1 << (y % 64)) != 0
    }

    /// Panics when `i` is out of range.
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.base_size(), "index {i} out of range");
        let (w, m) = self.locate(i);
        if self.words[w] & m == 0 {
            self.words[w] |= m;
            self.count += 1;
        }
    }

    pub fn try_insert(&mut self, i: usize) -> Result<()> {
        if i >= self.base_size() {
            return Err(Error::InvalidParameter(alloc::format!("index {i} out of range")));
        }
        self.insert(i);
        Ok(())
    }

    pub fn remove(&mut self, i: usize) {
        let (w, m) = self.locate(i);
        if self.words[w] & m != 0 {
            self.words[w] &= !m;
            self.count -= 1;
        }
    }

    /// Cached cardinality.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn density(&self) -> f64 {
        self.count as f64 / self.base_size() as f64
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn row_words(&self) -> usize {
        self.row_words
    }

    /// Words of row `x` of a product set.
    #[inline]
    pub fn row(&self, x: usize) -> &[u64] {
        &self.words[x * self.row_words..(x + 1) * self.row_words]
    }

    pub fn popcount(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.base_size()).filter(move |&i| self.contains(i))
    }

    pub fn is_subset(&self, other: &IndicatorSet) -> bool {
        self.same_shape(other) && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn same_shape(&self, other: &IndicatorSet) -> bool {
        self.order == other.order && self.product == other.product
    }

    pub fn intersection_len(&self, other: &IndicatorSet) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}
