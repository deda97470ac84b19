//! Fixed-universe bit masks used inside the counting engines.
//!
//! The engines are generic over [`Mask`] so that small instances run on a
//! single machine word while wide ones fall back to [`FixedBitSet`].

use std::fmt::Debug;
use std::hash::Hash;

use fixedbitset::FixedBitSet;

pub(crate) trait Mask: Clone + Eq + Hash + Debug + Send + Sync {
    /// Largest universe this representation can hold, `None` if unbounded.
    const CAPACITY: Option<usize>;

    fn empty(len: usize) -> Self;
    fn insert(&mut self, i: usize);
    fn remove(&mut self, i: usize);
    fn count(&self) -> usize;
    fn is_clear(&self) -> bool;
    fn intersection_count(&self, other: &Self) -> usize;
    fn difference_with(&mut self, other: &Self);
    fn intersect_with(&mut self, other: &Self);
    fn ones(&self) -> Self::Ones<'_>;
    fn union_with(&mut self, other: &Self);

    type Ones<'a>: Iterator<Item = usize>
    where
        Self: 'a;

    fn full(len: usize) -> Self {
        let mut m = Self::empty(len);
        for i in 0..len {
            m.insert(i);
        }
        m
    }

    fn fits(len: usize) -> bool {
        Self::CAPACITY.is_none_or(|cap| len <= cap)
    }
}

macro_rules! word_mask {
    ($t:ty) => {
        impl Mask for $t {
            const CAPACITY: Option<usize> = Some(<$t>::BITS as usize);

            #[inline]
            fn empty(_len: usize) -> Self {
                0
            }
            #[inline]
            fn insert(&mut self, i: usize) {
                *self |= 1 << i;
            }
            #[inline]
            fn remove(&mut self, i: usize) {
                *self &= !(1 << i);
            }
            #[inline]
            fn count(&self) -> usize {
                self.count_ones() as usize
            }
            #[inline]
            fn is_clear(&self) -> bool {
                *self == 0
            }
            #[inline]
            fn intersection_count(&self, other: &Self) -> usize {
                (*self & *other).count_ones() as usize
            }
            #[inline]
            fn difference_with(&mut self, other: &Self) {
                *self &= !*other;
            }
            #[inline]
            fn intersect_with(&mut self, other: &Self) {
                *self &= *other;
            }
            #[inline]
            fn union_with(&mut self, other: &Self) {
                *self |= *other;
            }

            type Ones<'a> = WordOnes<$t>;

            #[inline]
            fn ones(&self) -> WordOnes<$t> {
                WordOnes(*self)
            }
        }

        impl Iterator for WordOnes<$t> {
            type Item = usize;

            #[inline]
            fn next(&mut self) -> Option<usize> {
                if self.0 == 0 {
                    return None;
                }
                let i = self.0.trailing_zeros() as usize;
                self.0 &= self.0 - 1;
                Some(i)
            }
        }
    };
}

/// Set bits of a machine word, lowest first.
pub(crate) struct WordOnes<T>(T);

word_mask!(u64);
word_mask!(u128);

impl Mask for FixedBitSet {
    const CAPACITY: Option<usize> = None;

    fn empty(len: usize) -> Self {
        FixedBitSet::with_capacity(len)
    }
    fn insert(&mut self, i: usize) {
        FixedBitSet::insert(self, i);
    }
    fn remove(&mut self, i: usize) {
        self.set(i, false);
    }
    fn count(&self) -> usize {
        self.count_ones(..)
    }
    fn is_clear(&self) -> bool {
        FixedBitSet::is_clear(self)
    }
    fn intersection_count(&self, other: &Self) -> usize {
        FixedBitSet::intersection_count(self, other)
    }
    fn difference_with(&mut self, other: &Self) {
        FixedBitSet::difference_with(self, other);
    }
    fn intersect_with(&mut self, other: &Self) {
        FixedBitSet::intersect_with(self, other);
    }
    fn union_with(&mut self, other: &Self) {
        FixedBitSet::union_with(self, other);
    }

    type Ones<'a> = fixedbitset::Ones<'a>;

    fn ones(&self) -> fixedbitset::Ones<'_> {
        FixedBitSet::ones(self)
    }
}
