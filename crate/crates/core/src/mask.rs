//! Fixed-width bit sets over point (or hyperplane) indices.
//!
//! PG(4,4) has 341 points, so six 64-bit words cover every supported geometry.

use std::cmp::Ordering;
use std::fmt;

pub const MASK_WORDS: usize = 6;
pub const MASK_BITS: usize = MASK_WORDS * 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mask(pub [u64; MASK_WORDS]);

impl Mask {
    pub const EMPTY: Mask = Mask([0; MASK_WORDS]);

    /// The set `{0, …, n−1}`.
    pub fn full(n: usize) -> Mask {
        debug_assert!(n <= MASK_BITS);
        let mut m = Mask::EMPTY;
        for (w, word) in m.0.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        m
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Mask {
        let mut m = Mask::EMPTY;
        for i in it {
            m.insert(i);
        }
        m
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        self.0[i >> 6] ^= 1u64 << (i & 63);
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn and(&self, o: &Mask) -> Mask {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a &= b;
        }
        r
    }

    #[inline]
    pub fn or(&self, o: &Mask) -> Mask {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a |= b;
        }
        r
    }

    #[inline]
    pub fn xor(&self, o: &Mask) -> Mask {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a ^= b;
        }
        r
    }

    /// `self \ o`
    #[inline]
    pub fn and_not(&self, o: &Mask) -> Mask {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a &= !b;
        }
        r
    }

    #[inline]
    pub fn and_count(&self, o: &Mask) -> usize {
        self.0.iter().zip(o.0.iter()).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    #[inline]
    pub fn intersects(&self, o: &Mask) -> bool {
        self.0.iter().zip(o.0.iter()).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, o: &Mask) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a & !b == 0)
    }

    /// Keeps only indices strictly greater than `i`.
    #[inline]
    pub fn above(&self, i: usize) -> Mask {
        let mut r = *self;
        let w = i >> 6;
        for word in r.0.iter_mut().take(w) {
            *word = 0;
        }
        let b = i & 63;
        r.0[w] &= if b == 63 { 0 } else { !((1u64 << (b + 1)) - 1) };
        r
    }

    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> MaskIter {
        MaskIter { words: self.0, word: 0 }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Little-endian word bytes, used for hashing and digests.
    pub fn to_bytes(&self) -> [u8; MASK_WORDS * 8] {
        let mut out = [0u8; MASK_WORDS * 8];
        for (i, w) in self.0.iter().enumerate() {
            out[i * 8..i * 8 + 8].copy_from_slice(&w.to_le_bytes());
        }
        out
    }
}

/// Orders sets by their ascending index sequences (lexicographically), so
/// `{0, 5} < {1, 2}` and a proper prefix sorts first.
impl Ord for Mask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Mask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for Mask {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Mask::from_indices(iter)
    }
}

pub struct MaskIter {
    words: [u64; MASK_WORDS],
    word: usize,
}

impl Iterator for MaskIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.word < MASK_WORDS {
            let w = self.words[self.word];
            if w != 0 {
                self.words[self.word] = w & (w - 1);
                return Some(self.word * 64 + w.trailing_zeros() as usize);
            }
            self.word += 1;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_ops() {
        let a = Mask::from_indices([0, 5, 64, 340]);
        let b = Mask::from_indices([5, 64, 100]);
        assert_eq!(a.len(), 4);
        assert_eq!(a.and(&b).to_vec(), vec![5, 64]);
        assert_eq!(a.and_not(&b).to_vec(), vec![0, 340]);
        assert_eq!(a.xor(&b).to_vec(), vec![0, 100, 340]);
        assert_eq!(a.and_count(&b), 2);
        assert_eq!(a.above(5).to_vec(), vec![64, 340]);
        assert_eq!(a.above(63).to_vec(), vec![64, 340]);
        assert_eq!(a.above(64).to_vec(), vec![340]);
        assert_eq!(a.first(), Some(0));
        assert_eq!(Mask::full(341).len(), 341);
        assert_eq!(Mask::full(64).len(), 64);
        assert!(Mask::EMPTY.first().is_none());
    }

    #[test]
    fn ordering_is_lexicographic_on_index_lists() {
        let a = Mask::from_indices([0, 5]);
        let b = Mask::from_indices([1, 2]);
        assert!(a < b);
        assert!(Mask::from_indices([0]) < a);
    }
}
