//! Fixed-width vertex sets. Every graph in the crate has at most [`MAX_VERTICES`] vertices.

use std::fmt;

pub const MAX_VERTICES: usize = 256;
const WORDS: usize = MAX_VERTICES / 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VSet([u64; WORDS]);

impl VSet {
    pub const EMPTY: VSet = VSet([0; WORDS]);

    pub fn full(n: usize) -> VSet {
        let mut s = VSet::EMPTY;
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn singleton(i: usize) -> VSet {
        let mut s = VSet::EMPTY;
        s.insert(i);
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> VSet {
        let mut s = VSet::EMPTY;
        for i in it {
            s.insert(i);
        }
        s
    }

    /// Low 64 members given as a mask.
    pub fn from_mask(mask: u64) -> VSet {
        let mut s = VSet::EMPTY;
        s.0[0] = mask;
        s
    }

    pub fn low_mask(&self) -> u64 {
        self.0[0]
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
    pub fn and(&self, o: &VSet) -> VSet {
        let mut r = *self;
        for k in 0..WORDS {
            r.0[k] &= o.0[k];
        }
        r
    }

    #[inline]
    pub fn or(&self, o: &VSet) -> VSet {
        let mut r = *self;
        for k in 0..WORDS {
            r.0[k] |= o.0[k];
        }
        r
    }

    #[inline]
    pub fn minus(&self, o: &VSet) -> VSet {
        let mut r = *self;
        for k in 0..WORDS {
            r.0[k] &= !o.0[k];
        }
        r
    }

    #[inline]
    pub fn with(&self, i: usize) -> VSet {
        let mut r = *self;
        r.insert(i);
        r
    }

    #[inline]
    pub fn without(&self, i: usize) -> VSet {
        let mut r = *self;
        r.remove(i);
        r
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_subset(&self, o: &VSet) -> bool {
        (0..WORDS).all(|k| self.0[k] & !o.0[k] == 0)
    }

    #[inline]
    pub fn intersects(&self, o: &VSet) -> bool {
        (0..WORDS).any(|k| self.0[k] & o.0[k] != 0)
    }

    pub fn first(&self) -> Option<usize> {
        for k in 0..WORDS {
            if self.0[k] != 0 {
                return Some(k * 64 + self.0[k].trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> VSetIter {
        VSetIter { set: *self, word: 0 }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct VSetIter {
    set: VSet,
    word: usize,
}

impl Iterator for VSetIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.set.0[self.word];
            if w != 0 {
                let b = w.trailing_zeros() as usize;
                self.set.0[self.word] &= w - 1;
                return Some(self.word * 64 + b);
            }
            self.word += 1;
        }
        None
    }
}

impl fmt::Debug for VSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = VSet::from_iter([1, 5, 70, 200]);
        let b = VSet::from_iter([5, 70, 3]);
        assert_eq!(a.and(&b).to_vec(), vec![5, 70]);
        assert_eq!(a.minus(&b).to_vec(), vec![1, 200]);
        assert_eq!(a.or(&b).len(), 5);
        assert!(VSet::from_iter([5, 70]).is_subset(&a));
        assert_eq!(a.first(), Some(1));
        assert_eq!(VSet::EMPTY.first(), None);
        assert_eq!(VSet::full(130).len(), 130);
    }
}
