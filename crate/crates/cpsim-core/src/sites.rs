//! Fixed-width bitset over the sites of a spatial window.
//!
//! All per-time state in the sweeps (reached sets, occupancy, markers) is a
//! `SiteSet` anchored at the window's left edge. Mixing sets from different
//! windows is a programming error and panics in debug builds.

/// Set of integer sites within a window [x_min, x_min + width).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SiteSet {
    x_min: i64,
    width: usize,
    words: Vec<u64>,
}

impl SiteSet {
    pub fn new(x_min: i64, width: usize) -> Self {
        SiteSet { x_min, width, words: vec![0; width.div_ceil(64)] }
    }

    pub fn x_min(&self) -> i64 {
        self.x_min
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    fn idx(&self, x: i64) -> usize {
        debug_assert!(self.in_range(x), "site {x} outside [{}, {})", self.x_min, self.x_min + self.width as i64);
        (x - self.x_min) as usize
    }

    #[inline]
    pub fn in_range(&self, x: i64) -> bool {
        x >= self.x_min && x < self.x_min + self.width as i64
    }

    #[inline]
    pub fn contains(&self, x: i64) -> bool {
        if !self.in_range(x) {
            return false;
        }
        let i = self.idx(x);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: i64) {
        let i = self.idx(x);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, x: i64) {
        let i = self.idx(x);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    pub fn insert_range(&mut self, lo: i64, hi: i64) {
        // Inclusive on both ends, clipped to the window.
        let lo = lo.max(self.x_min);
        let hi = hi.min(self.x_min + self.width as i64 - 1);
        for x in lo..=hi {
            self.insert(x);
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn min_site(&self) -> Option<i64> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(self.x_min + (wi * 64 + w.trailing_zeros() as usize) as i64);
            }
        }
        None
    }

    pub fn max_site(&self) -> Option<i64> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(self.x_min + (wi * 64 + 63 - w.leading_zeros() as usize) as i64);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let base = self.x_min + (wi * 64) as i64;
            BitIter { word: w, base }
        })
    }

    fn check_same_shape(&self, other: &SiteSet) {
        debug_assert!(
            self.x_min == other.x_min && self.width == other.width,
            "site sets from different windows"
        );
    }

    /// Zero any bits beyond `width` in the final word.
    fn mask_tail(&mut self) {
        let used = self.width % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }

    pub fn union_with(&mut self, other: &SiteSet) {
        self.check_same_shape(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &SiteSet) {
        self.check_same_shape(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &SiteSet) {
        self.check_same_shape(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn symmetric_difference_with(&mut self, other: &SiteSet) {
        self.check_same_shape(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// The set {x + delta : x in self}, clipped to the same range.
    pub fn shifted(&self, delta: i64) -> SiteSet {
        let mut out = SiteSet::new(self.x_min, self.width);
        if delta.unsigned_abs() as usize >= self.width {
            return out;
        }
        let (word_shift, bit_shift) = ((delta.unsigned_abs() / 64) as usize, delta.unsigned_abs() % 64);
        let n = self.words.len();
        if delta >= 0 {
            for i in (0..n).rev() {
                let mut w = if i >= word_shift { self.words[i - word_shift] << bit_shift } else { 0 };
                if bit_shift > 0 && i > word_shift {
                    w |= self.words[i - word_shift - 1] >> (64 - bit_shift);
                }
                out.words[i] = w;
            }
        } else {
            for i in 0..n {
                let mut w = if i + word_shift < n { self.words[i + word_shift] >> bit_shift } else { 0 };
                if bit_shift > 0 && i + word_shift + 1 < n {
                    w |= self.words[i + word_shift + 1] << (64 - bit_shift);
                }
                out.words[i] = w;
            }
        }
        out.mask_tail();
        out
    }

    pub fn is_subset_of(&self, other: &SiteSet) -> bool {
        self.check_same_shape(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &SiteSet) -> bool {
        self.check_same_shape(other);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// True iff (self & mask) \ minus is nonempty. Hot path of the box
    /// intrusion checks, so it stays allocation-free.
    pub fn intersects_minus(&self, mask: &SiteSet, minus: &SiteSet) -> bool {
        self.check_same_shape(mask);
        self.check_same_shape(minus);
        self.words
            .iter()
            .zip(&mask.words)
            .zip(&minus.words)
            .any(|((a, m), d)| a & m & !d != 0)
    }
}

struct BitIter {
    word: u64,
    base: i64,
}

impl Iterator for BitIter {
    type Item = i64;
    fn next(&mut self) -> Option<i64> {
        if self.word == 0 {
            return None;
        }
        let tz = self.word.trailing_zeros();
        self.word &= self.word - 1;
        Some(self.base + tz as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_query_remove() {
        let mut s = SiteSet::new(-10, 21);
        assert!(!s.contains(-10));
        s.insert(-10);
        s.insert(0);
        s.insert(10);
        assert!(s.contains(-10) && s.contains(0) && s.contains(10));
        assert_eq!(s.count(), 3);
        assert_eq!(s.min_site(), Some(-10));
        assert_eq!(s.max_site(), Some(10));
        s.remove(0);
        assert!(!s.contains(0));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![-10, 10]);
        assert!(!s.contains(-11), "out of range is simply absent");
    }

    #[test]
    fn range_and_set_algebra() {
        let mut a = SiteSet::new(0, 100);
        a.insert_range(5, 9);
        let mut b = SiteSet::new(0, 100);
        b.insert_range(8, 12);
        let mut u = a.clone();
        u.union_with(&b);
        assert_eq!(u.count(), 8);
        let mut i = a.clone();
        i.intersect_with(&b);
        assert_eq!(i.iter().collect::<Vec<_>>(), vec![8, 9]);
        assert!(i.is_subset_of(&a) && i.is_subset_of(&b));
        assert!(a.intersects(&b));
        let mut d = a.clone();
        d.subtract(&b);
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![5, 6, 7]);
        // (b & a) \ {8,9} is empty; (b & a) \ {9} is not.
        let mut m = SiteSet::new(0, 100);
        m.insert(8);
        m.insert(9);
        assert!(!b.intersects_minus(&a, &m));
        m.remove(8);
        assert!(b.intersects_minus(&a, &m));
    }

    #[test]
    fn shifted_matches_per_site_shift() {
        let mut s = SiteSet::new(-70, 150);
        for x in [-70, -69, -5, 0, 1, 63, 64, 65, 78, 79] {
            s.insert(x);
        }
        for delta in [-200i64, -79, -64, -63, -1, 0, 1, 63, 64, 65, 149, 200] {
            let shifted = s.shifted(delta);
            let mut expect = SiteSet::new(-70, 150);
            for x in s.iter() {
                if expect.in_range(x + delta) {
                    expect.insert(x + delta);
                }
            }
            assert_eq!(shifted, expect, "delta {delta}");
        }
    }

    #[test]
    fn word_boundaries() {
        let mut s = SiteSet::new(0, 130);
        for x in [0, 63, 64, 127, 128, 129] {
            s.insert(x);
        }
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 127, 128, 129]);
        assert_eq!(s.max_site(), Some(129));
    }
}
