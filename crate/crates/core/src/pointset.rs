//! Bitmask sets of 1-based labels.

use std::cmp::Ordering;
use std::fmt;

/// Largest label a [`PointSet`] can hold.
pub const MAX_POINTS: usize = 32;

/// A set of labels in `1..=32`, stored as a bitmask (label `p` is bit `p-1`).
///
/// Sets order lexicographically by their sorted element lists, so `{1,2,3} < {1,2,4} < {1,3}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PointSet(pub u32);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    /// The set `{1, …, d}`.
    pub fn full(d: usize) -> Self {
        if d >= 32 {
            PointSet(u32::MAX)
        } else {
            PointSet((1u32 << d) - 1)
        }
    }

    pub fn singleton(p: u8) -> Self {
        debug_assert!(p >= 1 && (p as usize) <= MAX_POINTS);
        PointSet(1u32 << (p - 1))
    }

    pub fn from_points<I: IntoIterator<Item = u8>>(points: I) -> Self {
        points.into_iter().fold(PointSet::EMPTY, |s, p| s.with(p))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, p: u8) -> bool {
        p >= 1 && (p as usize) <= MAX_POINTS && self.0 & (1u32 << (p - 1)) != 0
    }

    pub fn with(self, p: u8) -> Self {
        self | PointSet::singleton(p)
    }

    pub fn without(self, p: u8) -> Self {
        PointSet(self.0 & !(1u32 << (p - 1)))
    }

    pub fn insert(&mut self, p: u8) {
        *self = self.with(p);
    }

    pub fn remove(&mut self, p: u8) {
        *self = self.without(p);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: PointSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn first(self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as u8 + 1)
        }
    }

    pub fn last(self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            Some(32 - self.0.leading_zeros() as u8)
        }
    }

    pub fn iter(self) -> PointIter {
        PointIter(self.0)
    }

    pub fn to_vec(self) -> Vec<u8> {
        self.iter().collect()
    }

    /// All subsets of `self` with exactly `k` elements, in lexicographic order.
    pub fn subsets_of_size(self, k: usize) -> Vec<PointSet> {
        let pts = self.to_vec();
        let n = pts.len();
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(PointSet::from_points(idx.iter().map(|&i| pts[i])));
            let mut i = k;
            while i > 0 && idx[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                return out;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

/// Ascending iterator over the labels of a [`PointSet`].
pub struct PointIter(u32);

impl Iterator for PointIter {
    type Item = u8;
    fn next(&mut self) -> Option<u8> {
        if self.0 == 0 {
            return None;
        }
        let t = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(t as u8 + 1)
    }
}

impl std::ops::BitOr for PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 | rhs.0)
    }
}

impl std::ops::BitAnd for PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & rhs.0)
    }
}

impl std::ops::Sub for PointSet {
    type Output = PointSet;
    fn sub(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & !rhs.0)
    }
}

impl std::ops::BitOrAssign for PointSet {
    fn bitor_assign(&mut self, rhs: PointSet) {
        self.0 |= rhs.0;
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let diff = self.0 ^ other.0;
        let t = diff.trailing_zeros();
        let above = if t >= 31 { 0 } else { u32::MAX << (t + 1) };
        // The set holding the smallest differing label wins, unless the other set stops there.
        if self.0 & (1 << t) != 0 {
            if other.0 & above == 0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else if self.0 & above == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
