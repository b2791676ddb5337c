//! Finite topological spaces stored as specialization preorders.
//!
//! Convention used throughout the crate: `leq(x, y)` holds when `x` lies in
//! the closure of `{y}`. Open sets are the up-closed sets, the minimal open
//! neighbourhood of `x` is its up-set and the closure of `{y}` is its
//! down-set. Point sets are 64-bit masks, which caps every space (products
//! included) at [`MAX_POINTS`] points.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest number of points a [`FiniteSpace`] or [`PointSet`] can hold.
pub const MAX_POINTS: usize = 64;

#[inline]
fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A subset of the points `0..len` of some ambient space.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointSet {
    len: u8,
    bits: u64,
}

impl PointSet {
    pub fn empty(len: usize) -> Self {
        assert!(len <= MAX_POINTS, "point set length {len} exceeds {MAX_POINTS}");
        PointSet {
            len: len as u8,
            bits: 0,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        s.bits = low_mask(len);
        s
    }

    /// Builds a set from a raw mask; bits at or above `len` are dropped.
    pub fn from_bits(len: usize, bits: u64) -> Self {
        let mut s = Self::empty(len);
        s.bits = bits & low_mask(len);
        s
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(len: usize, points: I) -> Result<Self> {
        if len > MAX_POINTS {
            return Err(Error::TooLarge(len));
        }
        let mut s = Self::empty(len);
        for p in points {
            if p >= len {
                return Err(Error::PointOutOfRange { index: p, len });
            }
            s.bits |= 1 << p;
        }
        Ok(s)
    }

    pub fn singleton(len: usize, p: usize) -> Result<Self> {
        Self::from_points(len, [p])
    }

    /// Size of the ambient space (length of the membership vector).
    pub fn ambient_len(&self) -> usize {
        self.len as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains(&self, p: usize) -> bool {
        p < self.ambient_len() && self.bits >> p & 1 == 1
    }

    pub fn insert(&mut self, p: usize) {
        assert!(p < self.ambient_len(), "point {p} out of range");
        self.bits |= 1 << p;
    }

    pub fn remove(&mut self, p: usize) {
        if p < self.ambient_len() {
            self.bits &= !(1 << p);
        }
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.len, other.len);
        PointSet {
            len: self.len,
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.len, other.len);
        PointSet {
            len: self.len,
            bits: self.bits & other.bits,
        }
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        PointSet {
            len: self.len,
            bits: self.bits & !other.bits,
        }
    }

    pub fn complement(&self) -> PointSet {
        PointSet {
            len: self.len,
            bits: !self.bits & low_mask(self.ambient_len()),
        }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let p = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(p)
            }
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Membership vector read as a binary number with point 0 most
    /// significant. Ordering by this key is lexicographic order on
    /// membership vectors (absent before present).
    pub fn lex_key(&self) -> u64 {
        lex_key(self.ambient_len(), self.bits)
    }
}

#[inline]
pub(crate) fn lex_key(len: usize, bits: u64) -> u64 {
    if len == 0 {
        0
    } else {
        bits.reverse_bits() >> (64 - len)
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.lex_key().cmp(&other.lex_key()))
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl serde::Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PointSet {
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

/// A finite topological space, encoded by its specialization preorder.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    /// `up[x]` = `{y : leq(x, y)}`, the minimal open set of `x`.
    up: Vec<u64>,
    /// `down[y]` = `{x : leq(x, y)}`, the closure of `{y}`.
    down: Vec<u64>,
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteSpace")
            .field("points", &self.len())
            .field("rel", &self.relation_pairs())
            .finish()
    }
}

impl FiniteSpace {
    /// Builds the space whose preorder is the reflexive-transitive closure
    /// of `pairs`, each pair `(i, j)` declaring `leq(i, j)`.
    pub fn from_relation<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut up = Self::raw_relation(n, pairs)?;
        for k in 0..n {
            for i in 0..n {
                if up[i] >> k & 1 == 1 {
                    up[i] |= up[k];
                }
            }
        }
        Ok(Self::from_up_sets(up))
    }

    /// Like [`FiniteSpace::from_relation`] but rejects a relation that is not
    /// already transitively closed. Reflexive pairs are always implied.
    pub fn from_relation_strict<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let up = Self::raw_relation(n, pairs)?;
        for x in 0..n {
            for y in PointSet::from_bits(n, up[x]).iter() {
                let missing = up[y] & !up[x];
                if missing != 0 {
                    return Err(Error::NotTransitive(x, y, missing.trailing_zeros() as usize));
                }
            }
        }
        Ok(Self::from_up_sets(up))
    }

    fn raw_relation<I>(n: usize, pairs: I) -> Result<Vec<u64>>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > MAX_POINTS {
            return Err(Error::TooLarge(n));
        }
        let mut up: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for (i, j) in pairs {
            for p in [i, j] {
                if p >= n {
                    return Err(Error::PointOutOfRange { index: p, len: n });
                }
            }
            up[i] |= 1 << j;
        }
        Ok(up)
    }

    /// `up` must already be a reflexive, transitive relation.
    pub(crate) fn from_up_sets(up: Vec<u64>) -> Self {
        let n = up.len();
        let mut down = vec![0u64; n];
        for (x, &u) in up.iter().enumerate() {
            for y in PointSet::from_bits(n, u).iter() {
                down[y] |= 1 << x;
            }
        }
        FiniteSpace { up, down }
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_relation(n, []).expect("discrete space size")
    }

    pub fn indiscrete(n: usize) -> Self {
        let pairs = (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
        Self::from_relation(n, pairs).expect("indiscrete space size")
    }

    /// Sierpiński space: point 1 is open, `0 ∈ cl{1}`.
    pub fn sierpinski() -> Self {
        Self::from_relation(2, [(0, 1)]).unwrap()
    }

    /// The four-point pseudocircle: 0 and 1 are open points, the minimal
    /// opens of 2 and 3 are `{0,1,2}` and `{0,1,3}`.
    pub fn pseudocircle() -> Self {
        Self::from_relation(4, [(2, 0), (2, 1), (3, 0), (3, 1)]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                index: x,
                len: self.len(),
            })
        }
    }

    /// `leq(x, y)`: x lies in the closure of {y}. Panics on out-of-range points.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        assert!(y < self.len(), "point {y} out of range");
        self.up[x] >> y & 1 == 1
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Raw up-set mask of `x`.
    #[inline]
    pub fn up_bits(&self, x: usize) -> u64 {
        self.up[x]
    }

    /// Raw down-set mask of `y`.
    #[inline]
    pub fn down_bits(&self, y: usize) -> u64 {
        self.down[y]
    }

    /// The smallest open set containing `x`.
    pub fn minimal_open(&self, x: usize) -> Result<PointSet> {
        self.check_point(x)?;
        Ok(PointSet::from_bits(self.len(), self.up[x]))
    }

    pub fn is_open(&self, s: &PointSet) -> bool {
        s.iter().all(|x| self.up[x] & !s.bits() == 0)
    }

    /// Every open set, in lexicographic order of membership vectors.
    pub fn all_opens(&self) -> Vec<PointSet> {
        let n = self.len();
        assert!(n < 32, "all_opens enumerates 2^n subsets; n = {n} is too large");
        let mut opens: Vec<PointSet> = (0..1u64 << n)
            .map(|bits| PointSet::from_bits(n, bits))
            .filter(|s| self.is_open(s))
            .collect();
        opens.sort();
        opens
    }

    /// Smallest closed (down-closed) superset of `s`.
    pub fn closure(&self, s: &PointSet) -> PointSet {
        let bits = s.iter().fold(0u64, |acc, y| acc | self.down[y]);
        PointSet::from_bits(self.len(), bits)
    }

    pub(crate) fn closure_bits(&self, mut bits: u64) -> u64 {
        let mut out = 0;
        while bits != 0 {
            let y = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out |= self.down[y];
        }
        out
    }

    pub fn is_closed(&self, s: &PointSet) -> bool {
        self.closure_bits(s.bits()) == s.bits()
    }

    /// Connectedness of the comparability graph on `s`. The empty set counts
    /// as path-connected.
    pub fn is_path_connected(&self, s: &PointSet) -> bool {
        self.fence_connected_bits(s.bits())
    }

    pub(crate) fn fence_connected_bits(&self, s: u64) -> bool {
        if s == 0 {
            return true;
        }
        let start = s.trailing_zeros() as usize;
        let mut reached = 1u64 << start;
        let mut frontier = reached;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let p = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= (self.up[p] | self.down[p]) & s;
            }
            frontier = next & !reached;
            reached |= next;
        }
        reached == s
    }

    /// Comparability components of `s`, ordered by least member.
    pub fn components(&self, s: &PointSet) -> Vec<PointSet> {
        let mut rest = s.bits();
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest.trailing_zeros() as usize;
            let mut reached = 1u64 << start;
            loop {
                let grown = PointSet::from_bits(self.len(), reached)
                    .iter()
                    .fold(reached, |acc, p| acc | ((self.up[p] | self.down[p]) & rest));
                if grown == reached {
                    break;
                }
                reached = grown;
            }
            out.push(PointSet::from_bits(self.len(), reached));
            rest &= !reached;
        }
        out
    }

    /// The subspace on `s`. Point `k` of the result is the `k`-th smallest
    /// member of `s`; the returned vector maps new indices to old ones.
    pub fn subspace(&self, s: &PointSet) -> (FiniteSpace, Vec<usize>) {
        let members = s.to_vec();
        let up = members
            .iter()
            .map(|&x| {
                members
                    .iter()
                    .enumerate()
                    .filter(|&(_, &y)| self.leq(x, y))
                    .fold(0u64, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        (FiniteSpace::from_up_sets(up), members)
    }

    /// Non-reflexive pairs of the preorder, sorted.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        self.points()
            .flat_map(|x| {
                PointSet::from_bits(self.len(), self.up[x])
                    .iter()
                    .filter(move |&y| y != x)
                    .map(move |y| (x, y))
            })
            .collect()
    }
}

/// Whether `map` (point `i` of `domain` goes to `map[i]` of `codomain`) is
/// continuous, i.e. monotone for the specialization preorders.
pub fn is_continuous(domain: &FiniteSpace, codomain: &FiniteSpace, map: &[usize]) -> Result<bool> {
    if map.len() != domain.len() {
        return Err(Error::Precondition(format!(
            "map has {} entries but the domain has {} points",
            map.len(),
            domain.len()
        )));
    }
    for &image in map {
        codomain.check_point(image)?;
    }
    Ok(domain.points().all(|x| {
        PointSet::from_bits(domain.len(), domain.up[x])
            .iter()
            .all(|y| codomain.leq(map[x], map[y]))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, pts: &[usize]) -> PointSet {
        PointSet::from_points(n, pts.iter().copied()).unwrap()
    }

    #[test]
    fn sierpinski_minimal_opens() {
        let s2 = FiniteSpace::sierpinski();
        assert_eq!(s2.minimal_open(0).unwrap(), set(2, &[0, 1]));
        assert_eq!(s2.minimal_open(1).unwrap(), set(2, &[1]));
        assert_eq!(
            s2.minimal_open(2),
            Err(Error::PointOutOfRange { index: 2, len: 2 })
        );
    }

    #[test]
    fn discrete_minimal_open_is_singleton() {
        let d = FiniteSpace::discrete(2);
        assert_eq!(d.minimal_open(0).unwrap(), set(2, &[0]));
    }

    #[test]
    fn opens_of_small_spaces() {
        assert_eq!(
            FiniteSpace::sierpinski().all_opens(),
            vec![set(2, &[]), set(2, &[1]), set(2, &[0, 1])]
        );
        assert_eq!(FiniteSpace::discrete(2).all_opens().len(), 4);
        assert_eq!(
            FiniteSpace::indiscrete(2).all_opens(),
            vec![set(2, &[]), set(2, &[0, 1])]
        );
    }

    #[test]
    fn closure_examples() {
        let s2 = FiniteSpace::sierpinski();
        assert_eq!(s2.closure(&set(2, &[1])), set(2, &[0, 1]));
        assert_eq!(s2.closure(&set(2, &[])), set(2, &[]));
        let d = FiniteSpace::discrete(3);
        assert_eq!(d.closure(&set(3, &[0, 2])), set(3, &[0, 2]));
        assert!(s2.is_closed(&set(2, &[0])));
        assert!(!s2.is_closed(&set(2, &[1])));
        assert!(s2.is_closed(&PointSet::full(2)));
    }

    #[test]
    fn path_connectivity_examples() {
        let s2 = FiniteSpace::sierpinski();
        assert!(s2.is_path_connected(&set(2, &[0, 1])));
        assert!(!FiniteSpace::discrete(2).is_path_connected(&set(2, &[0, 1])));
        assert!(s2.is_path_connected(&set(2, &[1])));
        assert!(s2.is_path_connected(&set(2, &[])));
        let p = FiniteSpace::pseudocircle();
        assert!(!p.is_path_connected(&set(4, &[0, 1])));
        assert!(p.is_path_connected(&PointSet::full(4)));
        assert_eq!(p.components(&set(4, &[0, 1])).len(), 2);
    }

    #[test]
    fn continuity_examples() {
        let s2 = FiniteSpace::sierpinski();
        assert!(is_continuous(&s2, &s2, &[0, 1]).unwrap());
        assert!(is_continuous(&s2, &s2, &[1, 1]).unwrap());
        assert!(!is_continuous(&s2, &s2, &[1, 0]).unwrap());
        assert!(is_continuous(&s2, &s2, &[0]).is_err());
        assert!(is_continuous(&s2, &s2, &[0, 5]).is_err());
    }

    #[test]
    fn strict_loader_rejects_open_chains() {
        assert_eq!(
            FiniteSpace::from_relation_strict(3, [(0, 1), (1, 2)]),
            Err(Error::NotTransitive(0, 1, 2))
        );
        let closed = FiniteSpace::from_relation(3, [(0, 1), (1, 2)]).unwrap();
        assert!(closed.leq(0, 2));
        assert_eq!(
            FiniteSpace::from_relation_strict(3, closed.relation_pairs()).unwrap(),
            closed
        );
        assert!(FiniteSpace::from_relation(2, [(0, 2)]).is_err());
    }

    #[test]
    fn subspace_restricts_preorder() {
        let p = FiniteSpace::pseudocircle();
        let (sub, idx) = p.subspace(&set(4, &[0, 2]));
        assert_eq!(idx, vec![0, 2]);
        assert!(sub.leq(1, 0));
        assert!(!sub.leq(0, 1));
    }

    #[test]
    fn lexicographic_order_on_sets() {
        let mut v = vec![set(3, &[0]), set(3, &[2]), set(3, &[1, 2]), set(3, &[])];
        v.sort();
        assert_eq!(v, vec![set(3, &[]), set(3, &[2]), set(3, &[1, 2]), set(3, &[0])]);
    }
}
