//! Points, lines, a-lines and hyperplanes of AG(4,3).
//!
//! A point is a vector `(x1, x2, x3, x4)` over GF(3), stored as the
//! big-endian base-3 index `27*x1 + 9*x2 + 3*x3 + x4`. Three distinct points
//! are collinear exactly when their vectors sum to zero, so every pair of
//! points has a unique third point completing a line with it.
//!
//! All incidence tables are built once and shared read-only.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const NUM_POINTS: usize = 81;
pub const NUM_LINES: usize = 1080;
pub const NUM_HYPERPLANES: usize = 120;
pub const NUM_PARALLEL_CLASSES: usize = 40;
/// Lines through any fixed point.
pub const LINES_PER_POINT: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("a line needs two distinct points, got {0} twice")]
    InvalidPair(Point),
    #[error("point index {0} is outside 0..81")]
    OutOfRange(usize),
    #[error("cannot parse {0:?} as a point (expected an index 0..80 or four digits 0-2)")]
    BadPoint(String),
    #[error("point {0} listed twice")]
    Duplicate(Point),
    #[error("grid row/column ({0}, {1}) is outside the 9x9 board")]
    BadCell(usize, usize),
}

const fn digits_of(idx: usize) -> [u8; 4] {
    [
        (idx / 27 % 3) as u8,
        (idx / 9 % 3) as u8,
        (idx / 3 % 3) as u8,
        (idx % 3) as u8,
    ]
}

const fn index_of(d: [u8; 4]) -> usize {
    27 * d[0] as usize + 9 * d[1] as usize + 3 * d[2] as usize + d[3] as usize
}

const fn build_third_table() -> [[u8; NUM_POINTS]; NUM_POINTS] {
    let mut table = [[0u8; NUM_POINTS]; NUM_POINTS];
    let mut p = 0;
    while p < NUM_POINTS {
        let a = digits_of(p);
        let mut q = 0;
        while q < NUM_POINTS {
            let b = digits_of(q);
            let mut r = [0u8; 4];
            let mut k = 0;
            while k < 4 {
                r[k] = (6 - a[k] - b[k]) % 3;
                k += 1;
            }
            table[p][q] = index_of(r) as u8;
            q += 1;
        }
        p += 1;
    }
    table
}

/// `THIRD[p][q]` is `-(p + q)`; for `p != q` that is the third point of their line.
static THIRD: [[u8; NUM_POINTS]; NUM_POINTS] = build_third_table();

/// A point of AG(4,3).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Point(u8);

impl Point {
    pub const ORIGIN: Point = Point(0);

    pub fn new(index: usize) -> Result<Self, GeomError> {
        if index < NUM_POINTS {
            Ok(Point(index as u8))
        } else {
            Err(GeomError::OutOfRange(index))
        }
    }

    /// Caller guarantees `index < 81`.
    pub(crate) const fn from_index_unchecked(index: usize) -> Self {
        Point(index as u8)
    }

    pub fn from_digits(d: [u8; 4]) -> Result<Self, GeomError> {
        if d.iter().any(|&x| x > 2) {
            return Err(GeomError::BadPoint(format!("{d:?}")));
        }
        Ok(Point(index_of(d) as u8))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn digits(self) -> [u8; 4] {
        digits_of(self.0 as usize)
    }

    /// All 81 points in index order.
    pub fn all() -> impl Iterator<Item = Point> {
        (0..NUM_POINTS as u8).map(Point)
    }

    pub fn add(self, other: Point) -> Point {
        let (a, b) = (self.digits(), other.digits());
        Point(index_of([
            (a[0] + b[0]) % 3,
            (a[1] + b[1]) % 3,
            (a[2] + b[2]) % 3,
            (a[3] + b[3]) % 3,
        ]) as u8)
    }

    pub fn neg(self) -> Point {
        let a = self.digits();
        Point(index_of([
            (3 - a[0]) % 3,
            (3 - a[1]) % 3,
            (3 - a[2]) % 3,
            (3 - a[3]) % 3,
        ]) as u8)
    }

    pub fn sub(self, other: Point) -> Point {
        self.add(other.neg())
    }

    pub fn scale(self, k: u8) -> Point {
        let a = self.digits();
        let k = k % 3;
        Point(index_of([a[0] * k % 3, a[1] * k % 3, a[2] * k % 3, a[3] * k % 3]) as u8)
    }

    pub fn digit_string(self) -> String {
        self.digits().iter().map(|d| char::from(b'0' + d)).collect()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.0, self.digit_string())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u8> for Point {
    type Error = GeomError;
    fn try_from(v: u8) -> Result<Self, Self::Error> {
        Point::new(v as usize)
    }
}

impl From<Point> for u8 {
    fn from(p: Point) -> u8 {
        p.0
    }
}

impl FromStr for Point {
    type Err = GeomError;

    /// Accepts either an index (`"57"`) or four base-3 digits (`"2010"`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || GeomError::BadPoint(s.to_string());
        if t.len() == 4 && t.bytes().all(|b| (b'0'..=b'2').contains(&b)) {
            let b = t.as_bytes();
            return Point::from_digits([b[0] - b'0', b[1] - b'0', b[2] - b'0', b[3] - b'0']);
        }
        let idx: usize = t.parse().map_err(|_| bad())?;
        Point::new(idx)
    }
}

/// Third point of the line through two distinct points.
pub fn third_point(p: Point, q: Point) -> Result<Point, GeomError> {
    if p == q {
        return Err(GeomError::InvalidPair(p));
    }
    Ok(third(p, q))
}

/// Unchecked variant for hot loops; meaningless when `p == q`.
#[inline(always)]
pub(crate) fn third(p: Point, q: Point) -> Point {
    Point(THIRD[p.0 as usize][q.0 as usize])
}

/// Rank over GF(3) of the given vectors.
pub fn rank(vectors: &[Point]) -> usize {
    let mut rows: Vec<[u8; 4]> = vectors.iter().map(|v| v.digits()).collect();
    let mut rank = 0;
    for col in 0..4 {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        // Over GF(3) every nonzero element is its own inverse.
        let inv = rows[rank][col];
        rows[rank] = rows[rank].map(|x| x * inv % 3);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for k in 0..4 {
                    rows[r][k] = (rows[r][k] + 3 * 3 - f * rows[rank][k]) % 3;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Position of `p` on the 9x9 board: 3x3 blocks indexed by `(x1, x2)`,
/// cells inside a block by `(x3, x4)`.
pub fn grid_coords(p: Point) -> (usize, usize) {
    let d = p.digits();
    (3 * d[0] as usize + d[2] as usize, 3 * d[1] as usize + d[3] as usize)
}

pub fn from_grid(row: usize, col: usize) -> Result<Point, GeomError> {
    if row >= 9 || col >= 9 {
        return Err(GeomError::BadCell(row, col));
    }
    Point::from_digits([(row / 3) as u8, (col / 3) as u8, (row % 3) as u8, (col % 3) as u8])
}

const FULL_MASK: u128 = (1u128 << NUM_POINTS) - 1;

/// A subset of the 81 points, as a membership mask.
///
/// Ordering compares the sorted index sequences lexicographically, so among
/// sets of equal size the one holding the smallest differing point is smaller.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct PointSet(u128);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);
    pub const FULL: PointSet = PointSet(FULL_MASK);

    pub fn from_bits(bits: u128) -> Self {
        PointSet(bits & FULL_MASK)
    }

    #[inline]
    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(p: Point) -> Self {
        PointSet(1u128 << p.0)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self, GeomError> {
        let mut s = PointSet::EMPTY;
        for i in indices {
            let p = Point::new(i)?;
            if s.contains(p) {
                return Err(GeomError::Duplicate(p));
            }
            s.insert(p);
        }
        Ok(s)
    }

    #[inline]
    pub fn contains(self, p: Point) -> bool {
        self.0 >> p.0 & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, p: Point) {
        self.0 |= 1u128 << p.0;
    }

    #[inline]
    pub fn remove(&mut self, p: Point) {
        self.0 &= !(1u128 << p.0);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn complement(self) -> PointSet {
        PointSet(!self.0 & FULL_MASK)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: PointSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min(self) -> Option<Point> {
        (self.0 != 0).then(|| Point(self.0.trailing_zeros() as u8))
    }

    pub fn iter(self) -> PointSetIter {
        PointSetIter(self.0)
    }

    pub fn indices(self) -> Vec<u8> {
        self.iter().map(|p| p.0).collect()
    }

    /// 81 characters of `0`/`1` in index order.
    pub fn to_bitstring(self) -> String {
        (0..NUM_POINTS)
            .map(|i| if self.0 >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn from_bitstring(s: &str) -> Result<Self, GeomError> {
        let t = s.trim();
        if t.len() != NUM_POINTS || !t.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(GeomError::BadPoint(s.to_string()));
        }
        Ok(PointSet(
            t.bytes()
                .enumerate()
                .filter(|&(_, b)| b == b'1')
                .fold(0u128, |m, (i, _)| m | 1u128 << i),
        ))
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let k = diff.trailing_zeros();
        // Both sequences agree below k; exactly one of them holds k.
        let (holder, other_rest) = if self.0 >> k & 1 == 1 {
            (Ordering::Less, other.0 >> k)
        } else {
            (Ordering::Greater, self.0 >> k)
        };
        if other_rest == 0 {
            // The set lacking k ends before k, so it is a proper prefix.
            holder.reverse()
        } else {
            holder
        }
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl BitOr for PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: PointSet) -> PointSet {
        self.union(rhs)
    }
}

impl BitAnd for PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: PointSet) -> PointSet {
        self.intersection(rhs)
    }
}

impl Sub for PointSet {
    type Output = PointSet;
    fn sub(self, rhs: PointSet) -> PointSet {
        self.difference(rhs)
    }
}

impl Not for PointSet {
    type Output = PointSet;
    fn not(self) -> PointSet {
        self.complement()
    }
}

impl FromIterator<Point> for PointSet {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        let mut s = PointSet::EMPTY;
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl IntoIterator for PointSet {
    type Item = Point;
    type IntoIter = PointSetIter;
    fn into_iter(self) -> PointSetIter {
        self.iter()
    }
}

pub struct PointSetIter(u128);

impl Iterator for PointSetIter {
    type Item = Point;

    #[inline]
    fn next(&mut self) -> Option<Point> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(Point(i as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for PointSetIter {}

impl TryFrom<Vec<u8>> for PointSet {
    type Error = GeomError;
    fn try_from(v: Vec<u8>) -> Result<Self, Self::Error> {
        PointSet::from_indices(v.into_iter().map(usize::from))
    }
}

impl From<PointSet> for Vec<u8> {
    fn from(s: PointSet) -> Vec<u8> {
        s.indices()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|p| p.0)).finish()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for PointSet {
    type Err = GeomError;

    /// Either an 81-character 0/1 string or a list of points separated by
    /// commas and/or whitespace (brackets are ignored).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.len() == NUM_POINTS && t.bytes().all(|b| b == b'0' || b == b'1') {
            return PointSet::from_bitstring(t);
        }
        let mut set = PointSet::EMPTY;
        for tok in t
            .split(|c: char| c == ',' || c.is_whitespace() || c == '[' || c == ']')
            .filter(|tok| !tok.is_empty())
        {
            let p: Point = tok.parse()?;
            if set.contains(p) {
                return Err(GeomError::Duplicate(p));
            }
            set.insert(p);
        }
        Ok(set)
    }
}

/// An unordered triple of collinear points, stored sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Line {
    pub points: [Point; 3],
}

impl Line {
    pub fn through(p: Point, q: Point) -> Result<Line, GeomError> {
        let r = third_point(p, q)?;
        let mut pts = [p, q, r];
        pts.sort();
        Ok(Line { points: pts })
    }

    pub fn to_set(self) -> PointSet {
        self.points.into_iter().collect()
    }
}

/// Every line of AG(4,3), sorted.
pub fn all_lines() -> &'static [Line] {
    static LINES: OnceLock<Vec<Line>> = OnceLock::new();
    LINES.get_or_init(|| {
        let mut lines = Vec::with_capacity(NUM_LINES);
        for p in Point::all() {
            for q in Point::all().filter(|&q| q > p) {
                let r = third(p, q);
                if r > q {
                    lines.push(Line { points: [p, q, r] });
                }
            }
        }
        lines
    })
}

/// A pair `{p, q}` that completes a line with a fixed point, the anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ALine {
    pub anchor: Point,
    /// Stored with `pair.0 < pair.1`.
    pub pair: (Point, Point),
}

impl ALine {
    pub fn new(anchor: Point, p: Point) -> Result<ALine, GeomError> {
        let q = third_point(anchor, p)?;
        Ok(ALine { anchor, pair: (p.min(q), p.max(q)) })
    }

    pub fn points(self) -> PointSet {
        PointSet::singleton(self.pair.0) | PointSet::singleton(self.pair.1)
    }

    /// `pair.0 - anchor`; the pair is `anchor ± direction`.
    pub fn direction(self) -> Point {
        self.pair.0.sub(self.anchor)
    }
}

struct ALineTables {
    lines: Vec<[ALine; LINES_PER_POINT]>,
    // slot[a][p]: position of p's a-line in lines[a]; 255 for p == a
    slot: Vec<[u8; NUM_POINTS]>,
}

fn aline_tables() -> &'static ALineTables {
    static TABLES: OnceLock<ALineTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut lines = Vec::with_capacity(NUM_POINTS);
        let mut slot = Vec::with_capacity(NUM_POINTS);
        for a in Point::all() {
            let mut row = [u8::MAX; NUM_POINTS];
            let mut ls = Vec::with_capacity(LINES_PER_POINT);
            for p in Point::all().filter(|&p| p != a) {
                let q = third(a, p);
                if p < q {
                    row[p.index()] = ls.len() as u8;
                    row[q.index()] = ls.len() as u8;
                    ls.push(ALine { anchor: a, pair: (p, q) });
                }
            }
            lines.push(ls.try_into().expect("40 lines through every point"));
            slot.push(row);
        }
        ALineTables { lines, slot }
    })
}

/// The 40 a-lines through `anchor`, ordered by their smaller point.
pub fn alines_through(anchor: Point) -> &'static [ALine; LINES_PER_POINT] {
    &aline_tables().lines[anchor.index()]
}

/// Slot (0..40) in [`alines_through`] of the a-line containing `p`.
pub fn aline_slot(anchor: Point, p: Point) -> Option<usize> {
    let s = aline_tables().slot[anchor.index()][p.index()];
    (s != u8::MAX).then_some(s as usize)
}

/// The affine hyperplane `{p : normal . p = level}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Hyperplane {
    /// First nonzero coordinate is 1.
    pub normal: [u8; 4],
    pub level: u8,
    pub points: PointSet,
    /// Index of the parallel class (0..40).
    pub class: usize,
}

impl Hyperplane {
    pub fn contains(&self, p: Point) -> bool {
        dot(self.normal, p) == self.level
    }
}

fn dot(normal: [u8; 4], p: Point) -> u8 {
    let d = p.digits();
    (0..4).map(|k| normal[k] * d[k]).sum::<u8>() % 3
}

/// All 120 hyperplanes; class `c` occupies positions `3c..3c+3`, by level.
pub fn hyperplanes() -> &'static [Hyperplane] {
    static HYPERPLANES: OnceLock<Vec<Hyperplane>> = OnceLock::new();
    HYPERPLANES.get_or_init(|| {
        let normals: Vec<[u8; 4]> = (1..NUM_POINTS)
            .map(digits_of)
            .filter(|d| d.iter().find(|&&x| x != 0) == Some(&1))
            .collect();
        let mut out = Vec::with_capacity(NUM_HYPERPLANES);
        for (class, normal) in normals.into_iter().enumerate() {
            for level in 0..3 {
                let points = Point::all().filter(|&p| dot(normal, p) == level).collect();
                out.push(Hyperplane { normal, level, points, class });
            }
        }
        out
    })
}

/// The three mutually parallel hyperplanes of the class containing `h`.
pub fn parallel_class(h: &Hyperplane) -> &'static [Hyperplane] {
    &hyperplanes()[3 * h.class..3 * h.class + 3]
}

pub fn parallel_classes() -> impl Iterator<Item = &'static [Hyperplane]> {
    hyperplanes().chunks_exact(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(d: [u8; 4]) -> Point {
        Point::from_digits(d).unwrap()
    }

    #[test]
    fn third_point_examples() {
        assert_eq!(third_point(pt([0, 0, 0, 0]), pt([0, 0, 0, 1])), Ok(pt([0, 0, 0, 2])));
        assert_eq!(third_point(pt([1, 0, 0, 0]), pt([0, 1, 0, 0])), Ok(pt([2, 2, 0, 0])));
        assert_eq!(
            third_point(pt([1, 1, 1, 1]), pt([1, 1, 1, 1])),
            Err(GeomError::InvalidPair(pt([1, 1, 1, 1])))
        );
    }

    #[test]
    fn third_point_is_an_involution_on_lines() {
        for p in Point::all() {
            for q in Point::all().filter(|&q| q != p) {
                let r = third_point(p, q).unwrap();
                assert!(r != p && r != q);
                assert_eq!(third_point(q, p).unwrap(), r);
                assert_eq!(third_point(p, r).unwrap(), q);
            }
        }
    }

    #[test]
    fn line_census() {
        let lines = all_lines();
        assert_eq!(lines.len(), NUM_LINES);
        let mut per_point = [0usize; NUM_POINTS];
        for l in lines {
            let s: [u8; 4] = (0..4)
                .map(|k| l.points.iter().map(|p| p.digits()[k]).sum::<u8>() % 3)
                .collect::<Vec<_>>()
                .try_into()
                .unwrap();
            assert_eq!(s, [0; 4]);
            for p in l.points {
                per_point[p.index()] += 1;
            }
        }
        assert!(per_point.iter().all(|&c| c == 40));
        let distinct: std::collections::HashSet<_> = lines.iter().collect();
        assert_eq!(distinct.len(), NUM_LINES);
    }

    #[test]
    fn every_pair_spans_a_listed_line() {
        let lines: std::collections::HashSet<Line> = all_lines().iter().copied().collect();
        for p in Point::all() {
            for q in Point::all().filter(|&q| q != p) {
                assert!(lines.contains(&Line::through(p, q).unwrap()));
            }
        }
    }

    #[test]
    fn alines_partition_the_other_points() {
        for a in Point::all() {
            let ls = alines_through(a);
            let mut seen = PointSet::EMPTY;
            for l in ls {
                assert_eq!(l.anchor, a);
                assert!(seen.is_disjoint(l.points()));
                assert_eq!(third_point(l.pair.0, l.pair.1).unwrap(), a);
                seen = seen | l.points();
            }
            assert_eq!(seen, PointSet::FULL - PointSet::singleton(a));
            // Pairs are the 2-cycles of x -> 2x + 2a = -x - a.
            for p in Point::all().filter(|&p| p != a) {
                let image = p.scale(2).add(a.scale(2));
                let slot = aline_slot(a, p).unwrap();
                let l = ls[slot];
                let partner = if l.pair.0 == p { l.pair.1 } else { l.pair.0 };
                assert_eq!(image, partner);
            }
        }
    }

    #[test]
    fn aline_example_through_all_ones() {
        let a = pt([1, 1, 1, 1]);
        let l = alines_through(a)[aline_slot(a, Point::ORIGIN).unwrap()];
        assert_eq!(l.pair, (Point::ORIGIN, pt([2, 2, 2, 2])));
    }

    #[test]
    fn hyperplane_census() {
        let hs = hyperplanes();
        assert_eq!(hs.len(), NUM_HYPERPLANES);
        for class in parallel_classes() {
            assert_eq!(class.len(), 3);
            let sizes: Vec<usize> = class.iter().map(|h| h.points.len()).collect();
            assert_eq!(sizes, vec![27, 27, 27]);
            assert_eq!(class[0].points | class[1].points | class[2].points, PointSet::FULL);
            assert_eq!(parallel_class(&class[1]), class);
        }
        for h in hs {
            for p in Point::all() {
                assert_eq!(h.points.contains(p), h.contains(p));
            }
        }
    }

    #[test]
    fn lines_meet_parallel_classes_in_3_0_0_or_1_1_1() {
        for l in all_lines() {
            let set = l.to_set();
            let mut inside = 0;
            for class in parallel_classes() {
                let mut counts: Vec<usize> =
                    class.iter().map(|h| (h.points & set).len()).collect();
                counts.sort();
                assert!(counts == [0, 0, 3] || counts == [1, 1, 1], "{counts:?}");
                if counts == [0, 0, 3] {
                    inside += 1;
                }
            }
            assert_eq!(inside, 13);
        }
    }

    #[test]
    fn hyperplanes_are_line_closed() {
        for h in hyperplanes() {
            for p in h.points {
                for q in h.points.iter().filter(|&q| q > p) {
                    assert!(h.points.contains(third(p, q)));
                }
            }
        }
    }

    #[test]
    fn ranks() {
        let e: Vec<Point> = [27, 9, 3, 1].iter().map(|&i| Point::new(i).unwrap()).collect();
        assert_eq!(rank(&e), 4);
        assert_eq!(rank(&e[..2]), 2);
        let dependent = [e[0], e[1], e[0].add(e[1].scale(2))];
        assert_eq!(rank(&dependent), 2);
        assert_eq!(rank(&[Point::ORIGIN]), 0);
        assert_eq!(rank(&[Point::new(80).unwrap(), Point::new(40).unwrap()]), 1);
    }

    #[test]
    fn vectors_sum_to_zero() {
        let total = Point::all().fold(Point::ORIGIN, Point::add);
        assert_eq!(total, Point::ORIGIN);
    }

    #[test]
    fn grid_layout() {
        assert_eq!(grid_coords(Point::ORIGIN), (0, 0));
        assert_eq!(grid_coords(pt([2, 2, 2, 2])), (8, 8));
        let cells: std::collections::HashSet<_> = Point::all().map(grid_coords).collect();
        assert_eq!(cells.len(), 81);
        for p in Point::all() {
            let (r, c) = grid_coords(p);
            assert_eq!(from_grid(r, c).unwrap(), p);
        }
        assert!(from_grid(9, 0).is_err());
    }

    #[test]
    fn point_text_forms() {
        assert_eq!("57".parse::<Point>().unwrap(), Point::new(57).unwrap());
        assert_eq!("2010".parse::<Point>().unwrap(), Point::new(57).unwrap());
        assert_eq!(Point::new(57).unwrap().digit_string(), "2010");
        assert!("81".parse::<Point>().is_err());
        assert!("2013".parse::<Point>().is_err());
        assert!("x".parse::<Point>().is_err());
    }

    #[test]
    fn point_set_text_and_json() {
        let s: PointSet = "[3, 1, 0022]".parse().unwrap();
        assert_eq!(s.indices(), vec![1, 3, 8]);
        assert_eq!(s.to_bitstring().len(), 81);
        assert_eq!(PointSet::from_bitstring(&s.to_bitstring()).unwrap(), s);
        assert_eq!(s.to_bitstring().parse::<PointSet>().unwrap(), s);
        assert_eq!(serde_json_like(s), "[1,3,8]");
        assert!(matches!("1,1".parse::<PointSet>(), Err(GeomError::Duplicate(_))));
        assert!(PointSet::try_from(vec![80u8, 81]).is_err());
    }

    fn serde_json_like(s: PointSet) -> String {
        let v: Vec<u8> = s.into();
        format!("{v:?}").replace(' ', "")
    }

    #[test]
    fn lexicographic_order() {
        let set = |v: &[usize]| PointSet::from_indices(v.iter().copied()).unwrap();
        assert!(set(&[1, 5]) < set(&[1, 6]));
        assert!(set(&[1, 5]) < set(&[2]));
        assert!(set(&[1]) < set(&[1, 2]));
        assert!(set(&[]) < set(&[0]));
        assert!(set(&[0, 80]) < set(&[1, 2]));
        assert_eq!(set(&[4, 7]).cmp(&set(&[4, 7])), std::cmp::Ordering::Equal);
    }

    #[test]
    fn set_algebra() {
        let a = PointSet::from_indices([0, 1, 2, 80]).unwrap();
        let b = PointSet::from_indices([2, 3]).unwrap();
        assert_eq!((a | b).len(), 5);
        assert_eq!((a & b).indices(), vec![2]);
        assert_eq!((a - b).len(), 3);
        assert_eq!((!a).len(), 77);
        assert_eq!(!!a, a);
        assert_eq!(a.min(), Some(Point::ORIGIN));
        assert!(PointSet::EMPTY.min().is_none());
    }
}
