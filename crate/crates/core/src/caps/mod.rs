//! Caps, completion counts, anchors and the enumeration of maximal caps.

pub mod lowdim;
pub(crate) mod search;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::gf3geom::{
    alines_through, parallel_classes, third, ALine, Line, Point, PointSet, NUM_PARALLEL_CLASSES, NUM_POINTS,
};
use lowdim::SmallSpace;
use search::{ALineFrame, ALL_SLOTS};

/// Size of every maximal cap in AG(4,3).
pub const MAXIMAL_CAP_SIZE: usize = 20;
/// Maximal caps sharing a fixed anchor.
pub const ANCHORED_MAXIMAL_CAPS: usize = 8424;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CapError {
    #[error("the point set contains a line")]
    NotACap,
    #[error("expected {expected} points, found {found}")]
    WrongSize { expected: usize, found: usize },
    #[error("no point completes lines with all members in disjoint pairs")]
    NoAnchor,
    #[error("several anchor candidates: {0:?}")]
    AmbiguousAnchor(Vec<Point>),
    #[error("dimension {0} is not supported (use 2, 3 or 4)")]
    UnsupportedDimension(usize),
    #[error("non-members of maximal caps do not all complete the same number of lines")]
    IrregularCompletion,
}

/// Whether no three members of `s` are collinear.
pub fn is_cap(s: PointSet) -> bool {
    let mut seen = PointSet::EMPTY;
    for p in s {
        for q in seen {
            if s.contains(third(p, q)) {
                return false;
            }
        }
        seen.insert(p);
    }
    true
}

/// The lines lying entirely inside `s`.
pub fn contained_lines(s: PointSet) -> Vec<Line> {
    let mut out = Vec::new();
    for p in s {
        for q in s.iter().filter(|&q| q > p) {
            let r = third(p, q);
            if r > q && s.contains(r) {
                out.push(Line { points: [p, q, r] });
            }
        }
    }
    out
}

pub fn is_complete_cap(s: PointSet) -> Result<bool, CapError> {
    if !is_cap(s) {
        return Err(CapError::NotACap);
    }
    Ok(completion_counts(s).reach() | s == PointSet::FULL)
}

/// For every point, the number of member pairs whose line passes through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionProfile {
    counts: [u8; NUM_POINTS],
}

impl CompletionProfile {
    pub fn count(&self, p: Point) -> u8 {
        self.counts[p.index()]
    }

    pub fn counts(&self) -> &[u8; NUM_POINTS] {
        &self.counts
    }

    pub fn points_with(&self, k: u8) -> PointSet {
        Point::all().filter(|p| self.counts[p.index()] == k).collect()
    }

    /// Points completing at least one line.
    pub fn reach(&self) -> PointSet {
        Point::all().filter(|p| self.counts[p.index()] > 0).collect()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    /// count value -> number of points outside `s` with that count.
    pub fn histogram(&self, s: PointSet) -> BTreeMap<u8, usize> {
        let mut h = BTreeMap::new();
        for p in s.complement() {
            *h.entry(self.counts[p.index()]).or_insert(0) += 1;
        }
        h
    }

    /// Point -> count for every point outside `s`.
    pub fn to_map(&self, s: PointSet) -> BTreeMap<u8, u8> {
        s.complement().iter().map(|p| (p.index() as u8, self.counts[p.index()])).collect()
    }
}

/// Counts pairs of `s` whose third point lies outside `s`; `s` need not be a cap.
pub fn completion_counts(s: PointSet) -> CompletionProfile {
    let mut counts = [0u8; NUM_POINTS];
    let pts: Vec<Point> = s.iter().collect();
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            let r = third(p, q);
            if !s.contains(r) {
                counts[r.index()] += 1;
            }
        }
    }
    CompletionProfile { counts }
}

pub fn completion_profile(s: PointSet) -> Result<CompletionProfile, CapError> {
    if !is_cap(s) {
        return Err(CapError::NotACap);
    }
    Ok(completion_counts(s))
}

/// Outside points `a` for which `s` is a union of a-lines through `a`.
pub(crate) fn pairing_centres(s: PointSet, profile: &CompletionProfile, pairs: u8) -> Vec<Point> {
    profile
        .points_with(pairs)
        .iter()
        .filter(|&a| !s.contains(a) && s.iter().all(|x| s.contains(third(a, x))))
        .collect()
}

/// The anchor of a 20-point cap.
pub fn find_anchor(s: PointSet) -> Result<Point, CapError> {
    if s.len() != MAXIMAL_CAP_SIZE {
        return Err(CapError::WrongSize { expected: MAXIMAL_CAP_SIZE, found: s.len() });
    }
    let profile = completion_profile(s)?;
    let centres = pairing_centres(s, &profile, (MAXIMAL_CAP_SIZE / 2) as u8);
    match centres.as_slice() {
        [] => Err(CapError::NoAnchor),
        [a] => Ok(*a),
        _ => Err(CapError::AmbiguousAnchor(centres)),
    }
}

/// A 20-point cap together with its anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MaximalCap {
    points: PointSet,
    anchor: Point,
}

impl MaximalCap {
    pub fn new(points: PointSet) -> Result<MaximalCap, CapError> {
        let anchor = find_anchor(points)?;
        Ok(MaximalCap { points, anchor })
    }

    pub(crate) fn from_parts_unchecked(points: PointSet, anchor: Point) -> MaximalCap {
        MaximalCap { points, anchor }
    }

    pub fn points(&self) -> PointSet {
        self.points
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    /// The ten a-lines making up the cap, ordered by smaller point.
    pub fn alines(&self) -> Vec<ALine> {
        alines_through(self.anchor)
            .iter()
            .copied()
            .filter(|l| self.points.contains(l.pair.0))
            .collect()
    }

    pub fn translate(&self, t: Point) -> MaximalCap {
        MaximalCap {
            points: self.points.iter().map(|p| p.add(t)).collect(),
            anchor: self.anchor.add(t),
        }
    }
}

/// Per parallel class, the sizes `|C ∩ H|` of its three hyperplanes, largest first.
pub fn hyperplane_profile(c: &MaximalCap) -> Vec<[u8; 3]> {
    parallel_classes()
        .map(|class| {
            let mut t = [0u8; 3];
            for (k, h) in class.iter().enumerate() {
                t[k] = (h.points & c.points).len() as u8;
            }
            t.sort_unstable_by(|a, b| b.cmp(a));
            t
        })
        .collect()
}

/// Per parallel class, `|C ∩ H|` for the hyperplane through the anchor.
pub fn anchor_hyperplane_sizes(c: &MaximalCap) -> [u8; NUM_PARALLEL_CLASSES] {
    let mut out = [0u8; NUM_PARALLEL_CLASSES];
    for (i, class) in parallel_classes().enumerate() {
        let h = class.iter().find(|h| h.points.contains(c.anchor)).expect("classes cover");
        out[i] = (h.points & c.points).len() as u8;
    }
    out
}

/// Maximal caps anchored at `anchor`, in lexicographic order of point sets.
pub fn enumerate_maximal_caps(anchor: Point) -> impl Iterator<Item = MaximalCap> {
    let frame = ALineFrame::get(anchor);
    frame
        .extensions(0, ALL_SLOTS, MAXIMAL_CAP_SIZE / 2)
        .map(move |m| MaximalCap::from_parts_unchecked(frame.points_of(m), anchor))
}

/// Lexicographically least maximal cap with anchor 0.
pub fn canonical_cap() -> MaximalCap {
    static CANONICAL: OnceLock<MaximalCap> = OnceLock::new();
    *CANONICAL.get_or_init(|| {
        enumerate_maximal_caps(Point::ORIGIN).next().expect("maximal caps exist")
    })
}

/// Maximum cap size in AG(n,3), n in {2, 3, 4}.
///
/// Dimensions 2 and 3 use unrestricted branch and bound over points. In
/// dimension 4 the search runs over unions of a-lines through a fixed anchor.
pub fn max_cap_size(n: usize) -> Result<usize, CapError> {
    match n {
        2 | 3 => Ok(SmallSpace::new(n)?.max_cap_size()),
        4 => {
            let frame = ALineFrame::get(Point::ORIGIN);
            let mut best = 0;
            while frame.extensions(0, ALL_SLOTS, best + 1).next().is_some() {
                best += 1;
            }
            Ok(2 * best)
        }
        _ => Err(CapError::UnsupportedDimension(n)),
    }
}

/// One row of the small-dimension maximal-cap table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionSummary {
    pub dimension: usize,
    pub max_cap_size: usize,
    pub has_anchor: bool,
    /// Lines completed by every non-member, non-anchor point.
    pub constant: u32,
    /// Maximal caps examined.
    pub caps_checked: usize,
}

/// Checks, over every maximal cap through the origin (n = 2, 3) or every
/// maximal cap anchored at the origin (n = 4), that all non-anchor
/// non-members complete the same number of lines.
pub fn completion_summary(n: usize) -> Result<CompletionSummary, CapError> {
    let size = max_cap_size(n)?;
    let caps: Vec<Vec<u32>> = match n {
        2 | 3 => {
            let space = SmallSpace::new(n)?;
            space
                .caps_through_origin(size)
                .into_iter()
                .map(|s| outside_counts(space.completion_counts(s), s))
                .collect()
        }
        _ => enumerate_maximal_caps(Point::ORIGIN)
            .map(|c| {
                let counts = completion_counts(c.points).counts.map(u32::from).to_vec();
                outside_counts(counts, c.points.bits())
            })
            .collect(),
    };
    let mut constant = None;
    let mut has_anchor = None;
    for counts in &caps {
        // counts holds one entry per non-member.
        let mut sorted = counts.clone();
        sorted.sort_unstable();
        let c = sorted[0];
        let top = *sorted.last().unwrap();
        let anchored = top != c;
        // At most one point (the anchor) may stand out.
        if sorted[..sorted.len() - 1].iter().any(|&x| x != c) {
            return Err(CapError::IrregularCompletion);
        }
        if *constant.get_or_insert(c) != c || *has_anchor.get_or_insert(anchored) != anchored {
            return Err(CapError::IrregularCompletion);
        }
    }
    Ok(CompletionSummary {
        dimension: n,
        max_cap_size: size,
        has_anchor: has_anchor.unwrap_or(false),
        constant: constant.unwrap_or(0),
        caps_checked: caps.len(),
    })
}

fn outside_counts(counts: Vec<u32>, set: u128) -> Vec<u32> {
    counts
        .into_iter()
        .enumerate()
        .filter(|&(p, _)| set >> p & 1 == 0)
        .map(|(_, c)| c)
        .collect()
}

/// Lines every non-anchor point outside a maximal cap completes in AG(n,3).
pub fn completion_constant(n: usize) -> Result<u32, CapError> {
    completion_summary(n).map(|s| s.constant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf3geom::Line;

    fn set(v: &[usize]) -> PointSet {
        PointSet::from_indices(v.iter().copied()).unwrap()
    }

    #[test]
    fn empty_and_lines() {
        assert!(is_cap(PointSet::EMPTY));
        assert!(!is_complete_cap(PointSet::EMPTY).unwrap());
        assert!(!is_complete_cap(set(&[5])).unwrap());
        for l in crate::gf3geom::all_lines().iter().take(50) {
            assert!(!is_cap(l.to_set()));
            assert_eq!(contained_lines(l.to_set()), vec![*l]);
        }
        assert_eq!(is_complete_cap(set(&[0, 1, 2])), Err(CapError::NotACap));
    }

    #[test]
    fn two_points_complete_one_line() {
        let s = set(&[4, 70]);
        let prof = completion_profile(s).unwrap();
        assert_eq!(prof.points_with(1).len(), 1);
        assert_eq!(prof.total(), 1);
        let third_pt = Line::through(Point::new(4).unwrap(), Point::new(70).unwrap()).unwrap();
        assert!(third_pt.to_set().contains(prof.points_with(1).min().unwrap()));
    }

    #[test]
    fn canonical_cap_profile() {
        let c = canonical_cap();
        assert_eq!(c.anchor(), Point::ORIGIN);
        assert_eq!(c.points().len(), 20);
        assert!(is_cap(c.points()));
        assert!(is_complete_cap(c.points()).unwrap());
        let prof = completion_profile(c.points()).unwrap();
        let hist = prof.histogram(c.points());
        assert_eq!(hist, BTreeMap::from([(3, 60), (10, 1)]));
        assert_eq!(prof.count(Point::ORIGIN), 10);
        assert_eq!(prof.total(), 190);
        assert_eq!(c.alines().len(), 10);
        for l in c.alines() {
            assert_eq!(third(l.pair.0, l.pair.1), Point::ORIGIN);
        }
    }

    #[test]
    fn canonical_cap_is_lexicographically_least() {
        // Oracle: a plain point-level search for the least 20-cap with
        // anchor 0, deciding points in index order, include first.
        fn least(next: usize, s: PointSet) -> Option<PointSet> {
            if s.len() == 20 {
                return (find_anchor(s) == Ok(Point::ORIGIN)).then_some(s);
            }
            if next == NUM_POINTS {
                return None;
            }
            let p = Point::new(next).unwrap();
            let partner = third(Point::ORIGIN, p);
            if p == Point::ORIGIN || partner < p {
                return least(next + 1, s);
            }
            let with = s | PointSet::singleton(p) | PointSet::singleton(partner);
            if is_cap(with) {
                if let Some(found) = least(next + 1, with) {
                    return Some(found);
                }
            }
            least(next + 1, s)
        }
        let oracle = least(1, PointSet::EMPTY).unwrap();
        assert_eq!(canonical_cap().points(), oracle);
    }

    #[test]
    fn anchor_detection() {
        let c = canonical_cap();
        assert_eq!(find_anchor(c.points()), Ok(Point::ORIGIN));
        let t = Point::new(50).unwrap();
        let moved = c.translate(t);
        assert_eq!(find_anchor(moved.points()), Ok(t));
        assert_eq!(MaximalCap::new(moved.points()).unwrap(), moved);

        // Swap one member for an outside point that completes a line.
        let mut bad = c.points();
        let out = completion_profile(c.points()).unwrap().points_with(3).min().unwrap();
        bad.remove(bad.min().unwrap());
        bad.insert(out);
        let err = find_anchor(bad).unwrap_err();
        assert!(matches!(err, CapError::NotACap | CapError::NoAnchor));

        let nineteen = c.points() - PointSet::singleton(c.points().min().unwrap());
        assert!(matches!(find_anchor(nineteen), Err(CapError::WrongSize { .. })));
    }

    #[test]
    fn twenty_point_non_cap() {
        let mut s = crate::gf3geom::all_lines()[0].to_set();
        for p in Point::all() {
            if s.len() == 20 {
                break;
            }
            s.insert(p);
        }
        assert_eq!(find_anchor(s), Err(CapError::NotACap));
    }

    #[test]
    fn hyperplane_triples_of_canonical_cap() {
        let c = canonical_cap();
        let prof = hyperplane_profile(&c);
        assert_eq!(prof.len(), 40);
        for t in &prof {
            assert!(*t == [9, 9, 2] || *t == [8, 6, 6], "{t:?}");
            assert_eq!(t.iter().map(|&x| x as usize).sum::<usize>(), 20);
        }
        assert!(anchor_hyperplane_sizes(&c).iter().all(|&s| s == 2 || s == 8));
    }

    #[test]
    fn table_rows() {
        assert_eq!(max_cap_size(2), Ok(4));
        assert_eq!(max_cap_size(3), Ok(9));
        assert_eq!(max_cap_size(5), Err(CapError::UnsupportedDimension(5)));
        let s2 = completion_summary(2).unwrap();
        assert_eq!((s2.constant, s2.has_anchor), (1, true));
        let s3 = completion_summary(3).unwrap();
        assert_eq!((s3.constant, s3.has_anchor), (2, false));
        assert!(s3.caps_checked > 0);
    }
}
