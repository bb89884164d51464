//! Demicaps: five a-lines through a common anchor, no four of them in one
//! hyperplane.
//!
//! Every maximal cap splits into two complementary demicaps in 36 ways, and
//! each split determines a disjoint maximal cap: the points completing
//! exactly one line with each half.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::caps::search::{ALineFrame, SlotMask, ALL_SLOTS};
use crate::caps::{completion_counts, is_cap, pairing_centres, MaximalCap, MAXIMAL_CAP_SIZE};
use crate::gf3geom::{alines_through, hyperplanes, rank, ALine, Point, PointSet, LINES_PER_POINT};

pub const DEMICAP_SIZE: usize = 10;
/// Demicaps sharing a fixed anchor.
pub const ANCHORED_DEMICAPS: usize = 101_088;
/// 5-subsets of the 40 a-lines through a point.
pub const ALINE_5_SUBSETS: usize = 658_008;
pub const DEMICAPS_PER_CAP: usize = 72;
pub const DECOMPOSITIONS_PER_CAP: usize = 36;
pub const CAPS_PER_DEMICAP: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DemicapError {
    #[error("a demicap has 10 points, found {0}")]
    WrongSize(usize),
    #[error("the points do not pair up into lines through one common point")]
    NoCommonAnchor,
    #[error("{0} of the points lie in a single hyperplane")]
    CoHyperplanar(usize),
    #[error("the point set contains a line")]
    NotACap,
    #[error("several anchor candidates: {0:?}")]
    AmbiguousAnchor(Vec<Point>),
    #[error("the demicap is not contained in the cap")]
    NotSubset,
    #[error("the sets are not disjoint")]
    NotDisjoint,
    #[error("anchors differ: {0} vs {1}")]
    AnchorMismatch(Point, Point),
    #[error("the union of the two halves is not a maximal cap")]
    UnionNotMaximalCap,
    #[error("the points completing one line with both halves do not form a maximal cap")]
    ImageNotMaximalCap,
    #[error("the four a-lines lie in a common hyperplane")]
    CoHyperplanarInput,
    #[error("the induced set is not a demicap; the inputs are not related as required")]
    NotADemicapResult,
}

/// Ten points forming five a-lines through `anchor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Demicap {
    points: PointSet,
    anchor: Point,
    alines: [ALine; 5],
}

impl Demicap {
    pub fn points(&self) -> PointSet {
        self.points
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    /// The five a-lines, ordered by smaller point.
    pub fn alines(&self) -> &[ALine; 5] {
        &self.alines
    }

    fn from_parts(points: PointSet, anchor: Point) -> Demicap {
        let alines: Vec<ALine> =
            alines_through(anchor).iter().copied().filter(|l| points.contains(l.pair.0)).collect();
        Demicap { points, anchor, alines: alines.try_into().expect("five a-lines") }
    }
}

/// Largest number of points of `s` inside one hyperplane.
pub fn max_hyperplane_intersection(s: PointSet) -> usize {
    hyperplanes().iter().map(|h| (h.points & s).len()).max().unwrap_or(0)
}

/// Validates `s` as a demicap and finds its anchor.
///
/// Checks run in the order size, hyperplane condition, cap condition, anchor.
pub fn recognize_demicap(s: PointSet) -> Result<Demicap, DemicapError> {
    if s.len() != DEMICAP_SIZE {
        return Err(DemicapError::WrongSize(s.len()));
    }
    let crowded = max_hyperplane_intersection(s);
    if crowded >= 8 {
        return Err(DemicapError::CoHyperplanar(crowded));
    }
    if !is_cap(s) {
        return Err(DemicapError::NotACap);
    }
    let profile = completion_counts(s);
    let centres = pairing_centres(s, &profile, 5);
    match centres.as_slice() {
        [] => Err(DemicapError::NoCommonAnchor),
        [a] => Ok(Demicap::from_parts(s, *a)),
        _ => Err(DemicapError::AmbiguousAnchor(centres)),
    }
}

/// For a cap made of five a-lines through `anchor`: whether every other
/// outside point completes at most one line with it.
pub fn lemma_one_line_check(s: PointSet, anchor: Point) -> Result<bool, DemicapError> {
    if s.len() != DEMICAP_SIZE {
        return Err(DemicapError::WrongSize(s.len()));
    }
    let frame = ALineFrame::get(anchor);
    if frame.slots_of(s).is_none() {
        return Err(DemicapError::NoCommonAnchor);
    }
    if !is_cap(s) {
        return Err(DemicapError::NotACap);
    }
    let profile = completion_counts(s);
    Ok((s | PointSet::singleton(anchor)).complement().iter().all(|b| profile.count(b) <= 1))
}

fn is_demicap_slots(frame: &ALineFrame, slots: SlotMask) -> bool {
    frame.is_cap(slots) && max_hyperplane_intersection(frame.points_of(slots)) < 8
}

fn slot_mask(combo: &[usize]) -> SlotMask {
    combo.iter().fold(0, |m, &i| m | 1 << i)
}

/// Every demicap anchored at `anchor`, filtered from all 5-subsets of its a-lines.
pub fn enumerate_demicaps(anchor: Point) -> impl Iterator<Item = Demicap> {
    let frame = ALineFrame::get(anchor);
    (0..LINES_PER_POINT).combinations(5).filter_map(move |combo| {
        let slots = slot_mask(&combo);
        is_demicap_slots(frame, slots).then(|| Demicap::from_parts(frame.points_of(slots), anchor))
    })
}

/// Number of demicaps anchored at `anchor`, counted in parallel.
pub fn count_demicaps(anchor: Point) -> usize {
    use rayon::prelude::*;
    let frame = ALineFrame::get(anchor);
    (0..LINES_PER_POINT)
        .into_par_iter()
        .map(|first| {
            ((first + 1)..LINES_PER_POINT)
                .combinations(4)
                .filter(|rest| is_demicap_slots(frame, slot_mask(rest) | 1 << first))
                .count()
        })
        .sum()
}

/// Demicaps inside a maximal cap, in lexicographic order of their a-line slots.
pub fn demicaps_in_cap(c: &MaximalCap) -> Vec<Demicap> {
    let frame = ALineFrame::get(c.anchor());
    let slots = frame.slots_of(c.points()).expect("maximal caps are unions of a-lines");
    let own: Vec<usize> = (0..LINES_PER_POINT).filter(|&i| slots >> i & 1 == 1).collect();
    own.into_iter()
        .combinations(5)
        .map(|combo| slot_mask(&combo))
        .filter(|&m| is_demicap_slots(frame, m))
        .map(|m| Demicap::from_parts(frame.points_of(m), c.anchor()))
        .collect()
}

pub fn complement_demicap(c: &MaximalCap, d: &Demicap) -> Result<Demicap, DemicapError> {
    if !d.points.is_subset(c.points()) {
        return Err(DemicapError::NotSubset);
    }
    recognize_demicap(c.points() - d.points)
}

/// An unordered split of a maximal cap into two demicaps. `half_a` holds the
/// smallest point of the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DemicapDecomposition {
    pub cap: MaximalCap,
    pub half_a: Demicap,
    pub half_b: Demicap,
}

impl DemicapDecomposition {
    pub fn new(cap: MaximalCap, x: Demicap, y: Demicap) -> Result<Self, DemicapError> {
        if !x.points.is_disjoint(y.points) {
            return Err(DemicapError::NotDisjoint);
        }
        if x.anchor != cap.anchor() {
            return Err(DemicapError::AnchorMismatch(x.anchor, cap.anchor()));
        }
        if y.anchor != cap.anchor() {
            return Err(DemicapError::AnchorMismatch(y.anchor, cap.anchor()));
        }
        if (x.points | y.points) != cap.points() {
            return Err(DemicapError::NotSubset);
        }
        let (half_a, half_b) = if x.points.min() < y.points.min() { (x, y) } else { (y, x) };
        Ok(DemicapDecomposition { cap, half_a, half_b })
    }

    pub fn contains_half(&self, d: &Demicap) -> bool {
        self.half_a.points == d.points || self.half_b.points == d.points
    }
}

/// The 36 splits of `c` into complementary demicaps, sorted.
pub fn decompositions(c: &MaximalCap) -> Vec<DemicapDecomposition> {
    let first = c.points().min().expect("nonempty cap");
    let mut out: Vec<DemicapDecomposition> = demicaps_in_cap(c)
        .into_iter()
        .filter(|d| d.points.contains(first))
        .map(|d| {
            let other = complement_demicap(c, &d).expect("complements of demicaps in a maximal cap are demicaps");
            DemicapDecomposition::new(*c, d, other).expect("complementary halves")
        })
        .collect();
    out.sort();
    out
}

/// Outside points completing exactly one line with a demicap (40 of them),
/// and those completing none (30). The anchor is in neither.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionSplit {
    pub ones: PointSet,
    pub zeros: PointSet,
}

pub fn one_line_completers(d: &Demicap) -> CompletionSplit {
    let profile = completion_counts(d.points);
    let outside = (d.points | PointSet::singleton(d.anchor)).complement();
    CompletionSplit { ones: profile.points_with(1) & outside, zeros: profile.points_with(0) & outside }
}

/// The maximal cap made of the points completing one line with each half.
pub fn corresponding_cap(d: &Demicap, d2: &Demicap) -> Result<MaximalCap, DemicapError> {
    if d.anchor != d2.anchor {
        return Err(DemicapError::AnchorMismatch(d.anchor, d2.anchor));
    }
    if !d.points.is_disjoint(d2.points) {
        return Err(DemicapError::NotDisjoint);
    }
    match MaximalCap::new(d.points | d2.points) {
        Ok(c) if c.anchor() == d.anchor => {}
        _ => return Err(DemicapError::UnionNotMaximalCap),
    }
    let image = one_line_completers(d).ones & one_line_completers(d2).ones;
    match MaximalCap::new(image) {
        Ok(c) if c.anchor() == d.anchor => Ok(c),
        _ => Err(DemicapError::ImageNotMaximalCap),
    }
}

pub fn corresponding_cap_of(dec: &DemicapDecomposition) -> Result<MaximalCap, DemicapError> {
    corresponding_cap(&dec.half_a, &dec.half_b)
}

/// Splits `cp` by which of its points complete one line with `d1`.
pub fn induced_decomposition(cp: &MaximalCap, d1: &Demicap) -> Result<DemicapDecomposition, DemicapError> {
    if cp.anchor() != d1.anchor {
        return Err(DemicapError::AnchorMismatch(cp.anchor(), d1.anchor));
    }
    if !cp.points().is_disjoint(d1.points) {
        return Err(DemicapError::NotDisjoint);
    }
    let inside = cp.points() & one_line_completers(d1).ones;
    let first = recognize_demicap(inside).map_err(|_| DemicapError::NotADemicapResult)?;
    let second = recognize_demicap(cp.points() - inside).map_err(|_| DemicapError::NotADemicapResult)?;
    DemicapDecomposition::new(*cp, first, second)
}

/// The eight demicaps containing four given a-lines whose directions span the space.
pub fn extend_four_alines(alines: &[ALine; 4], anchor: Point) -> Result<Vec<Demicap>, DemicapError> {
    if let Some(l) = alines.iter().find(|l| l.anchor != anchor) {
        return Err(DemicapError::AnchorMismatch(l.anchor, anchor));
    }
    let union = alines.iter().fold(PointSet::EMPTY, |s, l| s | l.points());
    if union.len() != 8 {
        return Err(DemicapError::NotDisjoint);
    }
    let dirs: Vec<Point> = alines.iter().map(|l| l.direction()).collect();
    if rank(&dirs) < 4 {
        return Err(DemicapError::CoHyperplanarInput);
    }
    let mut out = Vec::with_capacity(8);
    // Fix the first sign: s and -s give the same a-line.
    for signs in 0u8..8 {
        let s = dirs
            .iter()
            .enumerate()
            .fold(Point::ORIGIN, |acc, (i, d)| {
                let negate = i > 0 && signs >> (i - 1) & 1 == 1;
                acc.add(if negate { d.neg() } else { *d })
            });
        let fifth = ALine::new(anchor, anchor.add(s)).expect("s is nonzero");
        out.push(recognize_demicap(union | fifth.points())?);
    }
    Ok(out)
}

/// The maximal caps containing `d` (there are six).
pub fn maximal_caps_containing(d: &Demicap) -> Vec<MaximalCap> {
    let frame = ALineFrame::get(d.anchor);
    let base = frame.slots_of(d.points).expect("demicaps are unions of a-lines");
    frame
        .extensions(base, ALL_SLOTS, MAXIMAL_CAP_SIZE / 2)
        .map(|m| MaximalCap::new(frame.points_of(m)).expect("cap extensions are maximal caps"))
        .collect()
}
