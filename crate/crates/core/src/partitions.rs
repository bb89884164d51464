//! Partitions of AG(4,3) into four maximal caps and their common anchor.
//!
//! A disjoint pair of maximal caps lies in 1, 2 or 6 partitions. The
//! 1-completable partners of a cap come from its demicap decompositions and
//! arrange themselves as a 6×6 grid of unions `rows[i] ∪ cols[j]`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::caps::search::{ALineFrame, SlotMask, ALL_SLOTS};
use crate::caps::{CapError, MaximalCap, MAXIMAL_CAP_SIZE};
use crate::demicaps::{
    corresponding_cap, decompositions, induced_decomposition, maximal_caps_containing, one_line_completers,
    recognize_demicap, Demicap, DemicapDecomposition, DemicapError,
};
use crate::gf3geom::{ALine, Point, PointSet, LINES_PER_POINT};

pub const DISJOINT_PARTNERS: usize = 198;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("the caps are not disjoint")]
    NotDisjoint,
    #[error("anchors differ: {0} vs {1}")]
    AnchorMismatch(Point, Point),
    #[error("blocks and anchor do not cover every point exactly once")]
    NotAPartition,
    #[error("no pairing of the blocks is (1,1) or (2,2) with the rest 6-completable")]
    InconsistentPartition,
    #[error("the demicaps do not decompose the cap")]
    NotADecomposition,
    #[error("a pair lies in {0} partitions; expected 1, 2 or 6")]
    UnexpectedCompletability(usize),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Demicap(#[from] DemicapError),
    #[error(transparent)]
    Cap(#[from] CapError),
}

/// Four disjoint maximal caps sharing an anchor, covering the other 80 points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CapPartition {
    anchor: Point,
    /// Sorted.
    blocks: [MaximalCap; 4],
}

impl CapPartition {
    pub fn new(anchor: Point, mut blocks: [MaximalCap; 4]) -> Result<CapPartition, PartitionError> {
        if let Some(b) = blocks.iter().find(|b| b.anchor() != anchor) {
            return Err(PartitionError::AnchorMismatch(b.anchor(), anchor));
        }
        let mut seen = PointSet::singleton(anchor);
        for b in &blocks {
            if !seen.is_disjoint(b.points()) {
                return Err(PartitionError::NotAPartition);
            }
            seen = seen | b.points();
        }
        if seen != PointSet::FULL {
            return Err(PartitionError::NotAPartition);
        }
        blocks.sort();
        Ok(CapPartition { anchor, blocks })
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    pub fn blocks(&self) -> &[MaximalCap; 4] {
        &self.blocks
    }

    pub fn contains_block(&self, c: &MaximalCap) -> bool {
        self.blocks.contains(c)
    }
}

/// Number of partitions containing a disjoint pair of maximal caps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CompletabilityClass {
    One,
    Two,
    Six,
}

impl CompletabilityClass {
    pub fn k(self) -> usize {
        match self {
            CompletabilityClass::One => 1,
            CompletabilityClass::Two => 2,
            CompletabilityClass::Six => 6,
        }
    }

    pub fn from_count(k: usize) -> Result<CompletabilityClass, PartitionError> {
        match k {
            1 => Ok(CompletabilityClass::One),
            2 => Ok(CompletabilityClass::Two),
            6 => Ok(CompletabilityClass::Six),
            _ => Err(PartitionError::UnexpectedCompletability(k)),
        }
    }
}

fn cap_slots(frame: &ALineFrame, c: &MaximalCap) -> SlotMask {
    frame.slots_of(c.points()).expect("maximal caps are unions of a-lines")
}

/// Every maximal cap disjoint from `c`, in lexicographic order.
pub fn disjoint_maximal_caps(c: &MaximalCap) -> Vec<MaximalCap> {
    let frame = ALineFrame::get(c.anchor());
    let free = ALL_SLOTS & !cap_slots(frame, c);
    frame
        .extensions(0, free, MAXIMAL_CAP_SIZE / 2)
        .map(|m| MaximalCap::new(frame.points_of(m)).expect("10 a-lines forming a cap"))
        .collect()
}

/// Every partition having `c` and `cp` as blocks.
pub fn completions(c: &MaximalCap, cp: &MaximalCap) -> Result<Vec<CapPartition>, PartitionError> {
    if c.anchor() != cp.anchor() {
        return Err(PartitionError::AnchorMismatch(c.anchor(), cp.anchor()));
    }
    if !c.points().is_disjoint(cp.points()) {
        return Err(PartitionError::NotDisjoint);
    }
    let frame = ALineFrame::get(c.anchor());
    let residual = ALL_SLOTS & !cap_slots(frame, c) & !cap_slots(frame, cp);
    // The lowest residual a-line goes in the first new block, so each
    // partition is found once.
    let first: SlotMask = 1 << residual.trailing_zeros();
    frame
        .extensions(first, residual, MAXIMAL_CAP_SIZE / 2)
        .filter(|&m| frame.is_cap(residual & !m))
        .map(|m| {
            let third = MaximalCap::new(frame.points_of(m))?;
            let fourth = MaximalCap::new(frame.points_of(residual & !m))?;
            CapPartition::new(c.anchor(), [*c, *cp, third, fourth])
        })
        .collect()
}

pub fn completability(c: &MaximalCap, cp: &MaximalCap) -> Result<CompletabilityClass, PartitionError> {
    CompletabilityClass::from_count(completions(c, cp)?.len())
}

/// The disjoint partners of a cap grouped by completability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub cap: MaximalCap,
    pub partners: BTreeMap<MaximalCap, CompletabilityClass>,
}

impl Classification {
    pub fn with_class(&self, k: CompletabilityClass) -> Vec<MaximalCap> {
        self.partners.iter().filter(|(_, &v)| v == k).map(|(c, _)| *c).collect()
    }

    /// Partner counts for k = 1, 2, 6.
    pub fn counts(&self) -> [usize; 3] {
        [CompletabilityClass::One, CompletabilityClass::Two, CompletabilityClass::Six]
            .map(|k| self.partners.values().filter(|&&v| v == k).count())
    }
}

pub fn classify(c: &MaximalCap) -> Result<Classification, PartitionError> {
    let partners = disjoint_maximal_caps(c)
        .into_par_iter()
        .map(|p| completability(c, &p).map(|k| (p, k)))
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    Ok(Classification { cap: *c, partners })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairingType {
    TwoOneCompletable,
    TwoTwoCompletable,
}

/// The special pairing of a partition's blocks and its type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairingReport {
    pub kind: PairingType,
    /// Block indices of the two special pairs.
    pub pairs: [(usize, usize); 2],
}

const PAIRINGS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

pub fn partition_pairing_type(p: &CapPartition) -> Result<PairingReport, PartitionError> {
    let b = p.blocks();
    let mut classes = [[CompletabilityClass::One; 2]; 3];
    for (slot, pairing) in classes.iter_mut().zip(PAIRINGS) {
        for (k, (i, j)) in slot.iter_mut().zip(pairing) {
            *k = completability(&b[i], &b[j])?;
        }
    }
    let six = [CompletabilityClass::Six; 2];
    let mut found = None;
    for (idx, ks) in classes.iter().enumerate() {
        let kind = match ks {
            [CompletabilityClass::One, CompletabilityClass::One] => PairingType::TwoOneCompletable,
            [CompletabilityClass::Two, CompletabilityClass::Two] => PairingType::TwoTwoCompletable,
            _ => continue,
        };
        let others_six = (0..3).filter(|&o| o != idx).all(|o| classes[o] == six);
        if !others_six || found.is_some() {
            return Err(PartitionError::InconsistentPartition);
        }
        found = Some(PairingReport { kind, pairs: PAIRINGS[idx] });
    }
    found.ok_or(PartitionError::InconsistentPartition)
}

/// A demicap from each of the two 20-point sets whose union is a maximal cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CrossPairing {
    pub in_s1: Demicap,
    pub in_s2: Demicap,
    pub cap: MaximalCap,
    /// The cap corresponding to this decomposition of `cap`.
    pub image: MaximalCap,
}

/// The partition determined by a decomposition `{D, D2}` of a cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquePartition {
    pub decomposition: DemicapDecomposition,
    pub c_prime: MaximalCap,
    /// Points completing a line with a pair from `D` and none from `D2`.
    pub s1: PointSet,
    pub s2: PointSet,
    pub s1_demicaps: Vec<Demicap>,
    pub s2_demicaps: Vec<Demicap>,
    pub m1: CrossPairing,
    pub m2: CrossPairing,
    pub partition: CapPartition,
}

fn demicaps_within(anchor: Point, s: PointSet) -> Result<Vec<Demicap>, PartitionError> {
    let frame = ALineFrame::get(anchor);
    let slots = frame
        .slots_of(s)
        .ok_or_else(|| PartitionError::Inconsistent("set is not a union of a-lines".into()))?;
    let own: Vec<usize> = (0..LINES_PER_POINT).filter(|&i| slots >> i & 1 == 1).collect();
    use itertools::Itertools;
    Ok(own
        .into_iter()
        .combinations(5)
        .filter_map(|combo| {
            let m = combo.iter().fold(0u64, |m, &i| m | 1 << i);
            recognize_demicap(frame.points_of(m)).ok().filter(|d| d.anchor() == anchor)
        })
        .collect())
}

fn check(cond: bool, what: &str) -> Result<(), PartitionError> {
    if cond {
        Ok(())
    } else {
        Err(PartitionError::Inconsistent(what.into()))
    }
}

pub fn unique_partition(c: &MaximalCap, d: &Demicap, d2: &Demicap) -> Result<UniquePartition, PartitionError> {
    let decomposition =
        DemicapDecomposition::new(*c, *d, *d2).map_err(|_| PartitionError::NotADecomposition)?;
    let c_prime = corresponding_cap(d, d2)?;
    let ones = one_line_completers(d).ones;
    let ones2 = one_line_completers(d2).ones;
    let s1 = ones - ones2;
    let s2 = ones2 - ones;
    check(s1.len() == 20 && s2.len() == 20, "|S1| = |S2| = 20")?;
    let s1_demicaps = demicaps_within(c.anchor(), s1)?;
    let s2_demicaps = demicaps_within(c.anchor(), s2)?;
    for (set, ds) in [(s1, &s1_demicaps), (s2, &s2_demicaps)] {
        check(ds.len() == 12, "12 demicaps in each of S1, S2")?;
        for x in ds.iter() {
            check(ds.iter().any(|y| y.points() == set - x.points()), "complements within S1, S2")?;
        }
    }
    let mut crosses = Vec::new();
    for x in &s1_demicaps {
        for y in &s2_demicaps {
            if let Ok(cap) = MaximalCap::new(x.points() | y.points()) {
                let image = corresponding_cap(x, y)?;
                crosses.push(CrossPairing { in_s1: *x, in_s2: *y, cap, image });
            }
        }
    }
    check(crosses.len() == 2, "exactly two cross-pairings give maximal caps")?;
    crosses.sort_by_key(|x| x.in_s1.points());
    let (m1, m2) = (crosses[0], crosses[1]);
    check(m1.in_s1.points() == s1 - m2.in_s1.points(), "S1 halves of M1 and M2 are complementary")?;
    check(m1.in_s2.points() == s2 - m2.in_s2.points(), "S2 halves of M1 and M2 are complementary")?;
    let partition = CapPartition::new(c.anchor(), [*c, c_prime, m1.cap, m2.cap])?;
    Ok(UniquePartition { decomposition, c_prime, s1, s2, s1_demicaps, s2_demicaps, m1, m2, partition })
}

/// Six row demicaps and six column demicaps whose 36 unions are the
/// 1-completable partners of `base`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridOf36 {
    pub base: MaximalCap,
    pub rows: [Demicap; 6],
    pub cols: [Demicap; 6],
    pub caps: [[MaximalCap; 6]; 6],
}

impl GridOf36 {
    pub fn cap_set(&self) -> BTreeSet<MaximalCap> {
        self.caps.iter().flatten().copied().collect()
    }

    /// Row and column of `m`, if it is in the grid.
    pub fn position(&self, m: &MaximalCap) -> Option<(usize, usize)> {
        (0..36).map(|k| (k / 6, k % 6)).find(|&(i, j)| self.caps[i][j] == *m)
    }
}

fn six_sorted(mut v: Vec<Demicap>) -> Result<[Demicap; 6], PartitionError> {
    v.sort_by_key(|d| d.points());
    v.try_into().map_err(|v: Vec<Demicap>| PartitionError::Inconsistent(format!("{} demicaps, expected 6", v.len())))
}

/// Builds the grid from one decomposition of `base` without consulting the
/// completability classification.
pub fn build_grid36_from(dec: &DemicapDecomposition) -> Result<GridOf36, PartitionError> {
    let base = dec.cap;
    let up = unique_partition(&base, &dec.half_a, &dec.half_b)?;
    let induced = induced_decomposition(&up.c_prime, &up.m1.in_s1)?;
    let d_pp = recognize_demicap(up.c_prime.points() & one_line_completers(&up.m1.in_s1).ones)?;
    let (c1, r1) = if induced.half_a == d_pp { (induced.half_a, induced.half_b) } else { (induced.half_b, induced.half_a) };
    let complements = |fixed: &Demicap| -> Vec<Demicap> {
        maximal_caps_containing(fixed)
            .iter()
            .map(|m| recognize_demicap(m.points() - fixed.points()).expect("complement of a demicap in a maximal cap"))
            .collect()
    };
    let rows = six_sorted(complements(&c1))?;
    let cols = six_sorted(complements(&r1))?;
    let mut caps = [[base; 6]; 6];
    for (i, r) in rows.iter().enumerate() {
        for (j, col) in cols.iter().enumerate() {
            caps[i][j] = MaximalCap::new(r.points() | col.points())
                .map_err(|_| PartitionError::Inconsistent(format!("row {i} and column {j} do not form a maximal cap")))?;
        }
    }
    Ok(GridOf36 { base, rows, cols, caps })
}

/// Grid from the least decomposition of `c`, without the classification check.
pub fn build_grid36(c: &MaximalCap) -> Result<GridOf36, PartitionError> {
    build_grid36_from(&decompositions(c)[0])
}

/// Grid from the least decomposition, checked against the 1-completable
/// partners found by [`classify`].
pub fn grid36(c: &MaximalCap) -> Result<GridOf36, PartitionError> {
    let grid = build_grid36(c)?;
    let ones: BTreeSet<MaximalCap> = classify(c)?.with_class(CompletabilityClass::One).into_iter().collect();
    check(grid.cap_set() == ones, "grid caps equal the 1-completable partners")?;
    Ok(grid)
}

/// How six demicaps share a-lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PentadReport {
    /// Distinct a-lines used, with the number of demicaps using each.
    pub alines: BTreeMap<ALine, usize>,
    pub each_aline_twice: bool,
    /// Every two of the six meet in exactly one a-line.
    pub pairwise_one_aline: bool,
}

pub fn pentad_structure(half: &[Demicap; 6]) -> PentadReport {
    let mut alines = BTreeMap::new();
    for d in half {
        for l in d.alines() {
            *alines.entry(*l).or_insert(0) += 1;
        }
    }
    let each_aline_twice = alines.len() == 15 && alines.values().all(|&n| n == 2);
    let pairwise_one_aline = (0..6).all(|i| {
        (0..6).filter(|&j| j != i).all(|j| {
            let meet = half[i].points() & half[j].points();
            meet.len() == 2 && half[i].alines().iter().any(|l| l.points() == meet)
        })
    });
    PentadReport { alines, each_aline_twice, pairwise_one_aline }
}

/// Where the 60 points outside the base cap and anchor fall in a grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    /// Number of grid caps containing each outside point, as a histogram.
    pub caps_per_point: BTreeMap<usize, usize>,
    /// Outside points lying in exactly two rows and in no column.
    pub in_two_rows: usize,
    /// Outside points lying in exactly two columns and in no row.
    pub in_two_cols: usize,
    pub outside: usize,
}

pub fn grid_coverage(grid: &GridOf36) -> CoverageReport {
    let outside = (grid.base.points() | PointSet::singleton(grid.base.anchor())).complement();
    let mut caps_per_point = BTreeMap::new();
    let (mut in_two_rows, mut in_two_cols) = (0, 0);
    for p in outside {
        let n = grid.caps.iter().flatten().filter(|m| m.points().contains(p)).count();
        *caps_per_point.entry(n).or_insert(0) += 1;
        let r = grid.rows.iter().filter(|d| d.points().contains(p)).count();
        let c = grid.cols.iter().filter(|d| d.points().contains(p)).count();
        match (r, c) {
            (2, 0) => in_two_rows += 1,
            (0, 2) => in_two_cols += 1,
            _ => {}
        }
    }
    CoverageReport { caps_per_point, in_two_rows, in_two_cols, outside: outside.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::{canonical_cap, is_cap};
    use crate::demicaps::corresponding_cap_of;

    #[test]
    fn disjoint_partners_of_canonical_cap() {
        let c = canonical_cap();
        let ps = disjoint_maximal_caps(&c);
        assert_eq!(ps.len(), DISJOINT_PARTNERS);
        assert!(ps.iter().all(|p| p.anchor() == c.anchor() && p.points().is_disjoint(c.points()) && is_cap(p.points())));
    }

    #[test]
    fn partition_validation() {
        let c = canonical_cap();
        let dec = decompositions(&c)[0];
        let up = unique_partition(&c, &dec.half_a, &dec.half_b).unwrap();
        let b = *up.partition.blocks();
        assert_eq!(CapPartition::new(c.anchor(), [b[0], b[0], b[2], b[3]]), Err(PartitionError::NotAPartition));
        let moved = b[1].translate(Point::new(1).unwrap());
        assert!(matches!(CapPartition::new(c.anchor(), [b[0], moved, b[2], b[3]]), Err(PartitionError::AnchorMismatch(..))));
        assert_eq!(completions(&c, &c), Err(PartitionError::NotDisjoint));
    }

    #[test]
    fn unique_partition_of_least_decomposition() {
        let c = canonical_cap();
        let dec = decompositions(&c)[0];
        let up = unique_partition(&c, &dec.half_a, &dec.half_b).unwrap();
        assert_eq!(up.c_prime, corresponding_cap_of(&dec).unwrap());
        assert_eq!(up.m1.image, up.m2.cap);
        assert_eq!(up.m2.image, up.m1.cap);
        assert_eq!(completability(&up.m1.cap, &up.m2.cap), Ok(CompletabilityClass::One));
        assert_eq!(completability(&c, &up.c_prime), Ok(CompletabilityClass::One));
        assert_eq!(completability(&c, &up.m1.cap), Ok(CompletabilityClass::Six));
        let report = partition_pairing_type(&up.partition).unwrap();
        assert_eq!(report.kind, PairingType::TwoOneCompletable);
        let back = induced_decomposition(&up.c_prime, &up.m1.in_s1).unwrap();
        assert_eq!(corresponding_cap_of(&back), Ok(c));
    }

    #[test]
    fn unique_partition_rejects_non_decompositions() {
        let c = canonical_cap();
        let decs = decompositions(&c);
        assert_eq!(
            unique_partition(&c, &decs[0].half_a, &decs[1].half_b).map(|_| ()),
            Err(PartitionError::NotADecomposition)
        );
    }

    #[test]
    fn pentads_and_coverage() {
        let grid = build_grid36(&canonical_cap()).unwrap();
        let rows = pentad_structure(&grid.rows);
        let cols = pentad_structure(&grid.cols);
        assert!(rows.each_aline_twice && rows.pairwise_one_aline);
        assert!(cols.each_aline_twice && cols.pairwise_one_aline);
        assert!(rows.alines.keys().all(|l| !cols.alines.contains_key(l)));
        let cov = grid_coverage(&grid);
        assert_eq!(cov.caps_per_point, BTreeMap::from([(12, 60)]));
        assert_eq!(cov.in_two_rows + cov.in_two_cols, 60);
    }

    #[test]
    fn completability_class_counts() {
        assert_eq!(CompletabilityClass::from_count(6).unwrap().k(), 6);
        assert_eq!(CompletabilityClass::from_count(3), Err(PartitionError::UnexpectedCompletability(3)));
    }
}
