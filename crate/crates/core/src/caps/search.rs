//! Backtracking over sets of a-lines sharing one anchor.
//!
//! With the anchor fixed, a union of a-lines contains a line exactly when
//! three of its a-lines `i, j, k` have points `x, y, z` with `x + y + z = 0`.
//! `conflicts[i][j]` collects every such `k`, so the search only has to keep
//! a mask of a-lines forbidden by pairs already chosen.

use std::sync::OnceLock;

use crate::gf3geom::{aline_slot, alines_through, third, Point, PointSet, LINES_PER_POINT, NUM_POINTS};

/// Bitmask over the 40 a-line slots of one anchor.
pub type SlotMask = u64;

pub const ALL_SLOTS: SlotMask = (1u64 << LINES_PER_POINT) - 1;

pub struct ALineFrame {
    pub anchor: Point,
    pub masks: [PointSet; LINES_PER_POINT],
    conflicts: Box<[[SlotMask; LINES_PER_POINT]; LINES_PER_POINT]>,
}

impl ALineFrame {
    /// Shared frame for `anchor`, built on first use.
    pub fn get(anchor: Point) -> &'static ALineFrame {
        static FRAMES: OnceLock<Vec<OnceLock<ALineFrame>>> = OnceLock::new();
        let frames = FRAMES.get_or_init(|| (0..NUM_POINTS).map(|_| OnceLock::new()).collect());
        frames[anchor.index()].get_or_init(|| ALineFrame::build(anchor))
    }

    fn build(anchor: Point) -> ALineFrame {
        let lines = alines_through(anchor);
        let masks = lines.map(|l| l.points());
        let mut conflicts = Box::new([[0u64; LINES_PER_POINT]; LINES_PER_POINT]);
        for i in 0..LINES_PER_POINT {
            for j in (i + 1)..LINES_PER_POINT {
                let mut m = 0u64;
                for x in masks[i] {
                    for y in masks[j] {
                        let slot = aline_slot(anchor, third(x, y)).expect("x, y on distinct a-lines");
                        m |= 1 << slot;
                    }
                }
                conflicts[i][j] = m;
                conflicts[j][i] = m;
            }
        }
        ALineFrame { anchor, masks, conflicts }
    }

    /// Slots forbidden by some pair inside `selected`.
    pub fn forbidden_by(&self, selected: SlotMask) -> SlotMask {
        let mut f = 0;
        let mut rest = selected;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            f |= self.forbidden_with(i, rest);
        }
        f
    }

    fn forbidden_with(&self, i: usize, others: SlotMask) -> SlotMask {
        let mut f = 0;
        let mut rest = others;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            f |= self.conflicts[i][j];
        }
        f
    }

    /// Whether the union of the selected a-lines is a cap.
    pub fn is_cap(&self, selected: SlotMask) -> bool {
        self.forbidden_by(selected) & selected == 0
    }

    pub fn points_of(&self, selected: SlotMask) -> PointSet {
        let mut s = PointSet::EMPTY;
        let mut rest = selected;
        while rest != 0 {
            s = s | self.masks[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        s
    }

    /// Slots of the a-lines contained in `points`; `None` unless `points` is
    /// exactly a union of a-lines through the anchor.
    pub fn slots_of(&self, points: PointSet) -> Option<SlotMask> {
        if points.contains(self.anchor) {
            return None;
        }
        let mut m = 0u64;
        for p in points {
            m |= 1 << aline_slot(self.anchor, p)?;
        }
        (self.points_of(m) == points).then_some(m)
    }

    /// Cap-forming extensions of `base` by a-lines drawn from `allowed`, up to
    /// `target` a-lines in total, in lexicographic order of the point sets.
    pub fn extensions(&self, base: SlotMask, allowed: SlotMask, target: usize) -> CapSearch<'_> {
        let forbidden = self.forbidden_by(base);
        let stack = if forbidden & base == 0 {
            vec![SearchNode { selected: base, forbidden, next: 0 }]
        } else {
            Vec::new()
        };
        CapSearch { frame: self, allowed: allowed & !base, target, stack }
    }
}

#[derive(Clone, Copy)]
struct SearchNode {
    selected: SlotMask,
    forbidden: SlotMask,
    next: u32,
}

/// Include-first depth-first search. Slots are ordered by their smaller
/// point, so emission order is lexicographic in the resulting point sets.
pub struct CapSearch<'a> {
    frame: &'a ALineFrame,
    allowed: SlotMask,
    target: usize,
    stack: Vec<SearchNode>,
}

impl Iterator for CapSearch<'_> {
    type Item = SlotMask;

    fn next(&mut self) -> Option<SlotMask> {
        loop {
            let node = self.stack.last_mut()?;
            let count = node.selected.count_ones() as usize;
            if count == self.target {
                let found = node.selected;
                self.stack.pop();
                return Some(found);
            }
            let above = if node.next >= 64 { 0 } else { !0u64 << node.next };
            let avail = self.allowed & !node.forbidden & !node.selected & above;
            if count + (avail.count_ones() as usize) < self.target {
                self.stack.pop();
                continue;
            }
            let i = avail.trailing_zeros() as usize;
            node.next = i as u32 + 1;
            let selected = node.selected;
            let forbidden = node.forbidden | self.frame.forbidden_with(i, selected);
            self.stack.push(SearchNode {
                selected: selected | 1 << i,
                forbidden,
                next: i as u32 + 1,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::is_cap;

    #[test]
    fn slot_conflicts_match_point_level_caps() {
        let frame = ALineFrame::get(Point::ORIGIN);
        for i in 0..LINES_PER_POINT {
            for j in (i + 1)..LINES_PER_POINT {
                for k in (j + 1)..LINES_PER_POINT {
                    let sel = 1u64 << i | 1 << j | 1 << k;
                    assert_eq!(frame.is_cap(sel), is_cap(frame.points_of(sel)));
                }
            }
        }
    }

    #[test]
    fn each_pair_forbids_the_two_other_lines_of_its_plane() {
        let frame = ALineFrame::get(Point::new(40).unwrap());
        for i in 0..LINES_PER_POINT {
            for j in 0..LINES_PER_POINT {
                if i != j {
                    assert_eq!(frame.conflicts[i][j].count_ones(), 2);
                }
            }
        }
    }

    #[test]
    fn slots_round_trip() {
        let frame = ALineFrame::get(Point::new(7).unwrap());
        let sel = 0b1011_0001u64;
        assert_eq!(frame.slots_of(frame.points_of(sel)), Some(sel));
        let broken = frame.points_of(sel) - PointSet::singleton(alines_through(frame.anchor)[0].pair.0);
        assert_eq!(frame.slots_of(broken), None);
    }

    #[test]
    fn search_emits_in_lexicographic_order() {
        let frame = ALineFrame::get(Point::ORIGIN);
        let sets: Vec<PointSet> = frame
            .extensions(0, ALL_SLOTS, 4)
            .take(2000)
            .map(|m| frame.points_of(m))
            .collect();
        assert!(sets.windows(2).all(|w| w[0] < w[1]));
        assert!(sets.iter().all(|s| is_cap(*s)));
    }
}
