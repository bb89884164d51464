use ag43_core::caps::canonical_cap;
use ag43_core::demicaps::*;
use ag43_core::gf3geom::{alines_through, Point, PointSet};
use itertools::Itertools;

#[test]
fn anchored_demicap_count() {
    assert_eq!(count_demicaps(Point::ORIGIN), ANCHORED_DEMICAPS);
    assert_eq!(40 * 39 * 36 * 27 * 8 / 120, ANCHORED_DEMICAPS);
    assert_eq!(count_demicaps(Point::new(53).unwrap()), ANCHORED_DEMICAPS);
}

#[test]
fn hyperplane_and_one_line_criteria_agree() {
    // Every 5-subset of the a-lines through the origin.
    let mut total = 0;
    let mut demicaps = 0;
    let mut caps = 0;
    for five in alines_through(Point::ORIGIN).iter().combinations(5) {
        total += 1;
        let s = five.iter().fold(PointSet::EMPTY, |s, l| s | l.points());
        let by_hyperplanes = recognize_demicap(s);
        match lemma_one_line_check(s, Point::ORIGIN) {
            Ok(by_lines) => {
                caps += 1;
                assert_eq!(by_hyperplanes.is_ok(), by_lines, "{s}");
                demicaps += by_lines as usize;
            }
            Err(e) => {
                assert_eq!(e, DemicapError::NotACap);
                assert!(by_hyperplanes.is_err());
            }
        }
    }
    assert_eq!(total, ALINE_5_SUBSETS);
    assert_eq!(demicaps, ANCHORED_DEMICAPS);
    assert!(caps > demicaps);
}

#[test]
fn complements_in_many_caps() {
    let caps: Vec<_> = ag43_core::caps::enumerate_maximal_caps(Point::ORIGIN).step_by(500).collect();
    for c in caps.iter().chain(std::iter::once(&canonical_cap())) {
        let ds = demicaps_in_cap(c);
        assert_eq!(ds.len(), DEMICAPS_PER_CAP);
        for d in &ds {
            complement_demicap(c, d).unwrap();
        }
        assert_eq!(decompositions(c).len(), DECOMPOSITIONS_PER_CAP);
    }
}
