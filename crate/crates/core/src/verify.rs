//! Named checks of the headline counts, with random sampling helpers.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::caps::{
    canonical_cap, completion_counts, completion_summary, enumerate_maximal_caps, find_anchor, hyperplane_profile,
    is_cap, MaximalCap,
};
use crate::demicaps::{
    corresponding_cap, corresponding_cap_of, count_demicaps, decompositions, demicaps_in_cap, complement_demicap,
    extend_four_alines, induced_decomposition, maximal_caps_containing, one_line_completers, recognize_demicap, Demicap,
};
use crate::gf3geom::{all_lines, alines_through, hyperplanes, rank, ALine, Point, PointSet};
use crate::partitions::{
    classify, completability, completions, grid36, grid_coverage, pentad_structure, unique_partition,
    CompletabilityClass,
};
use crate::symmetry::{
    cap_stabilizer, demicap_stabilizer, grid_action, outer_automorphism_check, summarize, AffineMap, GL_ORDER,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    pub duration_ms: f64,
    /// Which published result the expected value comes from.
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:width$}  expected {}  got {}  ({:.0} ms)\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.expected,
                c.actual,
                c.duration_ms
            ));
        }
        out.push_str(if self.overall { "all checks passed\n" } else { "some checks FAILED\n" });
        out
    }
}

/// Maximal caps anchored at the origin, cached.
pub fn anchored_caps() -> &'static [MaximalCap] {
    static CAPS: OnceLock<Vec<MaximalCap>> = OnceLock::new();
    CAPS.get_or_init(|| enumerate_maximal_caps(Point::ORIGIN).collect())
}

/// A maximal cap drawn from the anchored census and moved to a random anchor.
pub fn random_maximal_cap<R: Rng + ?Sized>(rng: &mut R) -> MaximalCap {
    let c = anchored_caps().choose(rng).expect("nonempty");
    c.translate(Point::new(rng.gen_range(0..81)).expect("in range"))
}

fn random_point<R: Rng + ?Sized>(rng: &mut R) -> Point {
    Point::new(rng.gen_range(0..81)).expect("in range")
}

/// Five random a-lines through a random anchor, redrawn until they form a demicap.
pub fn random_demicap<R: Rng + ?Sized>(rng: &mut R) -> Demicap {
    loop {
        let anchor = random_point(rng);
        let lines: Vec<&ALine> = alines_through(anchor).choose_multiple(rng, 5).collect();
        let s = lines.iter().fold(PointSet::EMPTY, |s, l| s | l.points());
        if let Ok(d) = recognize_demicap(s) {
            return d;
        }
    }
}

/// Four a-lines through a random anchor whose directions span the space.
pub fn random_spanning_alines<R: Rng + ?Sized>(rng: &mut R) -> [ALine; 4] {
    loop {
        let anchor = random_point(rng);
        let lines: Vec<ALine> = alines_through(anchor).choose_multiple(rng, 4).copied().collect();
        let dirs: Vec<Point> = lines.iter().map(|l| l.direction()).collect();
        if rank(&dirs) == 4 {
            return lines.try_into().expect("four lines");
        }
    }
}

fn run<F: FnOnce() -> String>(name: &str, expected: &str, source: &str, f: F) -> Check {
    let start = Instant::now();
    let actual = f();
    Check {
        name: name.into(),
        expected: expected.into(),
        pass: actual == expected,
        actual,
        duration_ms: start.elapsed().as_secs_f64() * 1e3,
        source: source.into(),
    }
}

fn ok_or_msg<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn flatten(r: Result<String, String>) -> String {
    r.unwrap_or_else(|e| format!("error: {e}"))
}

/// Every check, sampling with a generator seeded by `seed`.
pub fn verify_all(seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c0 = canonical_cap();
    let mut checks = Vec::new();

    checks.push(run("line_census", "lines=1080 per_point=40 hyperplanes=120", "geometry of AG(4,3)", || {
        let lines = all_lines();
        let per: BTreeSet<usize> =
            Point::all().map(|p| lines.iter().filter(|l| l.points.contains(&p)).count()).collect();
        format!("lines={} per_point={} hyperplanes={}", lines.len(), per.iter().join("/"), hyperplanes().len())
    }));

    checks.push(run("completion_profile", "{3: 60, 10: 1}", "points outside a maximal cap complete three lines", || {
        let counts = completion_counts(c0.points());
        let outside = c0.points().complement();
        let hist: BTreeMap<u8, usize> = outside.iter().map(|p| counts.count(p)).counts().into_iter().collect();
        format!("{hist:?}")
    }));

    checks.push(run("table_small_dimensions", "n=2: 4/anchor/1 n=3: 9/none/2 n=4: 20/anchor/3", "maximal cap table", || {
        flatten((2..=4).map(|n| {
            let s = ok_or_msg(completion_summary(n))?;
            Ok(format!("n={n}: {}/{}/{}", s.max_cap_size, if s.has_anchor { "anchor" } else { "none" }, s.constant))
        }).collect::<Result<Vec<String>, String>>().map(|v| v.join(" ")))
    }));

    let sample_demicaps: Vec<Demicap> = (0..20).map(|_| random_demicap(&mut rng)).collect();
    checks.push(run("demicap_completion_split", "20 x (ones=40 zeros=30 anchor=5)", "completion counts of a demicap", || {
        let kinds: BTreeSet<String> = sample_demicaps
            .iter()
            .map(|d| {
                let split = one_line_completers(d);
                let a = completion_counts(d.points()).count(d.anchor());
                format!("ones={} zeros={} anchor={a}", split.ones.len(), split.zeros.len())
            })
            .collect();
        format!("{} x ({})", sample_demicaps.len(), kinds.iter().join(" | "))
    }));

    checks.push(run("demicaps_with_anchor", "101088 of 658008", "number of demicaps with a given anchor", || {
        let candidates = (0..40).combinations(5).count();
        format!("{} of {candidates}", count_demicaps(Point::ORIGIN))
    }));

    let sample_caps: Vec<MaximalCap> = (0..20).map(|_| random_maximal_cap(&mut rng)).collect();
    checks.push(run("demicaps_per_cap", "21 caps: 72 demicaps, 36 decompositions, complements closed", "demicaps inside a maximal cap", || {
        flatten((|| {
            let mut kinds = BTreeSet::new();
            for c in std::iter::once(&c0).chain(&sample_caps) {
                let ds = demicaps_in_cap(c);
                let closed = ds.iter().all(|d| complement_demicap(c, d).is_ok());
                let decs = decompositions(c).len();
                kinds.insert(format!("{} demicaps, {decs} decompositions, complements {}", ds.len(), if closed { "closed" } else { "open" }));
            }
            Ok(format!("{} caps: {}", 1 + sample_caps.len(), kinds.iter().join(" | ")))
        })())
    }));

    let fifty: Vec<Demicap> = (0..50).map(|_| random_demicap(&mut rng)).collect();
    checks.push(run("caps_per_demicap", "50 demicaps x 6 caps", "maximal caps containing a demicap", || {
        let counts: BTreeSet<usize> = fifty.iter().map(|d| maximal_caps_containing(d).len()).collect();
        format!("{} demicaps x {} caps", fifty.len(), counts.iter().join("/"))
    }));

    checks.push(run("anchored_maximal_caps", "8424", "maximal caps with a given anchor", || {
        enumerate_maximal_caps(Point::ORIGIN).count().to_string()
    }));

    let quads: Vec<[ALine; 4]> = (0..20).map(|_| random_spanning_alines(&mut rng)).collect();
    checks.push(run("eight_extensions", "20 sets x 8 demicaps of sign-sum form", "demicaps through four a-lines", || {
        flatten((|| {
            let mut sizes = BTreeSet::new();
            let mut form = true;
            for q in &quads {
                let anchor = q[0].anchor;
                let ds = ok_or_msg(extend_four_alines(q, anchor))?;
                sizes.insert(ds.len());
                let base = q.iter().fold(PointSet::EMPTY, |s, l| s | l.points());
                let sums: BTreeSet<PointSet> = (0..8u8)
                    .map(|signs| {
                        let s = q.iter().enumerate().fold(Point::ORIGIN, |acc, (i, l)| {
                            let d = l.direction();
                            acc.add(if i > 0 && signs >> (i - 1) & 1 == 1 { d.neg() } else { d })
                        });
                        PointSet::singleton(anchor.add(s)) | PointSet::singleton(anchor.sub(s))
                    })
                    .collect();
                let fifths: BTreeSet<PointSet> = ds.iter().map(|d| d.points() - base).collect();
                form &= sums == fifths;
            }
            Ok(format!("{} sets x {} demicaps{}", quads.len(), sizes.iter().join("/"), if form { " of sign-sum form" } else { " NOT of sign-sum form" }))
        })())
    }));

    checks.push(run("classification", "198 = (36,90,72), completions consistent", "completability of disjoint maximal caps", || {
        flatten((|| {
            let cls = ok_or_msg(classify(&c0))?;
            let [a, b, c] = cls.counts();
            let consistent = cls.partners.iter().all(|(p, k)| completions(&c0, p).map(|v| v.len() == k.k()).unwrap_or(false));
            Ok(format!("{} = ({a},{b},{c}), completions {}", cls.partners.len(), if consistent { "consistent" } else { "inconsistent" }))
        })())
    }));

    checks.push(run("correspondence", "36 distinct images = 1-completable class", "decompositions and 1-completable partners", || {
        flatten((|| {
            let images: BTreeSet<MaximalCap> =
                decompositions(&c0).iter().map(|d| ok_or_msg(corresponding_cap_of(d))).collect::<Result<_, _>>()?;
            let ones: BTreeSet<MaximalCap> = ok_or_msg(classify(&c0))?.with_class(CompletabilityClass::One).into_iter().collect();
            Ok(format!("{} distinct images {} 1-completable class", images.len(), if images == ones { "=" } else { "!=" }))
        })())
    }));

    let decs = decompositions(&c0);
    let five: Vec<_> = decs.choose_multiple(&mut rng, 5).copied().collect();
    checks.push(run("unique_partition", "5 decompositions: all properties hold", "partition through a decomposition", || {
        let bad: Vec<String> = five
            .iter()
            .enumerate()
            .filter_map(|(i, dec)| {
                let r: Result<bool, String> = (|| {
                    let up = ok_or_msg(unique_partition(&c0, &dec.half_a, &dec.half_b))?;
                    let one = ok_or_msg(completability(&up.m1.cap, &up.m2.cap))? == CompletabilityClass::One;
                    let cross = up.m1.image == up.m2.cap && up.m2.image == up.m1.cap;
                    let back = ok_or_msg(induced_decomposition(&up.c_prime, &up.m1.in_s1))?;
                    let round = ok_or_msg(corresponding_cap(&back.half_a, &back.half_b))? == c0;
                    Ok(up.s1.len() == 20 && up.s2.len() == 20 && up.s1_demicaps.len() == 12 && up.s2_demicaps.len() == 12 && one && cross && round)
                })();
                match r {
                    Ok(true) => None,
                    Ok(false) => Some(format!("#{i} failed")),
                    Err(e) => Some(format!("#{i}: {e}")),
                }
            })
            .collect();
        if bad.is_empty() {
            format!("{} decompositions: all properties hold", five.len())
        } else {
            bad.join("; ")
        }
    }));

    checks.push(run("grid36", "36 caps = 1-completable class; 60 points x 12 caps; two rows xor two cols; pentads hold", "grid of 1-completable partners", || {
        flatten((|| {
            let g = ok_or_msg(grid36(&c0))?;
            let cov = grid_coverage(&g);
            let per = cov.caps_per_point.iter().map(|(k, n)| format!("{n} points x {k} caps")).join(", ");
            let xor = cov.in_two_rows + cov.in_two_cols == cov.outside;
            let pentads = [pentad_structure(&g.rows), pentad_structure(&g.cols)]
                .iter()
                .all(|r| r.each_aline_twice && r.pairwise_one_aline);
            Ok(format!(
                "{} caps = 1-completable class; {per}; {}; pentads {}",
                g.cap_set().len(),
                if xor { "two rows xor two cols" } else { "rows/cols overlap" },
                if pentads { "hold" } else { "fail" }
            ))
        })())
    }));

    checks.push(run(
        "symmetry",
        "stabilizer_order=2880 -I central quotient=1440 demicap=240 orbit=101088 split=720/720 row_image=720 outer=yes",
        "automorphisms of a maximal cap and of a demicap",
        || {
            flatten((|| {
                let stab = ok_or_msg(cap_stabilizer(&c0))?;
                let neg = stab.contains(&crate::symmetry::LinearMap::NEG_IDENTITY);
                let d = demicaps_in_cap(&c0)[0];
                let dstab = ok_or_msg(demicap_stabilizer(&d))?;
                let grid = ok_or_msg(crate::partitions::build_grid36(&c0))?;
                let actions = ok_or_msg(grid_action(&stab, &grid))?;
                let s = summarize(&actions);
                let o = ok_or_msg(outer_automorphism_check(&actions, &grid))?;
                let outer = o.transpositions_to_triples && o.triples_to_transpositions && o.six_cycles_to_three_two_one && o.isomorphism;
                Ok(format!(
                    "stabilizer_order={} {} quotient={} demicap={} orbit={} split={}/{} row_image={} outer={}",
                    stab.order(),
                    if neg { "-I central" } else { "-I missing" },
                    stab.quotient_representatives().len(),
                    dstab.len(),
                    GL_ORDER / dstab.len() as u64,
                    s.non_swapping,
                    s.swapping,
                    s.row_action_order,
                    if outer { "yes" } else { "no" }
                ))
            })())
        },
    ));

    checks.push(run("hyperplane_profiles", "21 caps: {[8, 6, 6], [9, 9, 2]}", "hyperplane sections of a maximal cap", || {
        let mut kinds = BTreeSet::new();
        for c in std::iter::once(&c0).chain(&sample_caps) {
            kinds.extend(hyperplane_profile(c));
        }
        format!("{} caps: {{{}}}", 1 + sample_caps.len(), kinds.iter().map(|t| format!("{t:?}")).join(", "))
    }));

    let maps: Vec<AffineMap> = (0..100).map(|_| AffineMap::random(&mut rng)).collect();
    let partners = crate::partitions::disjoint_maximal_caps(&c0);
    let picks: Vec<MaximalCap> = maps.iter().map(|_| *partners.choose(&mut rng).expect("partners")).collect();
    checks.push(run("equivariance", "100 maps preserve cap/demicap/anchor/completability", "affine invariance", || {
        let dec = decompositions(&c0)[0];
        let failures = maps
            .iter()
            .zip(&picks)
            .filter(|(g, p)| {
                let cap_ok = is_cap(g.apply_set(c0.points()));
                let demi_ok = recognize_demicap(g.apply_set(dec.half_a.points())).map(|d| d.anchor()) == Ok(g.apply_point(c0.anchor()));
                let anchor_ok = find_anchor(g.apply_set(c0.points())) == Ok(g.apply_point(c0.anchor()));
                let class_ok = completability(&g.apply_cap(&c0), &g.apply_cap(p)).ok() == completability(&c0, p).ok();
                !(cap_ok && demi_ok && anchor_ok && class_ok)
            })
            .count();
        if failures == 0 {
            format!("{} maps preserve cap/demicap/anchor/completability", maps.len())
        } else {
            format!("{failures} of {} maps break an invariant", maps.len())
        }
    }));

    let overall = checks.iter().all(|c| c.pass);
    VerificationReport { seed, checks, overall }
}
