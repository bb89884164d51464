//! GL(4,3) and Aff(4,3) acting on points, stabilizers of caps and demicaps,
//! and the action of a cap's stabilizer on its 6×6 grid of partners.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::caps::MaximalCap;
use crate::demicaps::{recognize_demicap, Demicap, DemicapError};
use crate::gf3geom::{Point, PointSet, NUM_POINTS};
use crate::partitions::{completability, GridOf36, PartitionError};

/// |GL(4,3)| = 80·78·72·54.
pub const GL_ORDER: u64 = 24_261_120;
pub const CAP_STABILIZER_ORDER: usize = 2880;
pub const DEMICAP_STABILIZER_ORDER: usize = 240;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("matrix is singular mod 3")]
    SingularMatrix,
    #[error("matrix entries must be 0, 1 or 2")]
    BadEntry,
    #[error("anchor must be the origin, found {0}")]
    AnchorNotOrigin(Point),
    #[error("the map does not fix the cap")]
    NotInStabilizer,
    #[error("action inconsistent: {0}")]
    ActionInconsistent(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Demicap(#[from] DemicapError),
}

const BASIS: [Point; 4] = {
    // e1..e4 have indices 27, 9, 3, 1.
    [Point::from_index_unchecked(27), Point::from_index_unchecked(9), Point::from_index_unchecked(3), Point::from_index_unchecked(1)]
};

/// An invertible 4×4 matrix over GF(3), acting on column vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearMap {
    m: [[u8; 4]; 4],
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.m)
    }
}

impl Serialize for LinearMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.m.serialize(s)
    }
}

fn det3(m: &[[i32; 3]; 3]) -> i32 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl LinearMap {
    pub const IDENTITY: LinearMap = LinearMap { m: [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]] };
    pub const NEG_IDENTITY: LinearMap = LinearMap { m: [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]] };

    pub fn from_matrix(m: [[u8; 4]; 4]) -> Result<LinearMap, SymmetryError> {
        if m.iter().flatten().any(|&x| x > 2) {
            return Err(SymmetryError::BadEntry);
        }
        let a = LinearMap { m };
        if a.det() == 0 {
            return Err(SymmetryError::SingularMatrix);
        }
        Ok(a)
    }

    /// The map sending e_i to `images[i]`.
    pub fn from_basis_images(images: [Point; 4]) -> Result<LinearMap, SymmetryError> {
        let mut m = [[0u8; 4]; 4];
        for (c, p) in images.iter().enumerate() {
            for (r, d) in p.digits().iter().enumerate() {
                m[r][c] = *d;
            }
        }
        LinearMap::from_matrix(m)
    }

    pub fn matrix(&self) -> [[u8; 4]; 4] {
        self.m
    }

    /// Determinant in {0, 1, 2}.
    pub fn det(&self) -> u8 {
        let mut total = 0i32;
        for c in 0..4 {
            let mut minor = [[0i32; 3]; 3];
            for r in 1..4 {
                let mut k = 0;
                for cc in (0..4).filter(|&cc| cc != c) {
                    minor[r - 1][k] = self.m[r][cc] as i32;
                    k += 1;
                }
            }
            let sign = if c % 2 == 0 { 1 } else { -1 };
            total += sign * self.m[0][c] as i32 * det3(&minor);
        }
        total.rem_euclid(3) as u8
    }

    pub fn apply_point(&self, p: Point) -> Point {
        let x = p.digits();
        let mut y = [0u8; 4];
        for (r, out) in y.iter_mut().enumerate() {
            *out = ((0..4).map(|c| self.m[r][c] as u32 * x[c] as u32).sum::<u32>() % 3) as u8;
        }
        Point::from_digits(y).expect("digits reduced mod 3")
    }

    /// Image of every point, indexed by point.
    pub fn permutation(&self) -> [Point; NUM_POINTS] {
        let mut out = [Point::ORIGIN; NUM_POINTS];
        for p in Point::all() {
            out[p.index()] = self.apply_point(p);
        }
        out
    }

    pub fn apply_set(&self, s: PointSet) -> PointSet {
        s.iter().map(|p| self.apply_point(p)).collect()
    }

    pub fn apply_cap(&self, c: &MaximalCap) -> MaximalCap {
        MaximalCap::from_parts_unchecked(self.apply_set(c.points()), self.apply_point(c.anchor()))
    }

    pub fn apply_demicap(&self, d: &Demicap) -> Demicap {
        recognize_demicap(self.apply_set(d.points())).expect("linear maps preserve demicaps")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        let mut m = [[0u8; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, out) in row.iter_mut().enumerate() {
                *out = ((0..4).map(|k| self.m[r][k] as u32 * other.m[k][c] as u32).sum::<u32>() % 3) as u8;
            }
        }
        LinearMap { m }
    }

    pub fn inverse(&self) -> LinearMap {
        let perm = self.permutation();
        let mut images = [Point::ORIGIN; 4];
        for (i, e) in BASIS.iter().enumerate() {
            images[i] = Point::all().find(|p| perm[p.index()] == *e).expect("invertible");
        }
        LinearMap::from_basis_images(images).expect("inverse of an invertible map")
    }

    pub fn neg(&self) -> LinearMap {
        LinearMap::NEG_IDENTITY.compose(self)
    }

    /// The 16 entries, two bits each, row-major from the high end.
    pub fn pack(&self) -> u32 {
        self.m.iter().flatten().fold(0u32, |acc, &x| acc << 2 | x as u32)
    }

    pub fn unpack(bits: u32) -> Result<LinearMap, SymmetryError> {
        let mut m = [[0u8; 4]; 4];
        for k in 0..16 {
            m[k / 4][k % 4] = (bits >> (2 * (15 - k)) & 3) as u8;
        }
        LinearMap::from_matrix(m)
    }

    pub fn order(&self) -> usize {
        let mut g = *self;
        let mut n = 1;
        while g != LinearMap::IDENTITY {
            g = g.compose(self);
            n += 1;
        }
        n
    }

    /// I + E_ij for i ≠ j.
    pub fn transvection(i: usize, j: usize) -> LinearMap {
        let mut m = LinearMap::IDENTITY.m;
        m[i][j] = 1;
        LinearMap { m }
    }

    /// Uniform element of GL(4,3).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> LinearMap {
        loop {
            let mut m = [[0u8; 4]; 4];
            for x in m.iter_mut().flatten() {
                *x = rng.gen_range(0..3);
            }
            if let Ok(a) = LinearMap::from_matrix(m) {
                return a;
            }
        }
    }
}

/// The 12 elementary transvections and diag(2,1,1,1), which together
/// generate GL(4,3).
pub fn gl_generators() -> Vec<LinearMap> {
    let mut gens: Vec<LinearMap> =
        (0..4).flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| LinearMap::transvection(i, j))).collect();
    let mut d = LinearMap::IDENTITY.m;
    d[0][0] = 2;
    gens.push(LinearMap { m: d });
    gens
}

/// `v ↦ A·v + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineMap {
    pub linear: LinearMap,
    pub translation: Point,
}

impl AffineMap {
    pub fn new(linear: LinearMap, translation: Point) -> AffineMap {
        AffineMap { linear, translation }
    }

    pub fn apply_point(&self, p: Point) -> Point {
        self.linear.apply_point(p).add(self.translation)
    }

    pub fn apply_set(&self, s: PointSet) -> PointSet {
        s.iter().map(|p| self.apply_point(p)).collect()
    }

    pub fn apply_cap(&self, c: &MaximalCap) -> MaximalCap {
        MaximalCap::from_parts_unchecked(self.apply_set(c.points()), self.apply_point(c.anchor()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear.compose(&other.linear),
            translation: self.linear.apply_point(other.translation).add(self.translation),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.linear.inverse();
        AffineMap { linear: inv, translation: inv.apply_point(self.translation).neg() }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> AffineMap {
        let t = Point::new(rng.gen_range(0..NUM_POINTS)).expect("in range");
        AffineMap { linear: LinearMap::random(rng), translation: t }
    }
}

pub fn apply(g: &AffineMap, s: PointSet) -> PointSet {
    g.apply_set(s)
}

/// Every linear map `A` with `A·s = s`, sorted by packed matrix.
///
/// Backtracks over the images of e1..e4. After fixing the first k images the
/// map is known on the span of e1..ek, and every spanned point must keep its
/// membership in `s`.
pub fn set_stabilizer(s: PointSet) -> Vec<LinearMap> {
    let firsts: Vec<Point> = Point::all().filter(|&p| p != Point::ORIGIN).collect();
    let mut out: Vec<LinearMap> = firsts
        .par_iter()
        .flat_map_iter(|&img| {
            let mut found = Vec::new();
            let mut images = [Point::ORIGIN; 4];
            extend(s, 0, img, &[Point::ORIGIN], &[Point::ORIGIN], &mut images, &mut found);
            found
        })
        .collect();
    out.sort_by_key(|g| g.pack());
    out
}

fn extend(
    s: PointSet,
    depth: usize,
    img: Point,
    src: &[Point],
    dst: &[Point],
    images: &mut [Point; 4],
    found: &mut Vec<LinearMap>,
) {
    let e = BASIS[depth];
    let mut src2 = Vec::with_capacity(src.len() * 3);
    let mut dst2 = Vec::with_capacity(src.len() * 3);
    for c in 0..3u8 {
        for (v, w) in src.iter().zip(dst) {
            let (v2, w2) = (v.add(e.scale(c)), w.add(img.scale(c)));
            if c > 0 && s.contains(v2) != s.contains(w2) {
                return;
            }
            src2.push(v2);
            dst2.push(w2);
        }
    }
    images[depth] = img;
    if depth == 3 {
        found.push(LinearMap::from_basis_images(*images).expect("independent images"));
        return;
    }
    let reached: PointSet = dst2.iter().copied().collect();
    for next in Point::all().filter(|p| !reached.contains(*p)) {
        extend(s, depth + 1, next, &src2, &dst2, images, found);
    }
}

fn require_origin(anchor: Point) -> Result<(), SymmetryError> {
    if anchor == Point::ORIGIN {
        Ok(())
    } else {
        Err(SymmetryError::AnchorNotOrigin(anchor))
    }
}

/// Linear maps fixing a maximal cap anchored at the origin.
#[derive(Clone, Debug, Serialize)]
pub struct CapStabilizer {
    pub base_cap: MaximalCap,
    pub elements: Vec<LinearMap>,
}

impl CapStabilizer {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &LinearMap) -> bool {
        self.elements.binary_search_by_key(&g.pack(), |x| x.pack()).is_ok()
    }

    /// Closed under composition and inverses, and contains the identity.
    pub fn is_group(&self) -> bool {
        let keys: HashSet<u32> = self.elements.iter().map(|g| g.pack()).collect();
        keys.contains(&LinearMap::IDENTITY.pack())
            && self.elements.iter().all(|g| keys.contains(&g.inverse().pack()))
            && self.elements.par_iter().all(|a| self.elements.iter().all(|b| keys.contains(&a.compose(b).pack())))
    }

    /// One of each pair `{g, -g}`.
    pub fn quotient_representatives(&self) -> Vec<LinearMap> {
        self.elements.iter().copied().filter(|g| g.pack() < g.neg().pack()).collect()
    }
}

pub fn cap_stabilizer(c: &MaximalCap) -> Result<CapStabilizer, SymmetryError> {
    require_origin(c.anchor())?;
    Ok(CapStabilizer { base_cap: *c, elements: set_stabilizer(c.points()) })
}

pub fn demicap_stabilizer(d: &Demicap) -> Result<Vec<LinearMap>, SymmetryError> {
    require_origin(d.anchor())?;
    Ok(set_stabilizer(d.points()))
}

/// Number of elements of each order.
pub fn order_census(group: &[LinearMap]) -> BTreeMap<usize, usize> {
    let mut census = BTreeMap::new();
    for g in group {
        *census.entry(g.order()).or_insert(0) += 1;
    }
    census
}

pub fn center(group: &[LinearMap]) -> Vec<LinearMap> {
    group.iter().copied().filter(|a| group.iter().all(|b| a.compose(b) == b.compose(a))).collect()
}

/// Orbit of `s` under the group generated by `generators`.
pub fn orbit(s: PointSet, generators: &[LinearMap]) -> HashSet<PointSet> {
    let perms: Vec<[Point; NUM_POINTS]> = generators.iter().map(|g| g.permutation()).collect();
    let mut seen = HashSet::from([s]);
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for perm in &perms {
            let y: PointSet = x.iter().map(|p| perm[p.index()]).collect();
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// A permutation of six items as an image array.
pub type Perm6 = [u8; 6];

pub fn compose_perm(a: &Perm6, b: &Perm6) -> Perm6 {
    std::array::from_fn(|i| a[b[i] as usize])
}

/// Cycle lengths, largest first, fixed points included.
pub fn cycle_type(p: &Perm6) -> Vec<u8> {
    let mut seen = [false; 6];
    let mut lengths = Vec::new();
    for start in 0..6 {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    lengths
}

/// How one stabilizer element moves the grid's rows and columns.
///
/// Without a swap, row `i` goes to row `row_perm[i]` and column `j` to column
/// `col_perm[j]`. With a swap, row `i` goes to column `row_perm[i]` and
/// column `j` to row `col_perm[j]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridAction {
    pub element: LinearMap,
    pub swaps: bool,
    pub row_perm: Perm6,
    pub col_perm: Perm6,
}

fn locate(images: &[PointSet], targets: &[Demicap; 6]) -> Option<Perm6> {
    let mut perm = [0u8; 6];
    for (i, img) in images.iter().enumerate() {
        perm[i] = targets.iter().position(|d| d.points() == *img)? as u8;
    }
    Some(perm)
}

pub fn action_on_grid(g: &LinearMap, grid: &GridOf36) -> Result<GridAction, SymmetryError> {
    let rows: Vec<PointSet> = grid.rows.iter().map(|d| g.apply_set(d.points())).collect();
    let cols: Vec<PointSet> = grid.cols.iter().map(|d| g.apply_set(d.points())).collect();
    let action = match (locate(&rows, &grid.rows), locate(&cols, &grid.cols)) {
        (Some(r), Some(c)) => GridAction { element: *g, swaps: false, row_perm: r, col_perm: c },
        _ => match (locate(&rows, &grid.cols), locate(&cols, &grid.rows)) {
            (Some(r), Some(c)) => GridAction { element: *g, swaps: true, row_perm: r, col_perm: c },
            _ => return Err(SymmetryError::ActionInconsistent("the 12 demicaps are not permuted".into())),
        },
    };
    for i in 0..6 {
        for j in 0..6 {
            let (r, c) = if action.swaps {
                (action.col_perm[j] as usize, action.row_perm[i] as usize)
            } else {
                (action.row_perm[i] as usize, action.col_perm[j] as usize)
            };
            if g.apply_set(grid.caps[i][j].points()) != grid.caps[r][c].points() {
                return Err(SymmetryError::ActionInconsistent(format!("cap ({i},{j}) is not sent to ({r},{c})")));
            }
        }
    }
    Ok(action)
}

/// Action of each element of the stabilizer modulo `-I` on the grid.
pub fn grid_action(stab: &CapStabilizer, grid: &GridOf36) -> Result<Vec<GridAction>, SymmetryError> {
    if grid.base != stab.base_cap {
        return Err(SymmetryError::ActionInconsistent("grid built from a different cap".into()));
    }
    stab.quotient_representatives().par_iter().map(|g| action_on_grid(g, grid)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridActionSummary {
    pub elements: usize,
    pub non_swapping: usize,
    pub swapping: usize,
    /// Distinct permutations of the rows among non-swapping elements.
    pub row_action_order: usize,
    pub col_action_order: usize,
}

pub fn summarize(actions: &[GridAction]) -> GridActionSummary {
    let fixed: Vec<&GridAction> = actions.iter().filter(|a| !a.swaps).collect();
    let rows: HashSet<Perm6> = fixed.iter().map(|a| a.row_perm).collect();
    let cols: HashSet<Perm6> = fixed.iter().map(|a| a.col_perm).collect();
    GridActionSummary {
        elements: actions.len(),
        non_swapping: fixed.len(),
        swapping: actions.len() - fixed.len(),
        row_action_order: rows.len(),
        col_action_order: cols.len(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OuterAutomorphismReport {
    /// (row cycle type, column cycle type, number of non-swapping elements).
    pub cycle_type_pairs: Vec<(Vec<u8>, Vec<u8>, usize)>,
    /// Row transpositions act on columns as three disjoint transpositions.
    pub transpositions_to_triples: bool,
    /// And the other way round.
    pub triples_to_transpositions: bool,
    /// Row 6-cycles act on columns with cycle type 3+2+1.
    pub six_cycles_to_three_two_one: bool,
    /// `row_perm ↦ col_perm` is a well-defined bijective homomorphism.
    pub isomorphism: bool,
    /// The isomorphism does not preserve cycle type, so it is not inner.
    pub not_inner: bool,
    /// Every product of two swapping elements is non-swapping.
    pub swap_products_non_swapping: bool,
}

pub fn outer_automorphism_check(actions: &[GridAction], grid: &GridOf36) -> Result<OuterAutomorphismReport, SymmetryError> {
    let fixed: Vec<&GridAction> = actions.iter().filter(|a| !a.swaps).collect();
    let mut pairs: BTreeMap<(Vec<u8>, Vec<u8>), usize> = BTreeMap::new();
    for a in &fixed {
        *pairs.entry((cycle_type(&a.row_perm), cycle_type(&a.col_perm))).or_insert(0) += 1;
    }
    let transposition = vec![2, 1, 1, 1, 1];
    let triple = vec![2, 2, 2];
    let six = vec![6];
    let three_two_one = vec![3, 2, 1];
    let maps_to = |from: &Vec<u8>, to: &Vec<u8>, row_side: bool| {
        let relevant: Vec<_> = pairs.iter().filter(|((r, c), _)| if row_side { r == from } else { c == from }).collect();
        !relevant.is_empty() && relevant.iter().all(|((r, c), _)| if row_side { c == to } else { r == to })
    };
    let transpositions_to_triples = maps_to(&transposition, &triple, true) && maps_to(&triple, &transposition, false);
    let triples_to_transpositions = maps_to(&triple, &transposition, true) && maps_to(&transposition, &triple, false);
    let six_cycles_to_three_two_one = maps_to(&six, &three_two_one, true);

    let mut phi: HashMap<Perm6, Perm6> = HashMap::new();
    let mut well_defined = true;
    for a in &fixed {
        if *phi.entry(a.row_perm).or_insert(a.col_perm) != a.col_perm {
            well_defined = false;
        }
    }
    let injective = phi.values().collect::<HashSet<_>>().len() == phi.len();
    let homomorphic = well_defined
        && phi.par_iter().all(|(p, fp)| {
            phi.iter().all(|(q, fq)| phi.get(&compose_perm(p, q)) == Some(&compose_perm(fp, fq)))
        });
    let not_inner = pairs.keys().any(|(r, c)| r != c);

    let swapping: Vec<&GridAction> = actions.iter().filter(|a| a.swaps).collect();
    let mut swap_products_non_swapping = true;
    for (k, a) in swapping.iter().enumerate() {
        let b = swapping[(k * 7 + 1) % swapping.len()];
        for g in [a.element.compose(&a.element), a.element.compose(&b.element)] {
            if action_on_grid(&g, grid)?.swaps {
                swap_products_non_swapping = false;
            }
        }
    }
    Ok(OuterAutomorphismReport {
        cycle_type_pairs: pairs.into_iter().map(|((r, c), n)| (r, c, n)).collect(),
        transpositions_to_triples,
        triples_to_transpositions,
        six_cycles_to_three_two_one,
        isomorphism: well_defined && injective && homomorphic,
        not_inner,
        swap_products_non_swapping: swap_products_non_swapping && !swapping.is_empty(),
    })
}

/// Whether `{c, t·cp}` has the same completability as `{c, cp}`.
pub fn completability_invariance(t: &LinearMap, c: &MaximalCap, cp: &MaximalCap) -> Result<bool, SymmetryError> {
    if t.apply_set(c.points()) != c.points() {
        return Err(SymmetryError::NotInStabilizer);
    }
    Ok(completability(c, cp)? == completability(c, &t.apply_cap(cp))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::canonical_cap;
    use crate::demicaps::demicaps_in_cap;
    use rand::SeedableRng;

    #[test]
    fn gl_order_formula() {
        let order: u64 = (0..4).map(|i| 81 - 3u64.pow(i)).product();
        assert_eq!(order, GL_ORDER);
    }

    #[test]
    fn determinants_and_inverses() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..50 {
            let a = LinearMap::random(&mut rng);
            assert_ne!(a.det(), 0);
            assert_eq!(a.compose(&a.inverse()), LinearMap::IDENTITY);
            assert_eq!(LinearMap::unpack(a.pack()), Ok(a));
            let b = LinearMap::random(&mut rng);
            assert_eq!(a.compose(&b).det(), (a.det() * b.det()) % 3);
            let p = Point::new(rng.gen_range(0..81)).unwrap();
            assert_eq!(a.compose(&b).apply_point(p), a.apply_point(b.apply_point(p)));
        }
        assert_eq!(LinearMap::from_matrix([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]), Err(SymmetryError::SingularMatrix));
        assert_eq!(LinearMap::from_matrix([[3, 0, 0, 0]; 4]), Err(SymmetryError::BadEntry));
    }

    #[test]
    fn affine_group_laws() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        for _ in 0..20 {
            let f = AffineMap::random(&mut rng);
            let g = AffineMap::random(&mut rng);
            let p = Point::new(rng.gen_range(0..81)).unwrap();
            assert_eq!(f.compose(&g).apply_point(p), f.apply_point(g.apply_point(p)));
            assert_eq!(f.inverse().apply_point(f.apply_point(p)), p);
        }
    }

    #[test]
    fn neg_identity_fixes_anchored_demicaps() {
        for d in demicaps_in_cap(&canonical_cap()) {
            assert_eq!(LinearMap::NEG_IDENTITY.apply_set(d.points()), d.points());
        }
    }

    #[test]
    fn translation_moves_anchor() {
        let t = Point::new(40).unwrap();
        let g = AffineMap::new(LinearMap::IDENTITY, t);
        let img = g.apply_cap(&canonical_cap());
        assert_eq!(MaximalCap::new(img.points()).unwrap().anchor(), t);
    }

    #[test]
    fn cycle_types() {
        assert_eq!(cycle_type(&[0, 1, 2, 3, 4, 5]), vec![1; 6]);
        assert_eq!(cycle_type(&[1, 0, 3, 2, 5, 4]), vec![2, 2, 2]);
        assert_eq!(cycle_type(&[1, 2, 3, 4, 5, 0]), vec![6]);
        assert_eq!(cycle_type(&[1, 2, 0, 4, 3, 5]), vec![3, 2, 1]);
    }

    #[test]
    fn generators_have_unit_determinant_except_one() {
        let gens = gl_generators();
        assert_eq!(gens.len(), 13);
        assert_eq!(gens.iter().filter(|g| g.det() == 2).count(), 1);
    }

    #[test]
    fn stabilizer_rejects_other_anchors() {
        let c = canonical_cap().translate(Point::new(1).unwrap());
        assert!(matches!(cap_stabilizer(&c), Err(SymmetryError::AnchorNotOrigin(_))));
    }
}
