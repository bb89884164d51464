//! AG(n,3) for n <= 4 with unrestricted point-level cap search.
//!
//! Used for the small rows of the maximal-cap table and as an oracle that
//! does not assume anything about how maximal caps are built.

use super::CapError;

pub struct SmallSpace {
    pub dim: usize,
    pub size: usize,
    third: Vec<u8>,
}

impl SmallSpace {
    pub fn new(dim: usize) -> Result<SmallSpace, CapError> {
        if !(1..=4).contains(&dim) {
            return Err(CapError::UnsupportedDimension(dim));
        }
        let size = 3usize.pow(dim as u32);
        let digits = |mut i: usize| {
            let mut d = vec![0usize; dim];
            for k in (0..dim).rev() {
                d[k] = i % 3;
                i /= 3;
            }
            d
        };
        let mut third = vec![0u8; size * size];
        for p in 0..size {
            let a = digits(p);
            for q in 0..size {
                let b = digits(q);
                third[p * size + q] =
                    (0..dim).fold(0usize, |acc, k| acc * 3 + (6 - a[k] - b[k]) % 3) as u8;
            }
        }
        Ok(SmallSpace { dim, size, third })
    }

    #[inline]
    pub fn third(&self, p: usize, q: usize) -> usize {
        self.third[p * self.size + q] as usize
    }

    pub fn is_cap(&self, set: u128) -> bool {
        let pts = members(set);
        pts.iter().enumerate().all(|(i, &p)| {
            pts[i + 1..].iter().all(|&q| set >> self.third(p, q) & 1 == 0)
        })
    }

    /// Lines completed by each point with pairs from `set`.
    pub fn completion_counts(&self, set: u128) -> Vec<u32> {
        let pts = members(set);
        let mut counts = vec![0u32; self.size];
        for (i, &p) in pts.iter().enumerate() {
            for &q in &pts[i + 1..] {
                let r = self.third(p, q);
                if set >> r & 1 == 0 {
                    counts[r] += 1;
                }
            }
        }
        counts
    }

    /// Largest cap containing point 0, by branch and bound over all points.
    /// Every cap is a translate of one through 0, so this is the maximum.
    pub fn max_cap_size(&self) -> usize {
        let mut best = 0;
        self.branch(1, 1, 1u128, &mut best);
        best
    }

    /// Every cap of size `k` that contains point 0.
    pub fn caps_through_origin(&self, k: usize) -> Vec<u128> {
        let mut out = Vec::new();
        self.branch_exact(1, 1u128, 1u128, k, &mut out);
        out
    }

    // `forbidden` holds members plus every point completing a line with two members.
    fn branch(&self, next: usize, set: u128, forbidden: u128, best: &mut usize) {
        let n = set.count_ones() as usize;
        if n > *best {
            *best = n;
        }
        let open: Vec<usize> = (next..self.size).filter(|&p| forbidden >> p & 1 == 0).collect();
        for (i, &p) in open.iter().enumerate() {
            if n + open.len() - i <= *best {
                return;
            }
            if forbidden >> p & 1 == 1 {
                continue;
            }
            let mut f = forbidden | 1 << p;
            for q in members(set) {
                f |= 1 << self.third(p, q);
            }
            self.branch(p + 1, set | 1 << p, f, best);
        }
    }

    fn branch_exact(&self, next: usize, set: u128, forbidden: u128, k: usize, out: &mut Vec<u128>) {
        let n = set.count_ones() as usize;
        if n == k {
            out.push(set);
            return;
        }
        let open: Vec<usize> = (next..self.size).filter(|&p| forbidden >> p & 1 == 0).collect();
        for (i, &p) in open.iter().enumerate() {
            if n + open.len() - i < k {
                return;
            }
            let mut f = forbidden | 1 << p;
            for q in members(set) {
                f |= 1 << self.third(p, q);
            }
            self.branch_exact(p + 1, set | 1 << p, f, k, out);
        }
    }
}

pub(crate) fn members(set: u128) -> Vec<usize> {
    let mut v = Vec::with_capacity(set.count_ones() as usize);
    let mut rest = set;
    while rest != 0 {
        v.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    v
}
