//! Explicit-basis matroids with the minor operations driving the
//! deletion-contraction recursion. Ground sets are [n] with n <= 16,
//! subsets are bitmasks (element i <-> bit i, 0-indexed internally).

use crate::{Error, Result};

pub const MAX_GROUND_SET: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    n: usize,
    bases: Vec<u32>, // sorted, deduped bitmasks, all of equal popcount
}

/// A triple (B1, B2, x) for which basis exchange fails, or a structural
/// defect of the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExchangeFailure {
    Empty,
    NotEquicardinal(u32, u32),
    Exchange { b1: u32, b2: u32, x: usize },
}

impl Matroid {
    pub fn from_bases(n: usize, bases: Vec<u32>) -> Result<Self> {
        assert!(n <= MAX_GROUND_SET, "ground set capped at {MAX_GROUND_SET}");
        let mut bases = bases;
        bases.sort_unstable();
        bases.dedup();
        let m = Matroid { n, bases };
        match m.check_exchange() {
            None => Ok(m),
            Some(w) => Err(Error::InvalidMatroid(format!("{w:?}"))),
        }
    }

    /// Basis-exchange validation; returns a witness on failure.
    pub fn check_exchange(&self) -> Option<ExchangeFailure> {
        if self.bases.is_empty() {
            return Some(ExchangeFailure::Empty);
        }
        let r = self.bases[0].count_ones();
        for &b in &self.bases {
            if b.count_ones() != r {
                return Some(ExchangeFailure::NotEquicardinal(self.bases[0], b));
            }
            if b >= 1 << self.n {
                return Some(ExchangeFailure::NotEquicardinal(b, b));
            }
        }
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                let mut diff = b1 & !b2;
                while diff != 0 {
                    let x = diff.trailing_zeros() as usize;
                    diff &= diff - 1;
                    let mut found = false;
                    let mut cand = b2 & !b1;
                    while cand != 0 {
                        let y = cand.trailing_zeros() as usize;
                        cand &= cand - 1;
                        let b = (b1 & !(1 << x)) | (1 << y);
                        if self.bases.binary_search(&b).is_ok() {
                            found = true;
                            break;
                        }
                    }
                    if !found {
                        return Some(ExchangeFailure::Exchange { b1, b2, x });
                    }
                }
            }
        }
        None
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    pub fn full_rank(&self) -> usize {
        self.bases[0].count_ones() as usize
    }

    /// r(S) = max over bases B of |B ∩ S|.
    pub fn rank(&self, s: u32) -> usize {
        self.bases
            .iter()
            .map(|&b| (b & s).count_ones() as usize)
            .max()
            .unwrap()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.bases.iter().all(|&b| b & (1 << e) == 0)
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        self.bases.iter().all(|&b| b & (1 << e) != 0)
    }

    /// Remove element e from a mask and close the gap (dense re-indexing).
    fn squeeze(mask: u32, e: usize) -> u32 {
        let low = mask & ((1 << e) - 1);
        let high = mask >> (e + 1);
        low | (high << e)
    }

    pub fn delete(&self, e: usize) -> Result<Self> {
        if self.is_coloop(e) {
            return Err(Error::DeleteColoop(e));
        }
        let bases = self
            .bases
            .iter()
            .filter(|&&b| b & (1 << e) == 0)
            .map(|&b| Self::squeeze(b, e))
            .collect();
        Ok(Matroid {
            n: self.n - 1,
            bases: sorted(bases),
        })
    }

    pub fn contract(&self, e: usize) -> Result<Self> {
        if self.is_loop(e) {
            return Err(Error::ContractLoop(e));
        }
        let bases = self
            .bases
            .iter()
            .filter(|&&b| b & (1 << e) != 0)
            .map(|&b| Self::squeeze(b & !(1 << e), e))
            .collect();
        Ok(Matroid {
            n: self.n - 1,
            bases: sorted(bases),
        })
    }

    pub fn uniform(r: usize, n: usize) -> Self {
        assert!(r <= n && n <= MAX_GROUND_SET);
        let bases = (0u32..1 << n)
            .filter(|b| b.count_ones() as usize == r)
            .collect();
        Matroid { n, bases }
    }

    /// Graphic matroid on the edge list (vertices 0-indexed); bases are the
    /// maximal spanning forests.
    pub fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Self {
        let n = edges.len();
        assert!(n <= MAX_GROUND_SET);
        let rank = {
            let mut uf = UnionFind::new(vertices);
            let mut r = 0;
            for &(a, b) in edges {
                if uf.union(a, b) {
                    r += 1;
                }
            }
            r
        };
        let bases = (0u32..1 << n)
            .filter(|&s| {
                if s.count_ones() as usize != rank {
                    return false;
                }
                let mut uf = UnionFind::new(vertices);
                let mut ok = true;
                for (i, &(a, b)) in edges.iter().enumerate() {
                    if s & (1 << i) != 0 && !uf.union(a, b) {
                        ok = false;
                        break;
                    }
                }
                ok
            })
            .collect();
        Matroid { n, bases }
    }

    pub fn direct_sum(m1: &Matroid, m2: &Matroid) -> Self {
        let n = m1.n + m2.n;
        assert!(n <= MAX_GROUND_SET);
        let mut bases = vec![];
        for &b1 in &m1.bases {
            for &b2 in &m2.bases {
                bases.push(b1 | (b2 << m1.n));
            }
        }
        Matroid {
            n,
            bases: sorted(bases),
        }
    }
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra] = rb;
            true
        }
    }
}

pub fn k4_edges() -> Vec<(usize, usize)> {
    vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(elems: &[usize]) -> u32 {
        elems.iter().fold(0, |m, &e| m | (1 << e))
    }

    #[test]
    fn validate_examples() {
        assert!(Matroid::from_bases(3, vec![mask(&[0, 1]), mask(&[0, 2]), mask(&[1, 2])]).is_ok());
        assert!(Matroid::from_bases(4, vec![mask(&[0, 1]), mask(&[2, 3])]).is_err());
        assert!(Matroid::from_bases(2, vec![mask(&[0]), mask(&[0, 1])]).is_err());
        assert!(Matroid::from_bases(2, vec![]).is_err());
    }

    #[test]
    fn rank_examples() {
        let u24 = Matroid::uniform(2, 4);
        assert_eq!(u24.rank(0), 0);
        assert_eq!(u24.rank(mask(&[0, 1, 2])), 2);
        let k4 = Matroid::graphic(4, &k4_edges());
        // edges (0,1),(0,2),(1,2) form a triangle
        assert_eq!(k4.rank(mask(&[0, 1, 3])), 2);
    }

    #[test]
    fn constructors() {
        assert_eq!(Matroid::uniform(2, 4).bases().len(), 6);
        assert_eq!(Matroid::graphic(4, &k4_edges()).bases().len(), 16);
        let u12 = Matroid::uniform(1, 2);
        let ds = Matroid::direct_sum(&u12, &u12);
        assert_eq!(ds.bases().len(), 4);
        assert!(ds.check_exchange().is_none());
    }

    #[test]
    fn minors() {
        let u24 = Matroid::uniform(2, 4);
        assert_eq!(u24.delete(0).unwrap(), Matroid::uniform(2, 3));
        assert_eq!(u24.contract(0).unwrap(), Matroid::uniform(1, 3));
        let u12 = Matroid::uniform(1, 2);
        let ds = Matroid::direct_sum(&u12, &u12);
        let c = ds.contract(0).unwrap();
        // contracting element 1 of the first block leaves U(1,2) on the
        // second block plus a loop from the first block
        assert_eq!(c.n(), 3);
        assert_eq!(c.bases().to_vec(), vec![mask(&[1]), mask(&[2])]);
    }

    #[test]
    fn loops_and_coloops() {
        let u23 = Matroid::uniform(2, 3);
        for e in 0..3 {
            assert!(!u23.is_loop(e) && !u23.is_coloop(e));
        }
        let m = Matroid::from_bases(3, vec![mask(&[0, 1])]).unwrap();
        assert!(m.is_loop(2));
        assert!(m.is_coloop(0));
        let u11 = Matroid::uniform(1, 1);
        assert!(u11.is_coloop(0));
    }

    #[test]
    fn minor_errors() {
        let m = Matroid::from_bases(3, vec![mask(&[0, 1])]).unwrap();
        assert!(m.delete(0).is_err()); // coloop
        assert!(m.contract(2).is_err()); // loop
    }

    #[test]
    fn deletion_contraction_count() {
        for (r, n) in [(1, 3), (2, 4), (2, 5), (3, 5)] {
            let m = Matroid::uniform(r, n);
            let total = m.bases().len();
            let d = m.delete(0).unwrap().bases().len();
            let c = m.contract(0).unwrap().bases().len();
            assert_eq!(total, d + c);
        }
    }

    #[test]
    fn rank_submodular_exhaustive() {
        for m in [
            Matroid::uniform(2, 4),
            Matroid::uniform(2, 5),
            Matroid::graphic(3, &[(0, 1), (1, 2), (0, 2)]),
            Matroid::from_bases(4, vec![mask(&[0, 1]), mask(&[0, 2])]).unwrap(),
        ] {
            let n = m.n();
            for s in 0u32..1 << n {
                for t in 0u32..1 << n {
                    assert!(m.rank(s) + m.rank(t) >= m.rank(s | t) + m.rank(s & t));
                    if t & !s == 0 {
                        assert!(m.rank(t) <= m.rank(s));
                    }
                }
            }
        }
    }

    #[test]
    fn minors_validate() {
        let k4 = Matroid::graphic(4, &k4_edges());
        assert!(k4.delete(0).unwrap().check_exchange().is_none());
        assert!(k4.contract(0).unwrap().check_exchange().is_none());
    }
}
