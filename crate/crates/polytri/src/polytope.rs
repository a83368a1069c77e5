//! Lattice point configurations, base/independence polytope constructions,
//! affine-span flags, matroid-polytope recognition, and the normalized
//! volume oracle.

use crate::exact_linalg::{
    int, rref, AffineLattice, Int, Rat,
};
use crate::matroid::Matroid;
use crate::{lp, Error, Result};
use num::{One, Signed, Zero};

pub type Point = Vec<i64>;

pub fn point_to_int(p: &[i64]) -> Vec<Int> {
    p.iter().map(|&x| int(x)).collect()
}

pub fn point_to_rat(p: &[i64]) -> Vec<Rat> {
    p.iter().map(|&x| Rat::from_integer(int(x))).collect()
}

/// An affine functional on ambient space, exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFunctional {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
}

impl AffineFunctional {
    pub fn constant_fn(n: usize, c: Rat) -> Self {
        AffineFunctional {
            coeffs: vec![Rat::zero(); n],
            constant: c,
        }
    }

    pub fn eval(&self, p: &[i64]) -> Rat {
        let mut acc = self.constant.clone();
        for (c, &x) in self.coeffs.iter().zip(p) {
            if x != 0 {
                acc += c * Rat::from_integer(int(x));
            }
        }
        acc
    }

    pub fn scaled(&self, f: &Rat) -> Self {
        AffineFunctional {
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
            constant: &self.constant * f,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        AffineFunctional {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            constant: &self.constant + &other.constant,
        }
    }
}

/// A finite set of distinct integer points together with the saturated
/// lattice of their affine hull and the projection onto lattice coordinates.
#[derive(Debug, Clone)]
pub struct PointConfiguration {
    pub ambient_dim: usize,
    pub points: Vec<Point>,
    pub span: AffineLattice,
    /// lattice coordinates of each point (length = affine dim)
    coords: Vec<Vec<Int>>,
    /// left inverse of the span basis matrix (affine dim x ambient rows)
    proj: Vec<Vec<Rat>>,
}

impl PartialEq for PointConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.points == other.points
    }
}

impl PointConfiguration {
    pub fn new(ambient_dim: usize, points: Vec<Point>) -> Self {
        assert!(!points.is_empty(), "empty point configuration");
        {
            let mut sorted = points.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), points.len(), "points must be distinct");
        }
        let int_points: Vec<Vec<Int>> = points.iter().map(|p| point_to_int(p)).collect();
        let span = AffineLattice::from_points(&int_points);
        let d = span.rank();
        // proj = (B^T B)^{-1} B^T where B has the basis vectors as columns
        let proj: Vec<Vec<Rat>> = if d == 0 {
            vec![]
        } else {
            let btb: Vec<Vec<Rat>> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            Rat::from_integer(crate::exact_linalg::dot_int(
                                &span.basis[i],
                                &span.basis[j],
                            ))
                        })
                        .collect()
                })
                .collect();
            let inv = invert_rat(&btb).expect("gram matrix of independent vectors is invertible");
            (0..d)
                .map(|i| {
                    (0..ambient_dim)
                        .map(|j| {
                            (0..d)
                                .map(|k| &inv[i][k] * Rat::from_integer(span.basis[k][j].clone()))
                                .sum()
                        })
                        .collect()
                })
                .collect()
        };
        let coords: Vec<Vec<Int>> = int_points
            .iter()
            .map(|p| {
                (0..d)
                    .map(|i| {
                        let mut acc = Rat::zero();
                        for j in 0..ambient_dim {
                            acc += &proj[i][j]
                                * Rat::from_integer(&p[j] - &span.basepoint[j]);
                        }
                        assert!(acc.is_integer(), "point not in the span lattice");
                        acc.to_integer()
                    })
                    .collect()
            })
            .collect();
        PointConfiguration {
            ambient_dim,
            points,
            span,
            coords,
            proj,
        }
    }

    pub fn affine_dim(&self) -> usize {
        self.span.rank()
    }

    /// Integer lattice coordinates of every point, making the configuration
    /// full-dimensional.
    pub fn lattice_coords(&self) -> &[Vec<Int>] {
        &self.coords
    }

    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    /// Pull an affine functional on lattice coordinates back to ambient space.
    pub fn ambient_functional(&self, coord_coeffs: &[Rat], constant: &Rat) -> AffineFunctional {
        let d = self.affine_dim();
        let n = self.ambient_dim;
        let mut coeffs = vec![Rat::zero(); n];
        for j in 0..n {
            for i in 0..d {
                coeffs[j] += &coord_coeffs[i] * &self.proj[i][j];
            }
        }
        let mut c = constant.clone();
        for j in 0..n {
            c -= &coeffs[j] * Rat::from_integer(self.span.basepoint[j].clone());
        }
        AffineFunctional { coeffs, constant: c }
    }

    /// Normalized volume of the convex hull: unimodular simplices in the
    /// lattice of the affine hull have volume 1. A 0-dimensional
    /// configuration has volume 1 (a single empty-product simplex).
    pub fn normalized_volume(&self) -> Int {
        crate::polytope::placing::placing_volume(&self.coords, self.affine_dim())
    }
}

fn invert_rat(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let d = m.len();
    let mut aug: Vec<Vec<Rat>> = (0..d)
        .map(|i| {
            let mut row = m[i].clone();
            for j in 0..d {
                row.push(if i == j { Rat::one() } else { Rat::zero() });
            }
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != d {
        return None;
    }
    Some((0..d).map(|i| aug[i][d..].to_vec()).collect())
}

/// P_M = conv{indicator vectors of bases}.
pub fn base_polytope(m: &Matroid) -> PointConfiguration {
    let n = m.n();
    let points = m
        .bases()
        .iter()
        .map(|&b| (0..n).map(|i| ((b >> i) & 1) as i64).collect())
        .collect();
    PointConfiguration::new(n, points)
}

/// P_I = conv{indicator vectors of independent sets} (includes the origin).
pub fn independence_polytope_points(m: &Matroid) -> PointConfiguration {
    let n = m.n();
    let mut points = vec![];
    for s in 0u32..1 << n {
        if m.bases().iter().any(|&b| s & !b == 0) {
            points.push((0..n).map(|i| ((s >> i) & 1) as i64).collect());
        }
    }
    PointConfiguration::new(n, points)
}

/// A flag of subsets whose subset-sum equations cut out the affine hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanFlag {
    /// strictly increasing chain of subset bitmasks ending at the full set
    pub sets: Vec<u32>,
    pub values: Vec<i64>,
}

/// Minimal flag of subset-sum equations x_{S_i} = b_i cutting out aff(P).
/// Errors when no such flag exists (the input is not a translate of a
/// generalized permutahedron cell).
pub fn span_flag(p: &PointConfiguration) -> Result<SpanFlag> {
    let n = p.ambient_dim;
    assert!(n <= 30);
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let dirs = &p.span.basis;
    let valid = |s: u32| -> bool {
        dirs.iter().all(|v| {
            let mut acc = Int::zero();
            for i in 0..n {
                if s & (1 << i) != 0 {
                    acc += &v[i];
                }
            }
            acc.is_zero()
        })
    };
    let mut chain: Vec<u32> = vec![];
    let mut cur: u32 = 0;
    while cur != full {
        let mut best: Option<u32> = None;
        for s in 1..=full {
            if s & cur == cur && s != cur && valid(s) {
                let better = match best {
                    None => true,
                    Some(b) => {
                        (s.count_ones(), s) < (b.count_ones(), b)
                    }
                };
                if better {
                    best = Some(s);
                }
            }
        }
        match best {
            Some(s) => {
                chain.push(s);
                cur = s;
            }
            None => return Err(Error::NoSpanFlag),
        }
    }
    // the chain must cut out exactly aff(P): one independent equation per
    // codimension
    if chain.len() != n - p.affine_dim() {
        return Err(Error::NoSpanFlag);
    }
    let p0 = &p.points[0];
    let values = chain
        .iter()
        .map(|&s| (0..n).filter(|&i| s & (1 << i) != 0).map(|i| p0[i]).sum())
        .collect();
    Ok(SpanFlag { sets: chain, values })
}

/// Theorem-of-Gelfand-et-al recognition: a set of 0-1 points is the vertex
/// set of a matroid base polytope iff every edge direction is e_i - e_j.
pub fn is_matroid_polytope(points: &[Point]) -> bool {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.iter().any(|p| p.iter().any(|&x| x != 0 && x != 1)) {
        return false;
    }
    if pts.len() <= 1 {
        return true;
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            // adjacency: the midpoint of two vertices of a polytope lies in
            // the hull of the remaining vertices iff they are not adjacent
            let mid: Vec<Rat> = pts[i]
                .iter()
                .zip(&pts[j])
                .map(|(&a, &b)| Rat::new(int(a + b), int(2)))
                .collect();
            let others: Vec<Vec<Rat>> = pts
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i && k != j)
                .map(|(_, q)| point_to_rat(q))
                .collect();
            if !lp::point_in_convex_hull(&mid, &others) {
                // edge: direction must be e_a - e_b
                let diff: Vec<i64> = pts[j].iter().zip(&pts[i]).map(|(&a, &b)| a - b).collect();
                let pos = diff.iter().filter(|&&x| x == 1).count();
                let neg = diff.iter().filter(|&&x| x == -1).count();
                let zero = diff.iter().filter(|&&x| x == 0).count();
                if !(pos == 1 && neg == 1 && zero == diff.len() - 2) {
                    return false;
                }
            }
        }
    }
    true
}

/// Restriction of a triangulation to a face of its underlying polytope.
/// Errors if the face is not a union of faces of the triangulation.
pub fn restrict_to_face(
    t: &crate::subdivision::Triangulation,
    face_points: &[Point],
) -> Result<crate::subdivision::Triangulation> {
    let base = &t.sub.base;
    let mut face_idx = vec![];
    for p in face_points {
        match base.index_of(p) {
            Some(i) => face_idx.push(i),
            None => return Err(Error::NotAFace),
        }
    }
    face_idx.sort_unstable();
    let face_set: std::collections::HashSet<usize> = face_idx.iter().copied().collect();
    let face_config = PointConfiguration::new(
        base.ambient_dim,
        face_idx.iter().map(|&i| base.points[i].clone()).collect(),
    );
    let fdim = face_config.affine_dim();
    let mut cells: Vec<Vec<usize>> = vec![];
    for cell in &t.sub.cells {
        let inter: Vec<usize> = cell
            .points
            .iter()
            .copied()
            .filter(|i| face_set.contains(i))
            .collect();
        if inter.is_empty() {
            continue;
        }
        // faces of a simplex are exactly the vertex subsets
        let local: Vec<usize> = inter
            .iter()
            .map(|&i| face_idx.binary_search(&i).unwrap())
            .collect();
        let sub = PointConfiguration::new(
            base.ambient_dim,
            inter.iter().map(|&i| base.points[i].clone()).collect(),
        );
        if sub.affine_dim() == fdim {
            cells.push(local);
        }
    }
    cells.sort();
    cells.dedup();
    if cells.is_empty() {
        return Err(Error::NotAFace);
    }
    // the restricted cells must tile the face
    let mut total = Int::zero();
    for c in &cells {
        let pts: Vec<Vec<Int>> = c
            .iter()
            .map(|&i| face_config.lattice_coords()[i].clone())
            .collect();
        total += simplex_volume_in_coords(&pts);
    }
    if total != face_config.normalized_volume() {
        return Err(Error::NotAFace);
    }
    Ok(crate::subdivision::Triangulation::from_cells(
        face_config,
        cells,
    ))
}

/// |det| of the edge matrix of a simplex given in full-dimensional
/// integer coordinates.
pub fn simplex_volume_in_coords(pts: &[Vec<Int>]) -> Int {
    let d = pts[0].len();
    assert_eq!(pts.len(), d + 1, "not a simplex");
    let edges: Vec<Vec<Int>> = pts[1..]
        .iter()
        .map(|p| crate::exact_linalg::sub_vec(p, &pts[0]))
        .collect();
    crate::exact_linalg::det_int(&edges).abs()
}

pub mod placing;
