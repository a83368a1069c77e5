//! Deletion–contraction triangulation of matroid base polytopes, with the
//! equivalent explicit layered height function, runtime join certification,
//! and moment-curve functional synthesis.

use crate::exact_linalg::{are_complementary, independent_affine_spans, rat, Int, Rat};
use crate::matroid::Matroid;
use crate::polytope::{base_polytope, restrict_to_face, simplex_volume_in_coords, Point, PointConfiguration};
use crate::subdivision::{
    concretize_epsilon, induced_subdivision, lower_hull_subdivision, HeightFunction,
    RegularityCertificate, Triangulation,
};
use crate::{Error, Result};
use num::{One, Zero};

/// Linear part of an affine functional sampled from the moment curve:
/// coefficients (t, t^2, ..., t^m).
pub fn make_generic_functional(m: usize, t: i64) -> Vec<Rat> {
    let mut coeffs = Vec::with_capacity(m);
    let mut p = Rat::one();
    let t = rat(t);
    for _ in 0..m {
        p *= &t;
        coeffs.push(p.clone());
    }
    coeffs
}

pub const GENERICITY_DIM_CAP: usize = 5;

/// Exhaustive genericity check against the arrangement of all hyperplanes
/// x_S = 0, S a nonempty subset of coordinates: the functional must be
/// non-constant on every positive-dimensional intersection of hyperplanes.
/// Exponential; only for small dimension.
pub fn is_generic_bruteforce(linear: &[Rat]) -> Result<bool> {
    let m = linear.len();
    if m > GENERICITY_DIM_CAP {
        return Err(Error::GenericityDimCap(GENERICITY_DIM_CAP));
    }
    if m == 0 {
        return Ok(true);
    }
    let normals: Vec<Vec<Rat>> = (1u32..1 << m)
        .map(|s| {
            (0..m)
                .map(|i| if s & (1 << i) != 0 { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    // breadth-first closure of the flats, each keyed by the reduced row
    // echelon form of its normal space
    let key = |rows: &[Vec<Rat>]| -> String {
        format!("{rows:?}")
    };
    let mut seen = std::collections::HashSet::new();
    let mut frontier: Vec<Vec<Vec<Rat>>> = vec![vec![]];
    seen.insert(key(&frontier[0]));
    while let Some(rows) = frontier.pop() {
        let rank = rows.len();
        if rank < m {
            // positive-dimensional flat: the functional is constant on it
            // exactly when it lies in the normal space
            let mut aug = rows.clone();
            aug.push(linear.to_vec());
            if crate::exact_linalg::rat_rank(&aug) == rank {
                return Ok(false);
            }
        }
        for nrm in &normals {
            let mut next = rows.clone();
            next.push(nrm.clone());
            let pivots = crate::exact_linalg::rref(&mut next);
            if pivots.len() == rank {
                continue;
            }
            next.truncate(pivots.len());
            if seen.insert(key(&next)) {
                frontier.push(next);
            }
        }
    }
    Ok(true)
}

/// The string-indexed family of branch functionals. The functional for a
/// string s on R^m is (last symbol of s) * moment(t, m) plus a small
/// seed-dependent integer constant, so consecutive-branch differences stay
/// moment-curve multiples while the heights themselves vary with the seed.
#[derive(Debug, Clone)]
pub struct Schedule {
    pub t: i64,
    pub seed: u64,
}

impl Schedule {
    fn constant(&self, s: &[u8]) -> Rat {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut step = |b: u8| {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        };
        for b in self.seed.to_le_bytes() {
            step(b);
        }
        for &c in s {
            step(c.wrapping_add(1));
        }
        rat((h % 16) as i64)
    }

    /// Evaluate the functional for string s at a point with m = args.len()
    /// remaining coordinates.
    pub fn eval(&self, s: &[u8], args: &[i64]) -> Rat {
        let last = *s.last().expect("nonempty string") as i64;
        let mut acc = self.constant(s);
        if last != 0 {
            let coeffs = make_generic_functional(args.len(), self.t);
            for (c, &x) in coeffs.iter().zip(args) {
                acc += c * rat(last) * rat(x);
            }
        }
        acc
    }
}

/// The runtime genericity certificate for one join: the affine spans of the
/// two layer faces must be independent, and the lattices of their affine
/// hulls complementary.
pub fn certify_join(f0: &PointConfiguration, f1: &PointConfiguration) -> bool {
    independent_affine_spans(&f0.span, &f1.span) && are_complementary(&f0.span, &f1.span)
}

#[derive(Debug, Clone)]
pub struct TriangulationMeta {
    pub seed: u64,
    pub t_sequence: Vec<i64>,
    pub split_order: Vec<usize>,
}

pub struct BuiltTriangulation {
    pub tri: Triangulation,
    pub meta: TriangulationMeta,
}

/// Layered heights on the vertices of the base polytope: level 0 is zero,
/// level k applies the schedule functional indexed by the first k
/// coordinates of each vertex to its remaining coordinates.
pub fn build_height_function(m: &Matroid, schedule: &Schedule) -> HeightFunction {
    let base = base_polytope(m);
    let n = m.n();
    let npts = base.points.len();
    let mut levels = vec![vec![Rat::zero(); npts]];
    for k in 1..n {
        let level = base
            .points
            .iter()
            .map(|v| {
                let s: Vec<u8> = v[..k].iter().map(|&x| x as u8).collect();
                schedule.eval(&s, &v[k..])
            })
            .collect();
        levels.push(level);
    }
    HeightFunction { levels }
}

/// One attempt of the deletion–contraction recursion; None signals a
/// certification failure (the functional parameter t must be resampled).
fn recurse(m: &Matroid, prefix: &mut Vec<u8>, schedule: &Schedule) -> Option<Vec<Vec<Point>>> {
    let n = m.n();
    if n == 1 {
        let p = base_polytope(m);
        return Some(vec![vec![p.points[0].clone()]]);
    }
    if m.is_loop(0) || m.is_coloop(0) {
        let (minor, bit) = if m.is_loop(0) {
            (m.delete(0).unwrap(), 0u8)
        } else {
            (m.contract(0).unwrap(), 1u8)
        };
        prefix.push(bit);
        let sub = recurse(&minor, prefix, schedule)?;
        prefix.pop();
        return Some(
            sub.into_iter()
                .map(|cell| {
                    cell.into_iter()
                        .map(|p| {
                            let mut q = vec![bit as i64];
                            q.extend(p);
                            q
                        })
                        .collect()
                })
                .collect(),
        );
    }

    let m0 = m.delete(0).unwrap();
    let m1 = m.contract(0).unwrap();
    let p = base_polytope(m);
    let heights: Vec<Rat> = p
        .points
        .iter()
        .map(|v| {
            prefix.push(v[0] as u8);
            let h = schedule.eval(prefix, &v[1..]);
            prefix.pop();
            h
        })
        .collect();
    let split = lower_hull_subdivision(&p, &heights);

    prefix.push(0);
    let t0 = recurse(&m0, prefix, schedule)?;
    prefix.pop();
    prefix.push(1);
    let t1 = recurse(&m1, prefix, schedule)?;
    prefix.pop();
    let t0 = as_triangulation(&m0, t0);
    let t1 = as_triangulation(&m1, t1);

    let mut cells = vec![];
    for cell in &split.cells {
        let f0: Vec<Point> = cell
            .points
            .iter()
            .map(|&i| &p.points[i])
            .filter(|v| v[0] == 0)
            .map(|v| v[1..].to_vec())
            .collect();
        let f1: Vec<Point> = cell
            .points
            .iter()
            .map(|&i| &p.points[i])
            .filter(|v| v[0] == 1)
            .map(|v| v[1..].to_vec())
            .collect();
        if f0.is_empty() || f1.is_empty() {
            return None;
        }
        let f0c = PointConfiguration::new(n - 1, f0.clone());
        let f1c = PointConfiguration::new(n - 1, f1.clone());
        if !certify_join(&f0c, &f1c) {
            return None;
        }
        let r0 = match restrict_to_face(&t0, &f0) {
            Ok(r) => r,
            Err(_) => return None,
        };
        let r1 = match restrict_to_face(&t1, &f1) {
            Ok(r) => r,
            Err(_) => return None,
        };
        for c0 in &r0.sub.cells {
            for c1 in &r1.sub.cells {
                let mut joined: Vec<Point> = c0
                    .points
                    .iter()
                    .map(|&i| {
                        let mut q = vec![0i64];
                        q.extend(&r0.sub.base.points[i]);
                        q
                    })
                    .collect();
                joined.extend(c1.points.iter().map(|&i| {
                    let mut q = vec![1i64];
                    q.extend(&r1.sub.base.points[i]);
                    q
                }));
                cells.push(joined);
            }
        }
    }
    Some(cells)
}

fn as_triangulation(m: &Matroid, cells: Vec<Vec<Point>>) -> Triangulation {
    let base = base_polytope(m);
    let idx_cells: Vec<Vec<usize>> = cells
        .iter()
        .map(|cell| {
            cell.iter()
                .map(|p| base.index_of(p).expect("recursion vertex in base polytope"))
                .collect()
        })
        .collect();
    Triangulation::from_cells(base, idx_cells)
}

pub const RETRY_CAP: usize = 32;

/// Construct a regular unimodular triangulation of the base polytope of M.
///
/// Runs the deletion–contraction recursion with per-join certification,
/// cross-checks the result against the subdivision induced by the explicit
/// layered height function, verifies cell unimodularity and the exact
/// volume cover, and attaches a concrete-epsilon regularity certificate.
/// Any failed check triggers a retry with the next value of t.
pub fn triangulate_base_polytope(
    m: &Matroid,
    seed: u64,
    t_start: Option<i64>,
) -> Result<BuiltTriangulation> {
    let base = base_polytope(m);
    let d = base.affine_dim();
    let volume = base.normalized_volume();
    let t0 = t_start.unwrap_or(m.n() as i64 * base.points.len() as i64 + 2);
    let mut t_sequence = vec![];
    for attempt in 0..RETRY_CAP {
        let t = t0 + attempt as i64;
        t_sequence.push(t);
        let schedule = Schedule { t, seed };
        let cells = match recurse(m, &mut vec![], &schedule) {
            Some(c) => c,
            None => continue,
        };
        let tri = as_triangulation(m, cells);
        if !certified_unimodular_cover(&tri.sub, d, &volume) {
            continue;
        }
        // independent realization: the explicit layered height function must
        // induce the same subdivision
        let hf = build_height_function(m, &schedule);
        let sub = induced_subdivision(&base, &hf);
        if sub.cell_sets() != tri.cell_sets() {
            continue;
        }
        let (eps, flat, wits) = concretize_epsilon(&sub, &hf)?;
        let certificate = RegularityCertificate {
            levels: hf.levels,
            epsilon: eps,
            flat_heights: flat,
            flat_witnesses: wits,
        };
        return Ok(BuiltTriangulation {
            tri: Triangulation {
                sub,
                certificate: Some(certificate),
            },
            meta: TriangulationMeta {
                seed,
                t_sequence,
                split_order: (0..m.n()).collect(),
            },
        });
    }
    Err(Error::RetryCapExceeded(RETRY_CAP))
}

/// Every cell a unimodular simplex and the volumes summing exactly to the
/// polytope volume.
pub fn certified_unimodular_cover(
    sub: &crate::subdivision::Subdivision,
    d: usize,
    volume: &Int,
) -> bool {
    let coords = sub.base.lattice_coords();
    let mut total = Int::zero();
    for cell in &sub.cells {
        if cell.points.len() != d + 1 {
            return false;
        }
        let pts: Vec<Vec<Int>> = cell.points.iter().map(|&i| coords[i].clone()).collect();
        let v = simplex_volume_in_coords(&pts);
        if !v.is_one() {
            return false;
        }
        total += v;
    }
    total == *volume
}
