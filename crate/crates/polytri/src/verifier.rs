//! Independent validation of triangulation output: unimodularity of every
//! cell, the subdivision axioms (exact volume cover and face-to-face
//! intersection), regularity certificates, h-vectors, and flagness.

use crate::exact_linalg::{int, smith_diagonal, sub_vec, Int, Rat};
use crate::lp;
use crate::polytope::{point_to_rat, Point};
use crate::subdivision::Triangulation;
use crate::{Error, Result};
use num::{One, Zero};
use std::collections::HashSet;

/// SNF test: the edge vectors of the simplex must form a basis of the
/// intersection of its affine hull with the integer lattice.
pub fn is_unimodular(vertices: &[Point]) -> Result<bool> {
    let edges: Vec<Vec<Int>> = vertices[1..]
        .iter()
        .map(|v| {
            v.iter()
                .zip(&vertices[0])
                .map(|(&a, &b)| int(a - b))
                .collect()
        })
        .collect();
    if edges.is_empty() {
        return Ok(true);
    }
    if crate::exact_linalg::int_rank(&edges) != edges.len() {
        return Err(Error::NotSimplex);
    }
    let d = smith_diagonal(&edges);
    Ok(d.len() == edges.len() && d.iter().all(|e| e.is_one()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegularityStatus {
    Certified,
    Failed,
    Unverifiable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlagStatus {
    Flag,
    /// a minimal non-face with three or more vertices
    NotFlag(Vec<usize>),
    NotComputed,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub unimodular_all: bool,
    pub covers: bool,
    pub face_to_face: bool,
    pub regularity: RegularityStatus,
    pub cells: usize,
    pub volume: Int,
    pub f_vector: Vec<u64>,
    pub h_vector: Vec<i64>,
    pub flag_status: FlagStatus,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn all_pass(&self, allow_uncertified: bool) -> bool {
        self.unimodular_all
            && self.covers
            && self.face_to_face
            && match self.regularity {
                RegularityStatus::Certified => true,
                RegularityStatus::Unverifiable => allow_uncertified,
                RegularityStatus::Failed => false,
            }
    }
}

/// Volume cover and pairwise face-to-face checks.
pub fn check_subdivision(t: &Triangulation) -> (bool, bool, Vec<String>) {
    let base = &t.sub.base;
    let coords = base.lattice_coords();
    let mut failures = vec![];
    let mut total = Int::zero();
    for cell in &t.sub.cells {
        let pts: Vec<Vec<Int>> = cell.points.iter().map(|&i| coords[i].clone()).collect();
        let dirs: Vec<Vec<Int>> = pts[1..].iter().map(|p| sub_vec(p, &pts[0])).collect();
        if crate::exact_linalg::int_rank(&dirs) != base.affine_dim() {
            failures.push(format!("cell {:?} is not full-dimensional", cell.points));
            continue;
        }
        total += crate::polytope::placing::placing_volume(&pts, base.affine_dim());
    }
    let covers = failures.is_empty() && total == base.normalized_volume();
    if !covers && failures.is_empty() {
        failures.push(format!(
            "cell volumes sum to {total}, polytope volume is {}",
            base.normalized_volume()
        ));
    }
    let mut face_to_face = true;
    for i in 0..t.sub.cells.len() {
        for j in i + 1..t.sub.cells.len() {
            let c1: Vec<Vec<Rat>> = t.sub.cells[i]
                .points
                .iter()
                .map(|&k| point_to_rat(&base.points[k]))
                .collect();
            let c2: Vec<Vec<Rat>> = t.sub.cells[j]
                .points
                .iter()
                .map(|&k| point_to_rat(&base.points[k]))
                .collect();
            if !lp::proper_face_separation(&c1, &c2) {
                face_to_face = false;
                failures.push(format!(
                    "cells {:?} and {:?} do not meet face-to-face",
                    t.sub.cells[i].points, t.sub.cells[j].points
                ));
            }
        }
    }
    (covers, face_to_face, failures)
}

/// Certificate check: the concretized witness of each cell must match the
/// flat heights exactly on the cell and stay strictly below elsewhere, the
/// flat heights must be the epsilon-weighted sum of the levels, and any
/// per-cell witness chains must be lexicographically valid against the
/// levels.
pub fn check_regularity(t: &Triangulation) -> RegularityStatus {
    let cert = match &t.certificate {
        Some(c) => c,
        None => return RegularityStatus::Unverifiable,
    };
    let base = &t.sub.base;
    let npts = base.points.len();
    if cert.flat_witnesses.len() != t.sub.cells.len() || cert.flat_heights.len() != npts {
        return RegularityStatus::Failed;
    }
    // flat heights consistent with the levels
    let mut expect = vec![Rat::zero(); npts];
    let mut w = Rat::one();
    for level in &cert.levels {
        if level.len() != npts {
            return RegularityStatus::Failed;
        }
        for i in 0..npts {
            expect[i] += &w * &level[i];
        }
        w *= &cert.epsilon;
    }
    if expect != cert.flat_heights {
        return RegularityStatus::Failed;
    }
    for (cell, wit) in t.sub.cells.iter().zip(&cert.flat_witnesses) {
        for (i, p) in base.points.iter().enumerate() {
            let v = wit.eval(p);
            let on_cell = cell.points.binary_search(&i).is_ok();
            if (on_cell && v != cert.flat_heights[i]) || (!on_cell && v >= cert.flat_heights[i]) {
                return RegularityStatus::Failed;
            }
        }
    }
    // lexicographic chains, when the construction recorded them
    for cell in &t.sub.cells {
        if cell.witnesses.is_empty() {
            continue;
        }
        if cell.witnesses.len() != cert.levels.len() {
            return RegularityStatus::Failed;
        }
        for (i, p) in base.points.iter().enumerate() {
            let on_cell = cell.points.binary_search(&i).is_ok();
            let mut first_nonzero = 0i8;
            for (level, wk) in cert.levels.iter().zip(&cell.witnesses) {
                let diff = &level[i] - wk.eval(p);
                if !diff.is_zero() {
                    first_nonzero = if diff > Rat::zero() { 1 } else { -1 };
                    break;
                }
            }
            if on_cell && first_nonzero != 0 {
                return RegularityStatus::Failed;
            }
            if !on_cell && first_nonzero != 1 {
                return RegularityStatus::Failed;
            }
        }
    }
    RegularityStatus::Certified
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// All faces of the simplicial complex generated by the cells, as sorted
/// vertex lists (excluding the empty face).
fn all_faces(cells: &[Vec<usize>]) -> HashSet<Vec<usize>> {
    let mut faces = HashSet::new();
    for cell in cells {
        let k = cell.len();
        for mask in 1u64..(1 << k) {
            let f: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).map(|i| cell[i]).collect();
            faces.insert(f);
        }
    }
    faces
}

/// Face numbers (f_{-1}, f_0, ..., f_{d-1}) of the complex of d-element ...
/// of the triangulation's cells and all their subsets.
pub fn f_vector(cells: &[Vec<usize>]) -> Vec<u64> {
    let dim = cells.iter().map(|c| c.len()).max().unwrap_or(1) - 1;
    let faces = all_faces(cells);
    let mut f = vec![0u64; dim + 2];
    f[0] = 1;
    for face in &faces {
        f[face.len()] += 1;
    }
    f
}

/// h-vector via the binomial transform of the f-vector; for a unimodular
/// triangulation this equals the h*-vector of the polytope.
pub fn h_vector(cells: &[Vec<usize>]) -> Vec<i64> {
    let f = f_vector(cells);
    let d = (f.len() - 1) as i64; // number of vertices of a maximal cell
    let mut h = vec![];
    for k in 0..=d {
        let mut acc = 0i64;
        for i in 0..=k {
            let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
            acc += sign * binomial(d - i, k - i) * f[i as usize] as i64;
        }
        h.push(acc);
    }
    debug_assert_eq!(h.last(), Some(&0));
    h.pop();
    h
}

pub const FLAG_CANDIDATE_BUDGET: usize = 2_000_000;

/// Minimal non-face search: the complex is flag iff every minimal non-face
/// is an edge. Candidate enumeration is capped by a budget.
pub fn flagness(cells: &[Vec<usize>]) -> FlagStatus {
    let faces = all_faces(cells);
    let mut verts: Vec<usize> = cells.iter().flatten().copied().collect();
    verts.sort_unstable();
    verts.dedup();
    let max_size = cells.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut budget = FLAG_CANDIDATE_BUDGET;
    // size-k candidates whose proper subsets are all faces
    let mut frontier: Vec<Vec<usize>> = faces
        .iter()
        .filter(|f| f.len() == 2)
        .cloned()
        .collect();
    for _k in 3..=max_size + 1 {
        let mut next = vec![];
        let mut seen = HashSet::new();
        for f in &frontier {
            for &v in &verts {
                if f.contains(&v) {
                    continue;
                }
                if budget == 0 {
                    return FlagStatus::NotComputed;
                }
                budget -= 1;
                let mut cand = f.clone();
                cand.push(v);
                cand.sort_unstable();
                if !seen.insert(cand.clone()) {
                    continue;
                }
                // all proper subsets must be faces
                let ok = (0..cand.len()).all(|skip| {
                    let sub: Vec<usize> = cand
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &x)| x)
                        .collect();
                    faces.contains(&sub)
                });
                if !ok {
                    continue;
                }
                if faces.contains(&cand) {
                    next.push(cand);
                } else {
                    // minimal non-face with >= 3 vertices
                    return FlagStatus::NotFlag(cand);
                }
            }
        }
        frontier = next;
    }
    FlagStatus::Flag
}

/// Full verification of a triangulation.
pub fn verify(t: &Triangulation) -> VerificationReport {
    let base = &t.sub.base;
    let mut failures = vec![];
    let mut unimodular_all = true;
    for cell in &t.sub.cells {
        let verts: Vec<Point> = cell.points.iter().map(|&i| base.points[i].clone()).collect();
        let expected = base.affine_dim() + 1;
        let ok = verts.len() == expected
            && matches!(is_unimodular(&verts), Ok(true));
        if !ok {
            unimodular_all = false;
            failures.push(format!("cell {:?} is not a unimodular simplex", cell.points));
        }
    }
    let (covers, face_to_face, mut sub_failures) = check_subdivision(t);
    failures.append(&mut sub_failures);
    let regularity = check_regularity(t);
    if regularity == RegularityStatus::Failed {
        failures.push("regularity certificate invalid".to_string());
    }
    let cell_sets = t.cell_sets();
    VerificationReport {
        unimodular_all,
        covers,
        face_to_face,
        regularity,
        cells: t.sub.cells.len(),
        volume: base.normalized_volume(),
        f_vector: f_vector(&cell_sets),
        h_vector: h_vector(&cell_sets),
        flag_status: flagness(&cell_sets),
        failures,
    }
}
