//! Incremental (placing) volume computation over exact integers.
//!
//! Points are inserted one at a time; the hull is maintained as a list of
//! facets, each carrying a primitive integer inner normal, its offset, and
//! the full set of inserted points lying on its hyperplane. The volume
//! gained by an insertion is the sum over visible facets of
//! facet volume * lattice height, which keeps everything in normalized
//! (lattice) units.

use crate::exact_linalg::{
    dot_int, int_rank, int_rows_to_rat, primitive_vector, rat_nullspace, rat_solve_unique,
    sub_vec, AffineLattice, Int, Rat,
};
use num::{Signed, Zero};
use std::collections::HashMap;

#[derive(Debug, Clone)]
struct Facet {
    /// inner-normal inequality a . x <= b, a primitive
    a: Vec<Int>,
    b: Int,
    /// indices of all inserted points on the hyperplane, insertion order
    pts: Vec<usize>,
}

/// Normalized volume of conv(points), where the points are given in
/// coordinates of a rank-d saturated lattice (so the configuration is
/// full-dimensional in Z^d).
pub fn placing_volume(points: &[Vec<Int>], d: usize) -> Int {
    if d == 0 {
        return Int::from(1);
    }
    if d == 1 {
        let max = points.iter().map(|p| &p[0]).max().unwrap();
        let min = points.iter().map(|p| &p[0]).min().unwrap();
        return max.clone() - min.clone();
    }
    // greedy affinely independent starting simplex
    let mut simplex: Vec<usize> = vec![0];
    for i in 1..points.len() {
        let dirs: Vec<Vec<Int>> = simplex[1..]
            .iter()
            .map(|&j| sub_vec(&points[j], &points[simplex[0]]))
            .chain(std::iter::once(sub_vec(&points[i], &points[simplex[0]])))
            .collect();
        if int_rank(&dirs) == simplex.len() {
            simplex.push(i);
        }
        if simplex.len() == d + 1 {
            break;
        }
    }
    assert_eq!(simplex.len(), d + 1, "configuration not full-dimensional");

    let edge_rows: Vec<Vec<Int>> = simplex[1..]
        .iter()
        .map(|&j| sub_vec(&points[j], &points[simplex[0]]))
        .collect();
    let mut volume = crate::exact_linalg::det_int(&edge_rows).abs();

    let mut inserted: Vec<usize> = simplex.clone();
    let mut facets: Vec<Facet> = vec![];
    for skip in 0..=d {
        let face: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &i)| i)
            .collect();
        let f = hyperplane_facet(points, &face, &inserted).expect("simplex facet");
        facets.push(f);
    }

    for p in 0..points.len() {
        if simplex.contains(&p) {
            continue;
        }
        let vals: Vec<Int> = facets
            .iter()
            .map(|f| dot_int(&f.a, &points[p]) - &f.b)
            .collect();
        let any_visible = vals.iter().any(|v| v.is_positive());
        if !any_visible {
            for (f, v) in facets.iter_mut().zip(&vals) {
                if v.is_zero() {
                    f.pts.push(p);
                }
            }
            inserted.push(p);
            continue;
        }
        // volume gained: pyramid over each visible facet
        for (f, v) in facets.iter().zip(&vals) {
            if v.is_positive() {
                volume += facet_volume(points, f) * v;
            }
        }
        // horizon ridges: (visible, invisible) facet pairs meeting in
        // dimension d-2
        let mut next: HashMap<(Vec<Int>, Int), Facet> = HashMap::new();
        for (f, v) in facets.iter().zip(&vals) {
            if !v.is_positive() {
                let mut f2 = f.clone();
                if v.is_zero() {
                    f2.pts.push(p);
                }
                next.insert((f2.a.clone(), f2.b.clone()), f2);
            }
        }
        inserted.push(p);
        for (i, vi) in vals.iter().enumerate() {
            if !vi.is_positive() {
                continue;
            }
            for (j, vj) in vals.iter().enumerate() {
                if vj.is_positive() {
                    continue;
                }
                let ridge: Vec<usize> = facets[i]
                    .pts
                    .iter()
                    .copied()
                    .filter(|q| facets[j].pts.contains(q))
                    .collect();
                if ridge.is_empty() {
                    continue;
                }
                let dirs: Vec<Vec<Int>> = ridge[1..]
                    .iter()
                    .map(|&q| sub_vec(&points[q], &points[ridge[0]]))
                    .collect();
                if int_rank(&dirs) != d - 2 {
                    continue;
                }
                let mut gen = ridge.clone();
                gen.push(p);
                if let Some(f) = hyperplane_facet(points, &gen, &inserted) {
                    next.entry((f.a.clone(), f.b.clone())).or_insert(f);
                }
            }
        }
        facets = next.into_values().collect();
    }
    volume
}

/// Facet whose hyperplane passes through the given generators, oriented so
/// that every point in `inside` satisfies a . x <= b. Returns None when the
/// generators do not span a hyperplane or the orientation check fails.
fn hyperplane_facet(points: &[Vec<Int>], gen: &[usize], inside: &[usize]) -> Option<Facet> {
    let d = points[0].len();
    let dirs: Vec<Vec<Int>> = gen[1..]
        .iter()
        .map(|&i| sub_vec(&points[i], &points[gen[0]]))
        .collect();
    if int_rank(&dirs) != d - 1 {
        return None;
    }
    let null = rat_nullspace(&int_rows_to_rat(&dirs), d);
    debug_assert_eq!(null.len(), 1);
    let mut a = primitive_vector(&null[0]);
    let mut b = dot_int(&a, &points[gen[0]]);
    let mut oriented = false;
    for &q in inside {
        let v = dot_int(&a, &points[q]);
        if v == b {
            continue;
        }
        if v > b {
            a = a.iter().map(|x| -x.clone()).collect();
            b = -b;
        }
        oriented = true;
        break;
    }
    if !oriented {
        return None;
    }
    if inside.iter().any(|&q| dot_int(&a, &points[q]) > b) {
        debug_assert!(false, "candidate hyperplane is not supporting");
        return None;
    }
    let pts: Vec<usize> = inside
        .iter()
        .copied()
        .filter(|&q| dot_int(&a, &points[q]) == b)
        .collect();
    Some(Facet { a, b, pts })
}

/// Normalized (d-1)-volume of a facet, computed recursively in the
/// coordinates of the saturated lattice of its affine hull.
fn facet_volume(points: &[Vec<Int>], f: &Facet) -> Int {
    let pts: Vec<Vec<Int>> = f.pts.iter().map(|&i| points[i].clone()).collect();
    let lat = AffineLattice::from_points(&pts);
    let sub_d = lat.rank();
    let n = lat.basepoint.len();
    let coords: Vec<Vec<Int>> = pts
        .iter()
        .map(|p| {
            let a: Vec<Vec<Rat>> = (0..n)
                .map(|row| {
                    (0..sub_d)
                        .map(|col| Rat::from_integer(lat.basis[col][row].clone()))
                        .collect()
                })
                .collect();
            let rhs: Vec<Rat> = (0..n)
                .map(|row| Rat::from_integer(&p[row] - &lat.basepoint[row]))
                .collect();
            rat_solve_unique(&a, &rhs)
                .expect("facet point in its own affine hull")
                .iter()
                .map(|v| {
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect();
    placing_volume(&coords, sub_d)
}
