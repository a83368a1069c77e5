//! Exact integer/rational linear algebra and lattice primitives.
//!
//! Everything here is arbitrary precision; there is no floating point
//! anywhere in this crate.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(int(v))
}

/// Row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Rat>>,
}

impl RationalMatrix {
    pub fn new(entries: Vec<Vec<Rat>>) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        assert!(entries.iter().all(|r| r.len() == cols));
        RationalMatrix { rows, cols, entries }
    }
}

/// An affine sublattice of Z^n: a basepoint plus a basis of the direction
/// lattice. The basis is kept saturated (SNF all ones).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineLattice {
    pub basepoint: Vec<Int>,
    pub basis: Vec<Vec<Int>>,
}

impl AffineLattice {
    pub fn new(basepoint: Vec<Int>, basis: Vec<Vec<Int>>) -> Self {
        AffineLattice { basepoint, basis }
    }

    /// Lattice of the affine span of a nonempty set of integer points,
    /// saturated in Z^n.
    pub fn from_points(points: &[Vec<Int>]) -> Self {
        assert!(!points.is_empty());
        let n = points[0].len();
        let diffs: Vec<Vec<Int>> = points[1..]
            .iter()
            .map(|p| sub_vec(p, &points[0]))
            .collect();
        AffineLattice {
            basepoint: points[0].clone(),
            basis: saturate(&diffs, n),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

pub fn sub_vec(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn identity_int(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

/// Row-style Hermite normal form: returns (H, U) with U unimodular and
/// H = U * M, H in row echelon form with positive pivots and entries above
/// each pivot reduced mod the pivot.
pub fn hermite_normal_form(m: &[Vec<Int>]) -> (Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut h: Vec<Vec<Int>> = m.to_vec();
    let mut u = identity_int(rows);
    let mut pr = 0usize;
    for pc in 0..cols {
        if pr == rows {
            break;
        }
        // Euclidean elimination in column pc among rows pr..
        loop {
            let mut best: Option<usize> = None;
            for r in pr..rows {
                if !h[r][pc].is_zero()
                    && best.map_or(true, |b| h[r][pc].abs() < h[b][pc].abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            h.swap(pr, b);
            u.swap(pr, b);
            let mut done = true;
            for r in pr + 1..rows {
                if h[r][pc].is_zero() {
                    continue;
                }
                let q = div_round(&h[r][pc], &h[pr][pc]);
                row_sub(&mut h, r, pr, &q);
                row_sub(&mut u, r, pr, &q);
                if !h[r][pc].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[pr][pc].is_zero() {
            continue;
        }
        if h[pr][pc].is_negative() {
            row_neg(&mut h, pr);
            row_neg(&mut u, pr);
        }
        // reduce entries above the pivot
        for r in 0..pr {
            let q = h[r][pc].div_floor(&h[pr][pc]);
            if !q.is_zero() {
                row_sub(&mut h, r, pr, &q);
                row_sub(&mut u, r, pr, &q);
            }
        }
        pr += 1;
    }
    (h, u)
}

fn row_sub(m: &mut [Vec<Int>], tgt: usize, src: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    let src_row = m[src].clone();
    for (t, s) in m[tgt].iter_mut().zip(&src_row) {
        *t -= q * s;
    }
}

fn row_neg(m: &mut [Vec<Int>], r: usize) {
    for e in m[r].iter_mut() {
        *e = -e.clone();
    }
}

/// Division rounded to nearest, used to shrink remainders fast.
fn div_round(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    if &(r.abs() * 2) > &b.abs() {
        if (a.is_negative()) ^ (b.is_negative()) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

fn transpose(m: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect()
}

fn is_diagonal(m: &[Vec<Int>]) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, e)| i == j || e.is_zero()))
}

/// Elementary divisors d1 | d2 | ... of an integer matrix, as nonnegative
/// integers (zeros trail). Computed by alternating row/column Hermite
/// reduction followed by a gcd/lcm fix-up on the diagonal.
pub fn smith_diagonal(m: &[Vec<Int>]) -> Vec<Int> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let k = rows.min(cols);
    if k == 0 {
        return vec![];
    }
    let mut a: Vec<Vec<Int>> = m.to_vec();
    loop {
        let (h, _) = hermite_normal_form(&a);
        a = transpose(&h);
        let (h2, _) = hermite_normal_form(&a);
        a = transpose(&h2);
        if is_diagonal(&a) {
            break;
        }
    }
    let mut d: Vec<Int> = (0..k).map(|i| a[i][i].abs()).collect();
    // enforce the divisibility chain
    loop {
        let mut stable = true;
        for i in 0..k {
            for j in i + 1..k {
                if d[j].is_zero() && d[i].is_zero() {
                    continue;
                }
                if !d[i].is_zero() && (&d[j] % &d[i]).is_zero() {
                    continue;
                }
                let g = d[i].gcd(&d[j]);
                let l = if g.is_zero() {
                    Int::zero()
                } else {
                    (&d[i] * &d[j]) / &g
                };
                d[i] = g;
                d[j] = l;
                stable = false;
            }
        }
        if stable {
            break;
        }
    }
    d
}

/// Reduced row echelon form over Q, in place. Returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
    let mut pr = 0usize;
    for pc in 0..ncols {
        let Some(sel) = (pr..rows.len()).find(|&r| !rows[r][pc].is_zero()) else {
            continue;
        };
        rows.swap(pr, sel);
        let inv = rows[pr][pc].clone();
        for e in rows[pr].iter_mut() {
            *e = &*e / &inv;
        }
        for r in 0..rows.len() {
            if r != pr && !rows[r][pc].is_zero() {
                let f = rows[r][pc].clone();
                let src = rows[pr].clone();
                for (t, s) in rows[r].iter_mut().zip(&src) {
                    *t = &*t - &f * s;
                }
            }
        }
        pivots.push(pc);
        pr += 1;
        if pr == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rat_rank(m: &[Vec<Rat>]) -> usize {
    let mut rows = m.to_vec();
    rref(&mut rows).len()
}

pub fn int_rows_to_rat(m: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    m.iter()
        .map(|r| r.iter().map(|e| Rat::from_integer(e.clone())).collect())
        .collect()
}

pub fn int_rank(m: &[Vec<Int>]) -> usize {
    rat_rank(&int_rows_to_rat(m))
}

/// Basis of the rational nullspace {x : M x = 0} of M (rows of length n).
pub fn rat_nullspace(m: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
    let mut rows = m.to_vec();
    let pivots = rref(&mut rows);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = vec![];
    for free in 0..n {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Clear denominators and divide by the content, preserving direction.
pub fn primitive_vector(v: &[Rat]) -> Vec<Int> {
    let mut denom_lcm = Int::one();
    for e in v {
        denom_lcm = denom_lcm.lcm(e.denom());
    }
    let ints: Vec<Int> = v.iter().map(|e| e.numer() * (&denom_lcm / e.denom())).collect();
    let mut g = Int::zero();
    for e in &ints {
        g = g.gcd(e);
    }
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|e| e / &g).collect()
}

/// Integer kernel {x in Z^n : A x = 0} as a (saturated) lattice basis.
pub fn integer_kernel(a: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    if a.is_empty() {
        return identity_int(n);
    }
    let at = transpose(a); // n x m
    let (h, u) = hermite_normal_form(&at);
    let mut out = vec![];
    for (i, row) in h.iter().enumerate() {
        if row.iter().all(|e| e.is_zero()) {
            out.push(u[i].clone());
        }
    }
    out
}

/// Lattice basis of span(vectors) ∩ Z^n (the saturation).
pub fn saturate(vectors: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let nonzero: Vec<Vec<Int>> = vectors
        .iter()
        .filter(|v| v.iter().any(|e| !e.is_zero()))
        .cloned()
        .collect();
    if nonzero.is_empty() {
        return vec![];
    }
    let rat_rows = int_rows_to_rat(&nonzero);
    let null = rat_nullspace(&rat_rows, n);
    let a: Vec<Vec<Int>> = null.iter().map(|v| primitive_vector(v)).collect();
    integer_kernel(&a, n)
}

/// True iff the direction lattices intersect trivially and the concatenated
/// bases form a lattice basis of the saturation of their joint span.
pub fn are_complementary(l1: &AffineLattice, l2: &AffineLattice) -> bool {
    let r1 = l1.rank();
    let r2 = l2.rank();
    if r1 + r2 == 0 {
        return true;
    }
    let n = if !l1.basis.is_empty() {
        l1.basis[0].len()
    } else {
        l2.basis[0].len()
    };
    if r1 + r2 > n {
        return false;
    }
    let mut stacked = l1.basis.clone();
    stacked.extend(l2.basis.iter().cloned());
    let d = smith_diagonal(&stacked);
    d.len() == r1 + r2 && d.iter().all(|e| e.is_one())
}

/// True iff the direction spaces of the two affine spans intersect trivially.
pub fn independent_affine_spans(a1: &AffineLattice, a2: &AffineLattice) -> bool {
    let r1 = a1.rank();
    let r2 = a2.rank();
    if r1 == 0 || r2 == 0 {
        return true;
    }
    let mut stacked = a1.basis.clone();
    stacked.extend(a2.basis.iter().cloned());
    int_rank(&stacked) == r1 + r2
}

/// Unique solution x of A x = b when A has full column rank and the system is
/// consistent; None otherwise.
pub fn rat_solve_unique(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Rat>> = (0..nrows)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&ncols) {
        return None; // inconsistent
    }
    if pivots.len() != ncols {
        return None; // underdetermined
    }
    let mut x = vec![Rat::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols].clone();
    }
    Some(x)
}

/// Bareiss fraction-free determinant of a square integer matrix.
pub fn det_int(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    assert!(m.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<Int>> = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(sw) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, sw);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn im(m: &[&[i64]]) -> Vec<Vec<Int>> {
        m.iter().map(|r| iv(r)).collect()
    }

    fn mat_mul(a: &[Vec<Int>], b: &[Vec<Int>]) -> Vec<Vec<Int>> {
        let n = b.len();
        let c = b[0].len();
        a.iter()
            .map(|row| {
                (0..c)
                    .map(|j| (0..n).map(|k| &row[k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn hnf_identity() {
        let m = im(&[&[1, 0], &[0, 1]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, m);
        assert_eq!(u, m);
    }

    #[test]
    fn hnf_already_in_form() {
        let m = im(&[&[2, 0], &[0, 3]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, m);
        assert_eq!(u, identity_int(2));
    }

    #[test]
    fn hnf_diag_1_2() {
        let m = im(&[&[1, 1], &[1, -1]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h[0][0], int(1));
        assert_eq!(h[1][1], int(2));
        assert_eq!(h[1][0], int(0));
        assert_eq!(mat_mul(&u, &m), h);
        assert_eq!(det_int(&u).abs(), int(1));
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_diagonal(&identity_int(3)), iv(&[1, 1, 1]));
        assert_eq!(smith_diagonal(&im(&[&[2]])), iv(&[2]));
        assert_eq!(smith_diagonal(&im(&[&[1, 1, 0], &[0, 1, 1]])), iv(&[1, 1]));
        assert_eq!(smith_diagonal(&im(&[&[1, 1], &[1, -1]])), iv(&[1, 2]));
    }

    #[test]
    fn saturate_examples() {
        assert_eq!(saturate(&im(&[&[2, 0]]), 2), im(&[&[1, 0]]));
        let b = saturate(&im(&[&[1, 1], &[1, -1]]), 2);
        assert_eq!(b.len(), 2);
        assert!(smith_diagonal(&b).iter().all(|e| e.is_one()));
        assert!(saturate(&[], 3).is_empty());
    }

    #[test]
    fn saturate_idempotent() {
        let b = saturate(&im(&[&[2, 4, 2], &[0, 6, 3]]), 3);
        let b2 = saturate(&b, 3);
        assert_eq!(int_rank(&b), int_rank(&b2));
        assert!(smith_diagonal(&b2).iter().all(|e| e.is_one()));
    }

    #[test]
    fn complementary_examples() {
        let l = |basis: Vec<Vec<Int>>, n: usize| AffineLattice::new(iv(&vec![0; n]), basis);
        let x = l(im(&[&[1, 0]]), 2);
        let y = l(im(&[&[0, 1]]), 2);
        assert!(are_complementary(&x, &y));
        let a = l(im(&[&[1, 1]]), 2);
        let b = l(im(&[&[1, -1]]), 2);
        assert!(!are_complementary(&a, &b));
        assert!(!are_complementary(&x, &x));
    }

    #[test]
    fn independent_spans_examples() {
        let pt = AffineLattice::new(iv(&[0, 0]), vec![]);
        let x_axis = AffineLattice::new(iv(&[0, 0]), im(&[&[1, 0]]));
        let x_axis_shift = AffineLattice::new(iv(&[0, 1]), im(&[&[1, 0]]));
        let y_axis = AffineLattice::new(iv(&[5, 5]), im(&[&[0, 1]]));
        assert!(independent_affine_spans(&pt, &x_axis));
        assert!(!independent_affine_spans(&x_axis, &x_axis_shift));
        assert!(independent_affine_spans(&x_axis, &y_axis));
    }

    #[test]
    fn integer_kernel_full_space() {
        assert_eq!(integer_kernel(&[], 2), identity_int(2));
    }
}
