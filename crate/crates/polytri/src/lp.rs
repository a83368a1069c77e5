//! A small exact rational simplex solver (Bland's rule, two-phase), plus the
//! convex-position and face-separation queries built on top of it.

use crate::exact_linalg::Rat;
use num::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, objective: Rat },
    Infeasible,
    Unbounded,
}

/// Minimize c·x subject to A x = b, x >= 0.
pub fn solve(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    // tableau rows: n original + m artificial columns + rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rat::zero(); width];
        let flip = b[i].is_negative();
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Rat::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase 1: minimize sum of artificials
    let mut cost = vec![Rat::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    if run(&mut t, &mut basis, &mut cost, n + m) == Step::Unbounded {
        unreachable!("phase 1 objective is bounded below by 0");
    }
    if -cost[width - 1].clone() > Rat::zero() {
        return LpOutcome::Infeasible;
    }
    // drive artificials out of the basis
    let mut drop_rows = vec![];
    for i in 0..t.len() {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut cost, i, j);
                basis[i] = j;
            } else {
                drop_rows.push(i);
            }
        }
    }
    for &i in drop_rows.iter().rev() {
        t.remove(i);
        basis.remove(i);
    }

    // phase 2
    let mut cost2 = vec![Rat::zero(); width];
    for j in 0..n {
        cost2[j] = c[j].clone();
    }
    for (i, &bj) in basis.iter().enumerate() {
        if !cost2[bj].is_zero() {
            let f = cost2[bj].clone();
            for j in 0..width {
                let v = &cost2[j] - &f * &t[i][j];
                cost2[j] = v;
            }
        }
    }
    match run(&mut t, &mut basis, &mut cost2, n) {
        Step::Unbounded => LpOutcome::Unbounded,
        Step::Optimal => {
            let mut x = vec![Rat::zero(); n];
            let width = cost2.len();
            for (i, &bj) in basis.iter().enumerate() {
                if bj < n {
                    x[bj] = t[i][width - 1].clone();
                }
            }
            LpOutcome::Optimal {
                objective: cost2[width - 1].clone() * Rat::from_integer((-1).into()),
                x,
            }
        }
    }
}

#[derive(PartialEq)]
enum Step {
    Optimal,
    Unbounded,
}

fn run(t: &mut [Vec<Rat>], basis: &mut [usize], cost: &mut [Rat], ncols: usize) -> Step {
    let width = cost.len();
    loop {
        // Bland: smallest-index column with negative reduced cost
        let Some(enter) = (0..ncols).find(|&j| cost[j].is_negative()) else {
            return Step::Optimal;
        };
        let mut leave: Option<usize> = None;
        for i in 0..t.len() {
            if t[i][enter].is_positive() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let ratio_i = &t[i][width - 1] / &t[i][enter];
                        let ratio_l = &t[l][width - 1] / &t[l][enter];
                        ratio_i < ratio_l || (ratio_i == ratio_l && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return Step::Unbounded;
        };
        pivot(t, cost, leave, enter);
        basis[leave] = enter;
    }
}

fn pivot(t: &mut [Vec<Rat>], cost: &mut [Rat], pr: usize, pc: usize) {
    let width = cost.len();
    let inv = t[pr][pc].clone();
    for j in 0..width {
        let v = &t[pr][j] / &inv;
        t[pr][j] = v;
    }
    for i in 0..t.len() {
        if i != pr && !t[i][pc].is_zero() {
            let f = t[i][pc].clone();
            for j in 0..width {
                let v = &t[i][j] - &f * &t[pr][j];
                t[i][j] = v;
            }
        }
    }
    if !cost[pc].is_zero() {
        let f = cost[pc].clone();
        for j in 0..width {
            let v = &cost[j] - &f * &t[pr][j];
            cost[j] = v;
        }
    }
}

pub fn feasible(a: &[Vec<Rat>], b: &[Rat]) -> bool {
    let n = a.first().map_or(0, |r| r.len());
    !matches!(solve(a, b, &vec![Rat::zero(); n]), LpOutcome::Infeasible)
}

/// Is p in the convex hull of the given points?
pub fn point_in_convex_hull(p: &[Rat], points: &[Vec<Rat>]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = p.len();
    let k = points.len();
    // variables: lambda_0..lambda_{k-1} >= 0
    let mut a = vec![];
    let mut b = vec![];
    for coord in 0..n {
        a.push(points.iter().map(|q| q[coord].clone()).collect::<Vec<_>>());
        b.push(p[coord].clone());
    }
    a.push(vec![Rat::one(); k]);
    b.push(Rat::one());
    feasible(&a, &b)
}

/// Test whether conv(shared vertices) is a common face along which the two
/// vertex sets are properly separated: look for an affine functional that is
/// zero on the shared vertices, <= -t on the rest of c1, >= t on the rest of
/// c2, maximizing t with t <= 1. Returns true iff the optimum is positive.
pub fn proper_face_separation(c1: &[Vec<Rat>], c2: &[Vec<Rat>]) -> bool {
    let n = c1[0].len();
    let shared: Vec<&Vec<Rat>> = c1.iter().filter(|v| c2.contains(v)).collect();
    let only1: Vec<&Vec<Rat>> = c1.iter().filter(|v| !c2.contains(v)).collect();
    let only2: Vec<&Vec<Rat>> = c2.iter().filter(|v| !c1.contains(v)).collect();
    // variables: a+ (n), a- (n), b+, b-, t, one slack per inequality, slack for t<=1
    let nineq = only1.len() + only2.len();
    let nv = 2 * n + 2 + 1 + nineq + 1;
    let col_t = 2 * n + 2;
    let mut rows: Vec<Vec<Rat>> = vec![];
    let mut rhs: Vec<Rat> = vec![];
    let mut slack = 2 * n + 3;
    let push_point = |v: &[Rat], kind: i8, slack_col: Option<usize>, rows: &mut Vec<Vec<Rat>>, rhs: &mut Vec<Rat>| {
        let mut row = vec![Rat::zero(); nv];
        for j in 0..n {
            row[j] = v[j].clone();
            row[n + j] = -v[j].clone();
        }
        row[2 * n] = Rat::one();
        row[2 * n + 1] = -Rat::one();
        match kind {
            0 => {}
            // a.v + b + t + s = 0
            -1 => {
                row[col_t] = Rat::one();
                row[slack_col.unwrap()] = Rat::one();
            }
            // a.v + b - t - s = 0
            1 => {
                row[col_t] = -Rat::one();
                row[slack_col.unwrap()] = -Rat::one();
            }
            _ => unreachable!(),
        }
        rows.push(row);
        rhs.push(Rat::zero());
    };
    for v in &shared {
        push_point(v, 0, None, &mut rows, &mut rhs);
    }
    for v in &only1 {
        push_point(v, -1, Some(slack), &mut rows, &mut rhs);
        slack += 1;
    }
    for v in &only2 {
        push_point(v, 1, Some(slack), &mut rows, &mut rhs);
        slack += 1;
    }
    // t + s = 1
    let mut row = vec![Rat::zero(); nv];
    row[col_t] = Rat::one();
    row[slack] = Rat::one();
    rows.push(row);
    rhs.push(Rat::one());
    let mut c = vec![Rat::zero(); nv];
    c[col_t] = -Rat::one(); // maximize t
    match solve(&rows, &rhs, &c) {
        LpOutcome::Optimal { objective, .. } => (-objective).is_positive(),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::rat;

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn simple_lp() {
        // min -x1 - x2 s.t. x1 + x2 + s = 1
        let a = vec![rv(&[1, 1, 1])];
        let b = rv(&[1]);
        let c = rv(&[-1, -1, 0]);
        match solve(&a, &b, &c) {
            LpOutcome::Optimal { objective, .. } => assert_eq!(objective, rat(-1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_lp() {
        // x1 = 1, x1 = 2
        let a = vec![rv(&[1]), rv(&[1])];
        let b = rv(&[1, 2]);
        assert!(!feasible(&a, &b));
    }

    #[test]
    fn unbounded_lp() {
        // min -x1 s.t. x1 - x2 = 0
        let a = vec![rv(&[1, -1])];
        let b = rv(&[0]);
        let c = rv(&[-1, 0]);
        assert_eq!(solve(&a, &b, &c), LpOutcome::Unbounded);
    }

    #[test]
    fn hull_membership() {
        let pts = vec![rv(&[0, 0]), rv(&[1, 0]), rv(&[0, 1])];
        assert!(point_in_convex_hull(&rv(&[0, 0]), &pts));
        let third = Rat::new(1.into(), 3.into());
        assert!(point_in_convex_hull(&[third.clone(), third], &pts));
        assert!(!point_in_convex_hull(&rv(&[1, 1]), &pts));
    }

    #[test]
    fn face_separation() {
        // two triangles sharing a diagonal of the unit square: proper
        let c1 = vec![rv(&[0, 0]), rv(&[1, 0]), rv(&[0, 1])];
        let c2 = vec![rv(&[1, 0]), rv(&[0, 1]), rv(&[1, 1])];
        assert!(proper_face_separation(&c1, &c2));
        // overlapping triangles: not
        let c3 = vec![rv(&[0, 0]), rv(&[1, 0]), rv(&[1, 1])];
        assert!(!proper_face_separation(&c1, &c3));
    }
}
