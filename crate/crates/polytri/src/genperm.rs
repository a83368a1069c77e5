//! Integral generalized permutahedra: greedy vertex enumeration from a
//! submodular function, unit-box dicing into translated matroid base
//! polytopes, full triangulation, and the independence-polytope lift.

use crate::exact_linalg::{rat, Rat};
use crate::polytope::{
    independence_polytope_points, is_matroid_polytope, AffineFunctional, Point,
    PointConfiguration,
};
use crate::matroid::Matroid;
use crate::subdivision::{
    concretize_epsilon, induced_subdivision, lower_hull_subdivision, HeightFunction,
    RegularityCertificate, Subdivision, Triangulation,
};
use crate::triangulate::{
    certified_unimodular_cover, BuiltTriangulation, Schedule, TriangulationMeta, RETRY_CAP,
};
use crate::{Error, Result};

pub const MAX_SUBMODULAR_GROUND: usize = 12;

/// A submodular set function given by its full value table, f(empty) = 0.
#[derive(Debug, Clone)]
pub struct SubmodularFunction {
    n: usize,
    table: Vec<i64>,
}

impl SubmodularFunction {
    pub fn new(n: usize, table: Vec<i64>) -> Result<Self> {
        if n > MAX_SUBMODULAR_GROUND || table.len() != 1 << n {
            return Err(Error::InvalidMatroid(format!(
                "submodular table must have 2^n entries, n <= {MAX_SUBMODULAR_GROUND}"
            )));
        }
        if table[0] != 0 {
            return Err(Error::NotSubmodular(0, 0));
        }
        let full = (1u32 << n) - 1;
        for s in 0..=full {
            for t in 0..=full {
                if table[(s | t) as usize] + table[(s & t) as usize]
                    > table[s as usize] + table[t as usize]
                {
                    return Err(Error::NotSubmodular(s, t));
                }
            }
        }
        Ok(SubmodularFunction { n, table })
    }

    pub fn from_matroid_rank(m: &Matroid) -> Self {
        let n = m.n();
        let table = (0u32..1 << n).map(|s| m.rank(s) as i64).collect();
        SubmodularFunction { n, table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, s: u32) -> i64 {
        self.table[s as usize]
    }
}

/// All vertices of the generalized permutahedron of f: the greedy point of
/// every coordinate ordering, deduplicated. Factorial in n.
pub fn vertices_from_submodular(f: &SubmodularFunction) -> PointConfiguration {
    let n = f.n;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut verts: Vec<Point> = vec![];
    permute(&mut perm, 0, &mut |p| {
        let mut v = vec![0i64; n];
        let mut s: u32 = 0;
        for &i in p {
            let prev = f.value(s);
            s |= 1 << i;
            v[i] = f.value(s) - prev;
        }
        verts.push(v);
    });
    verts.sort();
    verts.dedup();
    PointConfiguration::new(n, verts)
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Translate the polytope of f into the nonnegative box by subtracting the
/// coordinate-wise vertex minima; returns the shifted submodular function
/// and the lattice points of the shifted polytope.
fn normalized_lattice_points(f: &SubmodularFunction) -> (Vec<i64>, PointConfiguration) {
    let n = f.n;
    let verts = vertices_from_submodular(f);
    let mins: Vec<i64> = (0..n)
        .map(|i| verts.points.iter().map(|v| v[i]).min().unwrap())
        .collect();
    let full = (1u32 << n) - 1;
    let shifted = |s: u32| -> i64 {
        f.value(s)
            - (0..n)
                .filter(|&i| s & (1 << i) != 0)
                .map(|i| mins[i])
                .sum::<i64>()
    };
    // enumerate the box and keep points satisfying every defining
    // inequality; the polytope is integral so this is exactly P cap Z^n
    let mut pts: Vec<Point> = vec![];
    let mut cur = vec![0i64; n];
    fn walk(
        k: usize,
        n: usize,
        cur: &mut Vec<i64>,
        cap: &dyn Fn(usize) -> i64,
        accept: &dyn Fn(&[i64]) -> bool,
        out: &mut Vec<Point>,
    ) {
        if k == n {
            if accept(cur) {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=cap(k) {
            cur[k] = v;
            walk(k + 1, n, cur, cap, accept, out);
        }
    }
    walk(
        0,
        n,
        &mut cur,
        &|k| shifted(1 << k),
        &|x| {
            (1..=full).all(|s| {
                let sum: i64 = (0..n).filter(|&i| s & (1 << i) != 0).map(|i| x[i]).sum();
                if s == full {
                    sum == shifted(full)
                } else {
                    sum <= shifted(s)
                }
            })
        },
        &mut pts,
    );
    (mins, PointConfiguration::new(n, pts))
}

fn dicing_heights(config: &PointConfiguration) -> Vec<Rat> {
    config
        .points
        .iter()
        .map(|p| rat(p.iter().map(|&x| x * x).sum()))
        .collect()
}

/// Dice the polytope of f by the integer-coordinate hyperplanes. Every cell
/// is a unit-box piece and, translated to the 0-1 cube, a matroid base
/// polytope.
pub fn dice(f: &SubmodularFunction) -> Result<Subdivision> {
    let (_, config) = normalized_lattice_points(f);
    let sub = lower_hull_subdivision(&config, &dicing_heights(&config));
    for cell in &sub.cells {
        let pts: Vec<Point> = cell.points.iter().map(|&i| config.points[i].clone()).collect();
        let mins: Vec<i64> = (0..config.ambient_dim)
            .map(|k| pts.iter().map(|p| p[k]).min().unwrap())
            .collect();
        let translated: Vec<Point> = pts
            .iter()
            .map(|p| p.iter().zip(&mins).map(|(&x, &m)| x - m).collect())
            .collect();
        if translated
            .iter()
            .any(|p| p.iter().any(|&x| x != 0 && x != 1))
            || !is_matroid_polytope(&translated)
        {
            return Err(Error::BadDicingCell);
        }
    }
    Ok(sub)
}

/// Triangulate a lattice point configuration by the layered heights whose
/// level 0 is the unit dicing and whose level k applies the schedule
/// functional indexed by the first k coordinates. Retries with increasing t
/// until all cells are certified unimodular simplices covering the volume.
pub fn triangulate_lattice_points(
    config: &PointConfiguration,
    seed: u64,
    t_start: Option<i64>,
) -> Result<BuiltTriangulation> {
    let n = config.ambient_dim;
    let d = config.affine_dim();
    let volume = config.normalized_volume();
    let t0 = t_start.unwrap_or(n as i64 * config.points.len() as i64 + 2);
    let mut t_sequence = vec![];
    for attempt in 0..RETRY_CAP {
        let t = t0 + attempt as i64;
        t_sequence.push(t);
        let schedule = Schedule { t, seed };
        let mut levels = vec![dicing_heights(config)];
        for k in 1..n {
            levels.push(
                config
                    .points
                    .iter()
                    .map(|p| {
                        let s: Vec<u8> = p[..k].iter().map(|&x| x as u8).collect();
                        schedule.eval(&s, &p[k..])
                    })
                    .collect(),
            );
        }
        let hf = HeightFunction { levels };
        let sub = induced_subdivision(config, &hf);
        if !certified_unimodular_cover(&sub, d, &volume) {
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
                split_order: (0..n).collect(),
            },
        });
    }
    Err(Error::RetryCapExceeded(RETRY_CAP))
}

/// Regular unimodular triangulation of the generalized permutahedron of f
/// (translated into the nonnegative box).
pub fn triangulate_genperm(
    f: &SubmodularFunction,
    seed: u64,
    t_start: Option<i64>,
) -> Result<BuiltTriangulation> {
    dice(f)?; // validates the matroid-cell property of the level-0 dicing
    let (_, config) = normalized_lattice_points(f);
    triangulate_lattice_points(&config, seed, t_start)
}

/// The unimodular lift v -> (r(E) - sum v, v) carrying the independence
/// polytope onto a generalized permutahedron in one dimension up.
pub fn lift_independence(m: &Matroid) -> (PointConfiguration, PointConfiguration) {
    let indep = independence_polytope_points(m);
    let r = m.rank((1u32 << m.n()) - 1) as i64;
    let lifted: Vec<Point> = indep
        .points
        .iter()
        .map(|v| {
            let mut q = vec![r - v.iter().sum::<i64>()];
            q.extend(v);
            q
        })
        .collect();
    (PointConfiguration::new(m.n() + 1, lifted), indep)
}

/// Triangulate the independence polytope by triangulating its lift and
/// mapping back through the inverse (drop coordinate 0).
pub fn triangulate_independence_polytope(
    m: &Matroid,
    seed: u64,
    t_start: Option<i64>,
) -> Result<BuiltTriangulation> {
    let (lifted, indep) = lift_independence(m);
    let built = triangulate_lattice_points(&lifted, seed, t_start)?;
    let r = m.rank((1u32 << m.n()) - 1) as i64;
    // indices agree: lifted point i is the image of independence point i
    debug_assert_eq!(lifted.points.len(), indep.points.len());
    let compose = |w: &AffineFunctional| compose_with_lift(w, r);
    let cells = built
        .tri
        .sub
        .cells
        .iter()
        .map(|c| crate::subdivision::Cell {
            points: c.points.clone(),
            witnesses: c.witnesses.iter().map(compose).collect(),
        })
        .collect();
    let certificate = built.tri.certificate.map(|cert| RegularityCertificate {
        levels: cert.levels,
        epsilon: cert.epsilon,
        flat_heights: cert.flat_heights,
        flat_witnesses: cert.flat_witnesses.iter().map(compose).collect(),
    });
    Ok(BuiltTriangulation {
        tri: Triangulation {
            sub: Subdivision {
                base: indep,
                cells,
            },
            certificate,
        },
        meta: built.meta,
    })
}

/// Pull a functional on the lifted space back along v -> (r - sum v, v).
fn compose_with_lift(w: &AffineFunctional, r: i64) -> AffineFunctional {
    let c0 = &w.coeffs[0];
    AffineFunctional {
        coeffs: w.coeffs[1..].iter().map(|c| c - c0).collect(),
        constant: &w.constant + c0 * rat(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::int;

    fn perm3() -> SubmodularFunction {
        // conv(permutations of (0,1,2)): f(S) = sum of the |S| largest entries
        let table = (0u32..8)
            .map(|s| match s.count_ones() {
                0 => 0,
                1 => 2,
                2 => 3,
                _ => 3,
            })
            .collect();
        SubmodularFunction::new(3, table).unwrap()
    }

    #[test]
    fn submodular_validation() {
        assert!(SubmodularFunction::new(2, vec![0, 1, 1, 2]).is_ok());
        // f({1})+f({2}) < f({1,2})+f(empty): supermodular
        assert!(matches!(
            SubmodularFunction::new(2, vec![0, 0, 0, 1]),
            Err(Error::NotSubmodular(_, _))
        ));
        assert!(SubmodularFunction::new(2, vec![1, 1, 1, 1]).is_err());
    }

    #[test]
    fn greedy_vertices() {
        // cardinality function: single vertex
        let f = SubmodularFunction::new(3, (0u32..8).map(|s| s.count_ones() as i64).collect())
            .unwrap();
        assert_eq!(vertices_from_submodular(&f).points, vec![vec![1, 1, 1]]);

        let f = SubmodularFunction::from_matroid_rank(&Matroid::uniform(1, 2));
        let mut v = vertices_from_submodular(&f).points;
        v.sort();
        assert_eq!(v, vec![vec![0, 1], vec![1, 0]]);

        // rank vertices match the base polytope vertex set
        for m in [Matroid::uniform(2, 4), Matroid::graphic(3, &[(0, 1), (1, 2), (0, 2)])] {
            let f = SubmodularFunction::from_matroid_rank(&m);
            let mut a = vertices_from_submodular(&f).points;
            a.sort();
            let mut b = crate::polytope::base_polytope(&m).points;
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn dice_examples() {
        // a matroid polytope fits in one unit box: trivial dicing
        let f = SubmodularFunction::from_matroid_rank(&Matroid::uniform(2, 4));
        let sub = dice(&f).unwrap();
        assert_eq!(sub.cells.len(), 1);

        // segment (0,2)-(2,0): cut at x_1 = 1
        let f = SubmodularFunction::new(2, vec![0, 2, 2, 2]).unwrap();
        let sub = dice(&f).unwrap();
        assert_eq!(sub.cells.len(), 2);

        let sub = dice(&perm3()).unwrap();
        assert_eq!(sub.cells.len(), 6);
    }

    #[test]
    fn triangulate_perm3() {
        let built = triangulate_genperm(&perm3(), 0, None).unwrap();
        let (_, config) = normalized_lattice_points(&perm3());
        assert_eq!(
            int(built.tri.sub.cells.len() as i64),
            config.normalized_volume()
        );
        assert!(built.tri.certificate.is_some());
    }

    #[test]
    fn lift_examples() {
        let (lifted, indep) = lift_independence(&Matroid::uniform(1, 2));
        let find = |v: &[i64]| indep.points.iter().position(|p| p == v).unwrap();
        assert_eq!(lifted.points[find(&[0, 0])], vec![1, 0, 0]);
        assert_eq!(lifted.points[find(&[1, 0])], vec![0, 1, 0]);

        let (lifted, indep) = lift_independence(&Matroid::uniform(2, 3));
        let find = |v: &[i64]| indep.points.iter().position(|p| p == v).unwrap();
        assert_eq!(lifted.points[find(&[1, 1, 0])], vec![0, 1, 1, 0]);
        // unimodularity of the lift: volumes agree
        assert_eq!(lifted.normalized_volume(), indep.normalized_volume());
    }

    #[test]
    fn independence_triangulations() {
        let built = triangulate_independence_polytope(&Matroid::uniform(1, 2), 0, None).unwrap();
        assert_eq!(built.tri.sub.cells.len(), 1);

        let built = triangulate_independence_polytope(&Matroid::uniform(1, 1), 0, None).unwrap();
        assert_eq!(built.tri.sub.cells.len(), 1);

        let m = Matroid::uniform(2, 3);
        let built = triangulate_independence_polytope(&m, 0, None).unwrap();
        let indep = independence_polytope_points(&m);
        assert_eq!(
            int(built.tri.sub.cells.len() as i64),
            indep.normalized_volume()
        );
        // pulled-back witnesses remain valid lexicographic certificates
        let cert = built.tri.certificate.as_ref().unwrap();
        for (cell, w) in built.tri.sub.cells.iter().zip(&cert.flat_witnesses) {
            for (i, p) in built.tri.sub.base.points.iter().enumerate() {
                let v = w.eval(p);
                if cell.points.binary_search(&i).is_ok() {
                    assert_eq!(v, cert.flat_heights[i]);
                } else {
                    assert!(v < cert.flat_heights[i]);
                }
            }
        }
    }
}
