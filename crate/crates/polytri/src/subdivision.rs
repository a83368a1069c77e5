//! Regular subdivisions from height functions: lower-hull computation,
//! iterated refinement, and concretization of a layered height function to
//! a single rational one.

use crate::exact_linalg::{int_rank, sub_vec, Int, Rat};
use crate::polytope::{AffineFunctional, PointConfiguration};
use crate::{Error, Result};
use num::{One, Zero};

/// A cell of a subdivision, with the chain of height witnesses (one per
/// refinement level) certifying it, as ambient affine functionals.
#[derive(Debug, Clone)]
pub struct Cell {
    /// sorted indices into the base configuration
    pub points: Vec<usize>,
    pub witnesses: Vec<AffineFunctional>,
}

#[derive(Debug, Clone)]
pub struct Subdivision {
    pub base: PointConfiguration,
    pub cells: Vec<Cell>,
}

/// Heights assigned level by level; the induced subdivision is the common
/// refinement for lexicographically small positive weights.
#[derive(Debug, Clone)]
pub struct HeightFunction {
    /// levels[k][i] = level-k height of point i
    pub levels: Vec<Vec<Rat>>,
}

/// Data certifying that a triangulation is the lower hull of a concrete
/// rational height function.
#[derive(Debug, Clone)]
pub struct RegularityCertificate {
    pub levels: Vec<Vec<Rat>>,
    pub epsilon: Rat,
    pub flat_heights: Vec<Rat>,
    /// one witness per cell, in cell order
    pub flat_witnesses: Vec<AffineFunctional>,
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    pub sub: Subdivision,
    pub certificate: Option<RegularityCertificate>,
}

impl Triangulation {
    pub fn from_cells(base: PointConfiguration, mut cells: Vec<Vec<usize>>) -> Self {
        for c in &mut cells {
            c.sort_unstable();
        }
        cells.sort();
        Triangulation {
            sub: Subdivision {
                base,
                cells: cells
                    .into_iter()
                    .map(|points| Cell {
                        points,
                        witnesses: vec![],
                    })
                    .collect(),
            },
            certificate: None,
        }
    }

    pub fn cell_sets(&self) -> Vec<Vec<usize>> {
        self.sub.cells.iter().map(|c| c.points.clone()).collect()
    }
}

impl Subdivision {
    pub fn trivial(base: PointConfiguration) -> Self {
        let all: Vec<usize> = (0..base.points.len()).collect();
        Subdivision {
            base,
            cells: vec![Cell {
                points: all,
                witnesses: vec![],
            }],
        }
    }

    pub fn cell_sets(&self) -> Vec<Vec<usize>> {
        self.cells.iter().map(|c| c.points.clone()).collect()
    }

    pub fn is_triangulation(&self) -> bool {
        let d = self.base.affine_dim();
        self.cells.iter().all(|c| {
            c.points.len() == d + 1 && {
                let coords = self.base.lattice_coords();
                let dirs: Vec<Vec<Int>> = c.points[1..]
                    .iter()
                    .map(|&i| sub_vec(&coords[i], &coords[c.points[0]]))
                    .collect();
                int_rank(&dirs) == d
            }
        })
    }
}

/// Maximal cells of the lower hull of (coords[i], heights[i]), together
/// with the affine functional on lattice coordinates that is tight exactly
/// on each cell. `d` is the affine dimension of the configuration.
fn lower_hull_cells(
    coords: &[Vec<Int>],
    heights: &[Rat],
    d: usize,
) -> Vec<(Vec<usize>, Vec<Rat>, Rat)> {
    let n = coords.len();
    assert_eq!(heights.len(), n);
    if n == 1 {
        return vec![(vec![0], vec![], heights[0].clone())];
    }
    let coords_rat: Vec<Vec<Rat>> = coords
        .iter()
        .map(|p| {
            let mut row: Vec<Rat> = p.iter().map(|x| Rat::from_integer(x.clone())).collect();
            row.push(Rat::one());
            row
        })
        .collect();
    // shortcut: a single affine function fitting every height means the
    // subdivision is trivial
    if let Some(sol) = crate::exact_linalg::rat_solve_unique(&coords_rat, heights) {
        let (a, c) = sol.split_at(d);
        return vec![((0..n).collect(), a.to_vec(), c[0].clone())];
    }

    let eval = |a: &[Rat], c: &Rat, i: usize| -> Rat {
        let mut acc = c.clone();
        for (ak, x) in a.iter().zip(&coords[i]) {
            acc += ak * Rat::from_integer(x.clone());
        }
        acc
    };

    let mut found: Vec<(Vec<usize>, Vec<Rat>, Rat)> = vec![];
    // enumerate affinely independent (d+1)-subsets; each determines a
    // candidate supporting hyperplane of the lifted configuration
    let mut chosen: Vec<usize> = vec![];
    fn recurse(
        n: usize,
        d: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        coords: &[Vec<Int>],
        coords_rat: &[Vec<Rat>],
        heights: &[Rat],
        eval: &dyn Fn(&[Rat], &Rat, usize) -> Rat,
        found: &mut Vec<(Vec<usize>, Vec<Rat>, Rat)>,
    ) {
        if chosen.len() == d + 1 {
            if found.iter().any(|(cell, _, _)| {
                chosen.iter().all(|i| cell.binary_search(i).is_ok())
            }) {
                return;
            }
            let rows: Vec<Vec<Rat>> = chosen.iter().map(|&i| coords_rat[i].clone()).collect();
            let rhs: Vec<Rat> = chosen.iter().map(|&i| heights[i].clone()).collect();
            let sol = match crate::exact_linalg::rat_solve_unique(&rows, &rhs) {
                Some(s) => s,
                None => return,
            };
            let (a, c) = sol.split_at(d);
            let c = &c[0];
            let mut cell = vec![];
            for i in 0..n {
                let v = eval(a, c, i);
                if v > heights[i] {
                    return;
                }
                if v == heights[i] {
                    cell.push(i);
                }
            }
            if !found.iter().any(|(f, _, _)| f == &cell) {
                found.push((cell, a.to_vec(), c.clone()));
            }
            return;
        }
        for i in start..n {
            // keep only affinely independent prefixes
            let dirs: Vec<Vec<Int>> = if chosen.is_empty() {
                vec![]
            } else {
                chosen[1..]
                    .iter()
                    .map(|&j| sub_vec(&coords[j], &coords[chosen[0]]))
                    .chain(std::iter::once(sub_vec(&coords[i], &coords[chosen[0]])))
                    .collect()
            };
            if !chosen.is_empty() && int_rank(&dirs) != chosen.len() {
                continue;
            }
            chosen.push(i);
            recurse(n, d, i + 1, chosen, coords, coords_rat, heights, eval, found);
            chosen.pop();
        }
    }
    recurse(
        n,
        d,
        0,
        &mut chosen,
        coords,
        &coords_rat,
        heights,
        &eval,
        &mut found,
    );
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found
}

/// The regular subdivision of the configuration induced by one height per
/// point. Every cell carries its witness functional.
pub fn lower_hull_subdivision(base: &PointConfiguration, heights: &[Rat]) -> Subdivision {
    let cells = lower_hull_cells(base.lattice_coords(), heights, base.affine_dim());
    Subdivision {
        base: base.clone(),
        cells: cells
            .into_iter()
            .map(|(points, a, c)| Cell {
                witnesses: vec![base.ambient_functional(&a, &c)],
                points,
            })
            .collect(),
    }
}

/// Refine every cell of a subdivision by the lower hull of the given
/// heights restricted to the cell. Witness chains are extended by one
/// level.
pub fn refine(sub: &Subdivision, heights: &[Rat]) -> Subdivision {
    let base = &sub.base;
    let d = base.affine_dim();
    let mut cells = vec![];
    for cell in &sub.cells {
        let sub_coords: Vec<Vec<Int>> = cell
            .points
            .iter()
            .map(|&i| base.lattice_coords()[i].clone())
            .collect();
        let sub_heights: Vec<Rat> = cell.points.iter().map(|&i| heights[i].clone()).collect();
        for (local, a, c) in lower_hull_cells(&sub_coords, &sub_heights, d) {
            let mut witnesses = cell.witnesses.clone();
            witnesses.push(base.ambient_functional(&a, &c));
            cells.push(Cell {
                points: local.iter().map(|&j| cell.points[j]).collect(),
                witnesses,
            });
        }
    }
    cells.sort_by(|a, b| a.points.cmp(&b.points));
    Subdivision {
        base: base.clone(),
        cells,
    }
}

/// Iterated refinement by the levels of a layered height function.
pub fn induced_subdivision(base: &PointConfiguration, hf: &HeightFunction) -> Subdivision {
    assert!(!hf.levels.is_empty());
    let mut sub = lower_hull_subdivision(base, &hf.levels[0]);
    for level in &hf.levels[1..] {
        sub = refine(&sub, level);
    }
    sub
}

/// Find a concrete epsilon = 2^-m such that the single height function
/// sum_k eps^k * level_k induces exactly the given subdivision, returning
/// the flat heights and one valid witness per cell (in cell order).
///
/// Validity of a flat witness for every cell (tight exactly on the cell,
/// below elsewhere) already forces the lower hull of the flat heights to
/// have exactly these maximal cells, so no hull recomputation is needed.
pub fn concretize_epsilon(
    sub: &Subdivision,
    hf: &HeightFunction,
) -> Result<(Rat, Vec<Rat>, Vec<AffineFunctional>)> {
    let npts = sub.base.points.len();
    for cell in &sub.cells {
        assert_eq!(cell.witnesses.len(), hf.levels.len());
    }
    const CAP: usize = 64;
    for m in 1..=CAP {
        let eps = Rat::new(Int::one(), Int::from(2).pow(m as u32));
        let mut flat = vec![Rat::zero(); npts];
        let mut w = Rat::one();
        for level in &hf.levels {
            for i in 0..npts {
                flat[i] += &w * &level[i];
            }
            w *= &eps;
        }
        let mut witnesses = vec![];
        let mut ok = true;
        'cells: for cell in &sub.cells {
            let mut omega = AffineFunctional::constant_fn(sub.base.ambient_dim, Rat::zero());
            let mut w = Rat::one();
            for wit in &cell.witnesses {
                omega = omega.plus(&wit.scaled(&w));
                w *= &eps;
            }
            for i in 0..npts {
                let v = omega.eval(&sub.base.points[i]);
                let on_cell = cell.points.binary_search(&i).is_ok();
                if (on_cell && v != flat[i]) || (!on_cell && v >= flat[i]) {
                    ok = false;
                    break 'cells;
                }
            }
            witnesses.push(omega);
        }
        if ok {
            return Ok((eps, flat, witnesses));
        }
    }
    Err(Error::EpsilonCapExceeded(CAP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::rat;

    fn seg3() -> PointConfiguration {
        PointConfiguration::new(1, vec![vec![0], vec![1], vec![2]])
    }

    #[test]
    fn one_dim_hulls() {
        let base = seg3();
        let flat = lower_hull_subdivision(&base, &[rat(0), rat(0), rat(0)]);
        assert_eq!(flat.cell_sets(), vec![vec![0, 1, 2]]);

        let vee = lower_hull_subdivision(&base, &[rat(0), rat(-1), rat(0)]);
        assert_eq!(vee.cell_sets(), vec![vec![0, 1], vec![1, 2]]);

        let hat = lower_hull_subdivision(&base, &[rat(0), rat(1), rat(0)]);
        assert_eq!(hat.cell_sets(), vec![vec![0, 2]]);
    }

    fn square() -> PointConfiguration {
        PointConfiguration::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
    }

    #[test]
    fn square_hulls() {
        // x^2 + y^2 restricted to the unit square is affine: no split
        let s = lower_hull_subdivision(&square(), &[rat(0), rat(1), rat(1), rat(2)]);
        assert_eq!(s.cell_sets(), vec![vec![0, 1, 2, 3]]);
        // lifting one corner splits off two triangles
        let s = lower_hull_subdivision(&square(), &[rat(0), rat(0), rat(0), rat(1)]);
        assert_eq!(s.cell_sets(), vec![vec![0, 1, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn witness_validity() {
        let base = square();
        let h = [rat(0), rat(0), rat(0), rat(1)];
        let s = lower_hull_subdivision(&base, &h);
        for cell in &s.cells {
            let w = &cell.witnesses[0];
            for i in 0..4 {
                let v = w.eval(&base.points[i]);
                if cell.points.contains(&i) {
                    assert_eq!(v, h[i]);
                } else {
                    assert!(v < h[i]);
                }
            }
        }
    }

    #[test]
    fn refinement_and_epsilon() {
        let base = square();
        let hf = HeightFunction {
            levels: vec![
                vec![rat(0); 4],
                vec![rat(0), rat(0), rat(0), rat(1)],
            ],
        };
        let sub = induced_subdivision(&base, &hf);
        assert_eq!(sub.cell_sets(), vec![vec![0, 1, 2], vec![1, 2, 3]]);
        assert!(sub.is_triangulation());

        let (eps, flat, wits) = concretize_epsilon(&sub, &hf).unwrap();
        assert!(eps > Rat::zero());
        assert_eq!(wits.len(), 2);
        // the flat heights induce the same subdivision in one step
        let direct = lower_hull_subdivision(&base, &flat);
        assert_eq!(direct.cell_sets(), sub.cell_sets());
    }

    #[test]
    fn refine_by_constant_is_identity() {
        let base = square();
        let s = lower_hull_subdivision(&base, &[rat(0), rat(0), rat(0), rat(1)]);
        let r = refine(&s, &[rat(5), rat(5), rat(5), rat(5)]);
        assert_eq!(r.cell_sets(), s.cell_sets());
    }

    #[test]
    fn volume_cover() {
        use crate::polytope::simplex_volume_in_coords;
        let base = square();
        let hf = HeightFunction {
            levels: vec![vec![rat(0), rat(0), rat(0), rat(1)]],
        };
        let sub = induced_subdivision(&base, &hf);
        let total: crate::exact_linalg::Int = sub
            .cells
            .iter()
            .map(|c| {
                let pts: Vec<Vec<crate::exact_linalg::Int>> = c
                    .points
                    .iter()
                    .map(|&i| base.lattice_coords()[i].clone())
                    .collect();
                simplex_volume_in_coords(&pts)
            })
            .sum();
        assert_eq!(total, base.normalized_volume());
    }
}
