//! Exact double description: extreme rays of a pointed polyhedral cone
//! `{y : a_i . y >= 0}`, and vertices of bounded polytopes through
//! homogenization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::denominator_lcm;
use crate::exact::{Matrix, Rational, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
struct RowSet(Vec<u64>);

impl RowSet {
    fn empty(rows: usize) -> Self {
        RowSet(vec![0; rows.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &RowSet) -> RowSet {
        RowSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn contains_all(&self, other: &RowSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    dir: Vector,
    zeros: RowSet,
}

/// Scales a ray to a primitive integer vector (positive scaling only).
fn normalize(v: Vector) -> Vector {
    let lcm = denominator_lcm(v.entries());
    let ints: Vec<BigInt> = v
        .entries()
        .iter()
        .map(|e| (e * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v;
    }
    Vector::new(
        ints.into_iter()
            .map(|x| Rational::from_integer(x / &gcd))
            .collect(),
    )
}

/// Extreme rays of `{y in R^dim : a . y >= 0 for every row a}`.
///
/// The cone must be pointed, i.e. the rows must span `R^dim`; otherwise
/// `DegenerateNorm` is returned. Rays are primitive integer vectors.
pub fn cone_extreme_rays(rows: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    for r in rows {
        r.check_dim(dim)?;
    }
    let m = rows.len();

    // pick an initial basis of independent rows
    let mut basis: Vec<usize> = Vec::new();
    let mut chosen: Vec<Vector> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        chosen.push(r.clone());
        if crate::exact::rank_of(&chosen, dim) == chosen.len() {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        } else {
            chosen.pop();
        }
    }
    if basis.len() < dim {
        return Err(Error::DegenerateNorm);
    }

    // the simplicial cone {R y >= 0} has rays R^{-1} e_j
    let basis_matrix = Matrix::from_rows(chosen).expect("square basis");
    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    for j in 0..dim {
        let (dir, null) = basis_matrix
            .solve(&Vector::unit(dim, j))
            .expect("basis rows are independent");
        debug_assert!(null.is_empty());
        let mut zeros = RowSet::empty(m);
        for (k, &row) in basis.iter().enumerate() {
            if k != j {
                zeros.insert(row);
            }
        }
        rays.push(Ray {
            dir: normalize(dir),
            zeros,
        });
    }

    for (k, row) in rows.iter().enumerate() {
        if basis.contains(&k) {
            continue;
        }
        let values: Vec<Rational> = rays.iter().map(|r| row.dot(&r.dir)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            for (ray, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    ray.zeros.insert(k);
                }
            }
            continue;
        }

        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();

        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.intersect(&rays[n].zeros);
                if common.len() + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == n || !r.zeros.contains_all(&common));
                if !adjacent {
                    continue;
                }
                let dir = &rays[n].dir.scale(&values[p]) - &rays[p].dir.scale(&values[n]);
                let mut zeros = common;
                zeros.insert(k);
                fresh.push(Ray {
                    dir: normalize(dir),
                    zeros,
                });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut ray, v) in rays.into_iter().zip(values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                ray.zeros.insert(k);
            }
            next.push(ray);
        }
        next.extend(fresh);
        rays = next;
    }

    Ok(rays.into_iter().map(|r| r.dir).collect())
}

/// Vertices of the polytope `{x : a_i . x <= b_i}`.
///
/// The constraint normals must span the space. Returns an empty list when
/// the polytope is empty. Recession directions (unbounded polyhedra) are
/// reported as `CapacityExceeded`, since every caller works with bounded
/// sets.
pub fn polytope_vertices(
    normals: &[Vector],
    bounds: &[Rational],
    dim: usize,
) -> Result<Vec<Vector>> {
    assert_eq!(normals.len(), bounds.len());
    // homogenize: b t - a . x >= 0, t >= 0
    let mut rows: Vec<Vector> = normals
        .iter()
        .zip(bounds)
        .map(|(a, b)| {
            let mut e: Vec<Rational> = a.entries().iter().map(|v| -v).collect();
            e.push(b.clone());
            Vector::new(e)
        })
        .collect();
    rows.push(Vector::unit(dim + 1, dim));
    let rays = cone_extreme_rays(&rows, dim + 1)?;
    let mut vertices = Vec::new();
    for ray in rays {
        let t = ray[dim].clone();
        if t.is_zero() {
            return Err(Error::CapacityExceeded(
                "polyhedron is unbounded".to_string(),
            ));
        }
        let inv = t.recip();
        vertices.push(Vector::new(
            ray.entries()[..dim].iter().map(|e| e * &inv).collect(),
        ));
    }
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

/// Vertices of `{x : |g . x| <= 1 for every g}`, the unit ball of the
/// polyhedral norm with the given dual vertices.
pub fn unit_ball_vertices(duals: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    let mut normals = Vec::with_capacity(2 * duals.len());
    for g in duals {
        normals.push(g.clone());
        normals.push(-g);
    }
    let bounds = vec![Rational::one(); normals.len()];
    polytope_vertices(&normals, &bounds, dim)
}
