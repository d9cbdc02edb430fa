use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{denominator_lcm, Rational};
use super::vector::Vector;
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from its rows. All rows must share one length.
    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let cols = rows.first().map(Vector::dim).unwrap_or(0);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            row.check_dim(cols)?;
            data.extend(row.into_entries());
        }
        Ok(Self {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| Vector::from_ints(r)).collect())
            .expect("rectangular integer rows")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector], dim: usize) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..dim {
                m.data[i * cols.len() + j] = col[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> Vector {
        Vector::new(self.data[row * self.cols..(row + 1) * self.cols].to_vec())
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, col: usize) -> Vector {
        Vector::new((0..self.rows).map(|i| self.get(i, col).clone()).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        debug_assert_eq!(v.dim(), self.cols);
        Vector::new(
            (0..self.rows)
                .map(|i| {
                    let row = &self.data[i * self.cols..(i + 1) * self.cols];
                    row.iter()
                        .zip(v.entries())
                        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Rank by fraction-free (Bareiss) elimination. Each row is first
    /// cleared of denominators, so every intermediate value is an integer
    /// minor of the scaled matrix.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let lcm = denominator_lcm(row);
                row.iter()
                    .map(|e| (e * Rational::from_integer(lcm.clone())).to_integer())
                    .collect()
            })
            .collect();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            for i in rank + 1..self.rows {
                for j in col + 1..self.cols {
                    let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                    debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                    m[i][j] = num / &prev;
                }
                m[i][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    m.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = m.get(r, col).recip();
            for j in col..self.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in col..self.cols {
                    let v = m.get(i, j) - &factor * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    /// Exact basis of the null space. Empty iff the matrix is injective.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (rref, pivots) = self.rref();
        null_space_from_rref(&rref, &pivots, self.cols)
    }

    /// Solves `self * x = rhs`. Returns a particular solution and a basis
    /// of the homogeneous solutions, or `None` when inconsistent.
    pub fn solve(&self, rhs: &Vector) -> Option<(Vector, Vec<Vector>)> {
        debug_assert_eq!(rhs.dim(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, rhs[i].clone());
        }
        let (rref, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut particular = Vector::zeros(self.cols).into_entries();
        for (i, &p) in pivots.iter().enumerate() {
            particular[p] = rref.get(i, self.cols).clone();
        }
        let null = null_space_from_rref(&rref, &pivots, self.cols);
        Some((Vector::new(particular), null))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

fn null_space_from_rref(rref: &Matrix, pivots: &[usize], cols: usize) -> Vec<Vector> {
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = Vector::zeros(cols).into_entries();
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -rref.get(i, free).clone();
        }
        basis.push(Vector::new(v));
    }
    basis
}

/// Rank of a list of vectors of common dimension `dim`.
pub fn rank_of(vectors: &[Vector], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = Matrix::from_rows(vectors.to_vec()).expect("vectors of common dimension");
    debug_assert_eq!(m.cols(), dim);
    m.rank()
}

/// Greedily selects a maximal linearly independent subset, preserving order.
pub fn independent_subset(vectors: &[Vector]) -> Vec<Vector> {
    let mut chosen: Vec<Vector> = Vec::new();
    for v in vectors {
        if v.is_zero() {
            continue;
        }
        chosen.push(v.clone());
        if rank_of(&chosen, v.dim()) < chosen.len() {
            chosen.pop();
        }
    }
    chosen
}

/// Affine hull of a nonempty point set: a base point (the first input)
/// and a basis of the direction space, drawn from the differences
/// `p_i - p_0` in input order.
pub fn solve_affine(points: &[Vector]) -> (Vector, Vec<Vector>) {
    assert!(!points.is_empty(), "affine hull of an empty set");
    let base = points[0].clone();
    let diffs: Vec<Vector> = points[1..].iter().map(|p| p - &base).collect();
    (base, independent_subset(&diffs))
}

/// Dimension of the affine hull; `-1` would be the empty set, which callers
/// never pass.
pub fn affine_dim(points: &[Vector]) -> usize {
    solve_affine(points).1.len()
}

impl Matrix {
    /// Rows as `[a,b; c,d]` on a single line.
    pub fn inline(&self) -> String {
        let rows: Vec<String> = self.row_vectors().iter().map(|r| r.to_string()).collect();
        format!("[{}]", rows.join("; "))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}]", self.row(i))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_vectors().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vector>::deserialize(deserializer)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{frac, int};
    use proptest::prelude::*;

    fn rank1_example() -> Matrix {
        // T(x,y,z) = (x - z, 0, x - z)
        Matrix::from_int_rows(&[&[1, 0, -1], &[0, 0, 0], &[1, 0, -1]])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(3).rank(), 3);
        assert_eq!(rank1_example().rank(), 1);
        assert_eq!(Matrix::zeros(2, 2).rank(), 0);
        let m = Matrix::from_rows(vec![
            Vector::new(vec![frac(1, 2), frac(1, 3)]),
            Vector::new(vec![frac(3, 2), int(1)]),
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(3).kernel_basis().is_empty());

        let kernel = rank1_example().kernel_basis();
        assert_eq!(kernel.len(), 2);
        // hand oracle: x - z = 0, so the kernel is {(a, b, a)}
        for b in &kernel {
            assert_eq!(b[0], b[2]);
            assert!(rank1_example().mul_vec(b).is_zero());
        }
        assert_eq!(rank_of(&kernel, 3), 2);

        let kernel = Matrix::zeros(2, 2).kernel_basis();
        assert_eq!(kernel.len(), 2);
        assert_eq!(rank_of(&kernel, 2), 2);
    }

    #[test]
    fn affine_hull_examples() {
        let (base, dirs) = solve_affine(&[Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1])]);
        assert_eq!(base, Vector::from_ints(&[1, 0]));
        assert_eq!(dirs, vec![Vector::from_ints(&[-1, 1])]);

        let (base, dirs) = solve_affine(&[Vector::from_ints(&[2, 3])]);
        assert_eq!(base, Vector::from_ints(&[2, 3]));
        assert!(dirs.is_empty());

        let simplex: Vec<Vector> = (0..3).map(|i| Vector::unit(3, i)).collect();
        assert_eq!(solve_affine(&simplex).1.len(), 2);
    }

    #[test]
    fn solve_reports_inconsistency() {
        let m = Matrix::from_int_rows(&[&[1, 1], &[2, 2]]);
        assert!(m.solve(&Vector::from_ints(&[1, 3])).is_none());
        let (x, null) = m.solve(&Vector::from_ints(&[1, 2])).unwrap();
        assert_eq!(m.mul_vec(&x), Vector::from_ints(&[1, 2]));
        assert_eq!(null.len(), 1);
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-4i64..5, 1i64..4), r * c).prop_map(move |vals| {
                let rows = vals
                    .chunks(c)
                    .map(|ch| Vector::new(ch.iter().map(|&(n, d)| frac(n, d)).collect()))
                    .collect();
                Matrix::from_rows(rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let kernel = m.kernel_basis();
            prop_assert_eq!(m.rank() + kernel.len(), m.cols());
            for b in &kernel {
                prop_assert!(m.mul_vec(b).is_zero());
            }
            // Bareiss and RREF agree on the rank
            prop_assert_eq!(m.rank(), m.rref().1.len());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn affine_hull_of_independent_points(k in 0usize..4) {
            let dim = 4;
            let mut pts = vec![Vector::from_ints(&[1, 1, 1, 1])];
            for i in 0..k {
                pts.push(&pts[0] + &Vector::unit(dim, i).scale(&int(i as i64 + 2)));
            }
            let (base, dirs) = solve_affine(&pts);
            prop_assert_eq!(dirs.len(), k);
            // every input lies in base + span(dirs)
            let m = Matrix::from_columns(&dirs, dim);
            for p in &pts {
                let rhs = p - &base;
                if dirs.is_empty() {
                    prop_assert!(rhs.is_zero());
                } else {
                    prop_assert!(m.solve(&rhs).is_some());
                }
            }
        }
    }
}
