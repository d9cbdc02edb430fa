//! Seeded random rationals, vectors, points of faces, and operators.
//!
//! Everything is driven by `ChaCha8Rng`, so a seed fully determines the
//! output on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{frac, int, Matrix, Rational, Vector};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for worker or sub-task `index`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r.gen()
}

/// Numerator in `[-9, 9]`, denominator in `[1, 9]`.
pub fn rational(rng: &mut SampleRng) -> Rational {
    frac(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

/// A nonzero vector with entries from [`rational`].
pub fn vector(rng: &mut SampleRng, dim: usize) -> Vector {
    loop {
        let v = Vector::new((0..dim).map(|_| rational(rng)).collect());
        if !v.is_zero() {
            return v;
        }
    }
}

/// A vector from [`vector`] or, one time in four, a point with several
/// equal-magnitude or zero coordinates, which lands on lower-dimensional
/// faces far more often than uniform sampling does.
pub fn structured_vector(rng: &mut SampleRng, dim: usize) -> Vector {
    if rng.gen_range(0..4) != 0 {
        return vector(rng, dim);
    }
    loop {
        let v = Vector::new((0..dim).map(|_| int(rng.gen_range(-2..=2))).collect());
        if !v.is_zero() {
            return v;
        }
    }
}

/// A convex combination of `points` with positive integer weights in
/// `[1, 9]`. For the vertex set of a face the result lies in its relative
/// interior.
pub fn interior_point(rng: &mut SampleRng, points: &[Vector]) -> Vector {
    let weights: Vec<i64> = points.iter().map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    let dim = points[0].dim();
    points
        .iter()
        .zip(&weights)
        .fold(Vector::zeros(dim), |acc, (p, &w)| {
            &acc + &p.scale(&frac(w, total))
        })
}

/// A convex combination with weights in `[0, 9]`, not all zero; may land
/// on the relative boundary.
pub fn face_point(rng: &mut SampleRng, points: &[Vector]) -> Vector {
    loop {
        let weights: Vec<i64> = points.iter().map(|_| rng.gen_range(0..=9)).collect();
        let total: i64 = weights.iter().sum();
        if total == 0 {
            continue;
        }
        let dim = points[0].dim();
        return points
            .iter()
            .zip(&weights)
            .fold(Vector::zeros(dim), |acc, (p, &w)| {
                &acc + &p.scale(&frac(w, total))
            });
    }
}

/// Entries `p/q` with `q` in `[1, 3]` and `p/q` in `[-3, 3]`.
pub fn matrix(rng: &mut SampleRng, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let q = rng.gen_range(1..=3);
            m.set(i, j, frac(rng.gen_range(-3 * q..=3 * q), q));
        }
    }
    m
}

/// Entries in `{-1, 0, 1}`, zero with probability one half.
pub fn sparse_matrix(rng: &mut SampleRng, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let e = match rng.gen_range(0..4) {
                0 => -1,
                1 => 1,
                _ => 0,
            };
            m.set(i, j, int(e));
        }
    }
    m
}

/// A product of random `rows × r` and `r × cols` factors, so rank at most `r`.
pub fn low_rank_matrix(rng: &mut SampleRng, rows: usize, cols: usize, r: usize) -> Matrix {
    let a = sparse_matrix(rng, rows, r);
    let b = matrix(rng, r, cols);
    a.mul(&b).expect("inner dimensions agree")
}

pub fn signed_permutation(rng: &mut SampleRng, n: usize) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let signs: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    signed_permutation_matrix(&perm, &signs)
}

fn signed_permutation_matrix(perm: &[usize], negate: &[bool]) -> Matrix {
    let n = perm.len();
    let mut m = Matrix::zeros(n, n);
    for (col, &row) in perm.iter().enumerate() {
        m.set(row, col, if negate[col] { int(-1) } else { int(1) });
    }
    m
}

/// All `2ⁿ n!` signed permutation matrices, in a fixed order.
pub fn all_signed_permutations(n: usize) -> Vec<Matrix> {
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..n)
                    .filter(|i| !p.contains(i))
                    .map(|i| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let mut out = Vec::with_capacity(perms.len() << n);
    for p in &perms {
        for mask in 0..1usize << n {
            let negate: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            out.push(signed_permutation_matrix(p, &negate));
        }
    }
    out
}

/// A random nonsingular square matrix (rejection sampling).
pub fn bijective_matrix(rng: &mut SampleRng, n: usize) -> Matrix {
    loop {
        let m = if rng.gen_range(0..3) == 0 {
            sparse_matrix(rng, n, n)
        } else {
            matrix(rng, n, n)
        };
        if m.rank() == n {
            return m;
        }
    }
}

/// A positive diagonal matrix with entries in `{1, 2, 1/2, 3}`.
pub fn positive_diagonal(rng: &mut SampleRng, n: usize) -> Matrix {
    let choices = [int(1), int(2), frac(1, 2), int(3)];
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, choices[rng.gen_range(0..choices.len())].clone());
    }
    m
}

/// A mixed operator corpus: signed permutations (when square), dense and
/// sparse random matrices, low-rank products and positive diagonals.
pub fn operator_corpus(rng: &mut SampleRng, rows: usize, cols: usize, count: usize) -> Vec<Matrix> {
    (0..count)
        .map(|i| match i % 6 {
            0 if rows == cols => signed_permutation(rng, rows),
            1 => sparse_matrix(rng, rows, cols),
            2 => {
                let r = rng.gen_range(1..=rows.min(cols));
                low_rank_matrix(rng, rows, cols, r)
            }
            3 if rows == cols => positive_diagonal(rng, rows),
            _ => matrix(rng, rows, cols),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a: Vec<Vector> = {
            let mut r = rng(7);
            (0..5).map(|_| vector(&mut r, 3)).collect()
        };
        let b: Vec<Vector> = {
            let mut r = rng(7);
            (0..5).map(|_| vector(&mut r, 3)).collect()
        };
        assert_eq!(a, b);
        assert_ne!(derive_seed(7, 0), derive_seed(7, 1));
    }

    #[test]
    fn ranges() {
        let mut r = rng(1);
        for _ in 0..200 {
            let q = rational(&mut r);
            assert!(q.numer().magnitude() <= &9u32.into());
            assert!(q.denom() <= &9.into());
            let m = matrix(&mut r, 2, 2);
            assert!(m.row_vectors().iter().all(|v| v.max_abs() <= int(3)));
        }
    }

    #[test]
    fn signed_permutations() {
        let all = all_signed_permutations(3);
        assert_eq!(all.len(), 48);
        for m in &all {
            assert_eq!(m.rank(), 3);
        }
        let mut dedup = all.clone();
        dedup.sort_by_key(|m| m.to_string());
        dedup.dedup();
        assert_eq!(dedup.len(), 48);
    }

    #[test]
    fn interior_points_are_strict_combinations() {
        let mut r = rng(3);
        let pts = vec![Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1])];
        for _ in 0..20 {
            let p = interior_point(&mut r, &pts);
            assert!(p[0] > int(0) && p[1] > int(0));
            assert_eq!(&p[0] + &p[1], int(1));
        }
    }
}
