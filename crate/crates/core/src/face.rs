//! Faces of a polyhedral unit ball, relative interiors, and the
//! decomposition of a relative-interior point into `k + 1` linearly
//! independent face points with that point as their average.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Signed};

use crate::dd;
use crate::error::{Error, Result};
use crate::exact::{affine_dim, rank_of, solve_affine, Matrix, Rational, Vector};
use crate::space::{PolyhedralSpace, SignedDual};

/// A nonempty proper face of `B_X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Indices into the space's primal vertex list.
    pub vertices: Vec<usize>,
    pub vertex_set: Vec<Vector>,
    /// Every signed dual vertex equal to 1 on the whole face.
    pub active: Vec<SignedDual>,
    pub dim: usize,
}

impl Face {
    pub fn is_facet(&self, space: &PolyhedralSpace) -> bool {
        self.dim + 1 == space.dim()
    }

    pub fn barycenter(&self) -> Vector {
        Vector::mean(&self.vertex_set)
    }
}

pub(crate) fn enumerate_faces(space: &PolyhedralSpace) -> Vec<Face> {
    let one = Rational::one();
    let primal = space.primal_vertices();
    let tight: Vec<(SignedDual, BTreeSet<usize>)> = space
        .signed_duals()
        .map(|f| {
            let set = (0..primal.len())
                .filter(|&i| space.apply(f, &primal[i]) == one)
                .collect();
            (f, set)
        })
        .collect();

    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: VecDeque<BTreeSet<usize>> = VecDeque::new();
    for (_, set) in &tight {
        if seen.insert(set.iter().copied().collect()) {
            queue.push_back(set.clone());
        }
    }
    while let Some(face) = queue.pop_front() {
        for (_, facet) in &tight {
            let meet: BTreeSet<usize> = face.intersection(facet).copied().collect();
            if meet.is_empty() || meet.len() == face.len() {
                continue;
            }
            if seen.insert(meet.iter().copied().collect()) {
                queue.push_back(meet);
            }
        }
    }

    let mut faces: Vec<Face> = seen
        .into_iter()
        .map(|vertices| {
            let active = tight
                .iter()
                .filter(|(_, set)| vertices.iter().all(|v| set.contains(v)))
                .map(|(f, _)| *f)
                .collect();
            let vertex_set: Vec<Vector> = vertices.iter().map(|&i| primal[i].clone()).collect();
            let dim = affine_dim(&vertex_set);
            Face {
                vertices,
                vertex_set,
                active,
                dim,
            }
        })
        .collect();
    faces.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.active.cmp(&b.active)));
    faces
}

/// The face whose relative interior contains `x / ‖x‖`.
pub fn minimal_face(space: &PolyhedralSpace, x: &Vector) -> Result<Face> {
    let support = space.support_set(x)?;
    space
        .all_faces()
        .iter()
        .find(|f| f.active == support.functionals)
        .cloned()
        .ok_or_else(|| {
            Error::PreconditionFailed("support set does not close to a face".to_string())
        })
}

pub fn in_relative_interior(space: &PolyhedralSpace, face: &Face, x: &Vector) -> bool {
    if x.dim() != space.dim() {
        return false;
    }
    let (norm, support) = space.support_unchecked(x);
    norm.is_one() && support == face.active
}

/// Splits a relative-interior point of a `k`-face (`k >= 1`) into `k + 1`
/// linearly independent points of the face whose average is `x`.
///
/// Directions of the face's affine hull are normalized and scaled by
/// `1/k`, a balancing direction is added, and the step length is the
/// largest one keeping every point inside the face, halved.
pub fn decompose_interior_point(
    space: &PolyhedralSpace,
    face: &Face,
    x: &Vector,
) -> Result<Vec<Vector>> {
    if !in_relative_interior(space, face, x) {
        return Err(Error::NotInteriorPoint);
    }
    if face.dim == 0 {
        return Err(Error::PreconditionFailed(
            "decomposition needs a face of dimension at least 1".to_string(),
        ));
    }
    let (_, dirs) = solve_affine(&face.vertex_set);
    let k = Rational::from_integer((dirs.len() as i64).into());
    let mut steps: Vec<Vector> = dirs
        .iter()
        .map(|d| d.scale(&(space.norm_unchecked(d) * &k).recip()))
        .collect();
    let balance = steps
        .iter()
        .fold(Vector::zeros(space.dim()), |acc, s| &acc - s);
    steps.insert(0, balance);

    let mut limit: Option<Rational> = None;
    for f in space.signed_duals() {
        let slack = Rational::one() - space.apply(f, x);
        for step in &steps {
            let rate = space.apply(f, step);
            if rate.is_positive() {
                let ratio = &slack / &rate;
                if limit.as_ref().is_none_or(|l| ratio < *l) {
                    limit = Some(ratio);
                }
            }
        }
    }
    let scale =
        limit.expect("a bounded face limits every direction") / Rational::from_integer(2.into());
    Ok(steps.iter().map(|s| x + &s.scale(&scale)).collect())
}

/// Checks the three decomposition postconditions: membership, linear
/// independence and exact averaging.
pub fn validate_decomposition(
    space: &PolyhedralSpace,
    face: &Face,
    x: &Vector,
    points: &[Vector],
) -> bool {
    let one = Rational::one();
    let in_face = points.iter().all(|p| {
        space.norm_unchecked(p) == one && face.active.iter().all(|&f| space.apply(f, p) == one)
    });
    in_face
        && points.len() == face.dim + 1
        && rank_of(points, space.dim()) == points.len()
        && Vector::mean(points) == *x
}

/// Finds a point of `Int_r F` annihilated by `matrix`, if one exists.
///
/// The solution set of `matrix * y = 0` within `aff F` is an affine
/// subspace `L`. `L` meets `Int_r F` exactly when the barycenter of the
/// vertices of the polytope `L ∩ F` lies in `Int_r F`.
pub fn relative_interior_kernel_point(
    space: &PolyhedralSpace,
    face: &Face,
    matrix: &Matrix,
) -> Result<Option<Vector>> {
    if matrix.cols() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: matrix.cols(),
        });
    }
    let (base, dirs) = solve_affine(&face.vertex_set);
    let t_base = matrix.mul_vec(&base);
    if dirs.is_empty() {
        return Ok(t_base.is_zero().then_some(base));
    }
    let d = Matrix::from_columns(&dirs, space.dim());
    let td = matrix.mul(&d)?;
    let Some((b0, null)) = td.solve(&-&t_base) else {
        return Ok(None);
    };
    let anchor = &base + &d.mul_vec(&b0);
    if null.is_empty() {
        return Ok(in_relative_interior(space, face, &anchor).then_some(anchor));
    }
    let null_dirs: Vec<Vector> = null.iter().map(|k| d.mul_vec(k)).collect();
    let m = Matrix::from_columns(&null_dirs, space.dim());
    let mut normals = Vec::new();
    let mut bounds = Vec::new();
    for f in space.signed_duals() {
        let g = space.functional(f);
        normals.push(m.transpose().mul_vec(&g));
        bounds.push(Rational::one() - g.dot(&anchor));
    }
    let params = dd::polytope_vertices(&normals, &bounds, null_dirs.len())?;
    if params.is_empty() {
        return Ok(None);
    }
    let center = Vector::mean(&params);
    let point = &anchor + &m.mul_vec(&center);
    Ok(in_relative_interior(space, face, &point).then_some(point))
}
