//! Finite-dimensional polyhedral normed spaces given by the vertices of
//! their dual unit ball.
//!
//! A space stores one representative `g` per antipodal pair `±g` of dual
//! vertices. Signs are attached at query time through [`SignedDual`].

use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use crate::dd;
use crate::error::{Error, Result};
use crate::exact::{affine_dim, rank_of, Rational, Vector};
use crate::face::{self, Face};

pub const MAX_DIM: usize = 6;
pub const MAX_DUAL_VERTICES: usize = 64;

/// A signed dual vertex: representative `index / 2`, negated when the
/// index is odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedDual(usize);

impl SignedDual {
    pub fn new(rep: usize, negated: bool) -> Self {
        SignedDual(2 * rep + negated as usize)
    }

    pub fn from_index(index: usize) -> Self {
        SignedDual(index)
    }

    pub fn index(self) -> usize {
        self.0
    }

    pub fn rep(self) -> usize {
        self.0 / 2
    }

    pub fn is_negated(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn negate(self) -> Self {
        SignedDual(self.0 ^ 1)
    }
}

impl fmt::Display for SignedDual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.is_negated() { '-' } else { '+' };
        write!(f, "{sign}g{}", self.rep())
    }
}

/// `Ext J(x)`: the signed dual vertices attaining the norm at `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    pub point: Vector,
    pub functionals: Vec<SignedDual>,
}

impl SupportSet {
    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    pub fn contains(&self, f: SignedDual) -> bool {
        self.functionals.binary_search(&f).is_ok()
    }

    pub fn intersects(&self, other: &SupportSet) -> Option<SignedDual> {
        self.functionals
            .iter()
            .copied()
            .find(|f| other.contains(*f))
    }
}

#[derive(Debug)]
pub struct PolyhedralSpace {
    name: String,
    dim: usize,
    duals: Vec<Vector>,
    primal: Vec<Vector>,
    faces: OnceLock<Vec<Face>>,
}

impl Clone for PolyhedralSpace {
    fn clone(&self) -> Self {
        PolyhedralSpace {
            name: self.name.clone(),
            dim: self.dim,
            duals: self.duals.clone(),
            primal: self.primal.clone(),
            faces: self.faces.clone(),
        }
    }
}

impl PartialEq for PolyhedralSpace {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.duals == other.duals
    }
}

impl PolyhedralSpace {
    /// Builds a space from dual-ball vertices, deriving the primal vertices
    /// by exact double description.
    pub fn build(name: impl Into<String>, dim: usize, duals: Vec<Vector>) -> Result<Self> {
        Self::build_checked(name, dim, duals, None)
    }

    /// As [`build`](Self::build), additionally requiring the derived primal
    /// vertices to equal `expected_primal` as a set.
    pub fn build_checked(
        name: impl Into<String>,
        dim: usize,
        duals: Vec<Vector>,
        expected_primal: Option<Vec<Vector>>,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::PreconditionFailed(format!(
                "space dimension must be at least 2, got {dim}"
            )));
        }
        if dim > MAX_DIM {
            return Err(Error::CapacityExceeded(format!(
                "dimension {dim} exceeds {MAX_DIM}"
            )));
        }
        if duals.is_empty() {
            return Err(Error::DegenerateNorm);
        }
        let mut reps: Vec<Vector> = Vec::with_capacity(duals.len());
        for g in duals {
            g.check_dim(dim)?;
            if g.is_zero() {
                return Err(Error::RedundantFunctional(g));
            }
            let neg = -&g;
            if !reps.iter().any(|r| *r == g || *r == neg) {
                reps.push(g);
            }
        }
        if reps.len() > MAX_DUAL_VERTICES {
            return Err(Error::CapacityExceeded(format!(
                "{} dual vertices exceed {MAX_DUAL_VERTICES}",
                reps.len()
            )));
        }
        if rank_of(&reps, dim) < dim {
            return Err(Error::DegenerateNorm);
        }

        let primal = dd::unit_ball_vertices(&reps, dim)?;
        for g in &reps {
            let tight: Vec<Vector> = primal
                .iter()
                .filter(|v| g.dot(v) == Rational::from_integer(1.into()))
                .cloned()
                .collect();
            if tight.is_empty() || affine_dim(&tight) + 1 < dim {
                return Err(Error::RedundantFunctional(g.clone()));
            }
        }
        if let Some(mut expected) = expected_primal {
            expected.sort();
            expected.dedup();
            if expected != primal {
                return Err(Error::PrimalMismatch);
            }
        }
        Ok(PolyhedralSpace {
            name: name.into(),
            dim,
            duals: reps,
            primal,
            faces: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// One representative per antipodal pair of dual vertices.
    pub fn dual_vertices(&self) -> &[Vector] {
        &self.duals
    }

    /// `Ext B_X`, sorted lexicographically.
    pub fn primal_vertices(&self) -> &[Vector] {
        &self.primal
    }

    /// Number of signed dual vertices, `|Ext B_{X*}|`.
    pub fn signed_count(&self) -> usize {
        2 * self.duals.len()
    }

    pub fn signed_duals(&self) -> impl Iterator<Item = SignedDual> {
        (0..self.signed_count()).map(SignedDual::from_index)
    }

    pub fn functional(&self, f: SignedDual) -> Vector {
        let g = &self.duals[f.rep()];
        if f.is_negated() {
            -g
        } else {
            g.clone()
        }
    }

    /// `f(x)` for a signed dual vertex.
    pub fn apply(&self, f: SignedDual, x: &Vector) -> Rational {
        let v = self.duals[f.rep()].dot(x);
        if f.is_negated() {
            -v
        } else {
            v
        }
    }

    /// Locates a functional given by coordinates among the signed duals.
    pub fn find_functional(&self, g: &Vector) -> Option<SignedDual> {
        self.duals.iter().enumerate().find_map(|(i, d)| {
            if d == g {
                Some(SignedDual::new(i, false))
            } else if *d == -g {
                Some(SignedDual::new(i, true))
            } else {
                None
            }
        })
    }

    pub(crate) fn norm_unchecked(&self, x: &Vector) -> Rational {
        self.duals
            .iter()
            .map(|g| g.dot(x).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn norm(&self, x: &Vector) -> Result<Rational> {
        x.check_dim(self.dim)?;
        Ok(self.norm_unchecked(x))
    }

    /// The signed dual vertices attaining the norm at `x`, in index order.
    /// For `x = 0` the list is empty.
    pub(crate) fn support_unchecked(&self, x: &Vector) -> (Rational, Vec<SignedDual>) {
        let values: Vec<Rational> = self.duals.iter().map(|g| g.dot(x)).collect();
        let norm = values
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero);
        if norm.is_zero() {
            return (norm, Vec::new());
        }
        let mut functionals = Vec::new();
        for (i, v) in values.iter().enumerate() {
            if *v == norm {
                functionals.push(SignedDual::new(i, false));
            } else if -v == norm {
                functionals.push(SignedDual::new(i, true));
            }
        }
        (norm, functionals)
    }

    pub fn support_set(&self, x: &Vector) -> Result<SupportSet> {
        x.check_dim(self.dim)?;
        let (_, functionals) = self.support_unchecked(x);
        if functionals.is_empty() {
            return Err(Error::ZeroVector);
        }
        Ok(SupportSet {
            point: x.clone(),
            functionals,
        })
    }

    /// `dim span J(x)`; equals 1 exactly at smooth points.
    pub fn smoothness_order(&self, x: &Vector) -> Result<usize> {
        let support = self.support_set(x)?;
        let rows: Vec<Vector> = support
            .functionals
            .iter()
            .map(|&f| self.functional(f))
            .collect();
        Ok(rank_of(&rows, self.dim))
    }

    /// Membership in the smooth cone `Sm(f) = {x : J(x) = {f}}`.
    pub fn in_smooth_cone(&self, f: SignedDual, x: &Vector) -> Result<bool> {
        if f.index() >= self.signed_count() {
            return Err(Error::UnknownFunctional);
        }
        x.check_dim(self.dim)?;
        let (_, support) = self.support_unchecked(x);
        Ok(support == [f])
    }

    /// All faces of the unit ball, computed once and cached.
    pub fn all_faces(&self) -> &[Face] {
        self.faces.get_or_init(|| face::enumerate_faces(self))
    }

    /// The `k`-dimensional faces, ordered by their active functional sets.
    pub fn faces(&self, k: usize) -> Vec<&Face> {
        self.all_faces().iter().filter(|f| f.dim == k).collect()
    }

    /// The facet `{x in B_X : f(x) = 1}`.
    pub fn facet(&self, f: SignedDual) -> &Face {
        self.all_faces()
            .iter()
            .find(|face| face.dim + 1 == self.dim && face.active == [f])
            .expect("every signed dual vertex defines a facet")
    }

    pub fn facets(&self) -> Vec<&Face> {
        self.faces(self.dim - 1)
    }

    /// Rebuilds the space with the roles of primal and dual vertices
    /// swapped (the polar body).
    pub fn polar(&self) -> Result<PolyhedralSpace> {
        PolyhedralSpace::build(
            format!("polar({})", self.name),
            self.dim,
            self.primal.clone(),
        )
    }
}

impl fmt::Display for PolyhedralSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "space {} (dim {})", self.name, self.dim)?;
        for (i, g) in self.duals.iter().enumerate() {
            writeln!(f, "  dual g{i}: {g}")?;
        }
        for v in &self.primal {
            writeln!(f, "  vertex: {v}")?;
        }
        Ok(())
    }
}
