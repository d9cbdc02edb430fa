//! Linear operators between polyhedral spaces and exact certification of
//! parallel-pair and TEA-pair preservation.
//!
//! Pairs that are TEA in the domain are exactly the pairs lying in a common
//! facet cone. An operator therefore preserves TEA pairs iff, for every
//! facet `F`, the images of `F` share a supporting functional. Convexity of
//! the norm reduces this to the vertices of `F`: a functional `g` with
//! `g(Tv) = ‖Tv‖` at every vertex `v` also attains the norm at every image
//! of the facet cone.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{Matrix, Rational, Vector};
use crate::face::{self, Face};
use crate::pairs::{self, PairKind};
use crate::sampling::{self, SampleRng};
use crate::space::{PolyhedralSpace, SignedDual};

#[derive(Clone, Debug)]
pub struct Operator {
    matrix: Matrix,
    domain: Arc<PolyhedralSpace>,
    codomain: Arc<PolyhedralSpace>,
    rank: usize,
    kernel: Vec<Vector>,
}

impl Operator {
    pub fn new(
        domain: Arc<PolyhedralSpace>,
        codomain: Arc<PolyhedralSpace>,
        matrix: Matrix,
    ) -> Result<Self> {
        if matrix.cols() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: matrix.cols(),
            });
        }
        if matrix.rows() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                found: matrix.rows(),
            });
        }
        let rank = matrix.rank();
        let kernel = matrix.kernel_basis();
        Ok(Operator {
            matrix,
            domain,
            codomain,
            rank,
            kernel,
        })
    }

    /// An operator from a space to itself.
    pub fn on(space: Arc<PolyhedralSpace>, matrix: Matrix) -> Result<Self> {
        Operator::new(space.clone(), space, matrix)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn domain(&self) -> &PolyhedralSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &PolyhedralSpace {
        &self.codomain
    }

    pub fn domain_arc(&self) -> &Arc<PolyhedralSpace> {
        &self.domain
    }

    pub fn codomain_arc(&self) -> &Arc<PolyhedralSpace> {
        &self.codomain
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kernel(&self) -> &[Vector] {
        &self.kernel
    }

    pub fn is_bijective(&self) -> bool {
        self.matrix.is_square() && self.rank == self.domain.dim()
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        self.matrix.mul_vec(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FacetCertificate {
    /// `T` vanishes on the whole facet.
    ImageZero,
    /// A signed dual vertex of the codomain attaining the norm at every
    /// vertex image of the facet.
    Common(SignedDual),
    Missing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Certificates decided the verdict.
    FacetCertificates,
    /// `rank(T) <= 1`: all images are collinear, hence pairwise parallel.
    RankAtMostOne,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::FacetCertificates => "facet-certificates",
            Branch::RankAtMostOne => "rank<=1",
        })
    }
}

/// A pair related in the domain whose images are not related.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub x: Vector,
    pub y: Vector,
    pub tx: Vector,
    pub ty: Vector,
    pub before: bool,
    pub after: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    pub kind: PairKind,
    pub preserves: bool,
    pub branch: Branch,
    /// One entry per facet, keyed by the facet's functional. Empty for the
    /// rank-at-most-one branch, where no certificates are needed.
    pub facet_certificates: Vec<(SignedDual, FacetCertificate)>,
    pub counterexample: Option<Counterexample>,
}

impl PreservationReport {
    pub fn missing_facets(&self) -> impl Iterator<Item = SignedDual> + '_ {
        self.facet_certificates
            .iter()
            .filter(|(_, c)| *c == FacetCertificate::Missing)
            .map(|(f, _)| *f)
    }

    /// Re-checks the counterexample with the exact pair tests.
    pub fn counterexample_verifies(&self, op: &Operator) -> bool {
        let Some(c) = &self.counterexample else {
            return false;
        };
        let before = pairs::pair_direct(op.domain(), &c.x, &c.y, self.kind);
        let after = pairs::pair_direct(op.codomain(), &op.apply(&c.x), &op.apply(&c.y), self.kind);
        before == Ok(true) && after == Ok(false)
    }

    /// Writes the report in the line-based text format used by the CLI.
    pub fn render(&self, op: &Operator) -> String {
        let mut out = String::new();
        let dom = op.domain();
        let cod = op.codomain();
        out.push_str(&format!("kind: {}\n", self.kind));
        out.push_str(&format!("preserves: {}\n", self.preserves));
        out.push_str(&format!("branch: {}\n", self.branch));
        out.push_str(&format!("rank: {}\n", op.rank()));
        for (f, cert) in &self.facet_certificates {
            let line = match cert {
                FacetCertificate::ImageZero => "image-zero".to_string(),
                FacetCertificate::Common(g) => format!("common {} = ({})", g, cod.functional(*g)),
                FacetCertificate::Missing => "missing".to_string(),
            };
            out.push_str(&format!("facet {} ({}): {}\n", f, dom.functional(*f), line));
        }
        if let Some(c) = &self.counterexample {
            out.push_str("counterexample:\n");
            out.push_str(&format!("  x: {}\n", c.x));
            out.push_str(&format!("  y: {}\n", c.y));
            out.push_str(&format!("  Tx: {}\n", c.tx));
            out.push_str(&format!("  Ty: {}\n", c.ty));
            out.push_str(&format!("  {} before: {}\n", self.kind, c.before));
            out.push_str(&format!("  {} after: {}\n", self.kind, c.after));
        }
        out
    }
}

/// Signed codomain duals attaining the norm at every image; `None` when
/// every image vanishes.
fn common_support(op: &Operator, points: &[Vector]) -> Option<Vec<SignedDual>> {
    let cod = op.codomain();
    let mut common: Option<Vec<SignedDual>> = None;
    for p in points {
        let (_, support) = cod.support_unchecked(&op.apply(p));
        if support.is_empty() {
            continue;
        }
        common = Some(match common {
            None => support,
            Some(c) => c.into_iter().filter(|g| support.contains(g)).collect(),
        });
    }
    common
}

fn certificate(op: &Operator, face: &Face) -> FacetCertificate {
    match common_support(op, &face.vertex_set) {
        None => FacetCertificate::ImageZero,
        Some(c) if c.is_empty() => FacetCertificate::Missing,
        Some(c) => FacetCertificate::Common(c[0]),
    }
}

/// Whether `T` maps TEA pairs inside `face` to TEA pairs.
pub fn preserves_tea_on_face(op: &Operator, face: &Face) -> bool {
    certificate(op, face) != FacetCertificate::Missing
}

fn facet_certificates(op: &Operator) -> Vec<(SignedDual, FacetCertificate)> {
    op.domain()
        .facets()
        .into_iter()
        .map(|face| (face.active[0], certificate(op, face)))
        .collect()
}

fn make_counterexample(op: &Operator, x: Vector, y: Vector, kind: PairKind) -> Counterexample {
    let tx = op.apply(&x);
    let ty = op.apply(&y);
    let before = pairs::pair_direct(op.domain(), &x, &y, kind).expect("dimensions checked");
    let after = pairs::pair_direct(op.codomain(), &tx, &ty, kind).expect("dimensions checked");
    Counterexample {
        x,
        y,
        tx,
        ty,
        before,
        after,
    }
}

/// Points of a facet visited by the midpoint walk, ending at a pair with
/// non-TEA images whenever the facet has no certificate.
///
/// The walk keeps a point `w` whose image is supported exactly by the
/// common supports of the vertices absorbed so far; absorbing `v` by
/// `w ← (w + v)/2` intersects the supports, unless `Tw, Tv` are not TEA.
fn tea_walk(op: &Operator, face: &Face) -> (Vec<Vector>, Option<(Vector, Vector)>) {
    let cod = op.codomain();
    let mut visited = Vec::new();
    let mut live = face.vertex_set.iter().filter(|v| !op.apply(v).is_zero());
    let Some(first) = live.next() else {
        return (visited, None);
    };
    let mut w = first.clone();
    for v in live {
        if !pairs::tea_direct(cod, &op.apply(&w), &op.apply(v)) {
            return (visited, Some((w, v.clone())));
        }
        w = Vector::mean(&[w, v.clone()]);
        visited.push(w.clone());
    }
    (visited, None)
}

fn first_non_tea(op: &Operator, points: &[Vector]) -> Option<(Vector, Vector)> {
    let cod = op.codomain();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if !pairs::tea_direct(cod, &op.apply(a), &op.apply(b)) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

/// Tries relative-interior points first (`v + Σ w` over the facet vertices
/// `w`, one per vertex `v`, largest vertex first), then vertex pairs, then
/// the midpoint walk.
fn tea_counterexample(op: &Operator, face: &Face) -> Option<(Vector, Vector)> {
    let verts = &face.vertex_set;
    let total = verts
        .iter()
        .skip(1)
        .fold(verts[0].clone(), |acc, v| &acc + v);
    let leaning: Vec<Vector> = verts.iter().rev().map(|v| &total + v).collect();
    first_non_tea(op, &leaning)
        .or_else(|| first_non_tea(op, verts))
        .or_else(|| tea_walk(op, face).1)
}

/// Checks TEA-pair preservation facet by facet.
pub fn preserves_tea(op: &Operator) -> PreservationReport {
    let certs = facet_certificates(op);
    let preserves = certs.iter().all(|(_, c)| *c != FacetCertificate::Missing);
    let counterexample = certs
        .iter()
        .filter(|(_, c)| *c == FacetCertificate::Missing)
        .find_map(|(f, _)| tea_counterexample(op, op.domain().facet(*f)))
        .map(|(x, y)| make_counterexample(op, x, y, PairKind::Tea));
    PreservationReport {
        kind: PairKind::Tea,
        preserves,
        branch: Branch::FacetCertificates,
        facet_certificates: certs,
        counterexample,
    }
}

/// Checks parallel-pair preservation. Rank at most one always preserves;
/// for rank at least two, parallel and TEA preservation coincide.
pub fn preserves_parallel(op: &Operator) -> PreservationReport {
    if op.rank() <= 1 {
        return PreservationReport {
            kind: PairKind::Parallel,
            preserves: true,
            branch: Branch::RankAtMostOne,
            facet_certificates: Vec::new(),
            counterexample: None,
        };
    }
    let certs = facet_certificates(op);
    let preserves = certs.iter().all(|(_, c)| *c != FacetCertificate::Missing);
    let counterexample = if preserves {
        None
    } else {
        parallel_counterexample(op, &certs)
            .map(|(x, y)| make_counterexample(op, x, y, PairKind::Parallel))
    };
    PreservationReport {
        kind: PairKind::Parallel,
        preserves,
        branch: Branch::FacetCertificates,
        facet_certificates: certs,
        counterexample,
    }
}

pub fn preserves(op: &Operator, kind: PairKind) -> PreservationReport {
    match kind {
        PairKind::Tea => preserves_tea(op),
        PairKind::Parallel => preserves_parallel(op),
    }
}

/// Searches the uncertified facets whose images span at least two
/// dimensions for two facet points with non-parallel images.
///
/// Candidates: the facet vertices, midpoint-walk points, barycenters of the
/// facet's sub-faces and seeded interior points; then points along segments
/// between candidates whose images are anti-parallel, at the breakpoints of
/// the image norm and between them.
fn parallel_counterexample(
    op: &Operator,
    certs: &[(SignedDual, FacetCertificate)],
) -> Option<(Vector, Vector)> {
    let dom = op.domain();
    let cod = op.codomain();
    let not_parallel =
        |a: &Vector, b: &Vector| !pairs::parallel_supports(cod, &op.apply(a), &op.apply(b));
    let mut rng = sampling::rng(0x5eed);

    for (f, _) in certs
        .iter()
        .filter(|(_, c)| *c == FacetCertificate::Missing)
    {
        let facet = dom.facet(*f);
        let images: Vec<Vector> = facet.vertex_set.iter().map(|v| op.apply(v)).collect();
        if crate::exact::rank_of(&images, cod.dim()) < 2 {
            continue;
        }
        let mut pool: Vec<Vector> = facet.vertex_set.clone();
        let (walk, stop) = tea_walk(op, facet);
        pool.extend(walk);
        if let Some((a, b)) = stop {
            pool.push(a);
            pool.push(b);
        }
        for sub in dom.all_faces() {
            if sub.active.contains(f) {
                pool.push(sub.barycenter());
            }
        }
        for _ in 0..16 {
            pool.push(sampling::interior_point(&mut rng, &facet.vertex_set));
        }
        pool.sort();
        pool.dedup();

        for (i, a) in pool.iter().enumerate() {
            for b in &pool[i + 1..] {
                if not_parallel(a, b) {
                    return Some((a.clone(), b.clone()));
                }
            }
        }

        for (i, a) in pool.iter().enumerate() {
            for b in &pool[i + 1..] {
                let (ta, tb) = (op.apply(a), op.apply(b));
                if ta.is_zero() || tb.is_zero() || pairs::tea_direct(cod, &ta, &tb) {
                    continue;
                }
                for t in segment_parameters(cod, &ta, &tb) {
                    let w = &a.scale(&(Rational::one() - &t)) + &b.scale(&t);
                    for c in &pool {
                        if not_parallel(&w, c) {
                            return Some((w, c.clone()));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Breakpoints in `(0, 1)` of `t ↦ ‖(1-t)a + tb‖`, together with the
/// midpoints between consecutive breakpoints (and the ends).
fn segment_parameters(space: &PolyhedralSpace, a: &Vector, b: &Vector) -> Vec<Rational> {
    let lines: Vec<(Rational, Rational)> = space
        .signed_duals()
        .map(|f| {
            let fa = space.apply(f, a);
            let fb = space.apply(f, b);
            let slope = &fb - &fa;
            (fa, slope)
        })
        .collect();
    let zero = Rational::zero();
    let one = Rational::one();
    let mut ts = vec![zero.clone(), one.clone()];
    for (i, (a1, s1)) in lines.iter().enumerate() {
        for (a2, s2) in &lines[i + 1..] {
            if s1 != s2 {
                let t = (a2 - a1) / (s1 - s2);
                if t > zero && t < one {
                    ts.push(t);
                }
            }
        }
    }
    ts.sort();
    ts.dedup();
    let mut out: Vec<Rational> = ts
        .windows(2)
        .map(|w| (&w[0] + &w[1]) / Rational::from_integer(2.into()))
        .collect();
    out.extend(ts.into_iter().filter(|t| *t > zero && *t < one));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelViolation {
    pub active: Vec<SignedDual>,
    pub face_dim: usize,
    pub point: Vector,
}

/// For every face of dimension at least one on which `T` preserves TEA
/// pairs and does not vanish, verifies that no kernel vector lies in the
/// relative interior. Returns the faces where that fails.
pub fn kernel_face_check(op: &Operator) -> Vec<KernelViolation> {
    let dom = op.domain();
    let mut out = Vec::new();
    if op.kernel().is_empty() {
        return out;
    }
    for f in dom.all_faces().iter().filter(|f| f.dim >= 1) {
        if certificate(op, f) == FacetCertificate::Missing {
            continue;
        }
        if f.vertex_set.iter().all(|v| op.apply(v).is_zero()) {
            continue;
        }
        if let Ok(Some(point)) = face::relative_interior_kernel_point(dom, f, op.matrix()) {
            out.push(KernelViolation {
                active: f.active.clone(),
                face_dim: f.dim,
                point,
            });
        }
    }
    out
}

/// For a bijective parallel preserver, the map `f ↦ g` with
/// `T(Sm(f)) ⊂ Sm(g)`, read off at facet barycenters and confirmed at
/// `samples` seeded interior points per facet.
pub fn facet_image_map(
    op: &Operator,
    samples: usize,
    seed: u64,
) -> Result<BTreeMap<SignedDual, SignedDual>> {
    if !op.is_bijective() {
        return Err(Error::NotBijective);
    }
    if !preserves_parallel(op).preserves {
        return Err(Error::NotPreserver);
    }
    let cod = op.codomain();
    let mut rng = sampling::rng(seed);
    let mut map = BTreeMap::new();
    for facet in op.domain().facets() {
        let f = facet.active[0];
        let smooth_image = |u: &Vector| -> Result<SignedDual> {
            match cod.support_unchecked(&op.apply(u)).1.as_slice() {
                [g] => Ok(*g),
                _ => Err(Error::MappingAmbiguous(f.index())),
            }
        };
        let g = smooth_image(&facet.barycenter())?;
        for _ in 0..samples {
            let u = sampling::interior_point(&mut rng, &facet.vertex_set);
            if smooth_image(&u)? != g {
                return Err(Error::MappingAmbiguous(f.index()));
            }
        }
        map.insert(f, g);
    }
    Ok(map)
}

fn require_bijective_preserver(op: &Operator) -> Result<()> {
    if !op.is_bijective() {
        return Err(Error::PreconditionFailed(
            "operator is not bijective".to_string(),
        ));
    }
    if !preserves_parallel(op).preserves {
        return Err(Error::PreconditionFailed(
            "operator does not preserve parallel pairs".to_string(),
        ));
    }
    Ok(())
}

/// `|Ext J(x)| = |Ext J(Tx)|` at every primal vertex, every facet
/// barycenter and `samples` seeded random points.
pub fn support_count_law(op: &Operator, samples: usize, seed: u64) -> Result<bool> {
    require_bijective_preserver(op)?;
    let dom = op.domain();
    let cod = op.codomain();
    if dom.signed_count() != cod.signed_count() {
        return Err(Error::PreconditionFailed(
            "domain and codomain have different numbers of dual vertices".to_string(),
        ));
    }
    let mut rng = sampling::rng(seed);
    let mut points: Vec<Vector> = dom.primal_vertices().to_vec();
    points.extend(dom.facets().iter().map(|f| f.barycenter()));
    points.extend((0..samples).map(|_| sampling::structured_vector(&mut rng, dom.dim())));
    Ok(points
        .iter()
        .all(|x| dom.support_unchecked(x).1.len() == cod.support_unchecked(&op.apply(x)).1.len()))
}

/// For a TEA preserver of rank `p`, no relative-interior point of an
/// `(n - k)`-face with `1 <= k < p` lies in the kernel.
pub fn rank_smooth_kernel_check(op: &Operator) -> Result<bool> {
    if !preserves_tea(op).preserves {
        return Err(Error::PreconditionFailed(
            "operator does not preserve TEA pairs".to_string(),
        ));
    }
    let dom = op.domain();
    let n = dom.dim();
    if op.kernel().is_empty() {
        return Ok(true);
    }
    for k in 1..op.rank() {
        for f in dom.faces(n - k) {
            if face::relative_interior_kernel_point(dom, f, op.matrix())?.is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `max ‖Tv‖` over the primal vertices of the domain.
pub fn operator_norm(op: &Operator) -> Rational {
    op.domain()
        .primal_vertices()
        .iter()
        .map(|v| op.codomain().norm_unchecked(&op.apply(v)))
        .max()
        .unwrap_or_else(Rational::zero)
}

/// `T` maps the unit ball onto the unit ball: nonsingular and the vertex
/// images are exactly the codomain's vertices.
pub fn is_isometry(op: &Operator) -> Result<bool> {
    if op.domain().dim() != op.codomain().dim() {
        return Err(Error::DimensionMismatch {
            expected: op.domain().dim(),
            found: op.codomain().dim(),
        });
    }
    if !op.is_bijective() {
        return Ok(false);
    }
    let mut images: Vec<Vector> = op
        .domain()
        .primal_vertices()
        .iter()
        .map(|v| op.apply(v))
        .collect();
    images.sort();
    Ok(images == op.codomain().primal_vertices())
}

/// Whether every vertex of the unit ball has strictly more supporting
/// functionals than any relative-interior point of a face of positive
/// dimension.
pub fn vertex_support_dominance(space: &PolyhedralSpace) -> bool {
    let min_vertex = space
        .primal_vertices()
        .iter()
        .map(|v| space.support_unchecked(v).1.len())
        .min()
        .unwrap_or(0);
    let max_face = space
        .all_faces()
        .iter()
        .filter(|f| f.dim >= 1)
        .map(|f| f.active.len())
        .max()
        .unwrap_or(0);
    min_vertex > max_face
}

/// For a norm-one operator on a space with vertex support dominance:
/// `T` is an isometry iff it is bijective, preserves parallel pairs, and
/// maps all primal vertices to vectors of equal norm.
pub fn isometry_characterization_check(op: &Operator) -> Result<bool> {
    if !vertex_support_dominance(op.domain()) {
        return Err(Error::PreconditionFailed(
            "domain lacks vertex support dominance".to_string(),
        ));
    }
    if !operator_norm(op).is_one() {
        return Err(Error::PreconditionFailed(
            "operator norm is not 1".to_string(),
        ));
    }
    let lhs = is_isometry(op)?;
    let cod = op.codomain();
    let norms: Vec<Rational> = op
        .domain()
        .primal_vertices()
        .iter()
        .map(|v| cod.norm_unchecked(&op.apply(v)))
        .collect();
    let equal = norms.windows(2).all(|w| w[0] == w[1]);
    let rhs = op.is_bijective() && equal && preserves_parallel(op).preserves;
    Ok(lhs == rhs)
}

/// A bijective parallel preserver cannot increase the number of dual
/// vertices: returns `|Ext B_X*| >= |Ext B_Y*|`.
pub fn count_law_check(op: &Operator) -> Result<bool> {
    require_bijective_preserver(op)?;
    Ok(op.domain().signed_count() >= op.codomain().signed_count())
}

/// Sampled check that `x ⊥ε y` implies `Tx ⊥ε Ty`, over primal vertex
/// directions and `samples` seeded random points for both arguments. A
/// vanishing `Tx` satisfies the inequality trivially. Not exhaustive.
pub fn preserves_eps_orthogonality_sampled(
    op: &Operator,
    eps: &Rational,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let dom = op.domain();
    let cod = op.codomain();
    let mut rng: SampleRng = sampling::rng(seed);
    let mut points: Vec<Vector> = dom.primal_vertices().to_vec();
    points.extend((0..samples).map(|_| sampling::structured_vector(&mut rng, dom.dim())));
    for x in &points {
        let tx = op.apply(x);
        if tx.is_zero() {
            continue;
        }
        for y in &points {
            if pairs::is_eps_orthogonal(dom, x, y, eps)?
                && !pairs::is_eps_orthogonal(cod, &tx, &op.apply(y), eps)?
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
