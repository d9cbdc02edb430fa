//! ℓ₁- and ℓ∞-direct sums of polyhedral spaces, the pair rules relating
//! pairs in a sum to pairs in its factors, and a floating-point pair test
//! for general `1 < p < ∞`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{to_f64, Rational, Vector};
use crate::pairs::{self, PairKind, PairVerdict};
use crate::space::{PolyhedralSpace, SignedDual};

/// `ℓ₁`-sum: `‖(x, y)‖ = ‖x‖ + ‖y‖`. Dual vertices are the concatenations
/// `(f, g)`; representatives take `f` from the listed duals of `X` and `g`
/// over all signed duals of `Y`.
pub fn sum_l1(x: &PolyhedralSpace, y: &PolyhedralSpace) -> Result<PolyhedralSpace> {
    let (n, m) = (x.dim(), y.dim());
    let mut duals = Vec::with_capacity(x.dual_vertices().len() * y.signed_count());
    for f in x.dual_vertices() {
        for g in y.signed_duals() {
            duals.push(f.concat(&y.functional(g)));
        }
    }
    let mut primal = Vec::new();
    for v in x.primal_vertices() {
        primal.push(v.concat(&Vector::zeros(m)));
    }
    for w in y.primal_vertices() {
        primal.push(Vector::zeros(n).concat(w));
    }
    PolyhedralSpace::build_checked(
        format!("l1({},{})", x.name(), y.name()),
        n + m,
        duals,
        Some(primal),
    )
}

/// `ℓ∞`-sum: `‖(x, y)‖ = max(‖x‖, ‖y‖)`. Dual vertices are `(f, 0)` and
/// `(0, g)`; primal vertices are all pairs `(v, w)`.
pub fn sum_linf(x: &PolyhedralSpace, y: &PolyhedralSpace) -> Result<PolyhedralSpace> {
    let (n, m) = (x.dim(), y.dim());
    let mut duals = Vec::new();
    for f in x.dual_vertices() {
        duals.push(f.concat(&Vector::zeros(m)));
    }
    for g in y.dual_vertices() {
        duals.push(Vector::zeros(n).concat(g));
    }
    let mut primal = Vec::new();
    for v in x.primal_vertices() {
        for w in y.primal_vertices() {
            primal.push(v.concat(w));
        }
    }
    PolyhedralSpace::build_checked(
        format!("linf({},{})", x.name(), y.name()),
        n + m,
        duals,
        Some(primal),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumPoint {
    pub left: Vector,
    pub right: Vector,
}

impl SumPoint {
    pub fn new(left: Vector, right: Vector) -> Self {
        SumPoint { left, right }
    }

    pub fn split(z: &Vector, left_dim: usize) -> Self {
        let (left, right) = z.split_at(left_dim);
        SumPoint { left, right }
    }

    pub fn to_vector(&self) -> Vector {
        self.left.concat(&self.right)
    }

    pub fn is_zero(&self) -> bool {
        self.left.is_zero() && self.right.is_zero()
    }

    fn check(&self, x: &PolyhedralSpace, y: &PolyhedralSpace) -> Result<()> {
        self.left.check_dim(x.dim())?;
        self.right.check_dim(y.dim())
    }
}

impl fmt::Display for SumPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}),({}))", self.left, self.right)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumKind {
    L1,
    Linf,
}

/// A direct sum together with its factors, so that pair rules can consult
/// both the factors and the sum space without rebuilding it.
#[derive(Clone, Debug)]
pub struct DirectSum {
    kind: SumKind,
    left: PolyhedralSpace,
    right: PolyhedralSpace,
    space: PolyhedralSpace,
}

impl DirectSum {
    pub fn l1(left: &PolyhedralSpace, right: &PolyhedralSpace) -> Result<Self> {
        Ok(DirectSum {
            kind: SumKind::L1,
            space: sum_l1(left, right)?,
            left: left.clone(),
            right: right.clone(),
        })
    }

    pub fn linf(left: &PolyhedralSpace, right: &PolyhedralSpace) -> Result<Self> {
        Ok(DirectSum {
            kind: SumKind::Linf,
            space: sum_linf(left, right)?,
            left: left.clone(),
            right: right.clone(),
        })
    }

    pub fn kind(&self) -> SumKind {
        self.kind
    }

    pub fn left(&self) -> &PolyhedralSpace {
        &self.left
    }

    pub fn right(&self) -> &PolyhedralSpace {
        &self.right
    }

    pub fn space(&self) -> &PolyhedralSpace {
        &self.space
    }

    /// Exact verdict from the norm of the sum space, with a functional
    /// witness attached when the relation holds.
    pub fn direct_verdict(
        &self,
        z1: &SumPoint,
        z2: &SumPoint,
        kind: PairKind,
    ) -> Result<PairVerdict> {
        let (a, b) = (z1.to_vector(), z2.to_vector());
        let holds = pairs::pair_direct(&self.space, &a, &b, kind)?;
        if !holds {
            return Ok(PairVerdict::fails(kind));
        }
        pairs::pair_functional(&self.space, &a, &b, kind)
    }

    fn lift(&self, left: Option<&Vector>, right: Option<&Vector>) -> Option<SignedDual> {
        let l = left
            .cloned()
            .unwrap_or_else(|| Vector::zeros(self.left.dim()));
        let r = right
            .cloned()
            .unwrap_or_else(|| Vector::zeros(self.right.dim()));
        self.space.find_functional(&l.concat(&r))
    }
}

fn check_points(sum: &DirectSum, z1: &SumPoint, z2: &SumPoint) -> Result<()> {
    z1.check(&sum.left, &sum.right)?;
    z2.check(&sum.left, &sum.right)?;
    if z1.is_zero() || z2.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Pair rules for `Z = X ⊕₁ Y`.
///
/// TEA with all four components nonzero holds iff both component pairs are
/// TEA. The crossed zero patterns `x₁ = y₂ = 0` and `x₂ = y₁ = 0` are always
/// TEA. A vanishing factor reduces to the other factor. Parallelism and
/// all remaining patterns use the norm of the sum space directly.
pub fn l1_sum_pair_rules(
    sum: &DirectSum,
    z1: &SumPoint,
    z2: &SumPoint,
    kind: PairKind,
) -> Result<PairVerdict> {
    assert_eq!(sum.kind, SumKind::L1, "l1 rules need an l1 sum");
    check_points(sum, z1, z2)?;
    let zeros = [
        z1.left.is_zero(),
        z1.right.is_zero(),
        z2.left.is_zero(),
        z2.right.is_zero(),
    ];

    match (kind, zeros) {
        (PairKind::Tea, [false, false, false, false]) => {
            let vx = pairs::is_tea_functional(&sum.left, &z1.left, &z2.left)?;
            let vy = pairs::is_tea_functional(&sum.right, &z1.right, &z2.right)?;
            if !(vx.holds && vy.holds) {
                return Ok(PairVerdict::fails(kind));
            }
            let f = sum.left.functional(vx.witness_functional.expect("holds"));
            let g = sum.right.functional(vy.witness_functional.expect("holds"));
            Ok(PairVerdict {
                kind,
                holds: true,
                witness_sign: Some(1),
                witness_functional: sum.lift(Some(&f), Some(&g)),
            })
        }
        (PairKind::Tea, [true, false, false, true])
        | (PairKind::Tea, [false, true, true, false]) => {
            let x_side = if zeros[0] { &z2.left } else { &z1.left };
            let y_side = if zeros[1] { &z2.right } else { &z1.right };
            let f = sum
                .left
                .functional(sum.left.support_set(x_side)?.functionals[0]);
            let g = sum
                .right
                .functional(sum.right.support_set(y_side)?.functionals[0]);
            Ok(PairVerdict {
                kind,
                holds: true,
                witness_sign: Some(1),
                witness_functional: sum.lift(Some(&f), Some(&g)),
            })
        }
        (_, [true, false, true, false]) | (_, [false, true, false, true]) => {
            factor_reduction(sum, z1, z2, kind, zeros[0])
        }
        (PairKind::Parallel, [false, false, false, false]) => {
            // componentwise parallelism is necessary, not sufficient
            let px = pairs::is_parallel_direct(&sum.left, &z1.left, &z2.left)?;
            let py = pairs::is_parallel_direct(&sum.right, &z1.right, &z2.right)?;
            if !(px && py) {
                return Ok(PairVerdict::fails(kind));
            }
            sum.direct_verdict(z1, z2, kind)
        }
        _ => sum.direct_verdict(z1, z2, kind),
    }
}

/// When one factor vanishes in both points, the pair relation in the sum
/// is the relation of the other factor; a supporting functional of the
/// surviving factor lifts to the sum (in both the ℓ₁ and the ℓ∞ case).
fn factor_reduction(
    sum: &DirectSum,
    z1: &SumPoint,
    z2: &SumPoint,
    kind: PairKind,
    left_vanishes: bool,
) -> Result<PairVerdict> {
    let verdict = if left_vanishes {
        pairs::pair_functional(&sum.right, &z1.right, &z2.right, kind)?
    } else {
        pairs::pair_functional(&sum.left, &z1.left, &z2.left, kind)?
    };
    if !verdict.holds {
        return Ok(PairVerdict::fails(kind));
    }
    let witness = verdict.witness_functional.expect("holds");
    let lifted = if left_vanishes {
        lift_factor(sum, None, Some(&sum.right.functional(witness)))
    } else {
        lift_factor(sum, Some(&sum.left.functional(witness)), None)
    };
    Ok(PairVerdict {
        kind,
        holds: true,
        witness_sign: verdict.witness_sign,
        witness_functional: lifted,
    })
}

fn lift_factor(
    sum: &DirectSum,
    left: Option<&Vector>,
    right: Option<&Vector>,
) -> Option<SignedDual> {
    match sum.kind {
        SumKind::Linf => sum.lift(left, right),
        SumKind::L1 => {
            // pad the vanishing factor with any of its functionals; it is
            // evaluated on zero vectors only
            let pad_left = sum.left.functional(SignedDual::new(0, false));
            let pad_right = sum.right.functional(SignedDual::new(0, false));
            let l = left.cloned().unwrap_or(pad_left);
            let r = right.cloned().unwrap_or(pad_right);
            sum.space.find_functional(&l.concat(&r))
        }
    }
}

/// Pair rules for `Z = X ⊕∞ Y`.
///
/// If `‖x₁‖ ≥ ‖y₁‖` and `‖x₂‖ ≥ ‖y₂‖` the relation is that of `(x₁, x₂)` in
/// `X`; symmetrically for `Y`; under crossed strict dominance the pair is
/// never parallel (hence never TEA). When both inequalities are equalities
/// the two factor criteria overlap and the sum norm decides directly.
pub fn linf_sum_pair_rules(
    sum: &DirectSum,
    z1: &SumPoint,
    z2: &SumPoint,
    kind: PairKind,
) -> Result<PairVerdict> {
    assert_eq!(sum.kind, SumKind::Linf, "linf rules need an linf sum");
    check_points(sum, z1, z2)?;
    let nx1 = sum.left.norm_unchecked(&z1.left);
    let ny1 = sum.right.norm_unchecked(&z1.right);
    let nx2 = sum.left.norm_unchecked(&z2.left);
    let ny2 = sum.right.norm_unchecked(&z2.right);

    if nx1 == ny1 && nx2 == ny2 {
        return sum.direct_verdict(z1, z2, kind);
    }
    if nx1 >= ny1 && nx2 >= ny2 {
        return factor_reduction(sum, z1, z2, kind, false);
    }
    if nx1 <= ny1 && nx2 <= ny2 {
        return factor_reduction(sum, z1, z2, kind, true);
    }
    Ok(PairVerdict::fails(kind))
}

/// Basis of a [`PSumVerdict`]: an exact structural rule, or a floating
/// point comparison.
#[derive(Clone, Debug, PartialEq)]
pub enum PSumBasis {
    Structural(&'static str),
    /// Smallest `‖z₁‖ + ‖z₂‖ − ‖z₁ + λz₂‖` over the admissible signs.
    Numeric {
        gap: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PSumVerdict {
    pub holds: bool,
    pub basis: PSumBasis,
}

impl PSumVerdict {
    pub fn is_numeric(&self) -> bool {
        matches!(self.basis, PSumBasis::Numeric { .. })
    }
}

impl fmt::Display for PSumVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = if self.holds { "holds" } else { "fails" };
        match &self.basis {
            PSumBasis::Structural(rule) => write!(f, "{word} (exact: {rule})"),
            PSumBasis::Numeric { gap } => write!(f, "{word} (numeric, gap {gap:e})"),
        }
    }
}

fn p_norm(a: f64, b: f64, p: f64) -> f64 {
    let m = a.max(b);
    if m == 0.0 {
        return 0.0;
    }
    m * ((a / m).powf(p) + (b / m).powf(p)).powf(1.0 / p)
}

/// `‖z₁‖_p + ‖z₂‖_p − ‖z₁ + λz₂‖_p` in floating point, with the factor
/// norms computed exactly first.
pub fn p_sum_gap(
    x: &PolyhedralSpace,
    y: &PolyhedralSpace,
    p: f64,
    z1: &SumPoint,
    z2: &SumPoint,
    lambda: i8,
) -> f64 {
    let nz = |z: &SumPoint| {
        p_norm(
            to_f64(&x.norm_unchecked(&z.left)),
            to_f64(&y.norm_unchecked(&z.right)),
            p,
        )
    };
    let l = Rational::from_integer(lambda.into());
    let combined = SumPoint::new(
        &z1.left + &z2.left.scale(&l),
        &z1.right + &z2.right.scale(&l),
    );
    nz(z1) + nz(z2) - nz(&combined)
}

/// The purely numeric verdict, without structural rules.
pub fn p_sum_numeric(
    x: &PolyhedralSpace,
    y: &PolyhedralSpace,
    p: f64,
    z1: &SumPoint,
    z2: &SumPoint,
    kind: PairKind,
    tol: f64,
) -> PSumVerdict {
    let signs: &[i8] = match kind {
        PairKind::Tea => &[1],
        PairKind::Parallel => &[1, -1],
    };
    let gap = signs
        .iter()
        .map(|&s| p_sum_gap(x, y, p, z1, z2, s))
        .fold(f64::INFINITY, f64::min);
    let scale = p_norm(
        to_f64(&x.norm_unchecked(&z1.left)),
        to_f64(&y.norm_unchecked(&z1.right)),
        p,
    ) + p_norm(
        to_f64(&x.norm_unchecked(&z2.left)),
        to_f64(&y.norm_unchecked(&z2.right)),
        p,
    );
    PSumVerdict {
        holds: gap.abs() <= tol * scale.max(1.0),
        basis: PSumBasis::Numeric { gap },
    }
}

/// Pair test in `X ⊕_p Y` for finite `p > 1`.
///
/// Exact rules are tried first: a failing component pair (all components
/// nonzero) rules the pair out; a factor vanishing in both points reduces
/// to the other factor; crossed zero patterns are never parallel. Anything
/// else is decided numerically within `tol` (relative to the norms).
pub fn p_sum_pair_test(
    x: &PolyhedralSpace,
    y: &PolyhedralSpace,
    p: f64,
    z1: &SumPoint,
    z2: &SumPoint,
    kind: PairKind,
    tol: f64,
) -> Result<PSumVerdict> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::InvalidP(p));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    z1.check(x, y)?;
    z2.check(x, y)?;
    if z1.is_zero() || z2.is_zero() {
        return Err(Error::ZeroVector);
    }
    let structural = |holds, rule| {
        Ok(PSumVerdict {
            holds,
            basis: PSumBasis::Structural(rule),
        })
    };
    let zeros = [
        z1.left.is_zero(),
        z1.right.is_zero(),
        z2.left.is_zero(),
        z2.right.is_zero(),
    ];
    match zeros {
        [false, false, false, false] => {
            if !pairs::pair_direct(x, &z1.left, &z2.left, kind)? {
                return structural(false, "left components are not a pair");
            }
            if !pairs::pair_direct(y, &z1.right, &z2.right, kind)? {
                return structural(false, "right components are not a pair");
            }
        }
        [true, false, true, false] => {
            let holds = pairs::pair_direct(y, &z1.right, &z2.right, kind)?;
            return structural(holds, "left components vanish");
        }
        [false, true, false, true] => {
            let holds = pairs::pair_direct(x, &z1.left, &z2.left, kind)?;
            return structural(holds, "right components vanish");
        }
        [true, false, false, true] | [false, true, true, false] => {
            return structural(false, "crossed zero components");
        }
        _ => {}
    }
    Ok(p_sum_numeric(x, y, p, z1, z2, kind, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exact::{frac, int};

    fn v(vals: &[i64]) -> Vector {
        Vector::from_ints(vals)
    }

    fn sp(a: &[i64], b: &[i64]) -> SumPoint {
        SumPoint::new(v(a), v(b))
    }

    #[test]
    fn l1_sum_of_l1_is_l1() {
        let s = sum_l1(&catalog::l1(2), &catalog::l1(2)).unwrap();
        let l14 = catalog::l1(4);
        assert_eq!(s.primal_vertices(), l14.primal_vertices());
        let z = Vector::new(vec![int(1), frac(1, 2), frac(1, 2), int(1)]);
        assert_eq!(s.norm(&z).unwrap(), int(3));
    }

    #[test]
    fn l1_sum_of_linf_counts() {
        let s = sum_l1(&catalog::linf(2), &catalog::linf(2)).unwrap();
        assert_eq!(s.signed_count(), 16);
        assert_eq!(s.primal_vertices().len(), 8);
    }

    #[test]
    fn linf_sums() {
        let s = sum_linf(&catalog::linf(2), &catalog::linf(2)).unwrap();
        assert_eq!(s.primal_vertices(), catalog::linf(4).primal_vertices());
        let s = sum_linf(&catalog::l1(2), &catalog::l1(2)).unwrap();
        assert_eq!(s.norm(&v(&[1, 0, 1, 1])).unwrap(), int(2));
        assert_eq!(s.primal_vertices().len(), 16);
    }

    #[test]
    fn l1_rules_examples() {
        let sum = DirectSum::l1(&catalog::l1(2), &catalog::l1(2)).unwrap();
        let z1 = SumPoint::new(v(&[1, 0]), v(&[0, 1]));
        let z2 = SumPoint::new(
            Vector::new(vec![frac(1, 2), frac(1, 2)]),
            Vector::new(vec![frac(1, 2), frac(-1, 2)]),
        );
        let s = sum.space();
        assert_eq!(
            s.norm(&(&z1.to_vector() + &z2.to_vector())).unwrap(),
            int(3)
        );
        assert_eq!(
            s.norm(&(&z1.to_vector() - &z2.to_vector())).unwrap(),
            int(3)
        );
        assert!(
            !l1_sum_pair_rules(&sum, &z1, &z2, PairKind::Parallel)
                .unwrap()
                .holds
        );

        let verdict = l1_sum_pair_rules(
            &sum,
            &sp(&[1, 0], &[3, 0]),
            &sp(&[2, 0], &[1, 0]),
            PairKind::Tea,
        )
        .unwrap();
        assert!(verdict.holds);
        let g = s.functional(verdict.witness_functional.unwrap());
        let (a, b) = (v(&[1, 0, 3, 0]), v(&[2, 0, 1, 0]));
        assert_eq!(g.dot(&a), s.norm(&a).unwrap());
        assert_eq!(g.dot(&b), s.norm(&b).unwrap());

        let verdict = l1_sum_pair_rules(
            &sum,
            &sp(&[1, 0], &[0, 0]),
            &sp(&[0, 0], &[0, 1]),
            PairKind::Tea,
        )
        .unwrap();
        assert!(verdict.holds);
        assert!(verdict.witness_functional.is_some());
    }

    #[test]
    fn linf_rules_examples() {
        let sum = DirectSum::linf(&catalog::linf(2), &catalog::linf(2)).unwrap();
        // crossed dominance
        let z1 = sp(&[2, 0], &[1, 0]);
        let z2 = sp(&[1, 0], &[2, 0]);
        assert!(
            !linf_sum_pair_rules(&sum, &z1, &z2, PairKind::Parallel)
                .unwrap()
                .holds
        );
        assert!(!pairs::is_parallel_direct(sum.space(), &z1.to_vector(), &z2.to_vector()).unwrap());
        // left dominance, TEA left factor
        let verdict = linf_sum_pair_rules(
            &sum,
            &sp(&[2, 0], &[1, 1]),
            &sp(&[2, 1], &[0, 1]),
            PairKind::Tea,
        )
        .unwrap();
        assert!(verdict.holds);
        // right dominance, parallel right factor
        let verdict = linf_sum_pair_rules(
            &sum,
            &sp(&[0, 1], &[1, 0]),
            &sp(&[0, 0], &[-1, -1]),
            PairKind::Parallel,
        )
        .unwrap();
        assert!(verdict.holds);
        assert_eq!(verdict.witness_sign, Some(-1));
    }

    #[test]
    fn linf_double_equality_is_either_factor() {
        // the left pair is TEA, the right pair is not; the sum pair is TEA
        let sum = DirectSum::linf(&catalog::linf(2), &catalog::linf(2)).unwrap();
        let z1 = sp(&[1, 0], &[1, 0]);
        let z2 = sp(&[1, 0], &[0, 1]);
        assert!(pairs::is_tea_direct(sum.space(), &z1.to_vector(), &z2.to_vector()).unwrap());
        assert!(!pairs::is_tea_direct(sum.right(), &z1.right, &z2.right).unwrap());
        assert!(
            linf_sum_pair_rules(&sum, &z1, &z2, PairKind::Tea)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn p_sum_examples() {
        let l1 = catalog::l1(2);
        let z1 = sp(&[1, 0], &[3, 0]);
        let z2 = sp(&[2, 0], &[1, 0]);
        for p in [1.5, 2.0, 3.0] {
            let verdict = p_sum_pair_test(&l1, &l1, p, &z1, &z2, PairKind::Parallel, 1e-9).unwrap();
            assert!(!verdict.holds);
            assert!(verdict.is_numeric());
        }
        let verdict = p_sum_pair_test(
            &l1,
            &l1,
            2.0,
            &sp(&[0, 0], &[1, 0]),
            &sp(&[0, 0], &[1, 1]),
            PairKind::Tea,
            1e-9,
        )
        .unwrap();
        assert_eq!(
            verdict,
            PSumVerdict {
                holds: true,
                basis: PSumBasis::Structural("left components vanish")
            }
        );
        let verdict = p_sum_pair_test(
            &l1,
            &l1,
            1.5,
            &sp(&[0, 0], &[1, 0]),
            &sp(&[1, 0], &[0, 0]),
            PairKind::Parallel,
            1e-9,
        )
        .unwrap();
        assert!(!verdict.holds);
        assert!(!verdict.is_numeric());
        // collinear points are parallel in every p-sum
        let verdict = p_sum_pair_test(
            &l1,
            &l1,
            2.0,
            &z1,
            &sp(&[2, 0], &[6, 0]),
            PairKind::Tea,
            1e-9,
        )
        .unwrap();
        assert!(verdict.holds);
    }

    #[test]
    fn p_sum_errors() {
        let l1 = catalog::l1(2);
        let z = sp(&[1, 0], &[1, 0]);
        assert_eq!(
            p_sum_pair_test(&l1, &l1, 1.0, &z, &z, PairKind::Tea, 1e-9),
            Err(Error::InvalidP(1.0))
        );
        assert!(matches!(
            p_sum_pair_test(&l1, &l1, f64::INFINITY, &z, &z, PairKind::Tea, 1e-9),
            Err(Error::InvalidP(_))
        ));
        assert_eq!(
            p_sum_pair_test(&l1, &l1, 2.0, &z, &z, PairKind::Tea, 0.0),
            Err(Error::InvalidTolerance(0.0))
        );
    }
}
