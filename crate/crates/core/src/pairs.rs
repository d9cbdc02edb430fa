//! Parallel pairs, TEA pairs, Birkhoff-James and ε-approximate
//! orthogonality, and the numerical-index-one test.
//!
//! Two independent routes decide each pair relation: the direct norm
//! identity `‖x + λy‖ = ‖x‖ + ‖y‖`, and the functional route through
//! common supporting functionals (`J(x) ∩ J(λy) ≠ ∅`). In a polyhedral
//! space the intersection of two faces of the dual ball is a face, so it
//! suffices to intersect the finite sets `Ext J(x)` and `Ext J(λy)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, Rational, Vector};
use crate::space::{PolyhedralSpace, SignedDual};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Tea,
    Parallel,
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairKind::Tea => "tea",
            PairKind::Parallel => "parallel",
        })
    }
}

impl FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tea" => Ok(PairKind::Tea),
            "parallel" => Ok(PairKind::Parallel),
            _ => Err(Error::Parse {
                position: 0,
                message: format!("unknown pair kind {s:?}, expected tea or parallel"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairVerdict {
    pub kind: PairKind,
    pub holds: bool,
    /// `λ ∈ {+1, -1}` realizing the pair relation.
    pub witness_sign: Option<i8>,
    /// A signed dual vertex in `Ext J(x) ∩ Ext J(λy)`.
    pub witness_functional: Option<SignedDual>,
}

impl PairVerdict {
    pub fn fails(kind: PairKind) -> Self {
        PairVerdict {
            kind,
            holds: false,
            witness_sign: None,
            witness_functional: None,
        }
    }
}

fn check_dims(space: &PolyhedralSpace, x: &Vector, y: &Vector) -> Result<()> {
    x.check_dim(space.dim())?;
    y.check_dim(space.dim())
}

/// `‖x + y‖ = ‖x‖ + ‖y‖`. Zero vectors are allowed.
pub fn is_tea_direct(space: &PolyhedralSpace, x: &Vector, y: &Vector) -> Result<bool> {
    check_dims(space, x, y)?;
    Ok(tea_direct(space, x, y))
}

pub(crate) fn tea_direct(space: &PolyhedralSpace, x: &Vector, y: &Vector) -> bool {
    space.norm_unchecked(&(x + y)) == space.norm_unchecked(x) + space.norm_unchecked(y)
}

/// `‖x + λy‖ = ‖x‖ + ‖y‖` for some `λ ∈ {+1, -1}`.
pub fn is_parallel_direct(space: &PolyhedralSpace, x: &Vector, y: &Vector) -> Result<bool> {
    check_dims(space, x, y)?;
    Ok(parallel_direct(space, x, y))
}

pub(crate) fn parallel_direct(space: &PolyhedralSpace, x: &Vector, y: &Vector) -> bool {
    tea_direct(space, x, y) || tea_direct(space, x, &-y)
}

pub fn pair_direct(
    space: &PolyhedralSpace,
    x: &Vector,
    y: &Vector,
    kind: PairKind,
) -> Result<bool> {
    match kind {
        PairKind::Tea => is_tea_direct(space, x, y),
        PairKind::Parallel => is_parallel_direct(space, x, y),
    }
}

/// TEA through supporting functionals: holds iff `Ext J(x) ∩ Ext J(y) ≠ ∅`.
pub fn is_tea_functional(space: &PolyhedralSpace, x: &Vector, y: &Vector) -> Result<PairVerdict> {
    check_dims(space, x, y)?;
    let sx = space.support_set(x)?;
    let sy = space.support_set(y)?;
    Ok(match sx.intersects(&sy) {
        Some(f) => PairVerdict {
            kind: PairKind::Tea,
            holds: true,
            witness_sign: Some(1),
            witness_functional: Some(f),
        },
        None => PairVerdict::fails(PairKind::Tea),
    })
}

/// Parallelism through supporting functionals: holds iff some `f ∈ Ext J(x)`
/// has `f` or `-f` in `Ext J(y)`.
pub fn is_parallel_functional(
    space: &PolyhedralSpace,
    x: &Vector,
    y: &Vector,
) -> Result<PairVerdict> {
    check_dims(space, x, y)?;
    let sx = space.support_set(x)?;
    let sy = space.support_set(y)?;
    if let Some(f) = sx.intersects(&sy) {
        return Ok(PairVerdict {
            kind: PairKind::Parallel,
            holds: true,
            witness_sign: Some(1),
            witness_functional: Some(f),
        });
    }
    let negated = sx
        .functionals
        .iter()
        .copied()
        .find(|f| sy.contains(f.negate()));
    Ok(match negated {
        Some(f) => PairVerdict {
            kind: PairKind::Parallel,
            holds: true,
            witness_sign: Some(-1),
            witness_functional: Some(f),
        },
        None => PairVerdict::fails(PairKind::Parallel),
    })
}

pub fn pair_functional(
    space: &PolyhedralSpace,
    x: &Vector,
    y: &Vector,
    kind: PairKind,
) -> Result<PairVerdict> {
    match kind {
        PairKind::Tea => is_tea_functional(space, x, y),
        PairKind::Parallel => is_parallel_functional(space, x, y),
    }
}

/// Parallelism for possibly-zero vectors, decided from support sets.
/// A zero vector is parallel to everything.
pub(crate) fn parallel_supports(space: &PolyhedralSpace, x: &Vector, y: &Vector) -> bool {
    let (_, sx) = space.support_unchecked(x);
    let (_, sy) = space.support_unchecked(y);
    if sx.is_empty() || sy.is_empty() {
        return true;
    }
    sx.iter()
        .any(|f| sy.contains(f) || sy.contains(&f.negate()))
}

/// Birkhoff-James orthogonality `x ⊥ y`: some convex combination of
/// `Ext J(x)` annihilates `y`.
pub fn is_bj_orthogonal(space: &PolyhedralSpace, x: &Vector, y: &Vector) -> Result<bool> {
    check_dims(space, x, y)?;
    let sx = space.support_set(x)?;
    let values: Vec<Rational> = sx.functionals.iter().map(|&f| space.apply(f, y)).collect();
    let min = values.iter().min().expect("nonempty support");
    let max = values.iter().max().expect("nonempty support");
    Ok(!min.is_positive() && !max.is_negative())
}

/// ε-approximate Birkhoff-James orthogonality:
/// `‖x + λy‖² ≥ ‖x‖² − 2ε‖x‖‖λy‖` for every real `λ`.
///
/// `λ ↦ ‖x + λy‖` is the upper envelope of the lines `g(x) + λ g(y)`.
/// Between consecutive crossings of those lines (and `λ = 0`, where `|λ|`
/// bends) a single line is active, so the condition is a rational
/// quadratic inequality on each piece and its minimum is found in closed
/// form.
pub fn is_eps_orthogonal(
    space: &PolyhedralSpace,
    x: &Vector,
    y: &Vector,
    eps: &Rational,
) -> Result<bool> {
    if eps.is_negative() || *eps >= Rational::one() {
        return Err(Error::InvalidEpsilon(eps.to_string()));
    }
    check_dims(space, x, y)?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    if y.is_zero() {
        return Ok(true);
    }
    let lines: Vec<(Rational, Rational)> = space
        .signed_duals()
        .map(|f| (space.apply(f, x), space.apply(f, y)))
        .collect();
    let norm_x = space.norm_unchecked(x);
    let norm_y = space.norm_unchecked(y);
    let bend = int(2) * eps * &norm_x * &norm_y;
    let norm_x_sq = &norm_x * &norm_x;

    let mut breaks = vec![Rational::zero()];
    for (i, (a1, b1)) in lines.iter().enumerate() {
        for (a2, b2) in &lines[i + 1..] {
            if b1 != b2 {
                breaks.push((a2 - a1) / (b1 - b2));
            }
        }
    }
    breaks.sort();
    breaks.dedup();

    let envelope_at = |t: &Rational| -> (Rational, Rational) {
        lines
            .iter()
            .max_by(|(a1, b1), (a2, b2)| (a1 + b1 * t).cmp(&(a2 + b2 * t)))
            .cloned()
            .expect("nonempty dual set")
    };

    let mut pieces: Vec<(Option<Rational>, Option<Rational>)> = Vec::new();
    pieces.push((None, Some(breaks[0].clone())));
    for w in breaks.windows(2) {
        pieces.push((Some(w[0].clone()), Some(w[1].clone())));
    }
    pieces.push((Some(breaks[breaks.len() - 1].clone()), None));

    for (lo, hi) in pieces {
        let sample = match (&lo, &hi) {
            (None, Some(h)) => h - Rational::one(),
            (Some(l), None) => l + Rational::one(),
            (Some(l), Some(h)) => (l + h) / int(2),
            (None, None) => unreachable!(),
        };
        let (a, b) = envelope_at(&sample);
        let sign = if sample.is_negative() {
            -Rational::one()
        } else {
            Rational::one()
        };
        // q(λ) = (a + bλ)² − ‖x‖² + sign·bend·λ
        let qa = &b * &b;
        let qb = int(2) * &a * &b + &sign * &bend;
        let qc = &a * &a - &norm_x_sq;
        if !quadratic_nonnegative(&qa, &qb, &qc, lo.as_ref(), hi.as_ref()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `qa λ² + qb λ + qc ≥ 0` on the closed interval `[lo, hi]`
/// (either end may be infinite). Requires `qa ≥ 0`.
fn quadratic_nonnegative(
    qa: &Rational,
    qb: &Rational,
    qc: &Rational,
    lo: Option<&Rational>,
    hi: Option<&Rational>,
) -> bool {
    let eval = |t: &Rational| qa * t * t + qb * t + qc;
    if qa.is_zero() {
        // linear: unbounded ends must not slope downward
        if lo.is_none() && qb.is_positive() {
            return false;
        }
        if hi.is_none() && qb.is_negative() {
            return false;
        }
    } else {
        let vertex = -qb / (int(2) * qa);
        let inside = lo.is_none_or(|l| *l <= vertex) && hi.is_none_or(|h| vertex <= *h);
        if inside && eval(&vertex).is_negative() {
            return false;
        }
    }
    lo.is_none_or(|l| !eval(l).is_negative()) && hi.is_none_or(|h| !eval(h).is_negative())
}

/// `n(X) = 1` iff `|g(v)| = 1` for every primal vertex `v` and every dual
/// vertex `g`.
pub fn has_numerical_index_one(space: &PolyhedralSpace) -> bool {
    let one = Rational::one();
    space
        .primal_vertices()
        .iter()
        .all(|v| space.dual_vertices().iter().all(|g| g.dot(v).abs() == one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exact::frac;

    fn v(vals: &[i64]) -> Vector {
        Vector::from_ints(vals)
    }

    #[test]
    fn tea_direct_examples() {
        let l1 = catalog::l1(3);
        assert!(is_tea_direct(&l1, &v(&[2, 1, 1]), &v(&[1, 1, 2])).unwrap());
        assert!(!is_tea_direct(&l1, &v(&[1, 0, 1]), &v(&[-1, 0, -1])).unwrap());
        assert!(is_tea_direct(&l1, &v(&[0, 0, 0]), &v(&[3, -1, 2])).unwrap());
        assert!(matches!(
            is_tea_direct(&l1, &v(&[1, 0]), &v(&[1, 0, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn parallel_direct_examples() {
        let linf = catalog::linf(2);
        assert!(is_parallel_direct(&linf, &v(&[1, 0]), &v(&[1, 1])).unwrap());
        assert!(is_parallel_direct(&linf, &v(&[1, 1]), &v(&[1, -1])).unwrap());
        assert!(!is_parallel_direct(&linf, &v(&[1, 0]), &v(&[0, 1])).unwrap());
    }

    #[test]
    fn functional_examples() {
        let linf = catalog::linf(2);
        let y1 = Vector::new(vec![int(1), frac(1, 2)]);
        let verdict = is_tea_functional(&linf, &v(&[1, 0]), &y1).unwrap();
        assert!(verdict.holds);
        assert_eq!(
            linf.functional(verdict.witness_functional.unwrap()),
            v(&[1, 0])
        );

        let l1 = catalog::l1(3);
        let verdict = is_tea_functional(&l1, &v(&[2, 1, 1]), &v(&[1, 1, 2])).unwrap();
        assert_eq!(
            l1.functional(verdict.witness_functional.unwrap()),
            v(&[1, 1, 1])
        );

        assert!(
            !is_tea_functional(&linf, &v(&[1, 0]), &v(&[0, 1]))
                .unwrap()
                .holds
        );

        let verdict = is_parallel_functional(&linf, &v(&[1, 0]), &v(&[1, 1])).unwrap();
        assert!(verdict.holds);
        assert_eq!(verdict.witness_sign, Some(1));
        let verdict = is_parallel_functional(&linf, &v(&[1, 0]), &v(&[-1, -1])).unwrap();
        assert!(verdict.holds);
        assert_eq!(verdict.witness_sign, Some(-1));

        let l1_2 = catalog::l1(2);
        let verdict = is_parallel_functional(&l1_2, &v(&[1, 0]), &v(&[0, 1])).unwrap();
        assert!(verdict.holds);
        assert_eq!(
            l1_2.functional(verdict.witness_functional.unwrap()),
            v(&[1, 1])
        );

        assert_eq!(
            is_tea_functional(&linf, &v(&[0, 0]), &v(&[0, 1])).unwrap_err(),
            Error::ZeroVector
        );
    }

    #[test]
    fn bj_examples() {
        let linf = catalog::linf(2);
        assert!(is_bj_orthogonal(&linf, &v(&[1, 1]), &v(&[1, -1])).unwrap());
        assert!(!is_bj_orthogonal(&linf, &v(&[1, 0]), &v(&[1, 0])).unwrap());
        assert!(is_bj_orthogonal(&linf, &v(&[1, 0]), &v(&[0, 0])).unwrap());
        assert_eq!(
            is_bj_orthogonal(&linf, &v(&[0, 0]), &v(&[1, 0])).unwrap_err(),
            Error::ZeroVector
        );
    }

    /// Brute-force oracle: scan λ on a fine rational grid plus the
    /// neighbourhoods of a few special values.
    fn eps_oracle(space: &PolyhedralSpace, x: &Vector, y: &Vector, eps: &Rational) -> bool {
        let nx = space.norm(x).unwrap();
        let ny = space.norm(y).unwrap();
        let mut lambdas: Vec<Rational> = (-120..=120).map(|i| frac(i, 24)).collect();
        for center in [-1i64, 0, 1] {
            for k in 1..12 {
                lambdas.push(Rational::from_integer(center.into()) + frac(1, 97 * k * k));
                lambdas.push(Rational::from_integer(center.into()) - frac(1, 97 * k * k));
            }
        }
        lambdas.iter().all(|l| {
            let lhs = space.norm(&(x + &y.scale(l))).unwrap();
            lhs.clone() * lhs >= &nx * &nx - int(2) * eps * &nx * l.abs() * &ny
        })
    }

    #[test]
    fn eps_examples() {
        let linf = catalog::linf(2);
        let half = frac(1, 2);
        for eps in [int(0), frac(1, 10), half.clone(), frac(9, 10)] {
            assert!(is_eps_orthogonal(&linf, &v(&[1, 0]), &v(&[0, 1]), &eps).unwrap());
        }
        // near λ = -1 the squared norm δ² drops below the bound 1 - (1 - δ) = δ
        assert!(!is_eps_orthogonal(&linf, &v(&[1, 0]), &v(&[1, 0]), &half).unwrap());
        assert!(!eps_oracle(&linf, &v(&[1, 0]), &v(&[1, 0]), &half));
        assert!(matches!(
            is_eps_orthogonal(&linf, &v(&[1, 0]), &v(&[1, 0]), &int(1)),
            Err(Error::InvalidEpsilon(_))
        ));
        assert!(matches!(
            is_eps_orthogonal(&linf, &v(&[1, 0]), &v(&[1, 0]), &frac(-1, 2)),
            Err(Error::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn eps_zero_is_bj_and_matches_oracle() {
        let spaces = [
            catalog::linf(2),
            catalog::l1(2),
            catalog::hexagon(),
            catalog::l1(3),
        ];
        for space in &spaces {
            let n = space.dim();
            let pts: Vec<Vector> = (0..24)
                .map(|i| {
                    Vector::new(
                        (0..n)
                            .map(|j| frac(((i * 7 + j as i64 * 5) % 9) - 4, 1 + (i + j as i64) % 3))
                            .collect(),
                    )
                })
                .collect();
            for x in pts.iter().filter(|p| !p.is_zero()) {
                for y in pts.iter().take(8) {
                    assert_eq!(
                        is_eps_orthogonal(space, x, y, &int(0)).unwrap(),
                        is_bj_orthogonal(space, x, y).unwrap()
                    );
                    for eps in [frac(1, 10), frac(1, 2)] {
                        let exact = is_eps_orthogonal(space, x, y, &eps).unwrap();
                        let oracle = eps_oracle(space, x, y, &eps);
                        // the grid oracle can only miss violations
                        if exact {
                            assert!(oracle, "{x} {y} {eps}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn index_one_examples() {
        for n in 2..=3 {
            assert!(has_numerical_index_one(&catalog::linf(n)));
            assert!(has_numerical_index_one(&catalog::l1(n)));
        }
        assert!(!has_numerical_index_one(&catalog::hexagon()));
    }

    #[test]
    fn non_transitivity() {
        let linf = catalog::linf(2);
        assert!(is_parallel_direct(&linf, &v(&[1, 0]), &v(&[1, 1])).unwrap());
        assert!(is_parallel_direct(&linf, &v(&[1, 1]), &v(&[0, 1])).unwrap());
        assert!(!is_parallel_direct(&linf, &v(&[1, 0]), &v(&[0, 1])).unwrap());
    }
}
