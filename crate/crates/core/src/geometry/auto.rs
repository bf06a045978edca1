use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{
    enumerate_points, frobenius_permutation, locate, Point, Scalar, StratumN, VarietySpec,
};
use crate::error::{Error, Result};
use crate::ffield::{Elem, ExtField};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomorphismSpec {
    /// `[x:y] ↦ [ax+by : cx+dy]` on the projective line.
    Mobius {
        a: Scalar,
        b: Scalar,
        c: Scalar,
        d: Scalar,
    },
    /// `x ↦ λx`, fixing infinity.
    Scale { lambda: Scalar },
    /// `(x, y) ↦ (αx, βy)`, fixing infinity.
    CurveDiagonal { alpha: Scalar, beta: Scalar },
    /// An image table over the canonically ordered points of `X(F_{q^n})`.
    ExplicitPermutation { table: Vec<u32> },
}

impl AutomorphismSpec {
    pub fn scale(lambda: i64) -> Self {
        AutomorphismSpec::Scale {
            lambda: lambda.into(),
        }
    }

    pub fn mobius(a: i64, b: i64, c: i64, d: i64) -> Self {
        AutomorphismSpec::Mobius {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    /// `x ↦ 1/x`.
    pub fn inversion() -> Self {
        Self::mobius(0, 1, 1, 0)
    }

    pub fn diagonal(alpha: i64, beta: i64) -> Self {
        AutomorphismSpec::CurveDiagonal {
            alpha: alpha.into(),
            beta: beta.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// Singular matrix or zero scale factor.
    Degenerate,
    /// The automorphism shape does not apply to this variety.
    Unsupported,
    /// The image of a point is not a point of the variety.
    NotOnVariety,
    /// Two points share an image.
    NotInjective,
    /// `φ(Frob(P)) ≠ Frob(φ(P))`.
    FrobeniusMismatch,
    /// An explicit table of the wrong length or with repeated entries.
    BadTable,
}

/// The first offending point found while validating an automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Index into the canonically ordered `X(F)`.
    pub index: Option<usize>,
    pub point: Option<String>,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, detail: impl Into<String>) -> Self {
        Violation {
            kind,
            index: None,
            point: None,
            detail: detail.into(),
        }
    }

    fn at(
        kind: ViolationKind,
        f: &ExtField,
        index: usize,
        p: &Point,
        detail: impl Into<String>,
    ) -> Self {
        Violation {
            kind,
            index: Some(index),
            point: Some(p.display(f).to_string()),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.detail)?;
        if let (Some(i), Some(p)) = (self.index, &self.point) {
            write!(f, " at point #{i} {p}")?;
        }
        Ok(())
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        match v.kind {
            ViolationKind::Degenerate | ViolationKind::Unsupported | ViolationKind::BadTable => {
                Error::InvalidAutomorphism(v.to_string())
            }
            _ => Error::AutomorphismViolation(v.to_string()),
        }
    }
}

/// An automorphism shape with its constants resolved in one field.
enum Resolved<'a> {
    Mobius([Elem; 4]),
    Scale(Elem),
    Diagonal(Elem, Elem),
    Table(&'a [u32]),
}

fn resolve<'a>(
    a: &'a AutomorphismSpec,
    f: &ExtField,
) -> core::result::Result<Resolved<'a>, Violation> {
    Ok(match a {
        AutomorphismSpec::Mobius { a, b, c, d } => {
            let m = [a, b, c, d].map(|s| s.resolve(f));
            let det = f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]));
            if det.is_zero() {
                return Err(Violation::new(
                    ViolationKind::Degenerate,
                    "matrix has ad - bc = 0",
                ));
            }
            Resolved::Mobius(m)
        }
        AutomorphismSpec::Scale { lambda } => {
            let l = lambda.resolve(f);
            if l.is_zero() {
                return Err(Violation::new(
                    ViolationKind::Degenerate,
                    "scale factor is zero",
                ));
            }
            Resolved::Scale(l)
        }
        AutomorphismSpec::CurveDiagonal { alpha, beta } => {
            let (a, b) = (alpha.resolve(f), beta.resolve(f));
            if a.is_zero() || b.is_zero() {
                return Err(Violation::new(
                    ViolationKind::Degenerate,
                    "diagonal entry is zero",
                ));
            }
            Resolved::Diagonal(a, b)
        }
        AutomorphismSpec::ExplicitPermutation { table } => Resolved::Table(table),
    })
}

fn supports(v: &VarietySpec, r: &Resolved<'_>) -> bool {
    match (v, r) {
        (_, Resolved::Table(_)) => true,
        (VarietySpec::DisjointUnion(parts), r) => parts.iter().all(|p| supports(p, r)),
        (VarietySpec::ProjectiveLine, Resolved::Mobius(_) | Resolved::Scale(_)) => true,
        (VarietySpec::AffineSystem(s), Resolved::Scale(_)) => s.vars().len() == 1,
        (VarietySpec::AffineSystem(s), Resolved::Diagonal(..)) => s.vars().len() == 2,
        (
            VarietySpec::Weierstrass { .. } | VarietySpec::TwistedWeierstrass { .. },
            Resolved::Diagonal(..),
        ) => true,
        _ => false,
    }
}

/// The resolved automorphism, after checking that its shape fits `v` and
/// that a diagonal map carries each Weierstrass equation to itself.
fn prepare<'a>(
    v: &VarietySpec,
    a: &'a AutomorphismSpec,
    f: &ExtField,
) -> core::result::Result<Resolved<'a>, Violation> {
    let r = resolve(a, f)?;
    if !supports(v, &r) {
        return Err(Violation::new(
            ViolationKind::Unsupported,
            "automorphism does not act on this variety",
        ));
    }
    if let Resolved::Diagonal(alpha, beta) = r {
        preserves_equation(v, f, alpha, beta)?;
    }
    Ok(r)
}

fn preserves_equation(
    v: &VarietySpec,
    f: &ExtField,
    alpha: Elem,
    beta: Elem,
) -> core::result::Result<(), Violation> {
    let (a, b) = match v {
        VarietySpec::Weierstrass { a, b } | VarietySpec::TwistedWeierstrass { a, b, .. } => {
            (a.resolve(f), b.resolve(f))
        }
        VarietySpec::DisjointUnion(parts) => {
            return parts
                .iter()
                .try_for_each(|p| preserves_equation(p, f, alpha, beta));
        }
        _ => return Ok(()),
    };
    let b2 = f.square(beta);
    let ok = f.pow(alpha, 3) == b2 && f.mul(a, alpha) == f.mul(a, b2) && b == f.mul(b, b2);
    if ok {
        Ok(())
    } else {
        Err(Violation::new(
            ViolationKind::NotOnVariety,
            "diagonal map does not preserve the curve equation",
        ))
    }
}

/// Image of a single point under a formula automorphism.
fn image(r: &Resolved<'_>, f: &ExtField, p: &Point) -> Point {
    match (r, p) {
        (_, Point::Part(i, inner)) => Point::Part(*i, Box::new(image(r, f, inner))),
        (Resolved::Mobius([a, b, c, d]), Point::Affine(x)) => {
            let x = x[0];
            let num = f.add(f.mul(*a, x), *b);
            let den = f.add(f.mul(*c, x), *d);
            match f.div(num, den) {
                Ok(y) => Point::affine(&[y]),
                Err(_) => Point::Infinity,
            }
        }
        (Resolved::Mobius([a, _, c, _]), Point::Infinity) => match f.div(*a, *c) {
            Ok(y) => Point::affine(&[y]),
            Err(_) => Point::Infinity,
        },
        (Resolved::Scale(l), Point::Affine(x)) => Point::affine(&[f.mul(*l, x[0])]),
        (Resolved::Diagonal(a, b), Point::Affine(xy)) => {
            Point::affine(&[f.mul(*a, xy[0]), f.mul(*b, xy[1])])
        }
        (_, Point::Infinity) => Point::Infinity,
        (Resolved::Table(_), Point::Affine(_)) => unreachable!("tables act on indices"),
    }
}

/// Action on the canonically ordered point list as an index table.
fn action(
    v: &VarietySpec,
    a: &AutomorphismSpec,
    f: &ExtField,
    points: &[Point],
) -> core::result::Result<Permutation, Violation> {
    let r = prepare(v, a, f)?;
    if let Resolved::Table(t) = r {
        if t.len() != points.len() {
            return Err(Violation::new(
                ViolationKind::BadTable,
                alloc::format!(
                    "table has {} entries but the variety has {} points",
                    t.len(),
                    points.len()
                ),
            ));
        }
        return Permutation::from_vec(t.to_vec())
            .map_err(|e| Violation::new(ViolationKind::BadTable, e.to_string()));
    }
    let mut map = Vec::with_capacity(points.len());
    let mut hit = alloc::vec![None::<usize>; points.len()];
    for (i, p) in points.iter().enumerate() {
        let img = image(&r, f, p);
        let j = locate(points, &img).ok_or_else(|| {
            Violation::at(
                ViolationKind::NotOnVariety,
                f,
                i,
                p,
                "image is not a point of the variety",
            )
        })?;
        if let Some(prev) = hit[j] {
            return Err(Violation::at(
                ViolationKind::NotInjective,
                f,
                i,
                p,
                alloc::format!("same image as point #{prev}"),
            ));
        }
        hit[j] = Some(i);
        map.push(j as u32);
    }
    Ok(Permutation::from_vec_unchecked(map))
}

/// Checks that `a` is a well-defined bijection of `X(F)` commuting with
/// Frobenius, returning the first offending point otherwise.
pub fn validate_automorphism(
    v: &VarietySpec,
    a: &AutomorphismSpec,
    f: &ExtField,
) -> core::result::Result<(), Violation> {
    let points = enumerate_points(v, f, u64::MAX)
        .map_err(|e| Violation::new(ViolationKind::Unsupported, e.to_string()))?;
    checked_action(v, a, f, &points).map(|_| ())
}

fn checked_action(
    v: &VarietySpec,
    a: &AutomorphismSpec,
    f: &ExtField,
    points: &[Point],
) -> core::result::Result<Permutation, Violation> {
    let phi = action(v, a, f, points)?;
    let frob = frobenius_permutation(points, f)
        .map_err(|e| Violation::new(ViolationKind::Unsupported, e.to_string()))?;
    if let Some(i) = phi.commutation_defect(&frob) {
        return Err(Violation::at(
            ViolationKind::FrobeniusMismatch,
            f,
            i,
            &points[i],
            "automorphism does not commute with Frobenius",
        ));
    }
    Ok(phi)
}

/// The automorphism as a permutation of the stratum, commuting with its
/// Frobenius.
pub fn apply_automorphism(
    v: &VarietySpec,
    a: &AutomorphismSpec,
    s: &StratumN,
) -> Result<Permutation> {
    let f = &s.field;
    let phi = match a {
        AutomorphismSpec::ExplicitPermutation { .. } => {
            let all = enumerate_points(v, f, u64::MAX)?;
            let full = checked_action(v, a, f, &all)?;
            let mut map = Vec::with_capacity(s.points.len());
            for (i, p) in s.points.iter().enumerate() {
                let src = locate(&all, p).ok_or(Error::AutomorphismViolation(
                    "stratum point not on variety".into(),
                ))?;
                let dst = s.index_of(&all[full.apply(src)]).ok_or_else(|| {
                    Error::AutomorphismViolation(alloc::format!(
                        "table moves stratum point #{i} out of the stratum"
                    ))
                })?;
                map.push(dst as u32);
            }
            Permutation::from_vec(map)?
        }
        _ => {
            let r = prepare(v, a, f)?;
            let mut map = Vec::with_capacity(s.points.len());
            for (i, p) in s.points.iter().enumerate() {
                let j = s.index_of(&image(&r, f, p)).ok_or_else(|| {
                    Error::from(Violation::at(
                        ViolationKind::NotOnVariety,
                        f,
                        i,
                        p,
                        "image is not a point of the stratum",
                    ))
                })?;
                map.push(j as u32);
            }
            Permutation::from_vec(map)
                .map_err(|_| Error::AutomorphismViolation("action is not injective".into()))?
        }
    };
    if let Some(i) = phi.commutation_defect(&s.frob) {
        return Err(Error::CommutationViolation(i));
    }
    Ok(phi)
}
