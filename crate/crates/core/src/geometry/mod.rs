//! Varieties over `F_q`, their points over `F_{q^n}`, and the exact-degree
//! strata `X_n` carrying the Frobenius permutation.
//!
//! Subfield membership is always decided by Frobenius periods inside the
//! working field; fields of different degree are never embedded into each
//! other.

mod auto;
pub mod expr;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use auto::{
    apply_automorphism, validate_automorphism, AutomorphismSpec, Violation, ViolationKind,
};

use crate::error::{Error, Result};
use crate::ffield::{Elem, ExtField, QSpec};
use crate::perm::Permutation;
use expr::Poly;
use smallvec::SmallVec;

/// A base-field constant, resolved separately in every working field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    /// An integer, reduced into the prime field.
    Int(i64),
    /// `h^k` where `h = g^((q^n-1)/(q-1))` for the canonical generator `g`
    /// of the working field; reaches elements of `F_q` outside `F_p`.
    BaseGenPow(u64),
}

impl Scalar {
    pub fn resolve(&self, f: &ExtField) -> Elem {
        match *self {
            Scalar::Int(v) => f.from_int(v),
            Scalar::BaseGenPow(k) => f.pow(f.base_generator(), k),
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Int(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSystem {
    vars: Vec<String>,
    polys: Vec<Poly>,
}

impl AffineSystem {
    pub fn new<S: AsRef<str>>(vars: &[S], polys: &[S]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|v| String::from(v.as_ref())).collect();
        if vars.is_empty() {
            return Err(Error::InvalidVariety(
                "affine system needs at least one variable".into(),
            ));
        }
        for (i, v) in vars.iter().enumerate() {
            if !expr::is_valid_name(v) {
                return Err(Error::InvalidVariety(alloc::format!(
                    "invalid variable name `{v}`"
                )));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidVariety(alloc::format!(
                    "duplicate variable `{v}`"
                )));
            }
        }
        let polys = polys
            .iter()
            .map(|p| expr::parse(p.as_ref(), &vars))
            .collect::<Result<Vec<_>>>()?;
        Ok(AffineSystem { vars, polys })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietySpec {
    ProjectiveLine,
    /// `y² = x³ + a x + b`, plus the point at infinity.
    Weierstrass {
        a: Scalar,
        b: Scalar,
    },
    /// `α y² = x³ + a x + b` with `α` a non-square of `F_q`, plus infinity.
    TwistedWeierstrass {
        alpha: Scalar,
        a: Scalar,
        b: Scalar,
    },
    AffineSystem(AffineSystem),
    DisjointUnion(Vec<VarietySpec>),
}

impl VarietySpec {
    pub fn weierstrass(a: i64, b: i64) -> Self {
        VarietySpec::Weierstrass {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn twist(alpha: i64, a: i64, b: i64) -> Self {
        VarietySpec::TwistedWeierstrass {
            alpha: alpha.into(),
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn affine<S: AsRef<str>>(vars: &[S], polys: &[S]) -> Result<Self> {
        Ok(VarietySpec::AffineSystem(AffineSystem::new(vars, polys)?))
    }

    /// The affine line, as the one-variable system with no equations.
    pub fn affine_line() -> Self {
        VarietySpec::AffineSystem(AffineSystem::new(&["x"], &[] as &[&str]).expect("valid system"))
    }

    /// A single rational point, `x = 0` in one variable.
    pub fn point() -> Self {
        VarietySpec::AffineSystem(AffineSystem::new(&["x"], &["x"]).expect("valid system"))
    }

    /// Checks the base-field invariants: nonsingular Weierstrass data and a
    /// non-square twisting constant.
    pub fn validate(&self, q: QSpec) -> Result<()> {
        match self {
            VarietySpec::ProjectiveLine | VarietySpec::AffineSystem(_) => Ok(()),
            VarietySpec::Weierstrass { a, b } => check_nonsingular(q, a, b),
            VarietySpec::TwistedWeierstrass { alpha, a, b } => {
                check_nonsingular(q, a, b)?;
                let base = ExtField::from_spec(q, 1)?;
                let alpha = alpha.resolve(&base);
                if base.is_square(alpha)? {
                    return Err(Error::InvalidVariety(
                        "twisting constant must be a non-square in F_q".into(),
                    ));
                }
                Ok(())
            }
            VarietySpec::DisjointUnion(parts) => parts.iter().try_for_each(|p| p.validate(q)),
        }
    }
}

fn check_nonsingular(q: QSpec, a: &Scalar, b: &Scalar) -> Result<()> {
    if q.p == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    let base = ExtField::from_spec(q, 1)?;
    let (a, b) = (a.resolve(&base), b.resolve(&base));
    let a3 = base.mul(base.from_int(4), base.pow(a, 3));
    let b2 = base.mul(base.from_int(27), base.square(b));
    if base.add(a3, b2).is_zero() {
        return Err(Error::InvalidVariety(
            "singular curve: 4a^3 + 27b^2 = 0".into(),
        ));
    }
    Ok(())
}

/// Affine coordinates, stored inline for curves and lines.
pub type Coords = SmallVec<[Elem; 2]>;

/// A point over the working field. Affine points sort before the point at
/// infinity; points of a disjoint union carry their part index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Affine(Coords),
    Infinity,
    Part(u32, Box<Point>),
}

impl Point {
    pub fn affine(coords: &[Elem]) -> Self {
        Point::Affine(SmallVec::from_slice(coords))
    }

    pub fn frobenius(&self, f: &ExtField) -> Point {
        match self {
            Point::Affine(c) => Point::Affine(c.iter().map(|&x| f.frobenius_q(x)).collect()),
            Point::Infinity => Point::Infinity,
            Point::Part(i, p) => Point::Part(*i, Box::new(p.frobenius(f))),
        }
    }

    pub fn display<'a>(&'a self, f: &'a ExtField) -> PointDisplay<'a> {
        PointDisplay {
            point: self,
            field: f,
        }
    }
}

pub struct PointDisplay<'a> {
    point: &'a Point,
    field: &'a ExtField,
}

impl fmt::Display for PointDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.point {
            Point::Infinity => f.write_str("inf"),
            Point::Affine(c) => {
                f.write_str("(")?;
                for (i, &x) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", self.field.display(x))?;
                }
                f.write_str(")")
            }
            Point::Part(i, p) => write!(f, "#{i}:{}", p.display(self.field)),
        }
    }
}

/// All `F`-points of `v`, each once, in canonical order.
pub fn enumerate_points(v: &VarietySpec, f: &ExtField, budget: u64) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    push_points(v, f, budget, &mut out)?;
    out.sort_unstable();
    Ok(out)
}

fn push_points(v: &VarietySpec, f: &ExtField, budget: u64, out: &mut Vec<Point>) -> Result<()> {
    match v {
        VarietySpec::ProjectiveLine => {
            out.reserve(f.size() as usize + 1);
            out.extend(f.elements().map(|x| Point::affine(&[x])));
            out.push(Point::Infinity);
        }
        VarietySpec::Weierstrass { a, b } => {
            let (a, b) = (a.resolve(f), b.resolve(f));
            weierstrass_points(f, a, b, Elem::ONE, out)?;
        }
        VarietySpec::TwistedWeierstrass { alpha, a, b } => {
            let (alpha, a, b) = (alpha.resolve(f), a.resolve(f), b.resolve(f));
            if alpha.is_zero() {
                return Err(Error::InvalidVariety("twisting constant is zero".into()));
            }
            weierstrass_points(f, a, b, alpha, out)?;
        }
        VarietySpec::AffineSystem(sys) => affine_points(sys, f, budget, out)?,
        VarietySpec::DisjointUnion(parts) => {
            for (i, part) in parts.iter().enumerate() {
                let mut sub = Vec::new();
                push_points(part, f, budget, &mut sub)?;
                out.extend(sub.into_iter().map(|p| Point::Part(i as u32, Box::new(p))));
            }
        }
    }
    Ok(())
}

/// `alpha·y² = x³ + a x + b` by an x-sweep with square testing.
fn weierstrass_points(
    f: &ExtField,
    a: Elem,
    b: Elem,
    alpha: Elem,
    out: &mut Vec<Point>,
) -> Result<()> {
    if f.characteristic() == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    let alpha_inv = f.inv(alpha)?;
    for x in f.elements() {
        let rhs = f.add(f.add(f.pow(x, 3), f.mul(a, x)), b);
        let target = f.mul(rhs, alpha_inv);
        if target.is_zero() {
            out.push(Point::affine(&[x, Elem::ZERO]));
        } else if let Some(y) = f.sqrt(target)? {
            out.push(Point::affine(&[x, y]));
            out.push(Point::affine(&[x, f.neg(y)]));
        }
    }
    out.push(Point::Infinity);
    Ok(())
}

fn affine_points(
    sys: &AffineSystem,
    f: &ExtField,
    budget: u64,
    out: &mut Vec<Point>,
) -> Result<()> {
    let nvars = sys.vars.len() as u32;
    let needed = (f.size() as u128).checked_pow(nvars);
    let total = match needed {
        Some(t) if t <= u128::from(budget) => t as u64,
        _ => {
            return Err(Error::BudgetExceeded {
                needed: needed.unwrap_or(u128::MAX),
                budget,
            });
        }
    };
    let mut coords = alloc::vec![Elem::ZERO; nvars as usize];
    for idx in 0..total {
        let mut v = idx;
        // last variable varies fastest, so tuples come out in lexicographic order
        for slot in coords.iter_mut().rev() {
            *slot = Elem(v % f.size());
            v /= f.size();
        }
        if sys.polys.iter().all(|p| p.expr.eval(f, &coords).is_zero()) {
            out.push(Point::affine(&coords));
        }
    }
    Ok(())
}

/// Index of `p` in a canonically sorted point list.
pub fn locate(points: &[Point], p: &Point) -> Option<usize> {
    points.binary_search(p).ok()
}

/// Frobenius as a permutation of a sorted point list closed under it.
pub(crate) fn frobenius_permutation(points: &[Point], f: &ExtField) -> Result<Permutation> {
    let mut map = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let img = locate(points, &p.frobenius(f)).ok_or(Error::CommutationViolation(i))?;
        map.push(img as u32);
    }
    Permutation::from_vec(map)
}

/// The exact-degree stratum `X_n`: points over `F_{q^n}` lying over no
/// proper subfield, with Frobenius acting freely as `Z/n`.
#[derive(Clone, Debug)]
pub struct StratumN {
    pub field: ExtField,
    pub n: u32,
    pub points: Vec<Point>,
    pub frob: Permutation,
}

impl StratumN {
    /// Number of Frobenius orbits (closed points of degree `n`).
    pub fn closed_points(&self) -> u64 {
        self.points.len() as u64 / u64::from(self.n)
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        locate(&self.points, p)
    }
}

pub fn exact_degree_stratum(v: &VarietySpec, q: QSpec, n: u32, budget: u64) -> Result<StratumN> {
    let field = ExtField::with_budget(q.p, q.e, n, budget)?;
    let all = enumerate_points(v, &field, budget)?;
    stratum_from_points(field, all)
}

/// Restricts a full point list of `X(F_{q^n})` to the exact-degree stratum.
pub fn stratum_from_points(field: ExtField, all: Vec<Point>) -> Result<StratumN> {
    let n = field.degree();
    let frob_all = frobenius_permutation(&all, &field)?;
    let lengths = frob_all.cycle_lengths();
    let mut new_index = alloc::vec![u32::MAX; all.len()];
    let mut points = Vec::new();
    for (i, p) in all.into_iter().enumerate() {
        if lengths[i] == u64::from(n) {
            new_index[i] = points.len() as u32;
            points.push(p);
        }
    }
    let frob = new_index
        .iter()
        .enumerate()
        .filter(|&(_, &ni)| ni != u32::MAX)
        .map(|(i, _)| new_index[frob_all.apply(i)])
        .collect();
    let frob = Permutation::from_vec_unchecked(frob);
    debug_assert!(frob.cycle_lengths().iter().all(|&l| l == u64::from(n)));
    Ok(StratumN {
        field,
        n,
        points,
        frob,
    })
}

/// `|X(F_{q^n})|`.
pub fn count_points(v: &VarietySpec, q: QSpec, n: u32, budget: u64) -> Result<u64> {
    let f = ExtField::with_budget(q.p, q.e, n, budget)?;
    Ok(enumerate_points(v, &f, budget)?.len() as u64)
}

/// `b_n = |X_n| / n` for `n = 1..=max_n`.
pub fn degree_census(v: &VarietySpec, q: QSpec, max_n: u32, budget: u64) -> Result<Vec<u64>> {
    (1..=max_n)
        .map(|n| {
            let s = exact_degree_stratum(v, q, n, budget)?;
            assert_eq!(
                s.points.len() as u64 % u64::from(n),
                0,
                "stratum size not divisible by n"
            );
            Ok(s.closed_points())
        })
        .collect()
}
