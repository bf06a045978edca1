//! Truncated big Witt vectors in Burnside coordinates: `b_n` counts orbits
//! of size `n`, ghost coordinates `c_n = Σ_{d|n} d·b_d` count fixed points
//! of the `n`-th power.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ffield::QSpec;
use crate::geometry::{degree_census, VarietySpec};
use crate::numtheory::{divisors, gcd, moebius};

/// Burnside coordinates `b_1..b_N`; negative entries are virtual classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVec {
    b: Vec<i64>,
}

/// Ghost coordinates `c_1..c_N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GhostVec {
    c: Vec<i64>,
}

impl WittVec {
    pub fn new(b: Vec<i64>) -> Self {
        WittVec { b }
    }

    pub fn zero(n: usize) -> Self {
        WittVec { b: vec![0; n] }
    }

    /// The class of a point.
    pub fn one(n: usize) -> Self {
        let mut w = Self::zero(n);
        if n > 0 {
            w.b[0] = 1;
        }
        w
    }

    /// A single orbit of size `k`.
    pub fn orbit(n: usize, k: usize) -> Self {
        let mut w = Self::zero(n);
        w.b[k - 1] = 1;
        w
    }

    pub fn truncation(&self) -> usize {
        self.b.len()
    }

    /// `b_n` for `1 ≤ n ≤ N`.
    pub fn get(&self, n: usize) -> i64 {
        self.b[n - 1]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.b
    }
}

impl GhostVec {
    pub fn new(c: Vec<i64>) -> Self {
        GhostVec { c }
    }

    pub fn truncation(&self) -> usize {
        self.c.len()
    }

    pub fn get(&self, n: usize) -> i64 {
        self.c[n - 1]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.c
    }
}

fn overflow() -> Error {
    Error::Overflow("witt arithmetic")
}

pub fn ghost_of(w: &WittVec) -> Result<GhostVec> {
    let n = w.truncation();
    let mut c = vec![0i64; n];
    for (i, slot) in c.iter_mut().enumerate() {
        let k = i as u64 + 1;
        for d in divisors(k) {
            let term = (d as i64)
                .checked_mul(w.get(d as usize))
                .ok_or_else(overflow)?;
            *slot = slot.checked_add(term).ok_or_else(overflow)?;
        }
    }
    Ok(GhostVec { c })
}

/// Möbius inversion `n·b_n = Σ_{d|n} μ(n/d)·c_d`, failing at the first
/// `n` where the sum is not divisible by `n`.
pub fn from_ghost(g: &GhostVec) -> Result<WittVec> {
    let n = g.truncation();
    let mut b = vec![0i64; n];
    for (i, slot) in b.iter_mut().enumerate() {
        let k = i as u64 + 1;
        let mut sum: i128 = 0;
        for d in divisors(k) {
            sum += i128::from(moebius(k / d)) * i128::from(g.get(d as usize));
        }
        if sum % i128::from(k) != 0 {
            return Err(Error::NonIntegral(k as usize));
        }
        *slot = i64::try_from(sum / i128::from(k)).map_err(|_| overflow())?;
    }
    Ok(WittVec { b })
}

fn same_truncation(u: &WittVec, v: &WittVec) -> Result<usize> {
    if u.truncation() != v.truncation() {
        return Err(Error::TruncationMismatch(u.truncation(), v.truncation()));
    }
    Ok(u.truncation())
}

/// Disjoint union: componentwise sum.
pub fn witt_add(u: &WittVec, v: &WittVec) -> Result<WittVec> {
    same_truncation(u, v)?;
    let b =
        u.b.iter()
            .zip(&v.b)
            .map(|(x, y)| x.checked_add(*y).ok_or_else(overflow))
            .collect::<Result<_>>()?;
    Ok(WittVec { b })
}

/// Product of orbit sets: an orbit of size `i` times one of size `j` is
/// `gcd(i, j)` orbits of size `lcm(i, j)`. Products landing beyond the
/// truncation are dropped.
pub fn witt_mul(u: &WittVec, v: &WittVec) -> Result<WittVec> {
    let n = same_truncation(u, v)?;
    let mut b = vec![0i64; n];
    for i in 1..=n {
        if u.get(i) == 0 {
            continue;
        }
        for j in 1..=n {
            if v.get(j) == 0 {
                continue;
            }
            let g = gcd(i as u64, j as u64) as usize;
            let l = i / g * j;
            if l > n {
                continue;
            }
            let term = u
                .get(i)
                .checked_mul(v.get(j))
                .and_then(|t| t.checked_mul(g as i64))
                .ok_or_else(overflow)?;
            b[l - 1] = b[l - 1].checked_add(term).ok_or_else(overflow)?;
        }
    }
    Ok(WittVec { b })
}

/// Burnside coordinates of `X(k̄)`: the degree census `b_n = |X_n|/n`.
pub fn burnside_of_variety(v: &VarietySpec, q: QSpec, max_n: u32, budget: u64) -> Result<WittVec> {
    let b = degree_census(v, q, max_n, budget)?
        .into_iter()
        .map(|x| i64::try_from(x).map_err(|_| overflow()))
        .collect::<Result<_>>()?;
    Ok(WittVec { b })
}

/// A power series truncated after `t^T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series keeps at least the constant term"
        );
        IntSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = BigInt::one();
        IntSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntSeries::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Highest retained power `T`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Product truncated to the smaller order.
    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let t = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); t + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(t + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(t + 1 - i) {
                out[i + j] += a * b;
            }
        }
        IntSeries { coeffs: out }
    }

    /// Multiplies in place by `(1 - t^n)^(-e)` for any integer `e`.
    fn mul_euler_factor(&mut self, n: usize, e: i64) {
        if e == 0 {
            return;
        }
        let t = self.order();
        let mut factor = vec![BigInt::zero(); t / n + 1];
        factor[0] = BigInt::one();
        for k in 1..factor.len() {
            // C(e+k-1, k) = C(e+k-2, k-1)·(e+k-1)/k, exact for every integer e
            let next = &factor[k - 1] * BigInt::from(e + k as i64 - 1);
            factor[k] = next / BigInt::from(k);
        }
        let mut out = vec![BigInt::zero(); t + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, f) in factor.iter().enumerate() {
                let idx = i + k * n;
                if idx > t {
                    break;
                }
                out[idx] += a * f;
            }
        }
        self.coeffs = out;
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// `∏_{n ≤ N} (1 - t^n)^(-b_n)` up to `t^T`.
pub fn zeta_from_witt(w: &WittVec, order: usize) -> Result<IntSeries> {
    if order > w.truncation() {
        return Err(Error::TruncationMismatch(order, w.truncation()));
    }
    let mut z = IntSeries::one(order);
    for n in 1..=order {
        z.mul_euler_factor(n, w.get(n));
    }
    Ok(z)
}

/// `exp(Σ c_n t^n / n)` up to `t^T`, via `n·z_n = Σ_{k=1}^{n} c_k z_{n-k}`;
/// fails at the first coefficient that is not an integer.
pub fn zeta_exp_form(counts: &[i64], order: usize) -> Result<IntSeries> {
    if order > counts.len() {
        return Err(Error::TruncationMismatch(order, counts.len()));
    }
    let mut z: Vec<BigInt> = Vec::with_capacity(order + 1);
    z.push(BigInt::one());
    for n in 1..=order {
        let mut sum = BigInt::zero();
        for k in 1..=n {
            sum += BigInt::from(counts[k - 1]) * &z[n - k];
        }
        let n_big = BigInt::from(n);
        if !(&sum % &n_big).is_zero() {
            return Err(Error::NonIntegral(n));
        }
        z.push(sum / n_big);
    }
    Ok(IntSeries { coeffs: z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::DEFAULT_BUDGET;
    use proptest::prelude::*;

    fn w(b: &[i64]) -> WittVec {
        WittVec::new(b.to_vec())
    }

    #[test]
    fn ghost_examples() {
        assert_eq!(ghost_of(&WittVec::one(5)).unwrap().as_slice(), &[1; 5]);
        assert_eq!(
            ghost_of(&WittVec::orbit(4, 2)).unwrap().as_slice(),
            &[0, 2, 0, 2]
        );
        assert_eq!(
            ghost_of(&w(&[2, 1, 2, 3])).unwrap().as_slice(),
            &[2, 4, 8, 16]
        );
        assert_eq!(
            from_ghost(&GhostVec::new(vec![1; 6])).unwrap(),
            WittVec::one(6)
        );
        assert_eq!(
            from_ghost(&GhostVec::new(vec![2, 4, 8, 16])).unwrap(),
            w(&[2, 1, 2, 3])
        );
        assert_eq!(
            from_ghost(&GhostVec::new(vec![1, 2])),
            Err(Error::NonIntegral(2))
        );
        assert_eq!(
            ghost_of(&w(&[i64::MAX, i64::MAX])),
            Err(Error::Overflow("witt arithmetic"))
        );
    }

    #[test]
    fn ring_examples() {
        let u = w(&[3, -1, 4, 1]);
        assert_eq!(witt_add(&u, &WittVec::zero(4)).unwrap(), u);
        assert_eq!(
            witt_add(&WittVec::one(3), &WittVec::one(3)).unwrap(),
            w(&[2, 0, 0])
        );
        assert_eq!(
            witt_mul(&WittVec::orbit(4, 2), &WittVec::orbit(4, 2)).unwrap(),
            w(&[0, 2, 0, 0])
        );
        assert_eq!(
            witt_mul(&WittVec::orbit(6, 2), &WittVec::orbit(6, 3)).unwrap(),
            WittVec::orbit(6, 6)
        );
        assert_eq!(
            witt_mul(&WittVec::orbit(5, 2), &WittVec::orbit(5, 3)).unwrap(),
            WittVec::zero(5)
        );
        assert_eq!(witt_mul(&WittVec::one(4), &u).unwrap(), u);
        assert_eq!(
            witt_add(&u, &WittVec::one(3)),
            Err(Error::TruncationMismatch(4, 3))
        );
    }

    #[test]
    fn burnside_examples() {
        let q2 = QSpec::from_q(2).unwrap();
        let q3 = QSpec::from_q(3).unwrap();
        assert_eq!(
            burnside_of_variety(&VarietySpec::point(), q3, 4, DEFAULT_BUDGET).unwrap(),
            WittVec::one(4)
        );
        assert_eq!(
            burnside_of_variety(&VarietySpec::affine_line(), q2, 4, DEFAULT_BUDGET).unwrap(),
            w(&[2, 1, 2, 3])
        );
        assert_eq!(
            burnside_of_variety(&VarietySpec::ProjectiveLine, q3, 3, DEFAULT_BUDGET).unwrap(),
            w(&[4, 3, 8])
        );
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(
            zeta_from_witt(&WittVec::one(5), 5).unwrap(),
            IntSeries::from_i64(&[1; 6])
        );
        assert_eq!(
            zeta_from_witt(&w(&[4, 3, 8]), 3).unwrap(),
            IntSeries::from_i64(&[1, 4, 13, 40])
        );
        assert_eq!(
            zeta_from_witt(&WittVec::zero(4), 4).unwrap(),
            IntSeries::one(4)
        );
        assert!(zeta_from_witt(&WittVec::zero(2), 3).is_err());
        assert_eq!(
            zeta_exp_form(&[1; 5], 5).unwrap(),
            IntSeries::from_i64(&[1; 6])
        );
        assert_eq!(
            zeta_exp_form(&[4, 10, 28], 3).unwrap(),
            IntSeries::from_i64(&[1, 4, 13, 40])
        );
        assert_eq!(
            zeta_exp_form(&[5, 25, 125], 3).unwrap(),
            IntSeries::from_i64(&[1, 5, 25, 125])
        );
        assert_eq!(zeta_exp_form(&[1, 2], 2), Err(Error::NonIntegral(2)));
        // a virtual class: -point has zeta 1 - t
        assert_eq!(
            zeta_from_witt(&w(&[-1, 0, 0]), 3).unwrap(),
            IntSeries::from_i64(&[1, -1, 0, 0])
        );
    }

    #[test]
    fn zeta_coefficients_grow_past_u64() {
        let big = w(&[1_000_000_000; 12]);
        let z = zeta_from_witt(&big, 12).unwrap();
        let via_exp = zeta_exp_form(ghost_of(&big).unwrap().as_slice(), 12).unwrap();
        assert_eq!(z, via_exp);
        assert!(z.coeffs()[12] > BigInt::from(u64::MAX));
    }

    fn witt_vec(n: usize) -> impl Strategy<Value = WittVec> {
        proptest::collection::vec(-9i64..=9, n).prop_map(WittVec::new)
    }

    proptest! {
        #[test]
        fn ghost_is_a_ring_map(u in witt_vec(24), v in witt_vec(24)) {
            let (gu, gv) = (ghost_of(&u).unwrap(), ghost_of(&v).unwrap());
            let sum = ghost_of(&witt_add(&u, &v).unwrap()).unwrap();
            let prod = ghost_of(&witt_mul(&u, &v).unwrap()).unwrap();
            for n in 1..=24 {
                prop_assert_eq!(sum.get(n), gu.get(n) + gv.get(n));
                prop_assert_eq!(prod.get(n), gu.get(n) * gv.get(n));
            }
            prop_assert_eq!(from_ghost(&gu).unwrap(), u);
        }

        #[test]
        fn zeta_is_additive(u in witt_vec(10), v in witt_vec(10)) {
            let lhs = zeta_from_witt(&u, 10).unwrap().mul(&zeta_from_witt(&v, 10).unwrap());
            prop_assert_eq!(lhs, zeta_from_witt(&witt_add(&u, &v).unwrap(), 10).unwrap());
        }

        #[test]
        fn presentations_agree(u in proptest::collection::vec(0i64..=9, 10).prop_map(WittVec::new)) {
            let g = ghost_of(&u).unwrap();
            prop_assert_eq!(zeta_exp_form(g.as_slice(), 10).unwrap(), zeta_from_witt(&u, 10).unwrap());
        }
    }
}
