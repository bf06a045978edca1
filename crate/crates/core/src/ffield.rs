//! Arithmetic in `F_{q^n}` with `q = p^e`.
//!
//! An element is stored as a packed index: the base-`p` digits of the index
//! are the coefficients of the element in the power basis `1, θ, θ², …` where
//! `θ` is a root of the field modulus. Index order is the canonical element
//! order used for enumeration and for every "first element such that" search.
//!
//! The modulus is the lexicographically smallest monic irreducible polynomial
//! of degree `e·n` over `F_p`, coefficients compared from the constant term
//! upwards, so repeated construction always yields the same field.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::numtheory::{factorize, is_prime};

/// Default cap on the number of elements of a field we are willing to build.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest supported absolute degree `e·n`; `2^26` already exceeds the default budget.
pub const MAX_DEGREE: usize = 32;

/// Base field size `q = p^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QSpec {
    pub p: u64,
    pub e: u32,
}

impl QSpec {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidArgument(
                "field exponent must be positive".into(),
            ));
        }
        Ok(QSpec { p, e })
    }

    /// Parses a prime power `q` into `p^e`.
    pub fn from_q(q: u64) -> Result<Self> {
        let (p, e) = crate::numtheory::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Ok(QSpec { p, e })
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }
}

/// A field element, as a packed coefficient index. Only meaningful together
/// with the [`ExtField`] that produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

type Digits = [u64; MAX_DEGREE];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    e: u32,
    n: u32,
    k: usize,
    /// Monic modulus, `modulus[i]` is the coefficient of `x^i`, length `k + 1`.
    modulus: Vec<u64>,
    q: u64,
    size: u64,
    /// `frob_cols[j]` holds the digits of `(θ^j)^q`.
    frob_cols: Vec<Digits>,
    /// First non-square in canonical order (odd characteristic only).
    nonsquare: Option<Elem>,
}

impl ExtField {
    /// Builds `F_{q^n}` for `q = p^e` under the default budget.
    pub fn new(p: u64, e: u32, n: u32) -> Result<Self> {
        Self::with_budget(p, e, n, DEFAULT_BUDGET)
    }

    pub fn from_spec(q: QSpec, n: u32) -> Result<Self> {
        Self::with_budget(q.p, q.e, n, DEFAULT_BUDGET)
    }

    pub fn with_budget(p: u64, e: u32, n: u32, budget: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || n == 0 {
            return Err(Error::InvalidArgument(
                "field degrees must be positive".into(),
            ));
        }
        let k = (e as usize)
            .checked_mul(n as usize)
            .ok_or(Error::Overflow("field degree"))?;
        let needed = (p as u128).checked_pow(k as u32);
        match needed {
            Some(size) if size <= u128::from(budget) && k <= MAX_DEGREE => {}
            _ => {
                return Err(Error::BudgetExceeded {
                    needed: needed.unwrap_or(u128::MAX),
                    budget,
                })
            }
        }
        let size = p.pow(k as u32);
        let q = p.pow(e);
        let modulus = smallest_irreducible(p, k);
        let mut field = ExtField {
            p,
            e,
            n,
            k,
            modulus,
            q,
            size,
            frob_cols: Vec::new(),
            nonsquare: None,
        };
        let mut cols = Vec::with_capacity(k);
        for j in 0..k {
            let basis = field.pack_digits(&{
                let mut d = [0u64; MAX_DEGREE];
                d[j] = 1;
                d
            });
            let img = field.pow(basis, q);
            cols.push(field.digits(img));
        }
        field.frob_cols = cols;
        if p != 2 {
            field.nonsquare = (1..size)
                .map(Elem)
                .find(|&x| field.pow(x, (size - 1) / 2) != Elem::ONE);
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// `e` in `q = p^e`.
    pub fn base_exponent(&self) -> u32 {
        self.e
    }

    /// Extension degree over `F_q`.
    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Degree over the prime field, `e·n`.
    pub fn absolute_degree(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn qspec(&self) -> QSpec {
        QSpec {
            p: self.p,
            e: self.e,
        }
    }

    /// Number of elements, `q^n`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn digits(&self, x: Elem) -> Digits {
        let mut d = [0u64; MAX_DEGREE];
        let mut v = x.0;
        for slot in d.iter_mut().take(self.k) {
            *slot = v % self.p;
            v /= self.p;
        }
        d
    }

    fn pack_digits(&self, d: &[u64]) -> Elem {
        let mut v = 0u64;
        for &c in d[..self.k].iter().rev() {
            v = v * self.p + c;
        }
        Elem(v)
    }

    /// Coefficients in the power basis, constant term first.
    pub fn coeffs(&self, x: Elem) -> Vec<u64> {
        self.digits(x)[..self.k].to_vec()
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() > self.k {
            return Err(Error::InvalidArgument("too many coefficients".into()));
        }
        let mut d = [0u64; MAX_DEGREE];
        for (slot, &c) in d.iter_mut().zip(coeffs) {
            *slot = c % self.p;
        }
        Ok(self.pack_digits(&d))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u64)
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.size
    }

    pub fn elem(&self, x: Elem) -> FFElem<'_> {
        debug_assert!(self.contains(x));
        FFElem {
            field: self,
            raw: x,
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return Elem((a.0 + b.0) % self.p);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut d = [0u64; MAX_DEGREE];
        for i in 0..self.k {
            d[i] = (da[i] + db[i]) % self.p;
        }
        self.pack_digits(&d)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            return Elem((self.p - a.0) % self.p);
        }
        let da = self.digits(a);
        let mut d = [0u64; MAX_DEGREE];
        for i in 0..self.k {
            d[i] = (self.p - da[i]) % self.p;
        }
        self.pack_digits(&d)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p;
        if self.k == 1 {
            return Elem(((a.0 as u128 * b.0 as u128) % p as u128) as u64);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let k = self.k;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for top in (k..2 * k - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + j;
                prod[idx] = (prod[idx] + (p - c) * m) % p;
            }
            prod[top] = 0;
        }
        self.pack_digits(&prod[..k])
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        let mut result = Elem::ONE;
        let mut base = a;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(base, base);
            }
        }
        result
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.size - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The `q`-power Frobenius `x ↦ x^q`, applied as an `F_p`-linear map.
    pub fn frobenius_q(&self, x: Elem) -> Elem {
        if self.n == 1 {
            return x;
        }
        let p = self.p;
        let dx = self.digits(x);
        let mut d = [0u64; MAX_DEGREE];
        for (j, col) in self.frob_cols.iter().enumerate() {
            let c = dx[j];
            if c == 0 {
                continue;
            }
            for i in 0..self.k {
                d[i] = (d[i] + c * col[i]) % p;
            }
        }
        self.pack_digits(&d)
    }

    /// `x ↦ x^(q^times)`.
    pub fn frobenius_iter(&self, x: Elem, times: u32) -> Elem {
        let times = times % self.n;
        (0..times).fold(x, |y, _| self.frobenius_q(y))
    }

    /// Smallest `d ≥ 1` with `x^(q^d) = x`; the degree of the subfield `F_{q^d}` generated by `x`.
    pub fn frobenius_period(&self, x: Elem) -> u32 {
        let mut y = self.frobenius_q(x);
        let mut d = 1;
        while y != x {
            y = self.frobenius_q(y);
            d += 1;
        }
        d
    }

    pub fn multiplicative_order(&self, x: Elem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroOrder);
        }
        let group = self.size - 1;
        let mut m = group;
        for (prime, _) in factorize(group) {
            while m.is_multiple_of(prime) && self.pow(x, m / prime) == Elem::ONE {
                m /= prime;
            }
        }
        Ok(m)
    }

    /// First element, in canonical order, generating the multiplicative group.
    pub fn find_generator(&self) -> Elem {
        let group = self.size - 1;
        let primes: Vec<u64> = factorize(group).into_iter().map(|(p, _)| p).collect();
        (1..self.size)
            .map(Elem)
            .find(|&x| primes.iter().all(|&r| self.pow(x, group / r) != Elem::ONE))
            .expect("finite field has a cyclic multiplicative group")
    }

    /// Generator of `F_q^×` inside this field: `g^((q^n-1)/(q-1))` for the canonical generator `g`.
    pub fn base_generator(&self) -> Elem {
        let g = self.find_generator();
        self.pow(g, (self.size - 1) / (self.q - 1))
    }

    pub fn is_square(&self, x: Elem) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::UnsupportedCharacteristic(2));
        }
        if x.is_zero() {
            return Ok(true);
        }
        Ok(self.pow(x, (self.size - 1) / 2) == Elem::ONE)
    }

    /// A square root of `x` (Tonelli–Shanks), or `None` when `x` is not a square.
    pub fn sqrt(&self, x: Elem) -> Result<Option<Elem>> {
        if !self.is_square(x)? {
            return Ok(None);
        }
        if x.is_zero() {
            return Ok(Some(Elem::ZERO));
        }
        let group = self.size - 1;
        let s = group.trailing_zeros();
        let t = group >> s;
        let z = self
            .nonsquare
            .expect("odd characteristic field has a non-square");
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut tt = self.pow(x, t);
        let mut r = self.pow(x, t.div_ceil(2));
        while tt != Elem::ONE {
            let mut i = 0;
            let mut probe = tt;
            while probe != Elem::ONE {
                probe = self.square(probe);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.square(b);
            }
            m = i;
            c = self.square(b);
            tt = self.mul(tt, c);
            r = self.mul(r, b);
        }
        Ok(Some(r))
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + Clone {
        (0..self.size).map(Elem)
    }

    pub fn display(&self, x: Elem) -> ElemDisplay<'_> {
        ElemDisplay { field: self, x }
    }
}

pub struct ElemDisplay<'a> {
    field: &'a ExtField,
    x: Elem,
}

impl fmt::Display for ElemDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k == 1 {
            return write!(f, "{}", self.x.0);
        }
        let d = self.field.digits(self.x);
        let mut first = true;
        for i in (0..self.field.k).rev() {
            if d[i] == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (i, d[i]) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("t")?,
                (1, c) => write!(f, "{c}t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}t^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// An element bundled with its field, for operator-style arithmetic.
///
/// Operators panic when mixing fields; use [`field_arithmetic`] for the
/// checked form.
#[derive(Clone, Copy, Debug)]
pub struct FFElem<'a> {
    pub field: &'a ExtField,
    pub raw: Elem,
}

impl PartialEq for FFElem<'_> {
    fn eq(&self, other: &Self) -> bool {
        same_field(self.field, other.field) && self.raw == other.raw
    }
}

impl Eq for FFElem<'_> {}

fn same_field(a: &ExtField, b: &ExtField) -> bool {
    core::ptr::eq(a, b) || (a.p == b.p && a.e == b.e && a.n == b.n && a.modulus == b.modulus)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Exponent taken from the second operand's packed index.
    Pow,
}

/// Checked binary arithmetic between two field elements.
pub fn field_arithmetic<'a>(a: FFElem<'a>, b: FFElem<'a>, op: FieldOp) -> Result<FFElem<'a>> {
    if op != FieldOp::Pow && !same_field(a.field, b.field) {
        return Err(Error::FieldMismatch);
    }
    let f = a.field;
    let raw = match op {
        FieldOp::Add => f.add(a.raw, b.raw),
        FieldOp::Sub => f.sub(a.raw, b.raw),
        FieldOp::Mul => f.mul(a.raw, b.raw),
        FieldOp::Div => f.div(a.raw, b.raw)?,
        FieldOp::Pow => f.pow(a.raw, b.raw.0),
    };
    Ok(FFElem { field: f, raw })
}

impl<'a> FFElem<'a> {
    pub fn pow(self, exp: u64) -> Self {
        FFElem {
            field: self.field,
            raw: self.field.pow(self.raw, exp),
        }
    }

    pub fn inv(self) -> Result<Self> {
        Ok(FFElem {
            field: self.field,
            raw: self.field.inv(self.raw)?,
        })
    }

    pub fn frobenius(self) -> Self {
        FFElem {
            field: self.field,
            raw: self.field.frobenius_q(self.raw),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl<'a> $tr for FFElem<'a> {
            type Output = FFElem<'a>;
            fn $method(self, rhs: Self) -> Self::Output {
                assert!(same_field(self.field, rhs.field), "field mismatch");
                FFElem {
                    field: self.field,
                    raw: self.field.$method(self.raw, rhs.raw),
                }
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl<'a> Neg for FFElem<'a> {
    type Output = FFElem<'a>;
    fn neg(self) -> Self::Output {
        FFElem {
            field: self.field,
            raw: self.field.neg(self.raw),
        }
    }
}

// ---- polynomials over F_p, used only for the modulus search ----

fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u128 * lead_inv as u128 % p as u128) as u64;
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                let idx = shift + j;
                r[idx] = ((r[idx] as u128 + (p - c) as u128 * mj as u128) % p as u128) as u64;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            result = poly_mulmod(&result, &b, m, p);
        }
        exp >>= 1;
        if exp > 0 {
            b = poly_mulmod(&b, &b, m, p);
        }
    }
    result
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !poly_is_zero(&y) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or test: a degree-`k` polynomial is irreducible iff
/// `gcd(x^(p^i) - x, f) = 1` for every `1 ≤ i ≤ k/2`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = [0u64, 1];
    let mut h = poly_rem(&x, f, p);
    for _ in 0..k / 2 {
        h = poly_powmod(&h, p, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `k` over `F_p`,
/// comparing coefficient vectors from the constant term upwards.
pub fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    let total = (p as u128).pow(k as u32);
    let mut t: u128 = 0;
    while t < total {
        // constant term is the most significant digit of t
        let mut f = vec![0u64; k + 1];
        let mut v = t;
        for i in (0..k).rev() {
            f[i] = (v % p as u128) as u64;
            v /= p as u128;
        }
        f[k] = 1;
        if is_irreducible(&f, p) {
            return f;
        }
        t += 1;
    }
    unreachable!("irreducible polynomials exist in every degree")
}
