//! Joint Frobenius/automorphism orbits on free `Z/n`-sets and the
//! `Z/2 ⊕ Z/n` class `(sign, twist)` they determine.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::ffield::{ExtField, QSpec};
use crate::geometry::{
    apply_automorphism, enumerate_points, stratum_from_points, validate_automorphism,
    AutomorphismSpec, StratumN, VarietySpec,
};
use crate::numtheory::{divisors, gcd, ord2, prime_power};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct K1Class {
    pub n: u64,
    /// `+1` or `-1`.
    pub sign: i8,
    /// Residue in `[0, n)`.
    pub twist: u64,
}

impl K1Class {
    pub fn new(n: u64, sign: i8, twist: i64) -> Self {
        assert!(n >= 1, "K1Class: n must be positive");
        assert!(sign == 1 || sign == -1, "K1Class: sign must be ±1");
        K1Class {
            n,
            sign,
            twist: twist.rem_euclid(n as i64) as u64,
        }
    }

    pub fn identity(n: u64) -> Self {
        K1Class::new(n, 1, 0)
    }

    /// Group law: signs multiply, twists add.
    pub fn combine(self, other: K1Class) -> K1Class {
        assert_eq!(self.n, other.n, "combining classes of different n");
        K1Class {
            n: self.n,
            sign: self.sign * other.sign,
            twist: (self.twist + other.twist) % self.n,
        }
    }
}

impl fmt::Display for K1Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+}, {} mod {})", self.sign, self.twist, self.n)
    }
}

/// A finite set with a free `Z/n`-action, given by the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeZnSet {
    n: u64,
    frob: Permutation,
    /// Orbit index of every point.
    orbit: Vec<u32>,
    orbit_count: usize,
}

impl FreeZnSet {
    pub fn new(n: u64, frob: Permutation) -> Result<Self> {
        assert!(n >= 1, "FreeZnSet: n must be positive");
        let mut orbit = vec![u32::MAX; frob.len()];
        let cycles = frob.cycle_starts();
        for (k, &(start, len)) in cycles.iter().enumerate() {
            if len as u64 != n {
                return Err(Error::NotFreeZnSet {
                    n,
                    point: start,
                    len: len as u64,
                });
            }
            let mut x = start;
            for _ in 0..len {
                orbit[x] = k as u32;
                x = frob.apply(x);
            }
        }
        Ok(FreeZnSet {
            n,
            frob,
            orbit,
            orbit_count: cycles.len(),
        })
    }

    pub fn from_stratum(s: &StratumN) -> Self {
        FreeZnSet::new(u64::from(s.n), s.frob.clone()).expect("strata are free")
    }

    /// `k` orbits of size `n`, point `(o, i)` stored at `o·n + i`, generator `i ↦ i+1`.
    pub fn standard(n: u64, k: usize) -> Self {
        let n_us = n as usize;
        let map = (0..k * n_us)
            .map(|x| ((x / n_us) * n_us + (x % n_us + 1) % n_us) as u32)
            .collect();
        FreeZnSet::new(n, Permutation::from_vec_unchecked(map)).expect("standard set is free")
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.frob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frob.is_empty()
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_count
    }

    pub fn generator(&self) -> &Permutation {
        &self.frob
    }

    pub fn disjoint_union(&self, other: &FreeZnSet) -> FreeZnSet {
        assert_eq!(self.n, other.n);
        FreeZnSet::new(self.n, self.frob.disjoint_union(&other.frob))
            .expect("union of free sets is free")
    }

    /// Smallest `a ≥ 0` with `frob^a(x) = y`, if `y` is in the orbit of `x`.
    fn frob_distance(&self, x: usize, y: usize) -> Option<u64> {
        if self.orbit[x] != self.orbit[y] {
            return None;
        }
        let mut cur = x;
        for a in 0..self.n {
            if cur == y {
                return Some(a);
            }
            cur = self.frob.apply(cur);
        }
        unreachable!("point in the same orbit must be reached within n steps")
    }

    /// Walks the cycles of the permutation induced by `phi` on orbits,
    /// reporting `(d, a)` for each: cycle length and twist.
    fn orbit_cycles(&self, phi: &Permutation) -> Result<Vec<(u64, u64)>> {
        assert_eq!(
            phi.len(),
            self.len(),
            "permutation size does not match the set"
        );
        if let Some(i) = phi.commutation_defect(&self.frob) {
            return Err(Error::CommutationViolation(i));
        }
        let mut seen = vec![false; self.orbit_count];
        let mut base = vec![usize::MAX; self.orbit_count];
        for x in 0..self.len() {
            let o = self.orbit[x] as usize;
            if base[o] == usize::MAX {
                base[o] = x;
            }
        }
        let mut out = Vec::new();
        for o in 0..self.orbit_count {
            if seen[o] {
                continue;
            }
            let x = base[o];
            let mut y = x;
            let mut d = 0u64;
            loop {
                seen[self.orbit[y] as usize] = true;
                y = phi.apply(y);
                d += 1;
                if self.orbit[y] as usize == o {
                    break;
                }
            }
            let a = self
                .frob_distance(x, y)
                .expect("cycle returns to the base orbit");
            out.push((d, a));
        }
        Ok(out)
    }
}

/// The class of `phi`: sign `∏ (-1)^(d+1)` and twist `Σ a` over the cycles
/// of `phi` on Frobenius orbits.
pub fn k1_class(s: &FreeZnSet, phi: &Permutation) -> Result<K1Class> {
    let cycles = s.orbit_cycles(phi)?;
    let odd = cycles.iter().filter(|&&(d, _)| d % 2 == 0).count() % 2;
    let twist = cycles.iter().fold(0u64, |acc, &(_, a)| (acc + a) % s.n);
    Ok(K1Class {
        n: s.n,
        sign: if odd == 1 { -1 } else { 1 },
        twist,
    })
}

pub fn k1_class_of_stratum(s: &StratumN, phi: &Permutation) -> Result<K1Class> {
    k1_class(&FreeZnSet::from_stratum(s), phi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCensus {
    pub n: u64,
    /// Order of the automorphism on the set.
    pub m: u64,
    /// Number of joint orbits of each type `(d, a)`.
    pub counts: BTreeMap<(u64, u64), u64>,
}

impl OrbitCensus {
    pub fn count(&self, d: u64, a: u64) -> u64 {
        self.counts.get(&(d, a)).copied().unwrap_or(0)
    }

    /// Total number of points, `Σ count·d·n`.
    pub fn points(&self) -> u64 {
        self.counts.iter().map(|(&(d, _), &c)| c * d * self.n).sum()
    }
}

/// Joint orbit types, requiring `phi` to act freely with order `m`.
pub fn orbit_census(s: &FreeZnSet, phi: &Permutation) -> Result<OrbitCensus> {
    let m = phi.order()?;
    for (start, len) in phi.cycle_starts() {
        if len as u64 != m {
            return Err(Error::NotFree {
                point: start,
                period: len as u64,
                order: m,
            });
        }
    }
    let mut counts = BTreeMap::new();
    for (d, a) in s.orbit_cycles(phi)? {
        debug_assert!(m % d == 0 && m / d == s.n / gcd(s.n, a));
        *counts.entry((d, a)).or_insert(0) += 1;
    }
    Ok(OrbitCensus { n: s.n, m, counts })
}

pub fn census_to_class(c: &OrbitCensus) -> K1Class {
    let mut sign = 1i8;
    let mut twist = 0u64;
    for (&(d, a), &count) in &c.counts {
        if (d + 1) % 2 == 1 && count % 2 == 1 {
            sign = -sign;
        }
        twist = (twist + (count % c.n) * a) % c.n;
    }
    K1Class {
        n: c.n,
        sign,
        twist,
    }
}

/// `ψ_n(X, φ)`: the class of `φ` on the exact-degree stratum `X_n`.
pub fn psi(
    v: &VarietySpec,
    a: &AutomorphismSpec,
    q: QSpec,
    n: u32,
    budget: u64,
) -> Result<K1Class> {
    let field = ExtField::with_budget(q.p, q.e, n, budget)?;
    validate_automorphism(v, a, &field)?;
    let s = stratum_from_points(field.clone(), enumerate_points(v, &field, budget)?)?;
    let phi = apply_automorphism(v, a, &s)?;
    k1_class_of_stratum(&s, &phi)
}

/// `ψ_n(P¹, -x)` in closed form.
pub fn closed_form_calc(q: u64, n: u64) -> Result<K1Class> {
    assert!(n >= 1, "closed_form_calc: n must be positive");
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if p == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    let h = (q - 1) / 2;
    let sign = if h.is_multiple_of(2) { 1 } else { -1 };
    Ok(match n {
        1 => K1Class::new(1, sign, 0),
        2 => K1Class::new(2, sign, (h % 2) as i64),
        _ => K1Class::identity(n),
    })
}

/// The numbers `P_d` of a projective-line scaling census, keyed by
/// `d | gcd(n, m)`: `P_1 = #(m, 0)` and `P_d = #(m/d, n/d)`.
///
/// Checks that every type has the form `(m/d, a)` with `gcd(a, n) = n/d` and
/// that all such `a` share one count.
pub fn scaling_profile(c: &OrbitCensus) -> Result<BTreeMap<u64, u64>> {
    let g = gcd(c.n, c.m);
    let mut out = BTreeMap::new();
    for &(dd, a) in c.counts.keys() {
        let d = c.n / gcd(c.n, a);
        if !g.is_multiple_of(d) || dd * d != c.m {
            return Err(Error::NotScalingShape(alloc::format!(
                "type ({dd}, {a}) with n = {}, m = {}",
                c.n,
                c.m
            )));
        }
    }
    for d in divisors(g) {
        let step = c.n / d;
        let p = c.count(c.m / d, step % c.n);
        for a in (0..c.n).filter(|&a| c.n / gcd(c.n, a) == d) {
            if c.count(c.m / d, a) != p {
                return Err(Error::NotScalingShape(alloc::format!(
                    "types ({}, {}) and ({}, {a}) have different counts",
                    c.m / d,
                    step % c.n,
                    c.m / d
                )));
            }
        }
        out.insert(d, p);
    }
    Ok(out)
}

/// The scaling reduction exactly as stated for `P¹` with `x ↦ λx`:
/// sign `(-1)^(P_1(m+1) + P_2(m/2+1))`, twist `Σ_{d | (n,m)} P_d φ(d) n/d`.
///
/// The twist term counts every type at level `d` as `a = n/d`; the actual
/// residues are the multiples `u·n/d` with `u` a unit mod `d`, so for `d ≥ 3`
/// this disagrees with [`census_to_class`]. See [`scaling_reduction_exact`].
pub fn su_special_reduction(c: &OrbitCensus) -> Result<K1Class> {
    let profile = scaling_profile(c)?;
    let p = |d: u64| profile.get(&d).copied().unwrap_or(0);
    let mut exponent = p(1) % 2 * ((c.m + 1) % 2);
    if c.m.is_multiple_of(2) && c.n.is_multiple_of(2) {
        exponent += p(2) % 2 * ((c.m / 2 + 1) % 2);
    }
    let mut twist = 0u128;
    for (&d, &pd) in &profile {
        twist += u128::from(pd) * u128::from(crate::numtheory::euler_phi(d)) * u128::from(c.n / d);
    }
    let sign = if exponent.is_multiple_of(2) { 1 } else { -1 };
    Ok(K1Class {
        n: c.n,
        sign,
        twist: (twist % u128::from(c.n)) as u64,
    })
}

/// The scaling reduction with each level-`d` type weighted by its own
/// residue: twist `Σ_d P_d Σ_{u ∈ (Z/d)^×} u·n/d`, which collapses to
/// `P_2·n/2`.
pub fn scaling_reduction_exact(c: &OrbitCensus) -> Result<K1Class> {
    let profile = scaling_profile(c)?;
    let literal = su_special_reduction(c)?;
    let mut twist = 0u128;
    for (&d, &pd) in &profile {
        let unit_sum: u128 = (1..=d).filter(|&u| gcd(u, d) == 1).map(u128::from).sum();
        twist += u128::from(pd) * (unit_sum % u128::from(d)) * u128::from(c.n / d);
    }
    Ok(K1Class {
        twist: (twist % u128::from(c.n)) as u64,
        ..literal
    })
}

/// Predicted `P_{2^(ℓ-r)}` for `λ` a generator of the 2-Sylow of `F_q^×`,
/// where `ℓ = ord2(q-1)`.
pub fn genroot_predicted_p(q: u64, r: u32) -> Result<u64> {
    let l = ord2(q - 1);
    if l == 0 || r > l {
        return Err(Error::InvalidArgument(alloc::format!(
            "need 0 <= r <= ord2(q-1) = {l} with q odd"
        )));
    }
    if r == 0 {
        return Ok((q - 1) >> l);
    }
    let qq = u128::from(q)
        .checked_pow(1 << (r - 1))
        .ok_or(Error::Overflow("genroot_predicted_p"))?;
    let num = (qq - 1)
        .checked_mul(qq - 1)
        .ok_or(Error::Overflow("genroot_predicted_p"))?;
    let den = 1u128 << (l + r);
    if num % den != 0 {
        return Err(Error::NonIntegral(r as usize));
    }
    u64::try_from(num / den).map_err(|_| Error::Overflow("genroot_predicted_p"))
}

/// `((-1)^(b_n), 0)` for `n = 1..=N`.
pub fn mult_of_eta_profile(b: &[u64], max_n: usize) -> Vec<K1Class> {
    (1..=max_n)
        .map(|n| {
            let bn = b.get(n - 1).copied().unwrap_or(0);
            K1Class::new(n as u64, if bn % 2 == 0 { 1 } else { -1 }, 0)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    NonPermutativeCertified,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NonPermutativeCertified => "non-permutative (certified)",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

pub fn permutativity_verdict(classes: &[K1Class]) -> Verdict {
    if classes.iter().any(|c| c.twist != 0) {
        Verdict::NonPermutativeCertified
    } else {
        Verdict::Inconclusive
    }
}
