//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p dzeta-core --test acceptance`. Pass `--ignored`
//! (or set `DZETA_STRETCH=1`) to add the large stretch case.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use dzeta_core::assembler::{
    box_product, example_square, k0, remove_sieve, s_asm, smash_product, AbelianGroup, Policy,
};
use dzeta_core::ffield::{QSpec, DEFAULT_BUDGET};
use dzeta_core::geometry::{
    apply_automorphism, count_points, degree_census, exact_degree_stratum, AutomorphismSpec,
    Scalar, StratumN, VarietySpec,
};
use dzeta_core::numtheory::{gcd, necklace_count};
use dzeta_core::orbits::{
    census_to_class, closed_form_calc, genroot_predicted_p, k1_class, k1_class_of_stratum,
    mult_of_eta_profile, orbit_census, permutativity_verdict, psi, scaling_profile,
    su_special_reduction, FreeZnSet, K1Class, OrbitCensus, Verdict,
};
use dzeta_core::perm::Permutation;
use dzeta_core::witt::{
    burnside_of_variety, from_ghost, ghost_of, witt_add, witt_mul, zeta_exp_form, zeta_from_witt,
    IntSeries, WittVec,
};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn q(v: u64) -> QSpec {
    QSpec::from_q(v).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p1() -> VarietySpec {
    VarietySpec::ProjectiveLine
}

fn psi_of(v: &VarietySpec, a: &AutomorphismSpec, qq: u64, n: u32) -> Result<K1Class, String> {
    psi(v, a, q(qq), n, DEFAULT_BUDGET).map_err(|e| format!("psi q={qq} n={n}: {e}"))
}

fn stratum(v: &VarietySpec, qq: u64, n: u32) -> StratumN {
    exact_degree_stratum(v, q(qq), n, DEFAULT_BUDGET).unwrap()
}

fn census_of(s: &StratumN, phi: &Permutation) -> Result<OrbitCensus, String> {
    orbit_census(&FreeZnSet::from_stratum(s), phi).map_err(|e| e.to_string())
}

fn closed_form_reproduction() -> Outcome {
    let mut cases = 0;
    for qq in [3u64, 5, 7, 11, 13] {
        for n in 1..=4u32 {
            if qq.pow(n) > 1_000_000 {
                continue;
            }
            let brute = psi_of(&p1(), &AutomorphismSpec::scale(-1), qq, n)?;
            let closed = closed_form_calc(qq, u64::from(n)).map_err(|e| e.to_string())?;
            ensure(brute == closed, || {
                format!("q={qq} n={n}: brute {brute} vs closed form {closed}")
            })?;
            cases += 1;
        }
    }
    for (qq, n, sign, twist) in [(3, 2, -1, 1), (7, 2, -1, 1), (5, 2, 1, 0), (7, 3, 1, 0)] {
        let got = psi_of(&p1(), &AutomorphismSpec::scale(-1), qq, n)?;
        let want = K1Class::new(u64::from(n), sign, twist);
        ensure(got == want, || {
            format!("pinned q={qq} n={n}: {got} vs {want}")
        })?;
    }
    for qq in [3u64, 7, 11] {
        let profile = (1..=4)
            .map(|n| psi_of(&p1(), &AutomorphismSpec::scale(-1), qq, n))
            .collect::<Result<Vec<_>, _>>()?;
        ensure(
            permutativity_verdict(&profile) == Verdict::NonPermutativeCertified,
            || format!("q={qq}: verdict not certified"),
        )?;
    }
    Ok(format!(
        "{cases} (q, n) cases agree, 4 pinned values, q = 3, 7, 11 certified"
    ))
}

/// The nonzero elements of `F_q` as scalars: integers for prime `q`, powers
/// of the base generator otherwise.
fn units(qq: u64) -> Vec<Scalar> {
    let spec = q(qq);
    if spec.e == 1 {
        (1..qq as i64).map(Scalar::Int).collect()
    } else {
        (0..qq - 1).map(Scalar::BaseGenPow).collect()
    }
}

struct SuCase {
    label: String,
    brute: K1Class,
    census: Option<(K1Class, K1Class, bool)>,
}

fn su_case(s: &StratumN, qq: u64, lambda: &Scalar) -> Result<SuCase, String> {
    let a = AutomorphismSpec::Scale {
        lambda: lambda.clone(),
    };
    let phi = apply_automorphism(&p1(), &a, s).map_err(|e| e.to_string())?;
    let brute = k1_class_of_stratum(s, &phi).map_err(|e| e.to_string())?;
    let label = format!("q={qq} λ={lambda:?} n={}", s.n);
    if s.n == 1 && phi != Permutation::identity(phi.len()) {
        return Ok(SuCase {
            label,
            brute,
            census: None,
        });
    }
    let c = census_of(s, &phi)?;
    let from_census = census_to_class(&c);
    let literal = su_special_reduction(&c).map_err(|e| format!("{label}: {e}"))?;
    let mut balanced = true;
    for &(d, _) in c.counts.keys() {
        let level: Vec<u64> = (0..c.n)
            .filter(|&a| c.n / gcd(c.n, a) == c.m / d)
            .map(|a| c.count(d, a))
            .collect();
        balanced &= level.windows(2).all(|w| w[0] == w[1]);
    }
    Ok(SuCase {
        label,
        brute,
        census: Some((from_census, literal, balanced)),
    })
}

fn su_special_equivalence() -> Outcome {
    let mut cases = Vec::new();
    for qq in [3u64, 5, 7, 9, 11, 13] {
        for n in 1..=6u32 {
            if qq.pow(n) > 10_000_000 {
                continue;
            }
            let s = stratum(&p1(), qq, n);
            let batch = units(qq)
                .par_iter()
                .map(|l| su_case(&s, qq, l))
                .collect::<Result<Vec<_>, _>>()?;
            cases.extend(batch);
        }
    }
    let skipped = cases.iter().filter(|c| c.census.is_none()).count();
    let mut census_bad = Vec::new();
    let mut literal_bad = Vec::new();
    let mut unbalanced = Vec::new();
    for c in &cases {
        let Some((from_census, literal, balanced)) = c.census else {
            continue;
        };
        if from_census != c.brute {
            census_bad.push(format!(
                "{}: census {from_census} vs brute {}",
                c.label, c.brute
            ));
        }
        if literal != c.brute {
            literal_bad.push(format!(
                "{}: formula {literal} vs brute {}",
                c.label, c.brute
            ));
        }
        if !balanced {
            unbalanced.push(c.label.clone());
        }
    }
    let checked = cases.len() - skipped;
    let summary = format!(
        "{checked} cases with a census ({skipped} with n=1, λ≠1 have fixed points and no census); \
         census≠brute: {}, formula≠brute: {}, unequal counts: {}",
        census_bad.len(),
        literal_bad.len(),
        unbalanced.len()
    );
    if census_bad.is_empty() && literal_bad.is_empty() && unbalanced.is_empty() {
        return Ok(summary);
    }
    let examples: Vec<&String> = census_bad
        .iter()
        .chain(&literal_bad)
        .chain(&unbalanced)
        .take(4)
        .collect();
    Err(format!("{summary}; e.g. {examples:?}"))
}

/// Scaling census of `P¹` under `x ↦ λx` on the degree-`n` stratum, with the
/// brute class and the formula's class.
fn genroot_case(qq: u64, lambda: Scalar, n: u32, ell: u32) -> Outcome {
    let s = stratum(&p1(), qq, n);
    let a = AutomorphismSpec::Scale { lambda };
    let phi = apply_automorphism(&p1(), &a, &s).map_err(|e| e.to_string())?;
    let c = census_of(&s, &phi)?;
    let profile = scaling_profile(&c).map_err(|e| e.to_string())?;
    let mut shown = Vec::new();
    for r in 0..=ell {
        let d = 1u64 << (ell - r);
        let census_p = profile.get(&d).copied().unwrap_or(0);
        let predicted = genroot_predicted_p(qq, r).map_err(|e| e.to_string())?;
        ensure(census_p == predicted, || {
            format!("q={qq}: P_{d} census {census_p} vs predicted {predicted}")
        })?;
        shown.push(format!("P_{d}={census_p}"));
    }
    let brute = k1_class_of_stratum(&s, &phi).map_err(|e| e.to_string())?;
    let formula = su_special_reduction(&c).map_err(|e| e.to_string())?;
    let expected = K1Class::new(u64::from(n), 1, i64::from(n / 2));
    let verdict = permutativity_verdict(&[brute]);
    ensure(
        brute == expected && verdict == Verdict::NonPermutativeCertified,
        || {
            format!(
            "q={qq} {}: psi_{n} brute {brute}, expected {expected} (formula gives {formula}), verdict {verdict}",
            shown.join(" ")
        )
        },
    )?;
    Ok(format!(
        "q={qq} {} psi_{n}={brute} certified",
        shown.join(" ")
    ))
}

fn genroot() -> Outcome {
    let a = genroot_case(5, Scalar::Int(2), 4, 2);
    let b = genroot_case(13, Scalar::Int(5), 4, 2);
    match (a, b) {
        (Ok(a), Ok(b)) => Ok(format!("{a}; {b}")),
        (a, b) => Err(format!(
            "{}; {}",
            a.unwrap_or_else(|e| e),
            b.unwrap_or_else(|e| e)
        )),
    }
}

fn genroot_stretch() -> Outcome {
    genroot_case(9, Scalar::BaseGenPow(1), 8, 3)
}

const BASE: u64 = 5;

fn elliptic() -> Outcome {
    let e = VarietySpec::weierstrass(1, 0);
    let et = VarietySpec::twist(2, 1, 0);
    let e25 = count_points(&e, q(BASE), 2, DEFAULT_BUDGET).map_err(|x| x.to_string())?;
    let et5 = count_points(&et, q(BASE), 1, DEFAULT_BUDGET).map_err(|x| x.to_string())?;
    ensure(e25 == 32 && et5 == 8, || {
        format!("|E(F_25)| = {e25}, |E'(F_5)| = {et5}")
    })?;
    let s = stratum(&e, BASE, 2);
    let phi = apply_automorphism(&e, &AutomorphismSpec::diagonal(-1, 2), &s)
        .map_err(|x| x.to_string())?;
    let c = census_of(&s, &phi)?;
    let want: BTreeMap<(u64, u64), u64> = [((4, 0), 3), ((2, 1), 1)].into_iter().collect();
    ensure(c.counts == want, || format!("census {:?}", c.counts))?;
    ensure(c.count(2, 1) == et5 / 4 - 1, || "#X(2,1) formula".into())?;
    ensure(c.count(4, 0) == e25 / 8 - (BASE - 1) / 4, || {
        "#X(4,0) formula".into()
    })?;
    let class = k1_class_of_stratum(&s, &phi).map_err(|x| x.to_string())?;
    ensure(class.twist == 1, || format!("psi_2 = {class}"))?;
    ensure(class == census_to_class(&c), || {
        format!("psi_2 = {class} vs census")
    })?;
    ensure(
        permutativity_verdict(&[class]) == Verdict::NonPermutativeCertified,
        || "verdict".into(),
    )?;
    Ok(format!(
        "|E(F_25)|=32, |E'(F_5)|=8, census {{(4,0):3, (2,1):1}}, psi_2={class} certified"
    ))
}

fn random_witt(rng: &mut ChaCha8Rng, n: usize) -> WittVec {
    WittVec::new((0..n).map(|_| rng.gen_range(-9..=9)).collect())
}

fn witt_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let n = 24;
    for case in 0..200 {
        let (u, v, w) = (
            random_witt(&mut rng, n),
            random_witt(&mut rng, n),
            random_witt(&mut rng, n),
        );
        let e = |x: dzeta_core::Error| format!("case {case}: {x}");
        let (gu, gv) = (ghost_of(&u).map_err(e)?, ghost_of(&v).map_err(e)?);
        let sum = ghost_of(&witt_add(&u, &v).map_err(e)?).map_err(e)?;
        let prod = ghost_of(&witt_mul(&u, &v).map_err(e)?).map_err(e)?;
        for k in 1..=n {
            ensure(sum.get(k) == gu.get(k) + gv.get(k), || {
                format!("case {case}: additive ghost at {k}")
            })?;
            ensure(prod.get(k) == gu.get(k) * gv.get(k), || {
                format!("case {case}: multiplicative ghost at {k}")
            })?;
        }
        ensure(from_ghost(&gu).map_err(e)? == u, || {
            format!("case {case}: ghost round trip")
        })?;
        let uv = witt_mul(&u, &v).map_err(e)?;
        ensure(uv == witt_mul(&v, &u).map_err(e)?, || {
            format!("case {case}: commutativity")
        })?;
        let left = witt_mul(&uv, &w).map_err(e)?;
        let right = witt_mul(&u, &witt_mul(&v, &w).map_err(e)?).map_err(e)?;
        ensure(left == right, || format!("case {case}: associativity"))?;
    }
    Ok("200 random pairs at N=24: ghost is a ring map, round trip exact, product commutative and associative".into())
}

/// `Σ_{k ≤ n} q^k`, the coefficients of `1/((1-t)(1-qt))`.
fn p1_zeta(qq: u64, order: usize) -> IntSeries {
    IntSeries::new(
        (0..=order)
            .map(|n| (0..=n as u32).map(|k| BigInt::from(qq).pow(k)).sum())
            .collect(),
    )
}

fn zeta_suite() -> Outcome {
    let t = 8;
    for qq in [3u64, 5] {
        let e = |x: dzeta_core::Error| format!("q={qq}: {x}");
        let w = burnside_of_variety(&p1(), q(qq), t as u32, DEFAULT_BUDGET).map_err(e)?;
        let z = zeta_from_witt(&w, t).map_err(e)?;
        let counts: Vec<i64> = (1..=t as u32)
            .map(|n| count_points(&p1(), q(qq), n, DEFAULT_BUDGET).map(|c| c as i64))
            .collect::<Result<_, _>>()
            .map_err(e)?;
        let z_exp = zeta_exp_form(&counts, t).map_err(e)?;
        ensure(z == z_exp, || format!("q={qq}: {z} vs {z_exp}"))?;
        ensure(z == p1_zeta(qq, t), || {
            format!("q={qq}: {z} vs closed form")
        })?;
        let line =
            burnside_of_variety(&VarietySpec::affine_line(), q(qq), t as u32, DEFAULT_BUDGET)
                .map_err(e)?;
        let pt = burnside_of_variety(&VarietySpec::point(), q(qq), t as u32, DEFAULT_BUDGET)
            .map_err(e)?;
        let prod = zeta_from_witt(&line, t)
            .map_err(e)?
            .mul(&zeta_from_witt(&pt, t).map_err(e)?);
        ensure(prod == z, || format!("q={qq}: Z(A1)·Z(pt) = {prod} vs {z}"))?;
    }
    let line2 = burnside_of_variety(&VarietySpec::affine_line(), q(2), 12, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    for n in 1..=12u64 {
        let m = necklace_count(2, n).map_err(|e| e.to_string())?;
        ensure(line2.get(n as usize) == m as i64, || {
            format!("A1/F_2 b_{n} = {} vs {m}", line2.get(n as usize))
        })?;
    }
    Ok("q=3,5 to t^8: both presentations equal the closed form, Z(P1)=Z(A1)Z(pt); A1/F_2 matches necklaces to n=12".into())
}

/// Fixture varieties usable over `F_q` for `q ∈ {3, 5}`.
fn fixture_varieties() -> Vec<(&'static str, VarietySpec)> {
    vec![
        ("P1", p1()),
        ("A1", VarietySpec::affine_line()),
        ("pt", VarietySpec::point()),
        ("E", VarietySpec::weierstrass(1, 0)),
        ("E'", VarietySpec::twist(2, 1, 0)),
        (
            "conic",
            VarietySpec::affine(&["x", "y"], &["x^2 + y^2 - 1"]).unwrap(),
        ),
        (
            "Gm",
            VarietySpec::affine(&["x", "y"], &["x*y - 1"]).unwrap(),
        ),
    ]
}

/// Class of swapping two copies of `X_n`, computed on the strata directly.
fn swap_class(v: &VarietySpec, qq: u64, n: u32) -> Result<K1Class, String> {
    let s = stratum(v, qq, n);
    let set = FreeZnSet::from_stratum(&s);
    let len = set.len();
    let both = set.disjoint_union(&set);
    let swap = Permutation::from_vec(
        (0..2 * len)
            .map(|i| ((i + len) % (2 * len)) as u32)
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    k1_class(&both, &swap).map_err(|e| e.to_string())
}

fn eta_suite() -> Outcome {
    let b = degree_census(&p1(), q(3), 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let profile = mult_of_eta_profile(&b, 3);
    let want = vec![
        K1Class::new(1, 1, 0),
        K1Class::new(2, -1, 0),
        K1Class::new(3, 1, 0),
    ];
    ensure(profile == want, || format!("P1/F_3 profile {profile:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let fixtures = fixture_varieties();
    let mut names = Vec::new();
    for case in 0..10 {
        let qq = *[3u64, 5].choose(&mut rng).unwrap();
        let k = rng.gen_range(2..=4);
        let parts: Vec<&(&str, VarietySpec)> =
            (0..k).map(|_| fixtures.choose(&mut rng).unwrap()).collect();
        let label = format!(
            "{}/F_{qq}",
            parts.iter().map(|p| p.0).collect::<Vec<_>>().join("+")
        );
        let v = VarietySpec::DisjointUnion(parts.iter().map(|p| p.1.clone()).collect());
        let max_n = 4;
        let b =
            degree_census(&v, q(qq), max_n, DEFAULT_BUDGET).map_err(|e| format!("{label}: {e}"))?;
        let counts: Vec<i64> = (1..=max_n)
            .map(|n| count_points(&v, q(qq), n, DEFAULT_BUDGET).map(|c| c as i64))
            .collect::<Result<_, _>>()
            .map_err(|e| format!("{label}: {e}"))?;
        let from_counts = from_ghost(&dzeta_core::witt::GhostVec::new(counts))
            .map_err(|e| format!("{label}: {e}"))?;
        let b_i64: Vec<i64> = b.iter().map(|&x| x as i64).collect();
        ensure(from_counts.as_slice() == b_i64.as_slice(), || {
            format!("{label}: census {b:?} vs counts")
        })?;
        let profile = mult_of_eta_profile(&b, max_n as usize);
        for n in 1..=max_n {
            let brute = swap_class(&v, qq, n)?;
            let expected = K1Class::new(
                u64::from(n),
                if b[n as usize - 1] % 2 == 0 { 1 } else { -1 },
                0,
            );
            ensure(
                profile[n as usize - 1] == expected && brute == expected,
                || {
                    format!(
                        "{label} n={n}: profile {} swap {brute} expected {expected}",
                        profile[n as usize - 1]
                    )
                },
            )?;
        }
        names.push(format!("#{case} {label}"));
    }
    Ok(format!(
        "P1/F_3 profile pinned; 10 random unions agree to n=4: {}",
        names.join(", ")
    ))
}

fn k0_fixtures() -> Outcome {
    let s = s_asm();
    let sq = example_square();
    let rank = |g: AbelianGroup| -> Result<usize, String> {
        ensure(g.torsion.is_empty(), || format!("torsion {:?}", g.torsion))?;
        Ok(g.rank)
    };
    let e = |x: dzeta_core::Error| x.to_string();
    let got = [
        rank(k0(&sq).map_err(e)?)?,
        rank(k0(&remove_sieve(&sq, &["A"]).map_err(e)?).map_err(e)?)?,
        rank(k0(&smash_product(&s, &s)).map_err(e)?)?,
        rank(k0(&box_product(&s, &s, Policy::ExcludeDegenerate)).map_err(e)?)?,
        rank(k0(&box_product(&s, &s, Policy::Literal)).map_err(e)?)?,
    ];
    ensure(got == [3, 2, 1, 3, 1], || format!("ranks {got:?}"))?;
    Ok("square 3, square minus A 2, S∧S 1, S⊠S 3 (default) / 1 (literal), no torsion".into())
}

/// An equivariant bijection of `standard(n, k)`: orbit `o` goes to `pi[o]`,
/// shifted by `shift[o]` along the orbit.
fn equivariant(n: u64, pi: &[usize], shift: &[u64]) -> Permutation {
    let nu = n as usize;
    let map = (0..pi.len() * nu)
        .map(|x| {
            let (o, i) = (x / nu, x % nu);
            (pi[o] * nu + (i + shift[o] as usize) % nu) as u32
        })
        .collect();
    Permutation::from_vec(map).unwrap()
}

fn random_equivariant(rng: &mut ChaCha8Rng, n: u64, k: usize) -> Permutation {
    let mut pi: Vec<usize> = (0..k).collect();
    pi.shuffle(rng);
    let shift: Vec<u64> = (0..k).map(|_| rng.gen_range(0..n)).collect();
    equivariant(n, &pi, &shift)
}

/// An equivariant bijection whose orbit cycles all have length `len` and
/// total shift `total`, so it acts freely with a single cycle length.
fn free_equivariant(rng: &mut ChaCha8Rng, n: u64, k: usize, len: usize, total: u64) -> Permutation {
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    let mut pi = vec![0; k];
    let mut shift = vec![0; k];
    for cyc in order.chunks(len) {
        let mut rest = total;
        for (j, &o) in cyc.iter().enumerate() {
            pi[o] = cyc[(j + 1) % len];
            shift[o] = if j + 1 == len {
                rest % n
            } else {
                rng.gen_range(0..n)
            };
            rest = (rest + n - shift[o]) % n;
        }
    }
    equivariant(n, &pi, &shift)
}

fn k1_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut census_checked = 0;
    for case in 0..500 {
        let n = rng.gen_range(1..=12u64);
        let k = rng.gen_range(1..=(60 / n as usize).max(1));
        let set = FreeZnSet::standard(n, k);
        let e = |x: dzeta_core::Error| format!("case {case} (n={n}, k={k}): {x}");
        let (f, g, r) = (
            random_equivariant(&mut rng, n, k),
            random_equivariant(&mut rng, n, k),
            random_equivariant(&mut rng, n, k),
        );
        let (cf, cg) = (
            k1_class(&set, &f).map_err(e)?,
            k1_class(&set, &g).map_err(e)?,
        );
        ensure(
            k1_class(&set, &f.compose(&g)).map_err(e)? == cf.combine(cg),
            || format!("case {case}: homomorphism"),
        )?;
        let conj = r.compose(&f).compose(&r.inverse());
        ensure(k1_class(&set, &conj).map_err(e)? == cf, || {
            format!("case {case}: conjugation")
        })?;
        let k2 = rng.gen_range(1..=(60 / n as usize).max(1));
        let other = FreeZnSet::standard(n, k2);
        let h = random_equivariant(&mut rng, n, k2);
        let ch = k1_class(&other, &h).map_err(e)?;
        let joint = k1_class(&set.disjoint_union(&other), &f.disjoint_union(&h)).map_err(e)?;
        ensure(joint == cf.combine(ch), || {
            format!("case {case}: additivity")
        })?;

        let divisors: Vec<usize> = (1..=k).filter(|d| k % d == 0).collect();
        let len = *divisors.choose(&mut rng).unwrap();
        let total = rng.gen_range(0..n);
        let free = free_equivariant(&mut rng, n, k, len, total);
        for phi in [&f, &free] {
            if let Ok(c) = orbit_census(&set, phi) {
                let direct = k1_class(&set, phi).map_err(e)?;
                ensure(census_to_class(&c) == direct, || {
                    format!("case {case}: census {:?}", c.counts)
                })?;
                census_checked += 1;
            }
        }
    }
    ensure(census_checked >= 500, || {
        format!("only {census_checked} census cases")
    })?;
    Ok(format!("500 cases: homomorphism, additivity, conjugation; census agrees in {census_checked} free cases"))
}

fn mobius_conjugacy() -> Outcome {
    let mut cases = 0;
    for qq in [3u64, 7, 11] {
        for n in 1..=4 {
            let inv = psi_of(&p1(), &AutomorphismSpec::inversion(), qq, n)?;
            let neg = psi_of(&p1(), &AutomorphismSpec::scale(-1), qq, n)?;
            ensure(inv == neg, || {
                format!("q={qq} n={n}: 1/x {inv} vs -x {neg}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases agree"))
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let stretch = args
        .iter()
        .any(|a| a == "--ignored" || a == "--include-ignored")
        || std::env::var_os("DZETA_STRETCH").is_some();
    let criteria: Vec<Criterion> = vec![
        ("1", "closed form for P1 with -x", closed_form_reproduction),
        (
            "2",
            "scaling census reduction on P1",
            su_special_equivalence,
        ),
        ("3", "generator-root counts at q=5 and q=13", genroot),
        ("4", "CM elliptic curve at q=5", elliptic),
        ("5", "Witt and ghost ring laws", witt_suite),
        ("6", "zeta series", zeta_suite),
        ("7", "multiplication by eta", eta_suite),
        ("8", "assembler K0 fixtures", k0_fixtures),
        ("9", "K1 class algebra", k1_algebra),
        ("10", "Mobius conjugacy of 1/x and -x", mobius_conjugacy),
    ];
    let mut failed = 0;
    let mut run = |id: &str, name: &str, f: fn() -> Outcome| {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{id:>2}] {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{id:>2}] {name} ({secs:.1}s): {detail}");
            }
        }
    };
    for (id, name, f) in criteria {
        run(id, name, f);
    }
    if stretch {
        run("3s", "generator-root stretch q=9, n=8", genroot_stretch);
    } else {
        println!(
            "SKIP [3s] generator-root stretch q=9, n=8 (pass --ignored or set DZETA_STRETCH=1)"
        );
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
