//! Fixture suite behind `dzeta selftest`. Each check computes a value and
//! compares it with a pinned expectation.

use dzeta_core::assembler::{
    box_product, example_square, k0, remove_sieve, s_asm, smash_product, Policy,
};
use dzeta_core::ffield::{QSpec, DEFAULT_BUDGET};
use dzeta_core::geometry::{count_points, exact_degree_stratum, AutomorphismSpec, VarietySpec};
use dzeta_core::orbits::{
    closed_form_calc, genroot_predicted_p, k1_class_of_stratum, mult_of_eta_profile, orbit_census,
    psi, scaling_profile, FreeZnSet, K1Class,
};
use dzeta_core::witt::{burnside_of_variety, zeta_from_witt};
use dzeta_core::Result;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{census_json, class_json, series_json, Report};

struct Check {
    name: &'static str,
    expected: Value,
    run: fn() -> Result<Value>,
}

fn q(v: u64) -> QSpec {
    QSpec::from_q(v).expect("fixture field")
}

fn cls(n: u64, sign: i8, twist: i64) -> Value {
    class_json(&K1Class::new(n, sign, twist))
}

fn p1_neg(qq: u64, n: u32) -> Result<Value> {
    let brute = psi(
        &VarietySpec::ProjectiveLine,
        &AutomorphismSpec::scale(-1),
        q(qq),
        n,
        DEFAULT_BUDGET,
    )?;
    let closed = closed_form_calc(qq, u64::from(n))?;
    Ok(json!({ "brute": class_json(&brute), "closed_form": class_json(&closed) }))
}

fn pinned(c: Value) -> Value {
    json!({ "brute": c, "closed_form": c })
}

fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "P1 with -x, q=3, n=2",
            expected: pinned(cls(2, -1, 1)),
            run: || p1_neg(3, 2),
        },
        Check {
            name: "P1 with -x, q=7, n=2",
            expected: pinned(cls(2, -1, 1)),
            run: || p1_neg(7, 2),
        },
        Check {
            name: "P1 with -x, q=5, n=2",
            expected: pinned(cls(2, 1, 0)),
            run: || p1_neg(5, 2),
        },
        Check {
            name: "P1 with -x, q=7, n=3",
            expected: pinned(cls(3, 1, 0)),
            run: || p1_neg(7, 3),
        },
        Check {
            name: "P1 with 1/x matches -x, q=7, n=1..4",
            expected: json!(true),
            run: || {
                let p1 = VarietySpec::ProjectiveLine;
                for n in 1..=4 {
                    let inv = psi(&p1, &AutomorphismSpec::inversion(), q(7), n, DEFAULT_BUDGET)?;
                    let neg = psi(&p1, &AutomorphismSpec::scale(-1), q(7), n, DEFAULT_BUDGET)?;
                    if inv != neg {
                        return Ok(json!(false));
                    }
                }
                Ok(json!(true))
            },
        },
        Check {
            name: "y^2 = x^3 + x over F_5: |E(F_25)|, |E'(F_5)|",
            expected: json!([32, 8]),
            run: || {
                let e = count_points(&VarietySpec::weierstrass(1, 0), q(5), 2, DEFAULT_BUDGET)?;
                let t = count_points(&VarietySpec::twist(2, 1, 0), q(5), 1, DEFAULT_BUDGET)?;
                Ok(json!([e, t]))
            },
        },
        Check {
            name: "y^2 = x^3 + x over F_5 with (-x, 2y): census and twist at n=2",
            expected: json!({
                "census": { "n": 2, "m": 4, "types": [
                    { "d": 2, "a": 1, "count": 1 },
                    { "d": 4, "a": 0, "count": 3 },
                ] },
                "twist": 1,
            }),
            run: || {
                let e = VarietySpec::weierstrass(1, 0);
                let s = exact_degree_stratum(&e, q(5), 2, DEFAULT_BUDGET)?;
                let phi = dzeta_core::geometry::apply_automorphism(
                    &e,
                    &AutomorphismSpec::diagonal(-1, 2),
                    &s,
                )?;
                let c = orbit_census(&FreeZnSet::from_stratum(&s), &phi)?;
                let class = k1_class_of_stratum(&s, &phi)?;
                Ok(json!({ "census": census_json(&c), "twist": class.twist }))
            },
        },
        Check {
            name: "P1 with 2x over F_5, n=4: P_1, P_2, P_4 against prediction",
            expected: json!({ "census": [36, 2, 1], "predicted": [36, 2, 1] }),
            run: || {
                let p1 = VarietySpec::ProjectiveLine;
                let s = exact_degree_stratum(&p1, q(5), 4, DEFAULT_BUDGET)?;
                let phi =
                    dzeta_core::geometry::apply_automorphism(&p1, &AutomorphismSpec::scale(2), &s)?;
                let prof = scaling_profile(&orbit_census(&FreeZnSet::from_stratum(&s), &phi)?)?;
                let census: Vec<u64> = [1, 2, 4]
                    .iter()
                    .map(|d| prof.get(d).copied().unwrap_or(0))
                    .collect();
                let predicted = [2, 1, 0]
                    .iter()
                    .map(|&r| genroot_predicted_p(5, r))
                    .collect::<Result<Vec<_>>>()?;
                Ok(json!({ "census": census, "predicted": predicted }))
            },
        },
        Check {
            name: "P1 with 2x over F_5: psi_4 = (+1, 2)",
            expected: cls(4, 1, 2),
            run: || {
                let c = psi(
                    &VarietySpec::ProjectiveLine,
                    &AutomorphismSpec::scale(2),
                    q(5),
                    4,
                    DEFAULT_BUDGET,
                )?;
                Ok(class_json(&c))
            },
        },
        Check {
            name: "eta profile of P1 over F_3, N=3",
            expected: json!([cls(1, 1, 0), cls(2, -1, 0), cls(3, 1, 0)]),
            run: || {
                let w = burnside_of_variety(&VarietySpec::ProjectiveLine, q(3), 3, DEFAULT_BUDGET)?;
                let b: Vec<u64> = w.as_slice().iter().map(|&x| x as u64).collect();
                Ok(json!(mult_of_eta_profile(&b, 3)
                    .iter()
                    .map(class_json)
                    .collect::<Vec<_>>()))
            },
        },
        Check {
            name: "zeta of P1 over F_3 to t^3",
            expected: json!([1, 4, 13, 40]),
            run: || {
                let w = burnside_of_variety(&VarietySpec::ProjectiveLine, q(3), 3, DEFAULT_BUDGET)?;
                Ok(series_json(&zeta_from_witt(&w, 3)?))
            },
        },
        Check {
            name: "K0 ranks: square, square minus A, S smash S, S box S (default, literal)",
            expected: json!([3, 2, 1, 3, 1]),
            run: || {
                let s = s_asm();
                let sq = example_square();
                Ok(json!([
                    k0(&sq)?.rank,
                    k0(&remove_sieve(&sq, &["A"])?)?.rank,
                    k0(&smash_product(&s, &s))?.rank,
                    k0(&box_product(&s, &s, Policy::ExcludeDegenerate))?.rank,
                    k0(&box_product(&s, &s, Policy::Literal))?.rank,
                ]))
            },
        },
    ]
}

/// Runs every check; the flag is true when all of them pass.
pub fn run() -> (Report, bool) {
    let rows: Vec<(Value, bool)> = checks()
        .into_par_iter()
        .map(|c| {
            let (actual, pass) = match (c.run)() {
                Ok(v) => {
                    let pass = v == c.expected;
                    (v, pass)
                }
                Err(e) => (json!({ "error": e.to_string() }), false),
            };
            let row =
                json!({ "name": c.name, "expected": c.expected, "actual": actual, "pass": pass });
            (row, pass)
        })
        .collect();
    let passed = rows.iter().filter(|r| r.1).count();
    let all = passed == rows.len();
    let results = json!({
        "checks": rows.into_iter().map(|r| r.0).collect::<Vec<_>>(),
        "passed": passed,
        "total": checks().len(),
    });
    (Report::new(&["selftest"], json!({}), results), all)
}
