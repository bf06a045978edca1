use dzeta_core::assembler::{
    box_product, cover_closure, k0, smash_product, validate, Caps, FinAssembler, Policy,
};
use dzeta_core::ffield::{ExtField, QSpec};
use dzeta_core::geometry::{
    apply_automorphism, count_points, enumerate_points, exact_degree_stratum, stratum_from_points,
    validate_automorphism, AutomorphismSpec, StratumN, VarietySpec,
};
use dzeta_core::orbits::{
    census_to_class, k1_class_of_stratum, mult_of_eta_profile, orbit_census, permutativity_verdict,
    scaling_profile, scaling_reduction_exact, su_special_reduction, FreeZnSet, K1Class,
};
use dzeta_core::perm::Permutation;
use dzeta_core::witt::{
    from_ghost, ghost_of, witt_add, witt_mul, zeta_exp_form, zeta_from_witt, WittVec,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::{census_json, class_json, group_json, series_json, Report};
use crate::spec::{
    assembler_json, ghost_json, parse_assembler, parse_automorphism, parse_ghost, parse_variety,
    parse_witt, policy_name, witt_json, AssemblerInput,
};

pub fn qspec(q: u64) -> Result<QSpec, CliError> {
    QSpec::from_q(q).map_err(|e| CliError::core_at("q", e))
}

/// The exact-degree stratum and the automorphism acting on it, after the
/// automorphism has been validated on all of `X(F_{q^n})`.
pub fn stratum_and_action(
    v: &VarietySpec,
    a: &AutomorphismSpec,
    q: QSpec,
    n: u32,
    budget: u64,
) -> Result<(StratumN, Permutation), CliError> {
    let field = ExtField::with_budget(q.p, q.e, n, budget)?;
    validate_automorphism(v, a, &field).map_err(|e| CliError::core_at("auto", e.into()))?;
    let s = stratum_from_points(field.clone(), enumerate_points(v, &field, budget)?)?;
    let phi = apply_automorphism(v, a, &s)?;
    Ok((s, phi))
}

pub struct GeoInputs {
    pub variety: VarietySpec,
    pub auto: Option<AutomorphismSpec>,
    pub q: QSpec,
    pub echo: serde_json::Map<String, Value>,
}

pub fn geo_inputs(
    variety: &Value,
    auto: Option<&Value>,
    q: u64,
    budget: u64,
) -> Result<GeoInputs, CliError> {
    let qs = qspec(q)?;
    let (v, vecho) = parse_variety(variety, qs)?;
    let mut echo = serde_json::Map::new();
    echo.insert("variety".into(), vecho);
    let auto = match auto {
        Some(a) => {
            let (a, aecho) = parse_automorphism(a, qs)?;
            echo.insert("auto".into(), aecho);
            Some(a)
        }
        None => None,
    };
    echo.insert("q".into(), json!(q));
    echo.insert("budget".into(), json!(budget));
    Ok(GeoInputs {
        variety: v,
        auto,
        q: qs,
        echo,
    })
}

fn check_n(n: u32, name: &str) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::schema(name, "must be at least 1"));
    }
    Ok(())
}

fn class_at(g: &GeoInputs, n: u32, budget: u64) -> Result<(K1Class, usize), CliError> {
    let a = g.auto.as_ref().expect("automorphism parsed");
    let (s, phi) = stratum_and_action(&g.variety, a, g.q, n, budget)?;
    Ok((k1_class_of_stratum(&s, &phi)?, s.points.len()))
}

pub fn psi(g: GeoInputs, n: u32, budget: u64) -> Result<Report, CliError> {
    check_n(n, "n")?;
    let (class, points) = class_at(&g, n, budget)?;
    let mut inputs = g.echo.clone();
    inputs.insert("n".into(), json!(n));
    let results = json!({
        "class": class_json(&class),
        "stratum_points": points,
        "closed_points": points as u64 / u64::from(n),
    });
    Ok(Report::new(&["psi"], inputs.into(), results).with_verdict(permutativity_verdict(&[class])))
}

pub fn psi_profile(g: GeoInputs, max_n: u32, budget: u64) -> Result<Report, CliError> {
    check_n(max_n, "max_n")?;
    let classes = (1..=max_n)
        .into_par_iter()
        .map(|n| class_at(&g, n, budget).map(|(c, _)| c))
        .collect::<Result<Vec<_>, _>>()?;
    let mut inputs = g.echo.clone();
    inputs.insert("max_n".into(), json!(max_n));
    let results = json!({ "classes": classes.iter().map(class_json).collect::<Vec<_>>() });
    Ok(Report::new(&["psi-profile"], inputs.into(), results)
        .with_verdict(permutativity_verdict(&classes)))
}

pub fn census(g: GeoInputs, n: u32, budget: u64) -> Result<Report, CliError> {
    check_n(n, "n")?;
    let a = g.auto.as_ref().expect("automorphism parsed");
    let (s, phi) = stratum_and_action(&g.variety, a, g.q, n, budget)?;
    let class = k1_class_of_stratum(&s, &phi)?;
    let c = orbit_census(&FreeZnSet::from_stratum(&s), &phi)?;
    let scaling = match (&g.variety, a) {
        (VarietySpec::ProjectiveLine, AutomorphismSpec::Scale { .. }) => {
            let profile = scaling_profile(&c)?;
            let profile: serde_json::Map<String, Value> = profile
                .iter()
                .map(|(d, p)| (d.to_string(), json!(p)))
                .collect();
            json!({
                "profile": profile,
                "literal": class_json(&su_special_reduction(&c)?),
                "exact": class_json(&scaling_reduction_exact(&c)?),
            })
        }
        _ => Value::Null,
    };
    let mut inputs = g.echo.clone();
    inputs.insert("n".into(), json!(n));
    let results = json!({
        "census": census_json(&c),
        "class_from_census": class_json(&census_to_class(&c)),
        "class": class_json(&class),
        "scaling": scaling,
    });
    Ok(Report::new(&["census"], inputs.into(), results)
        .with_verdict(permutativity_verdict(&[class])))
}

/// `b_n = |X_n| / n` for `n = 1..=max_n`, one stratum per thread.
fn burnside(v: &VarietySpec, q: QSpec, max_n: u32, budget: u64) -> Result<WittVec, CliError> {
    let b = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let s = exact_degree_stratum(v, q, n, budget)?;
            i64::try_from(s.closed_points()).map_err(|_| dzeta_core::Error::Overflow("burnside"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WittVec::new(b))
}

pub fn eta_profile(g: GeoInputs, max_n: u32, budget: u64) -> Result<Report, CliError> {
    check_n(max_n, "max_n")?;
    let w = burnside(&g.variety, g.q, max_n, budget)?;
    let b: Vec<u64> = w.as_slice().iter().map(|&x| x as u64).collect();
    let profile = mult_of_eta_profile(&b, max_n as usize);
    let mut inputs = g.echo.clone();
    inputs.insert("max_n".into(), json!(max_n));
    let results = json!({
        "burnside": witt_json(&w),
        "profile": profile.iter().map(class_json).collect::<Vec<_>>(),
    });
    Ok(Report::new(&["eta-profile"], inputs.into(), results))
}

pub fn zeta(g: GeoInputs, terms: u32, budget: u64) -> Result<Report, CliError> {
    check_n(terms, "terms")?;
    let w = burnside(&g.variety, g.q, terms, budget)?;
    let series = zeta_from_witt(&w, terms as usize)?;
    let counts = (1..=terms)
        .into_par_iter()
        .map(|n| {
            let c = count_points(&g.variety, g.q, n, budget)?;
            i64::try_from(c).map_err(|_| dzeta_core::Error::Overflow("point count"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let via_counts = zeta_exp_form(&counts, terms as usize)?;
    assert_eq!(series, via_counts, "zeta presentations disagree");
    let mut inputs = g.echo.clone();
    inputs.insert("terms".into(), json!(terms));
    let results = json!({
        "series": series_json(&series),
        "point_counts": counts,
        "burnside": witt_json(&w),
    });
    Ok(Report::new(&["zeta"], inputs.into(), results))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WittOp {
    Add,
    Mul,
}

pub fn witt_binary(op: WittOp, lhs: &Value, rhs: &Value) -> Result<Report, CliError> {
    let (u, v) = (parse_witt(lhs, "lhs")?, parse_witt(rhs, "rhs")?);
    let (name, r) = match op {
        WittOp::Add => ("add", witt_add(&u, &v)?),
        WittOp::Mul => ("mul", witt_mul(&u, &v)?),
    };
    let inputs = json!({ "lhs": witt_json(&u), "rhs": witt_json(&v) });
    Ok(Report::new(
        &["witt", name],
        inputs,
        json!({ "result": witt_json(&r) }),
    ))
}

pub fn witt_ghost(input: &Value) -> Result<Report, CliError> {
    let w = parse_witt(input, "input")?;
    let g = ghost_of(&w)?;
    Ok(Report::new(
        &["witt", "ghost"],
        json!({ "input": witt_json(&w) }),
        json!({ "result": ghost_json(&g) }),
    ))
}

pub fn witt_from_ghost(input: &Value) -> Result<Report, CliError> {
    let g = parse_ghost(input, "input")?;
    let w = from_ghost(&g)?;
    Ok(Report::new(
        &["witt", "from-ghost"],
        json!({ "input": ghost_json(&g) }),
        json!({ "result": witt_json(&w) }),
    ))
}

fn assembler_results(a: &FinAssembler) -> Result<Value, CliError> {
    let violations: Vec<String> = validate(a).iter().map(|v| v.to_string()).collect();
    if let Some(v) = violations.first() {
        return Err(CliError::invalid(format!("assembler axioms fail: {v}")));
    }
    let closure: Vec<String> = cover_closure(a, Caps::default())?
        .iter()
        .map(|f| a.family_name(f))
        .collect();
    Ok(json!({
        "objects": a.objects(),
        "disjoint_covers": closure,
        "k0": group_json(&k0(a)?),
    }))
}

pub fn k0_cmd(input: &Value) -> Result<Report, CliError> {
    let AssemblerInput { asm, .. } = parse_assembler(input, "assembler")?;
    Ok(Report::new(
        &["k0"],
        json!({ "assembler": assembler_json(&asm) }),
        assembler_results(&asm)?,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductOp {
    Box,
    Smash,
}

/// The `--policy` flag wins; otherwise both files must agree.
fn effective_policy(
    flag: Option<Policy>,
    left: Option<Policy>,
    right: Option<Policy>,
) -> Result<Policy, CliError> {
    if let Some(p) = flag {
        return Ok(p);
    }
    match (left, right) {
        (Some(l), Some(r)) if l != r => Err(CliError::schema(
            "right.policy",
            "conflicts with left.policy; pass --policy to choose",
        )),
        (l, r) => Ok(l.or(r).unwrap_or_default()),
    }
}

pub fn product(
    op: ProductOp,
    left: &Value,
    right: &Value,
    flag: Option<Policy>,
) -> Result<Report, CliError> {
    let l = parse_assembler(left, "left")?;
    let r = parse_assembler(right, "right")?;
    let mut inputs = json!({ "left": assembler_json(&l.asm), "right": assembler_json(&r.asm) });
    let (name, p) = match op {
        ProductOp::Box => {
            let policy = effective_policy(flag, l.policy, r.policy)?;
            inputs["policy"] = json!(policy_name(policy));
            ("box", box_product(&l.asm, &r.asm, policy))
        }
        ProductOp::Smash => ("smash", smash_product(&l.asm, &r.asm)),
    };
    let mut results = assembler_results(&p)?;
    results["product"] = assembler_json(&p);
    Ok(Report::new(&["product", name], inputs, results))
}
