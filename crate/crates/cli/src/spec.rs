//! JSON input schemas. Every parser returns the core value together with its
//! normalized JSON echo, and reports failures with the offending field path.

use std::fmt;

use dzeta_core::assembler::{FinAssembler, Policy};
use dzeta_core::ffield::QSpec;
use dzeta_core::geometry::{AffineSystem, AutomorphismSpec, Scalar, VarietySpec};
use dzeta_core::witt::{GhostVec, WittVec};
use serde_json::{json, Map, Value};

use crate::error::CliError;

/// A location inside an input document, rendered as `parts[1].a`.
#[derive(Clone, Debug, Default)]
pub struct Path(Vec<String>);

impl Path {
    pub fn root(name: &str) -> Self {
        Path(vec![name.to_string()])
    }

    fn key(&self, k: &str) -> Self {
        let mut p = self.0.clone();
        p.push(format!(".{k}"));
        Path(p)
    }

    fn index(&self, i: usize) -> Self {
        let mut p = self.0.clone();
        p.push(format!("[{i}]"));
        Path(p)
    }

    fn err(&self, msg: impl Into<String>) -> CliError {
        CliError::schema(self.to_string(), msg)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.concat())
    }
}

type Obj<'a> = &'a Map<String, Value>;

fn object<'a>(v: &'a Value, at: &Path) -> Result<Obj<'a>, CliError> {
    v.as_object().ok_or_else(|| at.err("expected an object"))
}

/// Rejects keys outside `allowed`.
fn only_keys(o: Obj, allowed: &[&str], at: &Path) -> Result<(), CliError> {
    match o.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(at.key(k).err("unknown key")),
        None => Ok(()),
    }
}

fn field<'a>(o: Obj<'a>, k: &str, at: &Path) -> Result<&'a Value, CliError> {
    o.get(k).ok_or_else(|| at.key(k).err("missing field"))
}

fn int(v: &Value, at: &Path) -> Result<i64, CliError> {
    v.as_i64().ok_or_else(|| at.err("expected an integer"))
}

fn uint(v: &Value, at: &Path) -> Result<u64, CliError> {
    v.as_u64()
        .ok_or_else(|| at.err("expected a non-negative integer"))
}

fn string<'a>(v: &'a Value, at: &Path) -> Result<&'a str, CliError> {
    v.as_str().ok_or_else(|| at.err("expected a string"))
}

fn array<'a>(v: &'a Value, at: &Path) -> Result<&'a [Value], CliError> {
    v.as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| at.err("expected an array"))
}

fn strings(v: &Value, at: &Path) -> Result<Vec<String>, CliError> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, x)| string(x, &at.index(i)).map(str::to_string))
        .collect()
}

fn tag<'a>(o: Obj<'a>, at: &Path) -> Result<&'a str, CliError> {
    string(field(o, "type", at)?, &at.key("type"))
}

/// `INT` or `{"base_gen_pow": k}`; integers are reduced mod `p`.
fn scalar(v: &Value, p: u64, at: &Path) -> Result<(Scalar, Value), CliError> {
    if let Some(o) = v.as_object() {
        only_keys(o, &["base_gen_pow"], at)?;
        let k = uint(field(o, "base_gen_pow", at)?, &at.key("base_gen_pow"))?;
        return Ok((Scalar::BaseGenPow(k), json!({ "base_gen_pow": k })));
    }
    let x = int(v, at)?;
    let r = x.rem_euclid(p as i64);
    Ok((Scalar::Int(r), json!(r)))
}

pub fn parse_variety(v: &Value, q: QSpec) -> Result<(VarietySpec, Value), CliError> {
    let at = Path::root("variety");
    let out = variety(v, q.p, &at)?;
    out.0
        .validate(q)
        .map_err(|e| CliError::core_at(at.to_string(), e))?;
    Ok(out)
}

fn variety(v: &Value, p: u64, at: &Path) -> Result<(VarietySpec, Value), CliError> {
    let o = object(v, at)?;
    let sc = |k: &str| scalar(field(o, k, at)?, p, &at.key(k));
    match tag(o, at)? {
        "p1" => {
            only_keys(o, &["type"], at)?;
            Ok((VarietySpec::ProjectiveLine, json!({ "type": "p1" })))
        }
        "weierstrass" => {
            only_keys(o, &["type", "a", "b"], at)?;
            let ((a, ja), (b, jb)) = (sc("a")?, sc("b")?);
            Ok((
                VarietySpec::Weierstrass { a, b },
                json!({ "type": "weierstrass", "a": ja, "b": jb }),
            ))
        }
        "twist" => {
            only_keys(o, &["type", "alpha", "a", "b"], at)?;
            let ((alpha, jal), (a, ja), (b, jb)) = (sc("alpha")?, sc("a")?, sc("b")?);
            Ok((
                VarietySpec::TwistedWeierstrass { alpha, a, b },
                json!({ "type": "twist", "alpha": jal, "a": ja, "b": jb }),
            ))
        }
        "affine" => {
            only_keys(o, &["type", "vars", "polys"], at)?;
            let vars = strings(field(o, "vars", at)?, &at.key("vars"))?;
            let polys = strings(field(o, "polys", at)?, &at.key("polys"))?;
            let sys = AffineSystem::new(&vars, &polys)
                .map_err(|e| CliError::core_at(at.to_string(), e))?;
            let shown: Vec<String> = sys.polys().iter().map(|p| p.to_string()).collect();
            Ok((
                VarietySpec::AffineSystem(sys),
                json!({ "type": "affine", "vars": vars, "polys": shown }),
            ))
        }
        "union" => {
            only_keys(o, &["type", "parts"], at)?;
            let pat = at.key("parts");
            let raw = array(field(o, "parts", at)?, &pat)?;
            if raw.is_empty() {
                return Err(pat.err("a union needs at least one part"));
            }
            let (specs, echo): (Vec<_>, Vec<_>) = raw
                .iter()
                .enumerate()
                .map(|(i, x)| variety(x, p, &pat.index(i)))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .unzip();
            Ok((
                VarietySpec::DisjointUnion(specs),
                json!({ "type": "union", "parts": echo }),
            ))
        }
        other => Err(at
            .key("type")
            .err(format!("unknown variety type `{other}`"))),
    }
}

pub fn parse_automorphism(v: &Value, q: QSpec) -> Result<(AutomorphismSpec, Value), CliError> {
    let at = Path::root("auto");
    let o = object(v, &at)?;
    let p = q.p;
    let sc = |k: &str| scalar(field(o, k, &at)?, p, &at.key(k));
    match tag(o, &at)? {
        "mobius" => {
            only_keys(o, &["type", "m"], &at)?;
            let mat = at.key("m");
            let rows = array(field(o, "m", &at)?, &mat)?;
            if rows.len() != 2 {
                return Err(mat.err("expected a 2x2 matrix"));
            }
            let mut entries = Vec::with_capacity(4);
            for (i, row) in rows.iter().enumerate() {
                let rat = mat.index(i);
                let row = array(row, &rat)?;
                if row.len() != 2 {
                    return Err(rat.err("expected a row of length 2"));
                }
                for (j, x) in row.iter().enumerate() {
                    entries.push(scalar(x, p, &rat.index(j))?);
                }
            }
            let echo = json!({
                "type": "mobius",
                "m": [[entries[0].1, entries[1].1], [entries[2].1, entries[3].1]],
            });
            let mut it = entries.into_iter().map(|e| e.0);
            let mut next = || it.next().expect("four entries");
            let spec = AutomorphismSpec::Mobius {
                a: next(),
                b: next(),
                c: next(),
                d: next(),
            };
            Ok((spec, echo))
        }
        "scale" => {
            only_keys(o, &["type", "lambda"], &at)?;
            let (lambda, j) = sc("lambda")?;
            Ok((
                AutomorphismSpec::Scale { lambda },
                json!({ "type": "scale", "lambda": j }),
            ))
        }
        "diag" => {
            only_keys(o, &["type", "alpha", "beta"], &at)?;
            let ((alpha, ja), (beta, jb)) = (sc("alpha")?, sc("beta")?);
            Ok((
                AutomorphismSpec::CurveDiagonal { alpha, beta },
                json!({ "type": "diag", "alpha": ja, "beta": jb }),
            ))
        }
        other => Err(at
            .key("type")
            .err(format!("unknown automorphism type `{other}`"))),
    }
}

fn coords(o: Obj, key: &str, at: &Path) -> Result<Vec<i64>, CliError> {
    only_keys(o, &["N", key], at)?;
    let n = uint(field(o, "N", at)?, &at.key("N"))? as usize;
    let mut out = vec![0i64; n];
    let kat = at.key(key);
    for (k, x) in object(field(o, key, at)?, &kat)? {
        let slot = k
            .parse::<usize>()
            .ok()
            .filter(|&i| (1..=n).contains(&i))
            .ok_or_else(|| kat.key(k).err(format!("index must be in 1..={n}")))?;
        out[slot - 1] = int(x, &kat.key(k))?;
    }
    Ok(out)
}

/// `{"N": n, "b": {"1": b_1, ...}}`, absent indices are zero.
pub fn parse_witt(v: &Value, name: &str) -> Result<WittVec, CliError> {
    let at = Path::root(name);
    Ok(WittVec::new(coords(object(v, &at)?, "b", &at)?))
}

/// `{"N": n, "c": {"1": c_1, ...}}`.
pub fn parse_ghost(v: &Value, name: &str) -> Result<GhostVec, CliError> {
    let at = Path::root(name);
    Ok(GhostVec::new(coords(object(v, &at)?, "c", &at)?))
}

fn indexed(xs: &[i64], key: &str) -> Value {
    let map: Map<String, Value> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| ((i + 1).to_string(), json!(x)))
        .collect();
    json!({ "N": xs.len(), key: map })
}

pub fn witt_json(w: &WittVec) -> Value {
    indexed(w.as_slice(), "b")
}

pub fn ghost_json(g: &GhostVec) -> Value {
    indexed(g.as_slice(), "c")
}

pub fn parse_policy(s: &str, at: &Path) -> Result<Policy, CliError> {
    match s {
        "default" => Ok(Policy::ExcludeDegenerate),
        "literal" => Ok(Policy::Literal),
        other => Err(at.err(format!("unknown policy `{other}`"))),
    }
}

pub fn policy_name(p: Policy) -> &'static str {
    match p {
        Policy::ExcludeDegenerate => "default",
        Policy::Literal => "literal",
    }
}

/// A parsed assembler with the policy it requested, if any.
pub struct AssemblerInput {
    pub asm: FinAssembler,
    pub policy: Option<Policy>,
}

pub fn parse_assembler(v: &Value, name: &str) -> Result<AssemblerInput, CliError> {
    let at = Path::root(name);
    let o = object(v, &at)?;
    only_keys(
        o,
        &[
            "objects",
            "initial",
            "morphisms",
            "compose",
            "coverage",
            "policy",
        ],
        &at,
    )?;
    let objects = strings(field(o, "objects", &at)?, &at.key("objects"))?;
    let initial = string(field(o, "initial", &at)?, &at.key("initial"))?;

    let mut morphisms = Vec::new();
    if let Some(ms) = o.get("morphisms") {
        let mat = at.key("morphisms");
        for (i, m) in array(ms, &mat)?.iter().enumerate() {
            let iat = mat.index(i);
            let mo = object(m, &iat)?;
            only_keys(mo, &["id", "src", "dst"], &iat)?;
            let s = |k: &str| string(field(mo, k, &iat)?, &iat.key(k)).map(str::to_string);
            morphisms.push((s("id")?, s("src")?, s("dst")?));
        }
    }

    let mut compose = Vec::new();
    if let Some(cs) = o.get("compose") {
        let cat = at.key("compose");
        for (i, c) in array(cs, &cat)?.iter().enumerate() {
            let iat = cat.index(i);
            let t = strings(c, &iat)?;
            let [f, g, fg]: [String; 3] =
                t.try_into().map_err(|_| iat.err("expected [f, g, f∘g]"))?;
            compose.push((f, g, fg));
        }
    }

    let mut coverage = Vec::new();
    if let Some(cs) = o.get("coverage") {
        let cat = at.key("coverage");
        for (i, c) in array(cs, &cat)?.iter().enumerate() {
            let iat = cat.index(i);
            let co = object(c, &iat)?;
            only_keys(co, &["target", "members"], &iat)?;
            let target = string(field(co, "target", &iat)?, &iat.key("target"))?;
            let members = strings(field(co, "members", &iat)?, &iat.key("members"))?;
            coverage.push((target.to_string(), members));
        }
    }

    let policy = match o.get("policy") {
        None => None,
        Some(p) => Some(parse_policy(
            string(p, &at.key("policy"))?,
            &at.key("policy"),
        )?),
    };
    let asm = FinAssembler::new(&objects, initial, &morphisms, &compose, &coverage)
        .map_err(|e| CliError::core_at(at.to_string(), e))?;
    Ok(AssemblerInput { asm, policy })
}

/// Serializes an assembler in the input schema, so the output of one command
/// can be fed to another. Identities and the empty family on the initial
/// object stay implicit.
pub fn assembler_json(a: &FinAssembler) -> Value {
    let is_id = |f: usize| a.identity(a.morphisms()[f].src) == f;
    let name = |f: usize| {
        let m = &a.morphisms()[f];
        if is_id(f) {
            format!("id_{}", a.objects()[m.src])
        } else {
            m.name.clone()
        }
    };
    let morphisms: Vec<Value> = (0..a.morphisms().len())
        .filter(|&f| !is_id(f))
        .map(|f| {
            let m = &a.morphisms()[f];
            json!({ "id": m.name, "src": a.objects()[m.src], "dst": a.objects()[m.dst] })
        })
        .collect();
    let mut compose = Vec::new();
    for f in (0..a.morphisms().len()).filter(|&f| !is_id(f)) {
        for g in (0..a.morphisms().len()).filter(|&g| !is_id(g)) {
            if let Some(fg) = a.compose(f, g) {
                compose.push(json!([name(f), name(g), name(fg)]));
            }
        }
    }
    let coverage: Vec<Value> = a
        .coverage()
        .iter()
        .filter(|fam| !(fam.target == a.initial() && fam.members.is_empty()))
        .map(|fam| {
            let members: Vec<String> = fam.members.iter().map(|&m| name(m)).collect();
            json!({ "target": a.objects()[fam.target], "members": members })
        })
        .collect();
    json!({
        "objects": a.objects(),
        "initial": a.objects()[a.initial()],
        "morphisms": morphisms,
        "compose": compose,
        "coverage": coverage,
    })
}
