//! Finite assemblers: small categories with a coverage, given by explicit
//! tables. Supports axiom checking, pullbacks by cone enumeration, the
//! closure of disjoint covering families, `K_0` and the `⊠`, `∧` and sieve
//! removal constructions.

mod products;
mod snf;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use products::{box_product, remove_sieve, smash_product, Policy};
pub use snf::{cokernel, invariant_factors, AbelianGroup};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// A family of morphisms into `target`, stored as a sorted multiset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Family {
    pub target: usize,
    pub members: Vec<usize>,
}

impl Family {
    pub fn new(target: usize, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        Family { target, members }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAssembler {
    objects: Vec<String>,
    initial: usize,
    morphisms: Vec<Morphism>,
    identity: Vec<usize>,
    /// `comp[f·M + g] = f∘g` when `dst(g) = src(f)`.
    comp: Vec<Option<usize>>,
    coverage: Vec<Family>,
}

fn invalid(msg: String) -> Error {
    Error::InvalidAssembler(msg)
}

impl FinAssembler {
    /// Builds an assembler from named data. Identities are added as
    /// `id_<object>` with their compositions; `compose` lists `(f, g, f∘g)`
    /// for the remaining composable pairs. The empty family on the initial
    /// object is always part of the coverage.
    pub fn new<S: AsRef<str>>(
        objects: &[S],
        initial: &str,
        morphisms: &[(S, S, S)],
        compose: &[(S, S, S)],
        coverage: &[(S, Vec<S>)],
    ) -> Result<Self> {
        let objects: Vec<String> = objects.iter().map(|o| String::from(o.as_ref())).collect();
        let obj_index: BTreeMap<&str, usize> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.as_str(), i))
            .collect();
        if obj_index.len() != objects.len() {
            return Err(invalid("duplicate object id".into()));
        }
        let obj = |name: &str| {
            obj_index
                .get(name)
                .copied()
                .ok_or_else(|| invalid(format!("unknown object `{name}`")))
        };
        let initial = obj(initial)?;

        let mut all = Vec::with_capacity(objects.len() + morphisms.len());
        let mut identity = Vec::with_capacity(objects.len());
        for (i, o) in objects.iter().enumerate() {
            identity.push(all.len());
            all.push(Morphism {
                name: format!("id_{o}"),
                src: i,
                dst: i,
            });
        }
        for (name, src, dst) in morphisms {
            all.push(Morphism {
                name: String::from(name.as_ref()),
                src: obj(src.as_ref())?,
                dst: obj(dst.as_ref())?,
            });
        }
        let mor_index: BTreeMap<&str, usize> = all
            .iter()
            .enumerate()
            .map(|(i, m)| (m.name.as_str(), i))
            .collect();
        if mor_index.len() != all.len() {
            return Err(invalid(
                "duplicate morphism id (identities are named id_<object>)".into(),
            ));
        }
        let mor = |name: &str| {
            mor_index
                .get(name)
                .copied()
                .ok_or_else(|| invalid(format!("unknown morphism `{name}`")))
        };

        let m = all.len();
        let mut comp = vec![None; m * m];
        for (f, mf) in all.iter().enumerate() {
            comp[identity[mf.dst] * m + f] = Some(f);
            comp[f * m + identity[mf.src]] = Some(f);
        }
        for (f, g, fg) in compose {
            let (f, g, fg) = (mor(f.as_ref())?, mor(g.as_ref())?, mor(fg.as_ref())?);
            let (mf, mg, mfg) = (&all[f], &all[g], &all[fg]);
            if mg.dst != mf.src {
                return Err(invalid(format!(
                    "`{}` and `{}` are not composable",
                    mf.name, mg.name
                )));
            }
            if mfg.src != mg.src || mfg.dst != mf.dst {
                return Err(invalid(format!(
                    "`{}` has the wrong endpoints for `{} ∘ {}`",
                    mfg.name, mf.name, mg.name
                )));
            }
            match comp[f * m + g] {
                Some(prev) if prev != fg => {
                    return Err(invalid(format!(
                        "conflicting composites for `{} ∘ {}`",
                        mf.name, mg.name
                    )));
                }
                _ => comp[f * m + g] = Some(fg),
            }
        }

        let mut cov = BTreeSet::new();
        cov.insert(Family::new(initial, Vec::new()));
        for (target, members) in coverage {
            let t = obj(target.as_ref())?;
            let members = members
                .iter()
                .map(|x| mor(x.as_ref()))
                .collect::<Result<Vec<_>>>()?;
            if let Some(&bad) = members.iter().find(|&&x| all[x].dst != t) {
                return Err(invalid(format!(
                    "family member `{}` does not map to `{}`",
                    all[bad].name, objects[t]
                )));
            }
            cov.insert(Family::new(t, members));
        }
        Ok(FinAssembler {
            objects,
            initial,
            morphisms: all,
            identity,
            comp,
            coverage: cov.into_iter().collect(),
        })
    }

    /// A preorder category: one morphism `a -> b` whenever `b` is reachable
    /// from `a` through `relations`, named `a->b`. Coverage families list
    /// member sources.
    pub fn preorder<S: AsRef<str>>(
        objects: &[S],
        initial: &str,
        relations: &[(S, S)],
        coverage: &[(S, Vec<S>)],
    ) -> Result<Self> {
        let names: Vec<&str> = objects.iter().map(|o| o.as_ref()).collect();
        let n = names.len();
        let idx = |s: &str| {
            names
                .iter()
                .position(|&o| o == s)
                .ok_or_else(|| invalid(format!("unknown object `{s}`")))
        };
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in relations {
            reach[idx(a.as_ref())?][idx(b.as_ref())?] = true;
        }
        for k in 0..n {
            let via = reach[k].clone();
            for row in reach.iter_mut().filter(|row| row[k]) {
                for (x, &y) in row.iter_mut().zip(&via) {
                    *x |= y;
                }
            }
        }
        let arrow = |i: usize, j: usize| format!("{}->{}", names[i], names[j]);
        let mut morphisms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && reach[i][j] {
                    morphisms.push((arrow(i, j), String::from(names[i]), String::from(names[j])));
                }
            }
        }
        let mut compose = Vec::new();
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i && reach[i][j]) {
                for k in (0..n).filter(|&k| k != j && k != i && reach[j][k]) {
                    compose.push((arrow(j, k), arrow(i, j), arrow(i, k)));
                }
            }
        }
        let coverage = coverage
            .iter()
            .map(|(t, srcs)| {
                let t = idx(t.as_ref())?;
                let members = srcs
                    .iter()
                    .map(|s| Ok(arrow(idx(s.as_ref())?, t)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((String::from(names[t]), members))
            })
            .collect::<Result<Vec<_>>>()?;
        let names: Vec<String> = names.iter().map(|&s| String::from(s)).collect();
        FinAssembler::new(&names, initial, &morphisms, &compose, &coverage)
    }

    pub(crate) fn from_parts(
        objects: Vec<String>,
        initial: usize,
        morphisms: Vec<Morphism>,
        identity: Vec<usize>,
        comp: Vec<Option<usize>>,
        coverage: Vec<Family>,
    ) -> Self {
        let mut cov: BTreeSet<Family> = coverage.into_iter().collect();
        cov.insert(Family::new(initial, Vec::new()));
        FinAssembler {
            objects,
            initial,
            morphisms,
            identity,
            comp,
            coverage: cov.into_iter().collect(),
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn identity(&self, obj: usize) -> usize {
        self.identity[obj]
    }

    pub fn coverage(&self) -> &[Family] {
        &self.coverage
    }

    pub fn noninitial(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects.len()).filter(move |&o| o != self.initial)
    }

    /// `f ∘ g`, if composable.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.comp[f * self.morphisms.len() + g]
    }

    pub(crate) fn comp_table(&self) -> &[Option<usize>] {
        &self.comp
    }

    pub fn hom(&self, src: usize, dst: usize) -> impl Iterator<Item = usize> + '_ {
        self.morphisms
            .iter()
            .enumerate()
            .filter(move |(_, m)| m.src == src && m.dst == dst)
            .map(|(i, _)| i)
    }

    fn incoming(&self, dst: usize) -> impl Iterator<Item = usize> + '_ {
        self.morphisms
            .iter()
            .enumerate()
            .filter(move |(_, m)| m.dst == dst)
            .map(|(i, _)| i)
    }

    pub fn is_iso(&self, f: usize) -> bool {
        let mf = &self.morphisms[f];
        self.hom(mf.dst, mf.src).any(|g| {
            self.compose(f, g) == Some(self.identity[mf.dst])
                && self.compose(g, f) == Some(self.identity[mf.src])
        })
    }

    pub fn family_name(&self, fam: &Family) -> String {
        let members: Vec<&str> = fam
            .members
            .iter()
            .map(|&m| self.morphisms[m].name.as_str())
            .collect();
        format!("{} <= {{{}}}", self.objects[fam.target], members.join(", "))
    }
}

/// A failed assembler axiom, with witnesses by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssemblerViolation {
    MissingComposite {
        f: String,
        g: String,
    },
    NotAssociative {
        f: String,
        g: String,
        h: String,
    },
    InitialNotUnique {
        object: String,
        count: usize,
    },
    /// `f∘g = f∘h` with `g ≠ h`.
    NotMonic {
        f: String,
        g: String,
        h: String,
    },
}

impl fmt::Display for AssemblerViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssemblerViolation::MissingComposite { f, g } => {
                write!(out, "composite {f} ∘ {g} is not defined")
            }
            AssemblerViolation::NotAssociative { f, g, h } => {
                write!(out, "({f} ∘ {g}) ∘ {h} differs from {f} ∘ ({g} ∘ {h})")
            }
            AssemblerViolation::InitialNotUnique { object, count } => {
                write!(out, "initial object has {count} morphisms to {object}")
            }
            AssemblerViolation::NotMonic { f, g, h } => {
                write!(out, "{f} is not monic: {f} ∘ {g} = {f} ∘ {h}")
            }
        }
    }
}

/// Checks totality and associativity of composition, the initial object and
/// axiom (M), returning every violation found.
pub fn validate(a: &FinAssembler) -> Vec<AssemblerViolation> {
    let name = |i: usize| a.morphisms[i].name.clone();
    let m = a.morphisms.len();
    let mut out = Vec::new();
    for f in 0..m {
        for g in 0..m {
            if a.morphisms[g].dst == a.morphisms[f].src && a.compose(f, g).is_none() {
                out.push(AssemblerViolation::MissingComposite {
                    f: name(f),
                    g: name(g),
                });
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for f in 0..m {
        for g in a.incoming(a.morphisms[f].src) {
            let fg = a.compose(f, g).expect("checked");
            for h in a.incoming(a.morphisms[g].src) {
                if a.compose(fg, h) != a.compose(f, a.compose(g, h).expect("checked")) {
                    out.push(AssemblerViolation::NotAssociative {
                        f: name(f),
                        g: name(g),
                        h: name(h),
                    });
                }
            }
        }
    }
    for o in 0..a.objects.len() {
        let count = a.hom(a.initial, o).count();
        if count != 1 {
            out.push(AssemblerViolation::InitialNotUnique {
                object: a.objects[o].clone(),
                count,
            });
        }
    }
    for f in 0..m {
        let src = a.morphisms[f].src;
        let into: Vec<usize> = a.incoming(src).collect();
        for (i, &g) in into.iter().enumerate() {
            for &h in &into[i + 1..] {
                if a.morphisms[g].src == a.morphisms[h].src && a.compose(f, g) == a.compose(f, h) {
                    out.push(AssemblerViolation::NotMonic {
                        f: name(f),
                        g: name(g),
                        h: name(h),
                    });
                }
            }
        }
    }
    out
}

fn ensure_valid(a: &FinAssembler) -> Result<()> {
    match validate(a).first() {
        None => Ok(()),
        Some(v) => Err(invalid(format!("{v}"))),
    }
}

/// A limit cone `(P, p: P → src f, q: P → src g)` for `f` and `g` with a
/// common target, found by enumerating all cones and testing the universal
/// property.
pub fn pullback_cone(a: &FinAssembler, f: usize, g: usize) -> Option<(usize, usize, usize)> {
    let (mf, mg) = (&a.morphisms[f], &a.morphisms[g]);
    assert_eq!(mf.dst, mg.dst, "pullback needs a common target");
    let mut cones = Vec::new();
    for x in 0..a.objects.len() {
        for p in a.hom(x, mf.src) {
            for q in a.hom(x, mg.src) {
                if a.compose(f, p) == a.compose(g, q) {
                    cones.push((x, p, q));
                }
            }
        }
    }
    cones.iter().copied().find(|&(pobj, p, q)| {
        cones.iter().all(|&(x, p2, q2)| {
            a.hom(x, pobj)
                .filter(|&u| a.compose(p, u) == Some(p2) && a.compose(q, u) == Some(q2))
                .count()
                == 1
        })
    })
}

pub fn pullback(a: &FinAssembler, f: usize, g: usize) -> Option<usize> {
    pullback_cone(a, f, g).map(|(p, _, _)| p)
}

pub fn is_disjoint(a: &FinAssembler, f: usize, g: usize) -> bool {
    pullback(a, f, g) == Some(a.initial)
}

fn family_is_disjoint(
    a: &FinAssembler,
    fam: &Family,
    memo: &mut BTreeMap<(usize, usize), bool>,
) -> bool {
    for (i, &f) in fam.members.iter().enumerate() {
        for &g in &fam.members[i + 1..] {
            let d = *memo.entry((f, g)).or_insert_with(|| is_disjoint(a, f, g));
            if !d {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Refinements producing larger families are skipped.
    pub max_family_size: usize,
    pub max_families: usize,
    pub max_rounds: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_family_size: 8,
            max_families: 10_000,
            max_rounds: 64,
        }
    }
}

/// The covering families generated from the coverage, the trivial families
/// and the isomorphisms by repeated refinement, up to the caps. Returns
/// every family reached; callers select the disjoint ones.
pub fn covering_families(a: &FinAssembler, caps: Caps) -> Result<Vec<Family>> {
    let mut base: BTreeMap<usize, BTreeSet<Family>> = BTreeMap::new();
    for fam in &a.coverage {
        base.entry(fam.target).or_default().insert(fam.clone());
    }
    for (f, mf) in a.morphisms.iter().enumerate() {
        if a.is_iso(f) {
            base.entry(mf.dst)
                .or_default()
                .insert(Family::new(mf.dst, vec![f]));
        }
    }
    let mut all: BTreeSet<Family> = base.values().flatten().cloned().collect();
    let mut frontier: Vec<Family> = all.iter().cloned().collect();
    let mut rounds = 0;
    while !frontier.is_empty() {
        rounds += 1;
        if rounds > caps.max_rounds {
            return Err(Error::CapExceeded {
                cap: "max_rounds",
                limit: caps.max_rounds,
            });
        }
        let mut next = Vec::new();
        for fam in &frontier {
            for (i, &member) in fam.members.iter().enumerate() {
                let Some(refinements) = base.get(&a.morphisms[member].src) else {
                    continue;
                };
                for r in refinements {
                    let size = fam.members.len() - 1 + r.members.len();
                    if size > caps.max_family_size {
                        continue;
                    }
                    let mut members = Vec::with_capacity(size);
                    members.extend_from_slice(&fam.members[..i]);
                    members.extend_from_slice(&fam.members[i + 1..]);
                    members.extend(
                        r.members
                            .iter()
                            .map(|&g| a.compose(member, g).expect("composable")),
                    );
                    let refined = Family::new(fam.target, members);
                    if all.insert(refined.clone()) {
                        if all.len() > caps.max_families {
                            return Err(Error::CapExceeded {
                                cap: "max_families",
                                limit: caps.max_families,
                            });
                        }
                        next.push(refined);
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(all.into_iter().collect())
}

/// The finite disjoint covering families, in canonical order.
pub fn cover_closure(a: &FinAssembler, caps: Caps) -> Result<Vec<Family>> {
    ensure_valid(a)?;
    let mut memo = BTreeMap::new();
    Ok(covering_families(a, caps)?
        .into_iter()
        .filter(|f| family_is_disjoint(a, f, &mut memo))
        .collect())
}

/// The relation rows `[target] - Σ [member sources]` over noninitial
/// objects, one per disjoint covering family.
pub fn relation_matrix(a: &FinAssembler, families: &[Family]) -> Vec<Vec<i64>> {
    let cols: Vec<usize> = a.noninitial().collect();
    let col = |o: usize| cols.iter().position(|&c| c == o);
    let mut rows = BTreeSet::new();
    for fam in families {
        let mut row = vec![0i64; cols.len()];
        if let Some(c) = col(fam.target) {
            row[c] += 1;
        }
        for &m in &fam.members {
            if let Some(c) = col(a.morphisms[m].src) {
                row[c] -= 1;
            }
        }
        if row.iter().any(|&x| x != 0) {
            rows.insert(row);
        }
    }
    rows.into_iter().collect()
}

/// `K_0` as generators for noninitial objects modulo one relation per
/// finite disjoint covering family.
pub fn k0(a: &FinAssembler) -> Result<AbelianGroup> {
    k0_with_caps(a, Caps::default())
}

pub fn k0_with_caps(a: &FinAssembler, caps: Caps) -> Result<AbelianGroup> {
    let families = cover_closure(a, caps)?;
    cokernel(&relation_matrix(a, &families), a.objects.len() - 1)
}

/// `S^Asm`: the initial object and one point.
pub fn s_asm() -> FinAssembler {
    FinAssembler::preorder(&["0", "*"], "0", &[("0", "*")], &[]).expect("fixture")
}

/// The five-object square `0 → A → B, C → D` with `{B → D, C → D}` covering
/// `D` and an empty family on `A`.
pub fn example_square() -> FinAssembler {
    FinAssembler::preorder(
        &["0", "A", "B", "C", "D"],
        "0",
        &[("0", "A"), ("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")],
        &[("D", vec!["B", "C"]), ("A", vec![])],
    )
    .expect("fixture")
}
