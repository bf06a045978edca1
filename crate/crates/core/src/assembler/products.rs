use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Family, FinAssembler, Morphism};
use crate::error::{Error, Result};

/// How `⊠` treats a product family that is empty because one factor is the
/// empty family on an initial object while the other target is not initial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Policy {
    /// Drop such families, so wedge objects keep their classes.
    #[default]
    ExcludeDegenerate,
    /// Keep them, so every wedge object has an empty covering family.
    Literal,
}

/// Covering families of `a` together with the trivial families.
fn factor_families(a: &FinAssembler) -> Vec<Family> {
    let mut out: Vec<Family> = a.coverage.clone();
    out.extend((0..a.objects.len()).map(|o| Family::new(o, vec![a.identity[o]])));
    out.sort();
    out.dedup();
    out
}

/// `A ⊠ B`: the product category with products of covering families.
pub fn box_product(a: &FinAssembler, b: &FinAssembler, policy: Policy) -> FinAssembler {
    let (na, nb) = (a.objects.len(), b.objects.len());
    let (ma, mb) = (a.morphisms.len(), b.morphisms.len());
    let obj = |i: usize, j: usize| i * nb + j;
    let mor = |f: usize, g: usize| f * mb + g;

    let mut objects = Vec::with_capacity(na * nb);
    for x in &a.objects {
        for y in &b.objects {
            objects.push(format!("({x},{y})"));
        }
    }
    let mut morphisms = Vec::with_capacity(ma * mb);
    for f in &a.morphisms {
        for g in &b.morphisms {
            morphisms.push(Morphism {
                name: format!("({},{})", f.name, g.name),
                src: obj(f.src, g.src),
                dst: obj(f.dst, g.dst),
            });
        }
    }
    let identity = (0..na)
        .flat_map(|i| (0..nb).map(move |j| (i, j)))
        .map(|(i, j)| mor(a.identity[i], b.identity[j]))
        .collect();
    let m = ma * mb;
    let mut comp = vec![None; m * m];
    for f1 in 0..ma {
        for f2 in 0..ma {
            let Some(f) = a.compose(f1, f2) else { continue };
            for g1 in 0..mb {
                for g2 in 0..mb {
                    if let Some(g) = b.compose(g1, g2) {
                        comp[mor(f1, g1) * m + mor(f2, g2)] = Some(mor(f, g));
                    }
                }
            }
        }
    }
    let mut coverage = Vec::new();
    for fa in factor_families(a) {
        for fb in factor_families(b) {
            let members: Vec<usize> = fa
                .members
                .iter()
                .flat_map(|&f| fb.members.iter().map(move |&g| mor(f, g)))
                .collect();
            let degenerate =
                members.is_empty() && ((fa.target == a.initial) != (fb.target == b.initial));
            if degenerate && policy == Policy::ExcludeDegenerate {
                continue;
            }
            coverage.push(Family::new(obj(fa.target, fb.target), members));
        }
    }
    FinAssembler::from_parts(
        objects,
        obj(a.initial, b.initial),
        morphisms,
        identity,
        comp,
        coverage,
    )
}

/// `A ∧ B`: `A ⊠ B` with every object having exactly one initial coordinate
/// removed as a sieve.
pub fn smash_product(a: &FinAssembler, b: &FinAssembler) -> FinAssembler {
    let boxed = box_product(a, b, Policy::Literal);
    let nb = b.objects.len();
    let wedge: Vec<usize> = (0..boxed.objects.len())
        .filter(|&o| (o / nb == a.initial) != (o % nb == b.initial))
        .collect();
    remove_objects(&boxed, &wedge).expect("the wedge is a sieve")
}

/// `A ∖ D` for the sieve `D` generated by the listed objects, which must
/// already be closed under sources of incoming morphisms. The initial object
/// is never removed.
pub fn remove_sieve<S: AsRef<str>>(a: &FinAssembler, sieve: &[S]) -> Result<FinAssembler> {
    let ids = sieve
        .iter()
        .map(|s| {
            a.object_index(s.as_ref())
                .ok_or_else(|| Error::InvalidAssembler(format!("unknown object `{}`", s.as_ref())))
        })
        .collect::<Result<Vec<_>>>()?;
    remove_objects(a, &ids)
}

fn remove_objects(a: &FinAssembler, ids: &[usize]) -> Result<FinAssembler> {
    let mut removed = vec![false; a.objects.len()];
    for &o in ids {
        if o != a.initial {
            removed[o] = true;
        }
    }
    for mf in &a.morphisms {
        if removed[mf.dst] && !removed[mf.src] && mf.src != a.initial {
            return Err(Error::NotASieve(format!(
                "`{}` maps into `{}` but is not in the sieve",
                a.objects[mf.src], a.objects[mf.dst]
            )));
        }
    }
    let mut obj_map = vec![usize::MAX; a.objects.len()];
    let mut objects: Vec<String> = Vec::new();
    for (o, name) in a.objects.iter().enumerate() {
        if !removed[o] {
            obj_map[o] = objects.len();
            objects.push(name.clone());
        }
    }
    let mut mor_map = vec![usize::MAX; a.morphisms.len()];
    let mut morphisms = Vec::new();
    for (f, mf) in a.morphisms.iter().enumerate() {
        if !removed[mf.src] && !removed[mf.dst] {
            mor_map[f] = morphisms.len();
            morphisms.push(Morphism {
                name: mf.name.clone(),
                src: obj_map[mf.src],
                dst: obj_map[mf.dst],
            });
        }
    }
    let m = morphisms.len();
    let mut comp = vec![None; m * m];
    let old_m = a.morphisms.len();
    for (f, &nf) in mor_map.iter().enumerate() {
        if nf == usize::MAX {
            continue;
        }
        for (g, &ng) in mor_map.iter().enumerate() {
            if ng == usize::MAX {
                continue;
            }
            if let Some(fg) = a.comp_table()[f * old_m + g] {
                comp[nf * m + ng] = Some(mor_map[fg]);
            }
        }
    }
    let identity = (0..a.objects.len())
        .filter(|&o| !removed[o])
        .map(|o| mor_map[a.identity[o]])
        .collect();
    let coverage = a
        .coverage
        .iter()
        .filter(|fam| !removed[fam.target])
        .map(|fam| {
            let members = fam
                .members
                .iter()
                .filter(|&&f| !removed[a.morphisms[f].src])
                .map(|&f| mor_map[f])
                .collect();
            Family::new(obj_map[fam.target], members)
        })
        .collect();
    Ok(FinAssembler::from_parts(
        objects,
        obj_map[a.initial],
        morphisms,
        identity,
        comp,
        coverage,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::{example_square, k0, s_asm, validate, AbelianGroup};
    use super::*;

    #[test]
    fn s_box_s() {
        let s = s_asm();
        let bx = box_product(&s, &s, Policy::default());
        assert!(validate(&bx).is_empty());
        assert_eq!(bx.noninitial().count(), 3);
        assert_eq!(
            k0(&bx).unwrap(),
            AbelianGroup {
                rank: 3,
                torsion: vec![]
            }
        );
        let lit = box_product(&s, &s, Policy::Literal);
        assert_eq!(
            k0(&lit).unwrap(),
            AbelianGroup {
                rank: 1,
                torsion: vec![]
            }
        );
    }

    #[test]
    fn smash_with_unit() {
        let s = s_asm();
        let ss = smash_product(&s, &s);
        assert!(validate(&ss).is_empty());
        assert_eq!(ss.objects(), ["(0,0)", "(*,*)"]);
        assert_eq!(k0(&ss).unwrap().rank, 1);
        let sq = example_square();
        let sc = smash_product(&s, &sq);
        assert!(validate(&sc).is_empty());
        assert_eq!(sc.noninitial().count(), 4);
        assert_eq!(k0(&sc).unwrap(), k0(&sq).unwrap());
        assert_eq!(k0(&smash_product(&sq, &s)).unwrap(), k0(&sq).unwrap());
    }

    #[test]
    fn square_products() {
        let sq = example_square();
        let cut = remove_sieve(&sq, &["A"]).unwrap();
        for (x, y) in [(&sq, &cut), (&cut, &cut), (&sq, &sq)] {
            let sm = smash_product(x, y);
            assert_eq!(
                sm.noninitial().count(),
                x.noninitial().count() * y.noninitial().count()
            );
            let bx = box_product(x, y, Policy::default());
            assert!(k0(&bx).unwrap().rank >= k0(&sm).unwrap().rank);
        }
    }

    #[test]
    fn sieve_checks() {
        let sq = example_square();
        assert!(matches!(
            remove_sieve(&sq, &["B"]),
            Err(Error::NotASieve(_))
        ));
        assert!(matches!(
            remove_sieve(&sq, &["Q"]),
            Err(Error::InvalidAssembler(_))
        ));
        let cut = remove_sieve(&sq, &["A", "0"]).unwrap();
        assert_eq!(cut.objects(), ["0", "B", "C", "D"]);
        assert!(validate(&cut).is_empty());
    }
}
