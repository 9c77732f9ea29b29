//! Extensions of categories `K -> E -> C` and the extension
//! `N_⊔ -> Gr(A, N) -> Gr(A)` built from a right A-module.

use rayon::prelude::*;

use crate::coeffsys::{require_finite, ABimodule, AlgebraPrecosheaf, RightAModule};
use crate::constructions::{gr_a, gr_am, gr_an, GrCategory};
use crate::error::{Error, Result};
use crate::exactlin::{Field, FiniteSpace};
use crate::fincat::{CatFunctor, FinCategory, MorId, Morphism};
use crate::validation::ValidationReport;

const MAX_WITNESSES: usize = 32;

/// `kernel --iota--> total --pi--> base`, identity on objects.
#[derive(Debug, Clone)]
pub struct CatExtension {
    pub kernel: FinCategory,
    pub total: FinCategory,
    pub base: FinCategory,
    pub iota: CatFunctor,
    pub pi: CatFunctor,
}

/// Checks that `iota` is injective, `pi` surjective, and that for every
/// pair `f, g` with the same endpoints, `pi(f) = pi(g)` iff there is exactly
/// one kernel morphism `h` with `f iota(h) = g`.
pub fn check_extension(e: &CatExtension) -> Result<ValidationReport> {
    if e.kernel.objects() != e.total.objects() || e.total.objects() != e.base.objects() {
        return Err(Error::ObjectSetsDiffer(format!("kernel {:?}, total {:?}, base {:?}", e.kernel.objects(), e.total.objects(), e.base.objects())));
    }
    let mut report = ValidationReport::new();
    for (name, cat) in [("kernel", &e.kernel), ("total", &e.total), ("base", &e.base)] {
        report.merge(name, cat.validate());
    }
    report.merge("iota", e.iota.validate(&e.kernel, &e.total));
    report.merge("pi", e.pi.validate(&e.total, &e.base));
    if !report.is_valid() {
        return Ok(report);
    }
    let identity_on_objects = |f: &CatFunctor| f.object_map.iter().enumerate().all(|(x, &y)| x == y);
    if !identity_on_objects(&e.iota) || !identity_on_objects(&e.pi) {
        report.push("identity-on-objects", "iota or pi moves an object");
    }
    if !e.iota.is_injective_on_morphisms() {
        report.push("iota-injective", "two kernel morphisms share an image");
    }
    if !e.pi.is_surjective_on_morphisms(&e.base) {
        let missed = (0..e.base.num_morphisms()).find(|g| !e.pi.morphism_map.contains(g)).unwrap_or(0);
        report.push("pi-surjective", format!("{} is not hit", e.base.morphism(missed).name));
    }
    let total = &e.total;
    let per_f: Vec<Vec<(String, String)>> = (0..total.num_morphisms())
        .into_par_iter()
        .map(|f| {
            let (x, y) = (total.dom(f), total.cod(f));
            let mut hits: Vec<Vec<MorId>> = vec![Vec::new(); total.num_morphisms()];
            let mut out = Vec::new();
            for h in e.kernel.hom(y, y) {
                match total.compose(f, e.iota.morphism_map[h]) {
                    Some(g) => hits[g].push(h),
                    None => {
                        out.push(("composition".into(), format!("f = {} cannot be followed by iota({})", total.morphism(f).name, e.kernel.morphism(h).name)))
                    }
                }
            }
            for g in total.hom(x, y) {
                let same = e.pi.morphism_map[f] == e.pi.morphism_map[g];
                let witness = |what: &str| {
                    let hs: Vec<&str> = hits[g].iter().map(|&h| e.kernel.morphism(h).name.as_str()).collect();
                    format!("f = {}, g = {}: {what} (h in {{{}}})", total.morphism(f).name, total.morphism(g).name, hs.join(", "))
                };
                match (same, hits[g].len()) {
                    (true, 0) => out.push(("condition-2-existence".into(), witness("pi(f) = pi(g) but no h"))),
                    (true, 1) | (false, 0) => {}
                    (true, _) => out.push(("condition-2-uniqueness".into(), witness("h is not unique"))),
                    (false, _) => out.push(("condition-2-converse".into(), witness("f iota(h) = g but pi(f) != pi(g)"))),
                }
            }
            out
        })
        .collect();
    let mut counts = std::collections::HashMap::new();
    for (rule, witness) in per_f.into_iter().flatten() {
        let n = counts.entry(rule.clone()).or_insert(0usize);
        *n += 1;
        if *n <= MAX_WITNESSES {
            report.push(rule, witness);
        }
    }
    Ok(report)
}

/// `N_⊔`: one object per base object, `hom(x, x) = N(x)` under addition.
pub fn disjoint_group_category<K: Field>(base: &FinCategory, field: &K, dims: &[usize]) -> Result<(FinCategory, Vec<FiniteSpace<K>>, Vec<usize>)> {
    require_finite(field, "the kernel category")?;
    let spaces = dims.iter().map(|&d| FiniteSpace::new(field, d)).collect::<Result<Vec<_>, _>>()?;
    let mut offsets = Vec::new();
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    for (x, space) in spaces.iter().enumerate() {
        offsets.push(morphisms.len());
        identities.push(morphisms.len());
        for v in space.vectors() {
            morphisms.push(Morphism { name: format!("{}@{}", field.format_vec(&v), base.object_name(x)), dom: x, cod: x });
        }
    }
    let owner: Vec<usize> = morphisms.iter().map(|m| m.dom).collect();
    let cat = FinCategory::from_fn(base.objects().to_vec(), morphisms, identities, |a, b| {
        let x = owner[a];
        let s = &spaces[x];
        offsets[x] + s.index(&field.vec_add(&s.vector(a - offsets[x]), &s.vector(b - offsets[x])))
    });
    Ok((cat, spaces, offsets))
}

fn assemble<K: Field>(pre: &AlgebraPrecosheaf<K>, dims: &[usize], total: GrCategory<K>) -> Result<CatExtension> {
    let k = pre.field();
    let c = &pre.base;
    let (kernel, spaces, _) = disjoint_group_category(c, k, dims)?;
    let base = gr_a(pre)?;
    let mut iota = Vec::with_capacity(kernel.num_morphisms());
    for x in 0..c.num_objects() {
        for m in spaces[x].vectors() {
            iota.push(total.encode(c.identity(x), pre.algebras[x].unit(), &m));
        }
    }
    let pi = (0..total.category.num_morphisms())
        .map(|h| {
            let (f, r, _) = total.decode(h);
            base.encode(f, &r, &[])
        })
        .collect();
    let ids = |n: usize| (0..n).collect::<Vec<_>>();
    Ok(CatExtension {
        iota: CatFunctor { object_map: ids(c.num_objects()), morphism_map: iota },
        pi: CatFunctor { object_map: ids(c.num_objects()), morphism_map: pi },
        kernel,
        total: total.category,
        base: base.category,
    })
}

/// `N_⊔ -> Gr(A, N) -> Gr(A)` with `iota(m) = (1, m, 1_x)` and
/// `pi(r, m, f) = (r, f)`.
pub fn build_module_extension<K: Field>(pre: &AlgebraPrecosheaf<K>, rmod: &RightAModule<K>) -> Result<CatExtension> {
    let dims: Vec<usize> = rmod.modules.iter().map(|m| m.dim).collect();
    assemble(pre, &dims, gr_an(pre, rmod)?)
}

/// The same sequence with `Gr(A, M)` for a bimodule in the middle. With a
/// genuinely two-sided `M` this is usually not an extension.
pub fn build_bimodule_sequence<K: Field>(pre: &AlgebraPrecosheaf<K>, bimod: &ABimodule<K>) -> Result<CatExtension> {
    let dims: Vec<usize> = bimod.modules.iter().map(|m| m.dim).collect();
    assemble(pre, &dims, gr_am(pre, bimod)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{PrimeField, Rationals};
    use crate::fdalgebra::FDAlgebra;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn trivial_kernel_is_extension() {
        let c = FinCategory::poset_a2();
        let kernel = FinCategory::discrete(2);
        let iota = CatFunctor { object_map: vec![0, 1], morphism_map: vec![0, 1] };
        let e = CatExtension { kernel, total: c.clone(), base: c.clone(), iota, pi: CatFunctor::identity(&c) };
        assert!(check_extension(&e).unwrap().is_valid());
    }

    #[test]
    fn collapsing_parallel_pair_fails_existence() {
        // Two parallel arrows a, b: 0 -> 1 collapsed onto one.
        let objects = vec!["0".to_string(), "1".to_string()];
        let mors = vec![
            Morphism { name: "1_0".into(), dom: 0, cod: 0 },
            Morphism { name: "1_1".into(), dom: 1, cod: 1 },
            Morphism { name: "a".into(), dom: 0, cod: 1 },
            Morphism { name: "b".into(), dom: 0, cod: 1 },
        ];
        let total = FinCategory::from_fn(objects.clone(), mors, vec![0, 1], |f, g| if f < 2 { g } else { f });
        let base = FinCategory::poset_a2();
        let e = CatExtension {
            kernel: FinCategory::discrete(2),
            total,
            base,
            iota: CatFunctor { object_map: vec![0, 1], morphism_map: vec![0, 1] },
            pi: CatFunctor { object_map: vec![0, 1], morphism_map: vec![0, 1, 2, 2] },
        };
        let report = check_extension(&e).unwrap();
        assert!(report.has_rule("condition-2-existence"));
        assert!(report.violations.iter().any(|v| v.witness.contains("f = a, g = b")));
    }

    #[test]
    fn object_sets_must_agree() {
        let c = FinCategory::poset_a2();
        let e = CatExtension {
            kernel: FinCategory::trivial(),
            total: c.clone(),
            base: c.clone(),
            iota: CatFunctor { object_map: vec![0], morphism_map: vec![0] },
            pi: CatFunctor::identity(&c),
        };
        assert!(matches!(check_extension(&e), Err(Error::ObjectSetsDiffer(_))));
    }

    #[test]
    fn point_fixture_sizes_and_difference_witness() {
        let k = f2();
        let pre = AlgebraPrecosheaf::constant(&FinCategory::trivial(), &FDAlgebra::ground(&k));
        let n = RightAModule::regular(&pre);
        let e = build_module_extension(&pre, &n).unwrap();
        assert_eq!((e.total.num_morphisms(), e.base.num_morphisms(), e.kernel.num_morphisms()), (4, 2, 2));
        assert!(check_extension(&e).unwrap().is_valid());
        let gr = gr_an(&pre, &n).unwrap();
        for r in [0u32, 1] {
            for m1 in [0u32, 1] {
                for m2 in [0u32, 1] {
                    let f = gr.encode(0, &[r], &[m1]);
                    let g = gr.encode(0, &[r], &[m2]);
                    let h = e.iota.morphism_map[((m2 + 2 - m1) % 2) as usize];
                    assert_eq!(e.total.compose(f, h), Some(g));
                }
            }
        }
    }

    #[test]
    fn bimodule_sequence_is_not_an_extension() {
        let k = f2();
        let pre = AlgebraPrecosheaf::constant(&FinCategory::trivial(), &FDAlgebra::ground(&k));
        let e = build_bimodule_sequence(&pre, &ABimodule::regular(&pre)).unwrap();
        let report = check_extension(&e).unwrap();
        assert!(report.has_rule("condition-2-uniqueness") || report.has_rule("condition-2-existence"));
    }

    #[test]
    fn rationals_are_rejected() {
        let pre = AlgebraPrecosheaf::constant(&FinCategory::trivial(), &FDAlgebra::ground(&Rationals));
        assert!(matches!(build_module_extension(&pre, &RightAModule::regular(&pre)), Err(Error::Unsupported(_))));
    }
}
