use std::collections::HashMap;

use super::spec::*;
use crate::coeffsys::{ABimodule, AlgebraPrecosheaf, RightAModule};
use crate::constructions::GrCategory;
use crate::exactlin::{Field, Matrix};
use crate::fdalgebra::{AlgHom, AlgModule, FDAlgebra, Side};
use crate::fincat::{FinCategory, MorId, Morphism};
use crate::homengine::CatModule;

type Issues = Vec<SchemaIssue>;

/// The typed objects of a [`ProblemSpec`] over one field. Nothing here is
/// validated mathematically; shapes are.
#[derive(Debug, Clone)]
pub struct Problem<K: Field> {
    pub field: K,
    pub category: FinCategory,
    pub precosheaf: Option<AlgebraPrecosheaf<K>>,
    pub bimodule: Option<ABimodule<K>>,
    pub right_module: Option<RightAModule<K>>,
    pub spec: ProblemSpec,
}

impl<K: Field> Problem<K> {
    pub fn build(spec: &ProblemSpec, field: K) -> Result<Self, SpecError> {
        let mut issues = Vec::new();
        let category = build_category(&spec.category, &mut issues);
        let mut problem = Problem { field, category, precosheaf: None, bimodule: None, right_module: None, spec: spec.clone() };
        if !spec.algebras.is_empty() && issues.is_empty() {
            problem.precosheaf = problem.build_precosheaf(&mut issues);
        }
        if let Some(pre) = &problem.precosheaf {
            if let Some(b) = &spec.bimodule {
                problem.bimodule = build_coeff(pre, b, Side::Bi, "bimodule", &mut issues).map(|(modules, maps)| ABimodule { modules, maps });
            }
            if let Some(r) = &spec.right_module {
                problem.right_module = build_coeff(pre, r, Side::Right, "right_module", &mut issues).map(|(modules, maps)| RightAModule { modules, maps });
            }
        }
        if !issues.is_empty() {
            return Err(SpecError::Schema(issues));
        }
        for (name, m) in &spec.modules {
            if m.over == ModuleBase::Category {
                problem.module(name, &problem.category)?;
            }
        }
        Ok(problem)
    }

    /// The right module for constructions that need one: the explicit block,
    /// else the bimodule with its left action forgotten, else zero.
    pub fn effective_right_module(&self) -> Option<RightAModule<K>> {
        let pre = self.precosheaf.as_ref()?;
        Some(self.right_module.clone().or_else(|| self.bimodule.as_ref().map(ABimodule::forget_left)).unwrap_or_else(|| RightAModule::zero(pre)))
    }

    pub fn effective_bimodule(&self) -> Option<ABimodule<K>> {
        let pre = self.precosheaf.as_ref()?;
        Some(self.bimodule.clone().unwrap_or_else(|| ABimodule::zero(pre)))
    }

    /// Resolves the named functor module on `c`, which must be the category
    /// the module is declared over.
    pub fn module(&self, name: &str, c: &FinCategory) -> Result<CatModule<K>, SpecError> {
        let spec = self.spec.modules.get(name).ok_or_else(|| SpecError::Schema(vec![SchemaIssue::new("modules", format!("undefined module {name:?}"))]))?;
        let mut issues = Vec::new();
        let m = build_cat_module(&self.field, spec, c, &format!("modules.{name}"), &mut issues);
        match m {
            Some(m) if issues.is_empty() => Ok(m),
            _ => Err(SpecError::Schema(issues)),
        }
    }

    /// A named module over a Grothendieck construction, or `k` when `name` is absent.
    pub fn gr_module(&self, name: Option<&str>, gr: &GrCategory<K>, over: ModuleBase) -> Result<CatModule<K>, SpecError> {
        let Some(name) = name else { return Ok(CatModule::constant(&gr.category, &self.field)) };
        let declared = self.spec.modules.get(name).map(|m| m.over);
        if declared != Some(over) {
            return Err(SpecError::Schema(vec![SchemaIssue::new(
                format!("modules.{name}.over"),
                format!("expected {}", serde_json::to_string(&over).unwrap_or_default()),
            )]));
        }
        self.module(name, &gr.category)
    }

    fn build_precosheaf(&self, issues: &mut Issues) -> Option<AlgebraPrecosheaf<K>> {
        let c = &self.category;
        let k = &self.field;
        let mut specs = Vec::new();
        let mut algebras = Vec::new();
        for x in 0..c.num_objects() {
            let name = c.object_name(x);
            let (i, spec) = self
                .spec
                .algebras
                .iter()
                .enumerate()
                .find(|(_, a)| a.object.as_deref() == Some(name))
                .or_else(|| self.spec.algebras.iter().enumerate().find(|(_, a)| a.object.is_none()))?;
            specs.push(i);
            algebras.push(build_algebra(k, spec, &format!("algebras[{i}]"), issues)?);
        }
        let given: HashMap<&str, &MapSpec> = self.spec.algebra_maps.iter().map(|m| (m.morphism.as_str(), m)).collect();
        let mut maps = Vec::new();
        for f in 0..c.num_morphisms() {
            let (x, y) = (c.dom(f), c.cod(f));
            let mname = &c.morphism(f).name;
            let loc = format!("algebra_maps.{mname}");
            let m = match given.get(mname.as_str()) {
                Some(spec) => build_matrix(k, &spec.matrix, algebras[y].dim(), algebras[x].dim(), &loc, issues)?,
                None if c.is_identity(f) || specs[x] == specs[y] => Matrix::identity(k, algebras[x].dim()),
                None => {
                    issues.push(SchemaIssue::new("algebra_maps", format!("missing map for morphism {mname:?}")));
                    return None;
                }
            };
            maps.push(AlgHom { matrix: m });
        }
        Some(AlgebraPrecosheaf { base: c.clone(), algebras, maps })
    }
}

fn build_category(c: &CategorySpec, issues: &mut Issues) -> FinCategory {
    let preset = match c.preset {
        Some(CategoryPreset::Trivial) => Ok(FinCategory::trivial()),
        Some(CategoryPreset::PosetA2) => Ok(FinCategory::poset_a2()),
        Some(CategoryPreset::Discrete) => Ok(FinCategory::discrete(c.size.unwrap_or(0))),
        Some(CategoryPreset::CyclicMonoid) => FinCategory::cyclic_monoid(c.index.unwrap_or(0), c.period.unwrap_or(1)),
        Some(CategoryPreset::OneObjectGroup) => FinCategory::one_object_group(c.orders.as_deref().unwrap_or(&[])),
        None => {
            let obj: HashMap<&str, usize> = c.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
            let morphisms: Vec<Morphism> =
                c.morphisms.iter().map(|m| Morphism { name: m.name.clone(), dom: obj[m.dom.as_str()], cod: obj[m.cod.as_str()] }).collect();
            let ids: HashMap<usize, MorId> = c.morphisms.iter().enumerate().filter(|(_, m)| m.identity).map(|(i, m)| (obj[m.dom.as_str()], i)).collect();
            let identities: Vec<MorId> = (0..c.objects.len()).map(|x| ids[&x]).collect();
            let mor: HashMap<&str, MorId> = c.morphisms.iter().enumerate().map(|(i, m)| (m.name.as_str(), i)).collect();
            let mut composites: Vec<(MorId, MorId, MorId)> = Vec::new();
            for (f, m) in morphisms.iter().enumerate() {
                composites.push((identities[m.dom], f, f));
                composites.push((f, identities[m.cod], f));
            }
            composites.extend(c.composition.iter().map(|[f, g, h]| (mor[f.as_str()], mor[g.as_str()], mor[h.as_str()])));
            Ok(FinCategory::new(c.objects.clone(), morphisms, identities, composites))
        }
    };
    preset.unwrap_or_else(|e| {
        issues.push(SchemaIssue::new("category", e.to_string()));
        FinCategory::trivial()
    })
}

fn scalar<K: Field>(k: &K, s: &Scalar, loc: &str, issues: &mut Issues) -> Option<K::Elem> {
    let parsed = s.ratio().and_then(|(a, b)| k.from_ratio(a, b).ok());
    if parsed.is_none() {
        issues.push(SchemaIssue::new(loc, format!("{s:?} is not a scalar of {}", k.spec())));
    }
    parsed
}

fn build_vector<K: Field>(k: &K, v: &[Scalar], len: usize, loc: &str, issues: &mut Issues) -> Option<Vec<K::Elem>> {
    if v.len() != len {
        issues.push(SchemaIssue::new(loc, format!("expected {len} entries, found {}", v.len())));
        return None;
    }
    v.iter().enumerate().map(|(i, s)| scalar(k, s, &format!("{loc}[{i}]"), issues)).collect()
}

fn build_matrix<K: Field>(k: &K, m: &MatrixSpec, rows: usize, cols: usize, loc: &str, issues: &mut Issues) -> Option<Matrix<K>> {
    // A matrix with no rows may be written as [] whatever its width.
    if rows == 0 && m.is_empty() {
        return Some(Matrix::zeros(k, 0, cols));
    }
    if m.len() != rows {
        issues.push(SchemaIssue::new(loc, format!("expected a {rows} x {cols} matrix, found {} rows", m.len())));
        return None;
    }
    let data: Option<Vec<Vec<K::Elem>>> = m.iter().enumerate().map(|(i, r)| build_vector(k, r, cols, &format!("{loc}[{i}]"), issues)).collect();
    Matrix::from_rows(k, cols, data?).ok()
}

fn build_algebra<K: Field>(k: &K, a: &AlgebraSpec, loc: &str, issues: &mut Issues) -> Option<FDAlgebra<K>> {
    let alg = match a.preset {
        Some(AlgebraPreset::Ground) => FDAlgebra::ground(k),
        Some(AlgebraPreset::DualNumbers) => FDAlgebra::dual_numbers(k),
        Some(AlgebraPreset::Split) => FDAlgebra::split(k, a.n.unwrap_or(1)),
        Some(AlgebraPreset::UpperTriangular) => FDAlgebra::upper_triangular(k),
        Some(AlgebraPreset::GroupAlgebra) => match FDAlgebra::group_algebra(k, a.orders.as_deref().unwrap_or(&[])) {
            Ok(g) => g,
            Err(e) => {
                issues.push(SchemaIssue::new(loc, e.to_string()));
                return None;
            }
        },
        None => {
            let products = a.products.as_ref()?;
            let d = products.len();
            let unit = build_vector(k, a.unit.as_ref()?, d, &format!("{loc}.unit"), issues)?;
            let labels = a.labels.clone().unwrap_or_else(|| (0..d).map(|i| format!("e{i}")).collect());
            if labels.len() != d {
                issues.push(SchemaIssue::new(format!("{loc}.labels"), format!("expected {d} labels")));
                return None;
            }
            let mut structure = Vec::with_capacity(d * d * d);
            for (i, row) in products.iter().enumerate() {
                if row.len() != d {
                    issues.push(SchemaIssue::new(format!("{loc}.products[{i}]"), format!("expected {d} products")));
                    return None;
                }
                for (j, v) in row.iter().enumerate() {
                    structure.extend(build_vector(k, v, d, &format!("{loc}.products[{i}][{j}]"), issues)?);
                }
            }
            return FDAlgebra::from_structure(k, structure, unit, labels).ok();
        }
    };
    if let Some(labels) = &a.labels {
        if labels.len() != alg.dim() {
            issues.push(SchemaIssue::new(format!("{loc}.labels"), format!("expected {} labels", alg.dim())));
        }
    }
    Some(alg)
}

fn build_coeff<K: Field>(
    pre: &AlgebraPrecosheaf<K>,
    spec: &CoeffModuleSpec,
    side: Side,
    prefix: &str,
    issues: &mut Issues,
) -> Option<(Vec<AlgModule<K>>, Vec<Matrix<K>>)> {
    let c = &pre.base;
    let k = pre.field();
    match spec.preset {
        Some(CoeffPreset::Regular) => {
            let modules = pre.algebras.iter().map(|a| AlgModule::regular(a, side)).collect();
            return Some((modules, pre.maps.iter().map(|h| h.matrix.clone()).collect()));
        }
        Some(CoeffPreset::Zero) => {
            let modules = pre.algebras.iter().map(|a| AlgModule::zero(a, side)).collect();
            return Some((modules, (0..c.num_morphisms()).map(|_| Matrix::zeros(k, 0, 0)).collect()));
        }
        None => {}
    }
    let mut modules = Vec::new();
    for x in 0..c.num_objects() {
        let (i, l) = spec.objects.iter().enumerate().find(|(_, l)| l.object == c.object_name(x))?;
        let loc = format!("{prefix}.objects[{i}]");
        let n = pre.algebras[x].dim();
        let actions = |list: &[MatrixSpec], what: &str, issues: &mut Issues| -> Option<Vec<Matrix<K>>> {
            if list.len() != n {
                issues.push(SchemaIssue::new(format!("{loc}.{what}"), format!("expected {n} action matrices, found {}", list.len())));
                return None;
            }
            list.iter().enumerate().map(|(j, m)| build_matrix(k, m, l.dim, l.dim, &format!("{loc}.{what}[{j}]"), issues)).collect()
        };
        let left = if side == Side::Bi { actions(&l.left, "left", issues)? } else { Vec::new() };
        if side == Side::Right && !l.left.is_empty() {
            issues.push(SchemaIssue::new(format!("{loc}.left"), "a right module has no left action"));
        }
        let right = actions(&l.right, "right", issues)?;
        modules.push(AlgModule { side, dim: l.dim, left, right });
    }
    let given: HashMap<&str, &MapSpec> = spec.maps.iter().map(|m| (m.morphism.as_str(), m)).collect();
    let mut maps = Vec::new();
    for f in 0..c.num_morphisms() {
        let (dx, dy) = (modules[c.dom(f)].dim, modules[c.cod(f)].dim);
        let name = &c.morphism(f).name;
        let m = match given.get(name.as_str()) {
            Some(spec) => build_matrix(k, &spec.matrix, dy, dx, &format!("{prefix}.maps.{name}"), issues)?,
            None if c.is_identity(f) => Matrix::identity(k, dx),
            None if dx == 0 || dy == 0 => Matrix::zeros(k, dy, dx),
            None => {
                issues.push(SchemaIssue::new(format!("{prefix}.maps"), format!("missing map for morphism {name:?}")));
                return None;
            }
        };
        maps.push(m);
    }
    Some((modules, maps))
}

fn build_cat_module<K: Field>(k: &K, spec: &ModuleSpec, c: &FinCategory, loc: &str, issues: &mut Issues) -> Option<CatModule<K>> {
    let object = |name: &str, issues: &mut Issues| {
        let x = c.object_by_name(name);
        if x.is_none() {
            issues.push(SchemaIssue::new(loc, format!("undefined object {name:?}")));
        }
        x
    };
    match spec.preset {
        Some(ModulePreset::Constant) => return Some(CatModule::constant(c, k)),
        Some(ModulePreset::Zero) => return Some(CatModule::zero(c, k)),
        Some(ModulePreset::Representable) => {
            return Some(CatModule::representable(c, k, object(spec.object.as_deref()?, issues)?));
        }
        None => {}
    }
    let mut dims = vec![0; c.num_objects()];
    for (name, &d) in &spec.dims {
        dims[object(name, issues)?] = d;
    }
    let given: HashMap<&str, &MapSpec> = spec.maps.iter().map(|m| (m.morphism.as_str(), m)).collect();
    for name in given.keys() {
        if c.morphism_by_name(name).is_none() {
            issues.push(SchemaIssue::new(format!("{loc}.maps"), format!("undefined morphism {name:?}")));
        }
    }
    let mut maps = Vec::new();
    for f in 0..c.num_morphisms() {
        let (dx, dy) = (dims[c.dom(f)], dims[c.cod(f)]);
        let name = &c.morphism(f).name;
        let m = match given.get(name.as_str()) {
            Some(spec) => build_matrix(k, &spec.matrix, dx, dy, &format!("{loc}.maps.{name}"), issues)?,
            None if c.is_identity(f) => Matrix::identity(k, dx),
            None if dx == 0 || dy == 0 => Matrix::zeros(k, dx, dy),
            None => {
                issues.push(SchemaIssue::new(format!("{loc}.maps"), format!("missing map for morphism {name:?}")));
                return None;
            }
        };
        maps.push(m);
    }
    Some(CatModule { dims, maps })
}
