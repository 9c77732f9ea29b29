use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::FieldSpec;

/// A field entry: an integer, or a string `"a/b"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    /// Numerator and denominator.
    pub fn ratio(&self) -> Option<(i64, i64)> {
        match self {
            Scalar::Int(n) => Some((*n, 1)),
            Scalar::Text(s) => {
                let s = s.trim();
                match s.split_once('/') {
                    Some((a, b)) => Some((a.trim().parse().ok()?, b.trim().parse().ok()?)),
                    None => Some((s.parse().ok()?, 1)),
                }
            }
        }
    }
}

pub type MatrixSpec = Vec<Vec<Scalar>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CategoryPreset {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "poset-A2")]
    PosetA2,
    #[serde(rename = "discrete")]
    Discrete,
    #[serde(rename = "cyclic-monoid")]
    CyclicMonoid,
    #[serde(rename = "one-object-group")]
    OneObjectGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub name: String,
    pub dom: String,
    pub cod: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub identity: bool,
}

/// Either a preset or explicit objects, morphisms and a composition table.
/// Composites with an identity may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<CategoryPreset>,
    /// `discrete`: number of objects.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismSpec>,
    /// Entries `[f, g, h]`: `f` then `g` is `h`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub composition: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraPreset {
    Ground,
    DualNumbers,
    Split,
    UpperTriangular,
    GroupAlgebra,
}

/// The algebra at `object`, or at every object not listed elsewhere when
/// `object` is absent.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<AlgebraPreset>,
    /// `split`: number of factors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<Scalar>>,
    /// `products[i][j]` holds the coefficients of `e_i e_j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub products: Option<Vec<Vec<Vec<Scalar>>>>,
}

/// A matrix attached to a morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub morphism: String,
    pub matrix: MatrixSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoeffPreset {
    Regular,
    Zero,
}

/// The module at one object; `left[i]` and `right[i]` are the actions of
/// the `i`-th algebra basis element on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalModuleSpec {
    pub object: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub left: Vec<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub right: Vec<MatrixSpec>,
}

/// A bimodule or right module over the precosheaf. Maps go `M(dom) -> M(cod)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffModuleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<CoeffPreset>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<LocalModuleSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapSpec>,
}

/// Which category a functor module lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleBase {
    #[default]
    Category,
    /// `Gr(A)` of the precosheaf.
    GrBase,
    /// `Gr(A, N)` of the right module.
    GrTotal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModulePreset {
    Constant,
    Zero,
    Representable,
}

/// A contravariant functor to vector spaces. Explicit maps go
/// `F(cod) -> F(dom)`; identities may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    #[serde(default, skip_serializing_if = "is_default")]
    pub over: ModuleBase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<ModulePreset>,
    /// `representable`: the representing object.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub dims: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    BuildAlgebra,
    CheckTheoremA,
    CheckExtension,
    Cohomology,
    Ext,
    LhsReport,
}

impl Command {
    pub const ALL: [Command; 7] =
        [Command::Validate, Command::BuildAlgebra, Command::CheckTheoremA, Command::CheckExtension, Command::Cohomology, Command::Ext, Command::LhsReport];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::BuildAlgebra => "build-algebra",
            Command::CheckTheoremA => "check-theorem-a",
            Command::CheckExtension => "check-extension",
            Command::Cohomology => "cohomology",
            Command::Ext => "ext",
            Command::LhsReport => "lhs-report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<String>,
    /// Coefficients for `cohomology`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    /// `ext` computes `Ext(source, target)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// `lhs-report`: `G` over `Gr(A)` and `F` over `Gr(A, N)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_module: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub field: FieldSpec,
    pub category: CategorySpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub algebras: Vec<AlgebraSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub algebra_maps: Vec<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bimodule: Option<CoeffModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_module: Option<CoeffModuleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<TaskSpec>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn is_default<T: Default + PartialEq>(t: &T) -> bool {
    *t == T::default()
}

/// A schema problem and where it sits, as a dotted path into the document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemaIssue {
    pub location: String,
    pub message: String,
}

impl SchemaIssue {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaIssue { location: location.into(), message: message.into() }
    }
}

impl fmt::Display for SchemaIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{} schema error(s):\n{}", .0.len(), .0.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n"))]
    Schema(Vec<SchemaIssue>),
}

/// Parses and structurally validates a problem document.
pub fn parse(text: &str) -> Result<ProblemSpec, SpecError> {
    let spec: ProblemSpec = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        SpecError::Syntax { line, column, message: e.message().to_string() }
    })?;
    let issues = check_references(&spec);
    if issues.is_empty() {
        Ok(spec)
    } else {
        Err(SpecError::Schema(issues))
    }
}

/// Canonical text: `emit(parse(emit(s))) == emit(s)`.
pub fn emit(spec: &ProblemSpec) -> String {
    toml::to_string(spec).expect("problem specs serialize")
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Names of the objects and morphisms a category block defines.
pub(crate) fn category_names(c: &CategorySpec) -> Option<(Vec<String>, Vec<String>)> {
    use crate::fincat::FinCategory;
    let cat = match c.preset? {
        CategoryPreset::Trivial => FinCategory::trivial(),
        CategoryPreset::PosetA2 => FinCategory::poset_a2(),
        CategoryPreset::Discrete => FinCategory::discrete(c.size?),
        CategoryPreset::CyclicMonoid => FinCategory::cyclic_monoid(c.index?, c.period?).ok()?,
        CategoryPreset::OneObjectGroup => FinCategory::one_object_group(c.orders.as_ref()?).ok()?,
    };
    Some((cat.objects().to_vec(), cat.morphisms().iter().map(|m| m.name.clone()).collect()))
}

fn check_references(spec: &ProblemSpec) -> Vec<SchemaIssue> {
    let mut issues = Vec::new();
    let c = &spec.category;
    let explicit = !c.objects.is_empty() || !c.morphisms.is_empty() || !c.composition.is_empty();
    let (objects, morphisms) = match (c.preset, explicit) {
        (Some(_), true) => {
            issues.push(SchemaIssue::new("category", "give either a preset or explicit data, not both"));
            return issues;
        }
        (None, false) => {
            issues.push(SchemaIssue::new("category", "missing preset or objects"));
            return issues;
        }
        (Some(p), false) => {
            let needed = match p {
                CategoryPreset::Discrete => c.size.is_none().then_some("size"),
                CategoryPreset::CyclicMonoid => (c.index.is_none() || c.period.is_none()).then_some("index and period"),
                CategoryPreset::OneObjectGroup => c.orders.is_none().then_some("orders"),
                _ => None,
            };
            if let Some(what) = needed {
                issues.push(SchemaIssue::new("category", format!("preset needs {what}")));
                return issues;
            }
            match category_names(c) {
                Some(names) => names,
                None => {
                    issues.push(SchemaIssue::new("category", "preset parameters out of range"));
                    return issues;
                }
            }
        }
        (None, true) => {
            let objects = c.objects.clone();
            let obj_set: BTreeSet<&str> = objects.iter().map(String::as_str).collect();
            if obj_set.len() != objects.len() {
                issues.push(SchemaIssue::new("category.objects", "duplicate object name"));
            }
            let mut seen = BTreeSet::new();
            let mut has_identity = BTreeSet::new();
            for (i, m) in c.morphisms.iter().enumerate() {
                let loc = format!("category.morphisms[{i}]");
                if !seen.insert(m.name.as_str()) {
                    issues.push(SchemaIssue::new(&loc, format!("duplicate morphism name {:?}", m.name)));
                }
                for end in [&m.dom, &m.cod] {
                    if !obj_set.contains(end.as_str()) {
                        issues.push(SchemaIssue::new(&loc, format!("undefined object {end:?}")));
                    }
                }
                if m.identity {
                    if m.dom != m.cod {
                        issues.push(SchemaIssue::new(&loc, "identity must be an endomorphism"));
                    } else if !has_identity.insert(m.dom.as_str()) {
                        issues.push(SchemaIssue::new(&loc, format!("second identity at {:?}", m.dom)));
                    }
                }
            }
            for o in &objects {
                if !has_identity.contains(o.as_str()) {
                    issues.push(SchemaIssue::new("category.morphisms", format!("object {o:?} has no identity")));
                }
            }
            for (i, entry) in c.composition.iter().enumerate() {
                for name in entry {
                    if !seen.contains(name.as_str()) {
                        issues.push(SchemaIssue::new(format!("category.composition[{i}]"), format!("undefined morphism {name:?}")));
                    }
                }
            }
            (objects, c.morphisms.iter().map(|m| m.name.clone()).collect())
        }
    };
    let obj_set: BTreeSet<&str> = objects.iter().map(String::as_str).collect();
    let mor_set: BTreeSet<&str> = morphisms.iter().map(String::as_str).collect();
    let check_obj = |issues: &mut Vec<SchemaIssue>, loc: String, name: &str| {
        if !obj_set.contains(name) {
            issues.push(SchemaIssue::new(loc, format!("undefined object {name:?}")));
        }
    };
    let check_maps = |issues: &mut Vec<SchemaIssue>, prefix: &str, maps: &[MapSpec]| {
        let mut seen = BTreeSet::new();
        for (i, m) in maps.iter().enumerate() {
            if !mor_set.contains(m.morphism.as_str()) {
                issues.push(SchemaIssue::new(format!("{prefix}[{i}]"), format!("undefined morphism {:?}", m.morphism)));
            } else if !seen.insert(m.morphism.as_str()) {
                issues.push(SchemaIssue::new(format!("{prefix}[{i}]"), format!("second map for {:?}", m.morphism)));
            }
        }
    };

    let mut default_algebra = false;
    let mut algebra_at = BTreeSet::new();
    for (i, a) in spec.algebras.iter().enumerate() {
        let loc = format!("algebras[{i}]");
        match &a.object {
            Some(o) => {
                check_obj(&mut issues, loc.clone(), o);
                if !algebra_at.insert(o.clone()) {
                    issues.push(SchemaIssue::new(&loc, format!("second algebra at {o:?}")));
                }
            }
            None if default_algebra => issues.push(SchemaIssue::new(&loc, "second default algebra")),
            None => default_algebra = true,
        }
        match a.preset {
            Some(AlgebraPreset::Split) if a.n.is_none() => issues.push(SchemaIssue::new(&loc, "preset split needs n")),
            Some(AlgebraPreset::GroupAlgebra) if a.orders.is_none() => issues.push(SchemaIssue::new(&loc, "preset group-algebra needs orders")),
            Some(_) if a.products.is_some() || a.unit.is_some() => issues.push(SchemaIssue::new(&loc, "give either a preset or structure constants, not both")),
            None if a.products.is_none() || a.unit.is_none() => issues.push(SchemaIssue::new(&loc, "explicit algebras need products and unit")),
            _ => {}
        }
    }
    if !spec.algebras.is_empty() && !default_algebra {
        for o in &objects {
            if !algebra_at.contains(o) {
                issues.push(SchemaIssue::new("algebras", format!("no algebra at object {o:?}")));
            }
        }
    }
    check_maps(&mut issues, "algebra_maps", &spec.algebra_maps);
    let needs_algebras = spec.bimodule.is_some() || spec.right_module.is_some();
    if needs_algebras && spec.algebras.is_empty() {
        issues.push(SchemaIssue::new("algebras", "coefficient modules need algebras"));
    }
    for (name, m) in [("bimodule", &spec.bimodule), ("right_module", &spec.right_module)] {
        let Some(m) = m else { continue };
        if m.preset.is_some() && (!m.objects.is_empty() || !m.maps.is_empty()) {
            issues.push(SchemaIssue::new(name, "give either a preset or explicit data, not both"));
        }
        let mut at = BTreeSet::new();
        for (i, l) in m.objects.iter().enumerate() {
            check_obj(&mut issues, format!("{name}.objects[{i}]"), &l.object);
            if !at.insert(l.object.as_str()) {
                issues.push(SchemaIssue::new(format!("{name}.objects[{i}]"), format!("second module at {:?}", l.object)));
            }
        }
        if m.preset.is_none() {
            for o in &objects {
                if !at.contains(o.as_str()) {
                    issues.push(SchemaIssue::new(format!("{name}.objects"), format!("no module at object {o:?}")));
                }
            }
        }
        check_maps(&mut issues, &format!("{name}.maps"), &m.maps);
    }
    for (key, m) in &spec.modules {
        let loc = format!("modules.{key}");
        if m.preset.is_some() && (!m.dims.is_empty() || !m.maps.is_empty()) {
            issues.push(SchemaIssue::new(&loc, "give either a preset or explicit data, not both"));
        }
        if m.preset == Some(ModulePreset::Representable) && m.object.is_none() {
            issues.push(SchemaIssue::new(&loc, "preset representable needs object"));
        }
        if m.over != ModuleBase::Category && spec.algebras.is_empty() {
            issues.push(SchemaIssue::new(&loc, "modules over a Grothendieck construction need algebras"));
        }
        // Objects of the Grothendieck constructions are those of the base.
        if let Some(o) = &m.object {
            check_obj(&mut issues, format!("{loc}.object"), o);
        }
        for o in m.dims.keys() {
            check_obj(&mut issues, format!("{loc}.dims"), o);
        }
        if m.over == ModuleBase::Category {
            check_maps(&mut issues, &format!("{loc}.maps"), &m.maps);
        }
    }
    if let Some(t) = &spec.task {
        let refs = [("module", &t.module), ("source", &t.source), ("target", &t.target), ("base_module", &t.base_module), ("total_module", &t.total_module)];
        for (field, name) in refs {
            if let Some(name) = name {
                if !spec.modules.contains_key(name) {
                    issues.push(SchemaIssue::new(format!("task.{field}"), format!("undefined module {name:?}")));
                }
            }
        }
    }
    issues
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[field]
kind = "prime-field"
characteristic = 2

[category]
preset = "trivial"
"#;

    #[test]
    fn minimal_trivial_spec_parses() {
        let spec = parse(MINIMAL).unwrap();
        assert_eq!(spec.field, FieldSpec::PrimeField { characteristic: 2 });
        assert_eq!(spec.category.preset, Some(CategoryPreset::Trivial));
    }

    #[test]
    fn dangling_morphism_is_named() {
        let text = r#"
[field]
kind = "rationals"

[category]
objects = ["x"]
morphisms = [{ name = "1", dom = "x", cod = "x", identity = true }]
composition = [["1", "e", "1"]]
"#;
        let SpecError::Schema(issues) = parse(text).unwrap_err() else { panic!("expected schema error") };
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].location, "category.composition[0]");
        assert!(issues[0].message.contains("\"e\""));
    }

    #[test]
    fn unknown_preset_reports_position() {
        let text = MINIMAL.replace("\"trivial\"", "\"torus\"");
        match parse(&text).unwrap_err() {
            SpecError::Syntax { line, message, .. } => {
                assert_eq!(line, 7);
                assert!(message.contains("torus"), "{message}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn syntax_error_position() {
        let err = parse("[field\nkind = 1").unwrap_err();
        assert!(matches!(err, SpecError::Syntax { line: 1, .. }), "{err}");
    }

    #[test]
    fn emit_is_canonical() {
        let spec = parse(MINIMAL).unwrap();
        let once = emit(&spec);
        assert_eq!(parse(&once).unwrap(), spec);
        assert_eq!(emit(&parse(&once).unwrap()), once);
    }

    #[test]
    fn scalars() {
        assert_eq!(Scalar::Int(-3).ratio(), Some((-3, 1)));
        assert_eq!(Scalar::Text("-2/7".into()).ratio(), Some((-2, 7)));
        assert_eq!(Scalar::Text("5".into()).ratio(), Some((5, 1)));
        assert_eq!(Scalar::Text("x".into()).ratio(), None);
    }
}
