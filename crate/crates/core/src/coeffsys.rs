//! Coefficient systems over a finite category: precosheaves of algebras,
//! bimodules and right modules over them.
//!
//! Every structure map is covariant along the base category, and
//! composition is diagrammatic, so `A(f g) = A(g) ∘ A(f)` as matrices.

use crate::error::{Error, Result};
use crate::exactlin::{Field, FiniteSpace, Matrix};
use crate::fdalgebra::{AlgHom, AlgModule, FDAlgebra, Side};
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::validation::ValidationReport;

/// A functor from the base category to unital algebras.
#[derive(Debug, Clone)]
pub struct AlgebraPrecosheaf<K: Field> {
    pub base: FinCategory,
    pub algebras: Vec<FDAlgebra<K>>,
    /// `maps[f]: A(dom f) -> A(cod f)`.
    pub maps: Vec<AlgHom<K>>,
}

impl<K: Field> AlgebraPrecosheaf<K> {
    /// The same algebra at every object, identity on every morphism.
    pub fn constant(base: &FinCategory, alg: &FDAlgebra<K>) -> Self {
        AlgebraPrecosheaf { base: base.clone(), algebras: vec![alg.clone(); base.num_objects()], maps: vec![AlgHom::identity(alg); base.num_morphisms()] }
    }

    pub fn field(&self) -> &K {
        self.algebras[0].field()
    }

    pub fn algebra(&self, x: ObjId) -> &FDAlgebra<K> {
        &self.algebras[x]
    }

    pub fn apply(&self, f: MorId, r: &[K::Elem]) -> Vec<K::Elem> {
        self.maps[f].apply(r)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let c = &self.base;
        if self.algebras.len() != c.num_objects() || self.maps.len() != c.num_morphisms() {
            report.push("precosheaf-shape", "data does not cover the base category");
            return report;
        }
        for (x, a) in self.algebras.iter().enumerate() {
            report.merge(&format!("A({})", c.object_name(x)), a.validate());
        }
        for f in 0..c.num_morphisms() {
            let (x, y) = (c.dom(f), c.cod(f));
            report.merge(&format!("A({})", c.morphism(f).name), self.maps[f].validate(&self.algebras[x], &self.algebras[y]));
        }
        if !report.is_valid() {
            return report;
        }
        check_functor_laws(c, &self.maps.iter().map(|h| h.matrix.clone()).collect::<Vec<_>>(), "A", &mut report);
        report
    }
}

fn check_functor_laws<K: Field>(c: &FinCategory, maps: &[Matrix<K>], name: &str, report: &mut ValidationReport) {
    for x in 0..c.num_objects() {
        if !maps[c.identity(x)].is_identity() {
            report.push("functor-identity", format!("{name}(1_{}) is not the identity", c.object_name(x)));
        }
    }
    for (f, g) in c.composable_pairs() {
        let Some(h) = c.compose(f, g) else { continue };
        if maps[h] != maps[g].mul(&maps[f]) {
            report.push(
                "functor-composition",
                format!("{name}({} {}) != {name}({}) then {name}({})", c.morphism(f).name, c.morphism(g).name, c.morphism(f).name, c.morphism(g).name),
            );
        }
    }
}

fn check_map_shapes<K: Field>(c: &FinCategory, modules: &[AlgModule<K>], maps: &[Matrix<K>], report: &mut ValidationReport) -> bool {
    if modules.len() != c.num_objects() || maps.len() != c.num_morphisms() {
        report.push("module-shape", "data does not cover the base category");
        return false;
    }
    for f in 0..c.num_morphisms() {
        let (x, y) = (c.dom(f), c.cod(f));
        if maps[f].rows() != modules[y].dim || maps[f].cols() != modules[x].dim {
            report.push("module-shape", format!("map at {} has the wrong shape", c.morphism(f).name));
            return false;
        }
    }
    true
}

/// An A-bimodule: a bimodule `M(x)` over each `A(x)`, with linear maps
/// compatible with both actions.
#[derive(Debug, Clone)]
pub struct ABimodule<K: Field> {
    pub modules: Vec<AlgModule<K>>,
    /// `maps[f]: M(dom f) -> M(cod f)`.
    pub maps: Vec<Matrix<K>>,
}

impl<K: Field> ABimodule<K> {
    /// `M = A`, `M(f) = A(f)`.
    pub fn regular(a: &AlgebraPrecosheaf<K>) -> Self {
        ABimodule { modules: a.algebras.iter().map(|alg| AlgModule::regular(alg, Side::Bi)).collect(), maps: a.maps.iter().map(|h| h.matrix.clone()).collect() }
    }

    pub fn zero(a: &AlgebraPrecosheaf<K>) -> Self {
        let k = a.field();
        ABimodule {
            modules: a.algebras.iter().map(|alg| AlgModule::zero(alg, Side::Bi)).collect(),
            maps: (0..a.base.num_morphisms()).map(|_| Matrix::zeros(k, 0, 0)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.modules.iter().all(|m| m.dim == 0)
    }

    pub fn dim_at(&self, x: ObjId) -> usize {
        self.modules[x].dim
    }

    pub fn validate(&self, a: &AlgebraPrecosheaf<K>) -> ValidationReport {
        let c = &a.base;
        let k = a.field();
        let mut report = ValidationReport::new();
        if !check_map_shapes(c, &self.modules, &self.maps, &mut report) {
            return report;
        }
        for (x, m) in self.modules.iter().enumerate() {
            if m.side != Side::Bi {
                report.push("module-side", format!("M({}) is not a bimodule", c.object_name(x)));
                continue;
            }
            report.merge(&format!("M({})", c.object_name(x)), m.validate(&a.algebras[x]));
        }
        if !report.is_valid() {
            return report;
        }
        check_functor_laws(c, &self.maps, "M", &mut report);
        for f in 0..c.num_morphisms() {
            let (x, y) = (c.dom(f), c.cod(f));
            let mf = &self.maps[f];
            for r in 0..a.algebras[x].dim() {
                let ar = a.apply(f, &a.algebras[x].basis(r));
                // M(f)(r . m) = A(f)(r) . M(f)(m)
                let lhs = mf.mul(&self.modules[x].left[r]);
                let rhs = self.modules[y].left_action(k, &ar).mul(mf);
                if lhs != rhs {
                    report.push("left-compatibility", compatibility_witness(c, f, &a.algebras[x], r, &lhs, &rhs));
                }
                // M(f)(m . s) = M(f)(m) . A(f)(s)
                let lhs = mf.mul(&self.modules[x].right[r]);
                let rhs = self.modules[y].right_action(k, &ar).mul(mf);
                if lhs != rhs {
                    report.push("right-compatibility", compatibility_witness(c, f, &a.algebras[x], r, &lhs, &rhs));
                }
            }
        }
        report
    }

    pub fn forget_left(&self) -> RightAModule<K> {
        RightAModule { modules: self.modules.iter().map(|m| m.forget_left()).collect(), maps: self.maps.clone() }
    }
}

fn compatibility_witness<K: Field>(c: &FinCategory, f: MorId, alg: &FDAlgebra<K>, r: usize, lhs: &Matrix<K>, rhs: &Matrix<K>) -> String {
    let col = (0..lhs.cols()).find(|&j| lhs.column(j) != rhs.column(j)).unwrap_or(0);
    format!("f = {}, r = {}, m = basis {}", c.morphism(f).name, alg.labels()[r], col)
}

/// A right A-module: a right `A(x)`-module at each object, with compatible maps.
#[derive(Debug, Clone)]
pub struct RightAModule<K: Field> {
    pub modules: Vec<AlgModule<K>>,
    /// `maps[f]: N(dom f) -> N(cod f)`.
    pub maps: Vec<Matrix<K>>,
}

impl<K: Field> RightAModule<K> {
    pub fn regular(a: &AlgebraPrecosheaf<K>) -> Self {
        RightAModule {
            modules: a.algebras.iter().map(|alg| AlgModule::regular(alg, Side::Right)).collect(),
            maps: a.maps.iter().map(|h| h.matrix.clone()).collect(),
        }
    }

    pub fn zero(a: &AlgebraPrecosheaf<K>) -> Self {
        let k = a.field();
        RightAModule {
            modules: a.algebras.iter().map(|alg| AlgModule::zero(alg, Side::Right)).collect(),
            maps: (0..a.base.num_morphisms()).map(|_| Matrix::zeros(k, 0, 0)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.modules.iter().all(|m| m.dim == 0)
    }

    pub fn dim_at(&self, x: ObjId) -> usize {
        self.modules[x].dim
    }

    pub fn validate(&self, a: &AlgebraPrecosheaf<K>) -> ValidationReport {
        let c = &a.base;
        let k = a.field();
        let mut report = ValidationReport::new();
        if !check_map_shapes(c, &self.modules, &self.maps, &mut report) {
            return report;
        }
        for (x, m) in self.modules.iter().enumerate() {
            if !m.has_right() {
                report.push("module-side", format!("N({}) has no right action", c.object_name(x)));
                continue;
            }
            report.merge(&format!("N({})", c.object_name(x)), m.validate(&a.algebras[x]));
        }
        if !report.is_valid() {
            return report;
        }
        check_functor_laws(c, &self.maps, "N", &mut report);
        for f in 0..c.num_morphisms() {
            let (x, y) = (c.dom(f), c.cod(f));
            let nf = &self.maps[f];
            for s in 0..a.algebras[x].dim() {
                let as_ = a.apply(f, &a.algebras[x].basis(s));
                let lhs = nf.mul(&self.modules[x].right[s]);
                let rhs = self.modules[y].right_action(k, &as_).mul(nf);
                if lhs != rhs {
                    report.push("right-compatibility", compatibility_witness(c, f, &a.algebras[x], s, &lhs, &rhs));
                }
            }
        }
        report
    }

    /// `N(x)` under addition as a one-object groupoid; identity is `0`.
    pub fn underlying_group_category(&self, field: &K, x: ObjId) -> Result<FinCategory> {
        let space = FiniteSpace::new(field, self.modules[x].dim)?;
        let vectors: Vec<_> = space.vectors().collect();
        Ok(FinCategory::one_object_monoid(space.len(), |a, b| space.index(&field.vec_add(&vectors[a], &vectors[b])), |e| field.format_vec(&vectors[e])))
    }
}

/// Requires a finite field; cohomology-facing operations enumerate elements.
pub fn require_finite<K: Field>(field: &K, what: &str) -> Result<()> {
    if field.order().is_none() {
        return Err(Error::Unsupported(format!("{what} needs a finite field, got {}", field.spec())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{PrimeField, Rationals};

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    /// A2 with A(0) = F2[Z/2], A(1) = F2, A(a) = augmentation.
    fn augmented_a2() -> AlgebraPrecosheaf<PrimeField> {
        let k = f2();
        let g = FDAlgebra::group_algebra(&k, &[2]).unwrap();
        let kk = FDAlgebra::ground(&k);
        AlgebraPrecosheaf {
            base: FinCategory::poset_a2(),
            algebras: vec![g.clone(), kk.clone()],
            maps: vec![AlgHom::identity(&g), AlgHom::identity(&kk), AlgHom { matrix: Matrix::from_i64(&k, &[&[1, 1]]) }],
        }
    }

    #[test]
    fn constant_precosheaf_is_valid() {
        let k = f2();
        let a = AlgebraPrecosheaf::constant(&FinCategory::poset_a2(), &FDAlgebra::ground(&k));
        assert!(a.validate().is_valid());
    }

    #[test]
    fn augmented_a2_is_valid_and_zero_map_is_not() {
        let mut a = augmented_a2();
        assert!(a.validate().is_valid());
        a.maps[2] = AlgHom { matrix: Matrix::zeros(&f2(), 1, 2) };
        assert!(a.validate().has_rule("hom-unit"));
    }

    #[test]
    fn regular_and_zero_bimodules() {
        let a = augmented_a2();
        assert!(ABimodule::regular(&a).validate(&a).is_valid());
        assert!(ABimodule::zero(&a).validate(&a).is_valid());
        assert!(RightAModule::regular(&a).validate(&a).is_valid());
        assert!(RightAModule::zero(&a).validate(&a).is_valid());
        assert!(ABimodule::regular(&a).forget_left().validate(&a).is_valid());
    }

    #[test]
    fn corrupted_action_has_witness() {
        let a = augmented_a2();
        let mut m = ABimodule::regular(&a);
        // break the left action of g on M(0)
        m.modules[0].left[1] = Matrix::zeros(&f2(), 2, 2);
        let report = m.validate(&a);
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.witness.contains("M(0)")));

        let mut n = RightAModule::regular(&a);
        n.maps[2] = Matrix::from_i64(&f2(), &[&[1, 0]]);
        let report = n.validate(&a);
        assert!(report.has_rule("right-compatibility"));
        assert!(report.violations[0].witness.contains("f = a"));
    }

    #[test]
    fn underlying_groups() {
        let k = f2();
        let a = AlgebraPrecosheaf::constant(&FinCategory::trivial(), &FDAlgebra::split(&k, 2));
        let n = RightAModule::regular(&a);
        let g = n.underlying_group_category(&k, 0).unwrap();
        assert_eq!(g.num_morphisms(), 4);
        assert!(g.validate().is_valid());
        assert!(g.is_groupoid());
        let z = RightAModule::zero(&a).underlying_group_category(&k, 0).unwrap();
        assert_eq!(z.num_morphisms(), 1);

        let q = AlgebraPrecosheaf::constant(&FinCategory::trivial(), &FDAlgebra::ground(&Rationals));
        assert!(RightAModule::regular(&q).underlying_group_category(&Rationals, 0).is_err());
    }
}
