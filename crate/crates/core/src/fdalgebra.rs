//! Finite-dimensional unital algebras by structure constants, their
//! homomorphisms and modules, and the trivial extension `Λ ⋉ M`.

use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::validation::ValidationReport;

/// `e_i * e_j = sum_l c[i][j][l] e_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct FDAlgebra<K: Field> {
    field: K,
    dim: usize,
    structure: Vec<K::Elem>,
    unit: Vec<K::Elem>,
    labels: Vec<String>,
}

impl<K: Field> FDAlgebra<K> {
    /// All structure constants zero, unit zero; fill in with
    /// [`FDAlgebra::set_structure`] and [`FDAlgebra::set_unit`].
    pub fn zero_structure(field: &K, dim: usize, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), dim);
        FDAlgebra { field: field.clone(), dim, structure: vec![field.zero(); dim * dim * dim], unit: field.zero_vec(dim), labels }
    }

    pub fn from_structure(field: &K, structure: Vec<K::Elem>, unit: Vec<K::Elem>, labels: Vec<String>) -> Result<Self> {
        let dim = labels.len();
        if structure.len() != dim * dim * dim || unit.len() != dim {
            return Err(Error::InvalidInput(format!("structure tensor does not match dimension {dim}")));
        }
        Ok(FDAlgebra { field: field.clone(), dim, structure, unit, labels })
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn unit(&self) -> &Vec<K::Elem> {
        &self.unit
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn structure(&self) -> &[K::Elem] {
        &self.structure
    }

    pub fn set_structure(&mut self, i: usize, j: usize, l: usize, c: K::Elem) {
        let d = self.dim;
        self.structure[(i * d + j) * d + l] = c;
    }

    pub fn set_unit(&mut self, unit: Vec<K::Elem>) {
        assert_eq!(unit.len(), self.dim);
        self.unit = unit;
    }

    /// Coefficients of `e_i * e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[K::Elem] {
        let d = self.dim;
        &self.structure[(i * d + j) * d..(i * d + j + 1) * d]
    }

    pub fn basis(&self, i: usize) -> Vec<K::Elem> {
        self.field.unit_vec(self.dim, i)
    }

    pub fn mul(&self, u: &[K::Elem], v: &[K::Elem]) -> Vec<K::Elem> {
        let k = &self.field;
        let mut out = k.zero_vec(self.dim);
        for (i, a) in u.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if k.is_zero(b) {
                    continue;
                }
                k.axpy(&mut out, &k.mul(a, b), self.basis_product(i, j));
            }
        }
        out
    }

    /// Matrix of `x -> u * x` acting on column vectors.
    pub fn left_mul_matrix(&self, u: &[K::Elem]) -> Matrix<K> {
        let cols: Vec<_> = (0..self.dim).map(|j| self.mul(u, &self.basis(j))).collect();
        Matrix::from_columns(&self.field, self.dim, &cols)
    }

    /// Matrix of `x -> x * u` acting on column vectors.
    pub fn right_mul_matrix(&self, u: &[K::Elem]) -> Matrix<K> {
        let cols: Vec<_> = (0..self.dim).map(|j| self.mul(&self.basis(j), u)).collect();
        Matrix::from_columns(&self.field, self.dim, &cols)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// Associativity on all basis triples and two-sided unit on all basis elements.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let k = &self.field;
        for i in 0..self.dim {
            let ei = self.basis(i);
            if self.mul(&self.unit, &ei) != ei {
                report.push("unit", format!("1 * {} != {}", self.labels[i], self.labels[i]));
            }
            if self.mul(&ei, &self.unit) != ei {
                report.push("unit", format!("{} * 1 != {}", self.labels[i], self.labels[i]));
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.basis_product(i, j);
                for l in 0..self.dim {
                    let el = self.basis(l);
                    let lhs = self.mul(ij, &el);
                    let rhs = self.mul(&self.basis(i), self.basis_product(j, l));
                    if lhs != rhs {
                        report.push(
                            "associativity",
                            format!(
                                "({} {}) {} = {} but {} ({} {}) = {}",
                                self.labels[i],
                                self.labels[j],
                                self.labels[l],
                                k.format_vec(&lhs),
                                self.labels[i],
                                self.labels[j],
                                self.labels[l],
                                k.format_vec(&rhs)
                            ),
                        );
                    }
                }
            }
        }
        report
    }

    /// `c'[i][j][l] = c[j][i][l]`, same unit.
    pub fn opposite(&self) -> Self {
        let mut op = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for l in 0..self.dim {
                    op.set_structure(i, j, l, self.basis_product(j, i)[l].clone());
                }
            }
        }
        op
    }

    // ---- presets ----

    /// The field itself, dimension 1.
    pub fn ground(field: &K) -> Self {
        let mut a = Self::zero_structure(field, 1, vec!["1".into()]);
        a.set_structure(0, 0, 0, field.one());
        a.set_unit(vec![field.one()]);
        a
    }

    /// `k[e]/(e^2)` with basis `1, e`.
    pub fn dual_numbers(field: &K) -> Self {
        let mut a = Self::zero_structure(field, 2, vec!["1".into(), "e".into()]);
        a.set_structure(0, 0, 0, field.one());
        a.set_structure(0, 1, 1, field.one());
        a.set_structure(1, 0, 1, field.one());
        a.set_unit(field.unit_vec(2, 0));
        a
    }

    /// `k^n` with orthogonal idempotent basis.
    pub fn split(field: &K, n: usize) -> Self {
        let mut a = Self::zero_structure(field, n, (0..n).map(|i| format!("e{}", i + 1)).collect());
        for i in 0..n {
            a.set_structure(i, i, i, field.one());
        }
        a.set_unit(vec![field.one(); n]);
        a
    }

    /// Upper-triangular 2x2 matrices with basis `E11, E12, E22`.
    pub fn upper_triangular(field: &K) -> Self {
        let mut a = Self::zero_structure(field, 3, vec!["E11".into(), "E12".into(), "E22".into()]);
        let one = field.one();
        a.set_structure(0, 0, 0, one.clone());
        a.set_structure(0, 1, 1, one.clone());
        a.set_structure(1, 2, 1, one.clone());
        a.set_structure(2, 2, 2, one.clone());
        let mut unit = field.zero_vec(3);
        unit[0] = one.clone();
        unit[2] = one;
        a.set_unit(unit);
        a
    }

    /// Group algebra of `Z/n1 x ... x Z/nk`, basis indexed in mixed radix
    /// with the first factor least significant.
    pub fn group_algebra(field: &K, orders: &[usize]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidInput("group orders must be positive".into()));
        }
        let size: usize = orders.iter().product();
        let digits = |mut e: usize| -> Vec<usize> {
            orders
                .iter()
                .map(|&o| {
                    let d = e % o;
                    e /= o;
                    d
                })
                .collect()
        };
        let undigits = |d: &[usize]| d.iter().zip(orders).rev().fold(0, |acc, (&x, &o)| acc * o + x);
        let labels = (0..size)
            .map(|e| if e == 0 { "1".to_string() } else { format!("g{}", digits(e).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")) })
            .collect();
        let mut a = Self::zero_structure(field, size, labels);
        for x in 0..size {
            for y in 0..size {
                let (dx, dy) = (digits(x), digits(y));
                let s: Vec<usize> = dx.iter().zip(&dy).zip(orders).map(|((p, q), o)| (p + q) % o).collect();
                a.set_structure(x, y, undigits(&s), field.one());
            }
        }
        a.set_unit(field.unit_vec(size, 0));
        Ok(a)
    }
}

/// A unital algebra homomorphism, stored as a `dim(target) x dim(source)` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgHom<K: Field> {
    pub matrix: Matrix<K>,
}

impl<K: Field> AlgHom<K> {
    pub fn identity(a: &FDAlgebra<K>) -> Self {
        AlgHom { matrix: Matrix::identity(a.field(), a.dim()) }
    }

    pub fn apply(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        self.matrix.mul_vec(v)
    }

    /// Empty iff `h(1) = 1` and `h(e_i e_j) = h(e_i) h(e_j)`.
    pub fn validate(&self, source: &FDAlgebra<K>, target: &FDAlgebra<K>) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.matrix.rows() != target.dim() || self.matrix.cols() != source.dim() {
            report.push("hom-shape", format!("matrix is {}x{}, expected {}x{}", self.matrix.rows(), self.matrix.cols(), target.dim(), source.dim()));
            return report;
        }
        if self.apply(source.unit()) != *target.unit() {
            report.push("hom-unit", "h(1) != 1");
        }
        let images: Vec<_> = (0..source.dim()).map(|i| self.apply(&source.basis(i))).collect();
        for i in 0..source.dim() {
            for j in 0..source.dim() {
                let lhs = self.apply(source.basis_product(i, j));
                let rhs = target.mul(&images[i], &images[j]);
                if lhs != rhs {
                    report.push(
                        "hom-multiplicative",
                        format!("h({} {}) != h({}) h({})", source.labels()[i], source.labels()[j], source.labels()[i], source.labels()[j]),
                    );
                }
            }
        }
        report
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Bi,
}

/// A module over an [`FDAlgebra`], given by one action matrix per algebra
/// basis element. Matrices act on column vectors: `e_i . v = left[i] v`
/// and `v . e_i = right[i] v`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgModule<K: Field> {
    pub side: Side,
    pub dim: usize,
    pub left: Vec<Matrix<K>>,
    pub right: Vec<Matrix<K>>,
}

impl<K: Field> AlgModule<K> {
    pub fn has_left(&self) -> bool {
        matches!(self.side, Side::Left | Side::Bi)
    }
    pub fn has_right(&self) -> bool {
        matches!(self.side, Side::Right | Side::Bi)
    }

    fn combine(field: &K, actions: &[Matrix<K>], dim: usize, a: &[K::Elem]) -> Matrix<K> {
        let mut m = Matrix::zeros(field, dim, dim);
        for (c, act) in a.iter().zip(actions) {
            if !field.is_zero(c) {
                m.add_scaled(c, act);
            }
        }
        m
    }

    /// Matrix of `v -> a . v`.
    pub fn left_action(&self, field: &K, a: &[K::Elem]) -> Matrix<K> {
        Self::combine(field, &self.left, self.dim, a)
    }

    /// Matrix of `v -> v . a`.
    pub fn right_action(&self, field: &K, a: &[K::Elem]) -> Matrix<K> {
        Self::combine(field, &self.right, self.dim, a)
    }

    pub fn zero(alg: &FDAlgebra<K>, side: Side) -> Self {
        Self::free(alg, 0, side)
    }

    /// The algebra as a module over itself on the given side(s).
    pub fn regular(alg: &FDAlgebra<K>, side: Side) -> Self {
        Self::free(alg, 1, side)
    }

    /// Direct sum of `rank` copies of the regular representation.
    pub fn free(alg: &FDAlgebra<K>, rank: usize, side: Side) -> Self {
        let k = alg.field();
        let dim = alg.dim() * rank;
        let block = |m: Matrix<K>| Matrix::direct_sum(&vec![m; rank], k);
        let left = if matches!(side, Side::Left | Side::Bi) { (0..alg.dim()).map(|i| block(alg.left_mul_matrix(&alg.basis(i)))).collect() } else { Vec::new() };
        let right =
            if matches!(side, Side::Right | Side::Bi) { (0..alg.dim()).map(|i| block(alg.right_mul_matrix(&alg.basis(i)))).collect() } else { Vec::new() };
        AlgModule { side, dim, left, right }
    }

    /// Drops the left action of a bimodule.
    pub fn forget_left(&self) -> Self {
        AlgModule { side: Side::Right, dim: self.dim, left: Vec::new(), right: self.right.clone() }
    }

    /// Module axioms for each present action, plus commuting actions for bimodules.
    pub fn validate(&self, alg: &FDAlgebra<K>) -> ValidationReport {
        let k = alg.field();
        let mut report = ValidationReport::new();
        let check_shape = |acts: &[Matrix<K>], name: &str, report: &mut ValidationReport| {
            if acts.len() != alg.dim() || acts.iter().any(|m| m.rows() != self.dim || m.cols() != self.dim) {
                report.push("module-shape", format!("{name} action matrices have the wrong shape"));
                false
            } else {
                true
            }
        };
        let id = Matrix::identity(k, self.dim);
        if self.has_left() && check_shape(&self.left, "left", &mut report) {
            if self.left_action(k, alg.unit()) != id {
                report.push("module-unit", "unit does not act as identity on the left");
            }
            for i in 0..alg.dim() {
                for j in 0..alg.dim() {
                    if self.left_action(k, alg.basis_product(i, j)) != self.left[i].mul(&self.left[j]) {
                        report
                            .push("module-action", format!("({} {}) . v != {} . ({} . v)", alg.labels()[i], alg.labels()[j], alg.labels()[i], alg.labels()[j]));
                    }
                }
            }
        }
        if self.has_right() && check_shape(&self.right, "right", &mut report) {
            if self.right_action(k, alg.unit()) != id {
                report.push("module-unit", "unit does not act as identity on the right");
            }
            for i in 0..alg.dim() {
                for j in 0..alg.dim() {
                    if self.right_action(k, alg.basis_product(i, j)) != self.right[j].mul(&self.right[i]) {
                        report
                            .push("module-action", format!("v . ({} {}) != (v . {}) . {}", alg.labels()[i], alg.labels()[j], alg.labels()[i], alg.labels()[j]));
                    }
                }
            }
        }
        if self.side == Side::Bi && report.is_valid() {
            for i in 0..alg.dim() {
                for j in 0..alg.dim() {
                    if self.left[i].mul(&self.right[j]) != self.right[j].mul(&self.left[i]) {
                        report.push(
                            "bimodule-commute",
                            format!("({} . v) . {} != {} . (v . {})", alg.labels()[i], alg.labels()[j], alg.labels()[i], alg.labels()[j]),
                        );
                    }
                }
            }
        }
        report
    }
}

/// `Λ ⋉ M`: the space `Λ ⊕ M` with `(a1, m1)(a2, m2) = (a1 a2, a1 m2 + m1 a2)`.
/// Basis: the Λ-basis followed by the M-basis.
pub fn trivial_extension<K: Field>(lambda: &FDAlgebra<K>, m: &AlgModule<K>) -> Result<FDAlgebra<K>> {
    if m.side != Side::Bi {
        return Err(Error::SideMismatch("trivial extension needs a bimodule".into()));
    }
    let k = lambda.field();
    let (dl, dm) = (lambda.dim(), m.dim);
    let dim = dl + dm;
    let mut labels: Vec<String> = lambda.labels().to_vec();
    labels.extend((0..dm).map(|i| format!("m{i}")));
    let mut alg = FDAlgebra::zero_structure(k, dim, labels);
    for i in 0..dl {
        for j in 0..dl {
            for (l, c) in lambda.basis_product(i, j).iter().enumerate() {
                alg.set_structure(i, j, l, c.clone());
            }
        }
        // e_i * m_j = (0, e_i . m_j)
        for j in 0..dm {
            let col = m.left[i].column(j);
            for (l, c) in col.into_iter().enumerate() {
                alg.set_structure(i, dl + j, dl + l, c);
            }
            // m_j * e_i = (0, m_j . e_i)
            let col = m.right[i].column(j);
            for (l, c) in col.into_iter().enumerate() {
                alg.set_structure(dl + j, i, dl + l, c);
            }
        }
    }
    let mut unit = lambda.unit().clone();
    unit.extend(k.zero_vec(dm));
    alg.set_unit(unit);
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{PrimeField, Rationals};

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn presets_validate() {
        let k = f2();
        assert!(FDAlgebra::ground(&k).validate().is_valid());
        assert!(FDAlgebra::dual_numbers(&k).validate().is_valid());
        assert!(FDAlgebra::upper_triangular(&k).validate().is_valid());
        assert!(FDAlgebra::split(&k, 3).validate().is_valid());
        assert!(FDAlgebra::group_algebra(&k, &[2, 3]).unwrap().validate().is_valid());
    }

    #[test]
    fn broken_unit_is_reported() {
        let k = f2();
        // e1 e1 = e2, nothing else, and a unit that does not act
        let mut a = FDAlgebra::zero_structure(&k, 2, vec!["e1".into(), "e2".into()]);
        a.set_structure(0, 0, 1, 1);
        a.set_unit(vec![0, 1]);
        let report = a.validate();
        assert!(report.has_rule("unit"));
    }

    #[test]
    fn augmentation_is_a_hom() {
        let k = f2();
        let g = FDAlgebra::group_algebra(&k, &[2]).unwrap();
        let kk = FDAlgebra::ground(&k);
        let aug = AlgHom { matrix: Matrix::from_i64(&k, &[&[1, 1]]) };
        assert!(aug.validate(&g, &kk).is_valid());
        assert!(AlgHom::identity(&g).validate(&g, &g).is_valid());
        let zero = AlgHom { matrix: Matrix::zeros(&k, 1, 2) };
        assert!(zero.validate(&g, &kk).has_rule("hom-unit"));
    }

    #[test]
    fn opposite_of_upper_triangular() {
        let k = f2();
        let a = FDAlgebra::upper_triangular(&k);
        let op = a.opposite();
        // E11 E12 = E12 in a; in op, E12 E11 = E12
        assert_eq!(op.basis_product(1, 0), &[0, 1, 0]);
        assert_eq!(op.basis_product(0, 1), &[0, 0, 0]);
        assert!(op.validate().is_valid());
        assert_eq!(op.opposite(), a);
        let d = FDAlgebra::dual_numbers(&k);
        assert_eq!(d.opposite(), d);
    }

    #[test]
    fn trivial_extension_of_field_by_itself_is_dual_numbers() {
        let q = Rationals;
        let kq = FDAlgebra::ground(&q);
        let m = AlgModule::regular(&kq, Side::Bi);
        let te = trivial_extension(&kq, &m).unwrap();
        assert_eq!(te.structure(), FDAlgebra::dual_numbers(&q).structure());
        assert!(q.vec_is_zero(te.basis_product(1, 1)));
    }

    #[test]
    fn trivial_extension_by_zero_module() {
        let k = f2();
        let lam = FDAlgebra::upper_triangular(&k);
        let te = trivial_extension(&lam, &AlgModule::zero(&lam, Side::Bi)).unwrap();
        assert_eq!(te, lam);
    }

    #[test]
    fn trivial_extension_with_projection_bimodule() {
        let k = f2();
        let lam = FDAlgebra::split(&k, 2);
        let m = AlgModule {
            side: Side::Bi,
            dim: 1,
            left: vec![Matrix::from_i64(&k, &[&[1]]), Matrix::from_i64(&k, &[&[0]])],
            right: vec![Matrix::from_i64(&k, &[&[0]]), Matrix::from_i64(&k, &[&[1]])],
        };
        assert!(m.validate(&lam).is_valid());
        let te = trivial_extension(&lam, &m).unwrap();
        assert!(te.validate().is_valid());
        // (e1, 0)(0, m) = (0, m) and (0, m)(e1, 0) = 0
        assert_eq!(te.mul(&[1, 0, 0], &[0, 0, 1]), vec![0, 0, 1]);
        assert_eq!(te.mul(&[0, 0, 1], &[1, 0, 0]), vec![0, 0, 0]);
    }

    #[test]
    fn trivial_extension_needs_bimodule() {
        let k = f2();
        let lam = FDAlgebra::ground(&k);
        assert!(matches!(trivial_extension(&lam, &AlgModule::regular(&lam, Side::Right)), Err(Error::SideMismatch(_))));
    }

    #[test]
    fn group_algebra_of_z2_over_f2_is_truncated_polynomials() {
        let k = f2();
        let a = FDAlgebra::group_algebra(&k, &[2]).unwrap();
        let t = vec![1, 1]; // g + 1
        assert_eq!(a.mul(&t, &t), vec![0, 0]);
        assert!(a.is_commutative());
        assert_eq!(FDAlgebra::group_algebra(&k, &[1]).unwrap().dim(), 1);
    }

    #[test]
    fn free_modules() {
        let k = f2();
        let d = FDAlgebra::dual_numbers(&k);
        let f = AlgModule::free(&d, 2, Side::Left);
        assert_eq!(f.dim, 4);
        assert!(f.validate(&d).is_valid());
        assert_eq!(f.left[1].get(0, 2), &0);
        assert_eq!(AlgModule::free(&d, 0, Side::Right).dim, 0);
        let kk = FDAlgebra::ground(&k);
        assert_eq!(AlgModule::free(&kk, 1, Side::Right).right[0], Matrix::identity(&k, 1));
    }
}
