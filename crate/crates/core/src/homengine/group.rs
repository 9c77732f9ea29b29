use super::catmodule::CatModule;
use super::complex::CochainComplex;
use super::MAX_COCHAIN_DIM;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::fincat::FinCategory;
use crate::validation::ValidationReport;

/// A finite abelian group by its addition table; element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    size: usize,
    table: Vec<usize>,
    pub names: Vec<String>,
}

impl FiniteAbelianGroup {
    /// The endomorphisms of a one-object category that is an abelian group.
    pub fn from_category(c: &FinCategory) -> Result<Self> {
        if c.num_objects() != 1 || !c.is_groupoid() {
            return Err(Error::InvalidInput("expected a one-object groupoid".into()));
        }
        let id = c.identity(0);
        let size = c.num_morphisms();
        // Relabel so that the identity is element 0.
        let mut order: Vec<usize> = (0..size).filter(|&f| f != id).collect();
        order.insert(0, id);
        let mut pos = vec![0; size];
        for (i, &f) in order.iter().enumerate() {
            pos[f] = i;
        }
        let mut table = vec![0; size * size];
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                table[i * size + j] = pos[c.compose(a, b).expect("one object")];
            }
        }
        let group = FiniteAbelianGroup { size, table, names: order.iter().map(|&f| c.morphism(f).name.clone()).collect() };
        if !(0..size).all(|a| (0..size).all(|b| group.op(a, b) == group.op(b, a))) {
            return Err(Error::Unsupported("group is not abelian".into()));
        }
        Ok(group)
    }

    pub fn cyclic_product(orders: &[usize]) -> Result<Self> {
        Self::from_category(&FinCategory::one_object_group(orders)?)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }
}

/// A representation: `action[g]` acts on column vectors, `action[0] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupModule<K: Field> {
    pub dim: usize,
    pub action: Vec<Matrix<K>>,
}

impl<K: Field> GroupModule<K> {
    pub fn trivial(group: &FiniteAbelianGroup, field: &K, dim: usize) -> Self {
        GroupModule { dim, action: vec![Matrix::identity(field, dim); group.size()] }
    }

    /// Reads the representation off a module over the one-object category
    /// the group came from; element order follows [`FiniteAbelianGroup::from_category`].
    pub fn from_cat_module(c: &FinCategory, group: &FiniteAbelianGroup, f: &CatModule<K>) -> Self {
        let action = group.names.iter().map(|name| f.maps[c.morphism_by_name(name).expect("element of the group")].clone()).collect();
        GroupModule { dim: f.dims[0], action }
    }

    pub fn validate(&self, group: &FiniteAbelianGroup) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.action.len() != group.size() || self.action.iter().any(|m| m.rows() != self.dim || m.cols() != self.dim) {
            report.push("group-module-shape", "one square action matrix per element expected");
            return report;
        }
        if !self.action[0].is_identity() {
            report.push("group-module-unit", "identity element does not act trivially");
        }
        for a in 0..group.size() {
            for b in 0..group.size() {
                if self.action[group.op(a, b)] != self.action[a].mul(&self.action[b]) {
                    report.push("group-module-action", format!("{} {} acts wrongly", group.names[a], group.names[b]));
                }
            }
        }
        report
    }
}

/// Unnormalized bar cochains `C^q = Map(G^q, V)` with the standard differential.
/// Tuples `(g1, ..., gq)` are indexed by `Σ g_i |G|^(i-1)`.
pub fn group_bar_complex<K: Field>(group: &FiniteAbelianGroup, module: &GroupModule<K>, field: &K, top: usize) -> Result<CochainComplex<K>> {
    let g = group.size();
    let v = module.dim;
    let mut tuples = Vec::new();
    let mut dims = Vec::new();
    let mut count = 1usize;
    for _ in 0..=top + 1 {
        tuples.push(count);
        let d = count.checked_mul(v).filter(|&d| d <= MAX_COCHAIN_DIM);
        dims.push(d.ok_or_else(|| Error::Unsupported(format!("bar cochain group exceeds dimension {MAX_COCHAIN_DIM}")))?);
        count *= g;
    }
    let digits = |mut idx: usize, q: usize| {
        let mut out = Vec::with_capacity(q);
        for _ in 0..q {
            out.push(idx % g);
            idx /= g;
        }
        out
    };
    let undigits = |ds: &[usize]| ds.iter().rev().fold(0, |acc, &x| acc * g + x);
    let minus_one = field.neg(&field.one());
    let mut d = Vec::new();
    for q in 0..=top {
        let mut m = Matrix::zeros(field, dims[q + 1], dims[q]);
        let mut add = |row_t: usize, col_t: usize, block: &Matrix<K>| {
            for a in 0..v {
                for b in 0..v {
                    let (r, c) = (row_t * v + a, col_t * v + b);
                    let cur = m.get(r, c).clone();
                    m.set(r, c, field.add(&cur, block.get(a, b)));
                }
            }
        };
        let id = Matrix::identity(field, v);
        for t in 0..tuples[q + 1] {
            let gs = digits(t, q + 1);
            add(t, undigits(&gs[1..]), &module.action[gs[0]]);
            for i in 1..=q {
                let mut face = gs[..i - 1].to_vec();
                face.push(group.op(gs[i - 1], gs[i]));
                face.extend_from_slice(&gs[i + 1..]);
                let s = if i % 2 == 0 { id.clone() } else { id.scale(&minus_one) };
                add(t, undigits(&face), &s);
            }
            let s = if (q + 1) % 2 == 0 { id.clone() } else { id.scale(&minus_one) };
            add(t, undigits(&gs[..q]), &s);
        }
        d.push(m);
    }
    Ok(CochainComplex { field: field.clone(), dims, d })
}

/// `dim H^q(G; V)` for `q <= n`.
pub fn group_cohomology_dims<K: Field>(group: &FiniteAbelianGroup, module: &GroupModule<K>, field: &K, n: usize) -> Result<Vec<usize>> {
    let cx = group_bar_complex(group, module, field, n)?;
    Ok(cx.cohomology_dims())
}
