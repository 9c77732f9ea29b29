use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::fdalgebra::{AlgModule, Side};
use crate::fincat::{CatFunctor, FinCategory, ObjId};
use crate::validation::ValidationReport;

/// A right C-module: a contravariant functor to vector spaces.
/// `maps[f]` is `F(f): F(cod f) -> F(dom f)`, a `dim F(dom f) x dim F(cod f)` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CatModule<K: Field> {
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix<K>>,
}

impl<K: Field> CatModule<K> {
    /// `k` at every object, identities everywhere.
    pub fn constant(c: &FinCategory, field: &K) -> Self {
        CatModule { dims: vec![1; c.num_objects()], maps: vec![Matrix::identity(field, 1); c.num_morphisms()] }
    }

    pub fn zero(c: &FinCategory, field: &K) -> Self {
        CatModule { dims: vec![0; c.num_objects()], maps: vec![Matrix::zeros(field, 0, 0); c.num_morphisms()] }
    }

    /// `k Hom(-, x)`, with `F(f)(h) = f h`.
    pub fn representable(c: &FinCategory, field: &K, x: ObjId) -> Self {
        let homs: Vec<Vec<usize>> = (0..c.num_objects()).map(|y| c.hom(y, x)).collect();
        let dims = homs.iter().map(Vec::len).collect();
        let maps = (0..c.num_morphisms())
            .map(|f| {
                let (y, z) = (c.dom(f), c.cod(f));
                let mut m = Matrix::zeros(field, homs[y].len(), homs[z].len());
                for (j, &h) in homs[z].iter().enumerate() {
                    let fh = c.compose(f, h).expect("composable");
                    let i = homs[y].iter().position(|&u| u == fh).expect("composite in hom set");
                    m.set(i, j, field.one());
                }
                m
            })
            .collect();
        CatModule { dims, maps }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn validate(&self, c: &FinCategory) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.dims.len() != c.num_objects() || self.maps.len() != c.num_morphisms() {
            report.push("catmodule-shape", "data does not cover the category");
            return report;
        }
        for f in 0..c.num_morphisms() {
            let m = &self.maps[f];
            if m.rows() != self.dims[c.dom(f)] || m.cols() != self.dims[c.cod(f)] {
                report.push("catmodule-shape", format!("F({}) has the wrong shape", c.morphism(f).name));
            }
        }
        if !report.is_valid() {
            return report;
        }
        for x in 0..c.num_objects() {
            if !self.maps[c.identity(x)].is_identity() {
                report.push("catmodule-identity", format!("F(1_{}) is not the identity", c.object_name(x)));
            }
        }
        for (f, g) in c.composable_pairs() {
            let Some(h) = c.compose(f, g) else { continue };
            if self.maps[h] != self.maps[f].mul(&self.maps[g]) {
                let (nf, ng) = (&c.morphism(f).name, &c.morphism(g).name);
                report.push("catmodule-composition", format!("F({nf} {ng}) != F({nf}) F({ng})"));
            }
        }
        report
    }

    /// `(Res G)(x) = G(pi x)`, `(Res G)(f) = G(pi f)`.
    pub fn restrict(&self, pi: &CatFunctor) -> Self {
        CatModule { dims: pi.object_map.iter().map(|&y| self.dims[y]).collect(), maps: pi.morphism_map.iter().map(|&g| self.maps[g].clone()).collect() }
    }

    /// Offsets of each `F(x)` inside `⊕_x F(x)`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    /// The module over `linearize(c)` on `⊕_x F(x)`: the basis element `e_g`
    /// carries the `cod g` component through `F(g)` into the `dom g`
    /// component. Since `e_f e_g = e_{fg}` and `F(fg) = F(f) F(g)`, this is a
    /// left action of the linearization.
    pub fn to_algebra_module(&self, c: &FinCategory) -> Result<AlgModule<K>> {
        let report = self.validate(c);
        if !report.is_valid() {
            return Err(Error::InvalidInput(format!("not a module: {report}")));
        }
        let field = match self.maps.first() {
            Some(m) => m.field().clone(),
            None => return Err(Error::InvalidInput("category has no morphisms".into())),
        };
        let n = self.total_dim();
        let off = self.offsets();
        let left = (0..c.num_morphisms())
            .map(|g| {
                let mut m = Matrix::zeros(&field, n, n);
                m.set_block(off[c.dom(g)], off[c.cod(g)], &self.maps[g]);
                m
            })
            .collect();
        Ok(AlgModule { side: Side::Left, dim: n, left, right: Vec::new() })
    }
}
