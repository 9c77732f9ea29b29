use super::field::Field;
use super::matrix::Matrix;

/// A subspace of `K^n` kept as a reduced row-echelon basis, grown one
/// vector at a time.
#[derive(Debug, Clone)]
pub struct Subspace<K: Field> {
    field: K,
    ambient: usize,
    /// Rows in RREF, sorted by pivot column.
    rows: Vec<Vec<K::Elem>>,
    pivots: Vec<usize>,
}

impl<K: Field> Subspace<K> {
    pub fn new(field: &K, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by<'a, I>(field: &K, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a Vec<K::Elem>>,
        K::Elem: 'a,
    {
        let mut s = Self::new(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn row_space(m: &Matrix<K>) -> Self {
        let (r, pivots) = m.rref();
        let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { field: m.field().clone(), ambient: m.cols(), rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<K::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the pivot columns; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        let k = &self.field;
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !k.is_zero(&w[p]) {
                let c = k.neg(&w[p]);
                k.axpy(&mut w, &c, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &[K::Elem]) -> bool {
        self.field.vec_is_zero(&self.reduce(v))
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[K::Elem]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length does not match ambient dimension");
        let k = self.field.clone();
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !k.is_zero(x)) else {
            return false;
        };
        let inv = k.inv(&w[p]).expect("nonzero");
        w = k.vec_scale(&inv, &w);
        for row in &mut self.rows {
            if !k.is_zero(&row[p]) {
                let c = k.neg(&row[p]);
                k.axpy(row, &c, &w);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        true
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[K::Elem]) -> Option<Vec<K::Elem>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Coordinates without the membership check; only valid for members.
    pub fn coordinates_unchecked(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    /// Element of the subspace with the given echelon coordinates.
    pub fn combine(&self, coords: &[K::Elem]) -> Vec<K::Elem> {
        let mut out = self.field.zero_vec(self.ambient);
        for (c, row) in coords.iter().zip(&self.rows) {
            self.field.axpy(&mut out, c, row);
        }
        out
    }
}

/// A quotient `Z / B` of nested subspaces, with chosen representatives
/// for a basis of the quotient.
#[derive(Debug, Clone)]
pub struct Quotient<K: Field> {
    field: K,
    boundaries: Subspace<K>,
    /// `boundaries` extended by the representatives, used to read off coordinates.
    combined: Matrix<K>,
    sub_dim: usize,
    representatives: Vec<Vec<K::Elem>>,
}

impl<K: Field> Quotient<K> {
    /// `cycles` must contain every vector of `boundaries`.
    pub fn new(field: &K, cycles: &[Vec<K::Elem>], boundaries: &[Vec<K::Elem>], ambient: usize) -> Self {
        let b = Subspace::spanned_by(field, ambient, boundaries.iter());
        let mut span = b.clone();
        let mut representatives = Vec::new();
        for z in cycles {
            if span.insert(z) {
                representatives.push(z.clone());
            }
        }
        let mut columns: Vec<Vec<K::Elem>> = b.basis().to_vec();
        let sub_dim = columns.len();
        columns.extend(representatives.iter().cloned());
        let combined = Matrix::from_columns(field, ambient, &columns);
        Quotient { field: field.clone(), boundaries: b, combined, sub_dim, representatives }
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Vec<K::Elem>] {
        &self.representatives
    }

    pub fn boundaries(&self) -> &Subspace<K> {
        &self.boundaries
    }

    /// Class of a cycle in the representative basis; `None` if `v` is not a cycle.
    pub fn class_of(&self, v: &[K::Elem]) -> Option<Vec<K::Elem>> {
        let x = self.combined.solve(v).ok()??;
        let _ = &self.field;
        Some(x[self.sub_dim..].to_vec())
    }
}
