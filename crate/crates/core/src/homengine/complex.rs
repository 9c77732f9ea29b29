use crate::exactlin::{Field, Matrix, Quotient};
use crate::validation::ValidationReport;

/// `C^0 -> C^1 -> ...` with `d[n]: C^n -> C^{n+1}`.
#[derive(Debug, Clone)]
pub struct CochainComplex<K: Field> {
    pub field: K,
    pub dims: Vec<usize>,
    pub d: Vec<Matrix<K>>,
}

impl<K: Field> CochainComplex<K> {
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (n, d) in self.d.iter().enumerate() {
            if d.cols() != self.dims[n] || self.dims.get(n + 1).is_some_and(|&r| d.rows() != r) {
                report.push("complex-shape", format!("d^{n} has the wrong shape"));
            }
        }
        for n in 1..self.d.len() {
            if !self.d[n].mul(&self.d[n - 1]).is_zero() {
                report.push("complex-dd", format!("d^{n} d^{} != 0", n - 1));
            }
        }
        report
    }

    /// Degrees whose cohomology is determined by the stored differentials.
    pub fn top_degree(&self) -> usize {
        self.d.len().saturating_sub(1)
    }

    /// `dim H^n` for `n <= top_degree()`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.d.iter().map(Matrix::rank).collect();
        (0..self.d.len()).map(|n| self.dims[n] - ranks[n] - if n == 0 { 0 } else { ranks[n - 1] }).collect()
    }

    pub fn cocycles(&self, n: usize) -> Vec<Vec<K::Elem>> {
        self.d[n].kernel_basis().to_rows()
    }

    pub fn coboundaries(&self, n: usize) -> Vec<Vec<K::Elem>> {
        if n == 0 {
            Vec::new()
        } else {
            let d = &self.d[n - 1];
            (0..d.cols()).map(|j| d.column(j)).collect()
        }
    }

    pub fn cohomology(&self, n: usize) -> Quotient<K> {
        Quotient::new(&self.field, &self.cocycles(n), &self.coboundaries(n), self.dims[n])
    }
}
