use std::collections::HashMap;

use super::catmodule::CatModule;
use super::complex::CochainComplex;
use super::MAX_COCHAIN_DIM;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::fincat::{FinCategory, MorId, NerveChain};

/// Cochains `C^n = ⊕_{x0 -> ... -> xn} F(x0)` with
/// `(dφ)(f1..f{n+1}) = F(f1) φ(f2..) + Σ_i (-1)^i φ(.. f_i f_{i+1} ..) + (-1)^{n+1} φ(f1..fn)`.
/// With `normalized`, chains containing identities are dropped.
pub fn nerve_complex<K: Field>(c: &FinCategory, f: &CatModule<K>, field: &K, top: usize, normalized: bool) -> Result<CochainComplex<K>> {
    let chains: Vec<Vec<NerveChain>> = (0..=top + 1).map(|n| c.nerve_chains(n, normalized)).collect();
    let start = |ch: &NerveChain| ch.start;
    let mut offsets = Vec::new();
    let mut dims = Vec::new();
    for level in &chains {
        let mut off = Vec::with_capacity(level.len());
        let mut acc = 0;
        for ch in level {
            off.push(acc);
            acc += f.dims[start(ch)];
        }
        if acc > MAX_COCHAIN_DIM {
            return Err(Error::Unsupported(format!("nerve cochain group of dimension {acc} exceeds {MAX_COCHAIN_DIM}")));
        }
        offsets.push(off);
        dims.push(acc);
    }
    let index: Vec<HashMap<(usize, Vec<MorId>), usize>> =
        chains.iter().map(|level| level.iter().enumerate().map(|(i, ch)| ((ch.start, ch.arrows.clone()), i)).collect()).collect();
    let sign = |i: usize| if i.is_multiple_of(2) { field.one() } else { field.neg(&field.one()) };
    let mut d = Vec::new();
    for n in 0..=top {
        let mut m = Matrix::zeros(field, dims[n + 1], dims[n]);
        for (row_chain, ch) in chains[n + 1].iter().enumerate() {
            let r0 = offsets[n + 1][row_chain];
            let x0 = ch.start;
            let rows = f.dims[x0];
            let mut add_block = |face: (usize, Vec<MorId>), coeff: &Matrix<K>| {
                if let Some(&col_chain) = index[n].get(&face) {
                    let c0 = offsets[n][col_chain];
                    for a in 0..rows {
                        for b in 0..coeff.cols() {
                            let cur = m.get(r0 + a, c0 + b).clone();
                            m.set(r0 + a, c0 + b, field.add(&cur, coeff.get(a, b)));
                        }
                    }
                }
            };
            let arrows = &ch.arrows;
            // 0-th face: drop f1, apply F(f1).
            let f1 = arrows[0];
            add_block((c.cod(f1), arrows[1..].to_vec()), &f.maps[f1]);
            let id = Matrix::identity(field, rows);
            for i in 1..=n {
                let h = c.compose(arrows[i - 1], arrows[i]).expect("valid category");
                let mut face = arrows[..i - 1].to_vec();
                face.push(h);
                face.extend_from_slice(&arrows[i + 1..]);
                add_block((x0, face), &id.scale(&sign(i)));
            }
            add_block((x0, arrows[..n].to_vec()), &id.scale(&sign(n + 1)));
        }
        d.push(m);
    }
    Ok(CochainComplex { field: field.clone(), dims, d })
}

/// `dim H^i` of the nerve cochain complex, `i <= n`.
pub fn nerve_cohomology_dims<K: Field>(c: &FinCategory, f: &CatModule<K>, field: &K, n: usize, normalized: bool) -> Result<Vec<usize>> {
    let cx = nerve_complex(c, f, field, n, normalized)?;
    Ok(cx.cohomology_dims())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;

    #[test]
    fn standard_fixtures() {
        let k = PrimeField::new(2).unwrap();
        let a2 = FinCategory::poset_a2();
        let cases =
            [(a2.clone(), vec![1, 0, 0, 0]), (FinCategory::discrete(2), vec![2, 0, 0, 0]), (FinCategory::one_object_group(&[2]).unwrap(), vec![1, 1, 1, 1])];
        for (c, expected) in cases {
            let kk = CatModule::constant(&c, &k);
            let cx = nerve_complex(&c, &kk, &k, 3, false).unwrap();
            assert!(cx.validate().is_valid());
            assert_eq!(cx.cohomology_dims(), expected);
            assert_eq!(nerve_cohomology_dims(&c, &kk, &k, 3, true).unwrap(), expected);
        }
    }
}
