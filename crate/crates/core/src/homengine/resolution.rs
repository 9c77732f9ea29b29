use super::catmodule::CatModule;
use super::complex::CochainComplex;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix, Subspace};
use crate::fdalgebra::{AlgModule, FDAlgebra, Side};
use crate::fincat::FinCategory;
use crate::validation::ValidationReport;

/// A projective resolution `... -> P_1 -> P_0 -> G -> 0` of a left module,
/// where each `P_s` is a sum of left ideals `A e_t` for fixed idempotents `e_t`.
#[derive(Debug, Clone)]
pub struct Resolution<K: Field> {
    field: K,
    pub idempotents: Vec<Vec<K::Elem>>,
    /// Basis of `A e_t` as vectors of `A`.
    ideal_bases: Vec<Vec<Vec<K::Elem>>>,
    /// Left multiplication by each basis element of `A` on `A e_t`.
    ideal_actions: Vec<Vec<Matrix<K>>>,
    pub target_dim: usize,
    target_actions: Vec<Matrix<K>>,
    /// Idempotent type of each summand of `P_s`.
    pub types: Vec<Vec<usize>>,
    /// `boundaries[s]: P_s -> P_{s-1}`, and `P_0 -> G` for `s = 0`.
    pub boundaries: Vec<Matrix<K>>,
    /// Images of the summand generators `e_t` of `P_s`.
    generators: Vec<Vec<Vec<K::Elem>>>,
}

impl<K: Field> Resolution<K> {
    /// Number of summands of each `P_s`.
    pub fn ranks(&self) -> Vec<usize> {
        self.types.iter().map(Vec::len).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.types.iter().map(|ts| ts.iter().map(|&t| self.ideal_bases[t].len()).sum()).collect()
    }

    /// A-linearity of every boundary, surjectivity onto `G`, `d d = 0` and
    /// exactness at every computed stage, all by rank.
    pub fn verify(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for s in 0..self.boundaries.len() {
            let d = &self.boundaries[s];
            let ambient = s.checked_sub(1);
            'linear: for i in 0..self.target_actions.len() {
                for j in 0..d.cols() {
                    let v = self.field.unit_vec(d.cols(), j);
                    if d.mul_vec(&self.act(Some(s), i, &v)) != self.act(ambient, i, &d.column(j)) {
                        report.push("resolution-linear", format!("boundary {s} does not commute with basis element {i}"));
                        break 'linear;
                    }
                }
            }
            if s == 0 {
                if d.rank() != self.target_dim {
                    report.push("resolution-exact", "P_0 does not cover the module");
                }
            } else {
                let prev = &self.boundaries[s - 1];
                if !prev.mul(d).is_zero() {
                    report.push("resolution-dd", format!("d_{} d_{s} != 0", s - 1));
                }
                if d.rank() != prev.cols() - prev.rank() {
                    report.push("resolution-exact", format!("not exact at P_{}", s - 1));
                }
            }
        }
        report
    }

    fn stage_dim(&self, s: usize) -> usize {
        self.types[s].iter().map(|&t| self.ideal_bases[t].len()).sum()
    }

    /// Basis element `i` acting on a vector of `P_s`, or of the module for `None`.
    fn act(&self, stage: Option<usize>, i: usize, v: &[K::Elem]) -> Vec<K::Elem> {
        let Some(s) = stage else { return self.target_actions[i].mul_vec(v) };
        let mut out = Vec::with_capacity(v.len());
        let mut o = 0;
        for &t in &self.types[s] {
            let d = self.ideal_bases[t].len();
            out.extend(self.ideal_actions[t][i].mul_vec(&v[o..o + d]));
            o += d;
        }
        out
    }

    fn act_by(&self, stage: Option<usize>, a: &[K::Elem], v: &[K::Elem]) -> Vec<K::Elem> {
        let mut out = self.field.zero_vec(v.len());
        for (i, c) in a.iter().enumerate() {
            if !self.field.is_zero(c) {
                self.field.axpy(&mut out, c, &self.act(stage, i, v));
            }
        }
        out
    }

    fn combine(&self, acts: &[Matrix<K>], dim: usize, a: &[K::Elem]) -> Matrix<K> {
        let mut m = Matrix::zeros(&self.field, dim, dim);
        for (c, act) in a.iter().zip(acts) {
            if !self.field.is_zero(c) {
                m.add_scaled(c, act);
            }
        }
        m
    }

    /// The complex `Hom_A(P_0, F) -> Hom_A(P_1, F) -> ...`, using
    /// `Hom_A(A e_t, F) = e_t F`.
    pub fn hom_complex(&self, f_actions: &[Matrix<K>], f_dim: usize, top: usize) -> CochainComplex<K> {
        let k = &self.field;
        let images: Vec<Subspace<K>> = self
            .idempotents
            .iter()
            .map(|e| {
                let m = self.combine(f_actions, f_dim, e);
                Subspace::spanned_by(k, f_dim, (0..f_dim).map(|j| m.column(j)).collect::<Vec<_>>().iter())
            })
            .collect();
        let stage = |s: usize| self.types.get(s).cloned().unwrap_or_default();
        let block_offsets = |types: &[usize]| {
            let mut acc = 0;
            types
                .iter()
                .map(|&t| {
                    let o = acc;
                    acc += images[t].dim();
                    o
                })
                .collect::<Vec<_>>()
        };
        let dims: Vec<usize> = (0..=top + 1).map(|s| stage(s).iter().map(|&t| images[t].dim()).sum()).collect();
        let mut d = Vec::new();
        for s in 0..=top {
            let (src, dst) = (stage(s), stage(s + 1));
            let (so, dof) = (block_offsets(&src), block_offsets(&dst));
            let mut m = Matrix::zeros(k, dims[s + 1], dims[s]);
            let p_off = {
                let mut acc = 0;
                src.iter()
                    .map(|&t| {
                        let o = acc;
                        acc += self.ideal_bases[t].len();
                        o
                    })
                    .collect::<Vec<_>>()
            };
            for (j, &tj) in dst.iter().enumerate() {
                let u = &self.generators[s + 1][j];
                for (i, &ti) in src.iter().enumerate() {
                    let coords = &u[p_off[i]..p_off[i] + self.ideal_bases[ti].len()];
                    if k.vec_is_zero(coords) {
                        continue;
                    }
                    let mut a = k.zero_vec(self.idempotents[0].len());
                    for (c, b) in coords.iter().zip(&self.ideal_bases[ti]) {
                        k.axpy(&mut a, c, b);
                    }
                    let act = self.combine(f_actions, f_dim, &a);
                    for (p, bvec) in images[ti].basis().iter().enumerate() {
                        let v = act.mul_vec(bvec);
                        let coords = images[tj].coordinates(&v).expect("image lies in e_t F");
                        for (q, c) in coords.into_iter().enumerate() {
                            let cur = m.get(dof[j] + q, so[i] + p).clone();
                            m.set(dof[j] + q, so[i] + p, k.add(&cur, &c));
                        }
                    }
                }
            }
            d.push(m);
        }
        CochainComplex { field: k.clone(), dims, d }
    }
}

/// Resolves the left module with action matrices `actions` (one per basis
/// element of `alg`) by sums of `A e_t`, through stage `length`.
pub fn projective_resolution<K: Field>(
    alg: &FDAlgebra<K>,
    actions: &[Matrix<K>],
    dim: usize,
    idempotents: &[Vec<K::Elem>],
    length: usize,
) -> Result<Resolution<K>> {
    let k = alg.field();
    if actions.len() != alg.dim() {
        return Err(Error::InvalidInput("one action matrix per algebra basis element expected".into()));
    }
    let mut ideal_bases = Vec::new();
    let mut ideal_actions = Vec::new();
    for e in idempotents {
        let sub = Subspace::spanned_by(k, alg.dim(), (0..alg.dim()).map(|i| alg.mul(&alg.basis(i), e)).collect::<Vec<_>>().iter());
        let basis = sub.basis().to_vec();
        let acts = (0..alg.dim())
            .map(|i| {
                let cols: Vec<_> = basis.iter().map(|b| sub.coordinates(&alg.mul(&alg.basis(i), b)).expect("left ideal")).collect();
                Matrix::from_columns(k, basis.len(), &cols)
            })
            .collect();
        ideal_bases.push(basis);
        ideal_actions.push(acts);
    }
    let mut res = Resolution {
        field: k.clone(),
        idempotents: idempotents.to_vec(),
        ideal_bases,
        ideal_actions,
        target_dim: dim,
        target_actions: actions.to_vec(),
        types: Vec::new(),
        boundaries: Vec::new(),
        generators: Vec::new(),
    };
    let mut kernel: Vec<Vec<K::Elem>> = (0..dim).map(|i| k.unit_vec(dim, i)).collect();
    for s in 0..=length {
        let ambient = s.checked_sub(1);
        let amb_dim = ambient.map_or(dim, |a| res.stage_dim(a));
        let gens = choose_generators(&res, ambient, amb_dim, &kernel);
        let types: Vec<usize> = gens.iter().map(|(t, _)| *t).collect();
        let mut cols = Vec::new();
        for (t, v) in &gens {
            let images: Vec<Vec<K::Elem>> = (0..alg.dim()).map(|i| res.act(ambient, i, v)).collect();
            for b in &res.ideal_bases[*t] {
                let mut col = k.zero_vec(amb_dim);
                for (c, img) in b.iter().zip(&images) {
                    k.axpy(&mut col, c, img);
                }
                cols.push(col);
            }
        }
        let boundary = Matrix::from_columns(k, amb_dim, &cols);
        kernel = boundary.kernel_basis().to_rows();
        res.types.push(types);
        res.generators.push(gens.into_iter().map(|(_, v)| v).collect());
        res.boundaries.push(boundary);
        if kernel.is_empty() {
            // Every later stage is zero.
            for _ in s + 1..=length {
                let p_dim = res.stage_dim(res.types.len() - 1);
                res.types.push(Vec::new());
                res.generators.push(Vec::new());
                res.boundaries.push(Matrix::zeros(k, p_dim, 0));
            }
            break;
        }
    }
    Ok(res)
}

/// Greedy generators of the submodule spanned by `kernel`, each taken from
/// some `e_t K` so that it generates a quotient of `A e_t`.
fn choose_generators<K: Field>(res: &Resolution<K>, ambient: Option<usize>, dim: usize, kernel: &[Vec<K::Elem>]) -> Vec<(usize, Vec<K::Elem>)> {
    let k = &res.field;
    let target = kernel.len();
    let n = res.ideal_actions.first().map_or(0, Vec::len);
    let mut covered = Subspace::new(k, dim);
    let mut gens = Vec::new();
    for (t, e) in res.idempotents.iter().enumerate() {
        if covered.dim() == target {
            break;
        }
        let piece = Subspace::spanned_by(k, dim, kernel.iter().map(|v| res.act_by(ambient, e, v)).collect::<Vec<_>>().iter());
        for v in piece.basis() {
            if covered.contains(v) {
                continue;
            }
            for i in 0..n {
                covered.insert(&res.act(ambient, i, v));
            }
            gens.push((t, v.clone()));
            if covered.dim() == target {
                break;
            }
        }
    }
    debug_assert_eq!(covered.dim(), target);
    gens
}

/// Left-module data for a one-sided module: right modules become left
/// modules over the opposite algebra.
fn left_data<K: Field>(alg: &FDAlgebra<K>, m: &AlgModule<K>) -> Result<(FDAlgebra<K>, Vec<Matrix<K>>)> {
    match m.side {
        Side::Left => Ok((alg.clone(), m.left.clone())),
        Side::Right => Ok((alg.opposite(), m.right.clone())),
        Side::Bi => Err(Error::SideMismatch("bimodule given where a one-sided module is expected".into())),
    }
}

/// Free resolution: every `P_s` is a free module.
pub fn free_resolution<K: Field>(alg: &FDAlgebra<K>, module: &AlgModule<K>, length: usize) -> Result<Resolution<K>> {
    let (a, acts) = left_data(alg, module)?;
    projective_resolution(&a, &acts, module.dim, &[a.unit().clone()], length)
}

/// `dim Ext^i_A(g, f)` for `i <= n`, from a free resolution of `g`.
pub fn ext_dims<K: Field>(alg: &FDAlgebra<K>, g: &AlgModule<K>, f: &AlgModule<K>, n: usize) -> Result<Vec<usize>> {
    if g.side != f.side {
        return Err(Error::SideMismatch(format!("{:?} and {:?} modules", g.side, f.side)));
    }
    let (a, g_acts) = left_data(alg, g)?;
    let (_, f_acts) = left_data(alg, f)?;
    ext_dims_with_idempotents(&a, &g_acts, g.dim, &f_acts, f.dim, &[a.unit().clone()], n)
}

/// Ext of left modules given by action matrices, resolving by the ideals `A e_t`.
pub fn ext_dims_with_idempotents<K: Field>(
    alg: &FDAlgebra<K>,
    g_actions: &[Matrix<K>],
    g_dim: usize,
    f_actions: &[Matrix<K>],
    f_dim: usize,
    idempotents: &[Vec<K::Elem>],
    n: usize,
) -> Result<Vec<usize>> {
    let res = projective_resolution(alg, g_actions, g_dim, idempotents, n + 1)?;
    let cx = res.hom_complex(f_actions, f_dim, n);
    Ok(cx.cohomology_dims())
}

/// `dim Ext^i_C(g, f)` for right C-modules, through the linearization with
/// the projectives `k Hom(-, x)`.
pub fn cat_ext_dims<K: Field>(c: &FinCategory, g: &CatModule<K>, f: &CatModule<K>, n: usize) -> Result<Vec<usize>> {
    let field = g.maps.first().map(|m| m.field().clone()).ok_or_else(|| Error::InvalidInput("empty category".into()))?;
    let alg = c.linearize(&field)?;
    let gm = g.to_algebra_module(c)?;
    let fm = f.to_algebra_module(c)?;
    let idempotents: Vec<_> = c.identities().iter().map(|&id| alg.basis(id)).collect();
    ext_dims_with_idempotents(&alg, &gm.left, gm.dim, &fm.left, fm.dim, &idempotents, n)
}

/// `dim H^i(C; f) = dim Ext^i_C(k, f)`.
pub fn cohomology_dims<K: Field>(c: &FinCategory, f: &CatModule<K>, n: usize) -> Result<Vec<usize>> {
    let field = f.maps.first().map(|m| m.field().clone()).ok_or_else(|| Error::InvalidInput("empty category".into()))?;
    cat_ext_dims(c, &CatModule::constant(c, &field), f, n)
}

/// Kernel dimension of the linear system in `T` given by `T P_i = Q_i T`.
fn intertwiner_dim<K: Field>(field: &K, pairs: &[(&Matrix<K>, &Matrix<K>)], rows: usize, cols: usize) -> usize {
    let unknowns = rows * cols;
    if unknowns == 0 {
        return 0;
    }
    let mut eqs = Vec::new();
    for (p, q) in pairs {
        for a in 0..rows {
            for c in 0..cols {
                let mut row = field.zero_vec(unknowns);
                for b in 0..cols {
                    row[a * cols + b] = field.add(&row[a * cols + b], p.get(b, c));
                }
                for e in 0..rows {
                    row[e * cols + c] = field.sub(&row[e * cols + c], q.get(a, e));
                }
                if !field.vec_is_zero(&row) {
                    eqs.push(row);
                }
            }
        }
    }
    let m = Matrix::from_rows(field, unknowns, eqs).expect("rows have equal length");
    unknowns - m.rank()
}

/// `dim Hom_A(g, f)` by solving `T g(e_i) = f(e_i) T` directly.
pub fn module_hom_dim<K: Field>(alg: &FDAlgebra<K>, g: &AlgModule<K>, f: &AlgModule<K>) -> Result<usize> {
    if g.side != f.side {
        return Err(Error::SideMismatch(format!("{:?} and {:?} modules", g.side, f.side)));
    }
    let (_, ga) = left_data(alg, g)?;
    let (_, fa) = left_data(alg, f)?;
    let pairs: Vec<_> = ga.iter().zip(&fa).collect();
    Ok(intertwiner_dim(alg.field(), &pairs, f.dim, g.dim))
}

/// Dimension of the space of natural transformations `g -> f`, from the
/// commuting squares `T_x g(h) = f(h) T_y` for `h: x -> y`.
pub fn natural_transformation_dim<K: Field>(c: &FinCategory, g: &CatModule<K>, f: &CatModule<K>) -> Result<usize> {
    let field = g.maps.first().map(|m| m.field().clone()).ok_or_else(|| Error::InvalidInput("empty category".into()))?;
    let mut off = Vec::new();
    let mut total = 0;
    for x in 0..c.num_objects() {
        off.push(total);
        total += f.dims[x] * g.dims[x];
    }
    if total == 0 {
        return Ok(0);
    }
    let mut eqs = Vec::new();
    for h in 0..c.num_morphisms() {
        let (x, y) = (c.dom(h), c.cod(h));
        let (gh, fh) = (&g.maps[h], &f.maps[h]);
        // (T_x g(h))[a][b] - (f(h) T_y)[a][b] = 0, T_x is f(x) x g(x).
        for a in 0..f.dims[x] {
            for b in 0..g.dims[y] {
                let mut row = field.zero_vec(total);
                for e in 0..g.dims[x] {
                    let i = off[x] + a * g.dims[x] + e;
                    row[i] = field.add(&row[i], gh.get(e, b));
                }
                for e in 0..f.dims[y] {
                    let i = off[y] + e * g.dims[y] + b;
                    row[i] = field.sub(&row[i], fh.get(a, e));
                }
                if !field.vec_is_zero(&row) {
                    eqs.push(row);
                }
            }
        }
    }
    let m = Matrix::from_rows(&field, total, eqs)?;
    Ok(total - m.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;

    fn fp(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// The 1-dimensional module where the group algebra basis element `g^e` acts by `sign^e`.
    fn character<K: Field>(alg: &FDAlgebra<K>, values: &[i64], side: Side) -> AlgModule<K> {
        let k = alg.field();
        let acts: Vec<_> = values.iter().map(|&v| Matrix::from_rows(k, 1, vec![vec![k.from_i64(v)]]).unwrap()).collect();
        match side {
            Side::Left => AlgModule { side, dim: 1, left: acts, right: Vec::new() },
            _ => AlgModule { side, dim: 1, left: Vec::new(), right: acts },
        }
    }

    #[test]
    fn free_module_is_projective() {
        let k = fp(2);
        let a = FDAlgebra::dual_numbers(&k);
        let res = free_resolution(&a, &AlgModule::regular(&a, Side::Left), 3).unwrap();
        assert!(res.verify().is_valid());
        assert_eq!(res.ranks(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn dual_numbers_periodic() {
        let k = fp(2);
        let a = FDAlgebra::dual_numbers(&k);
        let triv = character(&a, &[1, 0], Side::Left);
        let res = free_resolution(&a, &triv, 4).unwrap();
        assert!(res.verify().is_valid());
        assert_eq!(res.ranks(), vec![1, 1, 1, 1, 1]);
        assert_eq!(ext_dims(&a, &triv, &triv, 4).unwrap(), vec![1; 5]);
    }

    #[test]
    fn semisimple_sign_representation() {
        let k = fp(3);
        let a = FDAlgebra::group_algebra(&k, &[2]).unwrap();
        let sign = character(&a, &[1, -1], Side::Right);
        // Free covers never stop: each kernel is a 1-dimensional character.
        let res = free_resolution(&a, &sign, 3).unwrap();
        assert_eq!(res.ranks(), vec![1, 1, 1, 1]);
        // Covering by A e with e = (1 - g)/2 stops at once.
        let e = vec![k.from_ratio(1, 2).unwrap(), k.from_ratio(-1, 2).unwrap()];
        let op = a.opposite();
        let res = projective_resolution(&op, &sign.right, 1, &[e, vec![k.from_ratio(1, 2).unwrap(); 2]], 3).unwrap();
        assert!(res.verify().is_valid());
        assert_eq!(res.ranks(), vec![1, 0, 0, 0]);
        let triv = character(&a, &[1, 1], Side::Right);
        assert_eq!(ext_dims(&a, &sign, &triv, 3).unwrap(), vec![0; 4]);
        assert_eq!(ext_dims(&a, &sign, &sign, 3).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn free_source_gives_homs_only() {
        let k = fp(2);
        let a = FDAlgebra::upper_triangular(&k);
        let g = AlgModule::free(&a, 2, Side::Left);
        let f = AlgModule::regular(&a, Side::Left);
        assert_eq!(ext_dims(&a, &g, &f, 2).unwrap(), vec![6, 0, 0]);
        assert_eq!(module_hom_dim(&a, &g, &f).unwrap(), 6);
    }

    #[test]
    fn side_mismatch() {
        let k = fp(2);
        let a = FDAlgebra::dual_numbers(&k);
        let l = AlgModule::regular(&a, Side::Left);
        let r = AlgModule::regular(&a, Side::Right);
        assert!(matches!(ext_dims(&a, &l, &r, 1), Err(Error::SideMismatch(_))));
    }

    #[test]
    fn category_ext_examples() {
        let k = fp(2);
        let pt = FinCategory::trivial();
        let v2 = CatModule { dims: vec![2], maps: vec![Matrix::identity(&k, 2)] };
        let v3 = CatModule { dims: vec![3], maps: vec![Matrix::identity(&k, 3)] };
        assert_eq!(cat_ext_dims(&pt, &v2, &v3, 2).unwrap(), vec![6, 0, 0]);
        let a2 = FinCategory::poset_a2();
        assert_eq!(cohomology_dims(&a2, &CatModule::constant(&a2, &k), 3).unwrap(), vec![1, 0, 0, 0]);
        let z2 = FinCategory::one_object_group(&[2]).unwrap();
        assert_eq!(cohomology_dims(&z2, &CatModule::constant(&z2, &k), 3).unwrap(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn representables_are_projective() {
        let k = fp(3);
        let c = FinCategory::cyclic_monoid(1, 2).unwrap();
        let h = CatModule::representable(&c, &k, 0);
        let f = CatModule::constant(&c, &k);
        assert_eq!(cat_ext_dims(&c, &h, &f, 2).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn natural_transformations_agree_with_ext0() {
        let k = fp(2);
        let c = FinCategory::poset_a2();
        let kk = CatModule::constant(&c, &k);
        let h0 = CatModule::representable(&c, &k, 0);
        for (g, f) in [(&kk, &kk), (&h0, &kk), (&kk, &h0)] {
            let ext0 = cat_ext_dims(&c, g, f, 0).unwrap()[0];
            assert_eq!(natural_transformation_dim(&c, g, f).unwrap(), ext0);
        }
    }
}
