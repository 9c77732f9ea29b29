//! The local system `H^q(N_⊔; F)` over `Gr(A)`, the `E_2` page
//! `Ext^p_{Gr(A)}(G, H^q)`, the abutment `Ext^n_{Gr(A, N)}(Res_π G, F)`,
//! and degree-wise comparison verdicts.

use rayon::prelude::*;
use serde::Serialize;

use crate::coeffsys::{AlgebraPrecosheaf, RightAModule};
use crate::constructions::{gr_a, gr_an, GrCategory};
use crate::error::{Error, Result};
use crate::exactlin::{Field, FiniteSpace, Matrix, Quotient};
use crate::extcheck::build_module_extension;
use crate::fincat::{MorId, ObjId};
use crate::homengine::{cat_ext_dims, group_bar_complex, CatModule, CochainComplex, FiniteAbelianGroup, GroupModule};

/// The Grothendieck constructions an LHS computation runs on.
pub struct LhsSetup<'a, K: Field> {
    pub pre: &'a AlgebraPrecosheaf<K>,
    pub rmod: &'a RightAModule<K>,
    pub total: GrCategory<K>,
    pub base: GrCategory<K>,
    n_spaces: Vec<FiniteSpace<K>>,
}

impl<'a, K: Field> LhsSetup<'a, K> {
    pub fn new(pre: &'a AlgebraPrecosheaf<K>, rmod: &'a RightAModule<K>) -> Result<Self> {
        let k = pre.field();
        let n_spaces = rmod.modules.iter().map(|m| FiniteSpace::new(k, m.dim)).collect::<Result<Vec<_>, _>>()?;
        Ok(LhsSetup { pre, rmod, total: gr_an(pre, rmod)?, base: gr_a(pre)?, n_spaces })
    }

    fn field(&self) -> &K {
        self.pre.field()
    }

    /// `iota(m) = (1, m, 1_x)`.
    pub fn iota(&self, x: ObjId, m: &[K::Elem]) -> MorId {
        let c = &self.pre.base;
        self.total.encode(c.identity(x), self.pre.algebras[x].unit(), m)
    }

    /// `pi(r, m, f) = (r, f)`.
    pub fn pi(&self) -> crate::fincat::CatFunctor {
        crate::fincat::CatFunctor {
            object_map: (0..self.pre.base.num_objects()).collect(),
            morphism_map: (0..self.total.category.num_morphisms())
                .map(|h| {
                    let (f, r, _) = self.total.decode(h);
                    self.base.encode(f, &r, &[])
                })
                .collect(),
        }
    }

    /// `α(m) = N(f)(m) . r` for the base morphism `(r, f)`.
    fn alpha(&self, f: MorId, r: &[K::Elem], m: &[K::Elem]) -> Vec<K::Elem> {
        let y = self.pre.base.cod(f);
        let k = self.field();
        self.rmod.modules[y].right_action(k, r).mul_vec(&self.rmod.maps[f].mul_vec(m))
    }
}

/// `N(x)` with the action `m -> F((1, m, 1_x))` on `F(x)`.
pub fn fiber_restriction<K: Field>(setup: &LhsSetup<K>, f: &CatModule<K>, x: ObjId) -> Result<(FiniteAbelianGroup, GroupModule<K>)> {
    let k = setup.field();
    let group = FiniteAbelianGroup::from_category(&setup.rmod.underlying_group_category(k, x)?)?;
    let action = setup.n_spaces[x].vectors().map(|m| f.maps[setup.iota(x, &m)].clone()).collect();
    Ok((group, GroupModule { dim: f.dims[x], action }))
}

/// `H^q(N(x); F(x))` at every object, as a module over `Gr(A)`.
#[derive(Debug, Clone)]
pub struct HLocalSystem<K: Field> {
    pub q: usize,
    pub module: CatModule<K>,
    complexes: Vec<CochainComplex<K>>,
    quotients: Vec<Quotient<K>>,
}

impl<K: Field> HLocalSystem<K> {
    /// Matrix of the map on `H^q` induced by an arbitrary lift
    /// `(r, n, f)` of the base morphism `(r, f)`.
    pub fn induced_by_lift(&self, setup: &LhsSetup<K>, f: &CatModule<K>, base_morphism: MorId, n: &[K::Elem]) -> Matrix<K> {
        let (bf, r, _) = setup.base.decode(base_morphism);
        let lift = setup.total.encode(bf, &r, n);
        induced_matrix(setup, f, &self.complexes, &self.quotients, self.q, bf, &r, &f.maps[lift])
    }
}

fn induced_matrix<K: Field>(
    setup: &LhsSetup<K>,
    f: &CatModule<K>,
    complexes: &[CochainComplex<K>],
    quotients: &[Quotient<K>],
    q: usize,
    bf: MorId,
    r: &[K::Elem],
    coeff: &Matrix<K>,
) -> Matrix<K> {
    let k = setup.field();
    let c = &setup.pre.base;
    let (x, y) = (c.dom(bf), c.cod(bf));
    let (sx, sy) = (&setup.n_spaces[x], &setup.n_spaces[y]);
    let alpha: Vec<usize> = sx.vectors().map(|m| sy.index(&setup.alpha(bf, r, &m))).collect();
    let (gx, gy) = (sx.len(), sy.len());
    let (vx, vy) = (f.dims[x], f.dims[y]);
    // Cochain map C^q(y) -> C^q(x): (c')(m1..mq) = coeff c(α m1, ..., α mq).
    let tuples = gx.pow(q as u32);
    let mut cochain = Matrix::zeros(k, complexes[x].dims[q], complexes[y].dims[q]);
    for t in 0..tuples {
        let mut rest = t;
        let mut ty = 0;
        let mut scale = 1;
        for _ in 0..q {
            ty += alpha[rest % gx] * scale;
            rest /= gx;
            scale *= gy;
        }
        cochain.set_block(t * vx, ty * vy, coeff);
    }
    let cols: Vec<Vec<K::Elem>> =
        quotients[y].representatives().iter().map(|z| quotients[x].class_of(&cochain.mul_vec(z)).expect("cochain map sends cocycles to cocycles")).collect();
    Matrix::from_columns(k, quotients[x].dim(), &cols)
}

/// Builds `H^q` over `Gr(A)` with the canonical lifts `(r, 0, f)`.
pub fn h_local_system<K: Field>(setup: &LhsSetup<K>, f: &CatModule<K>, q: usize) -> Result<HLocalSystem<K>> {
    let k = setup.field();
    let c = &setup.pre.base;
    let mut complexes = Vec::new();
    let mut quotients = Vec::new();
    for x in 0..c.num_objects() {
        let (group, module) = fiber_restriction(setup, f, x)?;
        let report = module.validate(&group);
        if !report.is_valid() {
            return Err(Error::InvalidInput(format!("fiber action at {}: {report}", c.object_name(x))));
        }
        let cx = group_bar_complex(&group, &module, k, q)?;
        quotients.push(cx.cohomology(q));
        complexes.push(cx);
    }
    let base = &setup.base;
    let maps = (0..base.category.num_morphisms())
        .map(|b| {
            let (bf, r, _) = base.decode(b);
            let y = c.cod(bf);
            let lift = setup.total.encode(bf, &r, &k.zero_vec(setup.rmod.modules[y].dim));
            induced_matrix(setup, f, &complexes, &quotients, q, bf, &r, &f.maps[lift])
        })
        .collect();
    let module = CatModule { dims: quotients.iter().map(Quotient::dim).collect(), maps };
    Ok(HLocalSystem { q, module, complexes, quotients })
}

/// Checks that every lift of every base morphism induces the same map on `H^q`.
pub fn lift_independence<K: Field>(setup: &LhsSetup<K>, f: &CatModule<K>, h: &HLocalSystem<K>) -> Result<usize> {
    let c = &setup.pre.base;
    let mut checked = 0;
    for b in 0..setup.base.category.num_morphisms() {
        let (bf, _, _) = setup.base.decode(b);
        for n in setup.n_spaces[c.cod(bf)].vectors() {
            checked += 1;
            if h.induced_by_lift(setup, f, b, &n) != h.module.maps[b] {
                return Err(Error::InvalidInput(format!(
                    "lift {} of {} induces a different map on H^{}",
                    setup.total.category.morphism(setup.total.encode(bf, &setup.base.decode(b).1, &n)).name,
                    setup.base.category.morphism(b).name,
                    h.q
                )));
            }
        }
    }
    Ok(checked)
}

/// `e2[q][p] = dim Ext^p_{Gr(A)}(G, H^q)`.
pub fn e2_page<K: Field>(setup: &LhsSetup<K>, g: &CatModule<K>, f: &CatModule<K>, cap_p: usize, cap_q: usize) -> Result<Vec<Vec<usize>>> {
    (0..=cap_q)
        .into_par_iter()
        .map(|q| {
            let h = h_local_system(setup, f, q)?;
            cat_ext_dims(&setup.base.category, g, &h.module, cap_p)
        })
        .collect()
}

/// `dim Ext^n_{Gr(A, N)}(Res_π G, F)` for `n <= cap_n`.
pub fn abutment<K: Field>(setup: &LhsSetup<K>, g: &CatModule<K>, f: &CatModule<K>, cap_n: usize) -> Result<Vec<usize>> {
    cat_ext_dims(&setup.total.category, &g.restrict(&setup.pi()), f, cap_n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LhsVerdict {
    /// `Σ_{p+q=n} E_2 = abutment`.
    Equal,
    /// `Σ_{p+q=n} E_2 > abutment`.
    Bounded,
    /// Fewer `E_2` classes than the abutment, or a forced collapse that fails.
    Violation,
    /// The caps do not cover every cell of total degree `n`.
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub n: usize,
    pub e2_total: usize,
    pub abutment: usize,
    pub verdict: LhsVerdict,
    /// Cells of total degree `<= n + 1` lie in one row or one column.
    pub forced_collapse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    pub cap_p: usize,
    pub cap_q: usize,
    pub cap_n: usize,
    /// `e2[q][p]`.
    pub e2: Vec<Vec<usize>>,
    pub abutment: Vec<usize>,
    pub degrees: Vec<DegreeReport>,
}

impl SpectralReport {
    pub fn has_violation(&self) -> bool {
        self.degrees.iter().any(|d| d.verdict == LhsVerdict::Violation)
    }

    /// Rows `q > 0` vanish within the caps.
    pub fn higher_rows_vanish(&self) -> bool {
        self.e2.iter().skip(1).all(|row| row.iter().all(|&d| d == 0))
    }
}

/// Compares the diagonals of an `E_2` table with abutment dimensions.
pub fn compare(e2: Vec<Vec<usize>>, abutment: Vec<usize>, cap_p: usize, cap_q: usize) -> SpectralReport {
    let cap_n = abutment.len().saturating_sub(1);
    let cell = |p: usize, q: usize| e2[q][p];
    let single_line = |limit: usize| {
        let cells: Vec<(usize, usize)> =
            (0..=cap_q).flat_map(|q| (0..=cap_p).map(move |p| (p, q))).filter(|&(p, q)| p + q <= limit && cell(p, q) > 0).collect();
        cells.iter().all(|c| c.1 == cells[0].1) || cells.iter().all(|c| c.0 == cells[0].0)
    };
    let degrees = (0..=cap_n)
        .map(|n| {
            let complete = n <= cap_p && n <= cap_q;
            let e2_total: usize = (0..=n.min(cap_q)).filter(|&q| n - q <= cap_p).map(|q| cell(n - q, q)).sum();
            let forced_collapse = n < cap_p && n < cap_q && single_line(n + 1);
            let verdict = if !complete {
                LhsVerdict::Incomplete
            } else if e2_total == abutment[n] {
                LhsVerdict::Equal
            } else if e2_total > abutment[n] && !forced_collapse {
                LhsVerdict::Bounded
            } else {
                LhsVerdict::Violation
            };
            DegreeReport { n, e2_total, abutment: abutment[n], verdict, forced_collapse }
        })
        .collect();
    SpectralReport { cap_p, cap_q, cap_n, e2, abutment, degrees }
}

/// Full comparison for `E_2 = Ext_{Gr(A)}(G, H^q(N_⊔; F)) => Ext_{Gr(A, N)}(Res_π G, F)`.
pub fn lhs_report<K: Field>(
    pre: &AlgebraPrecosheaf<K>,
    rmod: &RightAModule<K>,
    g: &CatModule<K>,
    f: &CatModule<K>,
    caps: (usize, usize, usize),
) -> Result<SpectralReport> {
    let setup = LhsSetup::new(pre, rmod)?;
    let (cap_p, cap_q, cap_n) = caps;
    let rg = g.validate(&setup.base.category);
    let rf = f.validate(&setup.total.category);
    if !rg.is_valid() || !rf.is_valid() {
        return Err(Error::InvalidInput(format!("coefficient modules are not functors: {rg} {rf}")));
    }
    let (e2, ab) = rayon::join(|| e2_page(&setup, g, f, cap_p, cap_q), || abutment(&setup, g, f, cap_n));
    Ok(compare(e2?, ab?, cap_p, cap_q))
}

/// Sanity check used by callers that want the extension verified first.
pub fn extension_is_valid<K: Field>(pre: &AlgebraPrecosheaf<K>, rmod: &RightAModule<K>) -> Result<bool> {
    Ok(crate::extcheck::check_extension(&build_module_extension(pre, rmod)?)?.is_valid())
}
