//! Skew and extension category algebras, the Grothendieck constructions
//! `Gr(A)`, `Gr(A, M)`, `Gr(A, N)`, the map `Φ` and the two degenerations.
//!
//! Stored products are diagrammatic, like composition in [`FinCategory`]:
//! for spanning elements `u = r m f` and `v = s n g` with `cod f = dom g`,
//! `alg.mul(u, v)` is the element `t w (fg)` with
//! `t = A(g)(r) s` and `w = A(g)(r) . n + M(g)(m) . s`.
//! In the written convention where `v ∗ u` denotes this element, `Φ`
//! reverses products; see [`phi_check`].

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeffsys::{require_finite, ABimodule, AlgebraPrecosheaf, RightAModule};
use crate::error::{Error, Result};
use crate::exactlin::{Field, FiniteSpace, Matrix};
use crate::fdalgebra::{trivial_extension, AlgModule, FDAlgebra};
use crate::fincat::{FinCategory, MorId, Morphism};

/// Position of each base morphism's block inside the extension algebra:
/// for `f`, the `A(cod f)` basis followed by the `M(cod f)` basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtLayout {
    pub offsets: Vec<usize>,
    pub a_dims: Vec<usize>,
    pub m_dims: Vec<usize>,
    pub dim: usize,
}

impl ExtLayout {
    pub fn new<K: Field>(pre: &AlgebraPrecosheaf<K>, m_dims: impl Fn(usize) -> usize) -> Self {
        let c = &pre.base;
        let mut offsets = Vec::with_capacity(c.num_morphisms());
        let (mut a_dims, mut md) = (Vec::new(), Vec::new());
        let mut dim = 0;
        for f in 0..c.num_morphisms() {
            let y = c.cod(f);
            offsets.push(dim);
            a_dims.push(pre.algebras[y].dim());
            md.push(m_dims(y));
            dim += pre.algebras[y].dim() + m_dims(y);
        }
        ExtLayout { offsets, a_dims, m_dims: md, dim }
    }

    fn a_pos(&self, f: MorId, i: usize) -> usize {
        self.offsets[f] + i
    }

    fn m_pos(&self, f: MorId, j: usize) -> usize {
        self.offsets[f] + self.a_dims[f] + j
    }
}

/// A finitely supported element `Σ_f r_f m_f f`: per base morphism, the pair
/// `(r, m)` with `r ∈ A(cod f)` and `m ∈ M(cod f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtElement<K: Field> {
    pub components: BTreeMap<MorId, (Vec<K::Elem>, Vec<K::Elem>)>,
}

impl<K: Field> ExtElement<K> {
    /// The spanning element `r m f`.
    pub fn spanning(f: MorId, r: Vec<K::Elem>, m: Vec<K::Elem>) -> Self {
        ExtElement { components: BTreeMap::from([(f, (r, m))]) }
    }

    pub fn to_vector(&self, field: &K, layout: &ExtLayout) -> Vec<K::Elem> {
        let mut v = field.zero_vec(layout.dim);
        for (&f, (r, m)) in &self.components {
            for (i, c) in r.iter().enumerate() {
                v[layout.a_pos(f, i)] = field.add(&v[layout.a_pos(f, i)], c);
            }
            for (j, c) in m.iter().enumerate() {
                v[layout.m_pos(f, j)] = field.add(&v[layout.m_pos(f, j)], c);
            }
        }
        v
    }

    /// Drops zero components.
    pub fn from_vector(field: &K, layout: &ExtLayout, v: &[K::Elem]) -> Self {
        let mut components = BTreeMap::new();
        for f in 0..layout.offsets.len() {
            let o = layout.offsets[f];
            let r = v[o..o + layout.a_dims[f]].to_vec();
            let m = v[o + layout.a_dims[f]..o + layout.a_dims[f] + layout.m_dims[f]].to_vec();
            if !field.vec_is_zero(&r) || !field.vec_is_zero(&m) {
                components.insert(f, (r, m));
            }
        }
        ExtElement { components }
    }
}

fn block_labels<K: Field>(pre: &AlgebraPrecosheaf<K>, m_dims: &[usize]) -> Vec<String> {
    let c = &pre.base;
    let mut labels = Vec::new();
    for f in 0..c.num_morphisms() {
        let name = &c.morphism(f).name;
        let y = c.cod(f);
        labels.extend(pre.algebras[y].labels().iter().map(|l| format!("{l}.{name}")));
        labels.extend((0..m_dims[f]).map(|j| format!("m{j}.{name}")));
    }
    labels
}

fn unit_at_identities<K: Field>(pre: &AlgebraPrecosheaf<K>, layout: &ExtLayout) -> Vec<K::Elem> {
    let k = pre.field();
    let mut unit = k.zero_vec(layout.dim);
    for (x, &id) in pre.base.identities().iter().enumerate() {
        for (i, c) in pre.algebras[x].unit().iter().enumerate() {
            unit[layout.a_pos(id, i)] = c.clone();
        }
    }
    unit
}

/// The skew category algebra `A[C]`, with basis `{(f, i)}` for `i` a basis
/// index of `A(cod f)`. The stored product of `r f` and `s g` is
/// `(A(g)(r) s) fg`.
pub fn skew_algebra<K: Field>(pre: &AlgebraPrecosheaf<K>) -> FDAlgebra<K> {
    let c = &pre.base;
    let k = pre.field();
    let layout = ExtLayout::new(pre, |_| 0);
    let mut alg = FDAlgebra::zero_structure(k, layout.dim, block_labels(pre, &layout.m_dims));
    for (f, g) in c.composable_pairs() {
        let h = c.compose(f, g).expect("valid base category");
        let z = c.cod(g);
        let az = &pre.algebras[z];
        for i in 0..layout.a_dims[f] {
            let ar = pre.maps[g].matrix.column(i);
            for j in 0..layout.a_dims[g] {
                let t = az.mul(&ar, &az.basis(j));
                for (l, v) in t.into_iter().enumerate() {
                    alg.set_structure(layout.a_pos(f, i), layout.a_pos(g, j), layout.a_pos(h, l), v);
                }
            }
        }
    }
    alg.set_unit(unit_at_identities(pre, &layout));
    alg
}

/// The extension category algebra `A ⋉ M` on `⊕_f (A(cod f) ⊕ M(cod f))`.
pub fn extension_algebra<K: Field>(pre: &AlgebraPrecosheaf<K>, bimod: &ABimodule<K>) -> FDAlgebra<K> {
    let c = &pre.base;
    let k = pre.field();
    let layout = extension_layout(pre, bimod);
    let mut alg = FDAlgebra::zero_structure(k, layout.dim, block_labels(pre, &layout.m_dims));
    for (f, g) in c.composable_pairs() {
        let h = c.compose(f, g).expect("valid base category");
        let z = c.cod(g);
        let az = &pre.algebras[z];
        let mz = &bimod.modules[z];
        let ag = &pre.maps[g].matrix;
        let mg = &bimod.maps[g];
        for i in 0..layout.a_dims[f] {
            let ar = ag.column(i);
            let left = mz.left_action(k, &ar);
            for j in 0..layout.a_dims[g] {
                // t = A(g)(r) s
                for (l, v) in az.mul(&ar, &az.basis(j)).into_iter().enumerate() {
                    alg.set_structure(layout.a_pos(f, i), layout.a_pos(g, j), layout.a_pos(h, l), v);
                }
            }
            for j in 0..layout.m_dims[g] {
                // w = A(g)(r) . n
                for (l, v) in left.column(j).into_iter().enumerate() {
                    alg.set_structure(layout.a_pos(f, i), layout.m_pos(g, j), layout.m_pos(h, l), v);
                }
            }
        }
        for i in 0..layout.m_dims[f] {
            let m = mg.column(i);
            for j in 0..layout.a_dims[g] {
                // w = M(g)(m) . s
                for (l, v) in mz.right[j].mul_vec(&m).into_iter().enumerate() {
                    alg.set_structure(layout.m_pos(f, i), layout.a_pos(g, j), layout.m_pos(h, l), v);
                }
            }
        }
    }
    alg.set_unit(unit_at_identities(pre, &layout));
    alg
}

pub fn extension_layout<K: Field>(pre: &AlgebraPrecosheaf<K>, bimod: &ABimodule<K>) -> ExtLayout {
    ExtLayout::new(pre, |y| bimod.modules[y].dim)
}

/// Which composition law a Grothendieck construction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrLaw {
    /// `(r, f)(s, g) = (A(g)(r) s, fg)`
    Algebra,
    /// `(r, m, f)(s, n, g) = (A(g)(r) s, A(g)(r) . n + M(g)(m) . s, fg)`
    Bimodule,
    /// `(r, m, f)(s, n, g) = (A(g)(r) s, n + N(g)(m) . s, fg)`
    RightModule,
}

/// A Grothendieck construction with the decoding of its morphisms.
#[derive(Debug, Clone)]
pub struct GrCategory<K: Field> {
    pub category: FinCategory,
    pub law: GrLaw,
    a_spaces: Vec<FiniteSpace<K>>,
    m_spaces: Vec<FiniteSpace<K>>,
    offsets: Vec<usize>,
    /// Base morphism of each morphism.
    base_of: Vec<MorId>,
    base: FinCategory,
}

impl<K: Field> GrCategory<K> {
    pub fn base(&self) -> &FinCategory {
        &self.base
    }

    pub fn base_of(&self, h: MorId) -> MorId {
        self.base_of[h]
    }

    fn block(&self, f: MorId) -> (usize, usize) {
        let y = self.base.cod(f);
        (self.a_spaces[y].len(), self.m_spaces[y].len())
    }

    /// `(f, r, m)` for a morphism `(r, m, f)`; `m` is empty for `Gr(A)`.
    pub fn decode(&self, h: MorId) -> (MorId, Vec<K::Elem>, Vec<K::Elem>) {
        let f = self.base_of[h];
        let y = self.base.cod(f);
        let (_, nm) = self.block(f);
        let local = h - self.offsets[f];
        (f, self.a_spaces[y].vector(local / nm), self.m_spaces[y].vector(local % nm))
    }

    pub fn encode(&self, f: MorId, r: &[K::Elem], m: &[K::Elem]) -> MorId {
        let y = self.base.cod(f);
        let (_, nm) = self.block(f);
        self.offsets[f] + self.a_spaces[y].index(r) * nm + self.m_spaces[y].index(m)
    }

    /// All morphisms lying over the base morphism `f`.
    pub fn over(&self, f: MorId) -> std::ops::Range<MorId> {
        let (na, nm) = self.block(f);
        self.offsets[f]..self.offsets[f] + na * nm
    }
}

/// `Gr(A)`: morphisms `(r, f)` with `r ∈ A(cod f)`.
pub fn gr_a<K: Field>(pre: &AlgebraPrecosheaf<K>) -> Result<GrCategory<K>> {
    let zero: Vec<Matrix<K>> = Vec::new();
    build_gr(pre, &vec![0; pre.base.num_objects()], &zero, &[], GrLaw::Algebra)
}

/// `Gr(A, M)` for an A-bimodule.
pub fn gr_am<K: Field>(pre: &AlgebraPrecosheaf<K>, bimod: &ABimodule<K>) -> Result<GrCategory<K>> {
    let dims: Vec<usize> = bimod.modules.iter().map(|m| m.dim).collect();
    build_gr(pre, &dims, &bimod.maps, &bimod.modules, GrLaw::Bimodule)
}

/// `Gr(A, N)` for a right A-module.
pub fn gr_an<K: Field>(pre: &AlgebraPrecosheaf<K>, rmod: &RightAModule<K>) -> Result<GrCategory<K>> {
    let dims: Vec<usize> = rmod.modules.iter().map(|m| m.dim).collect();
    build_gr(pre, &dims, &rmod.maps, &rmod.modules, GrLaw::RightModule)
}

fn build_gr<K: Field>(pre: &AlgebraPrecosheaf<K>, m_dims: &[usize], m_maps: &[Matrix<K>], modules: &[AlgModule<K>], law: GrLaw) -> Result<GrCategory<K>> {
    let k = pre.field();
    require_finite(k, "a Grothendieck construction")?;
    let c = &pre.base;
    let a_spaces = pre.algebras.iter().map(|a| FiniteSpace::new(k, a.dim())).collect::<Result<Vec<_>, _>>()?;
    let m_spaces = m_dims.iter().map(|&d| FiniteSpace::new(k, d)).collect::<Result<Vec<_>, _>>()?;
    let mut offsets = Vec::new();
    let mut base_of = Vec::new();
    let mut morphisms = Vec::new();
    let with_m = law != GrLaw::Algebra;
    for f in 0..c.num_morphisms() {
        let (x, y) = (c.dom(f), c.cod(f));
        offsets.push(morphisms.len());
        for r in a_spaces[y].vectors() {
            for m in m_spaces[y].vectors() {
                let name = if with_m {
                    format!("({},{},{})", k.format_vec(&r), k.format_vec(&m), c.morphism(f).name)
                } else {
                    format!("({},{})", k.format_vec(&r), c.morphism(f).name)
                };
                morphisms.push(Morphism { name, dom: x, cod: y });
                base_of.push(f);
            }
        }
        if morphisms.len() > 1 << 16 {
            return Err(Error::Unsupported("Grothendieck construction exceeds 65536 morphisms".into()));
        }
    }
    let mut gr = GrCategory { category: FinCategory::new(Vec::new(), Vec::new(), Vec::new(), []), law, a_spaces, m_spaces, offsets, base_of, base: c.clone() };
    let identities: Vec<MorId> = (0..c.num_objects()).map(|x| gr.encode(c.identity(x), pre.algebras[x].unit(), &k.zero_vec(m_dims[x]))).collect();
    let decoded: Vec<_> = (0..morphisms.len()).map(|h| gr.decode(h)).collect();
    let category = FinCategory::from_fn(c.objects().to_vec(), morphisms, identities, |u, v| {
        let (f, r, m) = &decoded[u];
        let (g, s, n) = &decoded[v];
        let h = c.compose(*f, *g).expect("valid base category");
        let z = c.cod(*g);
        let ar = pre.apply(*g, r);
        let t = pre.algebras[z].mul(&ar, s);
        let w = match law {
            GrLaw::Algebra => Vec::new(),
            GrLaw::Bimodule => {
                let mut w = modules[z].left_action(k, &ar).mul_vec(n);
                let ms = modules[z].right_action(k, s).mul_vec(&m_maps[*g].mul_vec(m));
                k.axpy(&mut w, &k.one(), &ms);
                w
            }
            GrLaw::RightModule => {
                let ms = modules[z].right_action(k, s).mul_vec(&m_maps[*g].mul_vec(m));
                k.vec_add(n, &ms)
            }
        };
        gr.encode(h, &t, &w)
    });
    gr.category = category;
    Ok(gr)
}

/// Outcome of an exhaustive identity check, with the first failing case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

/// `Φ(r, m, f) = r m f`. Checks `Φ(u ∘ v) = Φ(u) Φ(v)` in the stored
/// product for every composable pair of `gr`, i.e. `Φ(u ∘ v) = Φ(v) ∗ Φ(u)`
/// in the written product: `Φ` is a homomorphism into `(A ⋉ M)^op`.
pub fn phi_check<K: Field>(pre: &AlgebraPrecosheaf<K>, bimod: &ABimodule<K>, gr: &GrCategory<K>) -> Verdict {
    let k = pre.field();
    let layout = extension_layout(pre, bimod);
    let alg = extension_algebra(pre, bimod);
    let cat = &gr.category;
    let phi = |h: MorId| {
        let (f, r, m) = gr.decode(h);
        ExtElement::<K>::spanning(f, r, m).to_vector(k, &layout)
    };
    let images: Vec<_> = (0..cat.num_morphisms()).map(phi).collect();
    let mut checked = 0;
    for (u, v) in cat.composable_pairs() {
        checked += 1;
        let expected = alg.mul(&images[u], &images[v]);
        let ok = cat.compose(u, v).is_some_and(|w| images[w] == expected);
        if !ok {
            let got = cat.compose(u, v).map_or("undefined".to_string(), |w| cat.morphism(w).name.clone());
            return Verdict {
                passed: false,
                checked,
                witness: Some(format!("u = {}, v = {}: composite {} does not map to Φ(v) ∗ Φ(u)", cat.morphism(u).name, cat.morphism(v).name, got)),
            };
        }
    }
    Verdict { passed: true, checked, witness: None }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Degeneration {
    /// Trivial base category: `A ⋉ M = A(•) ⋉ M(•)`.
    TrivialExt,
    /// Zero bimodule: `A ⋉ 0 = A[C]`.
    Skew,
}

/// Compares `A ⋉ M` with the degenerate construction under the canonical
/// basis bijection, which is the identity on indices in both cases.
pub fn degeneration_iso<K: Field>(kind: Degeneration, pre: &AlgebraPrecosheaf<K>, bimod: &ABimodule<K>) -> Result<Verdict> {
    let ext = extension_algebra(pre, bimod);
    let other = match kind {
        Degeneration::TrivialExt => {
            let c = &pre.base;
            if c.num_objects() != 1 || c.num_morphisms() != 1 {
                return Err(Error::NotDegenerate(format!("base category has {} objects and {} morphisms", c.num_objects(), c.num_morphisms())));
            }
            trivial_extension(&pre.algebras[0], &bimod.modules[0])?
        }
        Degeneration::Skew => {
            if !bimod.is_zero() {
                return Err(Error::NotDegenerate("bimodule is not zero".into()));
            }
            skew_algebra(pre)
        }
    };
    Ok(compare_structure(&ext, &other))
}

/// Structure constants and unit, entry by entry.
pub fn compare_structure<K: Field>(a: &FDAlgebra<K>, b: &FDAlgebra<K>) -> Verdict {
    if a.dim() != b.dim() {
        return Verdict { passed: false, checked: 0, witness: Some(format!("dimensions {} and {}", a.dim(), b.dim())) };
    }
    let d = a.dim();
    let mut checked = 0;
    for i in 0..d {
        for j in 0..d {
            checked += 1;
            if a.basis_product(i, j) != b.basis_product(i, j) {
                return Verdict { passed: false, checked, witness: Some(format!("product of basis {} and {}", a.labels()[i], a.labels()[j])) };
            }
        }
    }
    if a.unit() != b.unit() {
        return Verdict { passed: false, checked, witness: Some("units differ".into()) };
    }
    Verdict { passed: true, checked, witness: None }
}
