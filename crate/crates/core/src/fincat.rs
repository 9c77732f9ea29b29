//! Finite categories given by explicit composition tables.
//!
//! Composition is diagrammatic throughout: `compose(f, g)` is "f then g",
//! defined exactly when `cod(f) == dom(g)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::fdalgebra::FDAlgebra;
use crate::validation::ValidationReport;

pub type ObjId = usize;
pub type MorId = usize;

const MAX_WITNESSES_PER_RULE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    /// Morphisms grouped by domain.
    out: Vec<Vec<MorId>>,
    /// Position of each morphism inside `out[dom]`.
    out_pos: Vec<usize>,
    /// `table[f][out_pos[g]]` is the composite of `f` then `g`, for `g` in `out[cod f]`.
    table: Vec<Vec<Option<MorId>>>,
    /// Composites listed for pairs that are not composable.
    stray: Vec<(MorId, MorId, MorId)>,
    names: HashMap<String, MorId>,
}

/// A composable string `x0 -> x1 -> ... -> xn` in the nerve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveChain {
    pub start: ObjId,
    pub arrows: Vec<MorId>,
}

impl NerveChain {
    pub fn degree(&self) -> usize {
        self.arrows.len()
    }
}

impl FinCategory {
    /// Builds a category from raw data. Nothing is validated here, so
    /// deliberately broken fixtures can be represented; see [`FinCategory::validate`].
    pub fn new(objects: Vec<String>, morphisms: Vec<Morphism>, identities: Vec<MorId>, composites: impl IntoIterator<Item = (MorId, MorId, MorId)>) -> Self {
        let mut cat = Self::skeleton(objects, morphisms, identities);
        for (f, g, h) in composites {
            cat.set_composite(f, g, h);
        }
        cat
    }

    /// Builds a category whose composite of every composable pair is `compose(f, g)`.
    pub fn from_fn(objects: Vec<String>, morphisms: Vec<Morphism>, identities: Vec<MorId>, mut compose: impl FnMut(MorId, MorId) -> MorId) -> Self {
        let mut cat = Self::skeleton(objects, morphisms, identities);
        for f in 0..cat.morphisms.len() {
            let y = cat.morphisms[f].cod;
            for j in 0..cat.out[y].len() {
                let g = cat.out[y][j];
                cat.table[f][j] = Some(compose(f, g));
            }
        }
        cat
    }

    fn skeleton(objects: Vec<String>, morphisms: Vec<Morphism>, identities: Vec<MorId>) -> Self {
        let mut out = vec![Vec::new(); objects.len()];
        let mut out_pos = vec![0; morphisms.len()];
        for (i, m) in morphisms.iter().enumerate() {
            out_pos[i] = out[m.dom].len();
            out[m.dom].push(i);
        }
        let table = morphisms.iter().map(|m| vec![None; out[m.cod].len()]).collect();
        let names = morphisms.iter().enumerate().map(|(i, m)| (m.name.clone(), i)).collect();
        FinCategory { objects, morphisms, identities, out, out_pos, table, stray: Vec::new(), names }
    }

    /// Overwrites one entry of the composition table.
    pub fn set_composite(&mut self, f: MorId, g: MorId, h: MorId) {
        if self.morphisms[f].cod == self.morphisms[g].dom {
            self.table[f][self.out_pos[g]] = Some(h);
        } else {
            self.stray.push((f, g, h));
        }
    }

    pub fn remove_composite(&mut self, f: MorId, g: MorId) {
        if self.morphisms[f].cod == self.morphisms[g].dom {
            self.table[f][self.out_pos[g]] = None;
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }
    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }
    pub fn objects(&self) -> &[String] {
        &self.objects
    }
    pub fn object_name(&self, x: ObjId) -> &str {
        &self.objects[x]
    }
    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }
    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }
    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f]
    }
    pub fn morphism_by_name(&self, name: &str) -> Option<MorId> {
        self.names.get(name).copied()
    }
    pub fn dom(&self, f: MorId) -> ObjId {
        self.morphisms[f].dom
    }
    pub fn cod(&self, f: MorId) -> ObjId {
        self.morphisms[f].cod
    }
    pub fn identity(&self, x: ObjId) -> MorId {
        self.identities[x]
    }
    pub fn identities(&self) -> &[MorId] {
        &self.identities
    }
    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.morphisms[f].dom] == f
    }
    /// Morphisms with domain `x`.
    pub fn out_of(&self, x: ObjId) -> &[MorId] {
        &self.out[x]
    }
    pub fn hom(&self, x: ObjId, y: ObjId) -> Vec<MorId> {
        self.out[x].iter().copied().filter(|&f| self.morphisms[f].cod == y).collect()
    }

    /// "f then g".
    pub fn compose(&self, f: MorId, g: MorId) -> Option<MorId> {
        if self.morphisms[f].cod != self.morphisms[g].dom {
            return None;
        }
        self.table[f][self.out_pos[g]]
    }

    /// Composite of a nonempty composable string.
    pub fn compose_path(&self, arrows: &[MorId]) -> Option<MorId> {
        let (&first, rest) = arrows.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.compose(acc, g))
    }

    /// Iterates over all composable pairs `(f, g)`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (MorId, MorId)> + '_ {
        (0..self.morphisms.len()).flat_map(move |f| self.out[self.morphisms[f].cod].iter().map(move |&g| (f, g)))
    }

    pub fn num_composable_pairs(&self) -> usize {
        self.morphisms.iter().map(|m| self.out[m.cod].len()).sum()
    }

    /// Lists every violated category axiom; empty iff this is a category.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let mut counts: HashMap<&'static str, usize> = HashMap::new();
        let mut record = |report: &mut ValidationReport, rule: &'static str, witness: String| {
            let c = counts.entry(rule).or_insert(0);
            *c += 1;
            if *c <= MAX_WITNESSES_PER_RULE {
                report.push(rule, witness);
            }
        };
        let n = self.morphisms.len();
        for m in &self.morphisms {
            if m.dom >= self.objects.len() || m.cod >= self.objects.len() {
                record(&mut report, "dom-cod", format!("morphism {} has an undefined endpoint", m.name));
            }
        }
        if !report.is_valid() {
            return report;
        }
        if self.identities.len() != self.objects.len() {
            record(&mut report, "identity", "identity map does not cover every object".into());
            return report;
        }
        for (x, &id) in self.identities.iter().enumerate() {
            if id >= n || self.dom(id) != x || self.cod(id) != x {
                record(&mut report, "identity", format!("identity of {} is not an endomorphism of it", self.objects[x]));
            }
        }
        for &(f, g, h) in &self.stray {
            record(&mut report, "dom-cod", format!("composite {} listed for non-composable pair ({}, {})", self.name(h), self.name(f), self.name(g)));
        }
        for (f, g) in self.composable_pairs() {
            match self.compose(f, g) {
                None => record(&mut report, "totality", format!("missing composite of ({}, {})", self.name(f), self.name(g))),
                Some(h) if h >= n => record(&mut report, "totality", format!("composite of ({}, {}) is not a morphism", self.name(f), self.name(g))),
                Some(h) => {
                    if self.dom(h) != self.dom(f) || self.cod(h) != self.cod(g) {
                        record(&mut report, "dom-cod", format!("composite {} of ({}, {}) has wrong endpoints", self.name(h), self.name(f), self.name(g)));
                    }
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        for f in 0..n {
            let left = self.compose(self.identity(self.dom(f)), f);
            if left != Some(f) {
                record(&mut report, "identity", format!("1_{} then {} != {}", self.objects[self.dom(f)], self.name(f), self.name(f)));
            }
            let right = self.compose(f, self.identity(self.cod(f)));
            if right != Some(f) {
                record(&mut report, "identity", format!("{} then 1_{} != {}", self.name(f), self.objects[self.cod(f)], self.name(f)));
            }
        }
        for f in 0..n {
            for &g in &self.out[self.cod(f)] {
                let fg = self.compose(f, g).expect("checked total");
                for &h in &self.out[self.cod(g)] {
                    let gh = self.compose(g, h).expect("checked total");
                    let a = self.compose(fg, h);
                    let b = self.compose(f, gh);
                    if a != b {
                        record(
                            &mut report,
                            "associativity",
                            format!("({} {}) {} != {} ({} {})", self.name(f), self.name(g), self.name(h), self.name(f), self.name(g), self.name(h)),
                        );
                    }
                }
            }
        }
        for (rule, c) in counts {
            if c > MAX_WITNESSES_PER_RULE {
                report.push(rule, format!("... {} further violations", c - MAX_WITNESSES_PER_RULE));
            }
        }
        report
    }

    fn name(&self, f: MorId) -> &str {
        self.morphisms.get(f).map_or("<undefined>", |m| m.name.as_str())
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("not a category: {report}")))
        }
    }

    /// Same objects, arrows reversed, `compose_op(f, g) = compose(g, f)`.
    pub fn opposite(&self) -> Result<FinCategory> {
        self.require_valid()?;
        let morphisms = self.morphisms.iter().map(|m| Morphism { name: m.name.clone(), dom: m.cod, cod: m.dom }).collect();
        Ok(FinCategory::from_fn(self.objects.clone(), morphisms, self.identities.clone(), |f, g| self.compose(g, f).expect("valid category")))
    }

    /// All composable strings of `n` arrows; identities are excluded when `normalized`.
    pub fn nerve_chains(&self, n: usize, normalized: bool) -> Vec<NerveChain> {
        let mut chains: Vec<NerveChain> = (0..self.objects.len()).map(|x| NerveChain { start: x, arrows: Vec::new() }).collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for c in &chains {
                let end = c.arrows.last().map_or(c.start, |&f| self.cod(f));
                for &g in &self.out[end] {
                    if normalized && self.is_identity(g) {
                        continue;
                    }
                    let mut arrows = c.arrows.clone();
                    arrows.push(g);
                    next.push(NerveChain { start: c.start, arrows });
                }
            }
            chains = next;
        }
        chains
    }

    /// Whether every morphism has a two-sided inverse.
    pub fn is_groupoid(&self) -> bool {
        (0..self.morphisms.len()).all(|f| {
            self.hom(self.cod(f), self.dom(f))
                .into_iter()
                .any(|g| self.compose(f, g) == Some(self.identity(self.dom(f))) && self.compose(g, f) == Some(self.identity(self.cod(f))))
        })
    }

    /// The k-linearization: basis = morphisms, `e_f * e_g = e_{fg}` when composable, else 0.
    pub fn linearize<K: Field>(&self, field: &K) -> Result<FDAlgebra<K>> {
        self.require_valid()?;
        let n = self.morphisms.len();
        let mut alg = FDAlgebra::zero_structure(field, n, self.morphisms.iter().map(|m| m.name.clone()).collect());
        for (f, g) in self.composable_pairs() {
            let h = self.compose(f, g).expect("valid category");
            alg.set_structure(f, g, h, field.one());
        }
        let mut unit = field.zero_vec(n);
        for &id in &self.identities {
            unit[id] = field.one();
        }
        alg.set_unit(unit);
        Ok(alg)
    }

    // ---- presets ----

    /// One object, one identity morphism.
    pub fn trivial() -> Self {
        Self::one_object_monoid(1, |_, _| 0, |_| "1".into())
    }

    /// The poset `0 < 1`: morphisms `1_0`, `1_1`, `a: 0 -> 1`.
    pub fn poset_a2() -> Self {
        let morphisms = vec![
            Morphism { name: "1_0".into(), dom: 0, cod: 0 },
            Morphism { name: "1_1".into(), dom: 1, cod: 1 },
            Morphism { name: "a".into(), dom: 0, cod: 1 },
        ];
        FinCategory::from_fn(vec!["0".into(), "1".into()], morphisms, vec![0, 1], |f, g| match (f, g) {
            (0, g) => g,
            (f, 1) => f,
            _ => unreachable!(),
        })
    }

    /// `n` objects and identities only.
    pub fn discrete(n: usize) -> Self {
        let morphisms = (0..n).map(|x| Morphism { name: format!("1_{x}"), dom: x, cod: x }).collect();
        FinCategory::from_fn((0..n).map(|x| x.to_string()).collect(), morphisms, (0..n).collect(), |f, _| f)
    }

    /// The monoid `<t | t^(index+period) = t^index>` as a one-object category.
    pub fn cyclic_monoid(index: usize, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidInput("cyclic monoid period must be positive".into()));
        }
        let size = index + period;
        let reduce = move |e: usize| if e < size { e } else { index + (e - index) % period };
        Ok(Self::one_object_monoid(
            size,
            move |a, b| reduce(a + b),
            |e| match e {
                0 => "1".into(),
                1 => "t".into(),
                e => format!("t^{e}"),
            },
        ))
    }

    /// A finite abelian group `Z/n1 x ... x Z/nk` as a one-object category.
    pub fn one_object_group(orders: &[usize]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidInput("group orders must be positive".into()));
        }
        let orders = orders.to_vec();
        let size: usize = orders.iter().product();
        let digits = {
            let orders = orders.clone();
            move |mut e: usize| {
                orders
                    .iter()
                    .map(|&o| {
                        let d = e % o;
                        e /= o;
                        d
                    })
                    .collect::<Vec<_>>()
            }
        };
        let undigits = {
            let orders = orders.clone();
            move |d: &[usize]| d.iter().zip(&orders).rev().fold(0, |acc, (&x, &o)| acc * o + x)
        };
        let d2 = digits.clone();
        let sum = move |a: usize, b: usize| {
            let (da, db) = (digits(a), digits(b));
            let s: Vec<usize> = da.iter().zip(&db).zip(&orders).map(|((x, y), o)| (x + y) % o).collect();
            undigits(&s)
        };
        Ok(Self::one_object_monoid(size, sum, move |e| {
            if e == 0 {
                "1".into()
            } else {
                let d = d2(e);
                format!("g{}", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
        }))
    }

    /// One object `*` whose endomorphisms are `0..size`, element 0 the identity.
    pub fn one_object_monoid(size: usize, op: impl Fn(usize, usize) -> usize, name: impl Fn(usize) -> String) -> Self {
        let morphisms = (0..size).map(|e| Morphism { name: name(e), dom: 0, cod: 0 }).collect();
        FinCategory::from_fn(vec!["*".into()], morphisms, vec![0], op)
    }
}

/// A functor between finite categories, stored as object and morphism maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatFunctor {
    pub object_map: Vec<ObjId>,
    pub morphism_map: Vec<MorId>,
}

impl CatFunctor {
    pub fn identity(c: &FinCategory) -> Self {
        CatFunctor { object_map: (0..c.num_objects()).collect(), morphism_map: (0..c.num_morphisms()).collect() }
    }

    pub fn validate(&self, source: &FinCategory, target: &FinCategory) -> ValidationReport {
        let mut report = ValidationReport::new();
        if self.object_map.len() != source.num_objects() || self.morphism_map.len() != source.num_morphisms() {
            report.push("functor-shape", "maps do not cover the source category");
            return report;
        }
        if self.object_map.iter().any(|&y| y >= target.num_objects()) || self.morphism_map.iter().any(|&g| g >= target.num_morphisms()) {
            report.push("functor-shape", "maps leave the target category");
            return report;
        }
        for f in 0..source.num_morphisms() {
            let g = self.morphism_map[f];
            if target.dom(g) != self.object_map[source.dom(f)] || target.cod(g) != self.object_map[source.cod(f)] {
                report.push("functor-dom-cod", format!("image of {} has wrong endpoints", source.morphism(f).name));
            }
        }
        for x in 0..source.num_objects() {
            if self.morphism_map[source.identity(x)] != target.identity(self.object_map[x]) {
                report.push("functor-identity", format!("identity of {} not preserved", source.object_name(x)));
            }
        }
        if !report.is_valid() {
            return report;
        }
        for (f, g) in source.composable_pairs() {
            let Some(h) = source.compose(f, g) else { continue };
            let lhs = target.compose(self.morphism_map[f], self.morphism_map[g]);
            if lhs != Some(self.morphism_map[h]) {
                report.push(
                    "functor-composition",
                    format!("F({} {}) != F({}) F({})", source.morphism(f).name, source.morphism(g).name, source.morphism(f).name, source.morphism(g).name),
                );
            }
        }
        report
    }

    pub fn is_injective_on_morphisms(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.morphism_map.iter().all(|g| seen.insert(*g))
    }

    pub fn is_surjective_on_morphisms(&self, target: &FinCategory) -> bool {
        let mut hit = vec![false; target.num_morphisms()];
        for &g in &self.morphism_map {
            hit[g] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;

    #[test]
    fn presets_are_categories() {
        assert!(FinCategory::trivial().validate().is_valid());
        assert!(FinCategory::poset_a2().validate().is_valid());
        assert!(FinCategory::discrete(3).validate().is_valid());
        assert!(FinCategory::cyclic_monoid(1, 1).unwrap().validate().is_valid());
        assert!(FinCategory::cyclic_monoid(2, 3).unwrap().validate().is_valid());
        assert!(FinCategory::one_object_group(&[2, 3]).unwrap().validate().is_valid());
    }

    #[test]
    fn broken_identity_is_reported() {
        let mut c = FinCategory::poset_a2();
        // a then 1_1 should be a; point it at 1_0 instead
        c.set_composite(2, 1, 0);
        let report = c.validate();
        assert!(!report.is_valid());
        assert!(report.has_rule("dom-cod") || report.has_rule("identity"));
    }

    #[test]
    fn opposite_of_a2_reverses_arrow() {
        let c = FinCategory::poset_a2();
        let op = c.opposite().unwrap();
        assert_eq!((op.dom(2), op.cod(2)), (1, 0));
        assert!(op.validate().is_valid());
        assert_eq!(op.opposite().unwrap(), c);
    }

    #[test]
    fn opposite_of_commutative_monoid_is_same_table() {
        let c = FinCategory::cyclic_monoid(1, 1).unwrap();
        assert_eq!(c.opposite().unwrap(), c);
    }

    #[test]
    fn nerve_counts_on_a2() {
        let c = FinCategory::poset_a2();
        assert_eq!(c.nerve_chains(0, false).len(), 2);
        assert_eq!(c.nerve_chains(1, false).len(), 3);
        // brute force over all ordered pairs of morphisms
        let brute = (0..3).flat_map(|f| (0..3).map(move |g| (f, g))).filter(|&(f, g)| c.cod(f) == c.dom(g)).count();
        assert_eq!(brute, 4);
        assert_eq!(c.nerve_chains(2, false).len(), brute);
        assert_eq!(c.nerve_chains(2, true).len(), 0);
        assert_eq!(c.nerve_chains(1, true).len(), 1);
    }

    #[test]
    fn linearize_a2_is_three_dimensional() {
        let k = PrimeField::new(2).unwrap();
        let a = FinCategory::poset_a2().linearize(&k).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a.validate().is_valid());
        // e_{1_0} e_a = e_a, e_a e_{1_0} = 0
        assert_eq!(a.mul(&k.unit_vec(3, 0), &k.unit_vec(3, 2)), k.unit_vec(3, 2));
        assert!(k.vec_is_zero(&a.mul(&k.unit_vec(3, 2), &k.unit_vec(3, 0))));
    }

    #[test]
    fn linearize_trivial_and_discrete() {
        let k = PrimeField::new(3).unwrap();
        let a = FinCategory::trivial().linearize(&k).unwrap();
        assert_eq!(a.dim(), 1);
        let b = FinCategory::discrete(2).linearize(&k).unwrap();
        assert_eq!(b.dim(), 2);
        assert!(b.is_commutative());
        assert_eq!(b.unit(), &vec![1, 1]);
    }

    #[test]
    fn functor_validation_catches_bad_maps() {
        let c = FinCategory::poset_a2();
        assert!(CatFunctor::identity(&c).validate(&c, &c).is_valid());
        let bad = CatFunctor { object_map: vec![0, 1], morphism_map: vec![0, 0, 2] };
        assert!(!bad.validate(&c, &c).is_valid());
    }
}
