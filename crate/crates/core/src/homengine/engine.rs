use std::collections::BTreeMap;

use super::catmodule::CatModule;
use super::group::{group_cohomology_dims, FiniteAbelianGroup, GroupModule};
use super::nerve::nerve_cohomology_dims;
use super::resolution::cohomology_dims;
use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::fincat::FinCategory;

/// One way of computing `dim H^i(C; F)` for `i <= n`.
pub trait CohomologyEngine<K: Field>: Send + Sync {
    fn name(&self) -> &'static str;
    fn cohomology_dims(&self, c: &FinCategory, f: &CatModule<K>, field: &K, n: usize) -> Result<Vec<usize>>;
}

/// `Ext(k, F)` over the linearization.
pub struct ResolutionEngine;

impl<K: Field> CohomologyEngine<K> for ResolutionEngine {
    fn name(&self) -> &'static str {
        "resolution"
    }
    fn cohomology_dims(&self, c: &FinCategory, f: &CatModule<K>, _field: &K, n: usize) -> Result<Vec<usize>> {
        cohomology_dims(c, f, n)
    }
}

/// Simplicial cochains on the nerve.
pub struct NerveEngine {
    pub normalized: bool,
}

impl<K: Field> CohomologyEngine<K> for NerveEngine {
    fn name(&self) -> &'static str {
        if self.normalized {
            "nerve-normalized"
        } else {
            "nerve"
        }
    }
    fn cohomology_dims(&self, c: &FinCategory, f: &CatModule<K>, field: &K, n: usize) -> Result<Vec<usize>> {
        nerve_cohomology_dims(c, f, field, n, self.normalized)
    }
}

/// Bar cochains of a one-object abelian groupoid.
pub struct GroupBarEngine;

impl<K: Field> CohomologyEngine<K> for GroupBarEngine {
    fn name(&self) -> &'static str {
        "group-bar"
    }
    fn cohomology_dims(&self, c: &FinCategory, f: &CatModule<K>, field: &K, n: usize) -> Result<Vec<usize>> {
        let group = FiniteAbelianGroup::from_category(c)?;
        let module = GroupModule::from_cat_module(c, &group, f);
        group_cohomology_dims(&group, &module, field, n)
    }
}

/// Engines by name.
pub struct EngineRegistry<K: Field> {
    engines: BTreeMap<&'static str, Box<dyn CohomologyEngine<K>>>,
}

impl<K: Field> Default for EngineRegistry<K> {
    fn default() -> Self {
        let mut reg = EngineRegistry { engines: BTreeMap::new() };
        reg.register(Box::new(ResolutionEngine));
        reg.register(Box::new(NerveEngine { normalized: false }));
        reg.register(Box::new(NerveEngine { normalized: true }));
        reg.register(Box::new(GroupBarEngine));
        reg
    }
}

impl<K: Field> EngineRegistry<K> {
    pub fn register(&mut self, engine: Box<dyn CohomologyEngine<K>>) {
        self.engines.insert(engine.name(), engine);
    }

    pub fn get(&self, name: &str) -> Result<&dyn CohomologyEngine<K>> {
        self.engines
            .get(name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::InvalidInput(format!("unknown engine {name:?}; available: {}", self.names().join(", "))))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.engines.keys().copied().collect()
    }
}
