//! Modules over finite categories, projective resolutions, Ext groups and
//! three independent routes to functor cohomology.

mod catmodule;
mod complex;
mod engine;
mod group;
mod nerve;
mod resolution;

pub use catmodule::CatModule;
pub use complex::CochainComplex;
pub use engine::{CohomologyEngine, EngineRegistry, GroupBarEngine, NerveEngine, ResolutionEngine};
pub use group::{group_bar_complex, group_cohomology_dims, FiniteAbelianGroup, GroupModule};
pub use nerve::{nerve_cohomology_dims, nerve_complex};
pub use resolution::{
    cat_ext_dims, cohomology_dims, ext_dims, ext_dims_with_idempotents, free_resolution, module_hom_dim, natural_transformation_dim, projective_resolution,
    Resolution,
};

/// Upper bound on the dimension of any single cochain group.
pub const MAX_COCHAIN_DIM: usize = 4096;
