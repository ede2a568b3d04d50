//! Saturated graphs on the Cantor space, built as inverse limits of finite
//! graphs.
//!
//! A finite graph here is reflexive and symmetric. Starting from `K_n`, each
//! level of a [`Tower`] is a random product extension of the previous one,
//! accepted only after exhaustive checks of `n`-saturation and of the lifting
//! condition its projection needs. The limit of the tower is an `n`-saturated
//! graph whose vertices are threads through the levels; [`realize_type`]
//! constructs a thread realizing any type over fewer than `n` threads.
//!
//! * [`graph`]: finite graphs, types, saturation checks.
//! * [`bounds`]: exact union bounds and the certified number of copies.
//! * [`builder`]: random product extensions and rejection sampling.
//! * [`morphism`]: graph maps, quotient maps, the lifting property.
//! * [`tower`]: the inverse system, limit threads, type realization.
//! * [`io`]: canonical JSON and DOT.

mod bits;
pub mod bounds;
pub mod builder;
pub mod graph;
pub mod io;
pub mod morphism;
pub mod oracle;
pub mod rng;
pub mod stats;
pub mod tower;

pub use bounds::{failure_bound_a, failure_bound_b, minimal_certified_m};
pub use builder::{
    build_extension, check_condition_b, sample_product_graph, BuildError, BuildMode, BuildParams,
    ConditionBReport, Extension, ProductVertex,
};
pub use graph::{
    find_realizer, is_n_saturated, is_weakly_n_saturated, realizes, FiniteGraph, GraphError,
    SaturationReport, TypeSpec,
};
pub use morphism::{
    check_lifting_property, compose, is_homomorphism, is_quotient_map, is_strict, GraphMap,
    LiftFailure, MorphismError,
};
pub use oracle::oracle_is_n_saturated;
pub use tower::{
    adjacency_status, build_tower, canonical_extension, extend_realizer, extend_realizer_to,
    realize_type, realize_type_extending, verify_provenance, verify_realization, verify_tower,
    Constraint, LimitAdjacency, RealizerHandle, ThreadPrefix, Tower, TowerError, TowerViolation,
};
