//! Isomorphism testing for finite groups given by Cayley tables that extend an
//! abelian normal subgroup by a boundedly generated quotient, together with
//! the finite-ring machinery (radicals, Wedderburn components, unit groups)
//! the test relies on.

pub mod cayley;
pub mod error;
pub mod groups;
pub mod zlinalg;
pub mod abelian;
pub mod permgrp;
pub mod finring;
pub mod modiso;
pub mod extiso;
pub mod oracle;
pub mod tower;

pub use cayley::{
    check_hom_from_images, enumerate_quotient_generating_tuples, evaluate_word, quotient,
    validate_table, GroupHom, GroupTable, QuotientData, Subgroup, Word,
};
pub use error::{Error, Result};
pub use extiso::{
    aut0_generators, extend_quotient_isomorphism, isomorphism_with_prescribed_images, quotient_presentation,
    relator_values, stabilizer_with_fixed_generators, IsomorphismCoset, Presentation, RelatorValues,
};
pub use finring::{ActionRing, EndoMatrix, StructuredRing};
pub use modiso::module_isomorphism;
pub use permgrp::{Perm, StabChainGroup};
pub use tower::{
    automorphism_group, isomorphism_test, tower_normals, FactorKind, IsomorphismOutcome, NormalWitness,
    TowerOptions,
};
