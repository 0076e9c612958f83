//! Normalized volume minimization over the Reeb cone of toric log Fano cone
//! singularities, with product-configuration Futaki invariants and the
//! supporting lattice, monomial-ideal and one-parameter-subgroup toys.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod character;
pub mod cone;
pub mod degeneration;
pub mod error;
pub mod futaki;
pub mod ideal;
pub mod linalg;
pub mod number;
pub mod singularity;
pub mod volume;

pub use character::{index_character, leading_coefficient, CharacterFormula, CharacterSample, TruncatedCharacter};
pub use cone::{dual_cone, triangulate, triangulate_with_order, PolyCone, SimplicialDecomposition};
pub use degeneration::{
    additivity, composed_equals_two_step, limit, mu_weight, CompositionCheck, SupportEntry, WeightedPoint,
};
pub use error::{Error, Result};
pub use futaki::{
    ding_product, futaki, futaki_exact, futaki_with, normalize_config, t_normalize, FutakiMethod, FutakiReport,
    ProductTestConfig,
};
pub use ideal::MonomialIdeal;
pub use number::{Number, RationalVector, ReebVector, Scalar};
pub use singularity::{
    classify_regularity, log_discrepancy, rationalize, validate, GorensteinVector, Regularity, ToricConeData,
};
pub use volume::{
    build_volume_form, grad_vol, hess_vol, is_ksemistable, minimize, normalized_volume, vol, Certificate,
    MinimizationResult, MinimizeOptions, Verdict, VolumeForm,
};
