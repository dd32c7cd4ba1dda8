pub mod conditions;
pub mod equivalence;
pub mod map;
pub mod operator;
pub mod solve;

pub use conditions::{ConditionCertificate, ConditionSet, NormalCase};
pub use equivalence::{canonical_normal_form, equivalent, Verdict};
pub use map::{transform, CircularAutomorphism, FormalMap, SphereAutomorphism};
pub use operator::{cm_operator, gcm_operator, scalar_product};
pub use solve::{
    chern_moser_normalize, circular_normalize, generic_normalize, normalize, tubular_normalize,
    apply_symmetry, NormalFormReport, Symmetry,
};
