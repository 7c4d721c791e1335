//! Capacity indices and estimators built from the potentials.

mod direct;
mod estimate;
mod indices;
mod melnikov;
mod wolff;

pub use direct::{direct_capacity_lower, riesz_norm, QuadratureSpec};
pub use estimate::{CapacityEstimate, Convention, Direction, Normalization};
pub use indices::{
    sharpness_indices, teocap2_indices, theorem1_indices, CapacityIndices, DistortedIndices,
};
pub use melnikov::melnikov_gamma_lower;
pub use wolff::{wolff_capacity_lower, wolff_capacity_lower_best, WolffSource};
