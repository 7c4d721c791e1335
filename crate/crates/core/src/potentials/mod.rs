//! Wolff and Riesz potentials, Menger curvature and growth constants.

mod curvature;
mod growth;
mod profile;
mod query;
mod riesz;
mod wolff;

pub use curvature::{
    circumradius, inverse_circumradius_sq, menger_curvature, pointwise_curvature, CurvatureEstimate,
};
pub use growth::{dyadic_curvature_proxy, linear_growth_constant};
pub use profile::{
    detect_divergence, least_squares, Divergence, PotentialProfile, ScaleEntry,
    DIVERGENCE_FRACTION, DIVERGENCE_RUN,
};
pub use query::QuerySet;
pub use riesz::riesz_potential;
pub use wolff::{
    wolff_dyadic, wolff_dyadic_many, wolff_tree, wolff_tree_along_path, wolff_tree_area_normalized,
};
