//! Quasiconformal distortion of nonlinear capacities, checked numerically on
//! two-sided Cantor constructions.
//!
//! The crate builds Cantor-set pairs `(E, φ(E))` from per-level schedules,
//! evaluates Wolff and Riesz potentials, Menger curvature and gauge contents
//! on them, and turns these into capacity estimators. The [`experiments`]
//! module assembles those pieces into depth sweeps whose verdicts are
//! reproducible from their rows.

pub mod cantor;
pub mod capacity;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod gauges;
pub mod geom;
pub mod measure;
pub mod potentials;

pub use error::{Error, Result};
pub use geom::Point;
pub use measure::{Atom, PlanarMeasure};
