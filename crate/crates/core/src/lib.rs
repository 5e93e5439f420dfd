//! Cohomology of orbit spaces of free S^1 and S^3 actions on spaces with the
//! cohomology of a product of two spheres.
//!
//! The crate is organised bottom-up: [`algebra`] handles quotient rings,
//! [`gysin`] and [`serre`] are the two independent engines, [`classify`]
//! matches their output against the family templates in the fixture corpus,
//! and [`index`] turns the resulting rings into index bounds.

pub mod algebra;
pub mod classify;
mod error;
pub mod field;
pub mod fixtures;
pub mod gysin;
pub mod index;
pub mod report;
pub mod serre;
pub mod template;

pub use error::Error;
pub use field::FieldTag;
