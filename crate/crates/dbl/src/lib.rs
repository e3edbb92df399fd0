//! Deterministic Bayesian Logic: syntax, sequent checking, staged free
//! models and exact probability extension.

pub mod construction;
pub mod model;
pub mod probability;
pub mod proof;
pub mod syntax;

pub use syntax::{Formula, Sequent, Theta};
