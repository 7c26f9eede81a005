//! Gauge sector: Laplacian Green's functions, the mean-field scalar
//! potential, semantic current, the Coulomb-gauge check, the non-local
//! Coulomb interaction and per-term Lagrangian / action breakdowns.
//!
//! The covariant derivative is `D = ∂ − iA` with the charge fixed to 1.

mod coulomb;
mod current;
mod error;
mod greens;
mod lagrangian;
mod poisson;

pub use coulomb::{coulomb_interaction, coulomb_interaction_capped, DEFAULT_COULOMB_CAP};
pub use current::{divergence, divergence_check, semantic_current, CurrentField, DivergenceReport, VectorPotentialField};
pub use error::GaugeError;
pub use greens::{greens_function, GreensSign, GreensSpec};
pub use lagrangian::{
    effective_action, lagrangian_terms, ActionBreakdown, EffectiveAction, LagrangianInputs, Nonlinearity, Term,
};
pub use poisson::solve_scalar_potential;
