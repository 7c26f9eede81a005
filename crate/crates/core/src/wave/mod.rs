//! Wave-field dynamics on periodic grids.
//!
//! The evolution equation is `i ∂ₜψ = −½∇²ψ + Vψ + γ|ψ|²ψ` (`ħ = m = 1`);
//! `γ < 0` is focusing, `γ > 0` defocusing.

mod eigen;
mod error;
mod evolve;
mod observables;
pub mod snapshot;
mod tunneling;

pub use eigen::{stationary_states, StationaryState};
pub use error::WaveError;
pub use evolve::{evolve, field_energy, EvolutionConfig, Evolver, ObservableSeries, MAX_2D_CELLS};
pub use observables::{charge_conservation_report, well_occupancy, ChargeReport, ChargeVerdict};
pub use tunneling::{
    spectral_tunneling_period, tunneling_period, SpectralPeriod, TunnelingConfig, TunnelingResult, TunnelingStart,
};
