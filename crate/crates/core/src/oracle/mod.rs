//! Independent numerical reference for the closed forms.

mod dopri;
pub mod systems;

pub use dopri::{integrate, DynamicalSystem, IntegrationResult, StepStats};
pub use systems::{
    build_free_body_attitude_system, build_free_body_system, build_heavy_top_attitude_system, build_heavy_top_system,
    build_viscous_system, viscous_energy, HeavyTopData,
};
