//! Closed-form rotation of a rigid body about a fixed point.
//!
//! Four solved cases live here: the heavy symmetric top ([`lagrange`]), the
//! torque-free triaxial body ([`poinsot`]) with its herpolhode
//! ([`herpolhode`]), and the symmetric body under viscous drag
//! ([`viscous`]). They rest on [`specfun`] and the appendix integrals in
//! [`integrals`]. The [`oracle`] module integrates the governing ODEs
//! directly and never touches the closed forms, so it can referee them.

pub mod error;
pub mod herpolhode;
pub mod integrals;
pub mod lagrange;
pub mod oracle;
pub mod poinsot;
pub mod quadrature;
pub mod rotation;
pub mod specfun;
pub mod viscous;

pub use error::{Error, Result};
