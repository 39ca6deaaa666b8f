//! Optimal Neumann boundary control of the 1D wave equation
//!
//! ```text
//!     ∂ₜₜy = ∂ₓₓy on (0, 1),   y(t, 0) = 0,   ∂ₓy(t, 1) = u(t),
//!     J(u) = ∫₀ᵀ (1 − λ) ∂ₓy(t, 0)² + λ u(t)² dt,   y(T) = ∂ₜy(T) = 0.
//! ```
//!
//! The crate synthesizes the closed-form optimal controls ([`explicit`]),
//! simulates the state through its traveling-wave potential ([`wavecore`]),
//! certifies optimality, terminal, decay, turnpike and similarity properties
//! ([`certify`]), and rebuilds the optimum independently as a family of small
//! equality-constrained quadratic programs ([`oracle`]). [`modal`] covers the
//! abstract skew-adjoint setting mode by mode; [`io`] reads and writes CSV.

pub mod certify;
pub mod error;
pub mod explicit;
pub mod io;
pub mod modal;
pub mod oracle;
pub mod wavecore;

pub use error::{Error, Result};
