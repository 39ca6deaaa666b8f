//! Closed-form objects: the decay ratio, the optimal controls for finite and
//! infinite horizons, the equivalent feedback gain, the similarity weight and
//! the steady-state shift.

mod control;
mod controls;
mod steady;
mod weight;

pub use control::{ControlKind, ControlMeta, ControlSignal, MetaSummary};
pub use controls::{
    finite_horizon_control, hum_control, infinite_horizon_control, optimal_control,
    truncation_windows, MAX_TRUNCATION_WINDOWS, TRUNCATION_TAIL,
};
pub use steady::steady_state_shift;
pub use weight::{
    char_poly, feedback_gain, lambda_from_z, similarity_weight, weight_from_lambda, Weight,
};
