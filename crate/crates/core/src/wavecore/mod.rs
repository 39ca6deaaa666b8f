//! Grids, initial data, the traveling-wave potential and state evaluation.

mod alpha;
mod data;
mod grid;
mod horizon;
mod state;

pub use alpha::{
    alpha_limits_at_zero, boundary_trace, build_alpha_window0, build_f, observation_trace,
    propagate_alpha, propagate_feedback, AlphaProfile,
};
pub use data::InitialData;
pub use grid::GridFunction;
pub use horizon::Horizon;
pub use state::{energy, evaluate_state, StateSnapshot};
