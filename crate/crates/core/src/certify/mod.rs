//! Objective evaluation and pass/fail certificates.
//!
//! Residuals of exact grid identities are normalized by the size of window 0,
//! so tolerances do not depend on the scale of the initial data.

mod checks;
mod cost;
mod report;

pub use checks::{
    check_cost_optimality, check_decay, check_similarity, check_terminal, check_turnpike,
    euler_lagrange_residual, perturbation_from_interior, DECAY_SIGNIFICANCE,
    SIMILARITY_IDENTITY_TOL,
};
pub use cost::{cost, cost_with_steady_state};
pub use report::{CertificateKind, CertificateReport, Detail, Tolerances};
