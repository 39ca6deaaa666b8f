use crate::error::{Error, Result};
use crate::wavecore::Horizon;

/// Convex weight `λ` between tracking and control cost, with its cached
/// decay ratio `z_λ ∈ [−1, 0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weight {
    lambda: f64,
    z: f64,
}

impl Weight {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Per-window decay ratio, the root of `p_λ` inside `[−1, 0]`.
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn is_hum(&self) -> bool {
        self.lambda == 1.0
    }
}

/// `z_λ = −λ / (2 − λ + 2√(1 − λ))`.
pub fn weight_from_lambda(lambda: f64) -> Result<Weight> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidLambda(lambda));
    }
    let z = -lambda / (2.0 - lambda + 2.0 * (1.0 - lambda).sqrt());
    Ok(Weight { lambda, z })
}

/// Inverse of [`weight_from_lambda`]: solving `p_λ(z) = 0` for `λ` gives
/// `λ = −4z / (1 − z)²`.
pub fn lambda_from_z(z: f64) -> Result<f64> {
    if !(z > -1.0 && z <= 0.0) {
        return Err(Error::InvalidRoot(z));
    }
    Ok(-4.0 * z / ((1.0 - z) * (1.0 - z)))
}

/// `p_λ(z) = λz² + (4 − 2λ)z + λ`.
pub fn char_poly(lambda: f64, z: f64) -> f64 {
    lambda * z * z + (4.0 - 2.0 * lambda) * z + lambda
}

/// Gain `κ = (z + 1)/(z − 1)` of the velocity feedback `∂ₓy(t,1) = κ ∂ₜy(t,1)`
/// that reproduces the infinite-horizon optimal state.
pub fn feedback_gain(w: &Weight) -> f64 {
    (w.z + 1.0) / (w.z - 1.0)
}

/// The weight for which the minimal-norm exact control on `(0, T)` and the
/// infinite-horizon optimal control agree on `(0, 2)`: `z_λ = 2/T − 1`.
pub fn similarity_weight(t: f64) -> Result<Weight> {
    let n = match Horizon::finite(t)? {
        Horizon::Finite { n } => n,
        Horizon::Truncated { .. } => unreachable!(),
    };
    let z = 1.0 / n as f64 - 1.0;
    let lambda = lambda_from_z(z)?;
    Ok(Weight { lambda, z })
}
