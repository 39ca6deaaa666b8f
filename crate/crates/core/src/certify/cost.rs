use crate::error::{Error, Result};
use crate::explicit::ControlSignal;
use crate::wavecore::{observation_trace, AlphaProfile};

/// `J = ∫₀ᵀ (1 − λ) ∂ₓy(t, 0)² + λ u(t)² dt` with `∂ₓy(t, 0) = 2α′(t)`,
/// by the midpoint rule. `alpha` must have been generated by `u`.
pub fn cost(alpha: &AlphaProfile, u: &ControlSignal, lambda: f64) -> Result<f64> {
    cost_with_steady_state(alpha, u, lambda, 0.0)
}

/// Cost of tracking the steady state `σx`:
/// `∫₀ᵀ (1 − λ)(∂ₓy(t, 0) − σ)² + λ u(t)² dt`, where `alpha` was generated with
/// the boundary value `σ + u`.
pub fn cost_with_steady_state(
    alpha: &AlphaProfile,
    u: &ControlSignal,
    lambda: f64,
    sigma: f64,
) -> Result<f64> {
    if alpha.horizon() != u.horizon() {
        return Err(Error::GridMismatch(format!(
            "state horizon {:?} vs control horizon {:?}",
            alpha.horizon(),
            u.horizon()
        )));
    }
    let obs = observation_trace(alpha)?;
    obs.window(0).ensure_congruent(u.window(0))?;
    let h = u.step();
    let sum: f64 = obs
        .samples()
        .zip(u.samples())
        .map(|((_, y), (_, v))| (1.0 - lambda) * (y - sigma).powi(2) + lambda * v * v)
        .sum();
    Ok(h * sum)
}
