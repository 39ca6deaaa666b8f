use crate::error::Result;
use crate::wavecore::{GridFunction, InitialData};

/// Re-center the data on the steady state `σx`: `ỹ0 = y0 − σx`, `ỹ1 = y1`,
/// `ỹ0′ = y0′ − σ`.
///
/// The shifted problem is the zero-target problem. Its solution maps back by
/// adding `σx` to `y`, `σ` to `∂ₓy`, and by imposing `∂ₓy(t, 1) = σ + u(t)`.
pub fn steady_state_shift(init: &InitialData, sigma: f64) -> Result<InitialData> {
    if sigma == 0.0 {
        return Ok(init.clone());
    }
    let y0 = init.y0();
    let shifted: Vec<f64> = y0.points().zip(y0.values()).map(|(x, v)| v - sigma * x).collect();
    InitialData::new(
        GridFunction::new(0.0, 1.0, shifted)?,
        init.y1().clone(),
        Some(init.dy0().map(|d| d - sigma)?),
    )
}
