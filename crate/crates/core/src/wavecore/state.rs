use super::alpha::AlphaProfile;
use super::grid::GridFunction;
use crate::error::{Error, Result};

/// The state at one time, sampled at the `m` midpoints of `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSnapshot {
    pub t: f64,
    pub y: GridFunction,
    pub yx: GridFunction,
    pub yt: GridFunction,
}

impl StateSnapshot {
    /// `∫₀¹ (∂ₓy)² + (∂ₜy)²` by the midpoint rule.
    pub fn energy(&self) -> f64 {
        self.yx.norm_sq() + self.yt.norm_sq()
    }

    /// `y(t, 0)` extrapolated from the first sample.
    pub fn y_at_zero(&self) -> f64 {
        self.y.values()[0] - 0.5 * self.y.step() * self.yx.values()[0]
    }
}

/// Global index `p` with `t = p h`. Times must sit on the cell boundaries
/// of the α grid so that `t ± x` lands on α samples for every midpoint `x`.
fn node_index(alpha: &AlphaProfile, t: f64) -> Result<usize> {
    let end = alpha.horizon().end();
    if !(0.0..=end).contains(&t) {
        return Err(Error::OutOfRange { t, end });
    }
    let h = alpha.step();
    let p = (t / h).round();
    if (t - p * h).abs() > 1e-9 * h {
        return Err(Error::OffGrid { t, h });
    }
    Ok(p as usize)
}

/// d'Alembert evaluation: `∂ₓy = α′(t+x) + α′(t−x)`, `∂ₜy = α′(t+x) − α′(t−x)`,
/// and `y` accumulated from `y(t, 0) = 0`.
pub fn evaluate_state(alpha: &AlphaProfile, t: f64) -> Result<StateSnapshot> {
    let p = node_index(alpha, t)?;
    let m = alpha.m();
    // t + x_j ↦ g = p + m + j;  t − x_j ↦ g = p + m − 1 − j.
    let (mut yx, mut yt) = (Vec::with_capacity(m), Vec::with_capacity(m));
    for j in 0..m {
        let plus = alpha.at(p + m + j);
        let minus = alpha.at(p + m - 1 - j);
        yx.push(plus + minus);
        yt.push(plus - minus);
    }
    let yx = GridFunction::new(0.0, 1.0, yx)?;
    let y = GridFunction::new(0.0, 1.0, yx.antiderivative())?;
    let yt = GridFunction::new(0.0, 1.0, yt)?;
    Ok(StateSnapshot { t, y, yx, yt })
}

/// `E(t) = 2∫_{t−1}^{t+1} α′(s)² ds`.
///
/// Substituting `y = α(t+x) − α(t−x)` gives `(∂ₓy)² + (∂ₜy)² = 2α′(t+x)² + 2α′(t−x)²`,
/// hence the factor 2.
pub fn energy(alpha: &AlphaProfile, t: f64) -> Result<f64> {
    let p = node_index(alpha, t)?;
    let m = alpha.m();
    let h = alpha.step();
    let sum: f64 = (p..p + 2 * m).map(|g| alpha.at(g).powi(2)).sum();
    Ok(2.0 * h * sum)
}
