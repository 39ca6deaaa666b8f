//! The traveling-wave potential α.
//!
//! The state is `y(t, x) = α(t + x) − α(t − x)`, so `α′` on `(−1, T + 1)` is
//! the whole solution. Window `k` of an [`AlphaProfile`] holds `α′` on
//! `(2k − 1, 2k + 1)`; the boundary condition at `x = 1` couples consecutive
//! windows sample by sample,
//!
//! ```text
//!     α′(s + 2) = −α′(s) + u(s + 1),
//! ```
//!
//! and with midpoint sampling `s`, `s + 1` and `s + 2` are all grid points.

use super::grid::GridFunction;
use super::horizon::Horizon;
use super::data::InitialData;
use crate::error::{Error, Result};
use crate::explicit::ControlSignal;

/// `F = α′` on `(−1, 1)`, built from the initial data:
/// `F(t) = ½(y0′(−t) − y1(−t))` for `t < 0` and `½(y0′(t) + y1(t))` for `t ≥ 0`.
pub fn build_f(init: &InitialData) -> Result<GridFunction> {
    let (dy0, y1) = (init.dy0().values(), init.y1().values());
    if dy0.len() != y1.len() {
        return Err(Error::GridMismatch("dy0 and y1 differ in length".into()));
    }
    let m = dy0.len();
    // t_i = −1 + (i + ½)h mirrors onto x_{m−1−i} for i < m.
    let values = (0..2 * m)
        .map(|i| {
            if i < m {
                let j = m - 1 - i;
                0.5 * (dy0[j] - y1[j])
            } else {
                let j = i - m;
                0.5 * (dy0[j] + y1[j])
            }
        })
        .collect();
    GridFunction::new(-1.0, 1.0, values)
}

/// α on `(−1, 1)` together with the constant `C0 = −½∫₀¹ y1`.
pub fn build_alpha_window0(init: &InitialData) -> Result<(GridFunction, f64)> {
    let y0 = init.y0().values();
    let int_y1 = init.y1().antiderivative();
    let c0 = -0.5 * init.y1().integral();
    let m = y0.len();
    let values = (0..2 * m)
        .map(|i| {
            if i < m {
                let j = m - 1 - i;
                0.5 * (-y0[j] + int_y1[j]) + c0
            } else {
                let j = i - m;
                0.5 * (y0[j] + int_y1[j]) + c0
            }
        })
        .collect();
    Ok((GridFunction::new(-1.0, 1.0, values)?, c0))
}

/// One-sided limits `(α(0⁻), α(0⁺))` by linear extrapolation from the two
/// samples nearest to `t = 0` on each side.
pub fn alpha_limits_at_zero(alpha0: &GridFunction) -> (f64, f64) {
    let v = alpha0.values();
    let m = v.len() / 2;
    if m < 2 {
        return (v[0], v[v.len() - 1]);
    }
    let left = 1.5 * v[m - 1] - 0.5 * v[m - 2];
    let right = 1.5 * v[m] - 0.5 * v[m + 1];
    (left, right)
}

/// `α′` on `(−1, 2K + 1)` as `K + 1` congruent windows of length 2.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaProfile {
    windows: Vec<GridFunction>,
    horizon: Horizon,
}

impl AlphaProfile {
    pub fn new(windows: Vec<GridFunction>, horizon: Horizon) -> Result<Self> {
        if windows.len() != horizon.windows() + 1 {
            return Err(Error::GridMismatch(format!(
                "{} α-windows for {} control windows",
                windows.len(),
                horizon.windows()
            )));
        }
        for (k, w) in windows.iter().enumerate() {
            let lo = 2.0 * k as f64 - 1.0;
            if w.lo() != lo || w.hi() != lo + 2.0 || w.len() % 2 != 0 {
                return Err(Error::GridMismatch(format!("α-window {k} misplaced")));
            }
            w.ensure_congruent(&windows[0])?;
        }
        Ok(Self { windows, horizon })
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    pub fn windows(&self) -> &[GridFunction] {
        &self.windows
    }

    pub fn window(&self, k: usize) -> &GridFunction {
        &self.windows[k]
    }

    pub fn last(&self) -> &GridFunction {
        &self.windows[self.windows.len() - 1]
    }

    /// Samples per unit time.
    pub fn m(&self) -> usize {
        self.windows[0].len() / 2
    }

    pub fn step(&self) -> f64 {
        self.windows[0].step()
    }

    /// Total number of samples over `(−1, 2K + 1)`.
    pub fn total_len(&self) -> usize {
        self.windows.len() * self.windows[0].len()
    }

    /// `α′` at global sample `g`, located at `−1 + (g + ½)h`.
    pub fn at(&self, g: usize) -> f64 {
        let mw = self.windows[0].len();
        self.windows[g / mw].values()[g % mw]
    }
}

/// Solve the boundary recursion forward from `F` under control `u`.
pub fn propagate_alpha(f: &GridFunction, u: &ControlSignal) -> Result<AlphaProfile> {
    if f.lo() != -1.0 || f.hi() != 1.0 {
        return Err(Error::GridMismatch("F must live on (−1, 1)".into()));
    }
    f.ensure_congruent(u.window(0))?;
    let mut windows = Vec::with_capacity(u.horizon().windows() + 1);
    windows.push(f.clone());
    for (k, uk) in u.windows().iter().enumerate() {
        let prev = windows[k].values();
        let next = prev.iter().zip(uk.values()).map(|(&a, &c)| -a + c).collect();
        let lo = 2.0 * k as f64 + 1.0;
        windows.push(GridFunction::new(lo, lo + 2.0, next)?);
    }
    AlphaProfile::new(windows, u.horizon())
}

/// Closed loop under the velocity feedback `∂ₓy(t,1) = κ ∂ₜy(t,1)`.
///
/// At `x = 1` the feedback reads `α′(s+2) + α′(s) = κ (α′(s+2) − α′(s))`, which
/// is solved for `α′(s+2)` window by window.
pub fn propagate_feedback(f: &GridFunction, gain: f64, horizon: Horizon) -> Result<AlphaProfile> {
    if (gain - 1.0).abs() < f64::EPSILON {
        return Err(Error::Singular("feedback gain κ = 1 leaves α′(t + 1) undetermined".into()));
    }
    let mut windows = Vec::with_capacity(horizon.windows() + 1);
    windows.push(f.clone());
    for k in 0..horizon.windows() {
        let lo = 2.0 * k as f64 + 1.0;
        let next = windows[k]
            .values()
            .iter()
            .map(|&a| (1.0 + gain) * a / (gain - 1.0))
            .collect();
        windows.push(GridFunction::new(lo, lo + 2.0, next)?);
    }
    AlphaProfile::new(windows, horizon)
}

/// `∂ₓy(t, 1) = α′(t + 1) + α′(t − 1)` on the control grid.
pub fn boundary_trace(alpha: &AlphaProfile) -> Result<ControlSignal> {
    let windows = alpha
        .windows()
        .windows(2)
        .enumerate()
        .map(|(k, pair)| {
            let vals = pair[0].values().iter().zip(pair[1].values()).map(|(a, b)| a + b).collect();
            GridFunction::new(2.0 * k as f64, 2.0 * k as f64 + 2.0, vals)
        })
        .collect::<Result<Vec<_>>>()?;
    ControlSignal::new(windows, alpha.horizon())
}

/// `∂ₓy(t, 0) = 2α′(t)` on the control grid of `(0, T)`.
pub fn observation_trace(alpha: &AlphaProfile) -> Result<ControlSignal> {
    let mw = alpha.window(0).len();
    let m = mw / 2;
    let windows = (0..alpha.horizon().windows())
        .map(|k| {
            let vals = (0..mw).map(|i| 2.0 * alpha.at(k * mw + i + m)).collect();
            GridFunction::new(2.0 * k as f64, 2.0 * k as f64 + 2.0, vals)
        })
        .collect::<Result<Vec<_>>>()?;
    ControlSignal::new(windows, alpha.horizon())
}
