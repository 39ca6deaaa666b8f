//! Closed-form optimal controls.
//!
//! Every control here is a window-wise multiple of the shifted datum
//! `F(t − 1)`: on window `k` the control is `c_k F(t − 1 − 2k)`, so each
//! constructor only has to produce the coefficients `c_k`.

use super::control::{ControlKind, ControlMeta, ControlSignal};
use super::weight::Weight;
use crate::error::{Error, Result};
use crate::wavecore::{build_f, GridFunction, Horizon, InitialData};

/// Geometric tails below this relative size are dropped when truncating an
/// infinite horizon.
pub const TRUNCATION_TAIL: f64 = 1e-14;

/// Upper bound on the number of windows of a truncated infinite horizon.
pub const MAX_TRUNCATION_WINDOWS: usize = 200;

/// Smallest `K ≥ 1` with `|z|^K ≤ 1e-14`, capped at 200. The flag is set when
/// the cap was hit.
pub fn truncation_windows(z: f64) -> (usize, bool) {
    let a = z.abs();
    if a == 0.0 {
        return (1, false);
    }
    if a >= 1.0 {
        return (MAX_TRUNCATION_WINDOWS, true);
    }
    let k = (TRUNCATION_TAIL.ln() / a.ln()).ceil().max(1.0) as usize;
    if k > MAX_TRUNCATION_WINDOWS {
        (MAX_TRUNCATION_WINDOWS, true)
    } else {
        (k, false)
    }
}

fn finite_n(t: f64) -> Result<(usize, Horizon)> {
    let horizon = Horizon::finite(t)?;
    Ok((horizon.windows(), horizon))
}

fn from_coefficients(f: &GridFunction, horizon: Horizon, coef: impl Fn(usize) -> f64) -> Result<ControlSignal> {
    ControlSignal::from_base(f, horizon, |k| f.scaled(coef(k)))
}

/// Minimal-norm exact control (`λ = 1`): `u(t) = F(t − 1)/n` on `(0, 2)`,
/// repeated with alternating sign.
pub fn hum_control(init: &InitialData, t: f64) -> Result<ControlSignal> {
    let (n, horizon) = finite_n(t)?;
    let f = build_f(init)?;
    let base = 1.0 / n as f64;
    let u = from_coefficients(&f, horizon, |k| if k % 2 == 0 { base } else { -base })?;
    Ok(u.with_meta(ControlMeta {
        kind: ControlKind::Hum,
        lambda: 1.0,
        z: -1.0,
        f_plus: None,
        f_minus: None,
        truncation_capped: false,
    }))
}

/// Optimal control for `λ < 1` on `(0, 2n)`: `u(t + 2k) = z^k f₊(t) + z^{−k} f₋(t)`.
///
/// With `f₋ = −(1 + z) z^{2n−1}/(1 − z^{2n}) F(t − 1)` the sum is evaluated as
/// `(1 + z)(z^k − z^{2n−1−k})/(1 − z^{2n}) F(t − 1)`, which never forms `z^{−k}`.
pub fn finite_horizon_control(init: &InitialData, w: &Weight, t: f64) -> Result<ControlSignal> {
    if w.lambda() >= 1.0 {
        return Err(Error::InvalidLambda(w.lambda()));
    }
    let (n, horizon) = finite_n(t)?;
    let f = build_f(init)?;
    let z = w.z();

    let (u, plus, minus) = if w.lambda() == 0.0 {
        // p_0 has the single root 0: all action happens in the first window.
        let u = from_coefficients(&f, horizon, |k| if k == 0 { 1.0 } else { 0.0 })?;
        (u, 1.0, 0.0)
    } else {
        let two_n = 2 * n as i32;
        let scale = (1.0 + z) / (1.0 - z.powi(two_n));
        let u = from_coefficients(&f, horizon, |k| {
            let k = k as i32;
            scale * (z.powi(k) - z.powi(two_n - 1 - k))
        })?;
        (u, scale, -scale * z.powi(two_n - 1))
    };

    let unit = |c: f64| f.relabel(0.0).and_then(|g| g.scaled(c));
    Ok(u.with_meta(ControlMeta {
        kind: ControlKind::Finite,
        lambda: w.lambda(),
        z,
        f_plus: Some(unit(plus)?),
        f_minus: Some(unit(minus)?),
        truncation_capped: false,
    }))
}

/// Infinite-horizon optimal control, truncated after `windows` windows
/// (or the automatic truncation when `None`):
/// `u(t) = (1 + z) F(t − 1)` on `(0, 2)` and `u(t + 2k) = z^k u(t)`.
pub fn infinite_horizon_control(
    init: &InitialData,
    w: &Weight,
    windows: Option<usize>,
) -> Result<ControlSignal> {
    if w.lambda() >= 1.0 {
        return Err(Error::InvalidLambda(w.lambda()));
    }
    let z = w.z();
    let (k_auto, capped) = truncation_windows(z);
    let horizon = Horizon::truncated(windows.unwrap_or(k_auto))?;
    let capped = windows.is_none() && capped;
    let f = build_f(init)?;

    let u = if w.lambda() == 0.0 {
        from_coefficients(&f, horizon, |k| if k == 0 { 1.0 } else { 0.0 })?
    } else {
        // Each window is z times the previous one, sample by sample.
        let mut current = f.scaled(1.0 + z)?;
        let mut win = Vec::with_capacity(horizon.windows());
        for k in 0..horizon.windows() {
            if k > 0 {
                current = current.scaled(z)?;
            }
            win.push(current.relabel(2.0 * k as f64)?);
        }
        ControlSignal::new(win, horizon)?
    };

    Ok(u.with_meta(ControlMeta {
        kind: ControlKind::Infinite,
        lambda: w.lambda(),
        z,
        f_plus: None,
        f_minus: None,
        truncation_capped: capped,
    }))
}

/// Route to the right closed form: `λ = 1` on a finite horizon is the HUM
/// control; a truncated horizon means `T = ∞`.
pub fn optimal_control(init: &InitialData, w: &Weight, horizon: Horizon) -> Result<ControlSignal> {
    match horizon {
        Horizon::Finite { n } if w.is_hum() => hum_control(init, 2.0 * n as f64),
        Horizon::Finite { n } => finite_horizon_control(init, w, 2.0 * n as f64),
        Horizon::Truncated { windows } => infinite_horizon_control(init, w, Some(windows)),
    }
}
