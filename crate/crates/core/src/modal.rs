//! Mode-by-mode optimality system for a skew-adjoint generator `A` and an input
//! operator with `BB*` diagonal in the same basis.
//!
//! On a mode with `Aφ = aφ`, `BB*φ = bφ` the adjoint state is
//! `h(t) = u e^{δ⁻t} + v e^{δ⁺t}` where `δ±` are the roots of
//! `z² − 2az − l`, `l = |a|² + ((1 − λ)/λ) b`, and the boundary conditions are
//! `h′(0) = y0 + a h(0)`, `h′(T) = a h(T)`. The state is `y = h′ − a h`.
//!
//! `v` is stored scaled as `V = v e^{δ⁺T}` so that long horizons do not overflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::certify::{CertificateKind, CertificateReport};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSpec {
    pub a: Complex64,
    pub b: f64,
    pub lambda: f64,
    pub y0: Complex64,
}

impl ModeSpec {
    pub fn new(a_im: f64, b: f64, lambda: f64, y0: Complex64) -> Result<Self> {
        let mode = Self { a: Complex64::new(0.0, a_im), b, lambda, y0 };
        mode.validate()?;
        Ok(mode)
    }

    fn validate(&self) -> Result<()> {
        if self.a.re != 0.0 {
            return Err(Error::InvalidMode(format!("eigenvalue {} is not imaginary", self.a)));
        }
        if !(self.b.is_finite() && self.b > 0.0) {
            return Err(Error::InvalidMode(format!("b = {} must be positive", self.b)));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidLambda(self.lambda));
        }
        if !(self.a.im.is_finite() && self.y0.re.is_finite() && self.y0.im.is_finite()) {
            return Err(Error::NonFinite("mode coefficients".into()));
        }
        Ok(())
    }

    /// `l = |a|² + ((1 − λ)/λ) b`.
    pub fn l(&self) -> f64 {
        self.a.norm_sqr() + (1.0 - self.lambda) / self.lambda * self.b
    }

    /// `((1 − λ)/λ) √b`, the factor from the adjoint to the control.
    pub fn control_gain(&self) -> f64 {
        (1.0 - self.lambda) / self.lambda * self.b.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSolution {
    pub delta_plus: Complex64,
    pub delta_minus: Complex64,
    pub u_coef: Complex64,
    /// `v`; underflows to zero on long horizons, use `v_scaled` for evaluation.
    pub v_coef: Complex64,
    pub v_scaled: Complex64,
    pub horizon: f64,
    /// Largest boundary-condition residual relative to `max(|y0|, |u|, |V|)`.
    pub bvp_residual: f64,
}

impl ModeSolution {
    pub fn adjoint(&self, t: f64) -> Complex64 {
        self.u_coef * (self.delta_minus * t).exp()
            + self.v_scaled * (-self.delta_plus * (self.horizon - t)).exp()
    }

    pub fn adjoint_derivative(&self, t: f64) -> Complex64 {
        self.u_coef * self.delta_minus * (self.delta_minus * t).exp()
            + self.v_scaled * self.delta_plus * (-self.delta_plus * (self.horizon - t)).exp()
    }

    /// `y = h′ − a h`.
    pub fn state(&self, a: Complex64, t: f64) -> Complex64 {
        self.adjoint_derivative(t) - a * self.adjoint(t)
    }
}

/// Roots of `z² − 2az − l`, returned as `(δ⁺, δ⁻)` with `Re δ⁺ > 0 > Re δ⁻`.
pub fn modal_roots(mode: &ModeSpec) -> Result<(Complex64, Complex64)> {
    mode.validate()?;
    let l = mode.l();
    if l.is_nan() || l <= 0.0 {
        return Err(Error::InvalidMode(format!("l = {l} must be positive")));
    }
    let s = (mode.a * mode.a + l).sqrt();
    let (r1, r2) = (mode.a + s, mode.a - s);
    let (plus, minus) = if r1.re >= r2.re { (r1, r2) } else { (r2, r1) };
    if !(plus.re > 0.0 && minus.re < 0.0) {
        return Err(Error::InvalidMode(format!("roots {plus}, {minus} do not split")));
    }
    Ok((plus, minus))
}

pub fn solve_mode_bvp(mode: &ModeSpec, t: f64) -> Result<ModeSolution> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidHorizon(t));
    }
    let (dp, dm) = modal_roots(mode)?;
    let a = mode.a;
    let ep = (-dp * t).exp();
    let em = (dm * t).exp();
    // [ (δ⁻ − a)        (δ⁺ − a) e^{−δ⁺T} ] [u]   [y0]
    // [ (δ⁻ − a) e^{δ⁻T} (δ⁺ − a)         ] [V] = [ 0]
    let m11 = dm - a;
    let m12 = (dp - a) * ep;
    let m21 = (dm - a) * em;
    let m22 = dp - a;
    let det = m11 * m22 - m12 * m21;
    let size = m11.norm().max(m12.norm()).max(m21.norm()).max(m22.norm());
    if det.norm() <= 1e-14 * size * size {
        return Err(Error::Singular(format!("mode BVP with a = {a}, T = {t}")));
    }
    let u = mode.y0 * m22 / det;
    let v_scaled = -mode.y0 * m21 / det;
    let r0 = (m11 * u + m12 * v_scaled - mode.y0).norm();
    let r1 = (m21 * u + m22 * v_scaled).norm();
    let scale = mode.y0.norm().max(u.norm()).max(v_scaled.norm());
    let bvp_residual = if scale > 0.0 { r0.max(r1) / scale } else { r0.max(r1) };
    Ok(ModeSolution {
        delta_plus: dp,
        delta_minus: dm,
        u_coef: u,
        v_coef: v_scaled * ep,
        v_scaled,
        horizon: t,
        bvp_residual,
    })
}

/// One row of the `‖p(t)‖` series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModalSample {
    pub t: f64,
    pub adjoint_norm: f64,
    pub bound: f64,
    pub control_norm: f64,
}

/// Tolerance on the turnpike inequality relative to the coefficient norms.
pub const MODAL_ROUNDING_TOL: f64 = 1e-12;
/// Tolerance on `y(0) = y0` and `y(T) = 0`.
pub const MODAL_STATE_TOL: f64 = 1e-9;

/// `‖p(t)‖`, its bound `e^{−ωt}‖u‖ + e^{−ω(T−t)}‖V‖` and the control norm on
/// `points` equally spaced times of `[0, T]`.
pub fn modal_series(
    modes: &[ModeSpec],
    solutions: &[ModeSolution],
    t: f64,
    omega: f64,
    points: usize,
) -> Vec<ModalSample> {
    let u_norm = solutions.iter().map(|s| s.u_coef.norm_sqr()).sum::<f64>().sqrt();
    let v_norm = solutions.iter().map(|s| s.v_scaled.norm_sqr()).sum::<f64>().sqrt();
    let last = points.max(2) - 1;
    (0..=last)
        .map(|j| {
            let tj = t * j as f64 / last as f64;
            let mut p2 = 0.0;
            let mut c2 = 0.0;
            for (mode, sol) in modes.iter().zip(solutions) {
                let h = sol.adjoint(tj).norm_sqr();
                p2 += h;
                c2 += mode.control_gain().powi(2) * h;
            }
            ModalSample {
                t: tj,
                adjoint_norm: p2.sqrt(),
                bound: (-omega * tj).exp() * u_norm + (-omega * (t - tj)).exp() * v_norm,
                control_norm: c2.sqrt(),
            }
        })
        .collect()
}

pub fn modal_turnpike_check(modes: &[ModeSpec], t: f64, omega: f64) -> Result<CertificateReport> {
    Ok(modal_turnpike_run(modes, t, omega, 1000)?.0)
}

/// The certificate together with its time series.
pub fn modal_turnpike_run(
    modes: &[ModeSpec],
    t: f64,
    omega: f64,
    points: usize,
) -> Result<(CertificateReport, Vec<ModalSample>)> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidMode(format!("ω = {omega} must be positive")));
    }
    if let Some(first) = modes.first() {
        if modes.iter().any(|m| m.lambda != first.lambda) {
            return Err(Error::InvalidMode("λ differs across modes".into()));
        }
    }
    let solutions = modes.iter().map(|m| solve_mode_bvp(m, t)).collect::<Result<Vec<_>>>()?;

    let mut flagged = 0usize;
    let mut below_floor = 0usize;
    let mut min_margin = f64::INFINITY;
    let mut bvp: f64 = 0.0;
    let mut init_err2 = 0.0;
    let mut y0_norm2 = 0.0;
    let mut term2 = 0.0;
    for (mode, sol) in modes.iter().zip(&solutions) {
        let margin = sol.delta_plus.re.min(-sol.delta_minus.re);
        min_margin = min_margin.min(margin);
        if margin < omega {
            flagged += 1;
        }
        if mode.b < omega * omega {
            below_floor += 1;
        }
        bvp = bvp.max(sol.bvp_residual);
        init_err2 += (sol.state(mode.a, 0.0) - mode.y0).norm_sqr();
        y0_norm2 += mode.y0.norm_sqr();
        term2 += sol.state(mode.a, t).norm_sqr();
    }
    let y0_norm = f64::sqrt(y0_norm2);
    let rel = |x: f64| if y0_norm > 0.0 { x / y0_norm } else { x };
    let init_err = rel(init_err2.sqrt());
    let terminal = rel(term2.sqrt());

    let series = modal_series(modes, &solutions, t, omega, points);
    let u_norm = solutions.iter().map(|s| s.u_coef.norm_sqr()).sum::<f64>().sqrt();
    let v_norm = solutions.iter().map(|s| s.v_scaled.norm_sqr()).sum::<f64>().sqrt();
    let scale = u_norm + v_norm;
    let violation = series
        .iter()
        .map(|s| s.adjoint_norm - s.bound)
        .fold(0.0, f64::max);
    let violation = if scale > 0.0 { violation / scale } else { violation };
    let mid = modal_series(modes, &solutions, t, omega, 3)[1].adjoint_norm;
    let max_control = series.iter().map(|s| s.control_norm).fold(0.0, f64::max);

    let mut report = CertificateReport::new(CertificateKind::Turnpike, violation, MODAL_ROUNDING_TOL)
        .with("modes", modes.len() as f64)
        .with("grid_points", series.len() as f64)
        .with("u_norm", u_norm)
        .with("v_scaled_norm", v_norm)
        .with("midpoint_adjoint_norm", mid)
        .with("min_root_margin", min_margin)
        .with("modes_below_omega_margin", flagged as f64)
        .with("modes_with_b_below_omega_sq", below_floor as f64)
        .with("max_bvp_residual", bvp)
        .with("initial_state_error", init_err)
        .with("terminal_state_norm", terminal)
        .with("max_control_norm", max_control);
    report.pass = report.pass && init_err <= MODAL_STATE_TOL && terminal <= MODAL_STATE_TOL;
    Ok((report, series))
}

/// JSON form of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeInput {
    pub a_im: f64,
    pub b: f64,
    pub y0_re: f64,
    #[serde(default)]
    pub y0_im: f64,
}

/// JSON mode batch: either `{lambda, T, omega, modes: [...]}` or a bare array
/// of modes with the common parameters supplied separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBatch {
    pub lambda: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    pub omega: Option<f64>,
    pub modes: Vec<ModeInput>,
}

impl ModeBatch {
    pub fn specs(&self, lambda: f64) -> Result<Vec<ModeSpec>> {
        self.modes
            .iter()
            .map(|m| ModeSpec::new(m.a_im, m.b, lambda, Complex64::new(m.y0_re, m.y0_im)))
            .collect()
    }
}
