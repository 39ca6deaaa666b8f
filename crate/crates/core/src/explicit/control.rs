use serde::Serialize;

use crate::error::{Error, Result};
use crate::wavecore::{GridFunction, Horizon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlKind {
    Hum,
    Finite,
    Infinite,
}

/// Closed-form provenance of a control.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlMeta {
    pub kind: ControlKind,
    pub lambda: f64,
    pub z: f64,
    /// Decaying component `f₊` on `(0, 2)` (finite horizon only).
    pub f_plus: Option<GridFunction>,
    /// Increasing component `f₋` on `(0, 2)` (finite horizon only).
    pub f_minus: Option<GridFunction>,
    /// Set when an infinite-horizon truncation hit the window cap before the
    /// geometric tail fell below machine precision.
    pub truncation_capped: bool,
}

/// JSON form of [`ControlMeta`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaSummary {
    pub kind: ControlKind,
    pub lambda: f64,
    pub z: f64,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub horizon_t: Option<usize>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub windows_k: Option<usize>,
    pub f_plus_norm: Option<f64>,
    pub f_minus_norm: Option<f64>,
    pub truncation_capped: bool,
}

/// Boundary control on `(0, T)`, stored as windows `(2k, 2k + 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSignal {
    windows: Vec<GridFunction>,
    horizon: Horizon,
    meta: Option<ControlMeta>,
}

impl ControlSignal {
    pub fn new(windows: Vec<GridFunction>, horizon: Horizon) -> Result<Self> {
        if windows.len() != horizon.windows() {
            return Err(Error::GridMismatch(format!(
                "{} windows for a horizon of {}",
                windows.len(),
                horizon.windows()
            )));
        }
        for (k, w) in windows.iter().enumerate() {
            let lo = 2.0 * k as f64;
            if w.lo() != lo || w.hi() != lo + 2.0 {
                return Err(Error::GridMismatch(format!(
                    "control window {k} on ({}, {}), expected ({lo}, {})",
                    w.lo(),
                    w.hi(),
                    lo + 2.0
                )));
            }
            w.ensure_congruent(&windows[0])?;
        }
        Ok(Self { windows, horizon, meta: None })
    }

    /// Window `k` is `gen(k)` relabelled onto `(2k, 2k + 2)`.
    pub fn from_base(
        base: &GridFunction,
        horizon: Horizon,
        gen: impl Fn(usize) -> Result<GridFunction>,
    ) -> Result<Self> {
        let windows = (0..horizon.windows())
            .map(|k| gen(k)?.relabel(2.0 * k as f64))
            .collect::<Result<Vec<_>>>()?;
        if let Some(w) = windows.first() {
            w.ensure_congruent(base)?;
        }
        Self::new(windows, horizon)
    }

    pub fn zeros(horizon: Horizon, m: usize) -> Result<Self> {
        let windows = (0..horizon.windows())
            .map(|k| GridFunction::zeros(2.0 * k as f64, 2.0 * k as f64 + 2.0, 2 * m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(windows, horizon)
    }

    pub fn with_meta(mut self, meta: ControlMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    pub fn meta(&self) -> Option<&ControlMeta> {
        self.meta.as_ref()
    }

    pub fn windows(&self) -> &[GridFunction] {
        &self.windows
    }

    pub fn window(&self, k: usize) -> &GridFunction {
        &self.windows[k]
    }

    /// Samples per window.
    pub fn window_len(&self) -> usize {
        self.windows[0].len()
    }

    pub fn step(&self) -> f64 {
        self.windows[0].step()
    }

    /// `(t, u(t))` for every sample, in time order.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.windows
            .iter()
            .flat_map(|w| w.points().zip(w.values().iter().copied()))
    }

    pub fn max_abs(&self) -> f64 {
        self.windows.iter().fold(0.0, |m, w| m.max(w.max_abs()))
    }

    /// L² norm over `(0, T)`.
    pub fn norm(&self) -> f64 {
        self.windows.iter().map(GridFunction::norm_sq).sum::<f64>().sqrt()
    }

    /// Pointwise combination of two controls on the same horizon and grid.
    /// The result carries no metadata.
    pub fn zip_with(&self, other: &ControlSignal, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.horizon != other.horizon {
            return Err(Error::GridMismatch(format!(
                "horizons {:?} and {:?}",
                self.horizon, other.horizon
            )));
        }
        let windows = self
            .windows
            .iter()
            .zip(&other.windows)
            .map(|(a, b)| a.zip_with(b, &f))
            .collect::<Result<Vec<_>>>()?;
        Self::new(windows, self.horizon)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let windows = self.windows.iter().map(|w| w.map(&f)).collect::<Result<Vec<_>>>()?;
        Self::new(windows, self.horizon)
    }

    /// `u + c`, e.g. the physical boundary value `σ + u` after a steady-state shift.
    pub fn offset(&self, c: f64) -> Result<Self> {
        self.map(|v| v + c)
    }

    pub fn meta_summary(&self) -> Option<MetaSummary> {
        let meta = self.meta.as_ref()?;
        let (horizon_t, windows_k) = match self.horizon {
            Horizon::Finite { n } => (Some(2 * n), None),
            Horizon::Truncated { windows } => (None, Some(windows)),
        };
        Some(MetaSummary {
            kind: meta.kind,
            lambda: meta.lambda,
            z: meta.z,
            horizon_t,
            windows_k,
            f_plus_norm: meta.f_plus.as_ref().map(GridFunction::norm),
            f_minus_norm: meta.f_minus.as_ref().map(GridFunction::norm),
            truncation_capped: meta.truncation_capped,
        })
    }
}
