use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Terminal,
    EulerLagrange,
    Decay,
    Turnpike,
    Similarity,
    Cost,
    Oracle,
    Energy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Detail {
    pub label: String,
    pub value: f64,
}

/// Outcome of one certificate; `pass` holds exactly when `residual ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub kind: CertificateKind,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub details: Vec<Detail>,
}

impl CertificateReport {
    pub fn new(kind: CertificateKind, residual: f64, tolerance: f64) -> Self {
        Self {
            kind,
            // NaN residuals fail.
            pass: residual <= tolerance,
            residual,
            tolerance,
            details: Vec::new(),
        }
    }

    pub fn with(mut self, label: impl Into<String>, value: f64) -> Self {
        self.push(label, value);
        self
    }

    pub fn push(&mut self, label: impl Into<String>, value: f64) {
        self.details.push(Detail { label: label.into(), value });
    }

    pub fn detail(&self, label: &str) -> Option<f64> {
        self.details.iter().find(|d| d.label == label).map(|d| d.value)
    }
}

/// Tolerances for exact grid identities and for quadrature-based integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub exact: f64,
    pub quad: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { exact: 1e-10, quad: 1e-5 }
    }
}

/// `num / scale`, or `num` itself when the scale vanishes.
pub(crate) fn relative(num: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        num / scale
    } else {
        num
    }
}
