use crate::error::{Error, Result};

/// Time horizon measured in windows of length 2.
///
/// A finite horizon `T = 2n` carries the terminal constraint; a truncated
/// horizon stands in for `T = ∞` and simply stops after `windows` windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Horizon {
    Finite { n: usize },
    Truncated { windows: usize },
}

impl Horizon {
    /// Parse `T`, which must be a positive even integer.
    pub fn finite(t: f64) -> Result<Self> {
        if !(t.is_finite() && t >= 2.0 && t.fract() == 0.0 && (t as u64).is_multiple_of(2)) {
            return Err(Error::InvalidHorizon(t));
        }
        Ok(Horizon::Finite { n: (t / 2.0) as usize })
    }

    pub fn truncated(windows: usize) -> Result<Self> {
        if windows == 0 {
            return Err(Error::InvalidHorizon(0.0));
        }
        Ok(Horizon::Truncated { windows })
    }

    /// Number of control windows `(2k, 2k + 2)`.
    pub fn windows(&self) -> usize {
        match *self {
            Horizon::Finite { n } => n,
            Horizon::Truncated { windows } => windows,
        }
    }

    /// Final time of the (possibly truncated) horizon.
    pub fn end(&self) -> f64 {
        2.0 * self.windows() as f64
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Horizon::Finite { .. })
    }
}
