use crate::error::{Error, Result};

/// Real function sampled at the midpoints of `m` equal cells of `(lo, hi)`.
///
/// Sample `j` sits at `lo + (j + 1/2) h` with `h = (hi - lo) / m`. Midpoints
/// never coincide with the integer times where the boundary-control data may
/// jump, and shifting by a multiple of the cell width maps samples to samples.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    lo: f64,
    hi: f64,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(lo: f64, hi: f64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidGrid("at least one sample is required".into()));
        }
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::InvalidGrid(format!("interval ({lo}, {hi}) is empty")));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("sample {j} of grid on ({lo}, {hi})")));
        }
        Ok(Self { lo, hi, values })
    }

    /// Sample `f` at the midpoints.
    pub fn from_fn(lo: f64, hi: f64, m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGrid("at least one sample is required".into()));
        }
        let h = (hi - lo) / m as f64;
        let values = (0..m).map(|j| f(lo + (j as f64 + 0.5) * h)).collect();
        Self::new(lo, hi, values)
    }

    pub fn zeros(lo: f64, hi: f64, m: usize) -> Result<Self> {
        Self::new(lo, hi, vec![0.0; m])
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.values.len() as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.lo + (j as f64 + 0.5) * self.step()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |j| self.point(j))
    }

    /// Equal interval length and equal sample count.
    pub fn is_congruent(&self, other: &GridFunction) -> bool {
        let (a, b) = (self.hi - self.lo, other.hi - other.lo);
        self.len() == other.len() && (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
    }

    pub fn ensure_congruent(&self, other: &GridFunction) -> Result<()> {
        if self.is_congruent(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "({}, {}) with {} samples vs ({}, {}) with {} samples",
                self.lo,
                self.hi,
                self.len(),
                other.lo,
                other.hi,
                other.len()
            )))
        }
    }

    /// Pointwise combination; the result lives on `self`'s interval.
    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.ensure_congruent(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Self::new(self.lo, self.hi, values)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.lo, self.hi, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    /// Same samples relabelled onto `(lo, lo + length)`.
    pub fn relabel(&self, lo: f64) -> Result<Self> {
        Self::new(lo, lo + (self.hi - self.lo), self.values.clone())
    }

    /// Midpoint-rule integral.
    pub fn integral(&self) -> f64 {
        self.step() * self.values.iter().sum::<f64>()
    }

    pub fn norm_sq(&self) -> f64 {
        self.step() * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    /// Discrete L² norm.
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Midpoint antiderivative `∫_lo^{t_j}` at every sample point.
    pub fn antiderivative(&self) -> Vec<f64> {
        let h = self.step();
        let mut acc = 0.0;
        self.values
            .iter()
            .map(|&v| {
                let at = acc + 0.5 * h * v;
                acc += h * v;
                at
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn midpoints_and_step() {
        let g = GridFunction::zeros(-1.0, 1.0, 4).unwrap();
        assert_eq!(g.step(), 0.5);
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts, vec![-0.75, -0.25, 0.25, 0.75]);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(GridFunction::new(0.0, 1.0, vec![]).is_err());
        assert!(GridFunction::new(1.0, 1.0, vec![1.0]).is_err());
        assert!(matches!(
            GridFunction::new(0.0, 1.0, vec![f64::NAN]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn incongruent_combination_is_an_error() {
        let a = GridFunction::zeros(0.0, 1.0, 4).unwrap();
        let b = GridFunction::zeros(0.0, 1.0, 5).unwrap();
        let c = GridFunction::zeros(3.0, 5.0, 4).unwrap();
        assert!(matches!(a.zip_with(&b, |x, y| x + y), Err(Error::GridMismatch(_))));
        assert!(matches!(a.zip_with(&c, |x, y| x + y), Err(Error::GridMismatch(_))));
        // Same length, different placement: congruent.
        let d = GridFunction::zeros(7.0, 8.0, 4).unwrap();
        assert!(a.zip_with(&d, |x, y| x + y).is_ok());
    }

    #[test]
    fn quadrature_of_smooth_function() {
        let g = GridFunction::from_fn(0.0, 1.0, 256, |x| x * x).unwrap();
        assert_relative_eq!(g.integral(), 1.0 / 3.0, epsilon = 1e-5);
        let anti = g.antiderivative();
        let last = g.point(255);
        assert_relative_eq!(anti[255], last.powi(3) / 3.0, epsilon = 1e-5);
    }
}
