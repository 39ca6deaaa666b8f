use std::f64::consts::PI;

use super::grid::GridFunction;
use crate::error::{Error, Result};

/// Initial position, its derivative and initial velocity on `(0, 1)`.
///
/// All three grids share the same `m` midpoints. The left boundary value of
/// `y0`, extrapolated from the first sample with slope `dy0`, must vanish up to
/// `10 h max|dy0|`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    y0: GridFunction,
    dy0: GridFunction,
    y1: GridFunction,
}

impl InitialData {
    /// Build from samples. When `dy0` is `None` it is obtained from `y0` by
    /// central differences, with second-order one-sided stencils at the ends.
    pub fn new(y0: GridFunction, y1: GridFunction, dy0: Option<GridFunction>) -> Result<Self> {
        check_unit(&y0, "y0")?;
        check_unit(&y1, "y1")?;
        y0.ensure_congruent(&y1)?;
        let dy0 = match dy0 {
            Some(d) => {
                check_unit(&d, "dy0")?;
                d.ensure_congruent(&y1)?;
                d
            }
            None => finite_difference(&y0)?,
        };

        let h = y0.step();
        let left = y0.values()[0] - 0.5 * h * dy0.values()[0];
        let bound = 10.0 * h * dy0.max_abs() + 8.0 * f64::EPSILON * y0.max_abs();
        if left.abs() > bound {
            return Err(Error::BoundaryValue { value: left, bound });
        }
        Ok(Self { y0, dy0, y1 })
    }

    /// Sample analytic data at the midpoints of `m` cells.
    pub fn from_fns(
        m: usize,
        y0: impl Fn(f64) -> f64,
        dy0: impl Fn(f64) -> f64,
        y1: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        Self::new(
            GridFunction::from_fn(0.0, 1.0, m, y0)?,
            GridFunction::from_fn(0.0, 1.0, m, y1)?,
            Some(GridFunction::from_fn(0.0, 1.0, m, dy0)?),
        )
    }

    /// `y0 = 4 sin(πx/2)`, `y1 = 0`.
    pub fn sine(m: usize) -> Result<Self> {
        Self::from_fns(
            m,
            |x| 4.0 * (PI * x / 2.0).sin(),
            |x| 2.0 * PI * (PI * x / 2.0).cos(),
            |_| 0.0,
        )
    }

    /// The steady state `y0 = σx`, `y1 = 0`.
    pub fn linear(m: usize, sigma: f64) -> Result<Self> {
        Self::from_fns(m, |x| sigma * x, |_| sigma, |_| 0.0)
    }

    pub fn zero(m: usize) -> Result<Self> {
        Self::from_fns(m, |_| 0.0, |_| 0.0, |_| 0.0)
    }

    pub fn y0(&self) -> &GridFunction {
        &self.y0
    }

    pub fn dy0(&self) -> &GridFunction {
        &self.dy0
    }

    pub fn y1(&self) -> &GridFunction {
        &self.y1
    }

    /// Samples per unit length.
    pub fn m(&self) -> usize {
        self.y0.len()
    }

    pub fn step(&self) -> f64 {
        self.y0.step()
    }

    /// `∫₀¹ y0′² + y1²`, the initial energy.
    pub fn energy(&self) -> f64 {
        self.dy0.norm_sq() + self.y1.norm_sq()
    }
}

fn check_unit(g: &GridFunction, name: &str) -> Result<()> {
    if g.lo() != 0.0 || g.hi() != 1.0 {
        return Err(Error::InvalidGrid(format!(
            "{name} must live on (0, 1), got ({}, {})",
            g.lo(),
            g.hi()
        )));
    }
    Ok(())
}

fn finite_difference(y0: &GridFunction) -> Result<GridFunction> {
    let v = y0.values();
    let m = v.len();
    let h = y0.step();
    let d = match m {
        1 => vec![v[0] / (0.5 * h)],
        2 => {
            let s = (v[1] - v[0]) / h;
            vec![s, s]
        }
        _ => (0..m)
            .map(|j| {
                if j == 0 {
                    (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
                } else if j == m - 1 {
                    (3.0 * v[m - 1] - 4.0 * v[m - 2] + v[m - 3]) / (2.0 * h)
                } else {
                    (v[j + 1] - v[j - 1]) / (2.0 * h)
                }
            })
            .collect(),
    };
    GridFunction::new(0.0, 1.0, d)
}
