use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Which half of the base window a sample class sits in.
///
/// Class `r` of `2m` has `α′` samples at `−1 + (r + ½)h + 2k`. For `r < m` these
/// fall in `(2k − 1, 2k)` and are observed at `x = 0` for `k = 1..n`; for
/// `r ≥ m` they fall in `(2k, 2k + 1)` and are observed for `k = 0..n − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassFamily {
    Early,
    Late,
}

impl ClassFamily {
    pub fn of(r: usize, m: usize) -> Self {
        if r < m {
            ClassFamily::Early
        } else {
            ClassFamily::Late
        }
    }
}

/// One characteristic class: minimize
/// `Σ_tracked 4(1 − λ)a_k² + Σ_{k<n} λ(a_k + a_{k+1})²` over `a_1..a_n`
/// with `a_0` fixed, written as `½aᵀHa + gᵀa + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicClassQP {
    pub a0: f64,
    pub n: usize,
    pub lambda: f64,
    pub family: ClassFamily,
    pub terminal: bool,
    pub h: DMatrix<f64>,
    pub g: DVector<f64>,
    pub constant: f64,
}

impl CharacteristicClassQP {
    /// Whether `a_k` carries a tracking term.
    fn tracked(family: ClassFamily, terminal: bool, n: usize, k: usize) -> bool {
        match (terminal, family) {
            // Without a terminal time the tail is truncated after window n.
            (false, _) => k >= 1,
            (true, ClassFamily::Early) => k >= 1,
            (true, ClassFamily::Late) => k < n,
        }
    }

    /// Objective value at the full sequence `a_0..a_n`.
    pub fn objective(&self, a: &[f64]) -> f64 {
        let track = 4.0 * (1.0 - self.lambda);
        let tracking: f64 = a
            .iter()
            .enumerate()
            .filter(|(k, _)| Self::tracked(self.family, self.terminal, self.n, *k))
            .map(|(_, v)| track * v * v)
            .sum();
        let control: f64 = a.windows(2).map(|p| self.lambda * (p[0] + p[1]).powi(2)).sum();
        tracking + control
    }

    /// Objective through the quadratic form, for `x = a_1..a_n`.
    pub fn quadratic_form(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.h * x)) + self.g.dot(x) + self.constant
    }

    /// The KKT matrix `[[H, e_n], [e_nᵀ, 0]]`, or `H` without a terminal constraint.
    pub fn kkt_matrix(&self) -> DMatrix<f64> {
        if !self.terminal {
            return self.h.clone();
        }
        let n = self.n;
        let mut k = DMatrix::zeros(n + 1, n + 1);
        k.view_mut((0, 0), (n, n)).copy_from(&self.h);
        k[(n - 1, n)] = 1.0;
        k[(n, n - 1)] = 1.0;
        k
    }

    pub fn kkt_rhs(&self) -> DVector<f64> {
        let mut rhs = DVector::zeros(if self.terminal { self.n + 1 } else { self.n });
        rhs.rows_mut(0, self.n).copy_from(&(-&self.g));
        rhs
    }
}

pub fn assemble_class_qp(
    a0: f64,
    lambda: f64,
    n: usize,
    terminal: bool,
    family: ClassFamily,
) -> Result<CharacteristicClassQP> {
    if n == 0 {
        return Err(Error::TooShort("a class QP needs at least one window".into()));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidLambda(lambda));
    }
    let track = 4.0 * (1.0 - lambda);
    let mut h = DMatrix::zeros(n, n);
    for k in 1..=n {
        let i = k - 1;
        let tracked = if CharacteristicClassQP::tracked(family, terminal, n, k) { track } else { 0.0 };
        // a_k appears in the control terms of windows k − 1 and k (the latter only for k < n).
        let uses = if k < n { 2.0 } else { 1.0 };
        h[(i, i)] = 2.0 * (tracked + lambda * uses);
        if k < n {
            h[(i, i + 1)] = 2.0 * lambda;
            h[(i + 1, i)] = 2.0 * lambda;
        }
    }
    let mut g = DVector::zeros(n);
    g[0] = 2.0 * lambda * a0;
    let tracked0 = if CharacteristicClassQP::tracked(family, terminal, n, 0) { track } else { 0.0 };
    let constant = (tracked0 + lambda) * a0 * a0;
    Ok(CharacteristicClassQP { a0, n, lambda, family, terminal, h, g, constant })
}

/// Solution of one class QP.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSolution {
    /// `a_0..a_n`.
    pub a: Vec<f64>,
    /// Terminal multiplier, if constrained.
    pub multiplier: Option<f64>,
    /// `‖Ha + g + ν e_n‖∞`, relative to `max(|a_0|, ‖g‖∞)`.
    pub stationarity: f64,
}

/// Dense LU with partial pivoting on the KKT system.
pub fn solve_kkt(qp: &CharacteristicClassQP) -> Result<ClassSolution> {
    let k = qp.kkt_matrix();
    let rhs = qp.kkt_rhs();
    let sol = k
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular(format!("class KKT system (n = {}, λ = {}) is singular", qp.n, qp.lambda)))?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("class KKT solution".into()));
    }
    let x = sol.rows(0, qp.n).into_owned();
    let multiplier = qp.terminal.then(|| sol[qp.n]);
    let mut grad = &qp.h * &x + &qp.g;
    if let Some(nu) = multiplier {
        grad[qp.n - 1] += nu;
    }
    let scale = qp.a0.abs().max(qp.g.amax());
    let stationarity = if scale > 0.0 { grad.amax() / scale } else { grad.amax() };
    let mut a = Vec::with_capacity(qp.n + 1);
    a.push(qp.a0);
    a.extend(x.iter());
    if qp.terminal {
        // The constraint row is e_nᵀa = 0; pin it against rounding in the solve.
        a[qp.n] = 0.0;
    }
    Ok(ClassSolution { a, multiplier, stationarity })
}

/// `(lower, upper)` bandwidth: the largest `i − j` and `j − i` over nonzeros.
pub fn bandwidth(mat: &DMatrix<f64>) -> (usize, usize) {
    let mut lower = 0;
    let mut upper = 0;
    for i in 0..mat.nrows() {
        for j in 0..mat.ncols() {
            if mat[(i, j)] != 0.0 {
                if i > j {
                    lower = lower.max(i - j);
                } else {
                    upper = upper.max(j - i);
                }
            }
        }
    }
    (lower, upper)
}

/// Bandwidths of the KKT matrix and of its pivoted LU factors `L`, `U`.
pub fn kkt_bandwidths(qp: &CharacteristicClassQP) -> [(usize, usize); 3] {
    let k = qp.kkt_matrix();
    let lu = k.clone().lu();
    [bandwidth(&k), bandwidth(&lu.l()), bandwidth(&lu.u())]
}
