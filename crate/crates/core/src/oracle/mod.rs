//! Independent reconstruction of the finite-horizon optimum.
//!
//! With unit wave speed and midpoint sampling, the samples of `α′` split into
//! `2m` classes `{s + 2k}` that the dynamics never mix: `a_{k+1} = −a_k + u_k`
//! within each class, and the cost is a sum over classes. Each class is a small
//! equality-constrained quadratic program, solved here by a dense KKT
//! factorization without reference to the closed form.

mod qp;

use std::path::Path;

pub use qp::{
    assemble_class_qp, bandwidth, kkt_bandwidths, solve_kkt, CharacteristicClassQP, ClassFamily,
    ClassSolution,
};

use crate::certify::{CertificateKind, CertificateReport};
use crate::error::{Error, Result};
use crate::explicit::{optimal_control, weight_from_lambda, ControlSignal};
use crate::wavecore::{build_f, GridFunction, Horizon, InitialData};

#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub control: ControlSignal,
    /// `h Σ_r` class objectives at the optimum.
    pub cost: f64,
    pub max_stationarity: f64,
}

pub fn oracle_solution(init: &InitialData, lambda: f64, t: f64) -> Result<OracleSolution> {
    let n = Horizon::finite(t)?.windows();
    let f = build_f(init)?;
    let m = init.m();
    let mw = f.len();
    let mut u = vec![vec![0.0; mw]; n];
    let mut total = 0.0;
    let mut max_stat: f64 = 0.0;
    for (r, &a0) in f.values().iter().enumerate() {
        let qp = assemble_class_qp(a0, lambda, n, true, ClassFamily::of(r, m))?;
        let sol = solve_kkt(&qp)?;
        total += qp.objective(&sol.a);
        max_stat = max_stat.max(sol.stationarity);
        for (k, window) in u.iter_mut().enumerate() {
            window[r] = sol.a[k] + sol.a[k + 1];
        }
    }
    let windows = u
        .into_iter()
        .enumerate()
        .map(|(k, vals)| GridFunction::new(2.0 * k as f64, 2.0 * k as f64 + 2.0, vals))
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleSolution {
        control: ControlSignal::new(windows, Horizon::Finite { n })?,
        cost: init.step() * total,
        max_stationarity: max_stat,
    })
}

pub fn oracle_optimal_control(init: &InitialData, lambda: f64, t: f64) -> Result<ControlSignal> {
    Ok(oracle_solution(init, lambda, t)?.control)
}

/// Free-endpoint class QP truncated after `K` windows; returns `a_1..a_K`.
pub fn oracle_infinite_horizon(a0: f64, lambda: f64, windows: usize) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&lambda) || lambda == 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    let qp = assemble_class_qp(a0, lambda, windows, false, ClassFamily::Early)?;
    let mut a = solve_kkt(&qp)?.a;
    a.remove(0);
    Ok(a)
}

/// Compare the oracle with the closed form: the residual is the largest
/// samplewise deviation relative to `‖u‖`; the relative cost gap is reported.
pub fn oracle_report(init: &InitialData, lambda: f64, t: f64, tol: f64) -> Result<CertificateReport> {
    let w = weight_from_lambda(lambda)?;
    let closed = optimal_control(init, &w, Horizon::finite(t)?)?;
    let oracle = oracle_solution(init, lambda, t)?;
    let f = build_f(init)?;
    let alpha = crate::wavecore::propagate_alpha(&f, &closed)?;
    let closed_cost = crate::certify::cost(&alpha, &closed, lambda)?;

    let dev = oracle
        .control
        .zip_with(&closed, |a, b| a - b)?
        .max_abs();
    let scale = closed.norm();
    let residual = if scale > 0.0 { dev / scale } else { dev };
    let cost_gap = if closed_cost > 0.0 {
        (oracle.cost - closed_cost).abs() / closed_cost
    } else {
        (oracle.cost - closed_cost).abs()
    };
    Ok(CertificateReport::new(CertificateKind::Oracle, residual, tol)
        .with("max_abs_deviation", dev)
        .with("closed_form_cost", closed_cost)
        .with("oracle_cost", oracle.cost)
        .with("relative_cost_gap", cost_gap)
        .with("max_stationarity", oracle.max_stationarity))
}

/// Write the KKT system of one class as CSV: columns `c0..c{N−1}` and `rhs`.
pub fn dump_class_kkt(qp: &CharacteristicClassQP, path: &Path) -> Result<()> {
    let k = qp.kkt_matrix();
    let rhs = qp.kkt_rhs();
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (0..k.ncols()).map(|j| format!("c{j}")).collect();
    header.push("rhs".into());
    w.write_record(&header)?;
    for i in 0..k.nrows() {
        let mut row: Vec<String> = (0..k.ncols()).map(|j| format!("{:.16e}", k[(i, j)])).collect();
        row.push(format!("{:.16e}", rhs[i]));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Assemble the QP of class `r` for the given data, for inspection.
pub fn class_qp(init: &InitialData, lambda: f64, t: f64, r: usize) -> Result<CharacteristicClassQP> {
    let n = Horizon::finite(t)?.windows();
    let f = build_f(init)?;
    let a0 = *f.values().get(r).ok_or_else(|| {
        Error::InvalidGrid(format!("class {r} out of range, there are {}", f.len()))
    })?;
    assemble_class_qp(a0, lambda, n, true, ClassFamily::of(r, init.m()))
}
