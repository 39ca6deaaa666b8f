use super::cost::cost;
use super::report::{relative, CertificateKind, CertificateReport};
use crate::error::{Error, Result};
use crate::explicit::{
    finite_horizon_control, hum_control, infinite_horizon_control, similarity_weight, ControlSignal,
    Weight,
};
use crate::wavecore::{build_f, energy, propagate_alpha, AlphaProfile, GridFunction, Horizon, InitialData};

/// Windows whose L² norm falls below this fraction of window 0 are excluded
/// from ratio tests: there, the absolute rounding floor of the recursion
/// (about `ε‖window_0‖`) dominates the relative error.
pub const DECAY_SIGNIFICANCE: f64 = 1e-4;

/// Tolerance of the window-0 identity in [`check_similarity`].
pub const SIMILARITY_IDENTITY_TOL: f64 = 1e-12;

/// Terminal constraint `α′ = 0` on `(T − 1, T + 1)`, relative to `max|α′|`
/// over window 0.
pub fn check_terminal(alpha: &AlphaProfile, t: f64, tol: f64) -> Result<CertificateReport> {
    let n = Horizon::finite(t)?.windows();
    if alpha.horizon().windows() < n {
        return Err(Error::TooShort(format!(
            "state covers {} windows, terminal check needs {n}",
            alpha.horizon().windows()
        )));
    }
    let scale = alpha.window(0).max_abs();
    let final_max = alpha.window(n).max_abs();
    let residual = relative(final_max, scale);
    Ok(CertificateReport::new(CertificateKind::Terminal, residual, tol)
        .with("final_window_max", final_max)
        .with("window0_max", scale))
}

/// Discrete Euler–Lagrange identity `λa_{k+1} + (4 − 2λ)a_k + λa_{k−1} = 0`
/// over interior windows, samplewise, relative to `max|α′|` over window 0.
pub fn euler_lagrange_residual(alpha: &AlphaProfile, lambda: f64, tol: f64) -> Result<CertificateReport> {
    let windows = alpha.windows();
    if windows.len() < 3 {
        return Err(Error::TooShort(format!(
            "{} α-windows, the Euler–Lagrange identity needs 3",
            windows.len()
        )));
    }
    let mid = 4.0 - 2.0 * lambda;
    let worst = windows
        .windows(3)
        .flat_map(|w| {
            let (prev, cur, next) = (w[0].values(), w[1].values(), w[2].values());
            (0..cur.len()).map(move |i| (lambda * next[i] + mid * cur[i] + lambda * prev[i]).abs())
        })
        .fold(0.0, f64::max);
    let scale = alpha.window(0).max_abs();
    Ok(CertificateReport::new(CertificateKind::EulerLagrange, relative(worst, scale), tol)
        .with("interior_windows", (windows.len() - 2) as f64)
        .with("max_abs_residual", worst))
}

/// Per-window geometric decay: `‖window_k‖ / ‖window_{k−1}‖ = |z|` and
/// `E(2k) / E(0) = z^{2k}` (relative).
pub fn check_decay(alpha: &AlphaProfile, z: f64, tol: f64) -> Result<CertificateReport> {
    let norms: Vec<f64> = alpha.windows().iter().map(GridFunction::norm).collect();
    let n0 = norms[0];
    let a = z.abs();

    if n0 == 0.0 || a == 0.0 {
        // Nothing to decay, or everything vanishes after window 0.
        let tail = norms[1..].iter().fold(0.0, |m: f64, v| m.max(*v));
        return Ok(CertificateReport::new(CertificateKind::Decay, relative(tail, n0), tol)
            .with("vacuous", 1.0)
            .with("windows_checked", 0.0));
    }

    let e0 = energy(alpha, 0.0)?;
    let mut ratio_residual: f64 = 0.0;
    let mut energy_residual: f64 = 0.0;
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for k in 1..norms.len() {
        if norms[k] < DECAY_SIGNIFICANCE * n0 {
            skipped += 1;
            continue;
        }
        checked += 1;
        ratio_residual = ratio_residual.max((norms[k] / norms[k - 1] - a).abs());
        let expected = z.powi(2 * k as i32);
        let ek = energy(alpha, 2.0 * k as f64)?;
        energy_residual = energy_residual.max((ek / e0 - expected).abs() / expected);
    }
    let mut report = CertificateReport::new(
        CertificateKind::Decay,
        ratio_residual.max(energy_residual),
        tol,
    )
    .with("ratio_residual", ratio_residual)
    .with("energy_ratio_residual", energy_residual)
    .with("windows_checked", checked as f64)
    .with("windows_below_floor", skipped as f64);
    if checked == 0 {
        report.push("vacuous", 1.0);
    }
    Ok(report)
}

/// Two-sided geometric envelope for a finite-horizon optimum:
/// `‖window_k‖ ≤ C (|z|^k + |z|^{n−k}) ‖window_0‖` with `C = 1/(1 − z^{2n})`.
///
/// The product-form exponent `e^{−μ t(T−t)}` is only fitted and reported;
/// when `literal = Some((C1, μ))` its validity on the window grid is reported
/// as well.
pub fn check_turnpike(
    alpha: &AlphaProfile,
    w: &Weight,
    t: f64,
    literal: Option<(f64, f64)>,
    tol: f64,
) -> Result<CertificateReport> {
    if w.lambda() >= 1.0 {
        return Err(Error::InvalidLambda(w.lambda()));
    }
    let n = Horizon::finite(t)?.windows();
    if alpha.horizon() != (Horizon::Finite { n }) {
        return Err(Error::GridMismatch(format!(
            "state horizon {:?} does not match T = {t}",
            alpha.horizon()
        )));
    }
    let a = w.z().abs();
    let c = 1.0 / (1.0 - a.powi(2 * n as i32));
    let n0 = alpha.window(0).norm();
    let mut violation: f64 = 0.0;
    let mut report_details = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let ratio = relative(alpha.window(k).norm(), n0);
        let envelope = c * (a.powi(k as i32) + a.powi((n - k) as i32));
        violation = violation.max(ratio - envelope);
        report_details.push((format!("window_{k}_ratio"), ratio));
    }

    let mut report = CertificateReport::new(CertificateKind::Turnpike, violation.max(0.0), tol)
        .with("envelope_constant", c);
    for (label, value) in report_details {
        report.push(label, value);
    }

    // Fitted rates: per-window geometric rate, and the largest μ with
    // E(t) ≤ e^{−μ t (T − t)} E(0) at the interior window starts.
    let e0 = energy(alpha, 0.0)?;
    report.push("mu_geometric", if a > 0.0 { -a.ln() } else { f64::INFINITY });
    if e0 > 0.0 && n >= 2 {
        let mut mu_fit = f64::INFINITY;
        for k in 1..n {
            let tk = 2.0 * k as f64;
            let ek = energy(alpha, tk)?;
            let mu = if ek > 0.0 { -(ek / e0).ln() / (tk * (t - tk)) } else { f64::INFINITY };
            mu_fit = mu_fit.min(mu);
        }
        report.push("mu_product_fit", mu_fit);
    }
    if let Some((c1, mu)) = literal {
        let mut worst: f64 = 0.0;
        for k in 0..=n {
            let tk = 2.0 * k as f64;
            let bound = c1 * (-mu * tk * (t - tk)).exp() * e0;
            worst = worst.max(energy(alpha, tk)? - bound);
        }
        report.push("literal_c1", c1);
        report.push("literal_mu", mu);
        report.push("literal_max_violation", worst.max(0.0));
        report.push("literal_holds", if worst <= 0.0 { 1.0 } else { 0.0 });
    }
    Ok(report)
}

/// Similarity of the minimal-norm exact control `u₁ᵀ` and the infinite-horizon
/// optimum `u_λ^∞` under the similarity weight `z_λ = 2/T − 1`:
///
/// * window 0: `u₁ᵀ = u_λ^∞` samplewise (reported as `window0_identity`,
///   expected below [`SIMILARITY_IDENTITY_TOL`]);
/// * window `k`: `‖u₁ᵀ − u_λ^∞‖ = |1 − |z|^k| ‖u_λ^∞‖_{L²(0,2)}`;
/// * the bound `|1 − |z|^k| (2/T)(‖y0′‖ + ‖y1‖)` dominates the distance.
///
/// The same quantities with the finite-horizon optimum `u_λᵀ` in place of `u₁ᵀ`
/// are reported without being asserted.
pub fn check_similarity(init: &InitialData, t: f64, tol: f64) -> Result<CertificateReport> {
    let w = similarity_weight(t)?;
    let n = Horizon::finite(t)?.windows();
    let a = w.z().abs();
    let hum = hum_control(init, t)?;
    let inf = infinite_horizon_control(init, &w, Some(n))?;
    let fin = finite_horizon_control(init, &w, t)?;

    let base_max = inf.window(0).max_abs();
    let base_norm = inf.window(0).norm();
    let data_norm = init.dy0().norm() + init.y1().norm();

    let identity0 = hum
        .window(0)
        .values()
        .iter()
        .zip(inf.window(0).values())
        .fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()));
    let identity0 = relative(identity0, base_max);

    let mut identity_residual: f64 = 0.0;
    let mut bound_violation: f64 = 0.0;
    let mut fin_identity: f64 = 0.0;
    let mut fin_bound_violation: f64 = 0.0;
    let mut rows = Vec::new();
    for k in 0..n {
        let factor = (1.0 - a.powi(k as i32)).abs();
        let expected = factor * base_norm;
        let bound = factor * (2.0 / t) * data_norm;
        let dist = window_distance(hum.window(k), inf.window(k))?;
        let dist_fin = window_distance(fin.window(k), inf.window(k))?;
        identity_residual = identity_residual.max(relative((dist - expected).abs(), base_norm));
        bound_violation = bound_violation.max(relative(dist - bound, base_norm));
        fin_identity = fin_identity.max(relative((dist_fin - expected).abs(), base_norm));
        fin_bound_violation = fin_bound_violation.max(relative(dist_fin - bound, base_norm));
        rows.push((k, dist, expected, bound, dist_fin));
    }

    let residual = identity0.max(identity_residual).max(bound_violation.max(0.0));
    let mut report = CertificateReport::new(CertificateKind::Similarity, residual, tol)
        .with("lambda", w.lambda())
        .with("z", w.z())
        .with("window0_identity", identity0)
        .with("window_identity_residual", identity_residual)
        .with("bound_violation", bound_violation.max(0.0))
        .with("finite_reading_identity_residual", fin_identity)
        .with("finite_reading_bound_holds", if fin_bound_violation <= 0.0 { 1.0 } else { 0.0 });
    for (k, dist, expected, bound, dist_fin) in rows {
        report.push(format!("k{k}_distance"), dist);
        report.push(format!("k{k}_identity"), expected);
        report.push(format!("k{k}_bound"), bound);
        report.push(format!("k{k}_finite_reading_distance"), dist_fin);
    }
    Ok(report)
}

fn window_distance(a: &GridFunction, b: &GridFunction) -> Result<f64> {
    Ok(a.zip_with(b, |x, y| x - y)?.norm())
}

/// Admissible perturbation built from interior α′-windows: with `α′_h = 0` on
/// the first and last windows, `h = α′_h(t + 1) + α′_h(t − 1)` changes neither
/// the initial nor the terminal state. `interior[j]` is window `j + 1`, on any
/// interval of length 2 with the control's sampling.
pub fn perturbation_from_interior(interior: &[GridFunction], horizon: Horizon) -> Result<ControlSignal> {
    let n = horizon.windows();
    if interior.len() + 1 != n {
        return Err(Error::GridMismatch(format!(
            "{} interior windows for a horizon of {n} windows",
            interior.len()
        )));
    }
    let mw = interior
        .first()
        .map(GridFunction::len)
        .ok_or_else(|| Error::TooShort("no interior windows".into()))?;
    let zero = vec![0.0; mw];
    let win = |k: usize| -> &[f64] {
        if k == 0 || k == n {
            &zero
        } else {
            interior[k - 1].values()
        }
    };
    let windows = (0..n)
        .map(|k| {
            if interior[k.min(n - 2)].len() != mw {
                return Err(Error::GridMismatch("interior windows differ in size".into()));
            }
            let vals = win(k).iter().zip(win(k + 1)).map(|(a, b)| a + b).collect();
            GridFunction::new(2.0 * k as f64, 2.0 * k as f64 + 2.0, vals)
        })
        .collect::<Result<Vec<_>>>()?;
    ControlSignal::new(windows, horizon)
}

/// The optimum must not be improved by admissible perturbations:
/// `J(u + h) ≥ J(u)` for every `h` whose α-profile vanishes at both ends.
///
/// The residual is the largest relative decrease found; perturbations that
/// move the terminal state, and zero perturbations, are counted and skipped.
pub fn check_cost_optimality(
    init: &InitialData,
    u: &ControlSignal,
    lambda: f64,
    perturbations: &[ControlSignal],
    tol: f64,
) -> Result<CertificateReport> {
    let f = build_f(init)?;
    let alpha = propagate_alpha(&f, u)?;
    let j_opt = cost(&alpha, u, lambda)?;
    let zero_f = f.map(|_| 0.0)?;

    let mut worst_decrease: f64 = 0.0;
    let mut min_increase = f64::INFINITY;
    let mut skipped = 0usize;
    let mut trivial = 0usize;
    for h in perturbations {
        if h.max_abs() == 0.0 {
            trivial += 1;
            continue;
        }
        let alpha_h = propagate_alpha(&zero_f, h)?;
        if alpha_h.last().max_abs() > 1e-10 * h.max_abs().max(f64::MIN_POSITIVE) {
            skipped += 1;
            continue;
        }
        let perturbed = u.zip_with(h, |a, b| a + b)?;
        let alpha_p = propagate_alpha(&f, &perturbed)?;
        let j = cost(&alpha_p, &perturbed, lambda)?;
        let change = relative(j - j_opt, j_opt);
        worst_decrease = worst_decrease.max(-change);
        min_increase = min_increase.min(change);
    }
    let tested = perturbations.len() - skipped - trivial;
    let mut report = CertificateReport::new(CertificateKind::Cost, worst_decrease, tol)
        .with("cost", j_opt)
        .with("perturbations_tested", tested as f64)
        .with("perturbations_inadmissible", skipped as f64)
        .with("perturbations_zero", trivial as f64);
    if tested > 0 {
        report.push("min_relative_increase", min_increase);
    } else {
        report.push("vacuous", 1.0);
    }
    Ok(report)
}
