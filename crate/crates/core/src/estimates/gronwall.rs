//! Gronwall-type bounds: the exponential energy-decay estimate for
//! time-independent forcing, the uniform Gronwall lemma, and the
//! enstrophy-trace bound it yields.

use crate::error::SpectralError;
use crate::estimates::{BoundReport, FittedConstant};
use crate::solver::{BurgersProblem, ForcingSpec, Trajectory};

/// Sampled data for the uniform Gronwall lemma: nonnegative g, h, y on a
/// uniform time grid, a window r, and window-integral bounds a1, a2, a3
/// validated against the samples.
#[derive(Debug, Clone)]
pub struct GronwallData {
    pub dt: f64,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    pub y: Vec<f64>,
    pub r: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

fn trapezoid(dt: f64, v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let interior: f64 = v[1..v.len() - 1].iter().sum();
    dt * (0.5 * (v[0] + v[v.len() - 1]) + interior)
}

/// Max over sliding windows of length `steps` of the trapezoid integral.
fn max_window_integral(dt: f64, v: &[f64], steps: usize) -> f64 {
    let mut best: f64 = 0.0;
    for start in 0..v.len().saturating_sub(steps) {
        best = best.max(trapezoid(dt, &v[start..=start + steps]));
    }
    best
}

impl GronwallData {
    /// Build from samples, computing a1-a3 as the max sliding-window
    /// integrals (so they are valid bounds by construction).
    pub fn from_samples(
        dt: f64,
        g: Vec<f64>,
        h: Vec<f64>,
        y: Vec<f64>,
        r: f64,
    ) -> Result<Self, SpectralError> {
        if !(dt > 0.0) || !(r > 0.0) {
            return Err(SpectralError::Invalid(format!(
                "need dt > 0 and r > 0, got dt = {dt}, r = {r}"
            )));
        }
        if g.len() != h.len() || g.len() != y.len() || g.len() < 2 {
            return Err(SpectralError::Invalid(
                "g, h, y must share length >= 2".into(),
            ));
        }
        for series in [&g, &h, &y] {
            if series.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(SpectralError::Invalid(
                    "g, h, y must be nonnegative and finite".into(),
                ));
            }
        }
        let steps = (r / dt).round() as usize;
        if steps == 0 || steps >= g.len() {
            return Err(SpectralError::Invalid(format!(
                "window r = {r} not representable on {} samples of dt = {dt}",
                g.len()
            )));
        }
        let a1 = max_window_integral(dt, &g, steps);
        let a2 = max_window_integral(dt, &h, steps);
        let a3 = max_window_integral(dt, &y, steps);
        Ok(Self {
            dt,
            g,
            h,
            y,
            r: steps as f64 * dt,
            a1,
            a2,
            a3,
        })
    }
}

/// The uniform Gronwall bound (a3/r + a2) e^{a1}.
pub fn uniform_gronwall_bound(data: &GronwallData) -> Result<f64, SpectralError> {
    if !(data.r > 0.0) {
        return Err(SpectralError::Invalid(format!(
            "nonpositive window r = {}",
            data.r
        )));
    }
    Ok((data.a3 / data.r + data.a2) * data.a1.exp())
}

fn constant_forcing_norm(problem: &BurgersProblem) -> Result<f64, SpectralError> {
    problem.forcing.constant_norm().ok_or_else(|| {
        SpectralError::Invalid("estimate requires time-independent forcing".into())
    })
}

/// Exponential energy bound for time-independent forcing on a mean-excluded
/// basis: |u(t)|^2 <= |u0|^2 e^{-nu l1 t} + |f|^2 (1 - e^{-nu l1 t})/(nu l1)^2.
pub fn energy_decay_bound(
    trajectory: &Trajectory,
    problem: &BurgersProblem,
) -> Result<BoundReport, SpectralError> {
    let basis = trajectory.states[0].basis();
    let l1 = basis.lambda_1()?;
    let f_norm = constant_forcing_norm(problem)?;
    let u0_sq = trajectory.states[0].l2_norm_sq();
    let nu = problem.nu;
    let forcing_term = f_norm * f_norm / (nu * nu * l1 * l1);
    let bound: Vec<f64> = trajectory
        .times
        .iter()
        .map(|&t| {
            let e = (-nu * l1 * t).exp();
            u0_sq * e + forcing_term * (1.0 - e)
        })
        .collect();
    let measured: Vec<f64> = trajectory.diagnostics.iter().map(|d| d.l2_sq).collect();
    let scale = bound.iter().cloned().fold(0.0, f64::max).max(1e-300);
    BoundReport::from_series(
        "energy_decay",
        trajectory.times.clone(),
        measured,
        bound,
        1e-8 * scale,
        vec![],
    )
}

/// Enstrophy-trace bound: apply the uniform Gronwall lemma along the
/// trajectory's own sliding windows with y = |u|_V^2,
/// g = (2 c1'/nu^3) |u|^2 |u|_V^2, h = (2/nu) |f|^2, where c1' = (27/4) c^4
/// is derived from the fitted sup-norm interpolation constant c by a
/// weighted Young inequality.
pub fn enstrophy_trace(
    trajectory: &Trajectory,
    problem: &BurgersProblem,
    agmon_h2: &FittedConstant,
    r: f64,
) -> Result<BoundReport, SpectralError> {
    let span = trajectory.final_time() - trajectory.times[0];
    if !(r > 0.0) || r > span {
        return Err(SpectralError::Invalid(format!(
            "window r = {r} outside trajectory span {span}"
        )));
    }
    let f_norm = constant_forcing_norm(problem)?;
    let nu = problem.nu;
    let c1p = 27.0 / 4.0 * agmon_h2.value.powi(4);
    let c1_prime = FittedConstant {
        name: "c1_prime".into(),
        value: c1p,
        samples: agmon_h2.samples,
        seed: agmon_h2.seed,
    };
    let times = &trajectory.times;
    let g: Vec<f64> = trajectory
        .diagnostics
        .iter()
        .map(|d| 2.0 * c1p / nu.powi(3) * d.l2_sq * d.v_sq)
        .collect();
    let h = 2.0 / nu * f_norm * f_norm;
    let y: Vec<f64> = trajectory.diagnostics.iter().map(|d| d.v_sq).collect();

    let mut out_times = Vec::new();
    let mut measured = Vec::new();
    let mut bound = Vec::new();
    let mut y_scale: f64 = 0.0;
    for j in 0..times.len() {
        if times[j] - times[0] < r - 1e-12 {
            continue;
        }
        // Largest i with t_i <= t_j - r: window [t_i, t_j], r_eff >= r.
        let i = times[..=j]
            .iter()
            .rposition(|&t| t <= times[j] - r + 1e-12)
            .expect("t_0 always qualifies");
        let r_eff = times[j] - times[i];
        let mut a1 = 0.0;
        let mut a3 = 0.0;
        for k in i..j {
            let w = 0.5 * (times[k + 1] - times[k]);
            a1 += w * (g[k] + g[k + 1]);
            a3 += w * (y[k] + y[k + 1]);
        }
        let a2 = h * r_eff;
        out_times.push(times[j]);
        measured.push(y[j]);
        bound.push((a3 / r_eff + a2) * a1.exp());
        y_scale = y_scale.max(y[j]);
    }
    if out_times.is_empty() {
        return Err(SpectralError::Invalid(
            "no snapshot at or beyond the window r".into(),
        ));
    }
    BoundReport::from_series(
        "enstrophy_trace",
        out_times,
        measured,
        bound,
        1e-8 * y_scale.max(1e-300),
        vec![agmon_h2.clone(), c1_prime],
    )
}

/// Convenience: enstrophy trace with the default window t_end / 10.
pub fn enstrophy_trace_default_window(
    trajectory: &Trajectory,
    problem: &BurgersProblem,
    agmon_h2: &FittedConstant,
) -> Result<BoundReport, SpectralError> {
    enstrophy_trace(trajectory, problem, agmon_h2, trajectory.final_time() / 10.0)
}

/// Check that along the trajectory the forcing-free flag holds.
pub fn forcing_is_constant(problem: &BurgersProblem) -> bool {
    matches!(
        problem.forcing,
        ForcingSpec::Zero | ForcingSpec::Constant(_)
    )
}
