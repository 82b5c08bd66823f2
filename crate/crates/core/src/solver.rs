//! The projected Galerkin ODE system and its time integration.
//!
//! In the eigenbasis the system is diagonal in its stiff linear part:
//! da_j/dt = f_j(t) - nu lambda_j a_j - b(u, u, w_j). The integrators
//! advance the diagonal term exactly through the integrating factor
//! exp(-nu lambda_j dt), so the pure linear flow is reproduced to roundoff
//! regardless of dt.

use std::sync::Arc;

use crate::basis::EigenBasis;
use crate::error::{SolverError, SpectralError};
use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::operators::{apply_b_on, trilinear_b_on};

/// Time envelope of one forcing term. Values are dimensionless gains
/// multiplying the term's spatial kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeEnvelope {
    Constant(f64),
    /// Square wave: gain 1 on the first `duty` fraction of each period,
    /// 0 otherwise, with edges smoothed over width `smooth` (C^1).
    SquareWave { period: f64, duty: f64, smooth: f64 },
    /// Gain 1 on [t_on, t_off], edges smoothed over width `smooth`.
    Window { t_on: f64, t_off: f64, smooth: f64 },
}

fn smooth_step(x: f64, width: f64) -> f64 {
    if width <= 0.0 {
        return if x >= 0.0 { 1.0 } else { 0.0 };
    }
    if x <= -0.5 * width {
        0.0
    } else if x >= 0.5 * width {
        1.0
    } else {
        0.5 * (1.0 + (std::f64::consts::PI * x / width).sin())
    }
}

impl TimeEnvelope {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            TimeEnvelope::Constant(g) => g,
            TimeEnvelope::SquareWave {
                period,
                duty,
                smooth,
            } => {
                let phase = t.rem_euclid(period);
                let on_len = duty * period;
                smooth_step(phase, smooth) - smooth_step(phase - on_len, smooth)
                    + smooth_step(phase - period, smooth)
            }
            TimeEnvelope::Window { t_on, t_off, smooth } => {
                smooth_step(t - t_on, smooth) - smooth_step(t - t_off, smooth)
            }
        }
    }

    fn peak(&self) -> f64 {
        match *self {
            TimeEnvelope::Constant(g) => g.abs(),
            _ => 1.0,
        }
    }
}

/// One spatial kernel with its time envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct ForcingTerm {
    pub kernel: SpectralField,
    pub envelope: TimeEnvelope,
}

/// Time-dependent scenario forcing: a sum of enveloped kernels plus an
/// optional linear relaxation -damping * u applied in the right-hand side
/// (the state-dependent part of a ramp source).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioForcing {
    pub terms: Vec<ForcingTerm>,
    pub damping: f64,
}

/// The forcing f of the problem.
#[derive(Debug, Clone, PartialEq)]
pub enum ForcingSpec {
    Zero,
    /// Time-independent forcing, as in the estimate suite.
    Constant(SpectralField),
    Scenario(ScenarioForcing),
}

impl ForcingSpec {
    fn basis(&self) -> Option<&Arc<EigenBasis>> {
        match self {
            ForcingSpec::Zero => None,
            ForcingSpec::Constant(f) => Some(f.basis()),
            ForcingSpec::Scenario(s) => s.terms.first().map(|t| t.kernel.basis()),
        }
    }

    pub fn damping(&self) -> f64 {
        match self {
            ForcingSpec::Scenario(s) => s.damping,
            _ => 0.0,
        }
    }

    /// L2 norm of the time-independent forcing; None for scenario forcing.
    pub fn constant_norm(&self) -> Option<f64> {
        match self {
            ForcingSpec::Zero => Some(0.0),
            ForcingSpec::Constant(f) => Some(f.l2_norm()),
            ForcingSpec::Scenario(_) => None,
        }
    }
}

/// The tuple (nu, u0, f) defining the problem on its domain.
#[derive(Debug, Clone)]
pub struct BurgersProblem {
    pub nu: f64,
    pub u0: SpectralField,
    pub forcing: ForcingSpec,
}

impl BurgersProblem {
    pub fn new(
        nu: f64,
        u0: SpectralField,
        forcing: ForcingSpec,
    ) -> Result<Self, SolverError> {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(SolverError::NonPositiveViscosity(nu));
        }
        let dim = u0.basis().domain().dimension();
        if u0.components() != dim {
            return Err(SolverError::Spectral(SpectralError::ComponentMismatch {
                components: u0.components(),
                dimension: dim,
            }));
        }
        if let Some(fb) = forcing.basis() {
            if **fb != **u0.basis() {
                return Err(SolverError::Spectral(SpectralError::BasisMismatch));
            }
        }
        Ok(Self { nu, u0, forcing })
    }
}

/// Explicit rule used for the nonlinear and forcing terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Integrating-factor classical RK4 (default).
    IfRk4,
    /// Integrating-factor forward Euler.
    IfEuler,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub m: usize,
    pub dt: f64,
    pub t_end: f64,
    pub integrator: Integrator,
    /// Steps between trajectory snapshots (t = 0 and t_end always recorded).
    pub record_every: usize,
    /// Test hook: drop B(u, u) from the right-hand side.
    pub suppress_nonlinearity: bool,
}

impl SolverConfig {
    pub fn new(m: usize, dt: f64, t_end: f64) -> Self {
        Self {
            m,
            dt,
            t_end,
            integrator: Integrator::IfRk4,
            record_every: 1,
            suppress_nonlinearity: false,
        }
    }

    fn validate(&self) -> Result<(), SolverError> {
        if self.m == 0 {
            return Err(SolverError::Spectral(SpectralError::EmptyTruncation));
        }
        if !(self.dt > 0.0) {
            return Err(SolverError::NonPositiveDt(self.dt));
        }
        if self.t_end < 0.0 {
            return Err(SolverError::NegativeTEnd(self.t_end));
        }
        Ok(())
    }
}

/// Per-snapshot diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub l2_sq: f64,
    pub v_sq: f64,
    /// |Au|^2.
    pub h2_sq: f64,
    pub b_uuu: f64,
    /// (f(t), u), including the -damping |u|^2 contribution for scenarios.
    pub f_dot_u: f64,
}

/// A time-indexed sequence of states with per-snapshot diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub diagnostics: Vec<StepDiagnostics>,
}

impl Trajectory {
    pub fn final_state(&self) -> &SpectralField {
        self.states.last().expect("trajectory never empty")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory never empty")
    }
}

struct Workspace {
    basis: Arc<EigenBasis>,
    grid: GridSpec,
    nu: f64,
    components: usize,
    m: usize,
    lambdas: Vec<f64>,
    forcing_terms: Vec<(Vec<f64>, TimeEnvelope)>,
    damping: f64,
    suppress_nonlinearity: bool,
}

impl Workspace {
    fn field(&self, coeffs: &[f64]) -> SpectralField {
        SpectralField::from_coeffs(Arc::clone(&self.basis), self.components, coeffs.to_vec())
            .expect("workspace coefficients always consistent")
    }

    /// Forcing coefficients at time t.
    fn forcing_at(&self, t: f64, out: &mut [f64]) {
        out.fill(0.0);
        for (kernel, env) in &self.forcing_terms {
            let g = env.value(t);
            if g != 0.0 {
                for (o, k) in out.iter_mut().zip(kernel) {
                    *o += g * k;
                }
            }
        }
    }

    /// Non-stiff part of the right-hand side: P_m f(t) - damping u - P_m B(u, u).
    fn nonlinear(&self, t: f64, coeffs: &[f64]) -> Result<Vec<f64>, SpectralError> {
        let mut out = vec![0.0; coeffs.len()];
        self.forcing_at(t, &mut out);
        if self.damping != 0.0 {
            for (o, a) in out.iter_mut().zip(coeffs) {
                *o -= self.damping * a;
            }
        }
        if !self.suppress_nonlinearity {
            let u = self.field(coeffs);
            let b = apply_b_on(&self.grid, &u, &u, self.m)?;
            for (o, bj) in out.iter_mut().zip(b.coeffs()) {
                *o -= bj;
            }
        }
        Ok(out)
    }

    fn diagnostics(&self, t: f64, coeffs: &[f64]) -> Result<StepDiagnostics, SpectralError> {
        let u = self.field(coeffs);
        let mut f = vec![0.0; coeffs.len()];
        self.forcing_at(t, &mut f);
        let f_dot_u: f64 = f.iter().zip(coeffs).map(|(a, b)| a * b).sum::<f64>()
            - self.damping * u.l2_norm_sq();
        let b_uuu = if self.suppress_nonlinearity {
            0.0
        } else {
            trilinear_b_on(&self.grid, &u, &u, &u)?
        };
        Ok(StepDiagnostics {
            l2_sq: u.l2_norm_sq(),
            v_sq: u.v_norm().powi(2),
            h2_sq: u.h2_norm().powi(2),
            b_uuu,
            f_dot_u,
        })
    }
}

/// Right-hand side of the projected system at time t:
/// P_m f - nu A u - P_m B(u, u) (minus the scenario damping term).
pub fn rhs(
    t: f64,
    u: &SpectralField,
    problem: &BurgersProblem,
    m: usize,
) -> Result<SpectralField, SolverError> {
    let ws = build_workspace(problem, &SolverConfig::new(m, 1.0, 0.0))?;
    let coeffs = u.project(m)?;
    let mut out = ws.nonlinear(t, coeffs.coeffs())?;
    for (idx, o) in out.iter_mut().enumerate() {
        *o -= problem.nu * ws.lambdas[idx] * coeffs.coeffs()[idx];
    }
    Ok(SpectralField::from_coeffs(
        Arc::clone(&ws.basis),
        ws.components,
        out,
    )?)
}

fn build_workspace(
    problem: &BurgersProblem,
    config: &SolverConfig,
) -> Result<Workspace, SolverError> {
    let m = config.m;
    if m > problem.u0.basis().len() {
        return Err(SolverError::Spectral(SpectralError::TruncationTooLarge {
            requested: m,
            available: problem.u0.basis().len(),
        }));
    }
    let basis = problem.u0.basis().truncated(m)?;
    let grid = GridSpec::for_basis(&basis);
    let components = problem.u0.components();
    let mut lambdas = Vec::with_capacity(components * m);
    for _ in 0..components {
        for j in 0..m {
            lambdas.push(basis.lambda(j));
        }
    }
    let mut forcing_terms = Vec::new();
    match &problem.forcing {
        ForcingSpec::Zero => {}
        ForcingSpec::Constant(f) => {
            forcing_terms.push((
                f.project(m)?.coeffs().to_vec(),
                TimeEnvelope::Constant(1.0),
            ));
        }
        ForcingSpec::Scenario(s) => {
            for term in &s.terms {
                forcing_terms.push((
                    term.kernel.project(m)?.coeffs().to_vec(),
                    term.envelope.clone(),
                ));
            }
        }
    }
    Ok(Workspace {
        basis,
        grid,
        nu: problem.nu,
        components,
        m,
        lambdas,
        forcing_terms,
        damping: problem.forcing.damping(),
        suppress_nonlinearity: config.suppress_nonlinearity,
    })
}

/// Divergence-detection ceiling: a large multiple of the a priori energy
/// bound when it applies, otherwise of a crude forcing-growth estimate.
fn energy_ceiling(problem: &BurgersProblem, ws: &Workspace, t_end: f64) -> f64 {
    let u0_sq = problem.u0.l2_norm_sq();
    let bound = match (problem.forcing.constant_norm(), ws.basis.lambda_1()) {
        (Some(f_norm), Ok(l1)) => {
            u0_sq + f_norm * f_norm / (problem.nu * problem.nu * l1 * l1)
        }
        _ => {
            let f_peak: f64 = ws
                .forcing_terms
                .iter()
                .map(|(k, env)| {
                    let n: f64 = k.iter().map(|a| a * a).sum::<f64>().sqrt();
                    n * env.peak()
                })
                .sum();
            let growth = f_peak * (t_end + 1.0 / (problem.nu * ws.basis.lambda_min().max(1e-3)));
            u0_sq + (1.0 + growth) * (1.0 + growth)
        }
    };
    1e6 * bound.max(1e-12)
}

/// Integrate the projected system, recording snapshots at the configured
/// cadence (t = 0 and t_end always included). Deterministic given inputs.
pub fn integrate(
    problem: &BurgersProblem,
    config: &SolverConfig,
) -> Result<Trajectory, SolverError> {
    config.validate()?;
    let ws = build_workspace(problem, config)?;
    let ceiling = energy_ceiling(problem, &ws, config.t_end);

    let mut a = problem.u0.project(config.m)?.coeffs().to_vec();
    let n_steps = if config.t_end == 0.0 {
        0
    } else {
        (config.t_end / config.dt - 1e-9).ceil().max(1.0) as usize
    };
    let record_every = config.record_every.max(1);

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        diagnostics: Vec::new(),
    };
    let record = |t: f64, coeffs: &[f64], traj: &mut Trajectory| -> Result<(), SolverError> {
        traj.times.push(t);
        traj.states.push(ws.field(coeffs));
        traj.diagnostics.push(ws.diagnostics(t, coeffs)?);
        Ok(())
    };
    record(0.0, &a, &mut traj)?;

    // Exponential integrating factors for the regular step size.
    let make_exps = |h: f64| -> (Vec<f64>, Vec<f64>) {
        let e_half: Vec<f64> = ws
            .lambdas
            .iter()
            .map(|&l| (-ws.nu * l * 0.5 * h).exp())
            .collect();
        let e_full: Vec<f64> = e_half.iter().map(|e| e * e).collect();
        (e_half, e_full)
    };
    let (mut e_half, mut e_full) = make_exps(config.dt);
    let mut h = config.dt;

    let mul = |v: &[f64], e: &[f64]| -> Vec<f64> {
        v.iter().zip(e).map(|(a, b)| a * b).collect()
    };

    let mut t = 0.0;
    for step in 1..=n_steps {
        let remaining = config.t_end - t;
        if step == n_steps {
            let h_last = remaining;
            if (h_last - h).abs() > 1e-12 * config.dt {
                let exps = make_exps(h_last);
                e_half = exps.0;
                e_full = exps.1;
            }
            h = h_last;
        }
        match config.integrator {
            Integrator::IfRk4 => {
                let k1 = ws.nonlinear(t, &a)?;
                let a1: Vec<f64> = a
                    .iter()
                    .zip(&k1)
                    .zip(&e_half)
                    .map(|((a, k), e)| (a + 0.5 * h * k) * e)
                    .collect();
                let k2 = ws.nonlinear(t + 0.5 * h, &a1)?;
                let a2: Vec<f64> = a
                    .iter()
                    .zip(&k2)
                    .zip(&e_half)
                    .map(|((a, k), e)| a * e + 0.5 * h * k)
                    .collect();
                let k3 = ws.nonlinear(t + 0.5 * h, &a2)?;
                let a3: Vec<f64> = a
                    .iter()
                    .zip(&k3)
                    .zip(&e_half)
                    .zip(&e_full)
                    .map(|(((a, k), eh), ef)| a * ef + h * k * eh)
                    .collect();
                let k4 = ws.nonlinear(t + h, &a3)?;
                for idx in 0..a.len() {
                    a[idx] = a[idx] * e_full[idx]
                        + (h / 6.0)
                            * (k1[idx] * e_full[idx]
                                + 2.0 * (k2[idx] + k3[idx]) * e_half[idx]
                                + k4[idx]);
                }
            }
            Integrator::IfEuler => {
                let k = ws.nonlinear(t, &a)?;
                let stepped: Vec<f64> = a
                    .iter()
                    .zip(&k)
                    .map(|(a, k)| a + h * k)
                    .collect();
                a = mul(&stepped, &e_full);
            }
        }
        t = if step == n_steps {
            config.t_end
        } else {
            step as f64 * config.dt
        };

        if a.iter().any(|x| !x.is_finite()) {
            return Err(SolverError::NonFinite { step, t });
        }
        let l2_sq: f64 = a.iter().map(|x| x * x).sum();
        if l2_sq > ceiling {
            return Err(SolverError::BlowUp {
                step,
                t,
                l2_sq,
                ceiling,
            });
        }
        if step % record_every == 0 || step == n_steps {
            record(t, &a, &mut traj)?;
        }
    }
    Ok(traj)
}

/// Two trajectories at truncations m1 < m2 on identical time grids, for
/// pointwise differencing in refinement studies.
pub fn galerkin_pair(
    problem: &BurgersProblem,
    config: &SolverConfig,
    m1: usize,
    m2: usize,
) -> Result<(Trajectory, Trajectory), SolverError> {
    if m1 >= m2 {
        return Err(SolverError::Spectral(SpectralError::Invalid(format!(
            "need m1 < m2, got {m1} >= {m2}"
        ))));
    }
    let mut c1 = config.clone();
    c1.m = m1;
    let mut c2 = config.clone();
    c2.m = m2;
    Ok((integrate(problem, &c1)?, integrate(problem, &c2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::AxisMode;
    use crate::domain::{Boundary, Domain};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn periodic_basis(m: usize) -> Arc<EigenBasis> {
        let d = Domain::interval(2.0 * PI, Boundary::Periodic, false).unwrap();
        EigenBasis::build(&d, m).unwrap()
    }

    pub(crate) fn sin_mode(basis: &Arc<EigenBasis>, k: u32) -> usize {
        basis
            .modes()
            .iter()
            .position(|m| m.axes[0] == AxisMode::Sin(k))
            .unwrap()
    }

    /// u0 = sin(x) on the 2pi-periodic line (coefficient sqrt(pi) on the
    /// normalized mode).
    pub(crate) fn sine_ic(basis: &Arc<EigenBasis>) -> SpectralField {
        SpectralField::eigenmode(Arc::clone(basis), 1, 0, sin_mode(basis, 1), PI.sqrt()).unwrap()
    }

    #[test]
    fn pure_linear_flow_is_exact_exponential_decay() {
        let basis = periodic_basis(8);
        let nu = 0.37;
        for j in [0usize, 3, 7] {
            let u0 = SpectralField::eigenmode(Arc::clone(&basis), 1, 0, j, 1.0).unwrap();
            let problem = BurgersProblem::new(nu, u0, ForcingSpec::Zero).unwrap();
            let mut config = SolverConfig::new(8, 0.01, 1.0);
            config.suppress_nonlinearity = true;
            config.record_every = 100;
            let traj = integrate(&problem, &config).unwrap();
            let expected = (-nu * basis.lambda(j)).exp();
            assert_relative_eq!(
                traj.final_state().coeff(0, j),
                expected,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn zero_data_gives_zero_trajectory() {
        let basis = periodic_basis(6);
        let u0 = SpectralField::zeros(Arc::clone(&basis), 1).unwrap();
        let problem = BurgersProblem::new(0.1, u0, ForcingSpec::Zero).unwrap();
        let traj = integrate(&problem, &SolverConfig::new(6, 0.01, 0.5)).unwrap();
        for s in &traj.states {
            assert_eq!(s.l2_norm(), 0.0);
        }
    }

    #[test]
    fn rhs_linear_part_is_diagonal() {
        let basis = periodic_basis(6);
        let j = 4;
        let u = SpectralField::eigenmode(Arc::clone(&basis), 1, 0, j, 1.0).unwrap();
        let nu = 0.2;
        let problem = BurgersProblem::new(
            nu,
            SpectralField::zeros(Arc::clone(&basis), 1).unwrap(),
            ForcingSpec::Zero,
        )
        .unwrap();
        // With the nonlinearity included, rhs = -nu lambda_j w_j - B(u,u);
        // check the diagonal part against the test hook path instead.
        let out = rhs(0.0, &u, &problem, 6).unwrap();
        let b = crate::operators::apply_b(&u, &u, 6).unwrap();
        for i in 0..6 {
            let expected = if i == j { -nu * basis.lambda(j) } else { 0.0 } - b.coeff(0, i);
            assert_relative_eq!(out.coeff(0, i), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn rhs_of_zero_state_is_projected_forcing() {
        let basis = periodic_basis(6);
        let f = SpectralField::eigenmode(Arc::clone(&basis), 1, 0, 2, 0.7).unwrap();
        let problem = BurgersProblem::new(
            0.1,
            SpectralField::zeros(Arc::clone(&basis), 1).unwrap(),
            ForcingSpec::Constant(f.clone()),
        )
        .unwrap();
        let z = SpectralField::zeros(Arc::clone(&basis), 1).unwrap();
        let out = rhs(0.0, &z, &problem, 4).unwrap();
        for j in 0..4 {
            assert_relative_eq!(out.coeff(0, j), f.coeff(0, j), epsilon = 1e-14);
        }
    }

    #[test]
    fn rhs_nonlinear_part_of_sine_is_half_sin_2x() {
        let basis = periodic_basis(8);
        let u0 = sine_ic(&basis);
        let problem = BurgersProblem::new(1.0, u0.clone(), ForcingSpec::Zero).unwrap();
        let out = rhs(0.0, &u0, &problem, 8).unwrap();
        // Nonlinear part: -P_m(u u_x) = -(1/2) sin 2x.
        let j1 = sin_mode(&basis, 1);
        let j2 = sin_mode(&basis, 2);
        for j in 0..8 {
            let linear = if j == j1 {
                -1.0 * basis.lambda(j1) * PI.sqrt()
            } else {
                0.0
            };
            let nonlinear = if j == j2 { -0.5 * PI.sqrt() } else { 0.0 };
            assert_relative_eq!(out.coeff(0, j), linear + nonlinear, epsilon = 1e-12);
        }
    }

    #[test]
    fn band_limited_linear_flow_identical_across_truncations() {
        let basis = periodic_basis(16);
        let mut u0 = SpectralField::zeros(Arc::clone(&basis), 1).unwrap();
        for j in 0..6 {
            u0.set_coeff(0, j, 1.0 / (1.0 + j as f64));
        }
        let problem = BurgersProblem::new(0.3, u0, ForcingSpec::Zero).unwrap();
        let mut config = SolverConfig::new(8, 0.01, 0.5);
        config.suppress_nonlinearity = true;
        let (t1, t2) = galerkin_pair(&problem, &config, 8, 16).unwrap();
        assert_eq!(t1.times, t2.times);
        for (s1, s2) in t1.states.iter().zip(&t2.states) {
            for j in 0..8 {
                assert_relative_eq!(s1.coeff(0, j), s2.coeff(0, j), epsilon = 1e-14);
            }
            for j in 8..16 {
                assert_eq!(s2.coeff(0, j), 0.0);
            }
        }
    }

    #[test]
    fn band_limited_forcing_identical_across_truncations() {
        let basis = periodic_basis(16);
        let f = SpectralField::eigenmode(Arc::clone(&basis), 1, 0, 3, 0.8).unwrap();
        let u0 = SpectralField::zeros(Arc::clone(&basis), 1).unwrap();
        let problem = BurgersProblem::new(0.3, u0, ForcingSpec::Constant(f)).unwrap();
        let mut config = SolverConfig::new(8, 0.01, 0.5);
        config.suppress_nonlinearity = true;
        let (t1, t2) = galerkin_pair(&problem, &config, 8, 16).unwrap();
        for (s1, s2) in t1.states.iter().zip(&t2.states) {
            for j in 0..8 {
                assert_relative_eq!(s1.coeff(0, j), s2.coeff(0, j), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn determinism_bit_identical_runs() {
        let basis = periodic_basis(16);
        let u0 = sine_ic(&basis);
        let problem = BurgersProblem::new(0.1, u0, ForcingSpec::Zero).unwrap();
        let config = SolverConfig::new(16, 0.005, 0.8);
        let t1 = integrate(&problem, &config).unwrap();
        let t2 = integrate(&problem, &config).unwrap();
        for (s1, s2) in t1.states.iter().zip(&t2.states) {
            assert_eq!(s1.coeffs(), s2.coeffs());
        }
    }

    #[test]
    fn band_limit_preserved_along_trajectory() {
        let basis = periodic_basis(32);
        let u0 = sine_ic(&basis);
        let problem = BurgersProblem::new(0.1, u0, ForcingSpec::Zero).unwrap();
        let config = SolverConfig::new(8, 0.01, 0.5);
        let traj = integrate(&problem, &config).unwrap();
        for s in &traj.states {
            assert_eq!(s.truncation(), 8);
            assert!(s.is_finite());
        }
    }

    #[test]
    fn monotone_energy_decay_without_forcing_1d() {
        let basis = periodic_basis(16);
        let u0 = sine_ic(&basis);
        let problem = BurgersProblem::new(0.2, u0, ForcingSpec::Zero).unwrap();
        let traj = integrate(&problem, &SolverConfig::new(16, 0.01, 2.0)).unwrap();
        for w in traj.diagnostics.windows(2) {
            assert!(w[1].l2_sq <= w[0].l2_sq * (1.0 + 1e-12));
        }
    }

    #[test]
    fn blow_up_detected_for_negative_viscosity_like_forcing() {
        // Strong anti-damped scenario: huge constant forcing aligned with a
        // growing mode is not available, so instead drive with an enormous
        // kernel and tiny viscosity to trip the ceiling... the simpler
        // trigger is a non-finite ceiling check with dt too large for the
        // explicit part.
        let basis = periodic_basis(32);
        let u0 = sine_ic(&basis).scaled(50.0);
        let problem = BurgersProblem::new(0.001, u0, ForcingSpec::Zero).unwrap();
        // dt far beyond the CFL of the explicit nonlinear term.
        let config = SolverConfig::new(32, 0.5, 50.0);
        match integrate(&problem, &config) {
            Err(SolverError::BlowUp { .. }) | Err(SolverError::NonFinite { .. }) => {}
            other => panic!("expected blow-up report, got {other:?}"),
        }
    }

    #[test]
    fn snapshot_cadence_includes_endpoints() {
        let basis = periodic_basis(8);
        let u0 = sine_ic(&basis);
        let problem = BurgersProblem::new(0.1, u0, ForcingSpec::Zero).unwrap();
        let mut config = SolverConfig::new(8, 0.01, 0.25);
        config.record_every = 7;
        let traj = integrate(&problem, &config).unwrap();
        assert_eq!(traj.times[0], 0.0);
        assert_relative_eq!(traj.final_time(), 0.25, epsilon = 1e-12);
        for w in traj.times.windows(2) {
            assert!(w[1] > w[0]);
        }
    }
}
