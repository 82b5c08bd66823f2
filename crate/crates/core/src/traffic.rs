//! Traffic-flow scenarios on the 1D periodic solver: ramp relaxation,
//! traffic lights, and accident pulses as mollified source terms, plus
//! shock/rarefaction/smoothing diagnostics.

use std::sync::Arc;

use ndarray::Array2;

use crate::basis::EigenBasis;
use crate::error::{SolverError, SpectralError};
use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::solver::{
    integrate, BurgersProblem, ForcingSpec, ForcingTerm, ScenarioForcing, SolverConfig,
    TimeEnvelope, Trajectory,
};

/// A traffic source term; a scenario sums a list of them.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceTerm {
    /// Relaxation toward an inflow level: contributes -alpha u + beta.
    Ramp { alpha: f64, beta: f64 },
    /// Localized periodic (red/green) forcing at x_k: a unit-mass mollified
    /// point source scaled by `amplitude`, gated by a smoothed square wave.
    TrafficLight {
        x_k: f64,
        sigma: f64,
        period: f64,
        duty: f64,
        amplitude: f64,
    },
    /// Localized forcing active on [t_on, t_off] (an accident / bottleneck).
    Pulse {
        x0: f64,
        width: f64,
        amplitude: f64,
        t_on: f64,
        t_off: f64,
    },
}

/// How the gradient history classifies the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Shock,
    Rarefaction,
    Smooth,
}

/// Scenario outcome: the trajectory plus per-snapshot diagnostics.
#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub trajectory: Trajectory,
    pub max_gradient: Vec<f64>,
    /// Gradient-argmax position per snapshot when the snapshot is
    /// shock-steep (gradient at least 5x its initial value), else None.
    pub shock_position: Vec<Option<f64>>,
    pub classification: Classification,
    /// Spatial mean per snapshot.
    pub means: Vec<f64>,
}

fn require_1d_periodic(basis: &EigenBasis) -> Result<(), SpectralError> {
    let d = basis.domain();
    if d.dimension() != 1 {
        return Err(SpectralError::Not1D(d.dimension()));
    }
    if d.boundary() != crate::domain::Boundary::Periodic {
        return Err(SpectralError::Invalid(
            "traffic scenarios require a periodic domain".into(),
        ));
    }
    Ok(())
}

/// Unit-mass mollified point source at x_k: a periodized Gaussian of width
/// sigma, normalized by quadrature so its grid mass is exactly 1.
fn mollified_delta(
    basis: &Arc<EigenBasis>,
    grid: &GridSpec,
    x_k: f64,
    sigma: f64,
) -> Result<SpectralField, SpectralError> {
    let l = basis.domain().length(0);
    let spacing = l / grid.resolution(0) as f64;
    if !(sigma > 0.0) || sigma < 2.0 * spacing {
        return Err(SpectralError::Invalid(format!(
            "mollifier width sigma = {sigma} under-resolved: need >= 2 grid spacings ({:.3e})",
            2.0 * spacing
        )));
    }
    let gauss = |x: f64| -> f64 {
        // Periodize over enough images to reach machine precision.
        let images = (10.0 * sigma / l).ceil() as i64 + 1;
        let mut s = 0.0;
        for p in -images..=images {
            let d = x - x_k + p as f64 * l;
            s += (-0.5 * (d / sigma).powi(2)).exp();
        }
        s
    };
    let nodes = grid.nodes(0).to_vec();
    let values = Array2::from_shape_fn((nodes.len(), 1), |(i, _)| gauss(nodes[i]));
    let mass = grid.integrate(&values);
    let normalized = values.mapv(|v| v / mass);
    let kernel = crate::grid::GridField::from_values(grid.clone(), vec![normalized]);
    grid.from_grid(&kernel, basis)
}

/// Assemble the scenario forcing. The state-dependent part of Ramp terms
/// (-alpha u) becomes the forcing's damping; smoothing width for gated
/// envelopes is 2 dt so the integrator keeps its order across switches.
pub fn build_source(
    terms: &[SourceTerm],
    basis: &Arc<EigenBasis>,
    dt: f64,
) -> Result<ForcingSpec, SpectralError> {
    require_1d_periodic(basis)?;
    let grid = GridSpec::for_basis(basis);
    let l = basis.domain().length(0);
    let mut damping = 0.0;
    let mut forcing_terms = Vec::new();
    let needs_mean = |what: &str| -> Result<usize, SpectralError> {
        basis.mean_mode().ok_or_else(|| {
            SpectralError::Invalid(format!(
                "{what} injects mass and needs include_mean = true"
            ))
        })
    };
    for term in terms {
        match *term {
            SourceTerm::Ramp { alpha, beta } => {
                if alpha < 0.0 {
                    return Err(SpectralError::Invalid(format!(
                        "ramp relaxation rate must be >= 0, got {alpha}"
                    )));
                }
                damping += alpha;
                if beta != 0.0 {
                    let jc = needs_mean("ramp inflow beta")?;
                    // Constant function beta has coefficient beta sqrt(L)
                    // on the normalized constant mode.
                    let kernel =
                        SpectralField::eigenmode(Arc::clone(basis), 1, 0, jc, beta * l.sqrt())?;
                    forcing_terms.push(ForcingTerm {
                        kernel,
                        envelope: TimeEnvelope::Constant(1.0),
                    });
                }
            }
            SourceTerm::TrafficLight {
                x_k,
                sigma,
                period,
                duty,
                amplitude,
            } => {
                if !(period > 0.0) || !(0.0 < duty && duty < 1.0) {
                    return Err(SpectralError::Invalid(format!(
                        "traffic light needs period > 0 and duty in (0,1), got {period}, {duty}"
                    )));
                }
                if amplitude == 0.0 {
                    continue;
                }
                needs_mean("traffic light kernel")?;
                let kernel = mollified_delta(basis, &grid, x_k, sigma)?.scaled(amplitude);
                forcing_terms.push(ForcingTerm {
                    kernel,
                    envelope: TimeEnvelope::SquareWave {
                        period,
                        duty,
                        smooth: 2.0 * dt,
                    },
                });
            }
            SourceTerm::Pulse {
                x0,
                width,
                amplitude,
                t_on,
                t_off,
            } => {
                if !(t_off > t_on) {
                    return Err(SpectralError::Invalid(format!(
                        "pulse needs t_off > t_on, got [{t_on}, {t_off}]"
                    )));
                }
                if amplitude == 0.0 {
                    continue;
                }
                needs_mean("pulse kernel")?;
                let kernel = mollified_delta(basis, &grid, x0, width)?.scaled(amplitude);
                forcing_terms.push(ForcingTerm {
                    kernel,
                    envelope: TimeEnvelope::Window {
                        t_on,
                        t_off,
                        smooth: 2.0 * dt,
                    },
                });
            }
        }
    }
    if damping == 0.0 && forcing_terms.is_empty() {
        return Ok(ForcingSpec::Zero);
    }
    Ok(ForcingSpec::Scenario(ScenarioForcing {
        terms: forcing_terms,
        damping,
    }))
}

/// Gradient history and classification of a 1D trajectory. A snapshot is
/// shock-steep when its max gradient reaches 5x the initial one; the run is
/// a shock if any snapshot is, a rarefaction if the final gradient fell to
/// half the initial one, else smooth.
pub fn detect_shock(
    trajectory: &Trajectory,
) -> Result<(Vec<Option<f64>>, Vec<f64>, Classification), SpectralError> {
    let basis = trajectory.states[0].basis();
    require_1d_periodic(basis)?;
    let grid = GridSpec::for_basis(basis);
    let nodes = grid.nodes(0).to_vec();
    let mut max_gradient = Vec::with_capacity(trajectory.states.len());
    let mut argmax = Vec::with_capacity(trajectory.states.len());
    for s in &trajectory.states {
        let dv = grid.deriv_values(s, 0, 0)?;
        let mut best = 0.0_f64;
        let mut best_x = nodes[0];
        for (i, &x) in nodes.iter().enumerate() {
            let g = dv[[i, 0]].abs();
            if g > best {
                best = g;
                best_x = x;
            }
        }
        max_gradient.push(best);
        argmax.push(best_x);
    }
    let g0 = max_gradient[0];
    let peak = max_gradient.iter().cloned().fold(0.0, f64::max);
    let g_end = *max_gradient.last().expect("trajectory never empty");
    let classification = if g0 > 1e-14 && peak >= 5.0 * g0 {
        Classification::Shock
    } else if g0 > 1e-14 && g_end <= 0.5 * g0 {
        Classification::Rarefaction
    } else {
        Classification::Smooth
    };
    let shock_position = max_gradient
        .iter()
        .zip(&argmax)
        .map(|(&g, &x)| {
            if g0 > 1e-14 && g >= 5.0 * g0 {
                Some(x)
            } else {
                None
            }
        })
        .collect();
    Ok((shock_position, max_gradient, classification))
}

/// Integrate the scenario and collect the traffic diagnostics.
pub fn run_scenario(
    terms: &[SourceTerm],
    u0: &SpectralField,
    nu: f64,
    config: &SolverConfig,
) -> Result<ScenarioReport, SolverError> {
    require_1d_periodic(u0.basis())?;
    if !u0.basis().domain().include_mean() {
        return Err(SolverError::Spectral(SpectralError::Invalid(
            "traffic scenarios run on include_mean = true domains".into(),
        )));
    }
    let forcing = build_source(terms, u0.basis(), config.dt)?;
    let problem = BurgersProblem::new(nu, u0.clone(), forcing)?;
    let trajectory = integrate(&problem, config)?;
    let (shock_position, max_gradient, classification) = detect_shock(&trajectory)?;
    let means = trajectory.states.iter().map(|s| s.mean()[0]).collect();
    Ok(ScenarioReport {
        trajectory,
        max_gradient,
        shock_position,
        classification,
        means,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::AxisMode;
    use crate::domain::{Boundary, Domain};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn basis_mean(m: usize) -> Arc<EigenBasis> {
        let d = Domain::interval(2.0 * PI, Boundary::Periodic, true).unwrap();
        EigenBasis::build(&d, m).unwrap()
    }

    fn sine_plus(basis: &Arc<EigenBasis>, mean: f64) -> SpectralField {
        let mut u = SpectralField::zeros(Arc::clone(basis), 1).unwrap();
        let j = basis
            .modes()
            .iter()
            .position(|md| md.axes[0] == AxisMode::Sin(1))
            .unwrap();
        u.set_coeff(0, j, PI.sqrt());
        if mean != 0.0 {
            let jc = basis.mean_mode().unwrap();
            u.set_coeff(0, jc, mean * (2.0 * PI).sqrt());
        }
        u
    }

    #[test]
    fn empty_and_inert_sources_are_zero_forcing() {
        let basis = basis_mean(16);
        assert_eq!(
            build_source(&[], &basis, 1e-3).unwrap(),
            ForcingSpec::Zero
        );
        assert_eq!(
            build_source(
                &[SourceTerm::Ramp {
                    alpha: 0.0,
                    beta: 0.0
                }],
                &basis,
                1e-3
            )
            .unwrap(),
            ForcingSpec::Zero
        );
        let light = build_source(
            &[SourceTerm::TrafficLight {
                x_k: PI,
                sigma: 0.3,
                period: 1.0,
                duty: 0.5,
                amplitude: 0.0,
            }],
            &basis,
            1e-3,
        )
        .unwrap();
        assert_eq!(light, ForcingSpec::Zero);
    }

    #[test]
    fn mollified_kernel_has_unit_mass_and_peaks_at_center() {
        let basis = basis_mean(64);
        let grid = GridSpec::for_basis(&basis);
        for sigma in [0.3, 0.15] {
            let k = mollified_delta(&basis, &grid, PI, sigma).unwrap();
            // Mass = sqrt(L) * constant-mode coefficient.
            let jc = basis.mean_mode().unwrap();
            let mass = k.coeff(0, jc) * (2.0 * PI).sqrt();
            assert_relative_eq!(mass, 1.0, epsilon = 1e-10);
            let peak_here = k.eval_at(&[PI])[0];
            let away = k.eval_at(&[PI / 2.0])[0];
            assert!(peak_here > away);
        }
    }

    #[test]
    fn unresolvable_sigma_rejected() {
        let basis = basis_mean(8);
        let grid = GridSpec::for_basis(&basis);
        assert!(mollified_delta(&basis, &grid, PI, 1e-4).is_err());
    }

    #[test]
    fn ramp_mean_converges_to_beta_over_alpha() {
        // The mean obeys m' = -alpha m + beta exactly (the convective term
        // integrates to zero), so m(t) = beta/alpha + (m0 - beta/alpha) e^{-alpha t}.
        let basis = basis_mean(16);
        let alpha = 1.0;
        let beta = 0.3;
        let u0 = sine_plus(&basis, 0.31);
        let config = SolverConfig::new(16, 0.005, 4.0);
        let report = run_scenario(
            &[SourceTerm::Ramp { alpha, beta }],
            &u0,
            0.2,
            &config,
        )
        .unwrap();
        for (t, m) in report.trajectory.times.iter().zip(&report.means) {
            let expected = beta / alpha + (0.31 - beta / alpha) * (-alpha * t).exp();
            assert_relative_eq!(*m, expected, epsilon = 1e-8);
        }
    }

    #[test]
    fn uniform_state_with_ramp_approaches_fixed_point() {
        let basis = basis_mean(16);
        let mut uniform = SpectralField::zeros(Arc::clone(&basis), 1).unwrap();
        let jc = basis.mean_mode().unwrap();
        uniform.set_coeff(0, jc, 0.8 * (2.0 * PI).sqrt());
        let config = SolverConfig::new(16, 0.005, 3.0);
        let report = run_scenario(
            &[SourceTerm::Ramp {
                alpha: 2.0,
                beta: 1.0,
            }],
            &uniform,
            0.1,
            &config,
        )
        .unwrap();
        let t_end = report.trajectory.final_time();
        let expected = 0.5 + (0.8 - 0.5) * (-2.0 * t_end).exp();
        assert_relative_eq!(*report.means.last().unwrap(), expected, epsilon = 1e-10);
        assert_eq!(report.classification, Classification::Smooth);
    }

    #[test]
    fn sine_steepens_into_shock_at_pi() {
        let basis = basis_mean(128);
        let u0 = sine_plus(&basis, 0.0);
        let config = SolverConfig::new(128, 1e-3, 1.5);
        let report = run_scenario(&[], &u0, 0.02, &config).unwrap();
        assert_eq!(report.classification, Classification::Shock);
        let grid = GridSpec::for_basis(report.trajectory.states[0].basis());
        let cell = 2.0 * PI / grid.resolution(0) as f64;
        let last_pos = report
            .shock_position
            .iter()
            .rev()
            .find_map(|p| *p)
            .expect("a shock-steep snapshot exists");
        assert!(
            (last_pos - PI).abs() <= cell + 1e-12,
            "front at {last_pos}, expected near {PI} (cell {cell})"
        );
    }

    #[test]
    fn smoothed_step_down_rarefies() {
        // Smoothed step down from +0.5 to -0.5 at x = pi (with the
        // complementary jump at the periodic wrap). At this viscosity the
        // smoothing wins over convective steepening and the gradient peak
        // decays below half its initial value.
        let basis = basis_mean(64);
        let grid = GridSpec::for_basis(&basis);
        let nodes = grid.nodes(0).to_vec();
        let w = 0.4;
        let values = Array2::from_shape_fn((nodes.len(), 1), |(i, _)| {
            let x = nodes[i];
            0.5 * (-((x - PI) / w).tanh() + ((x - 2.0 * PI) / w).tanh() + (x / w).tanh())
        });
        let gf = crate::grid::GridField::from_values(grid.clone(), vec![values]);
        let u0 = grid.from_grid(&gf, &basis).unwrap();
        let config = SolverConfig::new(64, 1e-3, 1.5);
        let report = run_scenario(&[], &u0, 0.3, &config).unwrap();
        assert_eq!(report.classification, Classification::Rarefaction);
        assert!(report.max_gradient.last().unwrap() < &report.max_gradient[0]);
    }

    #[test]
    fn viscosity_sweep_gradient_monotonicity() {
        let basis = basis_mean(128);
        let u0 = sine_plus(&basis, 0.0);
        let config = SolverConfig::new(128, 1e-3, 1.5);
        let mut grads = Vec::new();
        for nu in [0.1, 0.05, 0.025] {
            let report = run_scenario(&[], &u0, nu, &config).unwrap();
            grads.push(*report.max_gradient.last().unwrap());
        }
        assert!(
            grads[0] < grads[1] && grads[1] < grads[2],
            "gradients should increase as nu decreases: {grads:?}"
        );
    }

    #[test]
    fn frozen_linear_decay_is_smooth() {
        let basis = basis_mean(32);
        let u0 = sine_plus(&basis, 0.0);
        let mut config = SolverConfig::new(32, 0.005, 1.0);
        config.suppress_nonlinearity = true;
        let problem = BurgersProblem::new(0.3, u0, ForcingSpec::Zero).unwrap();
        let traj = integrate(&problem, &config).unwrap();
        let (_, grads, class) = detect_shock(&traj).unwrap();
        assert_eq!(class, Classification::Smooth);
        for w in grads.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn traffic_light_kernel_mass_injection() {
        // With only a traffic light, d/dt mean = amplitude/L during red.
        let basis = basis_mean(32);
        let u0 = SpectralField::zeros(Arc::clone(&basis), 1).unwrap();
        let config = SolverConfig::new(32, 1e-3, 0.4);
        let report = run_scenario(
            &[SourceTerm::TrafficLight {
                x_k: PI,
                sigma: 0.3,
                period: 10.0,
                duty: 0.5,
                amplitude: 0.2,
            }],
            &u0,
            0.1,
            &config,
        )
        .unwrap();
        // Entirely within the red phase: mean grows ~ linearly at rate
        // amplitude / L (envelope ramps over 2dt at the start).
        let t_end = report.trajectory.final_time();
        let expected = 0.2 / (2.0 * PI) * t_end;
        assert_relative_eq!(
            *report.means.last().unwrap(),
            expected,
            epsilon = 1e-3
        );
    }

    #[test]
    fn scenarios_reject_mean_excluded_domains() {
        let d = Domain::interval(2.0 * PI, Boundary::Periodic, false).unwrap();
        let basis = EigenBasis::build(&d, 8).unwrap();
        let u0 = SpectralField::eigenmode(Arc::clone(&basis), 1, 0, 1, 1.0).unwrap();
        assert!(run_scenario(
            &[],
            &u0,
            0.1,
            &SolverConfig::new(8, 0.01, 0.1)
        )
        .is_err());
        assert!(build_source(
            &[SourceTerm::Ramp {
                alpha: 0.5,
                beta: 0.2
            }],
            &basis,
            1e-3
        )
        .is_err());
    }
}
