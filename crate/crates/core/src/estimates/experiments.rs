//! Paired-run experiments: uniqueness (perturbed initial data against the
//! exponential Gronwall envelope), continuous dependence on the forcing,
//! and truncation-refinement convergence studies.

use crate::error::{SolverError, SpectralError};
use crate::estimates::{BoundReport, FittedConstant};
use crate::solver::{
    galerkin_pair, integrate, BurgersProblem, ForcingSpec, SolverConfig, Trajectory,
};

fn sup_l2_difference(t1: &Trajectory, t2: &Trajectory) -> Result<Vec<f64>, SpectralError> {
    t1.states
        .iter()
        .zip(&t2.states)
        .map(|(a, b)| Ok(a.sub(b)?.l2_norm()))
        .collect()
}

/// Run u1 from u0 + perturbation and u2 from u0 on identical grids;
/// measured is |u1 - u2|^2 per snapshot, bounded by
/// |perturbation|^2 exp((c^2/nu) int_0^t |u2|_V^2 ds) with c the fitted
/// L4 interpolation constant (the exponent has a factor-4 margin over the
/// Young-inequality derivation, so the fitted c carries ample slack).
pub fn uniqueness_experiment(
    problem: &BurgersProblem,
    perturbation: &crate::field::SpectralField,
    config: &SolverConfig,
    l4_constant: &FittedConstant,
) -> Result<BoundReport, SolverError> {
    let pert_norm = perturbation.l2_norm();
    let base_norm = problem.u0.l2_norm();
    if pert_norm > 1e-2 * base_norm.max(1e-300) && pert_norm > 0.0 {
        return Err(SolverError::Spectral(SpectralError::Invalid(format!(
            "perturbation too large: |p| = {pert_norm:e} vs 1e-2 |u0| = {:e}",
            1e-2 * base_norm
        ))));
    }
    let perturbed = BurgersProblem::new(
        problem.nu,
        problem.u0.add(perturbation)?,
        problem.forcing.clone(),
    )?;
    let t1 = integrate(&perturbed, config)?;
    let t2 = integrate(problem, config)?;
    let diffs = sup_l2_difference(&t1, &t2)?;
    let measured: Vec<f64> = diffs.iter().map(|d| d * d).collect();

    // Cumulative trapezoid of |u2|_V^2 along snapshots.
    let c_sq = l4_constant.value * l4_constant.value;
    let mut bound = Vec::with_capacity(t2.times.len());
    let mut integral = 0.0;
    let pert_sq = pert_norm * pert_norm;
    for i in 0..t2.times.len() {
        if i > 0 {
            integral += 0.5
                * (t2.times[i] - t2.times[i - 1])
                * (t2.diagnostics[i - 1].v_sq + t2.diagnostics[i].v_sq);
        }
        bound.push(pert_sq * (c_sq / problem.nu * integral).exp());
    }
    let scale = bound.iter().cloned().fold(0.0, f64::max).max(1e-300);
    Ok(BoundReport::from_series(
        "uniqueness",
        t2.times.clone(),
        measured,
        bound,
        1e-8 * scale,
        vec![l4_constant.clone()],
    )?)
}

/// Outcome of the forcing-perturbation experiment.
#[derive(Debug, Clone)]
pub struct DependenceReport {
    pub times: Vec<f64>,
    /// |u_{f + delta_f} - u_f| per snapshot.
    pub diff_l2: Vec<f64>,
    pub sup_diff: f64,
    pub delta_f_norm: f64,
    /// sup_diff / |delta_f|.
    pub response_ratio: f64,
}

/// Run with f and f + delta_f; report the L2 difference history and the
/// linear-response ratio.
pub fn continuous_dependence_experiment(
    problem: &BurgersProblem,
    delta_f: &crate::field::SpectralField,
    config: &SolverConfig,
) -> Result<DependenceReport, SolverError> {
    let base_f = match &problem.forcing {
        ForcingSpec::Zero => delta_f.scaled(0.0),
        ForcingSpec::Constant(f) => f.clone(),
        ForcingSpec::Scenario(_) => {
            return Err(SolverError::Spectral(SpectralError::Invalid(
                "dependence experiment requires time-independent forcing".into(),
            )))
        }
    };
    let shifted = BurgersProblem::new(
        problem.nu,
        problem.u0.clone(),
        ForcingSpec::Constant(base_f.add(delta_f)?),
    )?;
    let t1 = integrate(&shifted, config)?;
    let t2 = integrate(problem, config)?;
    let diff_l2 = sup_l2_difference(&t1, &t2)?;
    let sup_diff = diff_l2.iter().cloned().fold(0.0, f64::max);
    let delta_f_norm = delta_f.l2_norm();
    Ok(DependenceReport {
        times: t2.times.clone(),
        diff_l2,
        sup_diff,
        delta_f_norm,
        response_ratio: if delta_f_norm > 0.0 {
            sup_diff / delta_f_norm
        } else {
            0.0
        },
    })
}

/// Table of (m, |u_m - u_{2m}| at t_end) for each m in the increasing list.
pub fn convergence_study(
    problem: &BurgersProblem,
    config: &SolverConfig,
    m_list: &[usize],
) -> Result<Vec<(usize, f64)>, SolverError> {
    if m_list.windows(2).any(|w| w[1] <= w[0]) || m_list.is_empty() {
        return Err(SolverError::Spectral(SpectralError::Invalid(
            "m_list must be nonempty and strictly increasing".into(),
        )));
    }
    let available = problem.u0.basis().len();
    let max_m = *m_list.last().expect("nonempty");
    if 2 * max_m > available {
        return Err(SolverError::Spectral(SpectralError::TruncationTooLarge {
            requested: 2 * max_m,
            available,
        }));
    }
    let mut table = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let (t1, t2) = galerkin_pair(problem, config, m, 2 * m)?;
        let coarse = t1.final_state().embed(t2.final_state().basis())?;
        let err = coarse.sub(t2.final_state())?.l2_norm();
        table.push((m, err));
    }
    Ok(table)
}
