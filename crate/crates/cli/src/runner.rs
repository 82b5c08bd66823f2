//! Orchestration of the CLI subcommands: build the problem from a config,
//! run the requested experiment, emit CSVs and the reproducibility manifest.

use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};

use burgers_core::{
    cole_hopf_oracle, convergence_study, enstrophy_trace, fit_agmon_constant, fit_l4_constant,
    energy_decay_bound, integrate, random_field_family, run_scenario, uniqueness_experiment,
    AgmonVariant, BoundReport, Classification, EigenBasis,
};

use crate::config::{ConfigError, RunConfig};
use crate::csv_out;
use crate::manifest::{ManifestConstant, RunManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Solve,
    Converge,
    VerifyBounds,
    Traffic,
    OracleCheck,
}

impl Subcommand {
    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::Solve => "solve",
            Subcommand::Converge => "converge",
            Subcommand::VerifyBounds => "verify-bounds",
            Subcommand::Traffic => "traffic",
            Subcommand::OracleCheck => "oracle-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    BoundViolation,
}

/// Run a subcommand against a parsed config, writing outputs into out_dir.
pub fn run(
    cmd: Subcommand,
    config: &RunConfig,
    out_dir: &Path,
    threads: Option<usize>,
) -> Result<Outcome> {
    let start = Instant::now();
    let mut manifest = RunManifest::new(cmd.name(), config.to_toml());
    let emit = |manifest: &mut RunManifest, name: &str, contents: &str| -> Result<()> {
        csv_out::emit(out_dir, name, contents)
            .with_context(|| format!("writing {name} into {}", out_dir.display()))?;
        manifest.record_output(name, contents);
        Ok(())
    };

    let outcome = match cmd {
        Subcommand::Solve => {
            let problem = config.build_problem(config.solver.m)?;
            let traj = integrate(&problem, &config.solver_config())?;
            emit(&mut manifest, "trajectory.csv", &csv_out::trajectory_csv(&traj))?;
            emit(&mut manifest, "state.csv", &csv_out::state_csv(&traj))?;
            Outcome::Clean
        }
        Subcommand::Converge => {
            let m_list = config.experiment.m_list.clone();
            let max_m = 2 * *m_list.last().expect("validated nonempty");
            let problem = config.build_problem(max_m)?;
            let solver = config.solver_config();
            let table = match threads {
                // Parallel sweep: one paired run per m, merged in m-order.
                Some(n) if n > 1 => {
                    use rayon::prelude::*;
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build()
                        .context("building worker pool")?;
                    let mut rows: Vec<(usize, f64)> = pool.install(|| {
                        m_list
                            .par_iter()
                            .map(|&m| {
                                convergence_study(&problem, &solver, &[m])
                                    .map(|t| t[0])
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })?;
                    rows.sort_by_key(|&(m, _)| m);
                    rows
                }
                _ => convergence_study(&problem, &solver, &m_list)?,
            };
            emit(&mut manifest, "converge.csv", &csv_out::converge_csv(&table))?;
            Outcome::Clean
        }
        Subcommand::VerifyBounds => {
            let problem = config.build_problem(config.solver.m)?;
            let traj = integrate(&problem, &config.solver_config())?;
            let basis = traj.states[0].basis().clone();
            let e = &config.experiment;
            let agmon = fit_agmon_constant(&basis, AgmonVariant::H2, e.fit_samples, e.fit_seed)?;
            let l4 = fit_l4_constant(&basis, e.fit_samples, e.fit_seed)?;

            let energy = energy_decay_bound(&traj, &problem)?;
            let enstrophy = enstrophy_trace(&traj, &problem, &agmon, config.window())?;
            let perturbation = build_perturbation(config, &basis)?;
            let uniqueness =
                uniqueness_experiment(&problem, &perturbation, &config.solver_config(), &l4)?;

            emit(&mut manifest, "energy_bound.csv", &csv_out::bound_csv(&energy))?;
            emit(
                &mut manifest,
                "enstrophy_bound.csv",
                &csv_out::bound_csv(&enstrophy),
            )?;
            emit(
                &mut manifest,
                "uniqueness_bound.csv",
                &csv_out::bound_csv(&uniqueness),
            )?;
            for report in [&energy, &enstrophy, &uniqueness] {
                for c in &report.constants {
                    let mc = ManifestConstant::from(c);
                    if !manifest.constants.contains(&mc) {
                        manifest.constants.push(mc);
                    }
                }
            }
            if [&energy, &enstrophy, &uniqueness]
                .iter()
                .any(|r: &&BoundReport| r.violated)
            {
                Outcome::BoundViolation
            } else {
                Outcome::Clean
            }
        }
        Subcommand::Traffic => {
            let Some(_) = &config.scenario else {
                bail!(ConfigError::Physics {
                    field: "scenario".into(),
                    message: "traffic subcommand needs a [scenario] section".into(),
                });
            };
            let basis = config.build_basis(config.solver.m)?;
            let u0 = config.build_field(&config.problem.initial, &basis)?;
            let report = run_scenario(
                &config.source_terms(),
                &u0,
                config.problem.nu,
                &config.solver_config(),
            )?;
            emit(&mut manifest, "scenario.csv", &csv_out::scenario_csv(&report))?;
            emit(
                &mut manifest,
                "trajectory.csv",
                &csv_out::trajectory_csv(&report.trajectory),
            )?;
            let classification = match report.classification {
                Classification::Shock => "shock",
                Classification::Rarefaction => "rarefaction",
                Classification::Smooth => "smooth",
            };
            emit(
                &mut manifest,
                "classification.csv",
                &format!("classification\n{classification}\n"),
            )?;
            Outcome::Clean
        }
        Subcommand::OracleCheck => {
            if config.problem.forcing.is_some() {
                bail!(ConfigError::Physics {
                    field: "problem.forcing".into(),
                    message: "the exact-solution oracle covers unforced runs only".into(),
                });
            }
            // A finer basis absorbs the oracle's spectral tail so the table
            // isolates the time-stepping error.
            let target = config.build_basis(2 * config.solver.m)?;
            let problem = config.build_problem(config.solver.m)?;
            let exact = cole_hopf_oracle(
                &problem.u0,
                problem.nu,
                config.solver.t_end,
                &target,
                None,
            )?;
            let mut table = Vec::new();
            for &dt in &config.experiment.dt_list {
                let mut solver = config.solver_config();
                solver.dt = dt;
                solver.record_every = usize::MAX;
                let traj = integrate(&problem, &solver)?;
                let approx = traj.final_state().embed(&target)?;
                table.push((dt, approx.sub(&exact)?.l2_norm()));
            }
            emit(&mut manifest, "oracle.csv", &csv_out::oracle_csv(&table))?;
            Outcome::Clean
        }
    };

    manifest.bound_violation = outcome == Outcome::BoundViolation;
    manifest.wall_time_seconds = start.elapsed().as_secs_f64();
    manifest
        .write(out_dir)
        .with_context(|| format!("writing manifest into {}", out_dir.display()))?;
    Ok(outcome)
}

/// Seeded perturbation for the uniqueness experiment, scaled relative to u0.
fn build_perturbation(
    config: &RunConfig,
    basis: &std::sync::Arc<EigenBasis>,
) -> Result<burgers_core::SpectralField, ConfigError> {
    let e = &config.experiment;
    let raw = random_field_family(basis, basis.domain().dimension(), 1, e.perturbation_seed)
        .pop()
        .expect("one field requested");
    let u0 = config.build_field(&config.problem.initial, basis)?;
    let norm = raw.l2_norm();
    if norm == 0.0 {
        return Ok(raw);
    }
    Ok(raw.scaled(e.perturbation_scale * u0.l2_norm().max(1.0) / norm))
}
