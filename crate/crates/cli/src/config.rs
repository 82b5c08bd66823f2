//! Strict TOML run configuration: unknown keys are rejected, all defaults
//! are resolved at parse time and echoed back into manifests, and physical
//! validation (positivity of nu, dt, ...) is reported separately from
//! syntax errors.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use burgers_core::{
    Boundary, BurgersProblem, Domain, EigenBasis, ForcingSpec, GridField, GridSpec, Integrator,
    SolverConfig, SourceTerm, SpectralField,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    /// Document does not conform to the schema (TOML syntax, unknown keys,
    /// wrong types). The message carries the offending path/line.
    #[error("config syntax error: {0}")]
    Syntax(String),
    /// Schema-valid document with physically inadmissible values.
    #[error("config validation error in `{field}`: {message}")]
    Physics { field: String, message: String },
    #[error(transparent)]
    Core(#[from] burgers_core::SpectralError),
    #[error(transparent)]
    Solver(#[from] burgers_core::SolverError),
}

fn physics(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Physics {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    /// One entry for 1D, two for 2D rectangles.
    pub lengths: Vec<f64>,
    pub boundary: BoundaryConfig,
    #[serde(default)]
    pub include_mean: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryConfig {
    Periodic,
    Dirichlet,
}

impl From<BoundaryConfig> for Boundary {
    fn from(b: BoundaryConfig) -> Self {
        match b {
            BoundaryConfig::Periodic => Boundary::Periodic,
            BoundaryConfig::Dirichlet => Boundary::Dirichlet,
        }
    }
}

/// A spatial field given by a named preset or explicit coefficients.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, tag = "preset", rename_all = "snake_case")]
pub enum FieldSpec {
    /// amplitude * sin(k 2 pi x / L) (periodic) or amplitude * sin(k pi x / L)
    /// (Dirichlet); 1D only.
    Sine {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one_u32")]
        wavenumber: u32,
    },
    /// Smoothed step down by `height` at `center` (with the complementary
    /// periodic wrap jump), transition width `width`; 1D periodic only.
    /// `mean` offsets the profile and requires include_mean.
    SmoothedStep {
        #[serde(default = "one")]
        height: f64,
        width: f64,
        center: f64,
        #[serde(default)]
        mean: f64,
    },
    /// Seeded random coefficients a_j = amplitude * u_j / (1 + lambda_j)
    /// on the first `max_mode` modes, u_j uniform in [-1, 1].
    RandomBand {
        seed: u64,
        max_mode: usize,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Explicit coefficient lists, one inner list per component.
    Coefficients { values: Vec<Vec<f64>> },
}

fn one() -> f64 {
    1.0
}
fn one_u32() -> u32 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub nu: f64,
    pub initial: FieldSpec,
    /// Time-independent forcing; omit for f = 0.
    #[serde(default)]
    pub forcing: Option<FieldSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub m: usize,
    pub dt: f64,
    pub t_end: f64,
    pub integrator: IntegratorConfig,
    pub record_every: usize,
    pub suppress_nonlinearity: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            m: 64,
            dt: 1e-3,
            t_end: 1.0,
            integrator: IntegratorConfig::Ifrk4,
            record_every: 1,
            suppress_nonlinearity: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorConfig {
    Ifrk4,
    Ifeuler,
}

impl From<IntegratorConfig> for Integrator {
    fn from(i: IntegratorConfig) -> Self {
        match i {
            IntegratorConfig::Ifrk4 => Integrator::IfRk4,
            IntegratorConfig::Ifeuler => Integrator::IfEuler,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSection {
    /// Truncations for `converge` (each paired with its doubling).
    pub m_list: Vec<usize>,
    /// Uniform-Gronwall window; 0 means t_end / 10.
    pub window: f64,
    /// Sample count and seed for fitted inequality constants.
    pub fit_samples: usize,
    pub fit_seed: u64,
    /// Uniqueness experiment perturbation: scale and seed.
    pub perturbation_scale: f64,
    pub perturbation_seed: u64,
    /// Time steps for `oracle-check` refinement.
    pub dt_list: Vec<f64>,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            m_list: vec![8, 16, 32],
            window: 0.0,
            fit_samples: 500,
            fit_seed: 20_240_601,
            perturbation_scale: 1e-3,
            perturbation_seed: 7,
            dt_list: vec![2e-3, 1e-3],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    #[serde(default)]
    pub sources: Vec<SourceConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "snake_case")]
pub enum SourceConfig {
    Ramp {
        alpha: f64,
        beta: f64,
    },
    TrafficLight {
        x_k: f64,
        sigma: f64,
        period: f64,
        duty: f64,
        amplitude: f64,
    },
    Pulse {
        x0: f64,
        width: f64,
        amplitude: f64,
        t_on: f64,
        t_off: f64,
    },
}

impl From<&SourceConfig> for SourceTerm {
    fn from(s: &SourceConfig) -> Self {
        match *s {
            SourceConfig::Ramp { alpha, beta } => SourceTerm::Ramp { alpha, beta },
            SourceConfig::TrafficLight {
                x_k,
                sigma,
                period,
                duty,
                amplitude,
            } => SourceTerm::TrafficLight {
                x_k,
                sigma,
                period,
                duty,
                amplitude,
            },
            SourceConfig::Pulse {
                x0,
                width,
                amplitude,
                t_on,
                t_off,
            } => SourceTerm::Pulse {
                x0,
                width,
                amplitude,
                t_on,
                t_off,
            },
        }
    }
}

/// The full, strict configuration document with every default resolved.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub domain: DomainConfig,
    pub problem: ProblemConfig,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub scenario: Option<ScenarioSection>,
}

impl RunConfig {
    /// Parse and validate a config document. Syntax errors (including
    /// unknown keys) and physical validation errors are distinguished.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig =
            toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Serialize the resolved configuration (all defaults filled in).
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("resolved config always serializable")
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let d = &self.domain;
        if d.lengths.is_empty() || d.lengths.len() > 2 {
            return Err(physics(
                "domain.lengths",
                format!("need 1 or 2 lengths, got {}", d.lengths.len()),
            ));
        }
        for (i, &l) in d.lengths.iter().enumerate() {
            if !(l > 0.0) || !l.is_finite() {
                return Err(physics(
                    &format!("domain.lengths[{i}]"),
                    format!("must be positive and finite, got {l}"),
                ));
            }
        }
        if d.include_mean && d.boundary == BoundaryConfig::Dirichlet {
            return Err(physics(
                "domain.include_mean",
                "the constant mode exists only with periodic boundaries",
            ));
        }
        if !(self.problem.nu > 0.0) || !self.problem.nu.is_finite() {
            return Err(physics(
                "problem.nu",
                format!("viscosity must be strictly positive, got {}", self.problem.nu),
            ));
        }
        let s = &self.solver;
        if s.m == 0 {
            return Err(physics("solver.m", "truncation must be >= 1"));
        }
        if !(s.dt > 0.0) || !s.dt.is_finite() {
            return Err(physics(
                "solver.dt",
                format!("time step must be strictly positive, got {}", s.dt),
            ));
        }
        if !(s.t_end >= 0.0) || !s.t_end.is_finite() {
            return Err(physics(
                "solver.t_end",
                format!("final time must be nonnegative, got {}", s.t_end),
            ));
        }
        let e = &self.experiment;
        if e.m_list.is_empty() || e.m_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(physics(
                "experiment.m_list",
                "must be nonempty and strictly increasing",
            ));
        }
        if e.dt_list.is_empty() || e.dt_list.iter().any(|&dt| !(dt > 0.0)) {
            return Err(physics(
                "experiment.dt_list",
                "must be nonempty with positive entries",
            ));
        }
        if e.window < 0.0 {
            return Err(physics("experiment.window", "must be nonnegative"));
        }
        for spec in std::iter::once(&self.problem.initial).chain(self.problem.forcing.iter()) {
            self.validate_field_spec(spec)?;
        }
        Ok(())
    }

    fn validate_field_spec(&self, spec: &FieldSpec) -> Result<(), ConfigError> {
        let dim = self.domain.lengths.len();
        match spec {
            FieldSpec::Sine { wavenumber, .. } => {
                if dim != 1 {
                    return Err(physics("problem.*.preset", "sine preset is 1D-only"));
                }
                if *wavenumber == 0 {
                    return Err(physics("problem.*.wavenumber", "must be >= 1"));
                }
            }
            FieldSpec::SmoothedStep { width, mean, .. } => {
                if dim != 1 || self.domain.boundary != BoundaryConfig::Periodic {
                    return Err(physics(
                        "problem.*.preset",
                        "smoothed_step preset is 1D periodic only",
                    ));
                }
                if !(*width > 0.0) {
                    return Err(physics("problem.*.width", "must be positive"));
                }
                if *mean != 0.0 && !self.domain.include_mean {
                    return Err(physics(
                        "problem.*.mean",
                        "a mean offset requires domain.include_mean = true",
                    ));
                }
            }
            FieldSpec::RandomBand { max_mode, .. } => {
                if *max_mode == 0 || *max_mode > self.solver.m {
                    return Err(physics(
                        "problem.*.max_mode",
                        format!("must be in 1..=solver.m = {}", self.solver.m),
                    ));
                }
            }
            FieldSpec::Coefficients { values } => {
                if values.len() != dim {
                    return Err(physics(
                        "problem.*.values",
                        format!("need {dim} component list(s), got {}", values.len()),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> Result<Domain, ConfigError> {
        Ok(Domain::new(
            self.domain.lengths.clone(),
            self.domain.boundary.into(),
            self.domain.include_mean,
        )?)
    }

    /// The full-resolution basis (solver truncation plus headroom for
    /// refinement studies when requested).
    pub fn build_basis(&self, m: usize) -> Result<Arc<EigenBasis>, ConfigError> {
        Ok(EigenBasis::build(&self.domain()?, m)?)
    }

    /// Realize a field spec on the given basis.
    pub fn build_field(
        &self,
        spec: &FieldSpec,
        basis: &Arc<EigenBasis>,
    ) -> Result<SpectralField, ConfigError> {
        let dim = basis.domain().dimension();
        let l = basis.domain().length(0);
        match spec {
            FieldSpec::Sine {
                amplitude,
                wavenumber,
            } => {
                let target = burgers_core::AxisMode::Sin(*wavenumber);
                let j = basis
                    .modes()
                    .iter()
                    .position(|md| md.axes[0] == target)
                    .ok_or_else(|| {
                        physics(
                            "problem.*.wavenumber",
                            format!("mode sin({wavenumber}) not within truncation"),
                        )
                    })?;
                // amplitude * sin = amplitude * sqrt(L/2) * normalized mode.
                Ok(SpectralField::eigenmode(
                    Arc::clone(basis),
                    1,
                    0,
                    j,
                    amplitude * (l / 2.0).sqrt(),
                )?)
            }
            FieldSpec::SmoothedStep {
                height,
                width,
                center,
                mean,
            } => {
                let grid = GridSpec::for_basis(basis);
                let nodes = grid.nodes(0).to_vec();
                let w = *width;
                let c = *center;
                // Step down by `height` at x = c with the complementary
                // wrap jump at the periodic boundary.
                let values = ndarray::Array2::from_shape_fn((nodes.len(), 1), |(i, _)| {
                    let x = nodes[i];
                    mean + 0.5
                        * height
                        * (-((x - c) / w).tanh() + ((x - l) / w).tanh() + (x / w).tanh())
                });
                let gf = GridField::from_values(grid.clone(), vec![values]);
                if basis.mean_mode().is_some() {
                    Ok(grid.from_grid(&gf, basis)?)
                } else {
                    // Drop the (near-zero) sampled mean explicitly.
                    Ok(grid.project_onto(&gf, basis)?)
                }
            }
            FieldSpec::RandomBand {
                seed,
                max_mode,
                amplitude,
            } => {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
                let mut f = SpectralField::zeros(Arc::clone(basis), dim)?;
                for c in 0..dim {
                    for j in 0..*max_mode.min(&basis.len()) {
                        let v = amplitude * rng.gen_range(-1.0..=1.0) / (1.0 + basis.lambda(j));
                        f.set_coeff(c, j, v);
                    }
                }
                Ok(f)
            }
            FieldSpec::Coefficients { values } => {
                let m = basis.len();
                let mut coeffs = vec![0.0; dim * m];
                for (c, list) in values.iter().enumerate() {
                    if list.len() > m {
                        return Err(physics(
                            "problem.*.values",
                            format!("component {c} has {} coefficients, basis has {m}", list.len()),
                        ));
                    }
                    coeffs[c * m..c * m + list.len()].copy_from_slice(list);
                }
                Ok(SpectralField::from_coeffs(Arc::clone(basis), dim, coeffs)?)
            }
        }
    }

    /// Assemble the solver problem on a basis of at least `min_m` modes.
    pub fn build_problem(&self, min_m: usize) -> Result<BurgersProblem, ConfigError> {
        let basis = self.build_basis(min_m.max(self.solver.m))?;
        let u0 = self.build_field(&self.problem.initial, &basis)?;
        let forcing = match &self.problem.forcing {
            None => ForcingSpec::Zero,
            Some(spec) => ForcingSpec::Constant(self.build_field(spec, &basis)?),
        };
        Ok(BurgersProblem::new(self.problem.nu, u0, forcing)?)
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            m: self.solver.m,
            dt: self.solver.dt,
            t_end: self.solver.t_end,
            integrator: self.solver.integrator.into(),
            record_every: self.solver.record_every,
            suppress_nonlinearity: self.solver.suppress_nonlinearity,
        }
    }

    pub fn source_terms(&self) -> Vec<SourceTerm> {
        self.scenario
            .as_ref()
            .map(|s| s.sources.iter().map(SourceTerm::from).collect())
            .unwrap_or_default()
    }

    /// Uniform-Gronwall window with the 0 = t_end/10 default applied.
    pub fn window(&self) -> f64 {
        if self.experiment.window > 0.0 {
            self.experiment.window
        } else {
            self.solver.t_end / 10.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[domain]
lengths = [6.283185307179586]
boundary = "periodic"

[problem]
nu = 0.1
[problem.initial]
preset = "sine"

[solver]
t_end = 1.0
"#;

    #[test]
    fn minimal_config_resolves_defaults() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.solver.m, 64);
        assert_eq!(c.solver.dt, 1e-3);
        assert_eq!(c.solver.integrator, IntegratorConfig::Ifrk4);
        assert_eq!(c.experiment.m_list, vec![8, 16, 32]);
        let echo = c.to_toml();
        let reparsed = RunConfig::parse(&echo).unwrap();
        assert_eq!(c, reparsed);
    }

    #[test]
    fn unknown_keys_are_syntax_errors() {
        let bad = MINIMAL.replace("[solver]", "[solver]\nnotakey = 3");
        match RunConfig::parse(&bad) {
            Err(ConfigError::Syntax(msg)) => assert!(msg.contains("notakey"), "{msg}"),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn negative_viscosity_is_a_physics_error_naming_the_field() {
        let bad = MINIMAL.replace("nu = 0.1", "nu = -1.0");
        match RunConfig::parse(&bad) {
            Err(ConfigError::Physics { field, .. }) => assert_eq!(field, "problem.nu"),
            other => panic!("expected physics error, got {other:?}"),
        }
    }

    #[test]
    fn random_band_requires_seed() {
        let bad = MINIMAL.replace(
            "preset = \"sine\"",
            "preset = \"random_band\"\nmax_mode = 8",
        );
        assert!(matches!(RunConfig::parse(&bad), Err(ConfigError::Syntax(_))));
    }

    #[test]
    fn sine_field_realizes_the_right_coefficient() {
        let c = RunConfig::parse(MINIMAL).unwrap();
        let basis = c.build_basis(16).unwrap();
        let u = c.build_field(&c.problem.initial, &basis).unwrap();
        // sin x on (0, 2pi): coefficient sqrt(pi) on the normalized mode.
        let j = basis
            .modes()
            .iter()
            .position(|md| md.axes[0] == burgers_core::AxisMode::Sin(1))
            .unwrap();
        assert!((u.coeff(0, j) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((u.eval_at(&[1.0])[0] - 1.0f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn repeated_parses_are_identical() {
        let a = RunConfig::parse(MINIMAL).unwrap();
        let b = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_toml(), b.to_toml());
    }
}
