//! Spectral Faedo-Galerkin solver for the viscous Burgers equation on
//! rectangles (1D scalar, 2D vector; Dirichlet or periodic), together with
//! an estimates laboratory that checks energy, regularity, and uniqueness
//! bounds numerically, and a traffic-flow scenario layer.

pub mod basis;
pub mod domain;
pub mod error;
pub mod estimates;
pub mod field;
pub mod grid;
pub mod operators;
pub mod quadrature;
pub mod solver;
pub mod traffic;

pub use basis::{AxisMode, EigenBasis, Mode};
pub use domain::{Boundary, Domain};
pub use error::{SolverError, SpectralError};
pub use field::{Norms, SpectralField};
pub use grid::{GridField, GridSpec};
pub use operators::{
    apply_a, apply_b, div_weighted_sq_integral, divergence, trilinear_b, trilinear_b_quadrature,
    TrilinearMethod, TrilinearResult,
};
pub use estimates::cole_hopf::cole_hopf_oracle;
pub use estimates::experiments::{
    continuous_dependence_experiment, convergence_study, uniqueness_experiment, DependenceReport,
};
pub use estimates::gronwall::{
    enstrophy_trace, enstrophy_trace_default_window, energy_decay_bound, uniform_gronwall_bound,
    GronwallData,
};
pub use estimates::inequalities::{
    agmon_ratio, agmon_ratio_on, divergent_sequence_member, poincare_ratio,
};
pub use estimates::{
    fit_agmon_constant, fit_l4_constant, random_field_family, AgmonVariant, BoundReport,
    FittedConstant,
};
pub use solver::{
    galerkin_pair, integrate, rhs, BurgersProblem, ForcingSpec, ForcingTerm, Integrator,
    ScenarioForcing, SolverConfig, StepDiagnostics, TimeEnvelope, Trajectory,
};
pub use traffic::{
    build_source, detect_shock, run_scenario, Classification, ScenarioReport, SourceTerm,
};
