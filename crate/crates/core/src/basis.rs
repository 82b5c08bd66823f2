//! Eigenbases of the operator A on rectangles.
//!
//! A is the unbounded operator with (Au, v) = (u, v)_V, i.e. the negative
//! Laplacian with the chosen boundary conditions. Its eigenfunctions on a
//! rectangle are real trigonometric tensor products:
//!
//! - Dirichlet axis: sqrt(2/L) sin(k pi x / L), eigenvalue contribution
//!   (k pi / L)^2, so lambda_{k,l} = pi^2 (k^2/L1^2 + l^2/L2^2);
//! - periodic axis: 1/sqrt(L), sqrt(2/L) cos(2 pi k x / L),
//!   sqrt(2/L) sin(2 pi k x / L), contribution (2 pi k / L)^2.
//!
//! All basis functions are L2-normalized so Parseval is exact. Modes are
//! ordered by nondecreasing eigenvalue, ties broken lexicographically by
//! the per-axis index tuple (k, Const < Cos < Sin).

use std::f64::consts::PI;
use std::sync::Arc;

use crate::domain::{Boundary, Domain};
use crate::error::SpectralError;

/// One trigonometric factor along a single axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AxisMode {
    /// Constant function 1/sqrt(L) (periodic axes only in eigenbases).
    Const,
    /// sqrt(2/L) cos(omega x); omega = k pi/L (Dirichlet) or 2 pi k/L (periodic).
    Cos(u32),
    /// sqrt(2/L) sin(omega x).
    Sin(u32),
}

impl AxisMode {
    /// Wavenumber index along the axis (0 for the constant mode).
    pub fn index(&self) -> u32 {
        match self {
            AxisMode::Const => 0,
            AxisMode::Cos(k) | AxisMode::Sin(k) => *k,
        }
    }

    /// Lexicographic tie-break key: (index, Const < Cos < Sin).
    fn key(&self) -> (u32, u8) {
        match self {
            AxisMode::Const => (0, 0),
            AxisMode::Cos(k) => (*k, 1),
            AxisMode::Sin(k) => (*k, 2),
        }
    }

    /// Angular frequency on an axis of length `len` with boundary `bc`.
    pub fn omega(&self, bc: Boundary, len: f64) -> f64 {
        let k = self.index() as f64;
        match bc {
            Boundary::Dirichlet => k * PI / len,
            Boundary::Periodic => 2.0 * k * PI / len,
        }
    }

    /// Value of the normalized mode at x.
    pub fn eval(&self, bc: Boundary, len: f64, x: f64) -> f64 {
        let amp = (2.0 / len).sqrt();
        match self {
            AxisMode::Const => 1.0 / len.sqrt(),
            AxisMode::Cos(_) => amp * (self.omega(bc, len) * x).cos(),
            AxisMode::Sin(_) => amp * (self.omega(bc, len) * x).sin(),
        }
    }

    /// Value of the derivative of the normalized mode at x.
    pub fn eval_deriv(&self, bc: Boundary, len: f64, x: f64) -> f64 {
        let amp = (2.0 / len).sqrt();
        let w = self.omega(bc, len);
        match self {
            AxisMode::Const => 0.0,
            AxisMode::Cos(_) => -amp * w * (w * x).sin(),
            AxisMode::Sin(_) => amp * w * (w * x).cos(),
        }
    }

    /// The mode produced by differentiation, with the frequency factor.
    /// d/dx Sin(k) = +omega Cos(k); d/dx Cos(k) = -omega Sin(k); d/dx Const = 0.
    pub fn derivative(&self, bc: Boundary, len: f64) -> Option<(AxisMode, f64)> {
        let w = self.omega(bc, len);
        match self {
            AxisMode::Const => None,
            AxisMode::Cos(k) => Some((AxisMode::Sin(*k), -w)),
            AxisMode::Sin(k) => Some((AxisMode::Cos(*k), w)),
        }
    }
}

/// A tensor-product mode with its eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    /// One factor per space dimension.
    pub axes: Vec<AxisMode>,
    /// Eigenvalue of A (sum of squared axis frequencies).
    pub lambda: f64,
}

impl Mode {
    fn key(&self) -> Vec<(u32, u8)> {
        self.axes.iter().map(|a| a.key()).collect()
    }
}

/// The m lowest eigenpairs of A on a domain, with per-axis lookup tables
/// used by the grid transforms.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    domain: Domain,
    modes: Vec<Mode>,
    /// Distinct axis modes appearing in `modes`, per axis, sorted by key.
    axis_modes: Vec<Vec<AxisMode>>,
    /// Per mode, per axis: index into `axis_modes`.
    mode_axis_idx: Vec<Vec<usize>>,
    /// Highest one-axis mode index across all modes and axes.
    max_axis_index: u32,
}

impl EigenBasis {
    /// Build the m lowest eigenpairs of A on `domain`, deterministically
    /// ordered (nondecreasing eigenvalue, lexicographic tie-break).
    pub fn build(domain: &Domain, m: usize) -> Result<Arc<Self>, SpectralError> {
        if m == 0 {
            return Err(SpectralError::EmptyTruncation);
        }
        let mut bound: u32 = 4;
        loop {
            let mut candidates = enumerate_modes(domain, bound);
            sort_modes(&mut candidates);
            // Every mode not enumerated has some axis index > bound, hence
            // eigenvalue >= the smallest single-axis eigenvalue at bound+1.
            let cutoff = (0..domain.dimension())
                .map(|ax| axis_lambda(domain, ax, bound + 1))
                .fold(f64::INFINITY, f64::min);
            if candidates.len() >= m && candidates[m - 1].lambda < cutoff * (1.0 - 1e-12) {
                candidates.truncate(m);
                return Ok(Arc::new(Self::from_modes(domain.clone(), candidates)));
            }
            bound *= 2;
            if bound > 1 << 20 {
                return Err(SpectralError::Invalid(format!(
                    "could not enumerate {m} modes"
                )));
            }
        }
    }

    /// Assemble a basis from an explicit mode list (already ordered).
    pub(crate) fn from_modes(domain: Domain, modes: Vec<Mode>) -> Self {
        let dim = domain.dimension();
        let mut axis_modes: Vec<Vec<AxisMode>> = vec![Vec::new(); dim];
        for mode in &modes {
            for (ax, am) in mode.axes.iter().enumerate() {
                if !axis_modes[ax].contains(am) {
                    axis_modes[ax].push(*am);
                }
            }
        }
        for list in &mut axis_modes {
            list.sort_by_key(|a| a.key());
        }
        let mode_axis_idx = modes
            .iter()
            .map(|mode| {
                mode.axes
                    .iter()
                    .enumerate()
                    .map(|(ax, am)| axis_modes[ax].iter().position(|x| x == am).unwrap())
                    .collect()
            })
            .collect();
        let max_axis_index = modes
            .iter()
            .flat_map(|mo| mo.axes.iter().map(|a| a.index()))
            .max()
            .unwrap_or(0);
        Self {
            domain,
            modes,
            axis_modes,
            mode_axis_idx,
            max_axis_index,
        }
    }

    /// The first m modes as a new basis.
    pub fn truncated(&self, m: usize) -> Result<Arc<Self>, SpectralError> {
        if m == 0 {
            return Err(SpectralError::EmptyTruncation);
        }
        if m > self.modes.len() {
            return Err(SpectralError::TruncationTooLarge {
                requested: m,
                available: self.modes.len(),
            });
        }
        Ok(Arc::new(Self::from_modes(
            self.domain.clone(),
            self.modes[..m].to_vec(),
        )))
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Truncation count m.
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn lambda(&self, j: usize) -> f64 {
        self.modes[j].lambda
    }

    /// Smallest eigenvalue in the basis (0 for include_mean bases).
    pub fn lambda_min(&self) -> f64 {
        self.modes[0].lambda
    }

    /// First positive eigenvalue; the Poincare constant is its inverse
    /// square root. Errors when the constant mode is carried.
    pub fn lambda_1(&self) -> Result<f64, SpectralError> {
        let l = self
            .modes
            .iter()
            .map(|m| m.lambda)
            .find(|&l| l > 0.0)
            .ok_or_else(|| SpectralError::Invalid("basis has no positive eigenvalue".into()))?;
        if self.domain.include_mean() {
            return Err(SpectralError::Invalid(
                "estimate requires lambda_1 > 0; domain carries the constant mode".into(),
            ));
        }
        Ok(l)
    }

    pub fn axis_modes(&self, axis: usize) -> &[AxisMode] {
        &self.axis_modes[axis]
    }

    pub fn mode_axis_indices(&self, j: usize) -> &[usize] {
        &self.mode_axis_idx[j]
    }

    /// Highest one-axis mode index (the dealiasing rule is stated in terms
    /// of this).
    pub fn max_axis_index(&self) -> u32 {
        self.max_axis_index
    }

    /// Value of mode j at a point (coordinates beyond the dimension ignored).
    pub fn eval_mode(&self, j: usize, point: &[f64]) -> f64 {
        let bc = self.domain.boundary();
        self.modes[j]
            .axes
            .iter()
            .enumerate()
            .map(|(ax, am)| am.eval(bc, self.domain.length(ax), point[ax]))
            .product()
    }

    /// Value of d(mode j)/d(x_axis) at a point.
    pub fn eval_mode_deriv(&self, j: usize, axis: usize, point: &[f64]) -> f64 {
        let bc = self.domain.boundary();
        self.modes[j]
            .axes
            .iter()
            .enumerate()
            .map(|(ax, am)| {
                let len = self.domain.length(ax);
                if ax == axis {
                    am.eval_deriv(bc, len, point[ax])
                } else {
                    am.eval(bc, len, point[ax])
                }
            })
            .product()
    }

    /// Span closure of this basis under first derivatives, as a basis of
    /// normalized trigonometric modes on the same domain. Used to represent
    /// divergences of Dirichlet fields, whose derivatives leave the sine span.
    pub fn derivative_closure(&self) -> Arc<Self> {
        let bc = self.domain.boundary();
        let mut modes: Vec<Mode> = Vec::new();
        let mut push = |axes: Vec<AxisMode>, lambda: f64| {
            let m = Mode { axes, lambda };
            if !modes.contains(&m) {
                modes.push(m);
            }
        };
        for mode in &self.modes {
            for axis in 0..mode.axes.len() {
                let len = self.domain.length(axis);
                if let Some((derived, _)) = mode.axes[axis].derivative(bc, len) {
                    let mut axes = mode.axes.clone();
                    axes[axis] = derived;
                    push(axes, mode.lambda);
                }
            }
        }
        let mut basis_modes = modes;
        sort_modes(&mut basis_modes);
        Arc::new(Self::from_modes(self.domain.clone(), basis_modes))
    }

    /// Index of the constant (mean) mode, if carried.
    pub fn mean_mode(&self) -> Option<usize> {
        self.modes
            .iter()
            .position(|m| m.axes.iter().all(|a| *a == AxisMode::Const))
    }
}

fn axis_candidates(domain: &Domain, axis: usize, bound: u32) -> Vec<AxisMode> {
    let _ = axis;
    match domain.boundary() {
        Boundary::Dirichlet => (1..=bound).map(AxisMode::Sin).collect(),
        Boundary::Periodic => {
            let mut v = Vec::with_capacity(2 * bound as usize + 1);
            if domain.include_mean() {
                v.push(AxisMode::Const);
            } else {
                // The constant factor is still needed as a tensor partner in
                // 2D (e.g. sin(x) * 1), just not as the pure constant mode.
                if domain.dimension() == 2 {
                    v.push(AxisMode::Const);
                }
            }
            for k in 1..=bound {
                v.push(AxisMode::Cos(k));
                v.push(AxisMode::Sin(k));
            }
            v
        }
    }
}

fn axis_lambda(domain: &Domain, axis: usize, k: u32) -> f64 {
    let len = domain.length(axis);
    let w = match domain.boundary() {
        Boundary::Dirichlet => k as f64 * PI / len,
        Boundary::Periodic => 2.0 * k as f64 * PI / len,
    };
    w * w
}

fn enumerate_modes(domain: &Domain, bound: u32) -> Vec<Mode> {
    let bc = domain.boundary();
    let dim = domain.dimension();
    let per_axis: Vec<Vec<AxisMode>> = (0..dim)
        .map(|ax| axis_candidates(domain, ax, bound))
        .collect();
    let mut modes = Vec::new();
    if dim == 1 {
        for a in &per_axis[0] {
            let lambda = a.omega(bc, domain.length(0)).powi(2);
            modes.push(Mode {
                axes: vec![*a],
                lambda,
            });
        }
    } else {
        for a in &per_axis[0] {
            for b in &per_axis[1] {
                if *a == AxisMode::Const && *b == AxisMode::Const && !domain.include_mean() {
                    continue;
                }
                let lambda = a.omega(bc, domain.length(0)).powi(2)
                    + b.omega(bc, domain.length(1)).powi(2);
                modes.push(Mode {
                    axes: vec![*a, *b],
                    lambda,
                });
            }
        }
    }
    modes
}

fn sort_modes(modes: &mut [Mode]) {
    modes.sort_by(|a, b| {
        a.lambda
            .partial_cmp(&b.lambda)
            .unwrap()
            .then_with(|| a.key().cmp(&b.key()))
    });
}
