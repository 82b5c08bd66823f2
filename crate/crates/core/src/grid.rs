//! Uniform tensor grids for pseudospectral product evaluation.
//!
//! Quadratic and cubic products of band-limited trigonometric fields are
//! integrated exactly (to roundoff) on these grids:
//!
//! - periodic axis, max wavenumber K: the N-point trapezoid rule with
//!   N = 3K + 1 is exact for every trigonometric polynomial of wavenumber
//!   up to 3K, which covers triple products;
//! - Dirichlet axis, max half-wavenumber K: derivatives of sine modes are
//!   cosines, so products mix both parities. Nodes are placed uniformly on
//!   the doubled interval (0, 2L) and carry weights chosen so that
//!   sum w_i f(x_i) equals the integral over (0, L) exactly for every
//!   f in span{ exp(i q pi x / L) : |q| <= 3K }.
//!
//! The closed form of the Dirichlet weights on M nodes is
//! w_i = (L/M) [ 1 + sum_{odd q <= Q} (4 / (q pi)) sin(2 pi q i / M) ].

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;

use crate::basis::EigenBasis;
use crate::domain::Boundary;
use crate::error::SpectralError;
use crate::field::SpectralField;

struct AxisGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Evaluation matrix: nodes x axis modes of the owning basis.
    eval: Array2<f64>,
    /// Derivative evaluation matrix, same shape.
    deriv: Array2<f64>,
    /// Quadrature is exact for frequency indices up to this.
    #[allow(dead_code)]
    q_exact: u32,
}

struct Inner {
    basis: Arc<EigenBasis>,
    axes: Vec<AxisGrid>, // always two entries; 1D gets a trivial second axis
}

/// Grid geometry, quadrature weights, and cached transform matrices for one
/// basis. Cheap to clone.
#[derive(Clone)]
pub struct GridSpec(Arc<Inner>);

/// Nodal values of a field on the grid of a [`GridSpec`].
#[derive(Clone)]
pub struct GridField {
    spec: GridSpec,
    values: Vec<Array2<f64>>,
}

fn axis_max_index(basis: &EigenBasis, axis: usize) -> u32 {
    basis
        .axis_modes(axis)
        .iter()
        .map(|a| a.index())
        .max()
        .unwrap_or(0)
}

fn build_axis(basis: &EigenBasis, axis: usize) -> AxisGrid {
    let bc = basis.domain().boundary();
    let len = basis.domain().length(axis);
    let k_max = axis_max_index(basis, axis);
    let q = 3 * k_max;
    let (nodes, weights, q_exact) = match bc {
        Boundary::Periodic => {
            let n = (q as usize + 1).max(8);
            let h = len / n as f64;
            (
                (0..n).map(|i| i as f64 * h).collect::<Vec<_>>(),
                vec![h; n],
                (n - 1) as u32,
            )
        }
        Boundary::Dirichlet => {
            let q = q.max(3);
            let m = 2 * q as usize + 2;
            let nodes: Vec<f64> = (0..m).map(|i| 2.0 * len * i as f64 / m as f64).collect();
            let mut weights = Vec::with_capacity(m);
            for i in 0..m {
                let mut w = 1.0;
                let mut qq = 1u32;
                while qq <= q {
                    w += (4.0 / (qq as f64 * PI))
                        * (2.0 * PI * qq as f64 * i as f64 / m as f64).sin();
                    qq += 2;
                }
                weights.push(len / m as f64 * w);
            }
            (nodes, weights, q)
        }
    };
    let modes = basis.axis_modes(axis);
    let mut eval = Array2::zeros((nodes.len(), modes.len()));
    let mut deriv = Array2::zeros((nodes.len(), modes.len()));
    for (i, &x) in nodes.iter().enumerate() {
        for (jm, am) in modes.iter().enumerate() {
            eval[[i, jm]] = am.eval(bc, len, x);
            deriv[[i, jm]] = am.eval_deriv(bc, len, x);
        }
    }
    AxisGrid {
        nodes,
        weights,
        eval,
        deriv,
        q_exact,
    }
}

fn trivial_axis() -> AxisGrid {
    AxisGrid {
        nodes: vec![0.0],
        weights: vec![1.0],
        eval: Array2::from_elem((1, 1), 1.0),
        deriv: Array2::zeros((1, 1)),
        q_exact: u32::MAX,
    }
}

impl GridSpec {
    /// Default grid for a basis: exact quadrature for cubic products of
    /// band-limited fields (triple products appear in the trilinear form).
    pub fn for_basis(basis: &Arc<EigenBasis>) -> Self {
        let dim = basis.domain().dimension();
        let mut axes: Vec<AxisGrid> = (0..dim).map(|ax| build_axis(basis, ax)).collect();
        if dim == 1 {
            axes.push(trivial_axis());
        }
        GridSpec(Arc::new(Inner {
            basis: Arc::clone(basis),
            axes,
        }))
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        &self.0.basis
    }

    pub fn nodes(&self, axis: usize) -> &[f64] {
        &self.0.axes[axis].nodes
    }

    pub fn resolution(&self, axis: usize) -> usize {
        self.0.axes[axis].nodes.len()
    }

    /// The dealiasing minimum from the grid invariant:
    /// ceil(3 m_max / 2) + 1 nodes per axis.
    pub fn min_resolution(basis: &EigenBasis) -> usize {
        let m_max = basis.max_axis_index() as usize;
        (3 * m_max).div_ceil(2) + 1
    }

    fn check_resolution(&self, basis: &EigenBasis) -> Result<(), SpectralError> {
        let min = Self::min_resolution(basis);
        for ax in 0..basis.domain().dimension() {
            let got = self.resolution(ax);
            if got < min {
                return Err(SpectralError::UnderResolved { got, min });
            }
        }
        Ok(())
    }

    /// Coefficient tensor of one component scattered onto the per-axis
    /// mode tables of `basis`.
    fn scatter(&self, f: &SpectralField, c: usize) -> Array2<f64> {
        let basis = f.basis();
        let n0 = basis.axis_modes(0).len();
        let n1 = if basis.domain().dimension() == 2 {
            basis.axis_modes(1).len()
        } else {
            1
        };
        let mut t = Array2::zeros((n0, n1));
        for j in 0..basis.len() {
            let idx = basis.mode_axis_indices(j);
            let i1 = if idx.len() > 1 { idx[1] } else { 0 };
            t[[idx[0], i1]] += f.coeff(c, j);
        }
        t
    }

    /// Nodal values of all components of a field sharing this grid's basis.
    pub fn to_grid(&self, f: &SpectralField) -> Result<GridField, SpectralError> {
        if !(Arc::ptr_eq(f.basis(), &self.0.basis) || **f.basis() == *self.0.basis) {
            return Err(SpectralError::BasisMismatch);
        }
        let values = (0..f.components())
            .map(|c| {
                let t = self.scatter(f, c);
                self.0.axes[0].eval.dot(&t).dot(&self.0.axes[1].eval.t())
            })
            .collect();
        Ok(GridField {
            spec: self.clone(),
            values,
        })
    }

    /// Nodal values of d u_c / d x_axis.
    pub fn deriv_values(
        &self,
        f: &SpectralField,
        c: usize,
        axis: usize,
    ) -> Result<Array2<f64>, SpectralError> {
        if !(Arc::ptr_eq(f.basis(), &self.0.basis) || **f.basis() == *self.0.basis) {
            return Err(SpectralError::BasisMismatch);
        }
        let t = self.scatter(f, c);
        let v = match axis {
            0 => self.0.axes[0].deriv.dot(&t).dot(&self.0.axes[1].eval.t()),
            1 => self.0.axes[0].eval.dot(&t).dot(&self.0.axes[1].deriv.t()),
            _ => return Err(SpectralError::Invalid(format!("no axis {axis}"))),
        };
        Ok(v)
    }

    /// Integral over the domain of a nodal value array.
    pub fn integrate(&self, values: &Array2<f64>) -> f64 {
        let w0 = &self.0.axes[0].weights;
        let w1 = &self.0.axes[1].weights;
        let mut s = 0.0;
        for (i, &wi) in w0.iter().enumerate() {
            let mut row = 0.0;
            for (j, &wj) in w1.iter().enumerate() {
                row += wj * values[[i, j]];
            }
            s += wi * row;
        }
        s
    }

    /// Project nodal values onto a basis by quadrature. Exact when the
    /// sampled function is a trigonometric polynomial within the grid's
    /// exactness band (quadratic products of basis-band fields qualify).
    /// On mean-excluded periodic domains, inputs with nonzero spatial mean
    /// are rejected; use [`GridSpec::project_onto`] when the projection is
    /// itself meant to drop the mean (operator products do).
    pub fn from_grid(
        &self,
        g: &GridField,
        basis: &Arc<EigenBasis>,
    ) -> Result<SpectralField, SpectralError> {
        self.project_impl(g, basis, true)
    }

    /// Quadrature projection without the nonzero-mean input check.
    pub fn project_onto(
        &self,
        g: &GridField,
        basis: &Arc<EigenBasis>,
    ) -> Result<SpectralField, SpectralError> {
        self.project_impl(g, basis, false)
    }

    fn project_impl(
        &self,
        g: &GridField,
        basis: &Arc<EigenBasis>,
        check_mean: bool,
    ) -> Result<SpectralField, SpectralError> {
        self.check_resolution(basis)?;
        if basis.domain() != self.0.basis.domain() {
            return Err(SpectralError::BasisMismatch);
        }
        let dim = basis.domain().dimension();
        let bc = basis.domain().boundary();
        // Per-axis weighted evaluation matrices for the target basis
        // (reuse the cached ones when the bases agree).
        let same = **basis == *self.0.basis;
        let mut wev: Vec<Array2<f64>> = Vec::with_capacity(2);
        for ax in 0..2 {
            let axis = &self.0.axes[ax];
            let eval: Array2<f64> = if ax < dim && !same {
                let modes = basis.axis_modes(ax);
                let len = basis.domain().length(ax);
                let mut e = Array2::zeros((axis.nodes.len(), modes.len()));
                for (i, &x) in axis.nodes.iter().enumerate() {
                    for (jm, am) in modes.iter().enumerate() {
                        e[[i, jm]] = am.eval(bc, len, x);
                    }
                }
                e
            } else if ax < dim {
                axis.eval.clone()
            } else {
                Array2::from_elem((1, 1), 1.0)
            };
            let mut w = eval;
            for (i, &wi) in axis.weights.iter().enumerate() {
                for v in w.row_mut(i) {
                    *v *= wi;
                }
            }
            wev.push(w);
        }
        let reject_mean =
            check_mean && bc == Boundary::Periodic && !basis.domain().include_mean();
        let vol = basis.domain().volume();
        let components = g.values.len();
        let mut out = SpectralField::zeros(Arc::clone(basis), components)?;
        for (c, vals) in g.values.iter().enumerate() {
            if reject_mean {
                let mean = self.integrate(vals) / vol;
                let scale = 1.0 + vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if mean.abs() > 1e-10 * scale {
                    return Err(SpectralError::NonZeroMean(mean));
                }
            }
            let t = wev[0].t().dot(vals).dot(&wev[1]);
            for j in 0..basis.len() {
                let idx = basis.mode_axis_indices(j);
                let i1 = if idx.len() > 1 { idx[1] } else { 0 };
                out.set_coeff(c, j, t[[idx[0], i1]]);
            }
        }
        Ok(out)
    }
}

impl GridField {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn components(&self) -> usize {
        self.values.len()
    }

    pub fn component(&self, c: usize) -> &Array2<f64> {
        &self.values[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut Array2<f64> {
        &mut self.values[c]
    }

    pub fn from_values(spec: GridSpec, values: Vec<Array2<f64>>) -> Self {
        Self { spec, values }
    }

    /// Max over nodes of the pointwise Euclidean magnitude; a lower bound
    /// of the true sup-norm.
    pub fn max_magnitude(&self) -> f64 {
        let shape = self.values[0].raw_dim();
        let mut best = 0.0f64;
        for i in 0..shape[0] {
            for j in 0..shape[1] {
                let s: f64 = self.values.iter().map(|v| v[[i, j]] * v[[i, j]]).sum();
                best = best.max(s);
            }
        }
        best.sqrt()
    }
}
