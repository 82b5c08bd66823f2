//! Spectral fields: functions represented by coefficients in an eigenbasis.

use std::sync::Arc;

use crate::basis::EigenBasis;
use crate::error::SpectralError;
use crate::grid::GridSpec;

/// A scalar (1-component) or vector (2-component) function represented by
/// real coefficients in the eigenbasis of A. With an orthonormal basis the
/// L2 norm is the Euclidean norm of the coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    basis: Arc<EigenBasis>,
    components: usize,
    /// Layout: coeffs[c * m + j] for component c, mode j.
    coeffs: Vec<f64>,
}

/// The norm bundle returned by [`SpectralField::norms`].
///
/// `linf` is evaluated as a max over the dealiased grid nodes and is a
/// lower bound of the true sup-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub l2: f64,
    /// The V = H_0^1 seminorm (sum lambda_j a_j^2)^(1/2).
    pub v: f64,
    /// The D(A) norm |Au| = (sum lambda_j^2 a_j^2)^(1/2).
    pub h2: f64,
    pub linf: f64,
}

impl SpectralField {
    pub fn zeros(basis: Arc<EigenBasis>, components: usize) -> Result<Self, SpectralError> {
        let dim = basis.domain().dimension();
        if components == 0 || components > 2 || (components == 2 && dim == 1) {
            return Err(SpectralError::ComponentMismatch {
                components,
                dimension: dim,
            });
        }
        let m = basis.len();
        Ok(Self {
            basis,
            components,
            coeffs: vec![0.0; components * m],
        })
    }

    pub fn from_coeffs(
        basis: Arc<EigenBasis>,
        components: usize,
        coeffs: Vec<f64>,
    ) -> Result<Self, SpectralError> {
        let mut f = Self::zeros(basis, components)?;
        if coeffs.len() != f.coeffs.len() {
            return Err(SpectralError::Invalid(format!(
                "expected {} coefficients, got {}",
                f.coeffs.len(),
                coeffs.len()
            )));
        }
        f.coeffs = coeffs;
        Ok(f)
    }

    /// Unit coefficient on mode j of component c.
    pub fn eigenmode(
        basis: Arc<EigenBasis>,
        components: usize,
        c: usize,
        j: usize,
        amplitude: f64,
    ) -> Result<Self, SpectralError> {
        let mut f = Self::zeros(basis, components)?;
        f.coeffs[c * f.basis.len() + j] = amplitude;
        Ok(f)
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        &self.basis
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn truncation(&self) -> usize {
        self.basis.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, c: usize, j: usize) -> f64 {
        self.coeffs[c * self.basis.len() + j]
    }

    pub fn set_coeff(&mut self, c: usize, j: usize, value: f64) {
        let m = self.basis.len();
        self.coeffs[c * m + j] = value;
    }

    pub fn component_coeffs(&self, c: usize) -> &[f64] {
        let m = self.basis.len();
        &self.coeffs[c * m..(c + 1) * m]
    }

    pub fn same_basis(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis
    }

    /// Truncate to the first m modes. Idempotent, norm nonincreasing; the
    /// result lives on the truncated basis.
    pub fn project(&self, m: usize) -> Result<Self, SpectralError> {
        let src = self.basis.len();
        if m > src {
            return Err(SpectralError::TruncationTooLarge {
                requested: m,
                available: src,
            });
        }
        let basis = self.basis.truncated(m)?;
        let mut coeffs = Vec::with_capacity(self.components * m);
        for c in 0..self.components {
            coeffs.extend_from_slice(&self.coeffs[c * src..c * src + m]);
        }
        Self::from_coeffs(basis, self.components, coeffs)
    }

    /// Zero-extend onto a larger basis whose leading modes coincide with
    /// this field's basis (the deterministic ordering guarantees this for
    /// truncations of the same domain).
    pub fn embed(&self, target: &Arc<EigenBasis>) -> Result<Self, SpectralError> {
        let src = self.basis.len();
        if target.len() < src || target.modes()[..src] != self.basis.modes()[..] {
            return Err(SpectralError::BasisMismatch);
        }
        let mut out = Self::zeros(Arc::clone(target), self.components)?;
        let dst = target.len();
        for c in 0..self.components {
            out.coeffs[c * dst..c * dst + src]
                .copy_from_slice(&self.coeffs[c * src..(c + 1) * src]);
        }
        Ok(out)
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum()
    }

    /// V-seminorm (sum lambda_j a_j^2)^(1/2).
    pub fn v_norm(&self) -> f64 {
        self.weighted_norm(1)
    }

    /// D(A) norm |Au|.
    pub fn h2_norm(&self) -> f64 {
        self.weighted_norm(2)
    }

    fn weighted_norm(&self, power: i32) -> f64 {
        let m = self.basis.len();
        let mut s = 0.0;
        for c in 0..self.components {
            for j in 0..m {
                let a = self.coeffs[c * m + j];
                s += self.basis.lambda(j).powi(power) * a * a;
            }
        }
        s.sqrt()
    }

    /// L2 inner product (coefficient dot product by Parseval).
    pub fn dot(&self, other: &Self) -> Result<f64, SpectralError> {
        if !self.same_basis(other) || self.components != other.components {
            return Err(SpectralError::BasisMismatch);
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// All four norms; linf is computed on `grid` (max over nodes of the
    /// pointwise Euclidean magnitude).
    pub fn norms_on(&self, grid: &GridSpec) -> Result<Norms, SpectralError> {
        let g = grid.to_grid(self)?;
        Ok(Norms {
            l2: self.l2_norm(),
            v: self.v_norm(),
            h2: self.h2_norm(),
            linf: g.max_magnitude(),
        })
    }

    /// Convenience wrapper building the basis' default dealiased grid.
    pub fn norms(&self) -> Result<Norms, SpectralError> {
        self.norms_on(&GridSpec::for_basis(&self.basis))
    }

    /// Spatial mean (1/|Omega|) integral of each component.
    pub fn mean(&self) -> Vec<f64> {
        let vol = self.basis.domain().volume();
        match self.basis.mean_mode() {
            // The constant mode has value 1/sqrt(|Omega|).
            Some(j) => (0..self.components)
                .map(|c| self.coeff(c, j) / vol.sqrt())
                .collect(),
            None => vec![0.0; self.components],
        }
    }

    /// Pointwise evaluation by direct mode summation (independent of the
    /// grid transforms; used by the quadrature oracle).
    pub fn eval_at(&self, point: &[f64]) -> Vec<f64> {
        let m = self.basis.len();
        (0..self.components)
            .map(|c| {
                (0..m)
                    .map(|j| self.coeffs[c * m + j] * self.basis.eval_mode(j, point))
                    .sum()
            })
            .collect()
    }

    /// Pointwise evaluation of d u_c / d x_axis by direct summation.
    pub fn eval_deriv_at(&self, c: usize, axis: usize, point: &[f64]) -> f64 {
        let m = self.basis.len();
        (0..m)
            .map(|j| self.coeffs[c * m + j] * self.basis.eval_mode_deriv(j, axis, point))
            .sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for a in &mut out.coeffs {
            *a *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, SpectralError> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SpectralError> {
        self.axpy(-1.0, other)
    }

    /// self + s * other.
    pub fn axpy(&self, s: f64, other: &Self) -> Result<Self, SpectralError> {
        if !self.same_basis(other) || self.components != other.components {
            return Err(SpectralError::BasisMismatch);
        }
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
        Ok(out)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_finite())
    }
}
