//! Rectangular computational domains.
//!
//! A domain is an interval `(0, L1)` or a rectangle `(0, L1) x (0, L2)`
//! with either homogeneous Dirichlet or periodic boundary conditions.
//! Periodic domains may optionally carry the constant (zero-eigenvalue)
//! mode; Dirichlet domains never do.

use crate::error::SpectralError;

/// Boundary condition on the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Homogeneous Dirichlet (nonslip): u = 0 on the boundary.
    Dirichlet,
    /// Periodic in every coordinate direction.
    Periodic,
}

/// A 1D interval or 2D rectangle with boundary conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    lengths: Vec<f64>,
    boundary: Boundary,
    include_mean: bool,
}

impl Domain {
    /// 1D interval `(0, len)`.
    pub fn interval(len: f64, boundary: Boundary, include_mean: bool) -> Result<Self, SpectralError> {
        Self::new(vec![len], boundary, include_mean)
    }

    /// 2D rectangle `(0, l1) x (0, l2)`.
    pub fn rectangle(
        l1: f64,
        l2: f64,
        boundary: Boundary,
        include_mean: bool,
    ) -> Result<Self, SpectralError> {
        Self::new(vec![l1, l2], boundary, include_mean)
    }

    pub fn new(
        lengths: Vec<f64>,
        boundary: Boundary,
        include_mean: bool,
    ) -> Result<Self, SpectralError> {
        if lengths.is_empty() || lengths.len() > 2 {
            return Err(SpectralError::BadDimension(lengths.len()));
        }
        for &l in &lengths {
            if !(l > 0.0) || !l.is_finite() {
                return Err(SpectralError::NonPositiveLength(l));
            }
        }
        if include_mean && boundary == Boundary::Dirichlet {
            return Err(SpectralError::MeanOnDirichlet);
        }
        Ok(Self {
            lengths,
            boundary,
            include_mean,
        })
    }

    pub fn dimension(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn length(&self, axis: usize) -> f64 {
        self.lengths[axis]
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Whether the constant mode is carried (periodic only).
    pub fn include_mean(&self) -> bool {
        self.include_mean
    }

    /// Measure |Omega| of the domain.
    pub fn volume(&self) -> f64 {
        self.lengths.iter().product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_lengths() {
        assert!(Domain::interval(0.0, Boundary::Periodic, false).is_err());
        assert!(Domain::rectangle(1.0, -2.0, Boundary::Dirichlet, false).is_err());
    }

    #[test]
    fn rejects_mean_mode_on_dirichlet() {
        assert!(matches!(
            Domain::interval(1.0, Boundary::Dirichlet, true),
            Err(SpectralError::MeanOnDirichlet)
        ));
    }

    #[test]
    fn volume_is_product_of_lengths() {
        let d = Domain::rectangle(1.0, 2.0, Boundary::Dirichlet, false).unwrap();
        assert_eq!(d.volume(), 2.0);
    }
}
