//! Pointwise inequality checks: Poincare saturation and the two sup-norm
//! interpolation (Agmon-type) ratios, including the explicit sequence that
//! separates the H2 and H1 variants in two dimensions.

use std::sync::Arc;

use crate::basis::EigenBasis;
use crate::domain::{Boundary, Domain};
use crate::error::SpectralError;
use crate::estimates::{sup_interpolation_ratio, AgmonVariant};
use crate::field::SpectralField;
use crate::grid::GridSpec;

/// lambda_1^{1/2} |u| / |u|_V, in (0, 1] for mean-excluded fields.
pub fn poincare_ratio(field: &SpectralField) -> Result<f64, SpectralError> {
    let l2 = field.l2_norm();
    if l2 == 0.0 {
        return Err(SpectralError::ZeroField("nonzero field required"));
    }
    let l1 = field.basis().lambda_1()?;
    Ok(l1.sqrt() * l2 / field.v_norm())
}

/// Sup-norm interpolation ratio for a 2D field; see `AgmonVariant`.
pub fn agmon_ratio(field: &SpectralField, variant: AgmonVariant) -> Result<f64, SpectralError> {
    agmon_ratio_on(field, variant, &GridSpec::for_basis(field.basis()))
}

/// As `agmon_ratio`, reusing a caller-held grid across many fields.
pub fn agmon_ratio_on(
    field: &SpectralField,
    variant: AgmonVariant,
    grid: &GridSpec,
) -> Result<f64, SpectralError> {
    if field.basis().domain().dimension() != 2 {
        return Err(SpectralError::Not2D(field.basis().domain().dimension()));
    }
    sup_interpolation_ratio(field, variant, grid)
}

/// The explicit sequence on the Dirichlet unit square separating the two
/// variants: a_j = w_j(x0)/lambda_j over all modes with lambda_j within the
/// shell of scale K, peaked at x0 = (1/2, 1/2). Its H1-variant ratio grows
/// like (log K)^{3/4} while the H2-variant ratio stays bounded.
pub fn divergent_sequence_member(k: u32) -> Result<SpectralField, SpectralError> {
    if k == 0 {
        return Err(SpectralError::Invalid("need K >= 1".into()));
    }
    let domain = Domain::rectangle(1.0, 1.0, Boundary::Dirichlet, false)?;
    // All (k1, k2) with k1^2 + k2^2 <= K^2 + 1 (full shells, so the
    // eigenvalue-ordered enumeration is unambiguous); K = 1 keeps the
    // single fundamental mode.
    let cutoff = (k * k + 1) as u64;
    let mut count = 0usize;
    for k1 in 1..=k + 1 {
        for k2 in 1..=k + 1 {
            if (k1 as u64).pow(2) + (k2 as u64).pow(2) <= cutoff {
                count += 1;
            }
        }
    }
    let basis = EigenBasis::build(&domain, count)?;
    let x0 = [0.5, 0.5];
    let mut field = SpectralField::zeros(Arc::clone(&basis), 2)?;
    for j in 0..basis.len() {
        field.set_coeff(0, j, basis.eval_mode(j, &x0) / basis.lambda(j));
    }
    Ok(field)
}
