//! The operator A, the trilinear form b, the bilinear map B, and the
//! divergence, together with a dense Gauss-Legendre oracle for b.
//!
//! b(u, v, w) = sum_{i,j} integral of u_i d(v_j)/d(x_i) w_j, with the
//! derivative on the second slot. Pseudospectral evaluation on the default
//! dealiased grid is exact (to roundoff) for band-limited inputs; the
//! oracle recomputes the same integral by dense quadrature and direct mode
//! summation, sharing none of the grid transform machinery.

use std::sync::Arc;

use ndarray::Array2;

use crate::error::SpectralError;
use crate::field::SpectralField;
use crate::grid::{GridField, GridSpec};
use crate::quadrature::gauss_legendre;

/// How a trilinear form value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrilinearMethod {
    Pseudospectral,
    QuadratureOracle,
}

/// A value of b together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrilinearResult {
    pub value: f64,
    pub method: TrilinearMethod,
}

/// Au: coefficient-wise multiplication by the eigenvalues.
pub fn apply_a(u: &SpectralField) -> SpectralField {
    let mut out = u.clone();
    let m = u.basis().len();
    for c in 0..u.components() {
        for j in 0..m {
            let a = out.coeff(c, j);
            out.set_coeff(c, j, u.basis().lambda(j) * a);
        }
    }
    out
}

fn check_slots(
    u: &SpectralField,
    v: &SpectralField,
    w: &SpectralField,
) -> Result<(), SpectralError> {
    if !u.same_basis(v) || !u.same_basis(w) {
        return Err(SpectralError::BasisMismatch);
    }
    let dim = u.basis().domain().dimension();
    if u.components() != dim {
        return Err(SpectralError::ComponentMismatch {
            components: u.components(),
            dimension: dim,
        });
    }
    if v.components() != w.components() {
        return Err(SpectralError::BasisMismatch);
    }
    Ok(())
}

/// b(u, v, w) on a caller-provided grid.
pub fn trilinear_b_on(
    grid: &GridSpec,
    u: &SpectralField,
    v: &SpectralField,
    w: &SpectralField,
) -> Result<f64, SpectralError> {
    check_slots(u, v, w)?;
    let dim = u.basis().domain().dimension();
    let ug = grid.to_grid(u)?;
    let wg = grid.to_grid(w)?;
    let mut total = 0.0;
    for i in 0..dim {
        for j in 0..v.components() {
            let dv = grid.deriv_values(v, j, i)?;
            let integrand = ug.component(i) * &dv * wg.component(j);
            total += grid.integrate(&integrand);
        }
    }
    Ok(total)
}

/// b(u, v, w) on the default dealiased grid of the shared basis.
pub fn trilinear_b(
    u: &SpectralField,
    v: &SpectralField,
    w: &SpectralField,
) -> Result<TrilinearResult, SpectralError> {
    let grid = GridSpec::for_basis(u.basis());
    Ok(TrilinearResult {
        value: trilinear_b_on(&grid, u, v, w)?,
        method: TrilinearMethod::Pseudospectral,
    })
}

/// Dense-quadrature oracle for b: tensor Gauss-Legendre with `n` nodes per
/// axis, fields evaluated by direct mode summation.
pub fn trilinear_b_quadrature(
    u: &SpectralField,
    v: &SpectralField,
    w: &SpectralField,
    n: usize,
) -> Result<TrilinearResult, SpectralError> {
    check_slots(u, v, w)?;
    let domain = u.basis().domain();
    let dim = domain.dimension();
    let (x0, w0) = gauss_legendre(n, 0.0, domain.length(0));
    let (x1, w1) = if dim == 2 {
        gauss_legendre(n, 0.0, domain.length(1))
    } else {
        (vec![0.0], vec![1.0])
    };
    let mut total = 0.0;
    for (a, &xa) in x0.iter().enumerate() {
        for (b, &xb) in x1.iter().enumerate() {
            let p = [xa, xb];
            let uv = u.eval_at(&p);
            let wv = w.eval_at(&p);
            let mut f = 0.0;
            for i in 0..dim {
                for j in 0..v.components() {
                    f += uv[i] * v.eval_deriv_at(j, i, &p) * wv[j];
                }
            }
            total += w0[a] * w1[b] * f;
        }
    }
    Ok(TrilinearResult {
        value: total,
        method: TrilinearMethod::QuadratureOracle,
    })
}

/// P_m B(u, v): the field whose j-th coefficient is b(u, v, w_j), on a
/// caller-provided grid. `m` must not exceed the shared truncation.
pub fn apply_b_on(
    grid: &GridSpec,
    u: &SpectralField,
    v: &SpectralField,
    m: usize,
) -> Result<SpectralField, SpectralError> {
    check_slots(u, v, v)?;
    if m > u.basis().len() {
        return Err(SpectralError::TruncationTooLarge {
            requested: m,
            available: u.basis().len(),
        });
    }
    let dim = u.basis().domain().dimension();
    let ug = grid.to_grid(u)?;
    let mut prods: Vec<Array2<f64>> = Vec::with_capacity(v.components());
    for j in 0..v.components() {
        let mut p: Option<Array2<f64>> = None;
        for i in 0..dim {
            let dv = grid.deriv_values(v, j, i)?;
            let term = ug.component(i) * &dv;
            p = Some(match p {
                None => term,
                Some(acc) => acc + term,
            });
        }
        prods.push(p.unwrap());
    }
    let gf = GridField::from_values(grid.clone(), prods);
    let target = if m == u.basis().len() {
        Arc::clone(u.basis())
    } else {
        u.basis().truncated(m)?
    };
    // Projection drops any mean the quadratic product picked up; that is
    // the meaning of P_m on a mean-excluded span.
    grid.project_onto(&gf, &target)
}

/// P_m B(u, v) on the default grid.
pub fn apply_b(
    u: &SpectralField,
    v: &SpectralField,
    m: usize,
) -> Result<SpectralField, SpectralError> {
    let grid = GridSpec::for_basis(u.basis());
    apply_b_on(&grid, u, v, m)
}

/// Spectral divergence of a 2D vector field. Derivatives of Dirichlet sine
/// modes are cosines, so the result lives on the derivative-closure basis.
pub fn divergence(u: &SpectralField) -> Result<SpectralField, SpectralError> {
    let dim = u.basis().domain().dimension();
    if dim != 2 {
        return Err(SpectralError::Not2D(dim));
    }
    if u.components() != 2 {
        return Err(SpectralError::ComponentMismatch {
            components: u.components(),
            dimension: dim,
        });
    }
    let basis = u.basis();
    let closure = basis.derivative_closure();
    let bc = basis.domain().boundary();
    let mut out = SpectralField::zeros(Arc::clone(&closure), 1)?;
    for (c, axis) in [(0usize, 0usize), (1, 1)] {
        let len = basis.domain().length(axis);
        for j in 0..basis.len() {
            let a = u.coeff(c, j);
            if a == 0.0 {
                continue;
            }
            let mode = &basis.modes()[j];
            if let Some((derived, factor)) = mode.axes[axis].derivative(bc, len) {
                let mut axes = mode.axes.clone();
                axes[axis] = derived;
                let pos = closure
                    .modes()
                    .iter()
                    .position(|m| m.axes == axes)
                    .expect("closure basis contains every derivative mode");
                let prev = out.coeff(0, pos);
                out.set_coeff(0, pos, prev + factor * a);
            }
        }
    }
    Ok(out)
}

/// Integral of (div u) |v|^2 over the domain, the quantity controlling the
/// skew-symmetry defect of b: b(u, v, v) = -(1/2) * this value.
pub fn div_weighted_sq_integral(
    u: &SpectralField,
    v: &SpectralField,
) -> Result<f64, SpectralError> {
    if !u.same_basis(v) {
        return Err(SpectralError::BasisMismatch);
    }
    let grid = GridSpec::for_basis(u.basis());
    let vg = grid.to_grid(v)?;
    let mut vsq = vg.component(0) * vg.component(0);
    for c in 1..v.components() {
        vsq = vsq + vg.component(c) * vg.component(c);
    }
    let mut div = grid.deriv_values(u, 0, 0)?;
    if u.basis().domain().dimension() == 2 {
        div = div + grid.deriv_values(u, 1, 1)?;
    }
    Ok(grid.integrate(&(div * vsq)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Boundary, Domain};
    use crate::basis::EigenBasis;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn periodic_1d(m: usize) -> Arc<EigenBasis> {
        let d = Domain::interval(2.0 * PI, Boundary::Periodic, false).unwrap();
        EigenBasis::build(&d, m).unwrap()
    }

    fn dirichlet_2d(m: usize) -> Arc<EigenBasis> {
        let d = Domain::rectangle(1.0, 1.0, Boundary::Dirichlet, false).unwrap();
        EigenBasis::build(&d, m).unwrap()
    }

    fn random_field(basis: &Arc<EigenBasis>, components: usize, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<f64> = (0..components * basis.len())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        SpectralField::from_coeffs(Arc::clone(basis), components, coeffs).unwrap()
    }

    /// Mode index of sin(kx) / cos(kx) on the 2pi-periodic line.
    fn sin_mode(basis: &Arc<EigenBasis>, k: u32) -> usize {
        basis
            .modes()
            .iter()
            .position(|m| m.axes[0] == crate::basis::AxisMode::Sin(k))
            .unwrap()
    }

    #[test]
    fn apply_a_on_eigenmodes_and_linearity() {
        let basis = dirichlet_2d(6);
        for j in 0..basis.len() {
            let w = SpectralField::eigenmode(Arc::clone(&basis), 1, 0, j, 1.0).unwrap();
            let aw = apply_a(&w);
            assert_relative_eq!(aw.coeff(0, j), basis.lambda(j), max_relative = 1e-14);
        }
        let u = random_field(&basis, 1, 1);
        let v = random_field(&basis, 1, 2);
        let lhs = apply_a(&u.scaled(0.3).add(&v.scaled(-1.7)).unwrap());
        let rhs = apply_a(&u).scaled(0.3).add(&apply_a(&v).scaled(-1.7)).unwrap();
        for j in 0..basis.len() {
            assert_relative_eq!(lhs.coeff(0, j), rhs.coeff(0, j), epsilon = 1e-12);
        }
    }

    #[test]
    fn a_identity_with_v_inner_product() {
        // (Au, v)_{L2} = (u, v)_V via coefficient sums.
        let basis = dirichlet_2d(8);
        let u = random_field(&basis, 1, 3);
        let v = random_field(&basis, 1, 4);
        let lhs = apply_a(&u).dot(&v).unwrap();
        let rhs: f64 = (0..basis.len())
            .map(|j| basis.lambda(j) * u.coeff(0, j) * v.coeff(0, j))
            .sum();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn trilinear_sin_sin2_sin_is_minus_pi() {
        // L = 2 pi: u = sin x, v = sin 2x, w = sin x -> integral of
        // sin(x) * 2 cos(2x) * sin(x) over (0, 2 pi) = -pi.
        let basis = periodic_1d(5);
        let amp = (PI).sqrt(); // normalized modes are sin(x)/sqrt(pi)
        let u = SpectralField::eigenmode(Arc::clone(&basis), 1, 0, sin_mode(&basis, 1), amp)
            .unwrap();
        let v = SpectralField::eigenmode(Arc::clone(&basis), 1, 0, sin_mode(&basis, 2), amp)
            .unwrap();
        let b = trilinear_b(&u, &v, &u).unwrap();
        assert_relative_eq!(b.value, -PI, epsilon = 1e-12);
        let oracle = trilinear_b_quadrature(&u, &v, &u, 48).unwrap();
        assert_relative_eq!(oracle.value, -PI, epsilon = 1e-11);
    }

    #[test]
    fn b_uuu_vanishes_in_1d() {
        let basis = periodic_1d(9);
        for seed in 0..30 {
            let u = random_field(&basis, 1, seed);
            let b = trilinear_b(&u, &u, &u).unwrap();
            assert!(b.value.abs() < 1e-11, "seed {seed}: {}", b.value);
        }
        let d = Domain::interval(1.0, Boundary::Dirichlet, false).unwrap();
        let basis = EigenBasis::build(&d, 9).unwrap();
        for seed in 0..30 {
            let u = random_field(&basis, 1, seed);
            let b = trilinear_b(&u, &u, &u).unwrap();
            assert!(b.value.abs() < 1e-11, "seed {seed}: {}", b.value);
        }
    }

    #[test]
    fn skew_defect_identity_2d() {
        // b(u, v, v) = -(1/2) integral (div u) |v|^2 for Dirichlet fields.
        let basis = dirichlet_2d(12);
        for seed in 0..20 {
            let u = random_field(&basis, 2, seed);
            let v = random_field(&basis, 2, 1000 + seed);
            let b = trilinear_b(&u, &v, &v).unwrap();
            let defect = div_weighted_sq_integral(&u, &v).unwrap();
            assert!(
                (b.value + 0.5 * defect).abs() < 1e-10,
                "seed {seed}: {} vs {}",
                b.value,
                -0.5 * defect
            );
        }
    }

    #[test]
    fn pseudospectral_matches_quadrature_oracle() {
        let basis = dirichlet_2d(8);
        for seed in 0..10 {
            let u = random_field(&basis, 2, seed);
            let v = random_field(&basis, 2, 100 + seed);
            let w = random_field(&basis, 2, 200 + seed);
            let ps = trilinear_b(&u, &v, &w).unwrap();
            let or = trilinear_b_quadrature(&u, &v, &w, 40).unwrap();
            assert!((ps.value - or.value).abs() < 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn trilinearity_in_each_slot() {
        let basis = periodic_1d(8);
        let u1 = random_field(&basis, 1, 1);
        let u2 = random_field(&basis, 1, 2);
        let v = random_field(&basis, 1, 3);
        let w = random_field(&basis, 1, 4);
        let grid = GridSpec::for_basis(&basis);
        let comb = u1.scaled(0.7).add(&u2.scaled(-2.1)).unwrap();
        let lhs = trilinear_b_on(&grid, &comb, &v, &w).unwrap();
        let rhs = 0.7 * trilinear_b_on(&grid, &u1, &v, &w).unwrap()
            - 2.1 * trilinear_b_on(&grid, &u2, &v, &w).unwrap();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
        let lhs = trilinear_b_on(&grid, &v, &comb, &w).unwrap();
        let rhs = 0.7 * trilinear_b_on(&grid, &v, &u1, &w).unwrap()
            - 2.1 * trilinear_b_on(&grid, &v, &u2, &w).unwrap();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
        let lhs = trilinear_b_on(&grid, &v, &w, &comb).unwrap();
        let rhs = 0.7 * trilinear_b_on(&grid, &v, &w, &u1).unwrap()
            - 2.1 * trilinear_b_on(&grid, &v, &w, &u2).unwrap();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn apply_b_single_sine_gives_half_sin_2x() {
        // u = sin x: B(u, u) = u u_x = (1/2) sin 2x.
        let basis = periodic_1d(6);
        let amp = PI.sqrt();
        let u = SpectralField::eigenmode(Arc::clone(&basis), 1, 0, sin_mode(&basis, 1), amp)
            .unwrap();
        let b = apply_b(&u, &u, basis.len()).unwrap();
        let j2 = sin_mode(&basis, 2);
        // (1/2) sin 2x = (sqrt(pi)/2) * normalized sin(2x) mode.
        for j in 0..basis.len() {
            let expected = if j == j2 { 0.5 * PI.sqrt() } else { 0.0 };
            assert_relative_eq!(b.coeff(0, j), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn apply_b_bilinearity_zero_slots() {
        let basis = periodic_1d(6);
        let u = random_field(&basis, 1, 5);
        let z = SpectralField::zeros(Arc::clone(&basis), 1).unwrap();
        assert_eq!(apply_b(&z, &u, 6).unwrap().l2_norm(), 0.0);
        assert_eq!(apply_b(&u, &z, 6).unwrap().l2_norm(), 0.0);
    }

    #[test]
    fn apply_b_coefficients_match_trilinear_values() {
        let basis = dirichlet_2d(7);
        let u = random_field(&basis, 2, 11);
        let v = random_field(&basis, 2, 12);
        let m = 5;
        let b = apply_b(&u, &v, m).unwrap();
        let grid = GridSpec::for_basis(&basis);
        for j in 0..m {
            for c in 0..2 {
                let wj = SpectralField::eigenmode(Arc::clone(&basis), 2, c, j, 1.0).unwrap();
                let expected = trilinear_b_on(&grid, &u, &v, &wj).unwrap();
                assert_relative_eq!(b.coeff(c, j), expected, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn divergence_of_stream_function_field_vanishes() {
        // u = (d psi/dy, -d psi/dx) for a random stream function psi.
        let basis = dirichlet_2d(10);
        let psi = random_field(&basis, 1, 21);
        let grid = GridSpec::for_basis(&basis);
        let closure = basis.derivative_closure();
        let cg = GridSpec::for_basis(&closure);
        // Build the curl field spectrally on the closure basis.
        let dpsi_dy = grid.deriv_values(&psi, 0, 1).unwrap();
        let dpsi_dx = grid.deriv_values(&psi, 0, 0).unwrap();
        let gf = GridField::from_values(grid.clone(), vec![dpsi_dy, -dpsi_dx]);
        let u = grid.project_onto(&gf, &closure).unwrap();
        let div = divergence(&u).unwrap();
        assert!(div.l2_norm() < 1e-11, "{}", div.l2_norm());
        let _ = cg;
    }

    #[test]
    fn divergence_matches_symbolic_derivative() {
        // u = (sin(pi x) sin(pi y), 0) -> div u = pi cos(pi x) sin(pi y).
        let basis = dirichlet_2d(4);
        let u = SpectralField::eigenmode(Arc::clone(&basis), 2, 0, 0, 1.0).unwrap();
        let div = divergence(&u).unwrap();
        let pts = [[0.3, 0.7], [0.11, 0.45], [0.9, 0.2]];
        for p in pts {
            let got = div.eval_at(&p)[0];
            // Normalized mode is 2 sin(pi x) sin(pi y).
            let expected = 2.0 * PI * (PI * p[0]).cos() * (PI * p[1]).sin();
            assert_relative_eq!(got, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn divergence_rejects_1d_input() {
        let basis = periodic_1d(4);
        let u = random_field(&basis, 1, 1);
        assert!(matches!(divergence(&u), Err(SpectralError::Not2D(1))));
    }

    #[test]
    fn divergence_of_zero_is_zero() {
        let basis = dirichlet_2d(4);
        let z = SpectralField::zeros(basis, 2).unwrap();
        assert_eq!(divergence(&z).unwrap().l2_norm(), 0.0);
    }
}
