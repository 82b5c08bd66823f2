//! Exact-solution oracle for 1D periodic unforced Burgers via the
//! Cole-Hopf transform u = -2 nu phi_x / phi, with phi advanced by the
//! explicit Fourier heat kernel on an internal fine grid that is
//! independent of the solver's transform machinery.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::basis::{AxisMode, EigenBasis};
use crate::domain::Boundary;
use crate::error::SpectralError;
use crate::field::SpectralField;

/// Exact solution at time t, projected onto `target` (which may be finer
/// than the basis of u0). The internal uniform grid has `n_grid` nodes,
/// defaulting to at least 512 and at least 8x the highest wavenumber
/// involved.
pub fn cole_hopf_oracle(
    u0: &SpectralField,
    nu: f64,
    t: f64,
    target: &Arc<EigenBasis>,
    n_grid: Option<usize>,
) -> Result<SpectralField, SpectralError> {
    let domain = u0.basis().domain();
    if domain.dimension() != 1 {
        return Err(SpectralError::Not1D(domain.dimension()));
    }
    if domain.boundary() != Boundary::Periodic {
        return Err(SpectralError::Invalid(
            "Cole-Hopf oracle requires a periodic domain".into(),
        ));
    }
    if *target.domain() != *domain {
        return Err(SpectralError::BasisMismatch);
    }
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(SpectralError::Invalid(format!(
            "need nu > 0, got {nu}"
        )));
    }
    if !(t >= 0.0) {
        return Err(SpectralError::Invalid(format!("need t >= 0, got {t}")));
    }
    if let Some(jc) = u0.basis().mean_mode() {
        if u0.coeff(0, jc).abs() > 1e-10 * (1.0 + u0.l2_norm()) {
            return Err(SpectralError::NonZeroMean(u0.coeff(0, jc).abs()));
        }
    }
    let l = domain.length(0);
    let k_max = u0.basis().max_axis_index().max(target.max_axis_index()) as usize;
    let n = n_grid
        .unwrap_or_else(|| 512.max(8 * (k_max + 1)))
        .max(4 * k_max + 8);
    let n = n + n % 2;

    // Antiderivative S(x) = int_0^x u0, in closed form per mode.
    let amp = (2.0 / l).sqrt();
    let s_at = |x: f64| -> f64 {
        let mut s = 0.0;
        for (j, mode) in u0.basis().modes().iter().enumerate() {
            let a = u0.coeff(0, j);
            if a == 0.0 {
                continue;
            }
            match mode.axes[0] {
                AxisMode::Const => {}
                AxisMode::Sin(k) => {
                    let w = 2.0 * PI * k as f64 / l;
                    s += a * amp * (1.0 - (w * x).cos()) / w;
                }
                AxisMode::Cos(k) => {
                    let w = 2.0 * PI * k as f64 / l;
                    s += a * amp * (w * x).sin() / w;
                }
            }
        }
        s
    };

    let nodes: Vec<f64> = (0..n).map(|i| i as f64 * l / n as f64).collect();
    let phi0: Vec<f64> = nodes.iter().map(|&x| (-s_at(x) / (2.0 * nu)).exp()).collect();

    // Real trapezoid DFT of phi0: phi0(x) ~ sum_q w_q (A_q cos + B_q sin),
    // w_q = 1/2 at q = 0 and q = n/2, else 1.
    let half = n / 2;
    let mut a_cos = vec![0.0; half + 1];
    let mut b_sin = vec![0.0; half + 1];
    for q in 0..=half {
        let (mut ca, mut sa) = (0.0, 0.0);
        for (i, p) in phi0.iter().enumerate() {
            let th = 2.0 * PI * (q * i) as f64 / n as f64;
            ca += p * th.cos();
            sa += p * th.sin();
        }
        a_cos[q] = 2.0 * ca / n as f64;
        b_sin[q] = 2.0 * sa / n as f64;
    }
    let weight = |q: usize| if q == 0 || q == half { 0.5 } else { 1.0 };
    let decay: Vec<f64> = (0..=half)
        .map(|q| (-nu * (2.0 * PI * q as f64 / l).powi(2) * t).exp())
        .collect();

    // u(x, t) = -2 nu phi_x / phi at the internal nodes.
    let mut u_vals = vec![0.0; n];
    for (i, &x) in nodes.iter().enumerate() {
        let mut phi = 0.0;
        let mut phi_x = 0.0;
        for q in 0..=half {
            let w = 2.0 * PI * q as f64 / l;
            let th = w * x;
            let g = weight(q) * decay[q];
            phi += g * (a_cos[q] * th.cos() + b_sin[q] * th.sin());
            phi_x += g * w * (-a_cos[q] * th.sin() + b_sin[q] * th.cos());
        }
        u_vals[i] = -2.0 * nu * phi_x / phi;
    }

    // Trapezoid projection onto the target basis.
    let mut out = SpectralField::zeros(Arc::clone(target), 1)?;
    for j in 0..target.len() {
        let mut acc = 0.0;
        for (i, &x) in nodes.iter().enumerate() {
            acc += u_vals[i] * target.eval_mode(j, &[x]);
        }
        out.set_coeff(0, j, acc * l / n as f64);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use approx::assert_relative_eq;

    fn basis_2pi(m: usize) -> Arc<EigenBasis> {
        let d = Domain::interval(2.0 * PI, Boundary::Periodic, false).unwrap();
        EigenBasis::build(&d, m).unwrap()
    }

    fn sine(basis: &Arc<EigenBasis>) -> SpectralField {
        let j = basis
            .modes()
            .iter()
            .position(|m| m.axes[0] == AxisMode::Sin(1))
            .unwrap();
        SpectralField::eigenmode(Arc::clone(basis), 1, 0, j, PI.sqrt()).unwrap()
    }

    #[test]
    fn zero_initial_data_stays_zero() {
        let basis = basis_2pi(8);
        let u0 = SpectralField::zeros(Arc::clone(&basis), 1).unwrap();
        let u = cole_hopf_oracle(&u0, 0.5, 1.0, &basis, None).unwrap();
        assert!(u.l2_norm() < 1e-14);
    }

    #[test]
    fn identity_at_time_zero() {
        let basis = basis_2pi(16);
        let mut u0 = SpectralField::zeros(Arc::clone(&basis), 1).unwrap();
        u0.set_coeff(0, 1, 0.8);
        u0.set_coeff(0, 4, -0.3);
        let u = cole_hopf_oracle(&u0, 0.2, 0.0, &basis, None).unwrap();
        assert!(u.sub(&u0).unwrap().l2_norm() < 1e-12);
    }

    #[test]
    fn sine_decays_at_the_linear_rate_for_large_time() {
        // For large t only the q = 1 heat mode survives; the log-derivative
        // then decays like e^{-nu t}.
        let basis = basis_2pi(16);
        let u0 = sine(&basis);
        let nu = 1.0;
        let n5 = cole_hopf_oracle(&u0, nu, 5.0, &basis, None).unwrap().l2_norm();
        let n6 = cole_hopf_oracle(&u0, nu, 6.0, &basis, None).unwrap().l2_norm();
        assert_relative_eq!(n6 / n5, (-nu).exp(), epsilon = 1e-3);
        assert!(n5 < u0.l2_norm() * (-nu * 5.0 * 0.9).exp());
    }

    #[test]
    fn internal_resolution_is_converged() {
        let basis = basis_2pi(16);
        let u0 = sine(&basis);
        let a = cole_hopf_oracle(&u0, 0.1, 1.0, &basis, Some(512)).unwrap();
        let b = cole_hopf_oracle(&u0, 0.1, 1.0, &basis, Some(1024)).unwrap();
        assert!(a.sub(&b).unwrap().l2_norm() < 1e-10);
    }

    #[test]
    fn rejects_2d_and_bad_viscosity_and_mean() {
        let d2 = Domain::rectangle(1.0, 1.0, Boundary::Dirichlet, false).unwrap();
        let b2 = EigenBasis::build(&d2, 4).unwrap();
        let u2 = SpectralField::zeros(Arc::clone(&b2), 2).unwrap();
        assert!(cole_hopf_oracle(&u2, 0.1, 1.0, &b2, None).is_err());

        let basis = basis_2pi(8);
        let u0 = sine(&basis);
        assert!(cole_hopf_oracle(&u0, 0.0, 1.0, &basis, None).is_err());

        let dm = Domain::interval(2.0 * PI, Boundary::Periodic, true).unwrap();
        let bm = EigenBasis::build(&dm, 8).unwrap();
        let jc = bm.mean_mode().unwrap();
        let um = SpectralField::eigenmode(Arc::clone(&bm), 1, 0, jc, 1.0).unwrap();
        assert!(matches!(
            cole_hopf_oracle(&um, 0.1, 1.0, &bm, None),
            Err(SpectralError::NonZeroMean(_))
        ));
    }
}
