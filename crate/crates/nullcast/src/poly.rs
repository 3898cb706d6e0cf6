//! Complex polynomial root finding via Aberth–Ehrlich simultaneous
//! iteration.
//!
//! Degrees here stay below the ambient dimension (≤ a few hundred) and the
//! polynomials of interest are well scaled, so simultaneous Newton with a
//! circular start converges in a handful of sweeps. Residuals are checked
//! against a 1e-8 tolerance relative to the coefficient scale.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 400;
const STEP_TOL: f64 = 1e-14;
const RESIDUAL_TOL: f64 = 1e-8;

/// Roots of p(z) = Σ coeffs[k] z^k, with coeffs[degree] ≠ 0.
///
/// Returns an empty vector for constant polynomials.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    // Drop numerically-zero leading coefficients.
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Err(Error::DegeneratePolynomial);
    }
    let mut degree = coeffs.len() - 1;
    while degree > 0 && coeffs[degree].norm() <= 1e-14 * scale {
        degree -= 1;
    }
    if degree == 0 {
        return Ok(Vec::new());
    }
    let monic: Vec<Complex64> = coeffs[..=degree]
        .iter()
        .map(|c| c / coeffs[degree])
        .collect();

    // Circular initial guesses at the geometric-mean radius with an
    // irrational angular offset so no guess starts on a symmetry axis.
    let radius = monic[0].norm().powf(1.0 / degree as f64).clamp(0.2, 5.0);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let (p, dp) = horner(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 { p / dp } else { p };
            let mut repulse = Complex64::new(0.0, 0.0);
            for j in 0..degree {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 1e-300 {
                        repulse += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulse;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
        }
        if max_step < STEP_TOL {
            break;
        }
    }

    let worst = z
        .iter()
        .map(|&r| {
            let (p, _) = horner(&monic, r);
            p.norm() / r.norm().max(1.0).powi(degree as i32)
        })
        .fold(0.0f64, f64::max);
    if worst > RESIDUAL_TOL {
        return Err(Error::NonConvergence {
            iterations: MAX_SWEEPS,
            residual: worst,
        });
    }
    Ok(z)
}

/// Evaluates the polynomial and its derivative at z.
fn horner(monic: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in monic.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}
