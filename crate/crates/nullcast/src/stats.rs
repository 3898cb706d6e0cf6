//! Scalar statistics helpers: the Gaussian tail function Q(x), its inverse,
//! and binomial interval estimates used by the Monte Carlo aggregation.
//!
//! Q(x) = P(Z > x) for Z ~ N(0,1). The forward evaluation uses the erfc
//! series for small arguments and a Lentz continued fraction for large ones;
//! the inverse starts from a rational approximation and polishes with Newton
//! steps on the forward function, which brings it to full double precision
//! (well inside the 1e-10 relative accuracy the detection threshold needs).

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

/// Standard normal density.
pub fn gaussian_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Gaussian tail probability Q(x) = 0.5 erfc(x/sqrt(2)).
///
/// Series evaluation while the tail is not small, Laplace continued
/// fraction for the Mills ratio beyond that; both branches are accurate to
/// a few ulps.
pub fn gaussian_tail(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - gaussian_tail(-x);
    }
    if x <= 2.0 {
        0.5 * (1.0 - erf_series(x * FRAC_1_SQRT_2))
    } else {
        gaussian_pdf(x) * mills_ratio(x)
    }
}

/// Mills ratio Q(x)/φ(x) via backward evaluation of the Laplace continued
/// fraction 1/(x + 1/(x + 2/(x + 3/(x + …)))), for x > 0.
fn mills_ratio(x: f64) -> f64 {
    let mut t = 0.0f64;
    for k in (1..=600).rev() {
        t = k as f64 / (x + t);
    }
    1.0 / (x + t)
}

/// Inverse Gaussian tail: returns x with Q(x) = p, for p in (0, 1).
pub fn gaussian_tail_inv(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "tail probability must lie in (0,1)");
    if p == 0.5 {
        return 0.0;
    }
    let mut x = rational_tail_inv(p);
    // Newton on Q(x) - p; two or three steps reach machine precision.
    for _ in 0..3 {
        let err = gaussian_tail(x) - p;
        let d = gaussian_pdf(x);
        if d == 0.0 {
            break;
        }
        x += err / d;
    }
    x
}

/// Maclaurin series for erf, used for |x| < 2 where it converges quickly.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0usize;
    while term.abs() > 1e-18 * sum.abs().max(1e-300) {
        n += 1;
        term *= -x2 / n as f64;
        sum += term / (2 * n + 1) as f64;
    }
    sum * 2.0 / PI.sqrt()
}

/// Acklam-style rational start for the inverse normal tail.
#[allow(clippy::excessive_precision)]
fn rational_tail_inv(p: f64) -> f64 {
    // Inverse CDF at 1 - p equals the inverse tail at p.
    let q = 1.0 - p;
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;
    if q < P_LOW {
        let r = (-2.0 * q.ln()).sqrt();
        (((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    } else if q <= 1.0 - P_LOW {
        let r = q - 0.5;
        let t = r * r;
        (((((A[0] * t + A[1]) * t + A[2]) * t + A[3]) * t + A[4]) * t + A[5]) * r
            / (((((B[0] * t + B[1]) * t + B[2]) * t + B[3]) * t + B[4]) * t + 1.0)
    } else {
        let r = (-2.0 * (1.0 - q).ln()).sqrt();
        -(((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    }
}

/// Wilson score interval for a binomial proportion.
///
/// Returns (low, high) at confidence given by the normal quantile `z`
/// (1.96 for 95%, 2.5758 for 99%).
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Mean with a normal-approximation 95% interval.
pub fn mean_interval(values: &[f64]) -> (f64, f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, mean, mean);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let half = 1.96 * (var / n).sqrt();
    (mean, mean - half, mean + half)
}

/// z-score for a two-sided confidence level; only the levels the harness
/// reports are supported.
pub fn z_for_confidence(level: f64) -> f64 {
    gaussian_tail_inv((1.0 - level) / 2.0)
}

#[allow(dead_code)]
fn sqrt2() -> f64 {
    SQRT_2
}
