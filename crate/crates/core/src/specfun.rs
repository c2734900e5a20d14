//! Jacobi polynomials and the normalized zonal functions
//! `phi_n(t) = P_n^(alpha,beta)(cos t) / P_n^(alpha,beta)(1)`.
//!
//! The zonal functions are also the eigenvalue symbols of the translation
//! operator: `S_t` multiplies the degree-`n` harmonic subspace by `phi_n(t)`.

use crate::error::{domain, Result};
use crate::spaces::{Family, SpaceParams};

/// `P_n^(alpha,beta)(x)` by the three-term recurrence in `n`.
pub fn jacobi_eval(alpha: f64, beta: f64, n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut p_prev = 1.0;
    let mut p = (alpha + 1.0) + 0.5 * (ab + 2.0) * (x - 1.0);
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
        let a3 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let next = (a2 * p - a3 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    p
}

/// `P_n^(alpha,beta)(1) = (alpha+1)_n / n!`.
pub fn jacobi_at_one(alpha: f64, n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * (alpha + k as f64) / k as f64)
}

/// Normalized values `phi_0(x) .. phi_{n_max}(x)` with `phi_n(1) = 1`.
///
/// Runs the Jacobi recurrence on the normalized sequence so that high degrees
/// neither overflow nor lose the normalization.
pub fn normalized_jacobi_all(alpha: f64, beta: f64, n_max: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if n_max == 0 {
        return;
    }
    let ab = alpha + beta;
    // P_1(x) / P_1(1)
    out.push(((alpha + 1.0) + 0.5 * (ab + 2.0) * (x - 1.0)) / (alpha + 1.0));
    for k in 2..=n_max {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        let a1 = 2.0 * kf * (kf + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
        let a3 = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * c;
        // P_k(1)/P_{k-1}(1) = (k+alpha)/k
        let r1 = kf / (kf + alpha);
        let r2 = r1 * (kf - 1.0) / (kf - 1.0 + alpha);
        let next = (a2 * r1 * out[k - 1] - a3 * r2 * out[k - 2]) / a1;
        out.push(next);
    }
}

/// `phi_n(t)` for the space's Jacobi indices.
pub fn zonal_phi(space: &SpaceParams, n: usize, t: f64) -> f64 {
    let mut buf = Vec::with_capacity(n + 1);
    zonal_phi_all(space, n, t, &mut buf);
    buf[n]
}

/// All of `phi_0(t) .. phi_{n_max}(t)` in one pass.
pub fn zonal_phi_all(space: &SpaceParams, n_max: usize, t: f64, out: &mut Vec<f64>) {
    zonal_at_cos(space, n_max, t.cos(), out)
}

/// Same as [`zonal_phi_all`] but parameterised by `cos t`.
pub fn zonal_at_cos(space: &SpaceParams, n_max: usize, x: f64, out: &mut Vec<f64>) {
    if space.family == Family::Sphere && space.m == 1 {
        // alpha = beta = -1/2: phi_n(t) = cos(n t); the recurrence has a 0/0
        // at k = 1 when alpha + beta = -1, so use Chebyshev directly
        out.clear();
        out.push(1.0);
        if n_max >= 1 {
            out.push(x);
        }
        for k in 2..=n_max {
            let v = 2.0 * x * out[k - 1] - out[k - 2];
            out.push(v);
        }
        return;
    }
    normalized_jacobi_all(space.jacobi_alpha, space.jacobi_beta, n_max, x, out)
}

/// Derivative of the normalized zonal polynomial `P_n^m(s)` on a sphere.
///
/// Uses `d/dx P_n^(a,b) = (n+a+b+1)/2 * P_{n-1}^(a+1,b+1)`.
pub fn zonal_derivative(space: &SpaceParams, n: usize, s: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (a, b) = (space.jacobi_alpha, space.jacobi_beta);
    if space.family == Family::Sphere && space.m == 1 {
        // d/ds T_n(s) = n U_{n-1}(s)
        return n as f64 * jacobi_eval(0.5, 0.5, n - 1, s) / jacobi_at_one(0.5, n - 1)
            * n as f64;
    }
    0.5 * (n as f64 + a + b + 1.0) * jacobi_eval(a + 1.0, b + 1.0, n - 1, s) / jacobi_at_one(a, n)
}

/// `max_{n <= n_max} max_{s in [-1,1]} |d/ds P_n^m(s)| / n^2`, the constant
/// `C_1` of the derivative bound, certified by dense sampling.
pub fn legendre_derivative_maxcheck(space: &SpaceParams, n_max: usize) -> Result<f64> {
    if space.family != Family::Sphere {
        return domain("legendre_derivative_maxcheck is defined for spheres only");
    }
    if n_max < 1 {
        return domain("legendre_derivative_maxcheck requires n_max >= 1");
    }
    const SAMPLES: usize = 4001;
    let mut best: f64 = 0.0;
    for n in 1..=n_max {
        let mut peak: f64 = 0.0;
        for i in 0..SAMPLES {
            let s = -1.0 + 2.0 * i as f64 / (SAMPLES - 1) as f64;
            peak = peak.max(zonal_derivative(space, n, s).abs());
        }
        best = best.max(peak / (n * n) as f64);
    }
    Ok(best)
}
