//! Brute-force validation on the 2-sphere: Nystrom discretization of zonal
//! integral operators and direct averaging over geodesic circles. Nothing
//! here uses the Funk-Hecke coefficients of a kernel, only its pointwise
//! values.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::kernels::{kernel_eval, ZonalKernelSpec};
use crate::quadrature::gauss_legendre;
use crate::spaces::Family;

pub type Vec3 = [f64; 3];

/// Product rule: Gauss-Legendre in `cos(colatitude)` times the uniform
/// trapezoid in longitude. Node `i_theta * n_phi + k` sits at longitude
/// `2 pi k / n_phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    pub nodes: Vec<Vec3>,
    pub weights: Vec<f64>,
    pub n_theta: usize,
    pub n_phi: usize,
    cos_theta: Vec<f64>,
    ring_weights: Vec<f64>,
}

pub fn sphere_grid(n_theta: usize, n_phi: usize) -> Result<SphereGrid> {
    if n_theta < 4 || n_phi < 8 {
        return domain(format!("sphere grid needs n_theta >= 4 and n_phi >= 8, got {n_theta} x {n_phi}"));
    }
    let (x, w) = gauss_legendre(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (&z, &wz) in x.iter().zip(&w) {
        let r = (1.0 - z * z).sqrt();
        for k in 0..n_phi {
            let phi = dphi * k as f64;
            nodes.push([r * phi.cos(), r * phi.sin(), z]);
            weights.push(wz * dphi);
        }
    }
    Ok(SphereGrid {
        nodes,
        weights,
        n_theta,
        n_phi,
        cos_theta: x,
        ring_weights: w.iter().map(|wz| wz * dphi).collect(),
    })
}

impl SphereGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&Vec3) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }
}

fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `M[i][j] = sqrt(w_i) K(x_i . x_j) sqrt(w_j)`.
pub fn gram_matrix(kernel: impl Fn(f64) -> f64, grid: &SphereGrid) -> Result<DMatrix<f64>> {
    let n = grid.len();
    let sw: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let u = dot3(&grid.nodes[i], &grid.nodes[j]).clamp(-1.0, 1.0);
            let k = kernel(u);
            if !k.is_finite() {
                return Err(Error::NonFinite { node: u, value: k });
            }
            let v = sw[i] * k * sw[j];
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

/// All eigenvalues of a symmetric matrix, nonincreasing.
pub fn sym_eigs(matrix: &DMatrix<f64>) -> Result<Vec<f64>> {
    if !matrix.is_square() {
        return Err(Error::LayoutMismatch(format!("{} x {} matrix", matrix.nrows(), matrix.ncols())));
    }
    let asym = (matrix - matrix.transpose()).amax();
    if asym > 1e-12 * matrix.amax().max(1.0) {
        return Err(Error::Asymmetric(asym));
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(matrix.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Spectrum of the Nystrom matrix of a zonal kernel on a product grid.
///
/// The matrix is block circulant over longitude shifts, so a real Fourier
/// transform in longitude splits it into `n_phi` symmetric blocks of size
/// `n_theta`; their eigenvalues together are exactly the eigenvalues of
/// [`gram_matrix`]. Returned nonincreasing.
pub fn gram_spectrum(kernel: impl Fn(f64) -> f64, grid: &SphereGrid) -> Result<Vec<f64>> {
    let (nt, np) = (grid.n_theta, grid.n_phi);
    let sin_theta: Vec<f64> = grid.cos_theta.iter().map(|z| (1.0 - z * z).sqrt()).collect();
    let sw: Vec<f64> = grid.ring_weights.iter().map(|w| w.sqrt()).collect();
    // shift blocks C_d, d = 0..np
    let mut shifts = Vec::with_capacity(np);
    for d in 0..np {
        let c = (2.0 * PI * d as f64 / np as f64).cos();
        let mut block = DMatrix::zeros(nt, nt);
        for i in 0..nt {
            for j in 0..=i {
                let u = (grid.cos_theta[i] * grid.cos_theta[j] + sin_theta[i] * sin_theta[j] * c).clamp(-1.0, 1.0);
                let k = kernel(u);
                if !k.is_finite() {
                    return Err(Error::NonFinite { node: u, value: k });
                }
                let v = sw[i] * k * sw[j];
                block[(i, j)] = v;
                block[(j, i)] = v;
            }
        }
        shifts.push(block);
    }
    let mut eigs = Vec::with_capacity(nt * np);
    for k in 0..np {
        let mut b: DMatrix<f64> = DMatrix::zeros(nt, nt);
        for (d, c) in shifts.iter().enumerate() {
            let w = (2.0 * PI * ((k * d) % np) as f64 / np as f64).cos();
            b += c * w;
        }
        eigs.extend(sym_eigs(&b)?);
    }
    eigs.sort_by(|a, b| b.total_cmp(a));
    Ok(eigs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunkHeckeReport {
    /// `(degree, expected lambda_n, multiplicity, max relative error)`.
    pub clusters: Vec<(usize, f64, usize, f64)>,
    pub max_rel_error: f64,
    /// Largest `|eigenvalue|` outside the expected clusters.
    pub residual: f64,
    pub min_eigenvalue: f64,
}

fn require_s2(spec: &ZonalKernelSpec) -> Result<()> {
    if spec.space.family != Family::Sphere || spec.space.m != 2 {
        return domain("the dense oracle is implemented on S^2 only");
    }
    Ok(())
}

/// Checks that the Nystrom eigenvalues of `spec`'s pointwise kernel cluster
/// at `lambda_n` with multiplicity `2n + 1`, each within `rel_tol`.
pub fn funk_hecke_check(spec: &ZonalKernelSpec, grid: &SphereGrid, rel_tol: f64) -> Result<FunkHeckeReport> {
    require_s2(spec)?;
    let n_trunc = spec.n_trunc();
    if 2 * grid.n_theta < 2 * n_trunc + 2 || grid.n_phi <= 2 * n_trunc {
        return domain(format!(
            "grid {} x {} is not exact to degree {}",
            grid.n_theta,
            grid.n_phi,
            2 * n_trunc
        ));
    }
    let eigs = gram_spectrum(|u| kernel_eval(spec, u).value, grid)?;

    let mut expected: Vec<(f64, usize)> = Vec::new();
    for (n, &c) in spec.coeffs.iter().enumerate() {
        expected.extend(std::iter::repeat_n((c, n), 2 * n + 1));
    }
    expected.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut per_degree = vec![0.0f64; n_trunc + 1];
    for (k, &(value, n)) in expected.iter().enumerate() {
        let err = if value == 0.0 {
            eigs[k].abs()
        } else {
            (eigs[k] - value).abs() / value.abs()
        };
        per_degree[n] = per_degree[n].max(err);
    }
    let residual = eigs[expected.len()..].iter().map(|e| e.abs()).fold(0.0, f64::max);
    let clusters: Vec<_> = spec
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, &c)| (n, c, 2 * n + 1, per_degree[n]))
        .collect();
    let bad: Vec<usize> = clusters
        .iter()
        .filter(|c| c.1 != 0.0 && !(c.3 < rel_tol))
        .map(|c| c.0)
        .collect();
    if !bad.is_empty() {
        return Err(Error::ClusterMismatch(bad));
    }
    Ok(FunkHeckeReport {
        max_rel_error: per_degree.iter().copied().fold(0.0, f64::max),
        clusters,
        residual,
        min_eigenvalue: *eigs.last().unwrap_or(&0.0),
    })
}

/// Orthonormal pair spanning the tangent plane at `x`.
fn tangent_frame(x: &Vec3) -> (Vec3, Vec3) {
    let axis = if x[0].abs() <= x[1].abs() && x[0].abs() <= x[2].abs() {
        [1.0, 0.0, 0.0]
    } else if x[1].abs() <= x[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let c = cross(&axis, x);
    let norm = dot3(&c, &c).sqrt();
    let e1 = [c[0] / norm, c[1] / norm, c[2] / norm];
    let e2 = cross(x, &e1);
    (e1, e2)
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `S_t f`: the mean of `f` over `circle_points` equally spaced points of the
/// geodesic circle of radius `t` about the evaluation point.
pub fn translate_direct<F>(f: F, t: f64, circle_points: usize) -> impl Fn(&Vec3) -> f64
where
    F: Fn(&Vec3) -> f64,
{
    let (ct, st) = (t.cos(), t.sin());
    move |x: &Vec3| {
        let (e1, e2) = tangent_frame(x);
        let mut sum = 0.0;
        for k in 0..circle_points {
            let psi = 2.0 * PI * k as f64 / circle_points as f64;
            let (c, s) = (psi.cos(), psi.sin());
            let p = [
                ct * x[0] + st * (c * e1[0] + s * e2[0]),
                ct * x[1] + st * (c * e1[1] + s * e2[1]),
                ct * x[2] + st * (c * e1[2] + s * e2[2]),
            ];
            sum += f(&p);
        }
        sum / circle_points as f64
    }
}

/// Default number of circle points for [`translate_direct`].
pub const DEFAULT_CIRCLE_POINTS: usize = 256;
