//! Zonal positive-definite kernels described by their Funk-Hecke
//! coefficients, plus the translation operator acting on kernel sections.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::fit::least_squares;
use crate::spaces::{space_params, Family, SpaceParams};
use crate::specfun::{zonal_at_cos, zonal_phi_all};

/// Chebyshev grid size used for the supremum over evaluation points.
pub const DEFAULT_U_GRID: usize = 2048;

/// A zonal kernel `K(x, y) = sum_n lambda_n (N(m,n) / tau) phi_n(|xy|)`.
///
/// `coeffs[n]` is the eigenvalue of the integral operator on the degree-`n`
/// harmonic subspace. When `tail_exponent` is `Some(s)` the series continues
/// past the stored coefficients as `lambda_n = n^-s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZonalKernelSpec {
    pub space: SpaceParams,
    pub coeffs: Vec<f64>,
    pub tail_exponent: Option<f64>,
    /// Hoelder exponent the kernel was built for, if any.
    pub beta: Option<f64>,
}

impl ZonalKernelSpec {
    pub fn new(space: SpaceParams, coeffs: Vec<f64>, tail_exponent: Option<f64>) -> Result<Self> {
        if let Some((n, c)) = coeffs.iter().enumerate().find(|(_, c)| !(**c >= 0.0) || !c.is_finite()) {
            return domain(format!("kernel coefficient {n} is {c}; coefficients must be finite and >= 0"));
        }
        if let Some(s) = tail_exponent {
            if !(s > space.m as f64) {
                return domain(format!(
                    "tail exponent {s} must exceed m = {} for a finite trace",
                    space.m
                ));
            }
        }
        Ok(ZonalKernelSpec {
            space,
            coeffs,
            tail_exponent,
            beta: None,
        })
    }

    /// The constant kernel `K = 1`.
    pub fn constant(space: SpaceParams) -> Self {
        ZonalKernelSpec {
            space,
            coeffs: vec![space.kernel_volume()],
            tail_exponent: None,
            beta: None,
        }
    }

    pub fn n_trunc(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn volume(&self) -> f64 {
        self.space.kernel_volume()
    }

    /// Weights `lambda_n N(m,n) / tau` of the normalized zonal functions.
    pub fn pointwise_weights(&self) -> Vec<f64> {
        let tau = self.volume();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * self.space.harmonic_dim(n as u64) as f64 / tau)
            .collect()
    }

    /// Bound on `sum_{n > n_trunc} lambda_n N(m,n) / tau`, the largest
    /// possible contribution of the omitted terms to any kernel value.
    pub fn tail_bound(&self) -> f64 {
        match self.tail_exponent {
            None => 0.0,
            Some(s) => tail_sum_bound(&self.space, s, self.n_trunc() as u64),
        }
    }
}

/// Upper bound for `sum_{n > n_trunc} n^-s N(m,n) / tau`.
///
/// `N(m,n) / n^(m-1)` is nonincreasing in `n`, so it is bounded by its value
/// `r` at `n_trunc + 1`, and the remaining power sum is bounded by the
/// integral `int_{n_trunc}^inf x^(m-1-s) dx`.
pub fn tail_sum_bound(space: &SpaceParams, s: f64, n_trunc: u64) -> f64 {
    let m = space.m as f64;
    if s <= m {
        return f64::INFINITY;
    }
    let n1 = n_trunc + 1;
    let r = space.harmonic_dim(n1) as f64 / (n1 as f64).powf(m - 1.0);
    let base = (n_trunc.max(1)) as f64;
    let mut integral = base.powf(m - s) / (s - m);
    if n_trunc == 0 {
        // the n = 1 term is not covered by the integral from 1
        integral += 1.0;
    }
    r * integral / space.kernel_volume()
}

/// The kernel `1 + tau^-1 sum_{n>=1} N(m,n) n^-(2m+beta-2) P_n^m(x.y)` on S^m.
pub fn example_kernel(m: u32, beta: f64, n_trunc: usize) -> Result<ZonalKernelSpec> {
    if m < 3 {
        return domain("example kernel requires m >= 3");
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return domain("example kernel requires beta in (0, 1]");
    }
    if !(m as f64 - beta > 2.0) {
        return domain("example kernel requires m - beta > 2");
    }
    let space = space_params(Family::Sphere, m)?;
    let s = 2.0 * m as f64 + beta - 2.0;
    let mut coeffs = Vec::with_capacity(n_trunc + 1);
    coeffs.push(space.kernel_volume());
    coeffs.extend((1..=n_trunc).map(|n| (n as f64).powf(-s)));
    Ok(ZonalKernelSpec {
        space,
        coeffs,
        tail_exponent: Some(s),
        beta: Some(beta),
    })
}

/// Smallest truncation degree at which the example kernel's tail bound
/// drops below `tol`.
pub fn truncation_for_tail(m: u32, beta: f64, tol: f64) -> Result<usize> {
    let space = space_params(Family::Sphere, m)?;
    let s = 2.0 * m as f64 + beta - 2.0;
    if s <= m as f64 || !(tol > 0.0) {
        return domain("tail is not summable");
    }
    let bound = |n: u64| tail_sum_bound(&space, s, n);
    let mut hi: u64 = 1;
    while bound(hi) >= tol {
        hi *= 2;
        if hi > 1 << 40 {
            return domain("tail tolerance unreachable");
        }
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if bound(mid) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// `K` at geodesic distance `arccos(cos_theta)`, with the truncation bound.
pub fn kernel_eval(spec: &ZonalKernelSpec, cos_theta: f64) -> KernelValue {
    let w = spec.pointwise_weights();
    let mut phi = Vec::with_capacity(w.len());
    zonal_at_cos(&spec.space, spec.n_trunc(), cos_theta.clamp(-1.0, 1.0), &mut phi);
    KernelValue {
        value: dot(&w, &phi),
        tail_bound: spec.tail_bound(),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A zonal function `u -> sum_n c_n (N(m,n)/tau) phi_n(u)` in `u = x.y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZonalExpansion {
    pub space: SpaceParams,
    pub coeffs: Vec<f64>,
}

impl ZonalExpansion {
    pub fn eval(&self, u: f64) -> f64 {
        let tau = self.space.kernel_volume();
        let mut phi = Vec::with_capacity(self.coeffs.len());
        zonal_at_cos(&self.space, self.coeffs.len().saturating_sub(1), u.clamp(-1.0, 1.0), &mut phi);
        self.coeffs
            .iter()
            .zip(&phi)
            .enumerate()
            .map(|(n, (c, p))| c * self.space.harmonic_dim(n as u64) as f64 / tau * p)
            .sum()
    }
}

/// `x -> S_t(K(y, .))(x)` as a zonal expansion about `y`: the coefficient
/// of degree `n` is `lambda_n phi_n(t)`.
pub fn translate_kernel_section(spec: &ZonalKernelSpec, t: f64) -> ZonalExpansion {
    let mut phi = Vec::with_capacity(spec.coeffs.len());
    zonal_phi_all(&spec.space, spec.n_trunc(), t, &mut phi);
    ZonalExpansion {
        space: spec.space,
        coeffs: spec.coeffs.iter().zip(&phi).map(|(c, p)| c * p).collect(),
    }
}

/// `u_k = cos(pi k / (size - 1))`, which includes both endpoints; a grid of
/// size one is `{1}`.
pub fn chebyshev_extrema(size: usize) -> Vec<f64> {
    match size {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..size)
            .map(|k| (std::f64::consts::PI * k as f64 / (size - 1) as f64).cos())
            .collect(),
    }
}

/// `omega(t) = sup_x |S_t(K(y,.))(x) - K(y,x)|`, the supremum taken over a
/// Chebyshev grid of `u = x.y` values.
pub fn hoelder_modulus(spec: &ZonalKernelSpec, t: f64, u_grid_size: usize) -> Result<f64> {
    if !(t > 0.0 && t < std::f64::consts::PI) {
        return domain(format!("hoelder_modulus requires t in (0, pi), got {t}"));
    }
    let n_max = spec.n_trunc();
    let w = spec.pointwise_weights();
    let mut phi = Vec::with_capacity(n_max + 1);
    zonal_phi_all(&spec.space, n_max, t, &mut phi);
    let diff: Vec<f64> = w.iter().zip(&phi).map(|(w, p)| w * (p - 1.0)).collect();
    let mut best: f64 = 0.0;
    for u in chebyshev_extrema(u_grid_size) {
        zonal_at_cos(&spec.space, n_max, u, &mut phi);
        best = best.max(dot(&diff, &phi).abs());
    }
    Ok(best)
}

/// `omega(t)` evaluated at `x = y` only.
///
/// Every term `lambda_n (N/tau) (phi_n(t) - 1) phi_n(u)` has
/// `phi_n(t) - 1 <= 0` and `|phi_n(u)| <= phi_n(1) = 1`, so for nonnegative
/// coefficients the supremum over `u` is attained at `u = 1` and equals
/// `sum_n lambda_n (N/tau) (1 - phi_n(t))`. Costs `O(n_trunc)` per `t`.
pub fn hoelder_modulus_diagonal(spec: &ZonalKernelSpec, t: f64) -> Result<f64> {
    hoelder_modulus(spec, t, 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoelderEstimate {
    pub beta_hat: f64,
    pub b_hat: f64,
    pub t_grid: Vec<f64>,
    pub omega: Vec<f64>,
}

impl HoelderEstimate {
    /// `max_t omega(t) / t^beta` over the stored grid.
    pub fn max_ratio(&self, beta: f64) -> f64 {
        self.t_grid
            .iter()
            .zip(&self.omega)
            .map(|(t, w)| w / t.powf(beta))
            .fold(0.0, f64::max)
    }
}

/// Least-squares slope of `log omega` against `log t`, clamped to `(0, 2]`,
/// and the smallest constant with `omega <= B t^beta_hat` on the grid.
pub fn fit_hoelder(t_grid: &[f64], omega: &[f64]) -> Result<HoelderEstimate> {
    if t_grid.len() != omega.len() {
        return Err(Error::LayoutMismatch("t grid and modulus lengths differ".into()));
    }
    let pairs: Vec<(f64, f64)> = t_grid
        .iter()
        .zip(omega)
        .filter(|(_, w)| **w > 0.0)
        .map(|(t, w)| (t.ln(), w.ln()))
        .collect();
    if pairs.is_empty() {
        return Ok(HoelderEstimate {
            beta_hat: 2.0,
            b_hat: 0.0,
            t_grid: t_grid.to_vec(),
            omega: omega.to_vec(),
        });
    }
    let beta_hat = if pairs.len() == 1 {
        2.0
    } else {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        least_squares(&x, &y).slope.clamp(f64::EPSILON, 2.0)
    };
    let mut est = HoelderEstimate {
        beta_hat,
        b_hat: 0.0,
        t_grid: t_grid.to_vec(),
        omega: omega.to_vec(),
    };
    est.b_hat = est.max_ratio(beta_hat);
    Ok(est)
}

fn check_t_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return domain("empty t grid");
    }
    if t_grid.windows(2).any(|w| w[1] >= w[0]) {
        return domain("t grid must be strictly decreasing");
    }
    Ok(())
}

/// Fits a Hoelder pair `(B, beta)` to `omega` sampled on `t_grid`, using the
/// default Chebyshev grid for the supremum over evaluation points.
pub fn estimate_holder(spec: &ZonalKernelSpec, t_grid: &[f64]) -> Result<HoelderEstimate> {
    estimate_holder_with_grid(spec, t_grid, DEFAULT_U_GRID)
}

pub fn estimate_holder_with_grid(spec: &ZonalKernelSpec, t_grid: &[f64], u_grid_size: usize) -> Result<HoelderEstimate> {
    check_t_grid(t_grid)?;
    let omega = t_grid
        .iter()
        .map(|&t| hoelder_modulus(spec, t, u_grid_size))
        .collect::<Result<Vec<_>>>()?;
    fit_hoelder(t_grid, &omega)
}

/// `{2^-k}` for `k = 0..=k_max`, optionally with the geometric midpoints.
pub fn dyadic_t_grid(k_max: u32, refine: bool) -> Vec<f64> {
    if refine {
        (0..=2 * k_max).map(|j| 2f64.powf(-(j as f64) / 2.0)).collect()
    } else {
        (0..=k_max).map(|k| 2f64.powi(-(k as i32))).collect()
    }
}

// --- plain-text key-value format -------------------------------------------

impl ZonalKernelSpec {
    /// Serializes to `key = value` lines: family, m, beta, n_trunc,
    /// tail_exponent and the comma-separated coefficient list.
    pub fn to_kv_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "family = {}", self.space.family);
        let _ = writeln!(out, "m = {}", self.space.m);
        if let Some(b) = self.beta {
            let _ = writeln!(out, "beta = {b:?}");
        }
        let _ = writeln!(out, "n_trunc = {}", self.n_trunc());
        if let Some(s) = self.tail_exponent {
            let _ = writeln!(out, "tail_exponent = {s:?}");
        }
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| format!("{c:?}")).collect();
        let _ = writeln!(out, "coeffs = {}", coeffs.join(", "));
        out
    }

    pub fn from_kv_str(text: &str) -> Result<Self> {
        let kv = crate::config::parse_kv(text)?;
        let get = |k: &str| kv.get(k).map(String::as_str);
        let family: Family = get("family").unwrap_or("sphere").parse()?;
        let m: u32 = parse_field(get("m").ok_or_else(|| Error::Parse("missing 'm'".into()))?, "m")?;
        let space = space_params(family, m)?;
        let beta = get("beta").map(|v| parse_field::<f64>(v, "beta")).transpose()?;
        let tail = get("tail_exponent").map(|v| parse_field::<f64>(v, "tail_exponent")).transpose()?;
        let n_trunc = get("n_trunc").map(|v| parse_field::<usize>(v, "n_trunc")).transpose()?;

        let coeffs = match get("coeffs") {
            Some(list) => list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| parse_field::<f64>(s, "coeffs"))
                .collect::<Result<Vec<_>>>()?,
            None => {
                // no explicit list: regenerate the example kernel
                let beta = beta.ok_or_else(|| Error::Parse("need 'coeffs' or 'beta'".into()))?;
                let n = n_trunc.ok_or_else(|| Error::Parse("need 'coeffs' or 'n_trunc'".into()))?;
                return example_kernel(m, beta, n);
            }
        };
        if let Some(n) = n_trunc {
            if n + 1 != coeffs.len() {
                return Err(Error::Parse(format!(
                    "n_trunc = {n} but {} coefficients given",
                    coeffs.len()
                )));
            }
        }
        let mut spec = ZonalKernelSpec::new(space, coeffs, tail)?;
        spec.beta = beta;
        Ok(spec)
    }
}

fn parse_field<T: std::str::FromStr>(v: &str, key: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad value '{v}' for '{key}'")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn s(m: u32) -> SpaceParams {
        space_params(Family::Sphere, m).unwrap()
    }

    #[test]
    fn example_coefficients() {
        let k = example_kernel(3, 0.5, 10).unwrap();
        assert_abs_diff_eq!(k.coeffs[2], 2f64.powf(-4.5), epsilon = 1e-15);
        assert_abs_diff_eq!(k.coeffs[0], 2.0 * PI * PI, epsilon = 1e-12);
        let k4 = example_kernel(4, 1.0, 3).unwrap();
        assert_eq!(k4.coeffs[1], 1.0);
        assert!(example_kernel(3, 1.0, 5).is_err());
        assert!(example_kernel(2, 0.5, 5).is_err());
        assert!(example_kernel(4, 0.0, 5).is_err());
    }

    #[test]
    fn negative_coefficients_rejected() {
        assert!(ZonalKernelSpec::new(s(2), vec![1.0, -0.1], None).is_err());
        assert!(ZonalKernelSpec::new(s(2), vec![1.0, f64::NAN], None).is_err());
        assert!(ZonalKernelSpec::new(s(3), vec![1.0], Some(2.5)).is_err());
    }

    #[test]
    fn constant_kernel_is_one() {
        let k = ZonalKernelSpec::constant(s(3));
        for c in [-1.0, -0.3, 0.0, 0.9, 1.0] {
            let v = kernel_eval(&k, c);
            assert_abs_diff_eq!(v.value, 1.0, epsilon = 1e-14);
            assert_eq!(v.tail_bound, 0.0);
        }
    }

    #[test]
    fn diagonal_value_and_tail() {
        let k = example_kernel(3, 0.5, 400).unwrap();
        let tau = 2.0 * PI * PI;
        let direct: f64 = 1.0 + (1..=400).map(|n| ((n + 1) * (n + 1)) as f64 * (n as f64).powf(-4.5)).sum::<f64>() / tau;
        let v = kernel_eval(&k, 1.0);
        assert_abs_diff_eq!(v.value, direct, epsilon = 1e-12);

        // the bound dominates a long brute-force partial sum of the tail
        let brute: f64 = (401..200_000u64)
            .map(|n| ((n + 1) * (n + 1)) as f64 * (n as f64).powf(-4.5))
            .sum::<f64>()
            / tau;
        assert!(v.tail_bound >= brute);
        assert!(v.tail_bound < 2.0 * brute);
    }

    #[test]
    fn kernel_bounded_by_diagonal() {
        let k = example_kernel(3, 0.5, 60).unwrap();
        let diag = kernel_eval(&k, 1.0).value;
        for i in 0..=200 {
            let c = -1.0 + i as f64 / 100.0;
            assert!(kernel_eval(&k, c).value.abs() <= diag + 1e-12);
        }
    }

    #[test]
    fn truncation_search() {
        let n = truncation_for_tail(3, 0.5, 1e-10).unwrap();
        let sp = s(3);
        assert!(tail_sum_bound(&sp, 4.5, n as u64) < 1e-10);
        assert!(tail_sum_bound(&sp, 4.5, n as u64 - 1) >= 1e-10);
    }

    #[test]
    fn translation_limits() {
        let k = example_kernel(3, 0.5, 30).unwrap();
        let near = translate_kernel_section(&k, 1e-9);
        for (a, b) in near.coeffs.iter().zip(&k.coeffs) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12 * b.max(1.0));
        }
        let c = ZonalKernelSpec::constant(s(2));
        for t in [0.3, 1.7, 3.0] {
            let tr = translate_kernel_section(&c, t);
            assert_abs_diff_eq!(tr.eval(0.2), 1.0, epsilon = 1e-14);
        }
        let single = ZonalKernelSpec::new(s(2), vec![0.0, 1.0], None).unwrap();
        for t in [0.3, 1.7] {
            let tr = translate_kernel_section(&single, t);
            assert_abs_diff_eq!(tr.coeffs[1], t.cos(), epsilon = 1e-15);
            let base = ZonalExpansion { space: s(2), coeffs: single.coeffs.clone() };
            assert_abs_diff_eq!(tr.eval(0.4), t.cos() * base.eval(0.4), epsilon = 1e-14);
        }
    }

    #[test]
    fn modulus_limits() {
        let c = ZonalKernelSpec::constant(s(3));
        for t in [0.01, 0.5, 2.0] {
            assert_eq!(hoelder_modulus(&c, t, 64).unwrap(), 0.0);
        }
        let k = example_kernel(3, 0.5, 100).unwrap();
        let a = hoelder_modulus(&k, 1e-4, 256).unwrap();
        let b = hoelder_modulus(&k, 1e-2, 256).unwrap();
        assert!(a >= 0.0 && a < b && a < 1e-4);
        assert!(hoelder_modulus(&k, 0.0, 8).is_err());
    }

    #[test]
    fn modulus_sup_attained_on_diagonal() {
        let k = example_kernel(3, 0.5, 400).unwrap();
        for t in dyadic_t_grid(10, false) {
            let grid = hoelder_modulus(&k, t, DEFAULT_U_GRID).unwrap();
            let diag = hoelder_modulus_diagonal(&k, t).unwrap();
            assert_abs_diff_eq!(grid, diag, epsilon = 1e-14 * diag.max(1e-300));
        }
    }

    #[test]
    fn single_mode_closed_form() {
        let tau = 4.0 * PI;
        let single = ZonalKernelSpec::new(s(2), vec![0.0, 0.7], None).unwrap();
        for t in [0.5, 0.05, 0.005] {
            let w = hoelder_modulus(&single, t, 129).unwrap();
            assert_abs_diff_eq!(w, 0.7 * 3.0 / tau * (1.0 - t.cos()), epsilon = 1e-15);
        }
        let grid: Vec<f64> = (4..=12).map(|k| 2f64.powi(-k)).collect();
        let est = estimate_holder_with_grid(&single, &grid, 65).unwrap();
        assert!((est.beta_hat - 2.0).abs() < 1e-3);
    }

    #[test]
    fn constant_kernel_convention() {
        let c = ZonalKernelSpec::constant(s(3));
        let est = estimate_holder(&c, &dyadic_t_grid(10, false)).unwrap();
        assert_eq!((est.beta_hat, est.b_hat), (2.0, 0.0));
    }

    #[test]
    fn example_kernel_hoelder_bound() {
        let k = example_kernel(3, 0.5, 400).unwrap();
        let est = estimate_holder_with_grid(&k, &dyadic_t_grid(10, false), 257).unwrap();
        assert!(est.beta_hat >= 0.4);
        let w = hoelder_modulus(&k, 0.1, 257).unwrap();
        assert!(w <= est.b_hat * 0.1f64.powf(est.beta_hat) + 1e-15);
        assert!(est.max_ratio(0.5).is_finite());
    }

    #[test]
    fn bad_t_grids() {
        let c = ZonalKernelSpec::constant(s(3));
        assert!(estimate_holder(&c, &[]).is_err());
        assert!(estimate_holder(&c, &[0.1, 0.2]).is_err());
    }

    #[test]
    fn kv_roundtrip() {
        let k = example_kernel(3, 0.5, 25).unwrap();
        let back = ZonalKernelSpec::from_kv_str(&k.to_kv_string()).unwrap();
        assert_eq!(back, k);
        let regenerated = ZonalKernelSpec::from_kv_str("family = sphere\nm = 3\nbeta = 0.5\nn_trunc = 25\n").unwrap();
        assert_eq!(regenerated, k);
        assert!(ZonalKernelSpec::from_kv_str("m = 2\nn_trunc = 3\ncoeffs = 1, 2\n").is_err());
        assert!(ZonalKernelSpec::from_kv_str("m = 2\ncoeffs = 1, x\n").is_err());
    }
}
