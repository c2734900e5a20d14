//! Compact two-point homogeneous spaces: weight exponents, volumes and the
//! dimensions of the harmonic subspaces.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Sphere,
    RealProjective,
    ComplexProjective,
    QuaternionicProjective,
    CayleyPlane,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Sphere,
        Family::RealProjective,
        Family::ComplexProjective,
        Family::QuaternionicProjective,
        Family::CayleyPlane,
    ];

    /// Smallest dimension for which the family is defined.
    pub fn min_dimension(self) -> u32 {
        match self {
            Family::Sphere => 1,
            Family::RealProjective => 2,
            Family::ComplexProjective => 4,
            Family::QuaternionicProjective => 8,
            Family::CayleyPlane => 16,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Sphere => "sphere",
            Family::RealProjective => "real_projective",
            Family::ComplexProjective => "complex_projective",
            Family::QuaternionicProjective => "quaternionic_projective",
            Family::CayleyPlane => "cayley_plane",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "sphere" | "s" => Ok(Family::Sphere),
            "real_projective" | "rp" => Ok(Family::RealProjective),
            "complex_projective" | "cp" => Ok(Family::ComplexProjective),
            "quaternionic_projective" | "hp" => Ok(Family::QuaternionicProjective),
            "cayley_plane" | "cayley" | "op" => Ok(Family::CayleyPlane),
            other => Err(Error::Parse(format!("unknown family '{other}'"))),
        }
    }
}

/// A compact two-point homogeneous space of dimension `m`.
///
/// `a` and `b` are the exponents of the geodesic-polar density
/// `sin(t/2)^a sin(t)^b`; the Jacobi indices are the ones for which the
/// zonal functions are `P_n^(alpha, beta)(cos t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub family: Family,
    pub m: u32,
    pub a: u32,
    pub b: u32,
    pub jacobi_alpha: f64,
    pub jacobi_beta: f64,
    /// Total volume; only set for spheres.
    pub tau_m: Option<f64>,
}

/// Builds the parameter record for `(family, m)`.
pub fn space_params(family: Family, m: u32) -> Result<SpaceParams> {
    let (a, b) = match family {
        Family::Sphere => {
            if m < 1 {
                return domain("sphere requires m >= 1");
            }
            (0, m - 1)
        }
        Family::RealProjective => {
            if m < 2 {
                return domain("real projective space requires m >= 2");
            }
            (m - 1, 0)
        }
        Family::ComplexProjective => {
            if m < 4 || !m.is_multiple_of(2) {
                return domain("complex projective space requires m in {4, 6, 8, ...}");
            }
            (m - 2, 1)
        }
        Family::QuaternionicProjective => {
            if m < 8 || !m.is_multiple_of(4) {
                return domain("quaternionic projective space requires m in {8, 12, 16, ...}");
            }
            (m - 4, 3)
        }
        Family::CayleyPlane => {
            if m != 16 {
                return domain("Cayley plane requires m = 16");
            }
            (8, 7)
        }
    };
    debug_assert_eq!(a + b + 1, m);
    let tau_m = match family {
        Family::Sphere => Some(sphere_volume(m)),
        _ => None,
    };
    Ok(SpaceParams {
        family,
        m,
        a,
        b,
        jacobi_alpha: (a as f64 + b as f64 - 1.0) / 2.0,
        jacobi_beta: (b as f64 - 1.0) / 2.0,
        tau_m,
    })
}

/// Surface area of the unit sphere S^m in R^(m+1).
///
/// Uses `tau_m = 2 pi tau_{m-2} / (m-1)` from `tau_0 = 2`, `tau_1 = 2 pi`,
/// which agrees with `2 pi^((m+1)/2) / Gamma((m+1)/2)`.
pub fn sphere_volume(m: u32) -> f64 {
    let mut tau = if m.is_multiple_of(2) { 2.0 } else { 2.0 * PI };
    let mut k = if m.is_multiple_of(2) { 2 } else { 3 };
    while k <= m {
        tau *= 2.0 * PI / (k as f64 - 1.0);
        k += 2;
    }
    tau
}

impl SpaceParams {
    /// Volume used to normalise zonal kernels. Spheres carry their true
    /// surface area; the projective families use a unit-volume normalisation.
    pub fn kernel_volume(&self) -> f64 {
        self.tau_m.unwrap_or(1.0)
    }

    pub fn harmonic_dim(&self, n: u64) -> u128 {
        harmonic_dim(self, n)
    }

    pub fn poly_space_dim(&self, n: u64) -> u128 {
        poly_space_dim(self, n)
    }
}

fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k as u128 {
        // c * (n - k + i) / i stays integral at every step
        c = c.checked_mul(n as u128 - k as u128 + i)? / i;
    }
    Some(c)
}

fn sphere_harmonic_dim(m: u32, n: u64) -> u128 {
    if n == 0 {
        return 1;
    }
    if m == 1 {
        return 2;
    }
    let m = m as u64;
    let exact = binomial(n + m, m)
        .zip(binomial(n + m - 2, m))
        .map(|(hi, lo)| hi - lo);
    exact.unwrap_or_else(|| jacobi_dim_f64((m as f64 - 2.0) / 2.0, (m as f64 - 2.0) / 2.0, n))
}

/// `(2n+s)/s * C(n+s-1,n) * C(n+alpha,n) / C(n+beta,n)` with `s = alpha+beta+1`,
/// evaluated in floating point and rounded. Fallback for degrees whose exact
/// value overflows the integer route.
fn jacobi_dim_f64(alpha: f64, beta: f64, n: u64) -> u128 {
    let s = alpha + beta + 1.0;
    let nf = n as f64;
    let mut log = (2.0 * nf + s).ln() - s.ln();
    for k in 0..n {
        let k = k as f64;
        log += (s + k).ln() + (alpha + 1.0 + k).ln() - (beta + 1.0 + k).ln() - (k + 1.0).ln();
    }
    log.exp().round() as u128
}

fn integer_jacobi_dim(alpha: u64, beta: u64, n: u64) -> u128 {
    let s = alpha + beta + 1;
    let exact = (|| {
        let num = (2 * n as u128 + s as u128)
            .checked_mul(binomial(n + s - 1, n)?)?
            .checked_mul(binomial(n + alpha, n)?)?;
        let den = (s as u128).checked_mul(binomial(n + beta, n)?)?;
        debug_assert_eq!(num % den, 0);
        Some(num / den)
    })();
    exact.unwrap_or_else(|| jacobi_dim_f64(alpha as f64, beta as f64, n))
}

/// Dimension `N(m, n)` of the degree-`n` eigenspace of the Laplacian.
///
/// Exact while the intermediate products fit in `u128` (for `m = 16` that is
/// roughly `n < 500`); beyond that the value is rounded from a floating-point
/// product.
pub fn harmonic_dim(space: &SpaceParams, n: u64) -> u128 {
    match space.family {
        Family::Sphere => sphere_harmonic_dim(space.m, n),
        // even spherical harmonics of degree 2n
        Family::RealProjective => sphere_harmonic_dim(space.m, 2 * n),
        Family::ComplexProjective | Family::QuaternionicProjective | Family::CayleyPlane => {
            integer_jacobi_dim(space.jacobi_alpha as u64, space.jacobi_beta as u64, n)
        }
    }
}

/// Dimension `d_n^m` of the polynomials of degree at most `n`.
pub fn poly_space_dim(space: &SpaceParams, n: u64) -> u128 {
    (0..=n).map(|k| harmonic_dim(space, k)).sum()
}

/// Smallest `q >= 1` with `d_n^m <= (q n)^m` for every `1 <= n <= n_max`.
pub fn choose_q(space: &SpaceParams, n_max: u64) -> Result<u64> {
    if n_max < 1 {
        return domain("choose_q requires n_max >= 1");
    }
    let m = space.m;
    let mut q: u64 = 1;
    let mut dim: u128 = 1;
    for n in 1..=n_max {
        dim += harmonic_dim(space, n);
        let fits = |q: u64| {
            (q as u128 * n as u128)
                .checked_pow(m)
                .is_none_or(|p| p >= dim)
        };
        while !fits(q) {
            q += 1;
        }
    }
    Ok(q)
}

/// `sin(t/2)^a sin(t)^b` for `t` in the open interval `(0, pi)`.
pub fn weight_alpha(space: &SpaceParams, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < PI) {
        return domain(format!("weight_alpha requires t in (0, pi), got {t}"));
    }
    Ok(weight_unchecked(space, t))
}

#[inline]
pub(crate) fn weight_unchecked(space: &SpaceParams, t: f64) -> f64 {
    (0.5 * t).sin().powi(space.a as i32) * t.sin().powi(space.b as i32)
}
