//! Operators diagonal in the harmonic basis: the integral operator, its
//! square root, the smoothed operator `Phi_nu sqrt(K)`, and the approximation
//! numbers and decay checks built on their spectra.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::fit::least_squares;
use crate::jackson::{moment, JacksonParams, MultiplierSequence};
use crate::kernels::ZonalKernelSpec;
use crate::quadrature::QuadratureRule;
use crate::spaces::SpaceParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralEntry {
    pub degree: usize,
    pub value: f64,
    pub multiplicity: u64,
}

/// Self-adjoint operator acting on the degree-`n` harmonic subspace as
/// multiplication by `value`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalOperator {
    pub space: SpaceParams,
    pub entries: Vec<SpectralEntry>,
}

impl DiagonalOperator {
    pub fn new(space: SpaceParams, entries: Vec<SpectralEntry>) -> Self {
        DiagonalOperator { space, entries }
    }

    /// Total number of flattened values, counted with multiplicity.
    pub fn flat_len(&self) -> u128 {
        self.entries.iter().map(|e| e.multiplicity as u128).sum()
    }

    /// Entry indices ordered by nonincreasing singular value; ties keep
    /// degree order.
    pub fn sorted_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.entries.len()).collect();
        idx.sort_by(|&a, &b| {
            self.entries[b]
                .value
                .abs()
                .total_cmp(&self.entries[a].value.abs())
        });
        idx
    }

    /// The flattened singular values in nonincreasing order.
    pub fn flattened(&self, limit: usize) -> Result<Vec<f64>> {
        if self.flat_len() > limit as u128 {
            return domain(format!(
                "flattened length {} exceeds limit {limit}",
                self.flat_len()
            ));
        }
        let mut out = Vec::with_capacity(self.flat_len() as usize);
        for i in self.sorted_order() {
            let e = &self.entries[i];
            out.extend(std::iter::repeat_n(e.value.abs(), e.multiplicity as usize));
        }
        Ok(out)
    }

    /// Largest singular value.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|e| e.value.abs()).fold(0.0, f64::max)
    }

    /// Number of flattened values exceeding `rel_tol * norm`.
    pub fn rank(&self, rel_tol: f64) -> u128 {
        let cut = rel_tol * self.norm();
        self.entries
            .iter()
            .filter(|e| e.value.abs() > cut)
            .map(|e| e.multiplicity as u128)
            .sum()
    }

    /// `a_j` for 1-based `j`; zero past the end of the spectrum.
    pub fn approx_number(&self, j: u128) -> f64 {
        if j == 0 {
            return self.norm();
        }
        let mut seen: u128 = 0;
        for i in self.sorted_order() {
            let e = &self.entries[i];
            seen += e.multiplicity as u128;
            if seen >= j {
                return e.value.abs();
            }
        }
        0.0
    }

    /// Entrywise square; inverse of [`sqrt_op`].
    pub fn squared(&self) -> DiagonalOperator {
        self.map_values(|_, v| v * v)
    }

    fn map_values(&self, f: impl Fn(usize, f64) -> f64) -> DiagonalOperator {
        DiagonalOperator {
            space: self.space,
            entries: self
                .entries
                .iter()
                .map(|e| SpectralEntry {
                    value: f(e.degree, e.value),
                    ..*e
                })
                .collect(),
        }
    }
}

/// Funk-Hecke diagonalization: entries `(n, lambda_n, N(m,n))`.
pub fn operator_from_kernel(spec: &ZonalKernelSpec) -> DiagonalOperator {
    let entries = spec
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, &value)| SpectralEntry {
            degree: n,
            value,
            multiplicity: u64::try_from(spec.space.harmonic_dim(n as u64)).unwrap_or(u64::MAX),
        })
        .collect();
    DiagonalOperator::new(spec.space, entries)
}

/// The positive square root, entry by entry.
pub fn sqrt_op(op: &DiagonalOperator) -> Result<DiagonalOperator> {
    if let Some(e) = op.entries.iter().find(|e| !(e.value >= 0.0)) {
        return domain(format!(
            "square root of a non-positive operator: degree {} has value {}",
            e.degree, e.value
        ));
    }
    Ok(op.map_values(|_, v| v.sqrt()))
}

/// `Phi_nu applied to op`: values `s_n m_nu(n)`, with `m_nu(n) = 0` past
/// the multiplier's range.
pub fn apply_phi(op: &DiagonalOperator, mult: &MultiplierSequence) -> DiagonalOperator {
    op.map_values(|n, v| v * mult.get(n))
}

/// `||op - other||` for two operators on the same degree layout.
pub fn op_norm_diff(op: &DiagonalOperator, other: &DiagonalOperator) -> Result<f64> {
    if op.entries.len() != other.entries.len() {
        return Err(Error::LayoutMismatch(format!(
            "{} entries vs {}",
            op.entries.len(),
            other.entries.len()
        )));
    }
    let mut best: f64 = 0.0;
    for (a, b) in op.entries.iter().zip(&other.entries) {
        if a.degree != b.degree || a.multiplicity != b.multiplicity {
            return Err(Error::LayoutMismatch(format!(
                "degree {} (x{}) vs degree {} (x{})",
                a.degree, a.multiplicity, b.degree, b.multiplicity
            )));
        }
        best = best.max((a.value - b.value).abs());
    }
    Ok(best)
}

/// `a_1 .. a_{j_max}`, zero-padded past the spectrum.
pub fn approx_numbers(op: &DiagonalOperator, j_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(j_max);
    'outer: for i in op.sorted_order() {
        let e = &op.entries[i];
        for _ in 0..e.multiplicity {
            if out.len() == j_max {
                break 'outer;
            }
            out.push(e.value.abs());
        }
    }
    out.resize(j_max, 0.0);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub mu: u32,
    pub nu: u32,
    /// `a_nu(sqrt K)`; for `nu = 0` this is read as `a_1`.
    pub lhs: f64,
    /// `int D_nu t^(beta/2) alpha dt`.
    pub integral: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Both sides of `a_nu(sqrt K) <= sqrt(2 ||B||_1) int D_nu t^(beta/2) alpha dt`.
pub fn check_theorem43(
    sqrt_op: &DiagonalOperator,
    jp: &JacksonParams,
    beta: f64,
    b1: f64,
    rule: &QuadratureRule,
) -> Result<InequalityReport> {
    if !(b1 >= 0.0) {
        return domain("||B||_1 must be nonnegative");
    }
    let lhs = sqrt_op.approx_number(jp.nu.max(1) as u128);
    let integral = moment(jp, beta / 2.0, rule)?;
    let rhs = (2.0 * b1).sqrt() * integral;
    Ok(InequalityReport {
        mu: jp.mu,
        nu: jp.nu,
        lhs,
        integral,
        rhs,
        holds: lhs <= rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaledRow {
    pub n: u64,
    pub j: u128,
    pub a_j: f64,
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaledDecayReport {
    pub q: u64,
    pub rows: Vec<ScaledRow>,
    /// `sup_n a_{(qn)^m} n^(beta/2)`.
    pub sup: f64,
    /// `sup_{j <= (q n_max)^m} a_j j^(beta/(2m))`.
    pub index_sup: f64,
    pub index_argmax: u128,
    /// Same supremum restricted to the upper half `j > (q n_max)^m / 2`.
    pub index_sup_upper_half: f64,
}

/// Tabulates `a_{(qn)^m}(sqrt K) n^(beta/2)` for `n = 1..=n_max` and the
/// scaled sequence `a_j j^(beta/(2m))`.
pub fn check_theorem54(op: &DiagonalOperator, beta: f64, q: u64, n_max: u64) -> Result<ScaledDecayReport> {
    if q < 1 || n_max < 1 {
        return domain("check_theorem54 requires q >= 1 and n_max >= 1");
    }
    let m = op.space.m;
    let idx = |n: u64| -> Result<u128> {
        (q as u128 * n as u128)
            .checked_pow(m)
            .ok_or_else(|| Error::Domain("(q n)^m overflows".into()))
    };
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let j = idx(n)?;
        let a_j = op.approx_number(j);
        rows.push(ScaledRow {
            n,
            j,
            a_j,
            scaled: a_j * (n as f64).powf(beta / 2.0),
        });
    }
    let sup = rows.iter().map(|r| r.scaled).fold(0.0, f64::max);

    // a_j is constant across an entry, so j^c is largest at the entry's last index
    let j_cap = idx(n_max)?;
    let half = j_cap / 2;
    let c = beta / (2.0 * m as f64);
    let (mut best, mut arg, mut upper) = (0.0f64, 1u128, 0.0f64);
    let mut start: u128 = 1;
    for i in op.sorted_order() {
        if start > j_cap {
            break;
        }
        let e = &op.entries[i];
        let end = (start + e.multiplicity as u128 - 1).min(j_cap);
        let v = e.value.abs() * (end as f64).powf(c);
        if v > best {
            best = v;
            arg = end;
        }
        if end > half {
            upper = upper.max(v);
        }
        start += e.multiplicity as u128;
    }
    Ok(ScaledDecayReport {
        q,
        rows,
        sup,
        index_sup: best,
        index_argmax: arg,
        index_sup_upper_half: upper,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub range: (usize, usize),
}

/// Least-squares slope of `log values[j]` against `log j` for
/// `j_min <= j <= j_max`, with `values[0]` holding `j = 1`.
pub fn decay_fit(values: &[f64], j_min: usize, j_max: usize) -> Result<DecayFit> {
    if j_min < 1 || j_max < 2 * j_min {
        return domain(format!("decay_fit needs 1 <= j_min and j_max >= 2 j_min, got [{j_min}, {j_max}]"));
    }
    if j_max > values.len() {
        return domain(format!("decay_fit range ends at {j_max} but only {} values", values.len()));
    }
    let mut x = Vec::with_capacity(j_max - j_min + 1);
    let mut y = Vec::with_capacity(j_max - j_min + 1);
    for j in j_min..=j_max {
        let v = values[j - 1];
        if !(v > 0.0) {
            return domain(format!("decay_fit: value {v} at j = {j} is not positive"));
        }
        x.push((j as f64).ln());
        y.push(v.ln());
    }
    let f = least_squares(&x, &y);
    Ok(DecayFit {
        slope: f.slope,
        intercept: f.intercept,
        max_residual: f.max_residual,
        range: (j_min, j_max),
    })
}

/// Smallest operator-norm error over all diagonal truncations that keep at
/// most `j - 1` of the flattened values: exhaustive over subsets.
pub fn brute_force_approx_number(flat: &[f64], j: usize) -> f64 {
    assert!(flat.len() <= 20, "brute force limited to 20 values");
    let n = flat.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        if (mask.count_ones() as usize) + 1 > j {
            continue;
        }
        let err = (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| flat[i].abs())
            .fold(0.0, f64::max);
        best = best.min(err);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jackson::{make_jackson, multipliers};
    use crate::kernels::example_kernel;
    use crate::spaces::{choose_q, poly_space_dim, space_params, Family};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn s(m: u32) -> SpaceParams {
        space_params(Family::Sphere, m).unwrap()
    }

    fn op(entries: &[(usize, f64, u64)]) -> DiagonalOperator {
        DiagonalOperator::new(
            s(2),
            entries
                .iter()
                .map(|&(degree, value, multiplicity)| SpectralEntry {
                    degree,
                    value,
                    multiplicity,
                })
                .collect(),
        )
    }

    #[test]
    fn from_kernel() {
        let c = operator_from_kernel(&ZonalKernelSpec::constant(s(3)));
        assert_eq!(c.entries, vec![SpectralEntry { degree: 0, value: 2.0 * PI * PI, multiplicity: 1 }]);
        let k = operator_from_kernel(&example_kernel(3, 0.5, 10).unwrap());
        assert_eq!(k.entries[2].multiplicity, 9);
        assert_abs_diff_eq!(k.entries[2].value, 2f64.powf(-4.5));
        let empty = DiagonalOperator::new(s(2), vec![]);
        assert_eq!(approx_numbers(&empty, 3), vec![0.0; 3]);
    }

    #[test]
    fn square_root() {
        let o = op(&[(0, 4.0, 1)]);
        assert_eq!(sqrt_op(&o).unwrap().entries[0].value, 2.0);
        let k = operator_from_kernel(&example_kernel(3, 0.5, 20).unwrap());
        let r = sqrt_op(&k).unwrap();
        for e in &r.entries[1..] {
            assert_abs_diff_eq!(e.value, (e.degree as f64).powf(-2.25), epsilon = 1e-15);
        }
        for (a, b) in r.squared().entries.iter().zip(&k.entries) {
            assert_abs_diff_eq!(a.value, b.value, epsilon = 1e-15 * b.value.max(1.0));
        }
        assert!(sqrt_op(&op(&[(0, -1.0, 1)])).is_err());
    }

    #[test]
    fn sorting_with_multiplicity() {
        assert_eq!(approx_numbers(&op(&[(0, 4.0, 1)]), 2), vec![4.0, 0.0]);
        let o = op(&[(1, 3.0, 2), (2, 5.0, 1)]);
        assert_eq!(approx_numbers(&o, 5), vec![5.0, 3.0, 3.0, 0.0, 0.0]);
        assert_eq!(o.approx_number(3), 3.0);
        assert_eq!(o.approx_number(4), 0.0);
        let k = sqrt_op(&operator_from_kernel(&example_kernel(3, 0.5, 30).unwrap())).unwrap();
        assert_abs_diff_eq!(approx_numbers(&k, 1)[0], (2.0 * PI * PI).sqrt());
    }

    #[test]
    fn phi_application() {
        let k = sqrt_op(&operator_from_kernel(&example_kernel(3, 0.5, 40).unwrap())).unwrap();
        let rule = QuadratureRule::for_jackson(1, 2, 40);
        let jp = make_jackson(&k.space, 2, 1, &rule).unwrap();
        let ms = multipliers(&jp, 40, &rule).unwrap();
        assert!(apply_phi(&k, &ms).rank(1e-8) <= 1);

        let (l, mu) = (2, 5);
        let rule = QuadratureRule::for_jackson(mu, l, 40);
        let jp = make_jackson(&k.space, l as u32, mu as u32, &rule).unwrap();
        let ms = multipliers(&jp, 40, &rule).unwrap();
        let phi = apply_phi(&k, &ms);
        for e in &phi.entries {
            if e.degree > jp.nu as usize {
                assert!(e.value.abs() < 1e-8);
            }
        }
        assert!(phi.rank(1e-8) <= poly_space_dim(&k.space, jp.nu as u64));

        let ones = MultiplierSequence { params: jp, values: vec![1.0; 41] };
        assert_eq!(apply_phi(&k, &ones), k);
    }

    #[test]
    fn norm_differences() {
        let k = sqrt_op(&operator_from_kernel(&example_kernel(3, 0.5, 10).unwrap())).unwrap();
        assert_eq!(op_norm_diff(&k, &k).unwrap(), 0.0);
        let zero = k.map_values(|_, _| 0.0);
        assert_abs_diff_eq!(op_norm_diff(&k, &zero).unwrap(), k.norm());
        let short = DiagonalOperator::new(k.space, k.entries[..3].to_vec());
        assert!(op_norm_diff(&k, &short).is_err());
    }

    #[test]
    fn inequality_check_constant_kernel() {
        let c = sqrt_op(&operator_from_kernel(&ZonalKernelSpec::constant(s(3)))).unwrap();
        let rule = QuadratureRule::for_jackson(4, 3, 0);
        let jp = make_jackson(&c.space, 3, 4, &rule).unwrap();
        let r = check_theorem43(&c, &jp, 0.5, 1.0, &rule).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn scaled_sequence_constant_and_example() {
        let c = sqrt_op(&operator_from_kernel(&ZonalKernelSpec::constant(s(3)))).unwrap();
        let r = check_theorem54(&c, 0.5, 1, 4).unwrap();
        assert_eq!(r.rows[0].j, 1);
        assert!(r.rows[0].a_j > 0.0);
        assert!(r.rows[1..].iter().all(|row| row.a_j == 0.0));

        let k = sqrt_op(&operator_from_kernel(&example_kernel(3, 0.5, 60).unwrap())).unwrap();
        let q = choose_q(&k.space, 8).unwrap();
        let r = check_theorem54(&k, 0.5, q, 8).unwrap();
        assert!(r.sup.is_finite());
        for w in r.rows[2..].windows(2) {
            assert!(w[1].scaled <= w[0].scaled);
        }
        // index sup agrees with a direct scan
        let jmax = (q * 8).pow(3) as usize;
        let a = approx_numbers(&k, jmax);
        let direct = a
            .iter()
            .enumerate()
            .map(|(i, v)| v * ((i + 1) as f64).powf(0.5 / 6.0))
            .fold(0.0, f64::max);
        assert_abs_diff_eq!(r.index_sup, direct, epsilon = 1e-14);
    }

    #[test]
    fn decay_fit_exact_power_law() {
        let v: Vec<f64> = (1..=1000).map(|j| (j as f64).powf(-1.5)).collect();
        let f = decay_fit(&v, 10, 1000).unwrap();
        assert_abs_diff_eq!(f.slope, -1.5, epsilon = 1e-10);
        assert!(f.max_residual < 1e-10);
        assert!(decay_fit(&v, 10, 15).is_err());
        assert!(decay_fit(&v, 10, 2000).is_err());
        let mut z = v.clone();
        z[50] = 0.0;
        assert!(decay_fit(&z, 10, 100).is_err());
    }

    #[test]
    fn brute_force_small_cases() {
        let flat = [5.0, 3.0, 3.0, 1.0];
        assert_eq!(brute_force_approx_number(&flat, 1), 5.0);
        assert_eq!(brute_force_approx_number(&flat, 2), 3.0);
        assert_eq!(brute_force_approx_number(&flat, 4), 1.0);
        assert_eq!(brute_force_approx_number(&flat, 5), 0.0);
    }

    proptest! {
        #[test]
        fn approx_numbers_nonincreasing(vals in prop::collection::vec((0.0f64..10.0, 1u64..6), 0..15)) {
            let entries: Vec<(usize, f64, u64)> = vals.iter().enumerate().map(|(i, &(v, m))| (i, v, m)).collect();
            let o = op(&entries);
            let a = approx_numbers(&o, 60);
            prop_assert!(a.windows(2).all(|w| w[1] <= w[0]));
            let r = sqrt_op(&o).unwrap();
            let b = approx_numbers(&r, 60);
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x.sqrt() - y).abs() <= 1e-15 * x.sqrt().max(1.0));
            }
        }

        #[test]
        fn sorting_matches_brute_force(vals in prop::collection::vec((0.0f64..10.0, 1u64..4), 1..6)) {
            let entries: Vec<(usize, f64, u64)> = vals.iter().enumerate().map(|(i, &(v, m))| (i, v, m)).collect();
            let o = op(&entries);
            let flat = o.flattened(12).unwrap_or_default();
            prop_assume!(!flat.is_empty());
            let a = approx_numbers(&o, flat.len() + 1);
            for j in 1..=flat.len() + 1 {
                prop_assert_eq!(a[j - 1], brute_force_approx_number(&flat, j));
            }
        }
    }
}
