//! The acceptance checks, one function per criterion. Tolerances are fixed
//! constants; each check returns a [`CriterionResult`] rather than panicking
//! so the CLI can report all of them.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fit::least_squares;
use crate::jackson::{lemma51_constant, make_jackson, moment, multipliers, normalization};
use crate::kernels::{
    dyadic_t_grid, example_kernel, fit_hoelder, hoelder_modulus, hoelder_modulus_diagonal, kernel_eval,
    truncation_for_tail, HoelderEstimate, ZonalKernelSpec, DEFAULT_U_GRID,
};
use crate::operators::{
    approx_numbers, apply_phi, brute_force_approx_number, check_theorem43, check_theorem54, decay_fit,
    op_norm_diff, operator_from_kernel, sqrt_op, DiagonalOperator, SpectralEntry,
};
use crate::oracle::{funk_hecke_check, gram_spectrum, sphere_grid, translate_direct, Vec3, DEFAULT_CIRCLE_POINTS};
use crate::quadrature::{build_rule, QuadratureRule, DEFAULT_ORDER};
use crate::spaces::{choose_q, space_params, Family};
use crate::specfun::jacobi_eval;

pub const NORMALIZATION_TOL: f64 = 1e-10;
pub const MOMENT_SLOPE_WINDOW: (f64, f64) = (-1.15, -0.85);
pub const FEJER_TOL: f64 = 1e-10;
pub const MULTIPLIER_ZERO_TOL: f64 = 1e-8;
pub const MULTIPLIER_ONE_TOL: f64 = 1e-10;
pub const FUNK_HECKE_REL_TOL: f64 = 1e-6;
pub const DENSE_DIAGONAL_REL_TOL: f64 = 0.01;
pub const HOELDER_REFINEMENT_TOL: f64 = 0.05;
pub const HOELDER_MIN_BETA_HAT: f64 = 0.4;
pub const TAIL_TOL: f64 = 1e-10;
pub const DECAY_SLOPE_TOL: f64 = 0.1;
pub const TRANSLATION_TOL: f64 = 1e-8;

/// Example kernel used by criteria 7-10.
pub const EXAMPLE_M: u32 = 3;
pub const EXAMPLE_BETA: f64 = 0.5;
pub const EXAMPLE_N_TRUNC: usize = 400;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: u32, name: &'static str, passed: bool, detail: String) -> Self {
        CriterionResult { id, name, passed, detail }
    }

    fn from_result(id: u32, name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => CriterionResult::new(id, name, passed, detail),
            Err(e) => CriterionResult::new(id, name, false, format!("error: {e}")),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2}: {} -- {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

fn jackson_rule(mu: u32, l: u32, n_extra: usize) -> QuadratureRule {
    QuadratureRule::for_jackson(mu as usize, l as usize, n_extra)
}

/// Criterion 1: Unit mass of `D_nu` against `alpha`, with the mass measured on a finer
/// rule than the one the normalizer came from.
pub fn normalization_all_families() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        let mut where_ = String::new();
        let mut count = 0;
        for f in Family::ALL {
            let space = space_params(f, f.min_dimension())?;
            for l in [space.m, 2 * space.m] {
                for mu in [2u32, 4, 8, 16, 32] {
                    let rule = jackson_rule(mu, l, 0);
                    let jp = make_jackson(&space, l, mu, &rule)?;
                    let check = build_rule(2 * rule.panels + 1, DEFAULT_ORDER + 4)?;
                    let err = (normalization(&jp, &check)? - 1.0).abs();
                    count += 1;
                    if err >= worst {
                        worst = err;
                        where_ = format!("{f} m={} l={l} mu={mu}", space.m);
                    }
                }
            }
        }
        Ok((
            worst < NORMALIZATION_TOL,
            format!("{count} cases, max |mass - 1| = {worst:.2e} ({where_}), tol {NORMALIZATION_TOL:.0e}"),
        ))
    };
    CriterionResult::from_result(1, "Jackson normalization", run())
}

/// `(mu, J(mu))` for the moment sweep on S^2 with `gamma = 1`, `l = 2`.
pub fn moment_sweep(l: u32, gamma: f64, mus: impl Iterator<Item = u32>) -> Result<Vec<(u32, f64, f64)>> {
    let s2 = space_params(Family::Sphere, 2)?;
    mus.map(|mu| {
        let rule = jackson_rule(mu, l, 0);
        let jp = make_jackson(&s2, l, mu, &rule)?;
        Ok((mu, moment(&jp, gamma, &rule)?, jp.k_nu))
    })
    .collect()
}

/// Criterion 2: `J(mu) mu <= c_{2,1,2}` on `mu = 2..64`, and the log-log slope of `J`.
pub fn moment_bound() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let c = lemma51_constant(2, 1.0, 2)?;
        let sweep = moment_sweep(2, 1.0, 2..=64)?;
        let worst = sweep.iter().map(|(mu, j, _)| j * *mu as f64).fold(0.0, f64::max);
        let (x, y): (Vec<f64>, Vec<f64>) = sweep
            .iter()
            .filter(|(mu, _, _)| *mu >= 4)
            .map(|(mu, j, _)| ((*mu as f64).ln(), j.ln()))
            .unzip();
        let slope = least_squares(&x, &y).slope;
        let ok_bound = worst <= c;
        let ok_slope = slope >= MOMENT_SLOPE_WINDOW.0 && slope <= MOMENT_SLOPE_WINDOW.1;
        Ok((
            ok_bound && ok_slope,
            format!(
                "max J*mu = {worst:.4} <= c = {c:.4}: {ok_bound}; slope over mu=4..64 = {slope:.4} in [{}, {}]: {ok_slope}",
                MOMENT_SLOPE_WINDOW.0, MOMENT_SLOPE_WINDOW.1
            ),
        ))
    };
    CriterionResult::from_result(2, "moment decay bound", run())
}

/// Criterion 3: Normalizer lower bound on the moment sweep, and `k_nu = mu pi` on S^1.
pub fn normalizer_bounds() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let s2 = space_params(Family::Sphere, 2)?;
        let sweep = moment_sweep(2, 1.0, 2..=64)?;
        let min_margin = sweep
            .iter()
            .map(|(mu, _, k)| k / crate::jackson::normalizer_lower_bound(&s2, 2, *mu))
            .fold(f64::INFINITY, f64::min);
        let s1 = space_params(Family::Sphere, 1)?;
        let mut fejer: f64 = 0.0;
        for mu in 1..=32u32 {
            let jp = make_jackson(&s1, 1, mu, &jackson_rule(mu, 1, 0))?;
            fejer = fejer.max((jp.k_nu - mu as f64 * PI).abs());
        }
        let ok = min_margin >= 1.0 && fejer < FEJER_TOL;
        Ok((
            ok,
            format!("min k_nu / bound = {min_margin:.4} (>= 1); S^1 max |k_nu - mu pi| = {fejer:.2e} (< {FEJER_TOL:.0e})"),
        ))
    };
    CriterionResult::from_result(3, "normalizer lower bound", run())
}

/// Criterion 4: Multipliers of `Phi_10` on S^2 (`l = 2`, `mu = 6`).
pub fn multiplier_rank() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let s2 = space_params(Family::Sphere, 2)?;
        let (l, mu, n_max) = (2, 6, 30);
        let rule = jackson_rule(mu, l, n_max);
        let jp = make_jackson(&s2, l, mu, &rule)?;
        let ms = multipliers(&jp, n_max, &rule)?;
        let e0 = (ms.values[0] - 1.0).abs();
        let tail = ms.values[11..].iter().map(|v| v.abs()).fold(0.0, f64::max);
        let peak = ms.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let ok = jp.nu == 10 && e0 < MULTIPLIER_ONE_TOL && tail < MULTIPLIER_ZERO_TOL && peak <= 1.0 + MULTIPLIER_ONE_TOL;
        Ok((
            ok,
            format!("nu = {}; |m(0) - 1| = {e0:.2e}; max_(11..30) |m(n)| = {tail:.2e}; max |m(n)| = {peak:.12}", jp.nu),
        ))
    };
    CriterionResult::from_result(4, "multiplier rank property", run())
}

/// The test kernel on S^2 for the dense comparisons: `lambda_n = n^-4` for
/// `1 <= n <= 10`, `lambda_0 = 1`.
pub fn oracle_spec() -> Result<ZonalKernelSpec> {
    let s2 = space_params(Family::Sphere, 2)?;
    let coeffs = (0..=10).map(|n| if n == 0 { 1.0 } else { (n as f64).powi(-4) }).collect();
    ZonalKernelSpec::new(s2, coeffs, None)
}

pub const ORACLE_GRID: (usize, usize) = (64, 128);

/// Criterion 5: Funk-Hecke clusters of the Nystrom matrix, and its top 50 approximation
/// numbers against the diagonal path.
pub fn funk_hecke_equivalence() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let spec = oracle_spec()?;
        let grid = sphere_grid(ORACLE_GRID.0, ORACLE_GRID.1)?;
        let report = funk_hecke_check(&spec, &grid, FUNK_HECKE_REL_TOL);
        let (fh_ok, fh_detail) = match &report {
            Ok(r) => (true, format!("cluster rel err {:.2e}", r.max_rel_error)),
            Err(e) => (false, e.to_string()),
        };
        let mut dense: Vec<f64> = gram_spectrum(|u| kernel_eval(&spec, u).value, &grid)?
            .into_iter()
            .map(f64::abs)
            .collect();
        dense.sort_by(|a, b| b.total_cmp(a));
        let diag = approx_numbers(&operator_from_kernel(&spec), 50);
        let worst = dense
            .iter()
            .zip(&diag)
            .map(|(d, a)| (d - a).abs() / a)
            .fold(0.0, f64::max);
        let ok = fh_ok && worst < DENSE_DIAGONAL_REL_TOL;
        Ok((ok, format!("{fh_detail} (< {FUNK_HECKE_REL_TOL:.0e}); top-50 a_j max rel diff {worst:.2e} (< 1%)")))
    };
    CriterionResult::from_result(5, "Funk-Hecke oracle equivalence", run())
}

/// Criterion 6: `||sqrt K - Phi_nu sqrt K||` diagonally and as the 2-norm of the
/// Nystrom matrix of the difference kernel.
pub fn operator_norm_identity() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let spec = oracle_spec()?;
        let (l, mu) = (2, 6);
        let root = sqrt_op(&operator_from_kernel(&spec))?;
        let rule = jackson_rule(mu, l, spec.n_trunc());
        let jp = make_jackson(&spec.space, l, mu, &rule)?;
        let ms = multipliers(&jp, spec.n_trunc(), &rule)?;
        let smoothed = apply_phi(&root, &ms);
        let diagonal = op_norm_diff(&root, &smoothed)?;

        let diff_coeffs = root
            .entries
            .iter()
            .zip(&smoothed.entries)
            .map(|(a, b)| a.value - b.value)
            .collect::<Vec<_>>();
        let diff_spec = ZonalKernelSpec {
            space: spec.space,
            coeffs: diff_coeffs,
            tail_exponent: None,
            beta: None,
        };
        let grid = sphere_grid(ORACLE_GRID.0, ORACLE_GRID.1)?;
        let eigs = gram_spectrum(|u| kernel_eval(&diff_spec, u).value, &grid)?;
        let dense = eigs.iter().map(|e| e.abs()).fold(0.0, f64::max);
        let rel = (dense - diagonal).abs() / diagonal;
        Ok((
            rel < DENSE_DIAGONAL_REL_TOL,
            format!("diagonal {diagonal:.10e}, dense {dense:.10e}, rel diff {rel:.2e} (< 1%)"),
        ))
    };
    CriterionResult::from_result(6, "operator-norm identity", run())
}

/// Hoelder data for the example kernel: the fitted estimate on `{2^-k}`,
/// the refined-grid moduli, and the truncation actually used.
#[derive(Debug, Clone, Serialize)]
pub struct ExampleHoelder {
    pub n_trunc: usize,
    pub tail_bound: f64,
    pub estimate: HoelderEstimate,
    pub refined: HoelderEstimate,
}

/// Hoelder data for the example kernel truncated where its tail bound drops
/// below [`TAIL_TOL`]. The supremum over evaluation points is taken at
/// `x = y`, where it is attained for nonnegative coefficients.
pub fn example_hoelder() -> Result<(ZonalKernelSpec, ExampleHoelder)> {
    let n = truncation_for_tail(EXAMPLE_M, EXAMPLE_BETA, TAIL_TOL)?.max(EXAMPLE_N_TRUNC);
    let spec = example_kernel(EXAMPLE_M, EXAMPLE_BETA, n)?;
    let coarse = dyadic_t_grid(10, false);
    let fine = dyadic_t_grid(10, true);
    let modulus = |grid: &[f64]| -> Result<Vec<f64>> {
        grid.iter().map(|&t| hoelder_modulus_diagonal(&spec, t)).collect()
    };
    let estimate = fit_hoelder(&coarse, &modulus(&coarse)?)?;
    let refined = fit_hoelder(&fine, &modulus(&fine)?)?;
    let tail_bound = spec.tail_bound();
    Ok((
        spec,
        ExampleHoelder {
            n_trunc: n,
            tail_bound,
            estimate,
            refined,
        },
    ))
}

/// Criterion 7: Hoelder upper bound for the example kernel.
///
/// Run twice: at `n_trunc = 400` with the full Chebyshev grid over evaluation
/// points, and at the truncation meeting the `1e-10` tail requirement (400
/// leaves a tail of about `4e-6`).
pub fn hoelder_upper_bound() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let spec400 = example_kernel(EXAMPLE_M, EXAMPLE_BETA, EXAMPLE_N_TRUNC)?;
        let coarse = dyadic_t_grid(10, false);
        let fine = dyadic_t_grid(10, true);
        let grid_modulus = |grid: &[f64]| -> Result<Vec<f64>> {
            grid.iter().map(|&t| hoelder_modulus(&spec400, t, DEFAULT_U_GRID)).collect()
        };
        let e400 = fit_hoelder(&coarse, &grid_modulus(&coarse)?)?;
        let r400 = fit_hoelder(&fine, &grid_modulus(&fine)?)?;
        let check = |e: &HoelderEstimate, r: &HoelderEstimate| {
            let a = e.max_ratio(EXAMPLE_BETA);
            let b = r.max_ratio(EXAMPLE_BETA);
            let change = (b - a).abs() / a;
            (a.is_finite() && change < HOELDER_REFINEMENT_TOL && e.beta_hat >= HOELDER_MIN_BETA_HAT, a, change)
        };
        let (ok400, ratio400, change400) = check(&e400, &r400);

        let (_, ex) = example_hoelder()?;
        let (ok_full, ratio_full, change_full) = check(&ex.estimate, &ex.refined);
        let tail_ok = ex.tail_bound < TAIL_TOL;
        Ok((
            ok400 && ok_full && tail_ok,
            format!(
                "n_trunc=400 (tail {:.1e}): max w/t^0.5 = {ratio400:.6}, refinement change {:.2e}, beta_hat {:.3}; \
                 n_trunc={} (tail {:.1e} < {TAIL_TOL:.0e}): max w/t^0.5 = {ratio_full:.6}, change {:.2e}, beta_hat {:.3}, B_hat {:.6}",
                spec400.tail_bound(),
                change400,
                e400.beta_hat,
                ex.n_trunc,
                ex.tail_bound,
                change_full,
                ex.estimate.beta_hat,
                ex.estimate.b_hat,
            ),
        ))
    };
    CriterionResult::from_result(7, "Hoelder upper bound", run())
}

/// Criterion 8: `a_nu(sqrt K) <= sqrt(2 B1) int D_nu t^(beta/2) alpha dt` for
/// `l = 3`, `mu = 2..32`, `B1 = B_hat tau_3`.
pub fn approx_number_inequality() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let (spec, ex) = example_hoelder()?;
        let root = low_degree_root(&spec, 64)?;
        let b1 = ex.estimate.b_hat * spec.volume();
        let l = 3;
        let mut all = true;
        let mut tightest = f64::INFINITY;
        for mu in 2..=32u32 {
            let rule = jackson_rule(mu, l, 0);
            let jp = make_jackson(&spec.space, l, mu, &rule)?;
            let r = check_theorem43(&root, &jp, EXAMPLE_BETA, b1, &rule)?;
            all &= r.holds;
            tightest = tightest.min(r.rhs / r.lhs);
        }
        Ok((all, format!("B1 = {b1:.6}; holds for all mu in 2..32: {all}; min rhs/lhs = {tightest:.3}")))
    };
    CriterionResult::from_result(8, "approximation-number inequality", run())
}

/// Square root of the example operator restricted to degrees `<= n_keep`.
/// Approximation numbers with index up to `d_{n_keep}` are unaffected.
fn low_degree_root(spec: &ZonalKernelSpec, n_keep: usize) -> Result<DiagonalOperator> {
    let op = operator_from_kernel(spec);
    let entries: Vec<SpectralEntry> = op.entries.into_iter().take(n_keep + 1).collect();
    sqrt_op(&DiagonalOperator::new(spec.space, entries))
}

/// Criterion 9: Boundedness of `a_{(qn)^3}(sqrt K) n^(beta/2)` and of
/// `a_j j^(beta/(2m))`.
pub fn scaled_decay_boundedness() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let spec = example_kernel(EXAMPLE_M, EXAMPLE_BETA, EXAMPLE_N_TRUNC)?;
        let root = sqrt_op(&operator_from_kernel(&spec))?;
        let q = choose_q(&spec.space, 8)?;
        let r = check_theorem54(&root, EXAMPLE_BETA, q, 8)?;
        let first = r.rows[0].scaled;
        let seq_ok = r.rows.iter().all(|row| row.scaled <= 2.0 * first);
        let cor_ok = r.index_sup.is_finite() && r.index_sup_upper_half <= r.index_sup;
        Ok((
            seq_ok && cor_ok,
            format!(
                "q = {q}; max_n a_(qn)^3 n^0.25 = {:.4e} vs 2 x first = {:.4e}; sup_j<={} a_j j^(1/12) = {:.4e} at j={} (upper half {:.3e})",
                r.sup,
                2.0 * first,
                (8 * q).pow(3),
                r.index_sup,
                r.index_argmax,
                r.index_sup_upper_half
            ),
        ))
    };
    CriterionResult::from_result(9, "scaled approximation-number boundedness", run())
}

/// Slopes of the example kernel's sorted eigenvalues over the decades
/// `[50, 5000]`, `[500, 50000]` and `[5000, 500000]`.
pub fn decay_slopes_by_decade() -> Result<Vec<((usize, usize), f64)>> {
    let spec = example_kernel(EXAMPLE_M, EXAMPLE_BETA, EXAMPLE_N_TRUNC)?;
    let eig = approx_numbers(&operator_from_kernel(&spec), 500_000);
    [(50, 5000), (500, 50_000), (5000, 500_000)]
        .into_iter()
        .map(|(a, b)| Ok(((a, b), decay_fit(&eig, a, b)?.slope)))
        .collect()
}

/// Criterion 10: Eigenvalue decay slope of the example kernel over `j = 50..5000`.
///
/// The exact spectrum gives about -1.62 on this range: the multiplicities
/// sum to `(n+1)(n+2)(2n+3)/6`, not `n^3/3`, and at degrees 5..24 the
/// difference steepens the slope. Later decades are reported to show the
/// approach to -1.5.
pub fn eigenvalue_decay() -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let slopes = decay_slopes_by_decade()?;
        let slope = slopes[0].1;
        let m = EXAMPLE_M as f64;
        let target = -(2.0 * m + EXAMPLE_BETA - 2.0) / m;
        let improved = -(1.0 + EXAMPLE_BETA / m);
        let ok = (slope - target).abs() <= DECAY_SLOPE_TOL && slope <= improved;
        let later = slopes[1..]
            .iter()
            .map(|((a, b), s)| format!("[{a}, {b}]: {s:.4}"))
            .collect::<Vec<_>>()
            .join(", ");
        Ok((
            ok,
            format!(
                "slope over [50, 5000] = {slope:.4} (target {target:.4} +- {DECAY_SLOPE_TOL}); <= {improved:.4}: {}; later decades {later}",
                slope <= improved
            ),
        ))
    };
    CriterionResult::from_result(10, "eigenvalue decay rate", run())
}

/// Criterion 11: Sorting equals exhaustive minimization over truncation supports on
/// small diagonal operators.
pub fn small_instance_minimality(seed: u64) -> CriterionResult {
    let run = || -> Result<(bool, String)> {
        let s2 = space_params(Family::Sphere, 2)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cases: Vec<Vec<(f64, u64)>> = vec![
            vec![(4.0, 1)],
            vec![(3.0, 2), (5.0, 1)],
            vec![(1.0, 1), (1.0, 3), (0.5, 5), (0.0, 3)],
        ];
        for _ in 0..200 {
            let mut left = 12u64;
            let mut case = Vec::new();
            while left > 0 && rng.gen_bool(0.8) {
                let mult = rng.gen_range(1..=left.min(5));
                // repeated values exercise ties
                let v = (rng.gen_range(0..8) as f64) * 0.5;
                case.push((v, mult));
                left -= mult;
            }
            if !case.is_empty() {
                cases.push(case);
            }
        }
        let mut checked = 0;
        let mut mismatches = 0;
        for case in &cases {
            let entries = case
                .iter()
                .enumerate()
                .map(|(n, &(value, multiplicity))| SpectralEntry {
                    degree: n,
                    value,
                    multiplicity,
                })
                .collect();
            let op = DiagonalOperator::new(s2, entries);
            let flat = op.flattened(12)?;
            let a = approx_numbers(&op, flat.len() + 1);
            for j in 1..=flat.len() + 1 {
                checked += 1;
                if a[j - 1] != brute_force_approx_number(&flat, j) {
                    mismatches += 1;
                }
            }
        }
        Ok((
            mismatches == 0,
            format!("{} operators, {checked} indices, {mismatches} mismatches", cases.len()),
        ))
    };
    CriterionResult::from_result(11, "small-instance minimality", run())
}

fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v: Vec3 = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if n2 > 1e-3 && n2 <= 1.0 {
            let n = n2.sqrt();
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Criterion 12: Direct circle averaging against the multiplier `P_n(cos t)` on
/// degree-`n` harmonics, `n <= 8`, 20 random `(x, t)` each.
pub fn translation_cross_check(seed: u64) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for n in 0..=8usize {
        // a generic degree-n harmonic: combination of zonal harmonics about random poles
        let poles: Vec<(Vec3, f64)> = (0..4).map(|_| (random_unit(&mut rng), rng.gen_range(-1.0..1.0))).collect();
        let f = |x: &Vec3| {
            poles
                .iter()
                .map(|(p, c)| c * jacobi_eval(0.0, 0.0, n, p[0] * x[0] + p[1] * x[1] + p[2] * x[2]))
                .sum::<f64>()
        };
        for _ in 0..20 {
            let x = random_unit(&mut rng);
            let t = rng.gen_range(0.01..PI - 0.01);
            let direct = translate_direct(f, t, DEFAULT_CIRCLE_POINTS)(&x);
            let spectral = jacobi_eval(0.0, 0.0, n, t.cos()) * f(&x);
            worst = worst.max((direct - spectral).abs());
        }
    }
    CriterionResult::new(
        12,
        "translation cross-check",
        worst < TRANSLATION_TOL,
        format!("max |S_t f - P_n(cos t) f| = {worst:.2e} over n <= 8, 20 points each (< {TRANSLATION_TOL:.0e})"),
    )
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        normalization_all_families(),
        moment_bound(),
        normalizer_bounds(),
        multiplier_rank(),
        funk_hecke_equivalence(),
        operator_norm_identity(),
        hoelder_upper_bound(),
        approx_number_inequality(),
        scaled_decay_boundedness(),
        eigenvalue_decay(),
        small_instance_minimality(seed),
        translation_cross_check(seed),
    ]
}
