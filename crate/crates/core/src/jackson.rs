//! Generalized Jackson kernels
//! `D_nu(t) = k_nu^-1 (sin(mu t/2) / sin(t/2))^(2l)`, `nu = l (mu - 1)`,
//! normalized to unit mass against the weight `alpha(t)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quadrature::{recommend_panels, QuadratureRule};
use crate::spaces::{weight_unchecked, SpaceParams};
use crate::specfun::zonal_phi_all;

/// Below this `t` the sine ratio is replaced by its limit `mu`.
const SMALL_T: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacksonParams {
    pub space: SpaceParams,
    pub l: u32,
    pub mu: u32,
    pub nu: u32,
    pub k_nu: f64,
}

/// `(sin(mu t/2) / sin(t/2))^(2l)`, unnormalized.
#[inline]
pub fn jackson_core(l: u32, mu: u32, t: f64) -> f64 {
    let ratio = if t.abs() < SMALL_T {
        mu as f64
    } else {
        (0.5 * mu as f64 * t).sin() / (0.5 * t).sin()
    };
    ratio.powi(2 * l as i32)
}

fn check_resolution(rule: &QuadratureRule, need: usize) -> Result<()> {
    if rule.panels < need {
        return Err(Error::UnderResolved {
            have: rule.panels,
            need,
        });
    }
    Ok(())
}

/// Computes `k_nu = int_0^pi (sin(mu t/2)/sin(t/2))^(2l) alpha(t) dt`.
pub fn make_jackson(space: &SpaceParams, l: u32, mu: u32, rule: &QuadratureRule) -> Result<JacksonParams> {
    if l < 1 {
        return domain("Jackson kernel requires l >= 1");
    }
    if mu < 1 {
        return domain("Jackson kernel requires mu >= 1");
    }
    check_resolution(rule, recommend_panels(mu as usize, l as usize, 0))?;
    let k_nu = rule.integrate(|t| jackson_core(l, mu, t) * weight_unchecked(space, t))?;
    if !(k_nu > 0.0) {
        return Err(Error::Internal(format!("non-positive normalizer {k_nu}")));
    }
    Ok(JacksonParams {
        space: *space,
        l,
        mu,
        nu: l * (mu - 1),
        k_nu,
    })
}

/// Lower bound `2^(2l+b) / (m pi^(2l-1)) mu^(2l-m)` for the normalizer,
/// valid for `mu >= 2`.
pub fn normalizer_lower_bound(space: &SpaceParams, l: u32, mu: u32) -> f64 {
    let (l, m) = (l as i32, space.m as i32);
    2f64.powi(2 * l + space.b as i32) / (m as f64 * PI.powi(2 * l - 1)) * (mu as f64).powi(2 * l - m)
}

impl JacksonParams {
    #[inline]
    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        jackson_core(self.l, self.mu, t) / self.k_nu
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        jackson_eval(self, t)
    }

    pub fn lower_bound(&self) -> f64 {
        normalizer_lower_bound(&self.space, self.l, self.mu)
    }
}

/// `D_nu(t)` for `t` in `(0, pi]`.
pub fn jackson_eval(params: &JacksonParams, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= PI) {
        return domain(format!("jackson_eval requires t in (0, pi], got {t}"));
    }
    Ok(params.eval_unchecked(t))
}

/// `int_0^pi D_nu(t) alpha(t) dt`; one by construction when `rule` is the
/// rule the normalizer was computed with.
pub fn normalization(params: &JacksonParams, rule: &QuadratureRule) -> Result<f64> {
    rule.integrate(|t| params.eval_unchecked(t) * weight_unchecked(&params.space, t))
}

/// `J = int_0^pi D_nu(t) t^gamma alpha(t) dt`, subject to `2l > gamma + m`.
pub fn moment(params: &JacksonParams, gamma: f64, rule: &QuadratureRule) -> Result<f64> {
    let m = params.space.m as f64;
    if !(gamma > 0.0) {
        return domain("moment requires gamma > 0");
    }
    if !(2.0 * params.l as f64 > gamma + m) {
        return domain(format!(
            "moment requires 2l > gamma + m (l = {}, gamma = {gamma}, m = {m})",
            params.l
        ));
    }
    check_resolution(rule, recommend_panels(params.mu as usize, params.l as usize, 0))?;
    rule.integrate(|t| params.eval_unchecked(t) * t.powf(gamma) * weight_unchecked(&params.space, t))
}

/// `c_{m,gamma,l} = m pi^(4l-1) / 2^(4l-gamma) * (1/(gamma+m) + 1/(2l-(gamma+m)))`.
pub fn lemma51_constant(m: u32, gamma: f64, l: u32) -> Result<f64> {
    let (mf, lf) = (m as f64, l as f64);
    if !(gamma > 0.0) {
        return domain("constant requires gamma > 0");
    }
    if !(2.0 * lf > gamma + mf) {
        return domain(format!("constant requires 2l > gamma + m (l = {l}, gamma = {gamma}, m = {m})"));
    }
    let prefactor = mf * PI.powf(4.0 * lf - 1.0) / 2f64.powf(4.0 * lf - gamma);
    Ok(prefactor * (1.0 / (gamma + mf) + 1.0 / (2.0 * lf - (gamma + mf))))
}

/// Spectral symbol of the smoothing operator `Phi_nu`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierSequence {
    pub params: JacksonParams,
    pub values: Vec<f64>,
}

impl MultiplierSequence {
    pub fn n_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// `m_nu(n)`, zero beyond the computed range.
    pub fn get(&self, n: usize) -> f64 {
        self.values.get(n).copied().unwrap_or(0.0)
    }
}

/// `m_nu(n) = int_0^pi D_nu(t) phi_n(t) alpha(t) dt` for `n = 0..=n_max`.
pub fn multipliers(params: &JacksonParams, n_max: usize, rule: &QuadratureRule) -> Result<MultiplierSequence> {
    check_resolution(rule, recommend_panels(params.mu as usize, params.l as usize, n_max))?;
    let mut acc = vec![0.0; n_max + 1];
    let mut phi = Vec::with_capacity(n_max + 1);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let base = w * params.eval_unchecked(t) * weight_unchecked(&params.space, t);
        if !base.is_finite() {
            return Err(Error::NonFinite { node: t, value: base });
        }
        zonal_phi_all(&params.space, n_max, t, &mut phi);
        for (a, p) in acc.iter_mut().zip(&phi) {
            *a += base * p;
        }
    }
    Ok(MultiplierSequence {
        params: *params,
        values: acc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::build_rule;
    use crate::spaces::{space_params, Family};
    use approx::assert_abs_diff_eq;

    fn rule(mu: u32, l: u32, n: usize) -> QuadratureRule {
        QuadratureRule::for_jackson(mu as usize, l as usize, n)
    }

    #[test]
    fn fejer_normalizer_on_circle() {
        // int_0^pi (sin(mu t/2)/sin(t/2))^2 dt = mu pi
        let s1 = space_params(Family::Sphere, 1).unwrap();
        for mu in 1..=12 {
            let jp = make_jackson(&s1, 1, mu, &rule(mu, 1, 0)).unwrap();
            assert_abs_diff_eq!(jp.k_nu, mu as f64 * PI, epsilon = 1e-10);
        }
    }

    #[test]
    fn mu_one_is_constant() {
        let s3 = space_params(Family::Sphere, 3).unwrap();
        let r = rule(1, 2, 0);
        let jp = make_jackson(&s3, 2, 1, &r).unwrap();
        assert_eq!(jp.nu, 0);
        let k0 = r.integrate(|t| weight_unchecked(&s3, t)).unwrap();
        assert_abs_diff_eq!(jp.k_nu, k0, epsilon = 1e-12);
        for t in [0.1, 1.0, 3.0] {
            assert_abs_diff_eq!(jp.eval(t).unwrap(), 1.0 / k0, epsilon = 1e-14);
        }
    }

    #[test]
    fn eval_values() {
        let s2 = space_params(Family::Sphere, 2).unwrap();
        let jp = make_jackson(&s2, 1, 2, &rule(2, 1, 0)).unwrap();
        assert_abs_diff_eq!(jp.eval(PI / 2.0).unwrap(), 2.0 / jp.k_nu, epsilon = 1e-14);
        let jp = make_jackson(&s2, 3, 5, &rule(5, 3, 0)).unwrap();
        let lim = 5f64.powi(6) / jp.k_nu;
        assert_abs_diff_eq!(jp.eval(1e-13).unwrap(), lim, epsilon = 1e-12 * lim);
        assert_abs_diff_eq!(jp.eval(1e-7).unwrap(), lim, epsilon = 1e-9 * lim);
        assert!(jp.eval(0.0).is_err());
        assert!(jp.eval(3.5).is_err());
        assert!(jp.eval(PI).is_ok());
    }

    #[test]
    fn under_resolved_rule_rejected() {
        let s2 = space_params(Family::Sphere, 2).unwrap();
        let coarse = build_rule(4, 20).unwrap();
        assert!(matches!(
            make_jackson(&s2, 2, 16, &coarse),
            Err(Error::UnderResolved { have: 4, need: 32 })
        ));
    }

    #[test]
    fn normalizer_lower_bound_example() {
        let s2 = space_params(Family::Sphere, 2).unwrap();
        let jp = make_jackson(&s2, 2, 8, &rule(8, 2, 0)).unwrap();
        let bound = 2f64.powi(5) / (2.0 * PI.powi(3)) * 64.0;
        assert_abs_diff_eq!(jp.lower_bound(), bound, epsilon = 1e-12);
        assert!(jp.k_nu >= bound);
    }

    #[test]
    fn normalizer_lower_bound_all_families() {
        for f in Family::ALL {
            let s = space_params(f, f.min_dimension()).unwrap();
            for l in [s.m, 2 * s.m] {
                for mu in [2, 4, 8, 16, 32] {
                    let jp = make_jackson(&s, l, mu, &rule(mu, l, 0)).unwrap();
                    assert!(jp.k_nu >= jp.lower_bound(), "{f} l={l} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn constant_formula() {
        let c = lemma51_constant(2, 1.0, 2).unwrap();
        assert_abs_diff_eq!(c, PI.powi(7) / 48.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c, 62.92, epsilon = 5e-3);
        let direct = 2.0 * PI.powi(7) / 2f64.powf(7.75) * (1.0 / 2.25 + 1.0 / 1.75);
        assert_abs_diff_eq!(lemma51_constant(2, 0.25, 2).unwrap(), direct, epsilon = 1e-12);
        // blow-up as 2l - (gamma + m) -> 0+
        let mut prev = 0.0;
        for eps in [0.5, 0.1, 0.01, 1e-4] {
            let c = lemma51_constant(2, 2.0 - eps, 2).unwrap();
            assert!(c > prev);
            prev = c;
        }
        assert!(lemma51_constant(2, 2.0, 2).is_err());
        assert!(lemma51_constant(2, 0.0, 2).is_err());
    }

    #[test]
    fn moment_hypothesis() {
        let s2 = space_params(Family::Sphere, 2).unwrap();
        let jp = make_jackson(&s2, 1, 4, &rule(4, 1, 0)).unwrap();
        match moment(&jp, 1.0, &rule(4, 1, 0)) {
            Err(Error::Domain(msg)) => assert!(msg.contains("2l > gamma + m")),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn moment_limits() {
        let s2 = space_params(Family::Sphere, 2).unwrap();
        let r = rule(6, 2, 0);
        let jp = make_jackson(&s2, 2, 6, &r).unwrap();
        let tiny = moment(&jp, 1e-12, &r).unwrap();
        assert_abs_diff_eq!(tiny, normalization(&jp, &r).unwrap(), epsilon = 1e-10);

        let r1 = rule(1, 2, 0);
        let jp1 = make_jackson(&s2, 2, 1, &r1).unwrap();
        let gamma = 0.7;
        let expected = r1.integrate(|t| t.powf(gamma) * t.sin()).unwrap() / 2.0;
        assert_abs_diff_eq!(moment(&jp1, gamma, &r1).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn moments_bounded_by_constant() {
        let s2 = space_params(Family::Sphere, 2).unwrap();
        let c = lemma51_constant(2, 1.0, 2).unwrap();
        for mu in 2..=64 {
            let r = rule(mu, 2, 0);
            let jp = make_jackson(&s2, 2, mu, &r).unwrap();
            let j = moment(&jp, 1.0, &r).unwrap();
            assert!(j * mu as f64 <= c, "mu={mu}");
        }
    }

    #[test]
    fn multiplier_properties() {
        let s2 = space_params(Family::Sphere, 2).unwrap();
        let (l, mu) = (2, 6);
        let n_max = 30;
        let r = rule(mu, l, n_max);
        let jp = make_jackson(&s2, l, mu, &r).unwrap();
        let ms = multipliers(&jp, n_max, &r).unwrap();
        assert_eq!(jp.nu, 10);
        assert_abs_diff_eq!(ms.values[0], 1.0, epsilon = 1e-10);
        for n in 11..=n_max {
            assert!(ms.values[n].abs() < 1e-8, "n={n} m={}", ms.values[n]);
        }
        assert!(ms.values.iter().all(|v| v.abs() <= 1.0 + 1e-10));
        assert_eq!(ms.get(1000), 0.0);
    }

    #[test]
    fn degenerate_multiplier_is_projection_onto_constants() {
        let s3 = space_params(Family::Sphere, 3).unwrap();
        let r = rule(1, 2, 12);
        let jp = make_jackson(&s3, 2, 1, &r).unwrap();
        let ms = multipliers(&jp, 12, &r).unwrap();
        assert_abs_diff_eq!(ms.values[0], 1.0, epsilon = 1e-12);
        for v in &ms.values[1..] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_nonnegative() {
        let s2 = space_params(Family::Sphere, 2).unwrap();
        let jp = make_jackson(&s2, 2, 9, &rule(9, 2, 0)).unwrap();
        for i in 1..=1000 {
            assert!(jp.eval(PI * i as f64 / 1000.0).unwrap() >= 0.0);
        }
    }
}
