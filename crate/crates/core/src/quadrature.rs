//! Composite Gauss-Legendre rules on `(0, pi)`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
///
/// Newton iteration on `P_n` from the Tricomi initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub panels: usize,
    pub order: usize,
}

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 64;
/// Points per panel used when callers do not pick one.
pub const DEFAULT_ORDER: usize = 20;

/// `panels` equal subintervals of `(0, pi)`, each carrying an `order`-point
/// Gauss rule.
pub fn build_rule(panels: usize, order: usize) -> Result<QuadratureRule> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return domain(format!("quadrature order must lie in [2, 64], got {order}"));
    }
    if panels == 0 {
        return domain("quadrature needs at least one panel");
    }
    let (x, w) = gauss_legendre(order);
    let h = PI / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let left = p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(left + 0.5 * h * (xi + 1.0));
            weights.push(0.5 * h * wi);
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        panels,
        order,
    })
}

/// Panel count for integrands built from `sin(mu t / 2)^(2l)` and zonal
/// functions up to degree `n_extra`: one panel per oscillation, at least 8.
pub fn recommend_panels(mu: usize, l: usize, n_extra: usize) -> usize {
    (mu * l + n_extra).max(8)
}

impl QuadratureRule {
    /// A rule fine enough for Jackson integrands with the given parameters.
    pub fn for_jackson(mu: usize, l: usize, n_extra: usize) -> QuadratureRule {
        build_rule(recommend_panels(mu, l, n_extra), DEFAULT_ORDER).expect("default order is valid")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same rule with twice as many panels.
    pub fn refined(&self) -> QuadratureRule {
        build_rule(2 * self.panels, self.order).expect("refining a valid rule")
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        integrate(f, self)
    }
}

/// `sum_i w_i f(x_i)`, summed in node order with Neumaier compensation.
pub fn integrate<F: Fn(f64) -> f64>(f: F, rule: &QuadratureRule) -> Result<f64> {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { node: x, value: v });
        }
        let term = w * v;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    Ok(sum + comp)
}
