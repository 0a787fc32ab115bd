//! Gauss–Jacobi rules for Beta weights and tensor integration of Dirichlet
//! averages over the standard simplex.
//!
//! The simplex is mapped to the unit cube by stick breaking,
//! `t_1 = v_1`, `t_2 = (1 - v_1) v_2`, ..., `t_0 = ∏ (1 - v_k)`. Under the
//! Dirichlet law the `v_k` are independent Beta variables, so every axis gets
//! a Gauss–Jacobi rule whose weight function absorbs the density, including
//! its integrable endpoint singularities.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Accuracy targets for quadrature and Monte-Carlo integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Largest number of Gauss nodes per axis.
    pub max_nodes: usize,
    /// Seed for the Monte-Carlo path.
    pub seed: u64,
    /// Sample cap for the Monte-Carlo path.
    pub max_samples: u64,
}

impl Default for IntegrationControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_nodes: 128,
            seed: 0x5eed_d1c1,
            max_samples: 10_000_000,
        }
    }
}

impl IntegrationControl {
    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// An integral value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    /// Nodes per axis (quadrature) or samples drawn (Monte Carlo).
    pub effort: u64,
}

/// Nodes and weights on `[0, 1]` for the normalized weight
/// `v^(p-1) (1-v)^(q-1) / B(p, q)`; the weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl BetaRule {
    /// Golub–Welsch on the Jacobi matrix of the weight `(1-x)^α (1+x)^β`
    /// with `α = q - 1`, `β = p - 1`, mapped from `[-1, 1]` to `[0, 1]`.
    pub fn new(p: f64, q: f64, nodes: usize) -> Result<Self> {
        if !(p > 0.0 && q > 0.0) || !p.is_finite() || !q.is_finite() {
            return invalid(format!("Beta rule needs positive finite shape parameters, got ({p}, {q})"));
        }
        if nodes == 0 {
            return invalid("Beta rule needs at least one node");
        }
        let alpha = q - 1.0;
        let beta = p - 1.0;
        let ab = alpha + beta;
        let mut jacobi = DMatrix::<f64>::zeros(nodes, nodes);
        for k in 0..nodes {
            let kf = k as f64;
            let diag = if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
            };
            jacobi[(k, k)] = diag;
            if k + 1 < nodes {
                let j = kf + 1.0;
                let off2 = if k == 0 {
                    4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
                } else {
                    4.0 * j * (j + alpha) * (j + beta) * (j + ab)
                        / ((2.0 * j + ab).powi(2) * (2.0 * j + ab + 1.0) * (2.0 * j + ab - 1.0))
                };
                let off = off2.sqrt();
                jacobi[(k, k + 1)] = off;
                jacobi[(k + 1, k)] = off;
            }
        }
        let eig = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = (0..nodes)
            .map(|i| {
                let x = eig.eigenvalues[i];
                let v0 = eig.eigenvectors[(0, i)];
                (0.5 * (x + 1.0), v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0.clamp(0.0, 1.0)).collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
        })
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&v, &w)| w * f(v))
            .sum()
    }
}

/// Tensor product of Beta rules, one per independent Beta factor.
#[derive(Debug, Clone)]
pub struct BetaTensor {
    rules: Vec<BetaRule>,
}

impl BetaTensor {
    pub fn new(shapes: &[(f64, f64)], nodes: usize) -> Result<Self> {
        let rules = shapes
            .iter()
            .map(|&(p, q)| BetaRule::new(p, q, nodes))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rules })
    }

    /// `E[f(v)]` with `v_k ~ Beta(p_k, q_k)` independent.
    pub fn integrate(&self, f: &mut dyn FnMut(&[f64]) -> f64) -> f64 {
        let mut v = vec![0.0; self.rules.len()];
        self.walk(0, 1.0, &mut v, f)
    }

    fn walk(&self, axis: usize, weight: f64, v: &mut Vec<f64>, f: &mut dyn FnMut(&[f64]) -> f64) -> f64 {
        if axis == self.rules.len() {
            return weight * f(v);
        }
        let rule = &self.rules[axis];
        let mut acc = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            v[axis] = x;
            acc += self.walk(axis + 1, weight * w, v, f);
        }
        acc
    }
}

/// Beta shapes of the stick-breaking factors for Dirichlet parameters
/// `b_0..b_n`: `v_k ~ Beta(b_k, b_0 + b_{k+1} + ... + b_n)` for `k = 1..n`.
pub fn stick_breaking_shapes(b: &[f64]) -> Vec<(f64, f64)> {
    let n = b.len() - 1;
    (1..=n)
        .map(|k| (b[k], b[0] + b[k + 1..].iter().sum::<f64>()))
        .collect()
}

/// Writes the barycentric point `(t_0, ..., t_n)` for stick fractions `v`.
pub fn stick_breaking_point(v: &[f64], t: &mut [f64]) {
    let mut rest = 1.0;
    for (k, &vk) in v.iter().enumerate() {
        t[k + 1] = rest * vk;
        rest *= 1.0 - vk;
    }
    t[0] = rest;
}

/// Runs `eval(nodes)` for doubling node counts until two successive values
/// agree to the control's target.
pub fn by_order_doubling(ctrl: &IntegrationControl, mut eval: impl FnMut(usize) -> Result<f64>) -> Result<Estimate> {
    let mut nodes = 8usize.min(ctrl.max_nodes.max(1));
    let mut prev = eval(nodes)?;
    loop {
        let next_nodes = (nodes * 2).min(ctrl.max_nodes);
        if next_nodes == nodes {
            return Err(Error::Accuracy {
                estimate: prev,
                error: f64::NAN,
            });
        }
        let cur = eval(next_nodes)?;
        let err = (cur - prev).abs();
        if !cur.is_finite() {
            return Err(Error::Accuracy {
                estimate: cur,
                error: f64::INFINITY,
            });
        }
        if err <= ctrl.target(cur) {
            return Ok(Estimate {
                value: cur,
                error: err,
                effort: next_nodes as u64,
            });
        }
        if next_nodes == ctrl.max_nodes {
            return Err(Error::Accuracy {
                estimate: cur,
                error: err,
            });
        }
        prev = cur;
        nodes = next_nodes;
    }
}

/// Adaptive `∫_{E_n} f(t) φ_b(t) dt` where `f` receives barycentric
/// coordinates `(t_0, ..., t_n)`.
pub fn dirichlet_average(
    b: &[f64],
    ctrl: &IntegrationControl,
    f: impl Fn(&[f64]) -> f64,
) -> Result<Estimate> {
    if b.is_empty() {
        return invalid("Dirichlet average needs at least one parameter");
    }
    if b.len() == 1 {
        let v = f(&[1.0]);
        return Ok(Estimate {
            value: v,
            error: 0.0,
            effort: 1,
        });
    }
    let shapes = stick_breaking_shapes(b);
    let mut t = vec![0.0; b.len()];
    by_order_doubling(ctrl, |nodes| {
        let tensor = BetaTensor::new(&shapes, nodes)?;
        Ok(tensor.integrate(&mut |v| {
            stick_breaking_point(v, &mut t);
            f(&t)
        }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta_moment(p: f64, q: f64, k: i32) -> f64 {
        // E[v^k] = ∏_{i<k} (p+i)/(p+q+i)
        (0..k).map(|i| (p + i as f64) / (p + q + i as f64)).product()
    }

    #[test]
    fn beta_rule_is_exact_for_polynomials() {
        for &(p, q) in &[(1.0, 1.0), (0.3, 2.5), (4.0, 0.6), (0.5, 0.5)] {
            let rule = BetaRule::new(p, q, 10).unwrap();
            for k in 0..19 {
                let got = rule.integrate(|v| v.powi(k));
                let want = beta_moment(p, q, k);
                assert!((got - want).abs() < 1e-13, "p={p} q={q} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn beta_rule_rejects_bad_shapes() {
        assert!(BetaRule::new(0.0, 1.0, 4).is_err());
        assert!(BetaRule::new(1.0, 1.0, 0).is_err());
    }

    #[test]
    fn uniform_simplex_average() {
        // E[t_1 t_2] = 1/12 on the uniform 2-simplex.
        let est = dirichlet_average(&[1.0, 1.0, 1.0], &IntegrationControl::default(), |t| t[1] * t[2]).unwrap();
        assert!((est.value - 1.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn singular_weights_are_absorbed() {
        // E[t_1] = b_1 / c for b = (0.2, 0.3).
        let est = dirichlet_average(&[0.2, 0.3], &IntegrationControl::default(), |t| t[1]).unwrap();
        assert!((est.value - 0.6).abs() < 1e-14);
    }
}
