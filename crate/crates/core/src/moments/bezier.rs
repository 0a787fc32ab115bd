//! Bernstein polynomials in barycentric form and de Casteljau evaluation.

use std::collections::HashMap;

use crate::error::{invalid, Result};
use crate::multiindex::{binomial, enumerate_indices, multinomial, IndexConstraint, MultiIndex};

fn check_barycentric(t: &[f64]) -> Result<()> {
    let sum: f64 = t.iter().sum();
    if t.iter().any(|&v| !(v >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
        return invalid(format!("{t:?} is not a barycentric point"));
    }
    Ok(())
}

/// `B_l^m(t) = (m choose l) t^l`.
pub fn bernstein(l: &MultiIndex, m: u32, t: &[f64]) -> Result<f64> {
    if l.order() != m {
        return invalid(format!("Bernstein index {l} has order {} but degree is {m}", l.order()));
    }
    if l.dim() != t.len() {
        return invalid("Bernstein index and point have different lengths");
    }
    check_barycentric(t)?;
    Ok(multinomial(m, l)? as f64 * l.pow(t))
}

/// Coefficients `p_l`, `|l| = m`, of a Bézier polynomial in `n+1`
/// barycentric variables.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierCoefficients {
    degree: u32,
    arity: usize,
    coeffs: HashMap<MultiIndex, f64>,
}

impl BezierCoefficients {
    pub fn new(degree: u32, arity: usize, coeffs: HashMap<MultiIndex, f64>) -> Result<Self> {
        if arity == 0 {
            return invalid("Bézier polynomial needs at least one barycentric variable");
        }
        let expected = binomial(degree + arity as u32 - 1, arity as u32 - 1);
        if coeffs.len() as f64 != expected {
            return invalid(format!(
                "degree {degree} in {arity} variables needs {expected} coefficients, got {}",
                coeffs.len()
            ));
        }
        if let Some(bad) = coeffs.keys().find(|l| l.dim() != arity || l.order() != degree) {
            return invalid(format!("coefficient index {bad} does not match degree {degree}"));
        }
        Ok(Self { degree, arity, coeffs })
    }

    pub fn from_fn(degree: u32, arity: usize, mut f: impl FnMut(&MultiIndex) -> f64) -> Self {
        let coeffs = enumerate_indices(IndexConstraint::Order(degree), arity)
            .into_iter()
            .map(|l| {
                let v = f(&l);
                (l, v)
            })
            .collect();
        Self { degree, arity, coeffs }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, l: &MultiIndex) -> Option<f64> {
        self.coeffs.get(l).copied()
    }
}

/// Evaluates `q(t) = Σ p_l B_l^m(t)` by `m` rounds of convex-combination
/// reduction `p_l ← Σ_i t_i p_{l+e_i}`. Indices are visited in graded
/// lexicographic order and the inner sum runs over `i` ascending, so the
/// result is reproducible bit for bit.
pub fn decasteljau(coeffs: &BezierCoefficients, t: &[f64]) -> Result<f64> {
    if t.len() != coeffs.arity {
        return invalid(format!(
            "point has {} barycentric coordinates, polynomial has {}",
            t.len(),
            coeffs.arity
        ));
    }
    check_barycentric(t)?;
    let arity = coeffs.arity;
    let mut level: HashMap<MultiIndex, f64> = coeffs.coeffs.clone();
    for m in (0..coeffs.degree).rev() {
        let mut next = HashMap::with_capacity(level.len());
        for l in enumerate_indices(IndexConstraint::Order(m), arity) {
            let mut v = 0.0;
            for (i, &ti) in t.iter().enumerate() {
                v += ti * level[&l.plus_unit(i)];
            }
            next.insert(l, v);
        }
        level = next;
    }
    Ok(level[&MultiIndex::zeros(arity)])
}
