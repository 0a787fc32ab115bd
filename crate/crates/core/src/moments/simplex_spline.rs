//! Moments of simplex splines `M(·|X)` (all Dirichlet parameters equal to
//! one) by the knot/order recursion, seeded with nested Bézier sums.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::bezier::{decasteljau, BezierCoefficients};
use crate::error::{invalid, Error, Result};
use crate::multiindex::{enumerate_indices, factorial, multinomial, IndexConstraint, MultiIndex};
use crate::simplex::{oracle_moment_capped, DirichletParams, KnotSet};
use crate::OracleCaps;

/// `m_{d_l}(X̄_k)`, the average of coordinate `l` (0-based) over the first
/// `k+1` knots.
pub fn first_moment_prefix(knots: &KnotSet, k: usize, l: usize) -> Result<f64> {
    if k < knots.dim() || k > knots.degree() {
        return invalid(format!(
            "prefix length {k} outside [s, n] = [{}, {}]",
            knots.dim(),
            knots.degree()
        ));
    }
    if l >= knots.dim() {
        return invalid(format!("coordinate {l} out of range"));
    }
    Ok(knots.points()[..=k].iter().map(|p| p[l]).sum::<f64>() / (k + 1) as f64)
}

/// `m_β(X)` for exactly `s+1` knots in the nonnegative orthant, as the
/// nested Bézier sum
///
/// ```text
/// g^β n!/(|β|+n)! Σ_{|k_1|=β_1} B(ỹ^1) ... Σ_{|k_s|=β_s} B(ỹ^s) η!
/// ```
///
/// with `g_i = |y^i|`, `ỹ^i = y^i / g_i` and `η = k_1 + ... + k_s`. The
/// innermost sum is a Bézier polynomial in `ỹ^s` whose coefficients depend
/// on the outer indices; it is rebuilt per outer tuple and evaluated with
/// de Casteljau's algorithm.
pub fn base_moment(knots: &KnotSet, beta: &MultiIndex) -> Result<f64> {
    let s = knots.dim();
    if knots.len() != s + 1 {
        return invalid(format!("base moment needs s+1 = {} knots, got {}", s + 1, knots.len()));
    }
    if beta.dim() != s {
        return invalid(format!("moment order has {} entries for knots in R^{s}", beta.dim()));
    }
    if beta.is_zero() {
        return Ok(1.0);
    }
    if knots.points().iter().flatten().any(|&v| v < 0.0) {
        return Err(Error::Domain(
            "Bézier base moments need knots in the nonnegative orthant; use the expansion path".into(),
        ));
    }
    let rows: Vec<Vec<f64>> = (0..s).map(|l| knots.coordinate_row(l)).collect();
    let g: Vec<f64> = rows.iter().map(|r| r.iter().sum()).collect();
    if let Some(l) = g.iter().position(|&v| v <= 0.0) {
        return Err(Error::Domain(format!(
            "coordinate row {l} sums to zero; use the expansion path"
        )));
    }
    if !knots.volume_positive() {
        return Err(Error::DegenerateGeometry("the s+1 base knots are affinely dependent".into()));
    }
    let bary: Vec<Vec<f64>> = rows.iter().zip(&g).map(|(r, gi)| r.iter().map(|v| v / gi).collect()).collect();
    let n = s as u32;
    let scale: f64 = g.iter().zip(beta.entries()).map(|(gi, &e)| gi.powi(e as i32)).product::<f64>()
        / (n + 1..=n + beta.order()).map(f64::from).product::<f64>();
    let eta = vec![0u32; s + 1];
    Ok(scale * nested_sum(&bary, beta, 0, eta)?)
}

fn nested_sum(bary: &[Vec<f64>], beta: &MultiIndex, l: usize, eta: Vec<u32>) -> Result<f64> {
    let arity = eta.len();
    if l + 1 == bary.len() {
        let inner = BezierCoefficients::from_fn(beta[l], arity, |k| {
            eta.iter().zip(k.entries()).map(|(&a, &b)| factorial(a + b)).product()
        });
        return decasteljau(&inner, &bary[l]);
    }
    let mut total = 0.0;
    for k in enumerate_indices(IndexConstraint::Order(beta[l]), arity) {
        let weight = multinomial(beta[l], &k)? as f64 * k.pow(&bary[l]);
        if weight == 0.0 {
            continue;
        }
        let next: Vec<u32> = eta.iter().zip(k.entries()).map(|(a, b)| a + b).collect();
        total += weight * nested_sum(bary, beta, l + 1, next)?;
    }
    Ok(total)
}

/// How the `m_α(X̄_s)` seeds of a [`MomentTable`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseMethod {
    Bezier,
    Expansion,
}

/// Memo of simplex-spline moments `m_α(X̄_k)` keyed by prefix length `k`
/// and order `α`. The knots are stored in the table's own order, which puts
/// `s+1` affinely independent knots first.
#[derive(Debug, Clone)]
pub struct MomentTable {
    knots: KnotSet,
    orientation: Vec<usize>,
    entries: HashMap<(usize, MultiIndex), f64>,
    base: BaseMethod,
}

impl MomentTable {
    pub fn new(knots: &KnotSet) -> Result<Self> {
        if knots.degree() < knots.dim() {
            return invalid(format!(
                "simplex spline in R^{} needs at least {} knots, got {}",
                knots.dim(),
                knots.dim() + 1,
                knots.len()
            ));
        }
        let orientation = knots.independent_ordering().ok_or_else(|| {
            Error::DegenerateGeometry("no s+1 affinely independent knots (vol_s([X]) = 0)".into())
        })?;
        let knots = knots.permuted(&orientation);
        let base = if knots.points()[..=knots.dim()].iter().flatten().all(|&v| v >= 0.0)
            && (0..knots.dim()).all(|l| knots.points()[..=knots.dim()].iter().map(|p| p[l]).sum::<f64>() > 0.0)
        {
            BaseMethod::Bezier
        } else {
            BaseMethod::Expansion
        };
        Ok(Self {
            knots,
            orientation,
            entries: HashMap::new(),
            base,
        })
    }

    /// Knots in table order.
    pub fn knots(&self) -> &KnotSet {
        &self.knots
    }

    /// `orientation[i]` is the input index of the knot stored at position `i`.
    pub fn orientation(&self) -> &[usize] {
        &self.orientation
    }

    pub fn base_method(&self) -> BaseMethod {
        self.base
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: usize, alpha: &MultiIndex) -> Option<f64> {
        self.entries.get(&(k, alpha.clone())).copied()
    }

    fn base_value(&self, alpha: &MultiIndex) -> Result<f64> {
        let s = self.knots.dim();
        let prefix = self.knots.prefix(s)?;
        match self.base {
            BaseMethod::Bezier => base_moment(&prefix, alpha),
            BaseMethod::Expansion => oracle_moment_capped(
                &DirichletParams::ones(s + 1),
                &prefix,
                alpha,
                &OracleCaps {
                    max_order: u32::MAX,
                    max_degree: usize::MAX,
                },
            ),
        }
    }

    /// One step of the knot/order recursion with the newest knot deleted:
    /// `(k+|α|) m_α(X̄_k) = k m_α(X̄_{k-1}) + Σ_l α_l x^k_l m_{α-d_l}(X̄_k)`.
    /// Returns `None` if a dependency is missing.
    pub fn recompute(&self, k: usize, alpha: &MultiIndex) -> Option<f64> {
        let s = self.knots.dim();
        if alpha.is_zero() {
            return Some(1.0);
        }
        if k <= s {
            return None;
        }
        let xk = self.knots.point(k);
        let mut acc = k as f64 * self.get(k - 1, alpha)?;
        for (l, &a) in alpha.entries().iter().enumerate() {
            if a > 0 {
                let lower = alpha.minus_unit(l)?;
                acc += f64::from(a) * xk[l] * self.get(k, &lower)?;
            }
        }
        Some(acc / (k as f64 + f64::from(alpha.order())))
    }

    /// Fills the table for every `α <= β` and every prefix, and returns
    /// `m_β(X)`.
    pub fn moment(&mut self, beta: &MultiIndex) -> Result<f64> {
        let s = self.knots.dim();
        let n = self.knots.degree();
        if beta.dim() != s {
            return invalid(format!("moment order has {} entries for knots in R^{s}", beta.dim()));
        }
        if let Some(v) = self.get(n, beta) {
            return Ok(v);
        }
        let below = enumerate_indices(IndexConstraint::Below(beta), s);
        for k in s..=n {
            self.entries.insert((k, MultiIndex::zeros(s)), 1.0);
        }
        for alpha in below.iter().filter(|a| !a.is_zero()) {
            if !self.entries.contains_key(&(s, alpha.clone())) {
                let v = self.base_value(alpha)?;
                self.entries.insert((s, alpha.clone()), v);
            }
        }
        for k in s + 1..=n {
            for alpha in below.iter().filter(|a| !a.is_zero()) {
                if self.entries.contains_key(&(k, alpha.clone())) {
                    continue;
                }
                let v = self
                    .recompute(k, alpha)
                    .expect("graded order visits dependencies first");
                self.entries.insert((k, alpha.clone()), v);
            }
        }
        Ok(self.entries[&(n, beta.clone())])
    }
}

/// `m_β(X)` for the simplex spline `M(·|X)`: seeds `m_0(X̄_k) = 1`, computes
/// `m_α(X̄_s)` for `0 < α <= β` from nested Bézier sums (falling back to the
/// expansion when knots leave the nonnegative orthant), then climbs
/// `k = s+1, ..., n` with the knot/order recursion.
pub fn simplex_moment_recursive(knots: &KnotSet, beta: &MultiIndex, table: &mut MomentTable) -> Result<f64> {
    if beta.dim() != knots.dim() {
        return invalid(format!(
            "moment order has {} entries for knots in R^{}",
            beta.dim(),
            knots.dim()
        ));
    }
    if beta.is_zero() {
        return Ok(1.0);
    }
    table.moment(beta)
}

/// Convenience wrapper around [`simplex_moment_recursive`] with a fresh table.
pub fn simplex_moment(knots: &KnotSet, beta: &MultiIndex) -> Result<f64> {
    if beta.dim() == knots.dim() && beta.is_zero() {
        return Ok(1.0);
    }
    let mut table = MomentTable::new(knots)?;
    simplex_moment_recursive(knots, beta, &mut table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::oracle_moment;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn base_moment_desk_values() {
        let k = KnotSet::univariate(&[1.0, 2.0]).unwrap();
        assert!(rel(base_moment(&k, &[1].into()).unwrap(), 1.5) < 1e-15);
        assert!(rel(base_moment(&k, &[2].into()).unwrap(), 7.0 / 3.0) < 1e-15);
        assert_eq!(base_moment(&k, &[0].into()).unwrap(), 1.0);
    }

    #[test]
    fn base_moment_domain() {
        let neg = KnotSet::univariate(&[-1.0, 2.0]).unwrap();
        assert!(matches!(base_moment(&neg, &[2].into()), Err(Error::Domain(_))));
        let zero_row = KnotSet::new(vec![vec![0.0, 1.0], vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(base_moment(&zero_row, &[0, 1].into()), Err(Error::Domain(_))));
        let flat = KnotSet::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert!(matches!(base_moment(&flat, &[1, 1].into()), Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn base_moment_matches_oracle_2d() {
        let k = KnotSet::new(vec![vec![0.2, 0.9], vec![0.7, 0.1], vec![0.5, 0.6]]).unwrap();
        let ones = DirichletParams::ones(3);
        for beta in enumerate_indices(IndexConstraint::Order(5), 2) {
            let got = base_moment(&k, &beta).unwrap();
            let want = oracle_moment(&ones, &k, &beta).unwrap();
            assert!(rel(got, want) < 1e-13, "{beta}: {got} vs {want}");
        }
    }

    #[test]
    fn first_moment_examples() {
        let k = KnotSet::univariate(&[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(first_moment_prefix(&k, 2, 0).unwrap(), 1.0);
        let same = KnotSet::new(vec![vec![0.3, 0.7]; 4]).unwrap();
        assert!((first_moment_prefix(&same, 3, 1).unwrap() - 0.7).abs() < 1e-15);
        let tri = KnotSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((first_moment_prefix(&tri, 2, 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(first_moment_prefix(&k, 0, 0).is_err());
        assert!(first_moment_prefix(&k, 3, 0).is_err());
    }

    #[test]
    fn algorithm_desk_values() {
        let hat = KnotSet::univariate(&[0.0, 1.0, 2.0]).unwrap();
        assert!(rel(simplex_moment(&hat, &[2].into()).unwrap(), 7.0 / 6.0) < 1e-15);
        assert!(rel(simplex_moment(&hat, &[1].into()).unwrap(), 1.0) < 1e-15);
        assert_eq!(simplex_moment(&hat, &[0].into()).unwrap(), 1.0);
    }

    #[test]
    fn table_first_moments_agree_with_averages() {
        let k = KnotSet::new(vec![
            vec![0.1, 0.4],
            vec![0.8, 0.3],
            vec![0.5, 0.9],
            vec![0.2, 0.2],
            vec![0.6, 0.7],
        ])
        .unwrap();
        let mut table = MomentTable::new(&k).unwrap();
        table.moment(&[1, 1].into()).unwrap();
        let ordered = table.knots().clone();
        for kk in 2..=4 {
            for l in 0..2 {
                let got = table.get(kk, &MultiIndex::unit(2, l)).unwrap();
                let want = first_moment_prefix(&ordered, kk, l).unwrap();
                assert!((got - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn degenerate_knots_rejected() {
        let flat = KnotSet::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert!(matches!(
            simplex_moment(&flat, &[1, 0].into()),
            Err(Error::DegenerateGeometry(_))
        ));
        assert_eq!(simplex_moment(&flat, &[0, 0].into()).unwrap(), 1.0);
    }

    #[test]
    fn reorders_and_falls_back_for_signed_knots() {
        let k = KnotSet::new(vec![
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![-1.0, 0.5],
            vec![0.3, -0.8],
            vec![1.0, 1.0],
        ])
        .unwrap();
        let mut table = MomentTable::new(&k).unwrap();
        assert_eq!(table.base_method(), BaseMethod::Expansion);
        let beta: MultiIndex = [2, 3].into();
        let got = simplex_moment_recursive(&k, &beta, &mut table).unwrap();
        let want = oracle_moment(&DirichletParams::ones(5), &k, &beta).unwrap();
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn table_recompute_is_idempotent() {
        let k = KnotSet::univariate(&[0.3, 0.1, 0.9, 0.4, 0.6]).unwrap();
        let mut table = MomentTable::new(&k).unwrap();
        table.moment(&[6].into()).unwrap();
        for kk in 2..=4 {
            for a in 0..=6u32 {
                let alpha = MultiIndex::from([a]);
                let stored = table.get(kk, &alpha).unwrap();
                assert_eq!(stored.to_bits(), table.recompute(kk, &alpha).unwrap().to_bits());
            }
        }
    }
}
