//! Lauricella's `F_B` and the Lauricella polynomials `L_j(x) = F_B(-j,β;γ;x)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::carlson::{r_function, s_function, RMethod, SMethod};
use super::{check_pochhammer_base, sum_blocks, SeriesControl};
use crate::error::{domain, invalid, Error, Result};
use crate::moments::{dirichlet_moment, MomentStrategy};
use crate::multiindex::{enumerate_indices, factorial, IndexConstraint, MultiIndex};
use crate::quadrature::IntegrationControl;
use crate::simplex::{DirichletParams, KnotSet};

/// The numerator parameter of `F_B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LauricellaKind {
    /// `α = -j`: the polynomial `L_j`.
    Polynomial(MultiIndex),
    /// General real `α`; the power series needs `|x_i| < 1`.
    Series(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LauricellaSpec {
    pub kind: LauricellaKind,
    pub beta: Vec<f64>,
    pub gamma: f64,
    pub x: Vec<f64>,
}

impl LauricellaSpec {
    pub fn polynomial(j: MultiIndex, beta: Vec<f64>, gamma: f64, x: Vec<f64>) -> Result<Self> {
        Self::checked(LauricellaKind::Polynomial(j), beta, gamma, x)
    }

    pub fn series(alpha: Vec<f64>, beta: Vec<f64>, gamma: f64, x: Vec<f64>) -> Result<Self> {
        Self::checked(LauricellaKind::Series(alpha), beta, gamma, x)
    }

    fn checked(kind: LauricellaKind, beta: Vec<f64>, gamma: f64, x: Vec<f64>) -> Result<Self> {
        let n = x.len();
        let alpha_len = match &kind {
            LauricellaKind::Polynomial(j) => j.dim(),
            LauricellaKind::Series(a) => a.len(),
        };
        if n == 0 || beta.len() != n || alpha_len != n {
            return invalid(format!(
                "α, β and x must share one positive length (got {alpha_len}, {}, {n})",
                beta.len()
            ));
        }
        if !gamma.is_finite() || beta.iter().chain(&x).any(|v| !v.is_finite()) {
            return invalid("parameters must be finite");
        }
        check_pochhammer_base("γ", gamma)?;
        Ok(Self { kind, beta, gamma, x })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    fn alpha(&self) -> Vec<f64> {
        match &self.kind {
            LauricellaKind::Polynomial(j) => j.entries().iter().map(|&e| -f64::from(e)).collect(),
            LauricellaKind::Series(a) => a.clone(),
        }
    }

    /// The same parameters with `α = -j`.
    pub fn with_index(&self, j: MultiIndex) -> Self {
        Self {
            kind: LauricellaKind::Polynomial(j),
            ..self.clone()
        }
    }

    fn index(&self) -> Result<&MultiIndex> {
        match &self.kind {
            LauricellaKind::Polynomial(j) => Ok(j),
            LauricellaKind::Series(_) => invalid("a Lauricella polynomial needs an integer index j"),
        }
    }

    /// `d = (β, γ - |β|)`.
    pub fn moment_params(&self) -> Vec<f64> {
        let mut d = self.beta.clone();
        d.push(self.gamma - self.beta.iter().sum::<f64>());
        d
    }
}

/// Term of `F_B` at `k`: `(α,k)(β,k)/((γ,|k|) k!) x^k`.
fn fb_term(alpha: &[f64], spec: &LauricellaSpec, k: &MultiIndex) -> Result<f64> {
    let mut num = 1.0;
    for (i, &ki) in k.entries().iter().enumerate() {
        for t in 0..ki {
            let tf = f64::from(t);
            num *= (alpha[i] + tf) * (spec.beta[i] + tf) * spec.x[i] / (tf + 1.0);
        }
    }
    let mut den = 1.0;
    for t in 0..k.order() {
        let g = spec.gamma + f64::from(t);
        if g == 0.0 {
            return Err(Error::Parameter(format!("(γ, |k|) vanishes at k = {k}")));
        }
        den *= g;
    }
    Ok(num / den)
}

/// `F_B(α,β;γ;x) = Σ_k (α,k)(β,k)/((γ,|k|) k!) x^k`.
pub fn lauricella_fb(spec: &LauricellaSpec, ctrl: &SeriesControl) -> Result<f64> {
    let alpha = spec.alpha();
    match &spec.kind {
        LauricellaKind::Polynomial(j) => {
            let mut total = 0.0;
            for k in enumerate_indices(IndexConstraint::Below(j), spec.n()) {
                total += fb_term(&alpha, spec, &k)?;
            }
            Ok(total)
        }
        LauricellaKind::Series(_) => {
            if let Some(i) = spec.x.iter().position(|v| v.abs() >= 1.0) {
                return domain(format!("series needs |x_i| < 1, got x_{i} = {}", spec.x[i]));
            }
            let n = spec.n();
            sum_blocks(ctrl, |r| {
                enumerate_indices(IndexConstraint::Order(r), n)
                    .iter()
                    .map(|k| fb_term(&alpha, spec, k))
                    .sum()
            })
            .map(|s| s.value)
        }
    }
}

/// The `n × (n+1)` knot matrix with `1 - x_i` on the diagonal and ones
/// elsewhere (the last knot is all ones).
pub fn build_lauricella_knots(x: &[f64]) -> Result<KnotSet> {
    if let Some(i) = x.iter().position(|&v| !(v < 1.0)) {
        return domain(format!("x_{i} = {} must be below 1", x[i]));
    }
    let n = x.len();
    let mut points: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|l| if l == i { 1.0 - x[i] } else { 1.0 }).collect())
        .collect();
    points.push(vec![1.0; n]);
    KnotSet::new(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LauricellaMethod {
    /// Terminating sum of the `F_B` series.
    Series,
    /// `L_j = m_j(d;X)` with the Lauricella knot matrix.
    Moments,
    /// Grid walk of the three-term recurrence in each coordinate.
    Recurrence,
}

fn eps(l: usize, m: usize, x: &[f64]) -> f64 {
    if l == m {
        1.0 - x[m]
    } else {
        1.0
    }
}

/// `L_j(x)` by the requested method.
pub fn lauricella_poly(spec: &LauricellaSpec, method: LauricellaMethod, ctrl: &SeriesControl) -> Result<f64> {
    let j = spec.index()?;
    match method {
        LauricellaMethod::Series => lauricella_fb(spec, ctrl),
        LauricellaMethod::Moments => {
            let d = spec.moment_params();
            if d.iter().any(|&v| v <= 0.0) {
                return Err(Error::StrategyUnavailable {
                    strategy: "moments",
                    reason: format!("d = (β, γ-|β|) = {d:?} must be positive"),
                });
            }
            let knots = build_lauricella_knots(&spec.x)?;
            dirichlet_moment(&DirichletParams::new(d)?, &knots, j, MomentStrategy::Elevation)
        }
        LauricellaMethod::Recurrence => lauricella_grid(spec, ctrl).map(|grid| grid[j]),
    }
}

/// All `L_k` for `k <= j`, filled in graded order. Each `L_{k+d_m}` comes
/// from
/// `(γ+|k|) L_{k+d_m} = [γ(1-w_m x_m)+|k|] L_k - Σ_l k_l ε_lm [L_{k-d_l} - L_{k-d_l+d_m}]`
/// with `w_m = β_m/γ`, using the first `m` with `x_m != 0`; when every
/// usable `x_m` vanishes the entry is summed directly.
pub fn lauricella_grid(spec: &LauricellaSpec, ctrl: &SeriesControl) -> Result<HashMap<MultiIndex, f64>> {
    let j = spec.index()?.clone();
    let n = spec.n();
    let (g, x) = (spec.gamma, &spec.x);
    let mut grid: HashMap<MultiIndex, f64> = HashMap::new();
    let lookup = |grid: &HashMap<MultiIndex, f64>, k: Option<MultiIndex>| k.map_or(0.0, |k| grid[&k]);
    for target in enumerate_indices(IndexConstraint::Below(&j), n) {
        if target.is_zero() {
            grid.insert(target, 1.0);
            continue;
        }
        let pivot = (0..n).find(|&m| target[m] > 0 && x[m] != 0.0);
        let value = match pivot {
            Some(m) => {
                let k = target.minus_unit(m).unwrap();
                let kk = f64::from(k.order());
                let denom = g + kk;
                if denom == 0.0 {
                    return Err(Error::Parameter(format!("γ + |k| vanishes at k = {k}")));
                }
                let w = spec.beta[m] / g;
                let mut v = (g * (1.0 - w * x[m]) + kk) * grid[&k];
                for l in 0..n {
                    if k[l] == 0 {
                        continue;
                    }
                    let down = k.minus_unit(l).unwrap();
                    let across = down.plus_unit(m);
                    v -= f64::from(k[l]) * eps(l, m, x) * (lookup(&grid, Some(down)) - lookup(&grid, Some(across)));
                }
                v / denom
            }
            None => lauricella_fb(&spec.with_index(target.clone()), ctrl)?,
        };
        grid.insert(target, value);
    }
    Ok(grid)
}

/// Which generating function to check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenfunCheck {
    /// `exp(λ·e) S(d; -λ_1x_1, ..., -λ_nx_n, 0) = Σ λ^j/j! L_j(x)`.
    Exp,
    /// `R_{-a}(d;Y) = Σ λ^j (a,|j|)/j! L_j(x)`.
    R { a: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenfunResidual {
    pub lhs: f64,
    pub truncated: f64,
    pub residual: f64,
}

/// Compares a closed-form generating function against its expansion in
/// Lauricella polynomials truncated at `|j| <= order`.
pub fn lauricella_genfun_check(
    spec: &LauricellaSpec,
    lambda: &[f64],
    which: GenfunCheck,
    order: u32,
    series: &SeriesControl,
    integration: &IntegrationControl,
) -> Result<GenfunResidual> {
    let n = spec.n();
    if lambda.len() != n {
        return invalid(format!("λ has {} entries for n = {n}", lambda.len()));
    }
    let d = DirichletParams::new(spec.moment_params())
        .map_err(|_| Error::Parameter("d = (β, γ-|β|) must be positive".into()))?;
    let le: f64 = lambda.iter().sum();
    let (lhs, coef): (f64, Box<dyn Fn(u32) -> f64>) = match which {
        GenfunCheck::Exp => {
            let mut z: Vec<f64> = lambda.iter().zip(&spec.x).map(|(l, x)| -l * x).collect();
            z.push(0.0);
            let s = s_function(&d, &z, SMethod::Series, series)?.value;
            (le.exp() * s, Box::new(|_| 1.0))
        }
        GenfunCheck::R { a } => {
            let mut worst = le.abs();
            for (l, x) in lambda.iter().zip(&spec.x) {
                worst = worst.max((le - l * x).abs());
            }
            if worst >= 1.0 {
                return domain(format!("generating-function region needs max |λ·e - λ_i x_i|, |λ·e| < 1, got {worst}"));
            }
            let mut y: Vec<f64> = lambda.iter().zip(&spec.x).map(|(l, x)| 1.0 - le + l * x).collect();
            y.push(1.0 - le);
            let r = r_function(a, &d, &y, RMethod::Quadrature, series, integration)?.value;
            (r, Box::new(move |m| crate::multiindex::appell_symbol(a, m)))
        }
    };
    let grid = lauricella_grid(&spec.with_index(MultiIndex::new(vec![order; n])), series)?;
    let mut truncated = 0.0;
    for m in 0..=order {
        let c = coef(m);
        for j in enumerate_indices(IndexConstraint::Order(m), n) {
            let w: f64 = j
                .entries()
                .iter()
                .zip(lambda)
                .map(|(&e, &l)| l.powi(e as i32) / factorial(e))
                .product();
            truncated += c * w * grid[&j];
        }
    }
    Ok(GenfunResidual {
        lhs,
        truncated,
        residual: (lhs - truncated).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(j: &[u32], beta: &[f64], gamma: f64, x: &[f64]) -> LauricellaSpec {
        LauricellaSpec::polynomial(MultiIndex::new(j.to_vec()), beta.to_vec(), gamma, x.to_vec()).unwrap()
    }

    const METHODS: [LauricellaMethod; 3] = [
        LauricellaMethod::Series,
        LauricellaMethod::Moments,
        LauricellaMethod::Recurrence,
    ];

    #[test]
    fn polynomial_examples() {
        let c = SeriesControl::default();
        for m in METHODS {
            assert_eq!(lauricella_poly(&spec(&[0, 0], &[0.5, 0.7], 3.0, &[0.3, 0.6]), m, &c).unwrap(), 1.0);
            let v = lauricella_poly(&spec(&[2, 3], &[0.5, 0.7], 3.0, &[0.0, 0.0]), m, &c).unwrap();
            assert!((v - 1.0).abs() < 1e-15, "{m:?}");
            let v = lauricella_poly(&spec(&[1], &[0.8], 2.5, &[0.4]), m, &c).unwrap();
            assert!((v - (1.0 - 0.8 / 2.5 * 0.4)).abs() < 1e-15, "{m:?}");
        }
    }

    #[test]
    fn fb_examples() {
        let c = SeriesControl::default();
        let s = LauricellaSpec::series(vec![0.7, 1.1], vec![0.4, 2.0], 1.9, vec![0.0, 0.0]).unwrap();
        assert_eq!(lauricella_fb(&s, &c).unwrap(), 1.0);
        // n = 1 is Gauss' 2F1.
        let (a, b, g, x) = (0.7, 1.3, 2.1, 0.45);
        let s = LauricellaSpec::series(vec![a], vec![b], g, vec![x]).unwrap();
        let (mut term, mut want) = (1.0, 1.0);
        for k in 0..600 {
            let kf = f64::from(k);
            term *= (a + kf) * (b + kf) / ((g + kf) * (kf + 1.0)) * x;
            want += term;
        }
        assert!((lauricella_fb(&s, &c).unwrap() - want).abs() < 1e-14);
        let bad = LauricellaSpec::series(vec![0.5], vec![0.5], 1.5, vec![1.2]).unwrap();
        assert!(matches!(lauricella_fb(&bad, &c), Err(Error::Domain(_))));
        assert!(matches!(
            LauricellaSpec::series(vec![0.5], vec![0.5], -2.0, vec![0.2]),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn knot_matrix_examples() {
        let k = build_lauricella_knots(&[0.0, 0.0]).unwrap();
        assert!(k.points().iter().flatten().all(|&v| v == 1.0));
        assert!(!k.volume_positive());
        assert_eq!(build_lauricella_knots(&[0.5]).unwrap().coordinate_row(0), vec![0.5, 1.0]);
        let k = build_lauricella_knots(&[0.5, 1.0 / 3.0]).unwrap();
        assert_eq!(k.coordinate_row(0), vec![0.5, 1.0, 1.0]);
        assert_eq!(k.coordinate_row(1), vec![1.0, 1.0 - 1.0 / 3.0, 1.0]);
        assert!(k.volume_positive());
        assert!(matches!(build_lauricella_knots(&[1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn moments_path_needs_positive_d() {
        let s = spec(&[2], &[3.0], 2.5, &[0.3]);
        assert!(matches!(
            lauricella_poly(&s, LauricellaMethod::Moments, &SeriesControl::default()),
            Err(Error::StrategyUnavailable { .. })
        ));
        assert!(lauricella_poly(&s, LauricellaMethod::Series, &SeriesControl::default()).is_ok());
    }

    #[test]
    fn recurrence_with_a_vanishing_argument() {
        let s = spec(&[2, 3], &[0.5, 0.7], 3.0, &[0.0, 0.6]);
        let c = SeriesControl::default();
        let a = lauricella_poly(&s, LauricellaMethod::Series, &c).unwrap();
        let b = lauricella_poly(&s, LauricellaMethod::Recurrence, &c).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn generating_function_examples() {
        let (c, q) = (SeriesControl::default(), IntegrationControl::default());
        let s = spec(&[0], &[0.6], 2.0, &[0.4]);
        for which in [GenfunCheck::Exp, GenfunCheck::R { a: 1.3 }] {
            let r = lauricella_genfun_check(&s, &[0.0], which, 12, &c, &q).unwrap();
            assert_eq!(r.residual, 0.0);
            let r = lauricella_genfun_check(&s, &[0.1], which, 12, &c, &q).unwrap();
            assert!(r.residual < 1e-10, "{which:?}: {r:?}");
        }
        let s2 = spec(&[0, 0], &[0.6, 0.9], 2.8, &[0.4, -0.3]);
        for which in [GenfunCheck::Exp, GenfunCheck::R { a: 0.8 }] {
            let r = lauricella_genfun_check(&s2, &[0.05, 0.05], which, 10, &c, &q).unwrap();
            assert!(r.residual < 1e-8, "{which:?}: {r:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn three_methods_agree(
            n in 1usize..5,
            raw_j in prop::collection::vec(0u32..3, 4),
            beta in prop::collection::vec(0.1f64..2.0, 4),
            slack in 0.1f64..3.0,
            x in prop::collection::vec(-1.5f64..0.95, 4),
        ) {
            let beta = beta[..n].to_vec();
            let gamma = beta.iter().sum::<f64>() + slack;
            let s = spec(&raw_j[..n], &beta, gamma, &x[..n]);
            let c = SeriesControl::default();
            let vals: Vec<f64> = METHODS.iter().map(|&m| lauricella_poly(&s, m, &c).unwrap()).collect();
            for v in &vals[1..] {
                prop_assert!((v - vals[0]).abs() <= 1e-10 * vals[0].abs(), "{vals:?}");
            }
        }
    }
}
