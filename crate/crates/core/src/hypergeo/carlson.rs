//! Carlson's `R` and `S` functions, the Watson product and divided
//! differences of the exponential.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::{sum_blocks, SeriesControl, SeriesSum};
use crate::config::QUADRATURE_MAX_DEGREE;
use crate::error::{domain, invalid, Error, Result};
use crate::moments::{power_moments, ElevationTable};
use crate::multiindex::{factorial, enumerate_indices, IndexConstraint, MultiIndex};
use crate::quadrature::{dirichlet_average, Estimate, IntegrationControl};
use crate::simplex::{power, DirichletParams, KnotSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RMethod {
    Quadrature,
    /// Moment series with `X = 1 - Z` and `λ = 1`.
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SMethod {
    Series,
    /// Confluent divided difference of `exp`; integer parameters only.
    DividedDifference,
}

fn from_series(s: SeriesSum) -> Estimate {
    Estimate {
        value: s.value,
        error: s.tail,
        effort: u64::from(s.order),
    }
}

fn exact(value: f64) -> Estimate {
    Estimate {
        value,
        error: 0.0,
        effort: 0,
    }
}

fn check_len(params: &DirichletParams, z: &[f64]) -> Result<()> {
    if params.len() != z.len() {
        return invalid(format!("{} parameters for {} arguments", params.len(), z.len()));
    }
    if z.iter().any(|v| !v.is_finite()) {
        return invalid("arguments must be finite");
    }
    Ok(())
}

fn all_equal(z: &[f64]) -> Option<f64> {
    z.iter().all(|&v| v == z[0]).then_some(z[0])
}

/// Moments `m_r(b;z)` of a univariate spline, extended on demand.
struct UnivariateMoments<'a> {
    params: &'a DirichletParams,
    z: &'a [f64],
    values: Vec<f64>,
}

impl<'a> UnivariateMoments<'a> {
    fn new(params: &'a DirichletParams, z: &'a [f64]) -> Self {
        Self {
            params,
            z,
            values: Vec::new(),
        }
    }

    fn get(&mut self, r: u32) -> Result<f64> {
        if r as usize >= self.values.len() {
            let target = (r + 1).max(2 * self.values.len() as u32).max(32);
            self.values = power_moments(self.params, self.z, target)?;
        }
        Ok(self.values[r as usize])
    }
}

/// Multivariate moments from an elevation table that is rebuilt larger when
/// a higher order is requested.
struct GrowingMoments<'a> {
    params: &'a DirichletParams,
    knots: &'a KnotSet,
    table: Option<ElevationTable>,
}

impl<'a> GrowingMoments<'a> {
    fn new(params: &'a DirichletParams, knots: &'a KnotSet) -> Self {
        Self {
            params,
            knots,
            table: None,
        }
    }

    fn get(&mut self, beta: &MultiIndex) -> Result<f64> {
        let have = self.table.as_ref().map_or(0, |t| t.max_order());
        if self.table.is_none() || beta.order() > have {
            let target = beta.order().max(have + have / 2).max(have + 8).max(16);
            self.table = Some(ElevationTable::new(self.params, self.knots, target)?);
        }
        Ok(self.table.as_ref().unwrap().get(beta).expect("order within table"))
    }
}

/// `λ^j r!/j!` for `|j| = r`, via logarithms of the factorials.
fn scaled_power(lambda: &[f64], j: &MultiIndex) -> f64 {
    let r = j.order();
    let log_multinomial = ln_gamma(f64::from(r) + 1.0)
        - j.entries().iter().map(|&e| ln_gamma(f64::from(e) + 1.0)).sum::<f64>();
    log_multinomial.exp() * j.pow(lambda)
}

/// Σ over `|j| = r` of `λ^j r!/j! m_j(b;X)`, which equals `r!` times the
/// order-`r` block of the multivariate series.
fn order_block(moments: &mut GrowingMoments<'_>, lambda: &[f64], r: u32) -> Result<f64> {
    let mut block = 0.0;
    for j in enumerate_indices(IndexConstraint::Order(r), lambda.len()) {
        let w = scaled_power(lambda, &j);
        if w != 0.0 {
            block += w * moments.get(&j)?;
        }
    }
    Ok(block)
}

fn check_series_region(params: &DirichletParams, knots: &KnotSet, lambda: &[f64]) -> Result<()> {
    if params.len() != knots.len() {
        return invalid(format!("{} parameters for {} knots", params.len(), knots.len()));
    }
    if lambda.len() != knots.dim() {
        return invalid(format!("λ has {} entries for knots in R^{}", lambda.len(), knots.dim()));
    }
    for (i, r) in knots.ridge(lambda).iter().enumerate() {
        if r.abs() >= 1.0 {
            return domain(format!("|λ·x^{i}| = {} is not below 1", r.abs()));
        }
    }
    Ok(())
}

/// `R_{-a}(b;Z) = ∫_{E_n} (Zt)^{-a} φ_b(t) dt`.
pub fn r_function(
    a: f64,
    params: &DirichletParams,
    z: &[f64],
    method: RMethod,
    series: &SeriesControl,
    integration: &IntegrationControl,
) -> Result<Estimate> {
    check_len(params, z)?;
    if a == 0.0 {
        return Ok(exact(1.0));
    }
    match method {
        RMethod::Quadrature => {
            let polynomial = a <= 0.0 && a.fract() == 0.0;
            if let Some(v) = all_equal(z) {
                if v == 0.0 && !polynomial {
                    return domain("0 lies in [Z]");
                }
                if v < 0.0 && a.fract() != 0.0 {
                    return domain("fractional power of a negative argument");
                }
                return Ok(exact(power(v, -a)));
            }
            if !polynomial {
                let lo = z.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if lo <= 0.0 && hi >= 0.0 {
                    return domain(format!("0 lies in [Z] = [{lo}, {hi}]"));
                }
                if hi < 0.0 && a.fract() != 0.0 {
                    return domain("fractional power of negative arguments");
                }
            }
            if params.len() - 1 > QUADRATURE_MAX_DEGREE {
                return Err(Error::StrategyUnavailable {
                    strategy: "quadrature",
                    reason: format!("n = {} exceeds {QUADRATURE_MAX_DEGREE}", params.len() - 1),
                });
            }
            dirichlet_average(params.b(), integration, |t| {
                let zt: f64 = z.iter().zip(t).map(|(zi, ti)| zi * ti).sum();
                power(zt, -a)
            })
        }
        RMethod::Series => {
            let x: Vec<f64> = z.iter().map(|zi| 1.0 - zi).collect();
            if let Some(i) = x.iter().position(|v| v.abs() >= 1.0) {
                return domain(format!("series needs |1 - z_{i}| < 1, got z_{i} = {}", z[i]));
            }
            let mut moments = UnivariateMoments::new(params, &x);
            let mut coef = 1.0;
            sum_blocks(series, |r| {
                if r > 0 {
                    coef *= (a + f64::from(r) - 1.0) / f64::from(r);
                }
                Ok(coef * moments.get(r)?)
            })
            .map(from_series)
        }
    }
}

/// `Σ_j λ^j (a,|j|)/j! m_j(b;X)`, which equals `R_{-a}(b; 1 - λ·X)` when
/// every `|λ·x^i| < 1`.
pub fn r_series(
    a: f64,
    params: &DirichletParams,
    knots: &KnotSet,
    lambda: &[f64],
    ctrl: &SeriesControl,
) -> Result<SeriesSum> {
    check_series_region(params, knots, lambda)?;
    let mut moments = GrowingMoments::new(params, knots);
    let mut coef = 1.0;
    sum_blocks(ctrl, |r| {
        if r > 0 {
            coef *= (a + f64::from(r) - 1.0) / f64::from(r);
        }
        if coef == 0.0 {
            return Ok(0.0);
        }
        Ok(coef * order_block(&mut moments, lambda, r)?)
    })
}

/// Partial sums `S_0..S_N` of the series in [`r_series`].
pub fn r_series_partial_sums(
    a: f64,
    params: &DirichletParams,
    knots: &KnotSet,
    lambda: &[f64],
    max_order: u32,
) -> Result<Vec<f64>> {
    check_series_region(params, knots, lambda)?;
    let mut moments = GrowingMoments::new(params, knots);
    let mut coef = 1.0;
    let mut total = 0.0;
    (0..=max_order)
        .map(|r| {
            if r > 0 {
                coef *= (a + f64::from(r) - 1.0) / f64::from(r);
            }
            total += coef * order_block(&mut moments, lambda, r)?;
            Ok(total)
        })
        .collect()
}

/// `Σ_j λ^j/j! m_j(b;X) = S(b; λ·X)`.
pub fn s_series(params: &DirichletParams, knots: &KnotSet, lambda: &[f64], ctrl: &SeriesControl) -> Result<SeriesSum> {
    if params.len() != knots.len() || lambda.len() != knots.dim() {
        return invalid("parameter, knot and λ dimensions disagree");
    }
    let mut moments = GrowingMoments::new(params, knots);
    let mut coef = 1.0;
    sum_blocks(ctrl, |r| {
        if r > 0 {
            coef /= f64::from(r);
        }
        Ok(coef * order_block(&mut moments, lambda, r)?)
    })
}

/// `∏_j (1 - λ·x^j)^{-b_j}`.
pub fn watson_product(lambda: &[f64], knots: &KnotSet, params: &DirichletParams) -> Result<f64> {
    if params.len() != knots.len() || lambda.len() != knots.dim() {
        return invalid("parameter, knot and λ dimensions disagree");
    }
    let mut out = 1.0;
    for (j, (r, &b)) in knots.ridge(lambda).iter().zip(params.b()).enumerate() {
        if *r >= 1.0 {
            return domain(format!("λ·x^{j} = {r} is not below 1"));
        }
        out *= power(1.0 - r, -b);
    }
    Ok(out)
}

/// `S(b;Z) = ∫_{E_n} exp(Zt) φ_b(t) dt`.
pub fn s_function(params: &DirichletParams, z: &[f64], method: SMethod, ctrl: &SeriesControl) -> Result<Estimate> {
    check_len(params, z)?;
    if let Some(v) = all_equal(z) {
        return Ok(exact(v.exp()));
    }
    match method {
        SMethod::Series => {
            let mut moments = UnivariateMoments::new(params, z);
            let mut coef = 1.0;
            sum_blocks(ctrl, |r| {
                if r > 0 {
                    coef /= f64::from(r);
                }
                Ok(coef * moments.get(r)?)
            })
            .map(from_series)
        }
        SMethod::DividedDifference => {
            let Some(mult) = params.as_integers() else {
                return Err(Error::StrategyUnavailable {
                    strategy: "divided-difference",
                    reason: "all parameters must be positive integers".into(),
                });
            };
            let k: u32 = mult.iter().sum::<u32>() - 1;
            let knots: Vec<(f64, u32)> = z.iter().cloned().zip(mult).collect();
            Ok(exact(factorial(k) * divided_difference_exp(&knots)?))
        }
    }
}

/// Spread below which a divided difference is taken from its Taylor
/// expansion about the midpoint instead of the quotient rule. The quotient
/// rule loses about a factor `(k+1)/spread` per level on order-`k` ranges,
/// while the Taylor sum loses at most `e^spread`.
const TAYLOR_SPREAD: f64 = 8.0;
/// Terms in the Taylor sum; `4^m/m!` is negligible well before this.
const TAYLOR_TERMS: usize = 128;

/// `[z_0(m_0), ..., z_n(m_n)] exp`: each value `z_i` repeated `m_i` times.
///
/// Knots are sorted and merged. A run of equal knots gives
/// `e^z/(m-1)!`; ranges wider than [`TAYLOR_SPREAD`] use the quotient rule
/// `([z_{i+1}..z_j] - [z_i..z_{j-1}])/(z_j - z_i)`; narrower ranges use
/// `e^c Σ_m h_m(z-c)/(m+k)!` with `h_m` the complete homogeneous symmetric
/// polynomials, which avoids cancellation between near-equal knots.
pub fn divided_difference_exp(knots: &[(f64, u32)]) -> Result<f64> {
    if knots.is_empty() {
        return invalid("divided difference needs at least one knot");
    }
    if let Some(&(z, _)) = knots.iter().find(|&&(z, m)| m == 0 || !z.is_finite()) {
        return invalid(format!("knot {z} has zero multiplicity or is not finite"));
    }
    let mut v: Vec<f64> = knots
        .iter()
        .flat_map(|&(z, m)| std::iter::repeat_n(z, m as usize))
        .collect();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    // dd[i] holds [v_i .. v_{i+len}] for the current len.
    let mut dd: Vec<f64> = v.iter().map(|z| z.exp()).collect();
    for len in 1..n {
        let next: Vec<f64> = (0..n - len)
            .map(|i| {
                let j = i + len;
                let spread = v[j] - v[i];
                if spread <= TAYLOR_SPREAD {
                    taylor_dd(&v[i..=j])
                } else {
                    (dd[i + 1] - dd[i]) / spread
                }
            })
            .collect();
        dd = next;
    }
    Ok(dd[0])
}

fn taylor_dd(v: &[f64]) -> f64 {
    let k = v.len() - 1;
    let c = 0.5 * (v[0] + v[k]);
    if v[0] == v[k] {
        return c.exp() / factorial(k as u32);
    }
    let mut h = [0.0f64; TAYLOR_TERMS];
    h[0] = 1.0;
    for &z in v {
        let y = z - c;
        for m in 1..TAYLOR_TERMS {
            h[m] += y * h[m - 1];
        }
    }
    let mut total = 0.0;
    let mut inv_fact = 1.0 / factorial(k as u32);
    for (m, hm) in h.iter().enumerate() {
        if m > 0 {
            inv_fact /= (m + k) as f64;
        }
        total += hm * inv_fact;
    }
    c.exp() * total
}
