//! Knot sets, Dirichlet parameters, the Dirichlet density and the
//! brute-force moment oracle.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::config::{OracleCaps, Tolerances, QUADRATURE_MAX_DEGREE};
use crate::error::{domain, invalid, Error, Result};
use crate::geometry;
use crate::multiindex::{enumerate_indices, multinomial, IndexConstraint, MultiIndex};
use crate::quadrature::{dirichlet_average, Estimate, IntegrationControl};

/// The knots `x^0, ..., x^n` of a spline in `R^s`, the columns of the
/// `s × (n+1)` matrix `X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotSet {
    points: Vec<Vec<f64>>,
}

impl KnotSet {
    /// Builds a knot set from its points. All points must share the same
    /// dimension `s >= 1` and have finite coordinates.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return invalid("knot set is empty");
        };
        let dim = first.len();
        if dim == 0 {
            return invalid("knots must have at least one coordinate");
        }
        if let Some(j) = points.iter().position(|p| p.len() != dim) {
            return invalid(format!(
                "knot {j} has dimension {} but knot 0 has dimension {dim}",
                points[j].len()
            ));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return invalid("knot coordinates must be finite");
        }
        Ok(Self { points })
    }

    /// Builds a knot set from the rows of `X` (row `l` holds coordinate `l`
    /// of every knot).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return invalid("knot matrix has no rows");
        };
        let ncols = first.len();
        if rows.iter().any(|r| r.len() != ncols) {
            return invalid("knot matrix rows have different lengths");
        }
        Self::new((0..ncols).map(|j| rows.iter().map(|r| r[j]).collect()).collect())
    }

    /// Univariate knots `z_0, ..., z_n`.
    pub fn univariate(z: &[f64]) -> Result<Self> {
        Self::new(z.iter().map(|&v| vec![v]).collect())
    }

    /// `s`
    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// `n + 1`
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `n`
    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.points[j]
    }

    /// `y^l = (x^0_l, ..., x^n_l)`, row `l` of `X`.
    pub fn coordinate_row(&self, l: usize) -> Vec<f64> {
        self.points.iter().map(|p| p[l]).collect()
    }

    /// `X̄_k = {x^0, ..., x^k}`.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k >= self.len() {
            return invalid(format!("prefix {k} out of range for {} knots", self.len()));
        }
        Ok(Self {
            points: self.points[..=k].to_vec(),
        })
    }

    /// `X_j = X \ {x^j}`.
    pub fn without(&self, j: usize) -> Result<Self> {
        if j >= self.len() || self.len() == 1 {
            return invalid(format!("cannot delete knot {j} from {} knots", self.len()));
        }
        let mut points = self.points.clone();
        points.remove(j);
        Ok(Self { points })
    }

    /// `X^i = X ∪ {x^i}`, the knot `x^i` listed twice.
    pub fn with_duplicate(&self, i: usize) -> Result<Self> {
        if i >= self.len() {
            return invalid(format!("knot {i} out of range"));
        }
        let mut points = self.points.clone();
        points.insert(i + 1, self.points[i].clone());
        Ok(Self { points })
    }

    /// Knot `j` repeated `multiplicity[j]` times, in order.
    pub fn repeated(&self, multiplicity: &[u32]) -> Result<Self> {
        if multiplicity.len() != self.len() {
            return invalid("multiplicity vector length differs from the knot count");
        }
        let points: Vec<Vec<f64>> = self
            .points
            .iter()
            .zip(multiplicity)
            .flat_map(|(p, &m)| std::iter::repeat_n(p.clone(), m as usize))
            .collect();
        Self::new(points)
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            points: order.iter().map(|&j| self.points[j].clone()).collect(),
        }
    }

    /// Ridge values `λ·x^j`.
    pub fn ridge(&self, lambda: &[f64]) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| p.iter().zip(lambda).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Xt = Σ t_j x^j` for barycentric `t`.
    pub fn combine(&self, t: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (p, &tj) in self.points.iter().zip(t) {
            for (o, &x) in out.iter_mut().zip(p) {
                *o += tj * x;
            }
        }
    }

    pub fn affine_rank(&self) -> usize {
        geometry::affine_rank(&self.points, Tolerances::default().geometry)
    }

    /// `vol_s([X]) > 0`, i.e. some `s+1` knots are affinely independent.
    pub fn volume_positive(&self) -> bool {
        self.affine_rank() == self.dim()
    }

    /// A permutation that moves `s+1` affinely independent knots to the
    /// front, keeping the remaining knots in their original order.
    pub fn independent_ordering(&self) -> Option<Vec<usize>> {
        let chosen = geometry::independent_subset(&self.points, Tolerances::default().geometry);
        if chosen.len() != self.dim() + 1 {
            return None;
        }
        let mut order = chosen.clone();
        order.extend((0..self.len()).filter(|j| !chosen.contains(j)));
        Some(order)
    }

    /// True when the origin lies in the closed convex hull of the knots, up
    /// to the hull tolerance.
    pub fn hull_contains_origin(&self) -> bool {
        let scale = self
            .points
            .iter()
            .flatten()
            .map(|v| v.abs())
            .fold(1.0, f64::max);
        geometry::hull_distance_l1(&self.points) <= Tolerances::default().hull * scale
    }
}

/// Dirichlet parameters `b = (b_0, ..., b_n)` with `c = Σ b_i` and weights
/// `w_i = b_i / c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletParams {
    b: Vec<f64>,
    c: f64,
}

impl DirichletParams {
    pub fn new(b: Vec<f64>) -> Result<Self> {
        if b.is_empty() {
            return invalid("Dirichlet parameter vector is empty");
        }
        if let Some(i) = b.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::Parameter(format!(
                "Dirichlet parameter b_{i} = {} must be positive and finite",
                b[i]
            )));
        }
        let c = b.iter().sum();
        Ok(Self { b, c })
    }

    /// The simplex-spline parameters `b = (1, ..., 1)`.
    pub fn ones(len: usize) -> Self {
        Self {
            b: vec![1.0; len],
            c: len as f64,
        }
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.b[i] / self.c
    }

    pub fn weights(&self) -> Vec<f64> {
        self.b.iter().map(|v| v / self.c).collect()
    }

    /// `b + e_i`
    pub fn elevated(&self, i: usize) -> Self {
        let mut b = self.b.clone();
        b[i] += 1.0;
        Self { c: self.c + 1.0, b }
    }

    /// The parameters as nonnegative integers, when they all are.
    pub fn as_integers(&self) -> Option<Vec<u32>> {
        self.b
            .iter()
            .map(|&v| (v.fract() == 0.0 && v <= f64::from(u32::MAX)).then_some(v as u32))
            .collect()
    }

    pub fn is_ones(&self) -> bool {
        self.b.iter().all(|&v| v == 1.0)
    }
}

/// `(b - e_j; X)`: lowers `b_j` by one, omitting knot `j` together with its
/// parameter when the parameter vanishes.
pub fn lower_parameter(params: &DirichletParams, knots: &KnotSet, j: usize) -> Result<(DirichletParams, KnotSet)> {
    if j >= params.len() {
        return invalid(format!("parameter index {j} out of range"));
    }
    let bj = params.b[j];
    if bj < 1.0 {
        return Err(Error::Parameter(format!("b_{j} = {bj} < 1 cannot be lowered")));
    }
    if bj == 1.0 {
        if params.len() == 1 {
            return invalid("cannot omit the only knot");
        }
        let mut b = params.b.clone();
        b.remove(j);
        return Ok((DirichletParams::new(b)?, knots.without(j)?));
    }
    let mut b = params.b.clone();
    b[j] -= 1.0;
    Ok((DirichletParams::new(b)?, knots.clone()))
}

fn check_pair(params: &DirichletParams, knots: &KnotSet) -> Result<()> {
    if params.len() != knots.len() {
        return invalid(format!(
            "{} Dirichlet parameters for {} knots",
            params.len(),
            knots.len()
        ));
    }
    Ok(())
}

/// The Dirichlet density `φ_b(t)` on `E_n`, evaluated at `t = (t_1, ..., t_n)`
/// with `t_0 = 1 - Σ t_j`.
///
/// On a face `t_i = 0` the value is zero when `b_i > 1`; when `b_i < 1` the
/// density is unbounded and [`Error::Pole`] is returned.
pub fn dirichlet_density(params: &DirichletParams, t: &[f64]) -> Result<f64> {
    if t.len() + 1 != params.len() {
        return invalid(format!(
            "point has {} coordinates, expected {}",
            t.len(),
            params.len() - 1
        ));
    }
    let sum: f64 = t.iter().sum();
    if t.iter().any(|&v| !(v >= 0.0)) || sum > 1.0 + 1e-14 {
        return domain(format!("point {t:?} lies outside the standard simplex"));
    }
    let t0 = (1.0 - sum).max(0.0);
    let mut log = ln_gamma(params.c);
    for (i, (&ti, &bi)) in std::iter::once(&t0).chain(t).zip(&params.b).enumerate() {
        log -= ln_gamma(bi);
        if ti == 0.0 {
            if bi > 1.0 {
                return Ok(0.0);
            }
            if bi < 1.0 {
                return Err(Error::Pole(format!("t_{i} = 0 with b_{i} = {bi} < 1")));
            }
        } else {
            log += (bi - 1.0) * ti.ln();
        }
    }
    Ok(log.exp())
}

/// `∫_{E_n} t^η φ_b(t) dt = ∏ (b_i, η_i) / (c, |η|)`.
pub fn dirichlet_monomial_integral(params: &DirichletParams, eta: &MultiIndex) -> Result<f64> {
    if eta.dim() != params.len() {
        return invalid(format!(
            "exponent has {} entries for {} parameters",
            eta.dim(),
            params.len()
        ));
    }
    // Interleave numerator and denominator factors so the running value
    // stays near one.
    let mut acc = 1.0;
    let mut step = 0.0;
    for (&bi, &ei) in params.b.iter().zip(eta.entries()) {
        for k in 0..ei {
            acc *= (bi + f64::from(k)) / (params.c + step);
            step += 1.0;
        }
    }
    Ok(acc)
}

/// `m_β(b;X)` by multinomial expansion of `∏_l ((Xt)_l)^{β_l}` and termwise
/// Dirichlet monomial integrals, using the default size caps.
pub fn oracle_moment(params: &DirichletParams, knots: &KnotSet, beta: &MultiIndex) -> Result<f64> {
    oracle_moment_capped(params, knots, beta, &OracleCaps::default())
}

pub fn oracle_moment_capped(
    params: &DirichletParams,
    knots: &KnotSet,
    beta: &MultiIndex,
    caps: &OracleCaps,
) -> Result<f64> {
    check_pair(params, knots)?;
    if beta.dim() != knots.dim() {
        return invalid(format!(
            "moment order has {} entries for knots in R^{}",
            beta.dim(),
            knots.dim()
        ));
    }
    if beta.order() > caps.max_order || knots.degree() > caps.max_degree {
        return Err(Error::Resource(format!(
            "expansion oracle limited to |β| <= {} and n <= {} (got |β| = {}, n = {})",
            caps.max_order,
            caps.max_degree,
            beta.order(),
            knots.degree()
        )));
    }
    let rows: Vec<Vec<f64>> = (0..knots.dim()).map(|l| knots.coordinate_row(l)).collect();
    let mut eta = vec![0u32; knots.len()];
    expand(params, &rows, beta, 0, 1.0, &mut eta)
}

fn expand(
    params: &DirichletParams,
    rows: &[Vec<f64>],
    beta: &MultiIndex,
    l: usize,
    coef: f64,
    eta: &mut Vec<u32>,
) -> Result<f64> {
    if l == rows.len() {
        return Ok(coef * dirichlet_monomial_integral(params, &MultiIndex::new(eta.clone()))?);
    }
    let mut total = 0.0;
    for k in enumerate_indices(IndexConstraint::Order(beta[l]), rows[l].len()) {
        let term = coef * multinomial(beta[l], &k)? as f64 * k.pow(&rows[l]);
        if term == 0.0 {
            continue;
        }
        for (e, &ki) in eta.iter_mut().zip(k.entries()) {
            *e += ki;
        }
        total += expand(params, rows, beta, l + 1, term, eta)?;
        for (e, &ki) in eta.iter_mut().zip(k.entries()) {
            *e -= ki;
        }
    }
    Ok(total)
}

/// Integration route for moments of real (typically negative) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NegativeMomentMethod {
    Quadrature,
    MonteCarlo,
}

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v.fract() == 0.0
}

/// `m_{-a}(b;X) = ∫ ∏_l ((Xt)_l)^{-a_l} φ_b(t) dt`.
///
/// Unless every `a_l` is a nonpositive integer (a polynomial moment), the
/// origin must lie outside `[X]`, and every coordinate carrying a nonzero
/// exponent must keep one strict sign over the knots (positive when the
/// exponent is fractional).
pub fn negative_moment(
    params: &DirichletParams,
    knots: &KnotSet,
    a: &[f64],
    method: NegativeMomentMethod,
    ctrl: &IntegrationControl,
) -> Result<Estimate> {
    check_pair(params, knots)?;
    if a.len() != knots.dim() {
        return invalid(format!("exponent has {} entries for knots in R^{}", a.len(), knots.dim()));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return invalid("exponents must be finite");
    }
    if !a.iter().all(|&v| is_nonpositive_integer(v)) {
        if knots.hull_contains_origin() {
            return domain("the origin lies in the convex hull of the knots");
        }
        for (l, &al) in a.iter().enumerate() {
            if is_nonpositive_integer(al) {
                continue;
            }
            let row = knots.coordinate_row(l);
            let lo = row.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if lo <= 0.0 && hi >= 0.0 {
                return domain(format!("coordinate {l} vanishes on the hull but carries exponent {}", -al));
            }
            if hi < 0.0 && al.fract() != 0.0 {
                return domain(format!("fractional power of the negative coordinate {l}"));
            }
        }
    }
    let exps: Vec<f64> = a.iter().map(|v| -v).collect();
    let dim = knots.dim();
    let integrand = |t: &[f64]| -> f64 {
        let mut y = vec![0.0; dim];
        knots.combine(t, &mut y);
        y.iter().zip(&exps).map(|(&yl, &e)| power(yl, e)).product()
    };
    match method {
        NegativeMomentMethod::Quadrature => {
            if knots.degree() > QUADRATURE_MAX_DEGREE {
                return Err(Error::StrategyUnavailable {
                    strategy: "quadrature",
                    reason: format!("n = {} exceeds {QUADRATURE_MAX_DEGREE}", knots.degree()),
                });
            }
            dirichlet_average(params.b(), ctrl, integrand)
        }
        NegativeMomentMethod::MonteCarlo => Ok(monte_carlo(params, ctrl, integrand)),
    }
}

pub(crate) fn power(base: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e.fract() == 0.0 && e.abs() < f64::from(i32::MAX) {
        base.powi(e as i32)
    } else {
        base.powf(e)
    }
}

/// Sample mean of `f` under the Dirichlet law with a running standard
/// error, stopping once the standard error meets the control's target.
pub fn monte_carlo(params: &DirichletParams, ctrl: &IntegrationControl, f: impl Fn(&[f64]) -> f64) -> Estimate {
    const BATCH: u64 = 4096;
    let mut rng = ChaCha8Rng::seed_from_u64(ctrl.seed);
    let gammas: Vec<Gamma<f64>> = params
        .b()
        .iter()
        .map(|&b| Gamma::new(b, 1.0).expect("validated positive shape"))
        .collect();
    let mut t = vec![0.0; params.len()];
    let (mut count, mut mean, mut m2) = (0u64, 0.0f64, 0.0f64);
    loop {
        for _ in 0..BATCH {
            let mut total = 0.0;
            for (ti, g) in t.iter_mut().zip(&gammas) {
                *ti = g.sample(&mut rng);
                total += *ti;
            }
            t.iter_mut().for_each(|v| *v /= total);
            let x = f(&t);
            count += 1;
            let delta = x - mean;
            mean += delta / count as f64;
            m2 += delta * (x - mean);
        }
        let se = (m2 / (count - 1) as f64 / count as f64).sqrt();
        if se <= ctrl.target(mean) || count >= ctrl.max_samples {
            return Estimate {
                value: mean,
                error: se,
                effort: count,
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn density_examples() {
        let ones = DirichletParams::ones(3);
        assert!(close(dirichlet_density(&ones, &[0.2, 0.3]).unwrap(), 2.0, 1e-14));
        let two = DirichletParams::new(vec![2.0, 2.0]).unwrap();
        assert_eq!(dirichlet_density(&two, &[0.0]).unwrap(), 0.0);
        assert!(close(dirichlet_density(&two, &[0.5]).unwrap(), 1.5, 1e-14));
    }

    #[test]
    fn density_errors() {
        let half = DirichletParams::new(vec![0.5, 2.0]).unwrap();
        assert!(matches!(dirichlet_density(&half, &[1.0]), Err(Error::Pole(_))));
        assert!(matches!(dirichlet_density(&half, &[1.5]), Err(Error::Domain(_))));
        assert!(matches!(dirichlet_density(&half, &[-0.1]), Err(Error::Domain(_))));
        assert!(DirichletParams::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn monomial_integral_examples() {
        let two = DirichletParams::ones(2);
        assert_eq!(dirichlet_monomial_integral(&two, &[0, 0].into()).unwrap(), 1.0);
        assert!(close(dirichlet_monomial_integral(&two, &[0, 1].into()).unwrap(), 0.5, 1e-15));
        let three = DirichletParams::ones(3);
        assert!(close(
            dirichlet_monomial_integral(&three, &[0, 1, 1].into()).unwrap(),
            1.0 / 12.0,
            1e-15
        ));
    }

    #[test]
    fn monomial_integral_matches_simplex_closed_form() {
        // For b = ones: η! n! / (|η| + n)!.
        let ones = DirichletParams::ones(4);
        let eta: MultiIndex = [2, 0, 3, 1].into();
        let closed = eta.factorial() * 6.0 / (1..=9).map(f64::from).product::<f64>();
        assert!(close(dirichlet_monomial_integral(&ones, &eta).unwrap(), closed, 1e-14));
    }

    #[test]
    fn oracle_examples() {
        let unit = KnotSet::univariate(&[0.0, 1.0]).unwrap();
        let ones = DirichletParams::ones(2);
        assert!(close(oracle_moment(&ones, &unit, &[2].into()).unwrap(), 1.0 / 3.0, 1e-15));
        let tri = KnotSet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let ones3 = DirichletParams::ones(3);
        assert!(close(oracle_moment(&ones3, &tri, &[1, 1].into()).unwrap(), 5.0 / 12.0, 1e-15));
        let b = DirichletParams::new(vec![0.7, 2.2, 1.3]).unwrap();
        assert_eq!(oracle_moment(&b, &tri, &[0, 0].into()).unwrap(), 1.0);
    }

    #[test]
    fn oracle_cap() {
        let k = KnotSet::univariate(&[0.0, 1.0]).unwrap();
        let p = DirichletParams::ones(2);
        assert!(matches!(oracle_moment(&p, &k, &[9].into()), Err(Error::Resource(_))));
    }

    #[test]
    fn knot_views() {
        let k = KnotSet::univariate(&[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(k.prefix(1).unwrap().points(), &[vec![0.0], vec![1.0]]);
        assert_eq!(k.without(1).unwrap().points(), &[vec![0.0], vec![2.0]]);
        assert_eq!(k.with_duplicate(0).unwrap().len(), 4);
        assert_eq!(k.repeated(&[2, 0, 1]).unwrap().points(), &[vec![0.0], vec![0.0], vec![2.0]]);
        assert!(KnotSet::new(vec![vec![0.0], vec![1.0, 2.0]]).is_err());
        let m = KnotSet::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(m.point(1), &[2.0, 5.0]);
        assert_eq!(m.coordinate_row(1), vec![4.0, 5.0, 6.0]);
    }

    #[test]
    fn negative_moment_desk_values() {
        let k = KnotSet::univariate(&[1.0, 2.0]).unwrap();
        let p = DirichletParams::ones(2);
        let ctrl = IntegrationControl::default();
        let q = |a: f64| negative_moment(&p, &k, &[a], NegativeMomentMethod::Quadrature, &ctrl).unwrap();
        assert!(close(q(1.0).value, std::f64::consts::LN_2, 1e-12));
        assert!(close(q(2.0).value, 0.5, 1e-12));
        assert_eq!(q(0.0).value, 1.0);
    }

    #[test]
    fn negative_moment_rejects_origin_in_hull() {
        let k = KnotSet::univariate(&[-1.0, 2.0]).unwrap();
        let p = DirichletParams::ones(2);
        let r = negative_moment(&p, &k, &[1.0], NegativeMomentMethod::Quadrature, &IntegrationControl::default());
        assert!(matches!(r, Err(Error::Domain(_))));
        // Boundary is rejected as well.
        let k = KnotSet::univariate(&[0.0, 2.0]).unwrap();
        let r = negative_moment(&p, &k, &[0.5], NegativeMomentMethod::Quadrature, &IntegrationControl::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn lowering_drops_vanishing_parameter() {
        let k = KnotSet::univariate(&[0.0, 1.0, 2.0]).unwrap();
        let p = DirichletParams::new(vec![1.0, 2.5, 1.0]).unwrap();
        let (lp, lk) = lower_parameter(&p, &k, 0).unwrap();
        assert_eq!(lp.b(), &[2.5, 1.0]);
        assert_eq!(lk.len(), 2);
        let (lp, lk) = lower_parameter(&p, &k, 1).unwrap();
        assert_eq!(lp.b(), &[1.0, 1.5, 1.0]);
        assert_eq!(lk.len(), 3);
        let q = DirichletParams::new(vec![0.5, 1.0, 1.0]).unwrap();
        assert!(lower_parameter(&q, &k, 0).is_err());
    }

    fn params_and_point(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (
            prop::collection::vec(0.2f64..4.0, n + 1),
            prop::collection::vec(0.01f64..1.0, n + 1),
        )
            .prop_map(|(b, raw)| {
                let s: f64 = raw.iter().sum();
                (b, raw[1..].iter().map(|v| v / s).collect())
            })
    }

    proptest! {
        #[test]
        fn density_identity((b, t) in (1usize..4).prop_flat_map(params_and_point), i in 0usize..4) {
            let p = DirichletParams::new(b).unwrap();
            let i = i % p.len();
            let full: Vec<f64> = std::iter::once(1.0 - t.iter().sum::<f64>()).chain(t.iter().cloned()).collect();
            let lhs = full[i] * dirichlet_density(&p, &t).unwrap();
            let rhs = p.weight(i) * dirichlet_density(&p.elevated(i), &t).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300));
        }

        #[test]
        fn monomial_integral_splits_over_weights(b in prop::collection::vec(0.2f64..4.0, 2..5), seed in 0u32..500) {
            let p = DirichletParams::new(b).unwrap();
            let eta = MultiIndex::new((0..p.len()).map(|i| (seed >> i) % 3).collect());
            let whole = dirichlet_monomial_integral(&p, &eta).unwrap();
            let split: f64 = (0..p.len())
                .map(|i| p.weight(i) * dirichlet_monomial_integral(&p.elevated(i), &eta).unwrap())
                .sum();
            prop_assert!((whole - split).abs() <= 1e-13 * whole);
        }

        #[test]
        fn first_order_oracle_is_mean(b in prop::collection::vec(0.2f64..4.0, 2..6), xs in prop::collection::vec(-2.0f64..2.0, 12)) {
            let p = DirichletParams::new(b).unwrap();
            let points: Vec<Vec<f64>> = (0..p.len()).map(|j| vec![xs[2 * j], xs[2 * j + 1]]).collect();
            let k = KnotSet::new(points).unwrap();
            for l in 0..2 {
                let got = oracle_moment(&p, &k, &MultiIndex::unit(2, l)).unwrap();
                let want: f64 = (0..p.len()).map(|i| p.weight(i) * k.point(i)[l]).sum();
                prop_assert!((got - want).abs() <= 1e-13);
            }
        }

        #[test]
        fn polynomial_negative_moment_matches_oracle(b in prop::collection::vec(0.3f64..3.0, 2..4), xs in prop::collection::vec(-1.0f64..1.0, 3), e in 0u32..4) {
            let p = DirichletParams::new(b).unwrap();
            let k = KnotSet::univariate(&xs[..p.len()]).unwrap();
            let est = negative_moment(&p, &k, &[-f64::from(e)], NegativeMomentMethod::Quadrature, &IntegrationControl::default()).unwrap();
            let want = oracle_moment(&p, &k, &[e].into()).unwrap();
            prop_assert!((est.value - want).abs() <= est.error.max(1e-13));
        }
    }
}
