//! Residuals of the moment identities, evaluated with the expansion oracle.
//!
//! Each residual carries the sum of absolute values of its terms, so callers
//! can judge it relative to the size of the cancelling quantities.

use serde::{Deserialize, Serialize};

use super::dirichlet::ElevationTable;
use crate::error::{invalid, Error, Result};
use crate::multiindex::MultiIndex;
use crate::simplex::{oracle_moment, DirichletParams, KnotSet};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Residual {
    pub residual: f64,
    /// Sum of the absolute values of all terms.
    pub scale: f64,
}

impl Residual {
    fn from_terms(terms: &[f64]) -> Self {
        Self {
            residual: terms.iter().sum(),
            scale: terms.iter().map(|t| t.abs()).sum(),
        }
    }

    /// `|residual| / scale`, or the absolute residual when every term is zero.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.residual.abs() / self.scale
        } else {
            self.residual.abs()
        }
    }
}

/// Residuals of the degree-elevation pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElevationResiduals {
    /// `m_β(b) - Σ_i w_i m_β(b+e_i)`.
    pub mass: Residual,
    /// `m_{β+d_l}(b) - Σ_i w_i x^i_l m_β(b+e_i)` for each coordinate `l`.
    pub coordinates: Vec<Residual>,
}

impl ElevationResiduals {
    pub fn max_relative(&self) -> f64 {
        self.coordinates
            .iter()
            .map(Residual::relative)
            .fold(self.mass.relative(), f64::max)
    }
}

fn check_shapes(params: &DirichletParams, knots: &KnotSet, beta: &MultiIndex) -> Result<()> {
    if params.len() != knots.len() || beta.dim() != knots.dim() {
        return invalid("parameter, knot and moment-order dimensions disagree");
    }
    Ok(())
}

pub fn degree_elevate_check(params: &DirichletParams, knots: &KnotSet, beta: &MultiIndex) -> Result<ElevationResiduals> {
    check_shapes(params, knots, beta)?;
    let raised: Vec<f64> = (0..params.len())
        .map(|i| oracle_moment(&params.elevated(i), knots, beta))
        .collect::<Result<_>>()?;
    let w = params.weights();
    let mut mass = vec![oracle_moment(params, knots, beta)?];
    mass.extend(raised.iter().zip(&w).map(|(m, w)| -w * m));
    let coordinates = (0..knots.dim())
        .map(|l| {
            let mut terms = vec![oracle_moment(params, knots, &beta.plus_unit(l))?];
            terms.extend((0..params.len()).map(|i| -w[i] * knots.point(i)[l] * raised[i]));
            Ok(Residual::from_terms(&terms))
        })
        .collect::<Result<_>>()?;
    Ok(ElevationResiduals {
        mass: Residual::from_terms(&mass),
        coordinates,
    })
}

/// `(c+|β|-1) m_β(b) - (c-1) m_β(b-e_j) - Σ_l β_l x^j_l m_{β-d_l}(b)`.
///
/// With `b_j = 1` the lowered set drops knot `j`, which needs `n > s`.
pub fn recurrence_54_residual(params: &DirichletParams, knots: &KnotSet, beta: &MultiIndex, j: usize) -> Result<Residual> {
    check_shapes(params, knots, beta)?;
    if j >= params.len() {
        return invalid(format!("pivot {j} out of range"));
    }
    if params.b()[j] < 1.0 {
        return Err(Error::Parameter(format!("pivot parameter b_{j} = {} is below 1", params.b()[j])));
    }
    if !knots.volume_positive() {
        return Err(Error::DegenerateGeometry("requires vol_s([X]) > 0".into()));
    }
    let c = params.c();
    let lowered = if params.b()[j] == 1.0 {
        if knots.degree() <= knots.dim() {
            return Err(Error::Parameter("dropping a knot requires n > s".into()));
        }
        let mut b = params.b().to_vec();
        b.remove(j);
        oracle_moment(&DirichletParams::new(b)?, &knots.without(j)?, beta)?
    } else {
        let mut b = params.b().to_vec();
        b[j] -= 1.0;
        oracle_moment(&DirichletParams::new(b)?, knots, beta)?
    };
    let mut terms = vec![
        (c + f64::from(beta.order()) - 1.0) * oracle_moment(params, knots, beta)?,
        -(c - 1.0) * lowered,
    ];
    for l in 0..beta.dim() {
        if let Some(lower) = beta.minus_unit(l) {
            terms.push(-f64::from(beta[l]) * knots.point(j)[l] * oracle_moment(params, knots, &lower)?);
        }
    }
    Ok(Residual::from_terms(&terms))
}

fn check_pair(params: &DirichletParams, i: usize, j: usize) -> Result<()> {
    if i == j || i >= params.len() || j >= params.len() {
        return invalid(format!("need two distinct knot indices, got {i} and {j}"));
    }
    let (bi, bj) = (params.b()[i], params.b()[j]);
    if bi < 1.0 || bj < 1.0 {
        return Err(Error::Parameter(format!("requires b_{i}, b_{j} >= 1, got {bi}, {bj}")));
    }
    Ok(())
}

fn moment_lowered(params: &DirichletParams, knots: &KnotSet, beta: &MultiIndex, j: usize) -> Result<f64> {
    let mut b = params.b().to_vec();
    b[j] -= 1.0;
    if b[j] == 0.0 {
        b.remove(j);
        return oracle_moment(&DirichletParams::new(b)?, &knots.without(j)?, beta);
    }
    oracle_moment(&DirichletParams::new(b)?, knots, beta)
}

/// `(c-1)[m_β(b-e_j) - m_β(b-e_i)] + Σ_l β_l (x^j_l - x^i_l) m_{β-d_l}(b)`.
pub fn zill_55_residual(params: &DirichletParams, knots: &KnotSet, beta: &MultiIndex, i: usize, j: usize) -> Result<Residual> {
    check_shapes(params, knots, beta)?;
    check_pair(params, i, j)?;
    let c = params.c();
    let mut terms = vec![
        (c - 1.0) * moment_lowered(params, knots, beta, j)?,
        -(c - 1.0) * moment_lowered(params, knots, beta, i)?,
    ];
    for l in 0..beta.dim() {
        if let Some(lower) = beta.minus_unit(l) {
            let dx = knots.point(j)[l] - knots.point(i)[l];
            terms.push(f64::from(beta[l]) * dx * oracle_moment(params, knots, &lower)?);
        }
    }
    Ok(Residual::from_terms(&terms))
}

/// `(c-1)[x^i_k m_β(b-e_j) - x^j_k m_β(b-e_i)] - (x^i_k - x^j_k)(c+|β|-1) m_β(b)
///  + Σ_l β_l W_{k,l} m_{β-d_l}(b)` with `W_{k,l} = x^i_k x^j_l - x^j_k x^i_l`.
pub fn zill_56_residual(
    params: &DirichletParams,
    knots: &KnotSet,
    beta: &MultiIndex,
    i: usize,
    j: usize,
    k: usize,
) -> Result<Residual> {
    check_shapes(params, knots, beta)?;
    check_pair(params, i, j)?;
    if k >= knots.dim() {
        return invalid(format!("coordinate {k} out of range"));
    }
    let (xi, xj) = (knots.point(i), knots.point(j));
    if xi[k] == 0.0 || xj[k] == 0.0 {
        return Err(Error::Parameter(format!("requires x^{i}_{k}, x^{j}_{k} != 0")));
    }
    let c = params.c();
    let mut terms = vec![
        (c - 1.0) * xi[k] * moment_lowered(params, knots, beta, j)?,
        -(c - 1.0) * xj[k] * moment_lowered(params, knots, beta, i)?,
        -(xi[k] - xj[k]) * (c + f64::from(beta.order()) - 1.0) * oracle_moment(params, knots, beta)?,
    ];
    for l in 0..beta.dim() {
        if let Some(lower) = beta.minus_unit(l) {
            let w = xi[k] * xj[l] - xj[k] * xi[l];
            terms.push(f64::from(beta[l]) * w * oracle_moment(params, knots, &lower)?);
        }
    }
    Ok(Residual::from_terms(&terms))
}

/// Recovers `x = (x_1..x_n)` from a knot set of the Lauricella form: `n+1`
/// points in `R^n`, point `i < n` equal to ones except `1 - x_i` in slot
/// `i`, and the last point all ones.
pub fn lauricella_arguments(knots: &KnotSet) -> Result<Vec<f64>> {
    let n = knots.dim();
    if knots.len() != n + 1 {
        return invalid(format!("expected {} knots in R^{n}, got {}", n + 1, knots.len()));
    }
    let mut x = Vec::with_capacity(n);
    for i in 0..=n {
        for (l, &v) in knots.point(i).iter().enumerate() {
            if l != i && v != 1.0 {
                return invalid(format!("knot {i} is not of the Lauricella form"));
            }
        }
        if i < n {
            x.push(1.0 - knots.point(i)[i]);
        }
    }
    Ok(x)
}

/// `m_β(b+e_m;X) = [m_β(b;X) - m_{β+d_m}(b;X)] / (w_m x_m)` for the
/// Lauricella knot form. Moments on the right come from an elevation table.
pub fn param_elevate_617(params: &DirichletParams, knots: &KnotSet, beta: &MultiIndex, m: usize) -> Result<f64> {
    check_shapes(params, knots, beta)?;
    let x = lauricella_arguments(knots)?;
    if m >= x.len() {
        return invalid(format!("index {m} out of range for n = {}", x.len()));
    }
    if x[m] == 0.0 {
        return Err(Error::SingularConfiguration(format!("x_{m} = 0 makes vol_n([X]) vanish")));
    }
    let table = ElevationTable::new(params, knots, beta.order() + 1)?;
    let lower = table.get(beta).expect("within table");
    let upper = table.get(&beta.plus_unit(m)).expect("within table");
    Ok((lower - upper) / (params.weight(m) * x[m]))
}

/// `(c+|β|) m_{β+d_m} - [c(1-w_m x_m)+|β|] m_β + Σ_l β_l ε_lm [m_{β-d_l} - m_{β-d_l+d_m}]`
/// for the Lauricella knot form.
pub fn recurrence_616_residual(params: &DirichletParams, knots: &KnotSet, beta: &MultiIndex, m: usize) -> Result<Residual> {
    check_shapes(params, knots, beta)?;
    let x = lauricella_arguments(knots)?;
    if m >= x.len() {
        return invalid(format!("index {m} out of range for n = {}", x.len()));
    }
    let c = params.c();
    let order = f64::from(beta.order());
    let mut terms = vec![
        (c + order) * oracle_moment(params, knots, &beta.plus_unit(m))?,
        -(c * (1.0 - params.weight(m) * x[m]) + order) * oracle_moment(params, knots, beta)?,
    ];
    for l in 0..beta.dim() {
        if let Some(lower) = beta.minus_unit(l) {
            let eps = if l == m { 1.0 - x[m] } else { 1.0 };
            let scale = f64::from(beta[l]) * eps;
            terms.push(scale * oracle_moment(params, knots, &lower)?);
            terms.push(-scale * oracle_moment(params, knots, &lower.plus_unit(m))?);
        }
    }
    Ok(Residual::from_terms(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lauricella_knots(x: &[f64]) -> KnotSet {
        let n = x.len();
        let mut pts: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|l| if l == i { 1.0 - x[i] } else { 1.0 }).collect())
            .collect();
        pts.push(vec![1.0; n]);
        KnotSet::new(pts).unwrap()
    }

    #[test]
    fn elevation_examples() {
        let unit = KnotSet::univariate(&[0.0, 1.0]).unwrap();
        let r = degree_elevate_check(&DirichletParams::ones(2), &unit, &[1].into()).unwrap();
        assert!(r.max_relative() < 1e-15);
        let r = degree_elevate_check(&DirichletParams::new(vec![0.3, 2.0]).unwrap(), &unit, &[0].into()).unwrap();
        assert!(r.mass.residual.abs() < 1e-15);
    }

    #[test]
    fn param_elevate_examples() {
        let x = [0.4];
        let k = lauricella_knots(&x);
        let b = DirichletParams::new(vec![1.5, 2.0]).unwrap();
        let got = param_elevate_617(&b, &k, &[2].into(), 0).unwrap();
        let want = oracle_moment(&b.elevated(0), &k, &[2].into()).unwrap();
        assert!((got - want).abs() < 1e-13);
        let zero = param_elevate_617(&b, &k, &[0].into(), 0).unwrap();
        let first = oracle_moment(&b, &k, &[1].into()).unwrap();
        assert!((zero - (1.0 - first) / (b.weight(0) * x[0])).abs() < 1e-15);
        let flat = lauricella_knots(&[0.0, 0.3]);
        assert!(matches!(
            param_elevate_617(&DirichletParams::ones(3), &flat, &[1, 0].into(), 0),
            Err(Error::SingularConfiguration(_))
        ));
    }

    #[test]
    fn hypotheses_are_enforced() {
        let k = KnotSet::univariate(&[0.0, 1.0, 3.0]).unwrap();
        let p = DirichletParams::new(vec![0.5, 2.0, 1.0]).unwrap();
        assert!(recurrence_54_residual(&p, &k, &[2].into(), 0).is_err());
        assert!(zill_55_residual(&p, &k, &[2].into(), 0, 1).is_err());
        assert!(zill_56_residual(&p, &k, &[2].into(), 1, 2, 0).is_ok());
        let tight = KnotSet::univariate(&[0.0, 1.0]).unwrap();
        assert!(recurrence_54_residual(&DirichletParams::ones(2), &tight, &[1].into(), 0).is_err());
    }

    fn knots_2d() -> impl Strategy<Value = KnotSet> {
        prop::collection::vec(prop::collection::vec(-1.0f64..2.0, 2), 4)
            .prop_map(|p| KnotSet::new(p).unwrap())
            .prop_filter("nondegenerate", |k| k.volume_positive())
        .prop_filter("nonzero coordinates", |k| k.points().iter().flatten().all(|&v| v != 0.0))
    }

    fn beta_2d() -> impl Strategy<Value = MultiIndex> {
        (0u32..3, 0u32..3).prop_map(|(a, b)| MultiIndex::from([a, b]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn degree_elevation_vanishes(k in knots_2d(), b in prop::collection::vec(0.2f64..3.0, 4), beta in beta_2d()) {
            let r = degree_elevate_check(&DirichletParams::new(b).unwrap(), &k, &beta).unwrap();
            prop_assert!(r.max_relative() < 1e-12);
        }

        #[test]
        fn parameter_reduction_vanishes(
            k in knots_2d(),
            b in prop::collection::vec(1.0f64..3.5, 4),
            beta in beta_2d(),
            j in 0usize..4,
        ) {
            let r = recurrence_54_residual(&DirichletParams::new(b).unwrap(), &k, &beta, j).unwrap();
            prop_assert!(r.relative() < 1e-11, "{r:?}");
        }

        #[test]
        fn zill_identities_vanish(
            k in knots_2d(),
            b in prop::collection::vec(1.0f64..3.5, 4),
            beta in beta_2d(),
            coord in 0usize..2,
        ) {
            let p = DirichletParams::new(b).unwrap();
            prop_assert!(zill_55_residual(&p, &k, &beta, 0, 2).unwrap().relative() < 1e-11);
            let r = zill_56_residual(&p, &k, &beta, 1, 3, coord).unwrap();
            prop_assert!(r.relative() < 1e-11, "{r:?} {p:?} {beta}");
        }

        #[test]
        fn moment_recurrence_vanishes(
            x in prop::collection::vec(0.05f64..0.95, 1..4),
            b in prop::collection::vec(0.2f64..3.0, 4),
            raw in prop::collection::vec(0u32..3, 3),
            m in 0usize..3,
        ) {
            let n = x.len();
            let k = lauricella_knots(&x);
            let p = DirichletParams::new(b[..=n].to_vec()).unwrap();
            let beta = MultiIndex::new(raw[..n].to_vec());
            let r = recurrence_616_residual(&p, &k, &beta, m % n).unwrap();
            prop_assert!(r.relative() < 1e-11, "{r:?}");
        }

        #[test]
        fn parameter_elevation_matches_oracle(
            x in prop::collection::vec(0.05f64..0.95, 1..4),
            b in prop::collection::vec(0.2f64..3.0, 4),
            raw in prop::collection::vec(0u32..3, 3),
            m in 0usize..3,
        ) {
            let n = x.len();
            let k = lauricella_knots(&x);
            let p = DirichletParams::new(b[..=n].to_vec()).unwrap();
            let beta = MultiIndex::new(raw[..n].to_vec());
            let got = param_elevate_617(&p, &k, &beta, m % n).unwrap();
            let want = oracle_moment(&p.elevated(m % n), &k, &beta).unwrap();
            prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1e-3), "{got} vs {want}");
        }
    }
}
