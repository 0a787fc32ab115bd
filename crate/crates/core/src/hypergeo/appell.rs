//! Appell's `F4`: the double power series and its continuation through a
//! Dirichlet average over a segment.

use super::{check_pochhammer_base, sum_blocks, SeriesControl};
use crate::error::{domain, invalid, Error, Result};
use crate::quadrature::{by_order_doubling, stick_breaking_point, stick_breaking_shapes, BetaRule, BetaTensor, Estimate, IntegrationControl};
use crate::simplex::{negative_moment, power, DirichletParams, KnotSet, NegativeMomentMethod};

/// `Σ_{i,j} (α,i+j)(β,i+j)/((γ,i)(δ,j) i! j!) x1^i x2^j`, summed by total
/// order with each term obtained from its neighbour by a ratio.
pub fn appell_f4(alpha: f64, beta: f64, gamma: f64, delta: f64, x1: f64, x2: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_pochhammer_base("γ", gamma)?;
    check_pochhammer_base("δ", delta)?;
    if !(x1.is_finite() && x2.is_finite()) {
        return invalid("arguments must be finite");
    }
    if x1.abs().sqrt() + x2.abs().sqrt() >= 1.0 {
        return domain(format!(
            "({x1}, {x2}) is outside the series region |x1|^(1/2) + |x2|^(1/2) < 1; use the moment form"
        ));
    }
    // row[j] holds the term (r-j, j) of the current total order r.
    let mut row: Vec<f64> = Vec::new();
    sum_blocks(ctrl, |r| {
        if r == 0 {
            row = vec![1.0];
            return Ok(1.0);
        }
        let rf = f64::from(r);
        let common = (alpha + rf - 1.0) * (beta + rf - 1.0);
        let mut next = Vec::with_capacity(r as usize + 1);
        // (r, 0) from (r-1, 0).
        next.push(row[0] * common * x1 / ((gamma + rf - 1.0) * rf));
        // (r-j, j) from (r-j, j-1), which has order r-1.
        for j in 1..=r as usize {
            let jf = j as f64;
            next.push(row[j - 1] * common * x2 / ((delta + jf - 1.0) * jf));
        }
        row = next;
        Ok(row.iter().sum())
    })
    .map(|s| s.value)
}

/// Knots `x^0, x^1, x^2` (columns) of the segment representation of
/// `F4(α,β;γ,δ; x1(1-x2), x2(1-x1))`.
pub fn f4_knots(x1: f64, x2: f64) -> Result<KnotSet> {
    KnotSet::from_rows(&[
        vec![(1.0 - x1) * (1.0 - x2), 1.0 - x1 - x2, 1.0 - x1],
        vec![1.0 - x2, 1.0 - x2, 1.0],
    ])
}

/// `F4(α,β;γ,δ; x1(1-x2), x2(1-x1))` for `(x1, x2)` with `x1 < 1`,
/// `x2 < 1`, `x1 + x2 < 1`, as
/// `∫_{E_1} R_{-α}(d; u·x^0, u·x^1, u·x^2) φ_b(u) du` with `b = (β, γ-β)`
/// and `d = (γ+δ-α-1, α+β-γ-δ+1, δ-β)`. When `γ = α` the inner average
/// collapses and the value is the negative moment `m_{-b}(d;X)`.
pub fn f4_via_moments(
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    x1: f64,
    x2: f64,
    ctrl: &IntegrationControl,
) -> Result<Estimate> {
    if ![alpha, beta, gamma, delta, x1, x2].iter().all(|v| v.is_finite()) {
        return invalid("parameters and arguments must be finite");
    }
    if x1 == 0.0 && x2 == 0.0 {
        return Ok(Estimate {
            value: 1.0,
            error: 0.0,
            effort: 0,
        });
    }
    if !(x1 < 1.0 && x2 < 1.0 && x1 + x2 < 1.0) {
        return domain(format!("({x1}, {x2}) is outside x1 < 1, x2 < 1, x1 + x2 < 1"));
    }
    let knots = f4_knots(x1, x2)?;
    if !knots.volume_positive() {
        return Err(Error::DegenerateGeometry(format!(
            "the knot triangle is flat at ({x1}, {x2}); it needs x1 != 0 and x2 != 0"
        )));
    }
    let b = [beta, gamma - beta];
    let d = [gamma + delta - alpha - 1.0, alpha + beta - gamma - delta + 1.0, delta - beta];
    if b.iter().any(|&v| v <= 0.0) {
        return Err(Error::Parameter(format!("b = ({}, {}) must be positive", b[0], b[1])));
    }
    if d.iter().any(|&v| v <= 0.0) {
        return Err(Error::Parameter(format!(
            "d = ({}, {}, {}) must be positive for the segment representation",
            d[0], d[1], d[2]
        )));
    }
    let params = DirichletParams::new(d.to_vec())?;
    if gamma == alpha {
        return negative_moment(&params, &knots, &b, NegativeMomentMethod::Quadrature, ctrl);
    }
    let rows = [knots.coordinate_row(0), knots.coordinate_row(1)];
    let shapes = stick_breaking_shapes(&d);
    by_order_doubling(ctrl, |nodes| {
        let outer = BetaRule::new(b[0], b[1], nodes)?;
        let inner = BetaTensor::new(&shapes, nodes)?;
        let mut t = [0.0; 3];
        let mut total = 0.0;
        for (&u, &w) in outer.nodes.iter().zip(&outer.weights) {
            // u carries weight β and pairs with the first row.
            let z: Vec<f64> = (0..3).map(|j| u * rows[0][j] + (1.0 - u) * rows[1][j]).collect();
            let r = inner.integrate(&mut |v| {
                stick_breaking_point(v, &mut t);
                let zt = z[0] * t[0] + z[1] * t[1] + z[2] * t[2];
                power(zt, -alpha)
            });
            total += w * r;
        }
        Ok(total)
    })
}
