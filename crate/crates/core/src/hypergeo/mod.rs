//! Hypergeometric functions evaluated through spline moments, together with
//! the direct series they are checked against.

mod appell;
mod carlson;
mod lauricella;

pub use appell::{appell_f4, f4_knots, f4_via_moments};
pub use carlson::{
    divided_difference_exp, r_function, r_series, r_series_partial_sums, s_function, s_series, watson_product,
    RMethod, SMethod,
};
pub use lauricella::{
    build_lauricella_knots, lauricella_fb, lauricella_genfun_check, lauricella_grid, lauricella_poly, GenfunCheck, GenfunResidual,
    LauricellaKind, LauricellaMethod, LauricellaSpec,
};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Truncation policy for the power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub max_order: u32,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Abort once the partial sum grows by this factor over a window of
    /// eight orders.
    pub divergence_factor: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_order: 400,
            abs_tol: 1e-16,
            rel_tol: 1e-15,
            divergence_factor: 1e8,
        }
    }
}

impl SeriesControl {
    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.divergence_factor > 1.0) {
            return invalid("series tolerances must be positive and the divergence factor above 1");
        }
        Ok(())
    }
}

/// A truncated series value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    pub value: f64,
    /// Magnitude of the last order block added.
    pub tail: f64,
    /// Highest order summed.
    pub order: u32,
}

const DIVERGENCE_WINDOW: usize = 8;

/// Sums `Σ_r block(r)` by order blocks, stopping after two consecutive
/// blocks below `max(abs_tol, rel_tol·|partial|)`.
pub(crate) fn sum_blocks(ctrl: &SeriesControl, mut block: impl FnMut(u32) -> Result<f64>) -> Result<SeriesSum> {
    ctrl.validate()?;
    let mut value = 0.0;
    let mut quiet = 0;
    let mut history: Vec<f64> = Vec::new();
    for r in 0..=ctrl.max_order {
        let b = block(r)?;
        value += b;
        let tail = b.abs();
        if !value.is_finite() {
            return Err(Error::NonConvergence { partial: value, order: r });
        }
        history.push(value.abs());
        if history.len() > DIVERGENCE_WINDOW {
            let past = history[history.len() - 1 - DIVERGENCE_WINDOW];
            if value.abs() > 1.0 && value.abs() > ctrl.divergence_factor * past.max(f64::MIN_POSITIVE) {
                return Err(Error::NonConvergence { partial: value, order: r });
            }
        }
        if r > 0 && tail <= ctrl.abs_tol.max(ctrl.rel_tol * value.abs()) {
            quiet += 1;
            if quiet == 2 {
                return Ok(SeriesSum { value, tail, order: r });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        partial: value,
        order: ctrl.max_order,
    })
}

/// Rejects `γ ∈ {0, -1, -2, ...}`.
pub(crate) fn check_pochhammer_base(name: &str, g: f64) -> Result<()> {
    if g <= 0.0 && g.fract() == 0.0 {
        return Err(Error::Parameter(format!("{name} = {g} is a nonpositive integer")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let s = sum_blocks(&SeriesControl::default(), |r| Ok(0.5f64.powi(r as i32))).unwrap();
        assert!((s.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn divergence_is_reported() {
        let err = sum_blocks(&SeriesControl::default(), |r| Ok(20f64.powi(r as i32))).unwrap_err();
        match err {
            Error::NonConvergence { partial, order } => {
                assert!(partial > 1.0);
                assert!(order < 40);
            }
            other => panic!("unexpected {other:?}"),
        }
        let short = SeriesControl {
            max_order: 5,
            ..SeriesControl::default()
        };
        assert!(matches!(
            sum_blocks(&short, |r| Ok(0.9f64.powi(r as i32))),
            Err(Error::NonConvergence { order: 5, .. })
        ));
    }

    #[test]
    fn terminating_series_stops() {
        let s = sum_blocks(&SeriesControl::default(), |r| Ok(if r < 3 { 1.0 } else { 0.0 })).unwrap();
        assert_eq!(s.value, 3.0);
        assert_eq!(s.order, 4);
    }
}
