//! Tolerances and size caps shared across the crate.

/// Comparison tolerances used by the verifiers and the geometry tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
    /// Normalized-determinant threshold for affine independence.
    pub geometry: f64,
    /// L1 distance below which the origin counts as lying in a convex hull.
    pub hull: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-10,
            geometry: 1e-10,
            hull: 1e-10,
        }
    }
}

impl Tolerances {
    /// `|a - b| <= max(abs, rel * max(|a|, |b|))`.
    pub fn close(&self, a: f64, b: f64) -> bool {
        let scale = a.abs().max(b.abs());
        (a - b).abs() <= self.abs.max(self.rel * scale)
    }
}

/// Size caps for the multinomial-expansion oracle, whose term count grows
/// exponentially in the moment order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_order: u32,
    /// Largest admissible `n` (the knot count minus one).
    pub max_degree: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self {
            max_order: 8,
            max_degree: 8,
        }
    }
}

/// Largest total parameter weight accepted by the coalescent-knot path.
pub const COALESCENT_MAX_WEIGHT: u32 = 24;

/// Largest `n` accepted by the tensor quadrature over the simplex.
pub const QUADRATURE_MAX_DEGREE: usize = 3;
