//! Moments of multivariate Dirichlet and simplex splines, and their use in
//! evaluating and cross-checking hypergeometric functions of several
//! variables (Carlson's R and S, Appell's F4, Lauricella's F_B and the
//! Lauricella polynomials).
//!
//! The Dirichlet spline `M(·|b;X)` is the law of `Xt` when `t` follows the
//! Dirichlet distribution with parameters `b` on the standard simplex. Its
//! moments `m_β(b;X) = E[(Xt)^β]` are computed by several independent
//! routes so that each one can be checked against the others:
//!
//! * [`simplex::oracle_moment`]: multinomial expansion, exact to roundoff.
//! * [`moments::simplex_moment`]: the two-direction knot/order recursion for
//!   simplex splines, seeded by nested Bézier sums evaluated with
//!   de Casteljau's algorithm.
//! * [`moments::dirichlet_moment`]: drivers for general parameters
//!   (coalescent knots, parameter reduction, degree elevation).

pub mod config;
pub mod error;
pub mod geometry;
pub mod hypergeo;
pub mod moments;
pub mod multiindex;
pub mod quadrature;
pub mod simplex;
pub mod verify;

pub use config::{OracleCaps, Tolerances};
pub use error::{Error, Result};
pub use multiindex::MultiIndex;
pub use quadrature::{Estimate, IntegrationControl};
pub use simplex::{DirichletParams, KnotSet};
