//! Moments of simplex and Dirichlet splines.

pub mod bezier;
pub mod dirichlet;
pub mod identities;
pub mod simplex_spline;

pub use bezier::{bernstein, decasteljau, BezierCoefficients};
pub use dirichlet::{coalescent_knots, power_moments, dirichlet_moment, dirichlet_moment_auto, AUTO_ORDER, dirichlet_moment_report, ElevationTable, MomentReport, MomentStrategy};
pub use identities::{degree_elevate_check, param_elevate_617, ElevationResiduals, Residual};
pub use simplex_spline::{base_moment, first_moment_prefix, simplex_moment, simplex_moment_recursive, BaseMethod, MomentTable};
