//! Frenet apparatus and Mannheim pair theory for non-null curves in
//! Minkowski 3-space, with numerical verification of every identity against
//! independent closed-form oracles.
//!
//! Modules:
//! - [`lorentz`]: indefinite inner product, causal classification, the
//!   metric-adjusted cross product, pair angles.
//! - [`curves`]: analytic curve families with exact (Taylor-jet)
//!   derivatives, intrinsically defined curves, sampled curves with
//!   finite-difference stencils, arc-length reparametrization.
//! - [`frenet`]: frames, curvature, torsion, Frenet-equation residuals.
//! - [`mannheim`]: pair construction, case classification, identity and
//!   constancy checks, planar conjugates, weakened-pair validation.
//! - [`report`]: residual aggregation and CSV/JSON serialization.

pub mod curves;
pub mod frenet;
pub mod jet;
pub mod lorentz;
pub mod mannheim;
pub mod report;
