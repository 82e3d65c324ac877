//! Numerical laboratory for the degenerate elliptic operator
//!
//! ```text
//! L = a11 X1² + 2 a12 X2 X1 + a22 X2²,    X1 = ∂x1,  X2 = x1 ∂x2,
//! ```
//!
//! with a uniformly elliptic, possibly rough coefficient matrix. The vector
//! fields degenerate on the axis {x1 = 0} but are bracket-generating, so the
//! operator is subelliptic rather than elliptic.
//!
//! The crate provides, at desk scale:
//!
//! * [`geometry`] — the explicit metric structures attached to the fields:
//!   the gauge ρ, the quasi distance d̃, comparison boxes, quasi-metric balls
//!   and their sublevel-set variants, ball volumes, the ring condition, the
//!   anisotropic dilations, and a lattice approximation of the
//!   Carnot–Carathéodory distance.
//! * [`fields`] and [`calculus`] — coefficient-field generators with declared
//!   ellipticity constants, exact second-order jets, the horizontal Hessian,
//!   and pointwise application of the operator.
//! * [`grid`] and [`solver`] — rectangular grids with interior masks, a
//!   nine-point finite-difference discretization of the operator, and a
//!   sparse direct Dirichlet solver with row diagnostics.
//! * [`barriers`] — the closed-form power barriers ρ^α with exact
//!   derivatives, the case-resolved well and ring barriers, and numerical
//!   verification of their differential inequalities.
//! * [`abp`] and [`envelope`] — discrete convex envelopes, contact sets,
//!   Monge–Ampère mass, and the classical and weighted maximum-principle
//!   estimates.
//! * [`lab`] — the experiment harness: critical density, double ball, power
//!   decay, and Harnack quotients, swept over coefficient families, centers,
//!   radii and scales, with reproducible JSON/CSV reports.
//! * [`cli`] — the command-line front end used by the `grushin-lab` binary.
//!
//! Every runnable capability also ships as an example under `examples/`.

pub mod abp;
pub mod barriers;
pub mod calculus;
pub mod cli;
pub mod envelope;
mod error;
pub mod fields;
pub mod geometry;
pub mod grid;
pub mod lab;
pub mod quad;
pub mod report;
pub mod solver;

pub use error::{Error, Result};
