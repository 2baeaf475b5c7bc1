//! Numerical and exact-arithmetic machinery for the abelian monopole equations
//! on a flat 4-torus.
//!
//! The crate is organized around the fiberwise algebra and the lattice PDE layer
//! built on top of it:
//!
//! - [`scalar`]: a small complex-scalar abstraction with two backends, `f64`
//!   doubles for field computations and Gaussian rationals for exact identity
//!   checks, plus 2x2 / 4x4 matrix helpers.
//! - [`clifford`]: quaternions, the Clifford action of 1-forms and self-dual
//!   2-forms on the spinor fiber `W+ (+) W-`, the quadratic map `sigma` and its
//!   pairing identities.
//! - [`lattice`]: periodic 4-torus lattice with discrete exterior calculus
//!   (d, d*, self-dual projection, Hodge decomposition, spectral Poisson solves).
//! - [`dirac`]: U(1) link-phase connections, the covariant Dirac operator and
//!   its exact lattice adjoint, plaquette curvature, and a Weitzenbock-formula
//!   verifier.
//! - [`sw`]: the (perturbed) monopole-equation residual, gauge action, Coulomb
//!   gauge fixing, and an energy-descent solver.
//! - [`kahler`]: the canonical splitting `W+ = C (+) K^{-1}` on the flat Kahler
//!   torus, the curvature-equation component formulas, and related residuals.
//! - [`topology`]: exact integer arithmetic for intersection forms (E8, H),
//!   characteristic elements, the index-dimension formula, and divisibility
//!   bounds.
//! - [`snapshot`]: the shared text format for field files.
//! - [`fieldgen`]: seeded random and band-limited test fields.
//! - [`verify`]: the named identity suites driven by the CLI.

pub mod clifford;
pub mod dirac;
pub mod error;
pub mod fieldgen;
pub mod kahler;
pub mod lattice;
pub mod scalar;
pub mod snapshot;
pub mod sw;
pub mod topology;
pub mod verify;

pub use error::{Result, SwtError};
