//! Jacobi matrices of balanced and equilibrium measures on the attractors of
//! iterated function systems.
//!
//! The library builds finite-interval approximations `E_n` of an IFS attractor,
//! solves the logarithmic equilibrium problem on them, converts the resulting
//! discrete measures into recurrence coefficients (a truncated streaming
//! variant of the Gragg–Harrod rotation algorithm), and uses the coefficients
//! to evaluate potentials, capacities, Green's functions and the conformal map
//! of the complement.
//!
//! Module map:
//! * [`ifs`] — map families, interval unions `E_n`, balanced-measure atoms and
//!   the exact Jacobi recursion for real quadratic Julia sets;
//! * [`quadrature`] — Chebyshev–Gauss nodes and affine interval maps;
//! * [`equilibrium`] — gap-root solver and equilibrium measure discretization;
//! * [`jacobi`] — discrete measure ⇄ Jacobi matrix conversions;
//! * [`pipelines`] — convergence drivers with effective-rank bookkeeping;
//! * [`potential`] — complex logarithmic potentials and root asymptotics;
//! * [`conformal`] — the exterior conformal map and its Joukowsky composition.

pub mod conformal;
pub mod equilibrium;
mod error;
pub mod ifs;
pub mod jacobi;
pub mod pipelines;
pub mod potential;
pub mod quadrature;
pub mod serial;

pub use error::{Error, Result};
pub use ifs::{DiscreteMeasure, IfsSystem, IntervalUnion};
pub use jacobi::JacobiMatrix;
