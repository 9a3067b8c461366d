//! Exact symbolic and qualitative analysis of the planar quadratic vector
//! fields attached to the eight classical orthogonal-polynomial families.
//!
//! The crate is organised in layers:
//!
//! * [`exactpoly`] — arbitrary-precision rational scalars, univariate and
//!   bivariate polynomials, truncated power series and quadratic surds.
//!   Every algebraic identity in the crate is decided here with zero
//!   floating-point error.
//! * [`families`] — the registry of the eight classical families
//!   (ρ, τ, λₙ) and exact generation of Pₙ, Pₙ′.
//! * [`vfield`] — construction of the quadratic systems, their Riccati
//!   foliations, Jacobians and invariant algebraic curves with cofactors.
//! * [`darboux`] — cofactor linear algebra producing Darboux invariants
//!   f₁^λ¹···e^st, plus numeric constancy checks along trajectories.
//! * [`classify`] — classification of finite critical points (hyperbolic,
//!   semi-hyperbolic, nilpotent) with exact sign decisions.
//! * [`compactify`] — Poincaré compactification: chart systems and the
//!   critical points at infinity.
//! * [`integrals`] — Riccati ↔ linear ODE transformations and the two
//!   Chebyshev first integrals with their bridge map.
//! * [`portrait`] — adaptive Runge–Kutta integration and deterministic SVG
//!   phase portraits on the plane or the Poincaré disk.
//! * [`selftest`] — the acceptance grid, runnable from tests or the CLI.
//!
//! The library is `no_std` (with `alloc`); all IO lives in the companion
//! CLI crate.
//!
//! ```
//! use opf_core::exactpoly::rat_i;
//! use opf_core::families::{family, FamilyId};
//! use opf_core::vfield::{build_family_system, invariant_curve, lie_derivative};
//!
//! // The Hermite system v' = 2 + 2xv + v², x' = 1 carries the invariant
//! // curve 2vx + 2 with cofactor v + 2x, and Xf = K·f holds exactly.
//! let spec = family(FamilyId::Hermite, None, None).unwrap();
//! let sys = build_family_system(&spec, 1, &rat_i(1)).unwrap();
//! let curve = invariant_curve(&spec, 1, &rat_i(1)).unwrap();
//! assert_eq!(curve.f.to_string(), "2vx+2");
//! assert_eq!(curve.cofactor.to_string(), "v+2x");
//! let residual = &lie_derivative(&sys, &curve.f) - &(&curve.cofactor * &curve.f);
//! assert!(residual.is_zero());
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod exactpoly;
pub mod families;
pub mod vfield;
pub mod darboux;
pub mod classify;
pub mod compactify;
pub mod integrals;
pub mod portrait;
pub mod rng;
pub mod selftest;

pub use exactpoly::{rat, rat_i, BiPoly, PowerSeries1, Rat, Surd, UniPoly, Var};
pub use families::{family, poly_of, FamilyId, FamilySpec, OrthoPoly};
pub use vfield::QuadSystem;

