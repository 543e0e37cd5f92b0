//! Computational toolkit for three-dimensional Sol geometry.
//!
//! Sol is the solvable Lie group `R^2 ⋊ R` carrying the left-invariant metric
//! `e^{-2z} dx^2 + e^{2z} dy^2 + dz^2`. This crate implements, and is built to
//! numerically cross-validate, the explicit structures attached to that
//! geometry:
//!
//! - [`sol`] — the group law, left-invariant frame, musical isomorphisms,
//!   generating isometries, and the pulled-back symplectic form on the
//!   tangent bundle;
//! - [`flow`] — the Hamiltonian geodesic flow on the unit cotangent bundle,
//!   with exact solutions for the straight (type A) and hyperbolic-leaf
//!   (type B) families and a classifier for initial conditions;
//! - [`linearized`] — the 6×6 variational equation, numerical monodromy in
//!   the left-invariant frame, the closed-form 4×4 flow matrices along type-A
//!   and type-B geodesics, and Jacobi-field verification;
//! - [`lattice`] — hyperbolic `GL(2,Z)` monodromies, suspension lattices,
//!   Smith-normal-form homology of torus bundles, and sapphire wrappers;
//! - [`census`] — closed-geodesic censuses on suspensions: type-A enumeration
//!   with lengths and indices, type-B counting via periodic points, complete
//!   elliptic integral bounds, and the metric-scale chooser;
//! - [`cz`] — Conley–Zehnder / Morse–Bott indices of paths of 2×2 symplectic
//!   matrices via signed crossing counts;
//! - [`curves`] — combinatorial index budgets for trees encoding punctured
//!   nodal genus-0 curves.
//!
//! The crate is `no_std`-compatible (enable the `libm` feature instead of the
//! default `std` one); it allocates but performs no IO. The companion `solgeo`
//! crate carries the command-line interface and file formats.

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("solgeo-core requires either the `std` or the `libm` feature");

extern crate alloc;

pub mod census;
pub mod curves;
pub mod cz;
pub mod error;
pub mod flow;
pub mod lattice;
pub mod linearized;
pub mod math;
pub mod ode;
pub mod snf;
pub mod sol;

pub use error::{Result, SolError};
pub use flow::{GeodesicType, PhaseState};
pub use lattice::{HomologyReport, HyperbolicMonodromy, SolManifold};
pub use sol::SolElement;
