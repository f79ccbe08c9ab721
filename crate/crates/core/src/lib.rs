//! Exact-arithmetic duality certificates.
//!
//! Every obstruction computed here is a torsion group read off a Smith normal
//! form, or a rational certificate produced by an exact simplex solver. The
//! crate is organised bottom-up:
//!
//! - [`linalg`]: big-integer matrices, Hermite and Smith normal forms, integer
//!   linear systems and kernels.
//! - [`homology`]: finitely generated abelian groups, `Hom(-, Z)`, `Ext^1(-, Z)`
//!   and the derived dual of a two-term complex.
//! - [`graph`]: Laplacians, Jacobians, Kirchhoff counts, Dhar reduction,
//!   Baker-Norine rank and Riemann-Roch.
//! - [`intdual`]: torsion certificates, adjoint integer solves and the
//!   discrete Farkas lemma through truncated binomial cones.
//! - [`lp`]: exact rational simplex with Farkas certificates.
//! - [`facial`]: facial reduction over the nonnegative orthant and the unified
//!   strong-duality certificate.
//! - [`dynamics`]: ethic memory and entropy of morphism chains.
//!
//! With the default `parallel` feature, batch loops (per-coordinate LPs,
//! rank enumeration, prefix profiles) run on rayon; without it the same code
//! runs sequentially and produces identical results.

pub mod dynamics;
mod error;
pub mod facial;
pub mod graph;
pub mod homology;
pub mod intdual;
pub mod linalg;
pub mod lp;
pub mod par;

pub use error::{Error, Result};
