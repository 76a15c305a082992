//! A numerical laboratory for composition operators on Bergman spaces of
//! bounded convex domains in C^n.
//!
//! The crate computes A^p norms by seeded Monte Carlo, performs exact sparse
//! polynomial algebra for holomorphic symbols and their Jacobians, builds
//! finite compressions of the composition operator C_phi f = f o phi in the
//! orthonormal monomial basis, and runs singular-value and test-sequence
//! diagnostics for boundedness and compactness.
//!
//! Module map:
//! - [`geometry`]: ball / polydisc / ellipsoid domains, boundary distance,
//!   layers, exhaustions, deterministic sampling;
//! - [`quadrature`]: stratified Monte Carlo with divergence detection and
//!   exact volumes;
//! - [`polyalg`]: sparse multivariate polynomials over complex coefficients;
//! - [`bergman`]: exact monomial norms, the orthonormal basis, A^p norms;
//! - [`maps`]: holomorphic self-maps, Jacobian scans, conjugation;
//! - [`sequences`]: singular test families with boundary poles, weak-null
//!   diagnostics, blow-up exponents;
//! - [`operatorlab`]: operator compressions, compactness diagnostics,
//!   reverse-Carleson and change-of-variables checks.

pub mod bergman;
pub mod error;
pub mod geometry;
pub mod maps;
pub mod operatorlab;
pub mod polyalg;
pub mod quadrature;
pub mod sequences;

pub use error::{Error, Result};
