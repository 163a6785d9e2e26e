//! Phase-space toolkit for symmetry-constrained Gaussian bosonic systems.
//!
//! Everything is built on the real interleaved quadrature basis
//! (x₁, p₁, …, xₙ, pₙ) with symplectic form Ω = ⊕ⱼ [[0, 1], [−1, 0]].
//! States are (displacement, covariance) pairs, channels are (X, Y, ξ)
//! triples, and symmetry groups act through symplectic representations.
//!
//! The main pieces:
//! - [`basis`]: basis tags and conversions between real and complex bases.
//! - [`symplectic`]: predicates, symplectic spectra, Williamson and
//!   Bloch–Messiah decompositions.
//! - [`rep`]: symplectic symmetry representations (U(1), SU(2) Schwinger,
//!   explicit finite generator sets) and invariance/covariance tests.
//! - [`state`] / [`channel`]: Gaussian states, unitaries and channels.
//! - [`decomp`]: simultaneous normal-mode decomposition with a conserved
//!   charge, conservation data and state interconversion.
//! - [`monotone`]: asymmetry monotones (Petz–Rényi family, second-derivative
//!   family, rank monotones, dephasing entropies).
//! - [`fock`]: dense truncated number-basis oracle used to cross-check the
//!   phase-space computations.
//! - [`dilation`]: invariant purifications and covariant Stinespring
//!   dilations.

pub mod basis;
pub mod channel;
pub mod config;
pub mod decomp;
pub mod dilation;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod monotone;
pub mod rep;
pub mod state;
pub mod symplectic;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use linalg::{Cmat, Cvec, Dmat, Dvec, C64};
