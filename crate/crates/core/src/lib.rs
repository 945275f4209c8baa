//! Generalized discrete q-Hermite II polynomials on the q-lattice and the
//! q-deformed Calogero-Vasiliev oscillator built from them.
//!
//! The crate is organised bottom-up:
//!
//! * [`qcore`]: q-shifted factorials, q-numbers, q-Gamma, q-exponentials,
//!   the q-Dunkl kernel.
//! * [`lattice`]: the truncated lattice `{±q^n}`, grid functions, Jackson
//!   integration and the weighted inner product.
//! * [`qops`]: q-difference and q-Dunkl operators on grid functions.
//! * [`hermite`]: the polynomials, their weight, normalization constants and
//!   the orthonormal wave functions.
//! * [`oscillator`]: ladder operators on the grid, spectral operators
//!   (`N`, `K`, `b`, `b+`, su(1,1) generators, Casimir, Hamiltonian) and
//!   coherent states.
//! * [`transform`]: the q-Dunkl transform and its inverse.
//! * [`classical`]: `q = 1` reference objects used as limit oracles.
//! * [`exact`]: rational-arithmetic coefficients, an oracle for identities
//!   whose floating-point evaluation cancels.
//! * [`verify`]: named verification suites producing [`report::VerificationReport`]s.

pub mod classical;
pub mod error;
pub mod exact;
pub mod hermite;
pub mod lattice;
pub mod oscillator;
pub mod qcore;
pub mod qops;
pub mod report;
pub mod transform;
pub mod verify;

pub use error::{QError, Result};
pub use hermite::HermiteFamily;
pub use lattice::{GridFunction, LatticeGrid, Sign};
pub use num_complex::Complex64;
pub use oscillator::{CoherentState, SpectralVector};
pub use qcore::QContext;
pub use qops::{QOperator, QOperatorKind};
pub use report::VerificationReport;
pub use transform::TransformPlan;
