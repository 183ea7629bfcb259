//! Symbolic engine and numerical verifier for a causal construction of the
//! scattering matrix with bilocal interaction vertices.
//!
//! The crate has four layers:
//!
//! * [`algebra`] — exact operator words over free-field symbols, Wick
//!   expansions, Fermi sign bookkeeping and canonical forms;
//! * [`causal`] — chronological products built from causal two-point
//!   scalars, domain-restricted rewriting and the time-ordering /
//!   factorization identity checkers;
//! * [`propagators`] — smeared evaluation of the frequency-negative part,
//!   the commutator function, retarded and causal Green functions against
//!   Gaussian test functions, with support, splitting and bound checks;
//! * [`smatrix`] — the bilocal interaction vertex, order-by-order series
//!   generation, vacuum matrix elements between smeared states, unitarity
//!   and causal-factorization harnesses.
//!
//! [`sl2c`] carries the finite-dimensional spinor representation matrices
//! and the covering map onto Lorentz transformations, and [`verify`] bundles
//! the reproducible check suites used by the command-line driver and the
//! acceptance tests.

pub mod algebra;
pub mod causal;
pub mod error;
pub mod propagators;
pub mod sl2c;
pub mod smatrix;
pub mod verify;

pub use error::{Error, Result};
