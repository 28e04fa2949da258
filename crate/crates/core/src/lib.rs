//! Two-qubit states described by two Pauli vectors and a cross dyadic.
//!
//! The crate computes local and global invariants, decides validity,
//! entanglement and separability, reduces states to canonical forms and
//! evaluates the degree of separability, using closed forms for the special
//! families where they exist and a Lewenstein–Sanpera decomposition
//! optimiser everywhere else.

pub mod canonical;
pub mod classify;
pub mod degree;
pub mod error;
pub mod expectations;
pub mod family;
pub mod invariants;
pub mod linalg;
pub mod optimize;
pub mod quartic;
pub mod random;
pub mod state;

pub use error::{Error, Result};
pub use family::{construct_family, sigma_basis, FamilySpec, Rank2Params, Sign};
pub use linalg::{Mat3, Vec3};
pub use state::{mix, DensityMatrix, PureStateVector, Reflection, TwoQubitState};
