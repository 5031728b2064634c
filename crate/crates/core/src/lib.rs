//! Exact computation of signature-defect invariants on explicit families of
//! surface mapping classes and homology cylinders.
//!
//! The crate is layered bottom-up:
//!
//! * [`cyclo`]: exact arithmetic in cyclotomic fields with certified signs.
//! * [`freegroup`]: free-group words, the integral group ring and Fox calculus.
//! * [`hermitian`]: exact congruence diagonalization of Hermitian matrices.
//! * [`twistfamily`]: intersection-form matrices for products of Dehn twists
//!   about two bounding curves, with the derived rho values and cocycle defects.
//! * [`knotsig`]: Levine-Tristram signature functions and their circle averages.
//! * [`cylinders`]: the rho ledger of homology cylinders built by infection.

pub mod cyclo;
pub mod cylinders;
mod error;
pub mod freegroup;
pub mod hermitian;
pub mod knotsig;
pub mod twistfamily;

pub use cyclo::{CyclotomicNumber, Sign};
pub use cylinders::{InfectionRecord, InfectionScript};
pub use error::{Error, Result};
pub use freegroup::{FreeWord, GroupRingElement};
pub use hermitian::{HermitianMatrix, Inertia, Matrix};
pub use knotsig::SeifertMatrix;
pub use twistfamily::TwistFamilySpec;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
