//! Colored permutation groups `G(r,p,n)`, ordered generating systems (bases),
//! flag-major statistics and exhaustive verification of the identities that
//! relate them to length and to the Hilbert series.

pub mod basis;
pub mod error;
pub mod group;
pub mod par;
pub mod search;
pub mod stats;
pub mod verify;

pub use basis::{
    bplus_basis, compose_from_exponents, decompose, rpn_basis, rpn_basis_with_alpha, select_alpha, sn_basis,
    validate_basis, weyl_basis, wreath_basis, Basis, DecompositionTable, ExponentVector, FailureWitness, Method,
    RpnVariant, WeylType,
};
pub use error::{Error, Result};
pub use group::{closure, enumerate_group, ColoredPerm, ElementSet, GroupSpec, DEFAULT_CEILING};
pub use par::Execution;
pub use search::{alpha_scan, required_orders, search_perfect_hilbertian, SearchLimits, SearchOutcome};
pub use stats::{fmaj_polynomial, hilbert_polynomial, poincare_polynomial, QPolynomial};
pub use verify::{psi, theta, ThetaReading, VerificationReport};
