//! Exact Laurent polynomial arithmetic over Z and prime-field predicates.

pub mod field;
pub mod poly;
pub mod registry;

pub use field::{
    cube_root, has_cube_root, inv_mod, is_prime, is_square, mul_mod, nth_roots, pow_mod, square_root,
    PrimeFieldElement,
};
pub use poly::{ArithOp, Exponents, MultiPoly};
pub use registry::VarRegistry;

/// Arbitrary-precision scalar used for all coefficients.
pub type IntScalar = num_bigint::BigInt;
