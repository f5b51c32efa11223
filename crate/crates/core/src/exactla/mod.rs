//! Exact dense linear algebra over the rationals and prime fields.

mod field;
mod matrix;

pub use field::{
    format_rational, is_prime, parse_rational, Field, FieldElement, FieldKind, PrimeField,
    Rationals, DEFAULT_PRIME,
};
pub use matrix::{Echelon, Matrix};
