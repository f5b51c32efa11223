//! Polynomials in the arrow-matrix variables and the generators of the
//! prime ideals of the varieties `C_r`.

mod generators;
mod poly;
mod symbolic;

pub use generators::{
    export, generators_for_component, generators_relative, gl_derivation, lift_split_polynomial,
    parse_polynomial_file, saturate_span, span_of, translate, ExportFormat, Generator,
    GeneratorSet, Provenance, SpanBasis,
};
pub use poly::{ambient_variables, Monomial, Polynomial, Var};
pub use symbolic::{binomial, build_h, build_t, subsets, SymbolicMatrix};
