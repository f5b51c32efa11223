//! Node splitting for quiver representation varieties.
//!
//! The crate is organised bottom-up: [`exactla`] provides exact linear
//! algebra, [`quiver`] the data model and the splitting operations,
//! [`components`] the rank-sequence classification of irreducible components
//! for radical square zero algebras, [`ideals`] the generators of their
//! defining ideals, [`verify`] randomized and brute-force checks, and
//! [`moduli`] the semistability reductions at nodes.

pub mod error;
pub mod exactla;
pub mod components;
pub mod ideals;
pub mod quiver;
pub mod moduli;
pub mod verify;

pub use error::{Error, Result};
