//! Exact computations with bound quiver algebras: representation varieties,
//! homomorphism and extension spaces, and point counts over finite fields.

pub mod algebra;
pub mod error;
pub mod ext;
pub mod families;
pub mod field;
pub mod hom;
pub mod ideal;
pub mod lab;
pub mod matrix;
pub mod presentation;
pub mod quiver;
pub mod relation;
pub mod rep;
pub mod sample;
pub mod varieties;

pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rationals};
pub use matrix::Matrix;
pub use presentation::BoundQuiverPresentation;
pub use quiver::{Path, Quiver};
pub use relation::Relation;
