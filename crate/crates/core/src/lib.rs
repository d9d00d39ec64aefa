//! Exact cohomology dimensions of Koszul complexes `(Ω•, df∧)`, twisted de
//! Rham complexes `(Ω•, d − df∧)` and their logarithmic and meromorphic
//! variants, for polynomial `f` with rational coefficients.

pub mod check;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod forms;
pub mod groebner;
pub mod linalg;
pub mod parse;
pub mod poly;

pub use error::{Error, Result};
