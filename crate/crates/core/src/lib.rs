//! Exact word algebra for interpolated multiple zeta values.
//!
//! Words over `{x, y}` carry coefficients in `Q[t]`. The crate implements the
//! t-shuffle and t-stuffle products, the interpolation maps `S_t`, the
//! derivations `∂_n`, regularization, a truncated-series evaluator and a
//! catalog of identities that can be checked exactly or numerically.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod maps;
pub mod numeric;
pub mod regularize;
pub mod relations;
pub mod words;

pub use algebra::{Element, Product};
pub use error::Error;
pub use exactnum::{Rational, TPoly};
pub use words::{Class, Index, Word};
