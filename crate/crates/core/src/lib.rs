//! Differential Goppa codes over finite fields.

pub mod code;
pub mod curve;
pub mod design;
pub mod error;
pub mod field;
pub mod io;
pub mod matrix;
pub mod series;
pub mod taylor;

pub use error::{Error, Result};
pub use field::{Field, Fq};
pub use matrix::FqMatrix;
pub use series::{LaurentSeries, TruncatedSeries};
