pub mod error;
pub mod exact;
pub mod field;
pub mod dbt;
pub mod laguerre;
pub mod rsfields;
pub mod shape;
pub mod spectral;
pub mod suite;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use exact::{Bound, Poly, Rat, RatFunc};
pub use field::{EvenField, FieldRecord, OddField, Params, Parity};
