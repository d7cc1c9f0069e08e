//! Exact rational arithmetic: scalars, dense polynomials, reduced rational functions
//! and Sturm root counting. No floating point is used here except in the explicit
//! `*_f64` evaluators consumed by the numeric layer.

mod poly;
mod rat;
mod ratfunc;
pub mod sturm;

pub use poly::Poly;
pub use rat::{binomial, factorial, Rat};
pub use ratfunc::RatFunc;
pub use sturm::{isolate_roots, sturm_count, Bound, RootInterval, SturmChain};
