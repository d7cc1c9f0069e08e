use thiserror::Error;

use crate::exact::Rat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation undefined on the zero polynomial: {0}")]
    ZeroPolynomial(&'static str),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("rational function has a pole at {0}")]
    Pole(Rat),

    #[error("cannot invert the zero field")]
    ZeroField,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("alpha = {0} is a negative integer; zero-count theorem does not apply")]
    NegativeIntegerAlpha(Rat),

    #[error("seed and target share the energy {0}; the transformation is undefined")]
    EqualEnergies(Rat),

    #[error("seed and target fields coincide")]
    IdenticalFields,

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("potential has a pole inside the grid window near xi in [{lo}, {hi}]")]
    PoleInWindow { lo: Rat, hi: Rat },

    #[error("unsupported boundary: {0}")]
    UnsupportedBoundary(String),

    #[error("parse error: {0}")]
    Parse(String),
}
