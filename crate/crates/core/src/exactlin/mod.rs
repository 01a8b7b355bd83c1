//! Exact arithmetic over the Gaussian rationals: scalars, dense matrices and
//! alternating forms.

mod alt;
mod matrix;
mod scalar;
mod solve;

pub use alt::{alt_pullback, increasing_tuples, AltTensor};
pub use matrix::{invert, RationalMatrix};
pub use scalar::{rat, Rational, Scalar};
pub use solve::{solve_columns, EchelonSystem};
