//! Exact and floating scalar arithmetic, and 2×2 coin matrices.

mod dyadic;
mod matrix;
mod scalar;
mod sqrt2;

pub use dyadic::DyadicGaussian;
pub use matrix::{coin_by_name, coin_constant, verify_table, Amplitude, CoinMatrix, CoinName, Mat2, TableCell, PRODUCT_TABLE};
pub use scalar::{render_f64, Backend, ComplexF, Real, RingOps, Scalar, FLOAT_TOL};
pub use sqrt2::{parse_rational, render_rational, ComplexSqrt2, RealSqrt2};
