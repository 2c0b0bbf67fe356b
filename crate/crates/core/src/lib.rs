//! Exact simulation and verification of the one-dimensional Hadamard walk.
//!
//! Amplitudes are computed either exactly, in `(a + bi)/√2^s` form or in the
//! field Q(√2, i), or in double precision. On top of the walk engine the crate
//! provides the path-sum decomposition Ξ(l, m) over the basis P, Q, R, S, the
//! symmetry classes of initial states, and the expectation and limit moment
//! formulas, each paired with an independent oracle.

pub mod arith;
pub mod error;
pub mod engine;
pub mod input;
pub mod par;
pub mod pascal;
pub mod report;
pub mod symmetry;
pub mod verify;
pub mod moments;

pub use arith::{Backend, ComplexF, ComplexSqrt2, DyadicGaussian, Mat2, Real, RealSqrt2, Scalar};
pub use error::{Result, WalkError};
