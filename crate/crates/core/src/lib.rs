//! Exact Heisenberg-operator solutions for exactly solvable one-dimensional
//! quantum models, with the annihilation/creation operators, coherent states
//! and classical limits that follow from them.
//!
//! The special-function layer ([`specfun`], [`quadrature`] and the RK4 stepper in
//! [`classical`]) is generic over [`Real`]; the physics layer works in `f64`.

pub mod classical;
pub mod classifier;
pub mod coherent;
pub mod matrix_heisenberg;
pub mod models;
pub mod operator_engine;
pub mod orthopoly;
pub mod quadrature;
pub mod shape_invariance;
pub mod specfun;
pub mod tolerances;

pub use models::{get_model, Kind, ModelName, ModelSpec, Params};

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point scalar accepted by the generic numerical kernels.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}

pub type Complex<F> = num_complex::Complex<F>;
pub type C64 = num_complex::Complex<f64>;
pub type C32 = num_complex::Complex<f32>;

pub type SeriesResult64 = specfun::SeriesResult<f64>;
pub type SeriesResult32 = specfun::SeriesResult<f32>;
pub type Quadrature64 = quadrature::QuadratureResult<f64>;
pub type Quadrature32 = quadrature::QuadratureResult<f32>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("pole of the gamma function at {0}")]
    Pole(String),
    #[error("series or iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("level {n} is beyond the {levels} bound states of the model")]
    OutOfRange { n: usize, levels: usize },
    #[error("not supported: {0}")]
    Unsupported(String),
    #[error("inconsistent result: {0}")]
    Inconsistency(String),
    #[error("trajectory left the domain at t = {0}")]
    DomainExit(f64),
    #[error("series diverges: {0}")]
    Divergence(String),
}

impl Error {
    /// Errors caused by the caller's input rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Constraint(_)
                | Error::Domain(_)
                | Error::OutOfRange { .. }
                | Error::Unsupported(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
