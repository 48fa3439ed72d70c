//! Elliptic special functions and the translation operators of the qKZB heat
//! equation, with numerical checks of the identities they satisfy.
//!
//! Modules, bottom up:
//! * [`numerics`]: quadrature, finite differences, principal powers
//! * [`theta`]: the first Jacobi theta function, ρ = θ′/θ, level-κ thetas
//! * [`gamma`]: the elliptic gamma function, Ω_a and the cubic Q
//! * [`free`]: the m = 0 operators, Gaussian calculus and SL(3,ℤ) words
//! * [`interacting`]: the m = 1 kernel and translation operator
//! * [`spectral`]: heat-equation residuals, Lamé eigenfunctions, semiclassics

pub mod error;
pub mod free;
pub mod gamma;
pub mod interacting;
pub mod numerics;
pub mod spectral;
pub mod theta;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};

pub use free::{BasePoint, ElemGen, GaussianElem, LinearOp, Word};
pub use gamma::{GammaArgs, GammaIdentity};
pub use numerics::{LineContour, QuadratureResult, Tolerance};
pub use theta::{ThetaIndex, UpperHalfPoint};
