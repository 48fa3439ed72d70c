//! The m = 1 theory: the elliptic kernel `u(λ, μ, τ, p, η)`, the integral
//! translation operator built from it, and the projective-solution check.

mod kernel;
mod translation;

pub use kernel::{kernel_u, Kernel, KernelArgs, KernelRow};
pub use translation::{
    projective_residual_one, projective_residual_one_with, projective_sides_one, Normalization,
    ProjectiveOptions, TranslationOne,
};
