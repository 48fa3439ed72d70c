//! The m = 0 theory: Gaussian calculus for the operators α, β, U and T,
//! the projective SL(3,ℤ) action on words, and the free translation
//! operator with its checks.

mod fourier;
mod gaussian;
mod ops;
mod sl3;
mod translation;

pub use fourier::{
    fourier_identity_residual, fourier_sides, op_alpha, op_beta, op_u, FourierIdentity,
    FourierReport,
};
pub use gaussian::GaussianElem;
pub use ops::{Factor, LinearOp};
pub use sl3::{
    build_phi, find_probes, mat_mul, moebius_f, path_operator, probe_candidates, probes_joined,
    propagate_fiber, verify_relation, verify_relation_auto, word_matrix, word_to_string, BasePoint,
    ElemGen, IntMat, Relation, RelationReport, Word,
};
pub use translation::{
    odd_subspace_deviation, plane_wave, projective_residual_free, theta_block_residual,
    translation_free, true_solution_free, true_solution_residual, PrefactorSign,
};
