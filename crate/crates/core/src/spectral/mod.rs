//! Continuous-side checks: KZB-heat residuals, the Calogero–Moser operator,
//! Hermite's eigenfunctions of the Lamé operator, the m = 1 hypergeometric
//! solution, modular maps of heat solutions and the semiclassical order of
//! the translation operators.

mod heat;
mod hypergeom;
mod lame;
mod semiclassical;

pub use heat::{kzb_residual, modular_map_classical, shift_map, FdSteps, Field, HeatSolutionSpec};
pub use hypergeom::{hypergeom_m1, hypergeom_m1_with, HypergeomGauge, HypergeomOptions};
pub use lame::{cm_apply, hermite_critical, hermite_eigen, hermite_eigen_at, HermiteReport};
pub use semiclassical::{semiclassical_order, Family, SemiclassicalReport};
