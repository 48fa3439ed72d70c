use super::gaussian::GaussianElem;
use super::ops::{Factor, LinearOp};
use super::sl3::{probe_candidates, probes_joined, BasePoint};
use crate::error::{Error, Result};
use crate::C64;

/// Which Fourier-transform identity to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierIdentity {
    /// `α(x₃)U(x₃)α(x₃)U(x₃)α(x₃) ∝ U(x₃)`, constant depending on x₃ only.
    QHeat,
    /// `U(−x₁)β(−x₃,x₂,x₁)U(x₂) ∝ β(x₂,x₃,x₁)U(x₃)β(x₁,x₂,x₃)`.
    Modular,
}

/// Outcome of a projective Fourier identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierReport {
    pub ratio: C64,
    /// Relative spread of the ratio over the probes, or mismatch of the
    /// quadratic coefficients, whichever is larger.
    pub dev: f64,
}

pub fn op_alpha(x3: C64) -> LinearOp {
    LinearOp::from_factors(vec![Factor::Alpha { x3, inverse: false }])
}

pub fn op_beta(x: &BasePoint) -> LinearOp {
    LinearOp::from_factors(vec![Factor::Beta {
        x1: x.x1(),
        x2: x.x2(),
        x3: x.x3(),
        inverse: false,
    }])
}

pub fn op_u(x: &BasePoint) -> LinearOp {
    LinearOp::from_factors(vec![Factor::Fourier {
        y: x.x3(),
        inverse: false,
    }])
}

/// The two sides of the identity as operators.
pub fn fourier_sides(kind: FourierIdentity, x: &BasePoint) -> (LinearOp, LinearOp) {
    let (x1, x2, x3) = (x.x1(), x.x2(), x.x3());
    let a = Factor::Alpha { x3, inverse: false };
    let u = |y: C64| Factor::Fourier { y, inverse: false };
    let b = |x1, x2, x3| Factor::Beta {
        x1,
        x2,
        x3,
        inverse: false,
    };
    match kind {
        FourierIdentity::QHeat => (
            LinearOp::from_factors(vec![a, u(x3), a, u(x3), a]),
            LinearOp::from_factors(vec![u(x3)]),
        ),
        FourierIdentity::Modular => (
            LinearOp::from_factors(vec![u(-x1), b(-x3, x2, x1), u(x2)]),
            LinearOp::from_factors(vec![b(x2, x3, x1), u(x3), b(x1, x2, x3)]),
        ),
    }
}

fn side_ratio(l: &LinearOp, r: &LinearOp, g: GaussianElem) -> Result<(C64, f64)> {
    let gl = l.apply_gaussian(g)?;
    let gr = r.apply_gaussian(g)?;
    let qdev = (gl.quad - gr.quad).norm() / gl.quad.norm().max(1.0) + (gl.lin - gr.lin).norm();
    Ok((gl.coeff / gr.coeff, qdev))
}

/// Checks the identity on `probe` and on a second grid probe with a
/// different quadratic coefficient, joined to `probe` by admissible probes.
pub fn fourier_identity_residual(
    kind: FourierIdentity,
    x: &BasePoint,
    probe: GaussianElem,
) -> Result<FourierReport> {
    let (l, r) = fourier_sides(kind, x);
    let (ratio, qdev) = side_ratio(&l, &r, probe)?;
    let second = probe_candidates()
        .filter(|a| (a - probe.quad).norm() > 0.1 && probes_joined(&l, &r, probe.quad, *a))
        .find_map(|a| side_ratio(&l, &r, GaussianElem::new(C64::new(1.0, 0.0), a)).ok())
        .ok_or_else(|| Error::NoProbe(format!("no second probe for {l} vs {r}")))?;
    let spread = (second.0 - ratio).norm() / ratio.norm();
    Ok(FourierReport {
        ratio,
        dev: spread.max(qdev).max(second.1),
    })
}
