use crate::C64;
use std::f64::consts::PI;

/// `λ ↦ c·exp(iπ(aλ² + bλ))`.
///
/// The linear coefficient `b` is zero for the Gaussians of the SL(3,ℤ)
/// calculus; it is needed for plane waves such as `exp(−πiλμ/2η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianElem {
    pub coeff: C64,
    pub quad: C64,
    pub lin: C64,
}

impl GaussianElem {
    pub fn new(coeff: C64, quad: C64) -> Self {
        Self {
            coeff,
            quad,
            lin: C64::new(0.0, 0.0),
        }
    }

    pub fn with_lin(coeff: C64, quad: C64, lin: C64) -> Self {
        Self { coeff, quad, lin }
    }

    /// The Gaussian with fiber parameter `t` over a point with third
    /// coordinate `x3`: `a = t / (4 x3)`.
    pub fn from_fiber(coeff: C64, t: C64, x3: C64) -> Self {
        Self::new(coeff, t / (x3 * 4.0))
    }

    /// Fiber parameter `t = 4 a x3`.
    pub fn fiber_param(&self, x3: C64) -> C64 {
        self.quad * x3 * 4.0
    }

    pub fn eval(&self, lam: C64) -> C64 {
        self.coeff * (C64::i() * PI * (self.quad * lam * lam + self.lin * lam)).exp()
    }

    pub fn scaled(mut self, s: C64) -> Self {
        self.coeff *= s;
        self
    }
}
