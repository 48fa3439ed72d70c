use super::gaussian::GaussianElem;
use crate::error::{Error, Result};
use crate::numerics::{integrate_line_auto, Tolerance};
use crate::C64;
use std::f64::consts::PI;
use std::fmt;

/// One elementary operator of the m = 0 connection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    /// `f ↦ exp(−πiλ²/4x₃) f`
    Alpha {
        x3: C64,
        inverse: bool,
    },
    /// `f ↦ exp(−πi(λ²/4)·x₁/(x₂x₃)) f`
    Beta {
        x1: C64,
        x2: C64,
        x3: C64,
        inverse: bool,
    },
    /// `f ↦ ∫_{yℝ} exp(−πiλμ/2y) f(−μ) dμ`; the inverse has kernel
    /// `exp(+πiλμ/2y)` and prefactor `1/(4y)`.
    Fourier {
        y: C64,
        inverse: bool,
    },
    /// `f ↦ (i/√(4iη)) ∫_{ηℝ} exp(−πi(λ+μ)²/4η) f(−μ) dμ`.
    Translation {
        eta: C64,
    },
    Scale(C64),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = |b: bool| if b { "^-1" } else { "" };
        match self {
            Factor::Alpha { x3, inverse } => write!(f, "alpha({x3}){}", inv(*inverse)),
            Factor::Beta {
                x1,
                x2,
                x3,
                inverse,
            } => write!(f, "beta({x1}, {x2}, {x3}){}", inv(*inverse)),
            Factor::Fourier { y, inverse } => write!(f, "U({y}){}", inv(*inverse)),
            Factor::Translation { eta } => write!(f, "T(eta = {eta})"),
            Factor::Scale(s) => write!(f, "scale({s})"),
        }
    }
}

fn sign(inverse: bool) -> f64 {
    if inverse {
        -1.0
    } else {
        1.0
    }
}

impl Factor {
    pub fn inverse(&self) -> Result<Factor> {
        Ok(match *self {
            Factor::Alpha { x3, inverse } => Factor::Alpha {
                x3,
                inverse: !inverse,
            },
            Factor::Beta {
                x1,
                x2,
                x3,
                inverse,
            } => Factor::Beta {
                x1,
                x2,
                x3,
                inverse: !inverse,
            },
            Factor::Fourier { y, inverse } => Factor::Fourier {
                y,
                inverse: !inverse,
            },
            Factor::Translation { .. } => {
                return Err(Error::Domain(
                    "the translation operator has no inverse here".into(),
                ))
            }
            Factor::Scale(s) => Factor::Scale(1.0 / s),
        })
    }

    /// Closed-form image of a Gaussian.
    pub fn apply_gaussian(&self, g: GaussianElem) -> Result<GaussianElem> {
        let ipi = C64::new(0.0, PI);
        match *self {
            Factor::Alpha { x3, inverse } => Ok(GaussianElem {
                quad: g.quad - sign(inverse) / (x3 * 4.0),
                ..g
            }),
            Factor::Beta {
                x1,
                x2,
                x3,
                inverse,
            } => Ok(GaussianElem {
                quad: g.quad - sign(inverse) * x1 / (x2 * x3 * 4.0),
                ..g
            }),
            Factor::Fourier { y, inverse } => {
                let a = g.quad;
                if a.norm() == 0.0 {
                    return Err(Error::ZeroQuad);
                }
                let big_a = a * y * y;
                if big_a.im <= 0.0 {
                    return Err(Error::FresnelDivergence {
                        factor: self.to_string(),
                        im: big_a.im,
                    });
                }
                let root = (-C64::i() * big_a).sqrt();
                let phase = (-ipi * g.lin * g.lin / (a * 4.0)).exp();
                let lin = -sign(inverse) * g.lin / (a * y * 4.0);
                let coeff = if inverse {
                    g.coeff * phase / (root * 4.0)
                } else {
                    g.coeff * y * phase / root
                };
                Ok(GaussianElem {
                    coeff,
                    quad: -1.0 / (a * y * y * 16.0),
                    lin,
                })
            }
            Factor::Translation { eta } => {
                let pre = C64::i() / (C64::i() * eta * 4.0).sqrt();
                let alpha = Factor::Alpha {
                    x3: eta,
                    inverse: false,
                };
                let u = Factor::Fourier {
                    y: eta,
                    inverse: false,
                };
                let g = alpha.apply_gaussian(g)?;
                let g = u.apply_gaussian(g).map_err(|e| match e {
                    Error::FresnelDivergence { im, .. } => Error::FresnelDivergence {
                        factor: self.to_string(),
                        im,
                    },
                    other => other,
                })?;
                Ok(alpha.apply_gaussian(g)?.scaled(pre))
            }
            Factor::Scale(s) => Ok(g.scaled(s)),
        }
    }

    /// Numerical action on `inner` at `lam`, by quadrature where needed.
    pub fn apply_numeric(
        &self,
        inner: &dyn Fn(C64) -> Result<C64>,
        lam: C64,
        tol: &Tolerance,
    ) -> Result<C64> {
        let ipi = C64::new(0.0, PI);
        match *self {
            Factor::Alpha { x3, inverse } => {
                Ok((-ipi * sign(inverse) * lam * lam / (x3 * 4.0)).exp() * inner(lam)?)
            }
            Factor::Beta {
                x1,
                x2,
                x3,
                inverse,
            } => Ok((-ipi * sign(inverse) * lam * lam * x1 / (x2 * x3 * 4.0)).exp() * inner(lam)?),
            Factor::Fourier { y, inverse } => {
                // μ = y s
                let s_sign = sign(inverse);
                let r = integrate_line_auto(
                    |s: C64| Ok((-ipi * s_sign * lam * s / 2.0).exp() * inner(-(y * s))?),
                    C64::new(1.0, 0.0),
                    C64::new(0.0, 0.0),
                    tol,
                )?;
                Ok(if inverse { r.value / 4.0 } else { r.value * y })
            }
            Factor::Translation { eta } => {
                if eta.im >= 0.0 {
                    return Err(Error::FresnelDivergence {
                        factor: self.to_string(),
                        im: -eta.im,
                    });
                }
                // Through the stationary point: μ = −λ + ηs.
                let r = integrate_line_auto(
                    |s: C64| Ok((-ipi * eta * s * s / 4.0).exp() * inner(lam - eta * s)?),
                    C64::new(1.0, 0.0),
                    C64::new(0.0, 0.0),
                    tol,
                )?;
                Ok(C64::i() / (C64::i() * eta * 4.0).sqrt() * eta * r.value)
            }
            Factor::Scale(s) => Ok(s * inner(lam)?),
        }
    }
}

/// A composition of [`Factor`]s; the last factor acts first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearOp {
    pub factors: Vec<Factor>,
}

impl LinearOp {
    pub fn identity() -> Self {
        Self {
            factors: Vec::new(),
        }
    }

    pub fn from_factors(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    /// `self ∘ other`.
    pub fn then_after(mut self, other: &LinearOp) -> Self {
        self.factors.extend(other.factors.iter().copied());
        self
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            factors: self
                .factors
                .iter()
                .rev()
                .map(Factor::inverse)
                .collect::<Result<_>>()?,
        })
    }

    pub fn apply_gaussian(&self, g: GaussianElem) -> Result<GaussianElem> {
        self.factors
            .iter()
            .rev()
            .try_fold(g, |g, f| f.apply_gaussian(g))
    }

    /// Evaluates `(self f)(lam)`. Each Fourier factor costs one nested
    /// quadrature, so this is only practical for short compositions.
    pub fn apply_numeric(
        &self,
        f: &dyn Fn(C64) -> Result<C64>,
        lam: C64,
        tol: &Tolerance,
    ) -> Result<C64> {
        self.eval_from(0, f, lam, tol)
    }

    fn eval_from(
        &self,
        k: usize,
        f: &dyn Fn(C64) -> Result<C64>,
        lam: C64,
        tol: &Tolerance,
    ) -> Result<C64> {
        if k == self.factors.len() {
            return f(lam);
        }
        let inner = |mu: C64| self.eval_from(k + 1, f, mu, tol);
        self.factors[k].apply_numeric(&inner, lam, tol)
    }
}

impl fmt::Display for LinearOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}
