use super::kernel::Kernel;
use crate::error::{Error, Result};
use crate::numerics::{integrate_line_auto, Tolerance};
use crate::theta::{theta1, theta1_dt0, UpperHalfPoint};
use crate::C64;
use std::f64::consts::PI;

/// Overall constant of the m = 1 translation operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `−1/(4π√(iη))` alone. With it the kernel is a projective solution
    /// only up to the constant factor `exp(−4πiη)`.
    Displayed,
    /// `−exp(4πiη)/(4π√(iη))`, which makes the kernel an exact projective
    /// solution and the operator tend to the identity as η → 0.
    #[default]
    Projective,
}

/// `T(τ, τ+p)` for m = 1:
/// `f ↦ c·exp(−πiλ²/4η) ∫ u(λ,μ,τ,τ+p,η) θ(4η,τ+p)θ′(0,τ+p) / (θ(μ−2η,τ+p)θ(μ+2η,τ+p))
/// · exp(−πiμ²/4η) f(−μ) dμ`.
///
/// The μ-contour is the line through `−λ` (the stationary point of the
/// combined Gaussian) parallel to ηℝ, nudged sideways when it would pass
/// close to the poles at `±2η + n`.
#[derive(Debug, Clone)]
pub struct TranslationOne {
    eta: C64,
    next: UpperHalfPoint,
    kernel: Kernel,
    weight: C64,
    norm: Normalization,
}

impl TranslationOne {
    pub fn new(tau: UpperHalfPoint, p: UpperHalfPoint, eta: C64, tol: &Tolerance) -> Result<Self> {
        if eta.im >= 0.0 {
            return Err(Error::FresnelDivergence {
                factor: format!("T_one(eta = {eta})"),
                im: -eta.im,
            });
        }
        let next = tau.shifted(p.value())?;
        let kernel = Kernel::new(tau, next, eta, tol)?;
        let th4 = theta1(eta * 4.0, next, tol)?;
        if th4.norm() < 1e-13 {
            return Err(Error::Pole(format!("θ(4η, τ+p) vanishes at η = {eta}")));
        }
        Ok(Self {
            eta,
            next,
            kernel,
            weight: th4 * theta1_dt0(next, tol)?,
            norm: Normalization::default(),
        })
    }

    pub fn with_normalization(mut self, norm: Normalization) -> Self {
        self.norm = norm;
        self
    }

    pub fn eta(&self) -> C64 {
        self.eta
    }

    fn prefactor(&self) -> C64 {
        let base = -1.0 / (4.0 * PI * (C64::i() * self.eta).sqrt());
        match self.norm {
            Normalization::Displayed => base,
            Normalization::Projective => base * (C64::new(0.0, 4.0 * PI) * self.eta).exp(),
        }
    }

    /// Real offset keeping the contour at least 0.1 away from the pole
    /// lines `±2η + n + ηℝ`.
    pub fn contour_center(&self, lam: C64) -> C64 {
        let dir = self.eta / self.eta.norm();
        let dist = |c: C64| -> f64 {
            let mut m = f64::INFINITY;
            for n in -3..=3 {
                for s in [2.0, -2.0] {
                    let d = c - (self.eta * s + n as f64);
                    m = m.min((d * dir.conj()).im.abs());
                }
            }
            m
        };
        let c0 = -lam;
        if dist(c0) >= 0.1 {
            return c0;
        }
        [0.15, -0.15, 0.3, -0.3]
            .iter()
            .map(|&d| c0 + d)
            .max_by(|a, b| dist(*a).total_cmp(&dist(*b)))
            .unwrap_or(c0)
    }

    pub fn apply(&self, f: &dyn Fn(C64) -> Result<C64>, lam: C64, tol: &Tolerance) -> Result<C64> {
        self.apply_on(f, lam, self.contour_center(lam), tol)
    }

    /// [`Self::apply`] on the contour `center + ηℝ`.
    pub fn apply_on(
        &self,
        f: &dyn Fn(C64) -> Result<C64>,
        lam: C64,
        center: C64,
        tol: &Tolerance,
    ) -> Result<C64> {
        let row = self.kernel.fix_first(lam, tol)?;
        let eta = self.eta;
        let two = eta * 2.0;
        let gauss = C64::new(0.0, -PI) / (eta * 4.0);
        let r = integrate_line_auto(
            |mu: C64| {
                let den = theta1(mu - two, self.next, tol)? * theta1(mu + two, self.next, tol)?;
                Ok(
                    row.integral_part(mu, tol)? * (gauss * (lam + mu) * (lam + mu)).exp() / den
                        * f(-mu)?,
                )
            },
            eta,
            center,
            tol,
        )?;
        Ok(self.prefactor() * self.weight * r.value)
    }
}

/// Options of [`projective_residual_one_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveOptions {
    pub normalization: Normalization,
    /// Multiplies Ω in the kernel of the left-hand side only.
    pub lhs_omega_scale: f64,
    /// Contour center; `None` uses [`TranslationOne::contour_center`].
    pub center: Option<C64>,
}

impl Default for ProjectiveOptions {
    fn default() -> Self {
        Self {
            normalization: Normalization::Projective,
            lhs_omega_scale: 1.0,
            center: None,
        }
    }
}

/// Both sides of `u(λ,μ,τ,p,η) = exp(−πiμ²/4η)·(T(τ,τ+p) u(·,μ,τ+p,p,η))(λ)`.
pub fn projective_sides_one(
    lam: C64,
    mu: C64,
    tau: UpperHalfPoint,
    p: UpperHalfPoint,
    eta: C64,
    opts: ProjectiveOptions,
    tol: &Tolerance,
) -> Result<(C64, C64)> {
    let lhs = Kernel::new(tau, p, eta, tol)?
        .scale_omega(opts.lhs_omega_scale)
        .eval(lam, mu, tol)?;
    let inner = Kernel::new(tau.shifted(p.value())?, p, eta, tol)?.fix_second(mu, tol)?;
    let t = TranslationOne::new(tau, p, eta, tol)?.with_normalization(opts.normalization);
    let f = |nu: C64| inner.eval(nu, tol);
    let center = opts.center.unwrap_or_else(|| t.contour_center(lam));
    let tu = t.apply_on(&f, lam, center, tol)?;
    let rhs = (C64::new(0.0, -PI) * mu * mu / (eta * 4.0)).exp() * tu;
    Ok((lhs, rhs))
}

/// Relative residual `|LHS − RHS| / |LHS|` of the projective-solution
/// identity.
pub fn projective_residual_one(
    lam: C64,
    mu: C64,
    tau: UpperHalfPoint,
    p: UpperHalfPoint,
    eta: C64,
    tol: &Tolerance,
) -> Result<f64> {
    projective_residual_one_with(lam, mu, tau, p, eta, ProjectiveOptions::default(), tol)
}

pub fn projective_residual_one_with(
    lam: C64,
    mu: C64,
    tau: UpperHalfPoint,
    p: UpperHalfPoint,
    eta: C64,
    opts: ProjectiveOptions,
    tol: &Tolerance,
) -> Result<f64> {
    let (lhs, rhs) = projective_sides_one(lam, mu, tau, p, eta, opts, tol)?;
    Ok((lhs - rhs).norm() / lhs.norm())
}
