use crate::error::{Error, Result};
use crate::numerics::{differentiate, Tolerance};
use crate::theta::{rho_dt, UpperHalfPoint};
use crate::C64;
use std::f64::consts::PI;

/// `g(λ, τ) = exp(λμ + μ²τ/(2πiκ))`, an exact solution of
/// `2πiκ ∂_τ g = ∂_λ² g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatSolutionSpec {
    pub mu: C64,
    pub kappa: C64,
}

impl HeatSolutionSpec {
    pub fn new(mu: C64, kappa: C64) -> Result<Self> {
        if kappa.norm() == 0.0 {
            return Err(Error::Domain("κ must be nonzero".into()));
        }
        Ok(Self { mu, kappa })
    }

    pub fn eval(&self, lam: C64, tau: C64) -> C64 {
        (lam * self.mu + self.mu * self.mu * tau / (C64::new(0.0, 2.0 * PI) * self.kappa)).exp()
    }
}

/// Finite-difference steps in λ and τ. The τ step should be imaginary so the
/// stencil stays in the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps {
    pub lam: C64,
    pub tau: C64,
}

impl Default for FdSteps {
    fn default() -> Self {
        Self {
            lam: C64::new(1e-3, 0.0),
            tau: C64::new(0.0, 1e-3),
        }
    }
}

/// A function of `(λ, τ)`.
pub type Field<'a> = dyn Fn(C64, C64) -> Result<C64> + 'a;

/// `|2πiκ ∂_τ v − ∂_λ² v − m(m+1) ρ′ v|` relative to the sum of the moduli of
/// the three terms.
pub fn kzb_residual(
    v: &Field<'_>,
    lam: C64,
    tau: UpperHalfPoint,
    kappa: C64,
    m: u32,
    steps: FdSteps,
    tol: &Tolerance,
) -> Result<f64> {
    let t = tau.value();
    if (t - steps.tau * 2.0).im <= 0.0 {
        return Err(Error::Domain(format!(
            "τ stencil with step {} leaves the upper half plane at {t}",
            steps.tau
        )));
    }
    let v0 = v(lam, t)?;
    let vll = differentiate(|z| v(z, t), lam, 2, steps.lam)?;
    let vt = differentiate(|s| v(lam, s), t, 1, steps.tau)?;
    let coupling = (m * (m + 1)) as f64;
    let pot = if coupling == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        rho_dt(lam, tau, tol)? * v0 * coupling
    };
    let heat = C64::new(0.0, 2.0 * PI) * kappa * vt;
    let scale = heat.norm() + vll.norm() + pot.norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((heat - vll - pot).norm() / scale)
}

/// `ṽ(λ, τ) = τ^{−1/2} exp(−πiκλ²/2τ) v(λ/τ, −1/τ)`, principal root.
pub fn modular_map_classical<'a>(
    v: &'a Field<'a>,
    kappa: C64,
) -> impl Fn(C64, C64) -> Result<C64> + 'a {
    move |lam: C64, tau: C64| {
        if tau.im <= 0.0 {
            return Err(Error::Domain(format!(
                "τ = {tau} is not in the upper half plane"
            )));
        }
        let pre = (C64::new(0.0, -PI) * kappa * lam * lam / (tau * 2.0)).exp() / tau.sqrt();
        Ok(pre * v(lam / tau, -1.0 / tau)?)
    }
}

/// `ṽ(λ, τ) = v(λ, τ + 1)`.
pub fn shift_map<'a>(v: &'a Field<'a>) -> impl Fn(C64, C64) -> Result<C64> + 'a {
    move |lam: C64, tau: C64| v(lam, tau + 1.0)
}
