use super::gaussian::GaussianElem;
use super::ops::{Factor, LinearOp};
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::theta::{odd_theta, theta_level, ThetaIndex, UpperHalfPoint};
use crate::C64;
use std::f64::consts::PI;

fn ipi() -> C64 {
    C64::new(0.0, PI)
}

fn check_eta(eta: C64) -> Result<()> {
    if eta.im >= 0.0 {
        return Err(Error::FresnelDivergence {
            factor: Factor::Translation { eta }.to_string(),
            im: -eta.im,
        });
    }
    Ok(())
}

/// The m = 0 translation operator `T = (i/√(4iη))·α(η)U(η)α(η)`. It depends
/// on the step only through η; the moduli enter via `p = −2κη`.
pub fn translation_free(eta: C64) -> Result<LinearOp> {
    check_eta(eta)?;
    Ok(LinearOp::from_factors(vec![Factor::Translation { eta }]))
}

/// The plane wave `u(λ, μ) = exp(−πiλμ/2η)` as a Gaussian with `a = 0`.
pub fn plane_wave(mu: C64, eta: C64) -> GaussianElem {
    GaussianElem::with_lin(C64::new(1.0, 0.0), C64::new(0.0, 0.0), -mu / (eta * 2.0))
}

/// Relative residual of `u(λ) = exp(−πiμ²/4η)·(T u)(λ)`, computed on the
/// exact Gaussian path.
pub fn projective_residual_free(lam: C64, mu: C64, eta: C64) -> Result<f64> {
    let u = plane_wave(mu, eta);
    let tu = translation_free(eta)?.apply_gaussian(u)?;
    let rhs = (-ipi() * mu * mu / (eta * 4.0)).exp() * tu.eval(lam);
    let lhs = u.eval(lam);
    Ok((lhs - rhs).norm() / lhs.norm())
}

/// Sign of the τ-dependent prefactor of the true solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefactorSign {
    /// `exp(−πiμ²τ/(4ηp))`, the sign that makes the solution flat.
    Flat,
    /// `exp(+πiμ²τ/(4ηp))`, the sign as commonly written.
    Displayed,
}

/// `v(λ, τ) = exp(∓πiμ²τ/(4ηp))·exp(−πiλμ/2η)` as a Gaussian in λ.
pub fn true_solution_free(
    mu: C64,
    tau: C64,
    p: C64,
    eta: C64,
    sign: PrefactorSign,
) -> GaussianElem {
    let s = match sign {
        PrefactorSign::Flat => -1.0,
        PrefactorSign::Displayed => 1.0,
    };
    plane_wave(mu, eta).scaled((ipi() * s * mu * mu * tau / (eta * p * 4.0)).exp())
}

/// Relative residual of `v(λ, τ) = (T v(·, τ + p))(λ)`.
pub fn true_solution_residual(
    lam: C64,
    mu: C64,
    tau: C64,
    p: C64,
    eta: C64,
    sign: PrefactorSign,
) -> Result<f64> {
    let t = translation_free(eta)?;
    let next = true_solution_free(mu, tau + p, p, eta, sign);
    let rhs = t.apply_gaussian(next)?.eval(lam);
    let lhs = true_solution_free(mu, tau, p, eta, sign).eval(lam);
    Ok((lhs - rhs).norm() / lhs.norm())
}

/// Relative residual of the level-κ identity
/// `θ_{j,κ}(λ,τ) = (T θ_{j,κ}(·, τ − 2ηκ))(λ)`, by quadrature.
pub fn theta_block_residual(
    idx: ThetaIndex,
    lam: C64,
    tau: UpperHalfPoint,
    eta: C64,
    tol: &Tolerance,
) -> Result<f64> {
    if idx.level() < 2 {
        return Err(Error::Domain(format!(
            "theta block needs level ≥ 2, got {}",
            idx.level()
        )));
    }
    check_eta(eta)?;
    let next = tau.shifted(-eta * 2.0 * idx.level() as f64)?;
    let lhs = theta_level(idx, lam, tau, tol)?;
    let f = |z: C64| theta_level(idx, z, next, tol);
    let rhs = translation_free(eta)?.apply_numeric(&f, lam, tol)?;
    Ok((lhs - rhs).norm() / (lhs.norm() + rhs.norm()))
}

/// Largest relative deviation over `lams` between `T` applied to the odd
/// element `θ_{j,κ}(λ) − θ_{j,κ}(−λ)` at `τ + p` and the same element at τ,
/// with `p = −2κη`.
pub fn odd_subspace_deviation(
    idx: ThetaIndex,
    lams: &[C64],
    tau: UpperHalfPoint,
    eta: C64,
    tol: &Tolerance,
) -> Result<f64> {
    check_eta(eta)?;
    let next = tau.shifted(-eta * 2.0 * idx.level() as f64)?;
    let t = translation_free(eta)?;
    let f = |z: C64| odd_theta(idx, z, next, tol);
    let mut scale = 0.0f64;
    let mut dev = 0.0f64;
    for &lam in lams {
        let want = odd_theta(idx, lam, tau, tol)?;
        let got = t.apply_numeric(&f, lam, tol)?;
        scale = scale.max(want.norm());
        dev = dev.max((got - want).norm());
    }
    if scale == 0.0 {
        return Err(Error::Domain(
            "odd theta vanishes at every sample point".into(),
        ));
    }
    Ok(dev / scale)
}
