use super::heat::HeatSolutionSpec;
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, Tolerance};
use crate::theta::{theta1, theta1_dt0, UpperHalfPoint};
use crate::C64;
use std::f64::consts::PI;

/// Which function of the m = 1 hypergeometric family to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HypergeomGauge {
    /// `v(λ, τ)`, the solution of `2πiκ∂_τ v = ∂_λ² v + 2ρ′ v`.
    #[default]
    Plain,
    /// `w = θ(λ,τ)/θ′(0,τ) · (q;q)_∞^{−4/κ} · v`, the gauge in which the
    /// m = 1 translation operator acts.
    Theta,
}

/// Quadrature layout of [`hypergeom_m1`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeomOptions {
    /// Radius of the loops around `t = 0` and `t = 1`.
    pub delta: f64,
    /// Gauss–Legendre nodes on `[δ, 1 − δ]`.
    pub nodes: usize,
    /// Gauss–Legendre nodes on each loop.
    pub loop_nodes: usize,
    /// The heat solution enters as `g(λ + s·2t/κ)`; `s = +1` gives a
    /// solution, `s = −1` is kept for comparison.
    pub shift_sign: f64,
    pub gauge: HypergeomGauge,
}

impl Default for HypergeomOptions {
    fn default() -> Self {
        Self {
            delta: 0.2,
            nodes: 60,
            loop_nodes: 60,
            shift_sign: 1.0,
            gauge: HypergeomGauge::Plain,
        }
    }
}

fn branch_error(t: C64, p: C64) -> Error {
    Error::Branch(format!(
        "θ(t,τ)/θ′(0,τ) = {p} at t = {t} is off the positive axis; τ outside the validated domain"
    ))
}

/// `v(λ,τ) = ∫₀¹ P(t)^{−2/κ} θ(λ−t)θ′(0)/(θ(λ)θ(t)) g(λ + 2t/κ, τ) dt`,
/// `P = θ(t,τ)/θ′(0,τ)`.
///
/// The integrand behaves like `t^{−2/κ−1}` at both ends, so the integral is
/// taken as its analytic continuation in the exponent: on `[0, δ]` the
/// finite part `∫₀^δ t^{a−1}φ(t) dt = (e^{2πia} − 1)^{−1} ∮ z^{a−1}φ(z) dz`
/// over the circle of radius δ, and likewise at `t = 1`. For κ > 2 no
/// positive power is lost, and the result solves the KZB-heat equation with
/// m = 1.
pub fn hypergeom_m1(
    kappa: f64,
    g: HeatSolutionSpec,
    lam: C64,
    tau: UpperHalfPoint,
    opts: HypergeomOptions,
    tol: &Tolerance,
) -> Result<C64> {
    let tv = tau.value();
    hypergeom_m1_with(kappa, &|z| g.eval(z, tv), lam, tau, opts, tol)
}

/// [`hypergeom_m1`] for an arbitrary `g(·, τ)` at the given τ.
pub fn hypergeom_m1_with(
    kappa: f64,
    g: &dyn Fn(C64) -> C64,
    lam: C64,
    tau: UpperHalfPoint,
    opts: HypergeomOptions,
    tol: &Tolerance,
) -> Result<C64> {
    if kappa.is_nan() || kappa <= 2.0 {
        return Err(Error::Domain(format!(
            "hypergeometric solution needs κ > 2, got {kappa}"
        )));
    }
    if !(opts.delta > 0.0 && opts.delta < 0.5) {
        return Err(Error::Domain(format!(
            "loop radius must lie in (0, ½), got {}",
            opts.delta
        )));
    }
    let a = -2.0 / kappa;
    let tv = tau.value();
    let d0 = theta1_dt0(tau, tol)?;
    let th_lam = theta1(lam, tau, tol)?;
    let front = match opts.gauge {
        HypergeomGauge::Plain => {
            if th_lam.norm() < 1e-13 * d0.norm() {
                return Err(Error::Pole(format!("θ(λ, τ) vanishes at λ = {lam}")));
            }
            d0 / th_lam
        }
        HypergeomGauge::Theta => {
            let q = (C64::new(0.0, 2.0 * PI) * tv).exp();
            let mut qq = C64::new(1.0, 0.0);
            let mut qn = q;
            while qn.norm() > 1e-18 {
                qq *= C64::new(1.0, 0.0) - qn;
                qn *= q;
            }
            (qq.ln() * a * 2.0).exp()
        }
    };
    let shift = opts.shift_sign * 2.0 / kappa;
    let gval = |z: C64| g(z);
    // θ(λ−t)/θ(t)·g(λ + shift·t), without the constant `front`.
    let r = |t: C64| -> Result<C64> {
        Ok(theta1(lam - t, tau, tol)? / theta1(t, tau, tol)? * gval(lam + t * shift))
    };
    let p = |t: C64| -> Result<C64> { Ok(theta1(t, tau, tol)? / d0) };

    let (xs, ws) = gauss_legendre(opts.nodes);
    let (lo, hi) = (opts.delta, 1.0 - opts.delta);
    let mut mid = C64::new(0.0, 0.0);
    for (x, w) in xs.iter().zip(&ws) {
        let t = C64::new(lo + (hi - lo) * 0.5 * (x + 1.0), 0.0);
        let pt = p(t)?;
        if pt.re <= 0.0 || pt.im.abs() > 1e-9 * pt.norm() {
            return Err(branch_error(t, pt));
        }
        mid += (pt.ln() * a).exp() * r(t)? * (w * 0.5 * (hi - lo));
    }

    let (xs, ws) = gauss_legendre(opts.loop_nodes);
    let delta_a = opts.delta.powf(a);
    let mut ring = C64::new(0.0, 0.0);
    for (x, w) in xs.iter().zip(&ws) {
        let th = PI * (x + 1.0);
        let z = C64::from_polar(opts.delta, th);
        let mut phi = C64::new(0.0, 0.0);
        for (pz, rz) in [
            (p(z)?, r(z)?),
            (p(C64::new(1.0, 0.0) - z)?, r(C64::new(1.0, 0.0) - z)?),
        ] {
            let ratio = pz / z;
            if ratio.re <= 0.0 {
                return Err(branch_error(z, pz));
            }
            phi += (ratio.ln() * a).exp() * z * rz;
        }
        ring += C64::new(0.0, 1.0) * delta_a * C64::from_polar(1.0, a * th) * phi * (w * PI);
    }
    let loops = ring / (C64::from_polar(1.0, 2.0 * PI * a) - 1.0);
    Ok(front * (mid + loops))
}
