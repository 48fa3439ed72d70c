//! The first Jacobi theta function in the normalization
//! `θ(t,τ) = −Σ_j exp(πi(j+½)²τ + 2πi(j+½)(t+½))`, its logarithmic
//! derivative and the level-κ thetas.

use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::C64;
use std::f64::consts::PI;

/// A modulus with strictly positive imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint(C64);

impl UpperHalfPoint {
    pub fn new(tau: C64) -> Result<Self> {
        if tau.im > 0.0 && tau.is_finite() {
            Ok(Self(tau))
        } else {
            Err(Error::Domain(format!(
                "modulus {tau} is not in the upper half plane"
            )))
        }
    }

    pub fn value(self) -> C64 {
        self.0
    }

    /// `τ + p` for another modulus.
    pub fn shifted(self, p: C64) -> Result<Self> {
        Self::new(self.0 + p)
    }
}

/// θ and its first three `t`-derivatives from one symmetric truncation.
pub fn theta1_all(t: C64, tau: UpperHalfPoint, tol: &Tolerance) -> Result<[C64; 4]> {
    let tv = tau.value();
    let im_tau = tv.im;
    // |term_k| = exp(-π k² Im τ - 2π k Im t), k = j + 1/2, peaks at k* = -Im t / Im τ.
    let log_bound = |k: f64| {
        -PI * k * k * im_tau - 2.0 * PI * k * t.im + 3.0 * (2.0 * PI * k.abs()).max(1.0).ln()
    };
    let kstar = -t.im / im_tau;
    let log_peak = log_bound(kstar).max(log_bound(kstar.floor() + 0.5));
    let cut = (log_peak + (1e-18f64).ln()).min(tol.abs_tol.max(1e-300).ln());
    let mut jmax: i64 = 1;
    loop {
        let k_hi = jmax as f64 + 0.5;
        let k_lo = -(jmax as f64) - 0.5;
        let past = k_hi > kstar && k_lo < kstar;
        if past && log_bound(k_hi) < cut && log_bound(k_lo) < cut {
            break;
        }
        jmax += 1;
        if 2 * jmax as usize > tol.max_evals {
            return Err(Error::NonConvergence {
                what: "theta series",
                evals: 2 * jmax as usize,
                err: f64::INFINITY,
            });
        }
    }
    let mut out = [C64::new(0.0, 0.0); 4];
    let ipi = C64::new(0.0, PI);
    for j in -jmax..jmax {
        let k = j as f64 + 0.5;
        let term = (ipi * k * k * tv + ipi * 2.0 * k * (t + 0.5)).exp();
        let d = ipi * 2.0 * k;
        out[0] -= term;
        out[1] -= term * d;
        out[2] -= term * d * d;
        out[3] -= term * d * d * d;
    }
    Ok(out)
}

pub fn theta1(t: C64, tau: UpperHalfPoint, tol: &Tolerance) -> Result<C64> {
    Ok(theta1_all(t, tau, tol)?[0])
}

pub fn theta1_dt(t: C64, tau: UpperHalfPoint, tol: &Tolerance) -> Result<C64> {
    Ok(theta1_all(t, tau, tol)?[1])
}

pub fn theta1_dt2(t: C64, tau: UpperHalfPoint, tol: &Tolerance) -> Result<C64> {
    Ok(theta1_all(t, tau, tol)?[2])
}

/// θ′(0,τ).
pub fn theta1_dt0(tau: UpperHalfPoint, tol: &Tolerance) -> Result<C64> {
    theta1_dt(C64::new(0.0, 0.0), tau, tol)
}

fn pole_guard(th: C64, t: C64, tau: UpperHalfPoint, tol: &Tolerance) -> Result<()> {
    let scale = theta1_dt0(tau, tol)?.norm();
    if th.norm() < 1e-13 * scale {
        return Err(Error::Pole(format!("θ({t}, {}) vanishes", tau.value())));
    }
    Ok(())
}

/// ρ = θ′/θ.
pub fn rho(t: C64, tau: UpperHalfPoint, tol: &Tolerance) -> Result<C64> {
    let th = theta1_all(t, tau, tol)?;
    pole_guard(th[0], t, tau, tol)?;
    Ok(th[1] / th[0])
}

/// ρ′ = θ″/θ − ρ².
pub fn rho_dt(t: C64, tau: UpperHalfPoint, tol: &Tolerance) -> Result<C64> {
    let th = theta1_all(t, tau, tol)?;
    pole_guard(th[0], t, tau, tol)?;
    let r = th[1] / th[0];
    Ok(th[2] / th[0] - r * r)
}

/// Label `j mod 2κ` of a level-κ theta function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaIndex {
    j: u32,
    level: u32,
}

impl ThetaIndex {
    pub fn new(j: u32, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::Domain("theta level must be positive".into()));
        }
        if j >= 2 * level {
            return Err(Error::Domain(format!("index {j} outside 0..{}", 2 * level)));
        }
        Ok(Self { j, level })
    }

    /// Reduces any integer modulo 2κ.
    pub fn wrapping(j: i64, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::Domain("theta level must be positive".into()));
        }
        let m = 2 * level as i64;
        Self::new(j.rem_euclid(m) as u32, level)
    }

    pub fn j(self) -> u32 {
        self.j
    }

    pub fn level(self) -> u32 {
        self.level
    }
}

/// θ_{j,κ}(λ,τ) = Σ_{r ∈ ℤ + j/2κ} exp(2πiκ(r²τ + rλ)).
pub fn theta_level(idx: ThetaIndex, lam: C64, tau: UpperHalfPoint, tol: &Tolerance) -> Result<C64> {
    let kappa = idx.level as f64;
    let shift = idx.j as f64 / (2.0 * kappa);
    let tv = tau.value();
    let log_bound = |r: f64| -2.0 * PI * kappa * (r * r * tv.im + r * lam.im);
    let rstar = -lam.im / (2.0 * tv.im);
    let log_peak = log_bound(rstar);
    let cut = (log_peak + (1e-18f64).ln()).min(tol.abs_tol.max(1e-300).ln());
    let n0 = (rstar - shift).round() as i64;
    let mut nmax: i64 = 1;
    loop {
        let hi = (n0 + nmax) as f64 + shift;
        let lo = (n0 - nmax) as f64 + shift;
        if log_bound(hi) < cut && log_bound(lo) < cut {
            break;
        }
        nmax += 1;
        if 2 * nmax as usize > tol.max_evals {
            return Err(Error::NonConvergence {
                what: "level theta series",
                evals: 2 * nmax as usize,
                err: f64::INFINITY,
            });
        }
    }
    let ik = C64::new(0.0, 2.0 * PI * kappa);
    let mut s = C64::new(0.0, 0.0);
    for n in (n0 - nmax)..=(n0 + nmax) {
        let r = n as f64 + shift;
        s += (ik * (tv * r * r + lam * r)).exp();
    }
    Ok(s)
}

/// θ_{j,κ}(λ) − θ_{j,κ}(−λ), an element of the odd subspace E(τ).
pub fn odd_theta(idx: ThetaIndex, lam: C64, tau: UpperHalfPoint, tol: &Tolerance) -> Result<C64> {
    Ok(theta_level(idx, lam, tau, tol)? - theta_level(idx, -lam, tau, tol)?)
}
