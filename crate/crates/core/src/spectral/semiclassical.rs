use super::heat::Field;
use crate::error::{Error, Result};
use crate::free::translation_free;
use crate::interacting::TranslationOne;
use crate::numerics::{differentiate, linear_fit, Tolerance};
use crate::theta::{rho_dt, UpperHalfPoint};
use crate::C64;
use std::f64::consts::PI;

/// Translation-operator family `η ↦ T(τ, τ + p)` with `p = −2κη`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// The m = 0 operator.
    Free,
    /// The m = 1 operator.
    One,
}

impl Family {
    fn coupling(self) -> f64 {
        match self {
            Family::Free => 0.0,
            Family::One => 2.0,
        }
    }
}

/// Log-log fit of `|D(η)|` against `|η|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiclassicalReport {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
    /// `|D(η)/η − L| / |L|` at the smallest `|η|`, with
    /// `L = (i/π)(2πiκ∂_τ v − ∂_λ² v − m(m+1)ρ′v)` the first-order term of the
    /// stationary-phase expansion.
    pub coeff_check: f64,
    pub abs_eta: Vec<f64>,
    pub abs_d: Vec<f64>,
}

/// `D(η) = (T(τ, τ+p) v(·, τ+p))(λ) − v(λ, τ)` for each η, and the slope
/// of `log|D|` against `log|η|`: 2 when v solves the limiting equation,
/// 1 otherwise.
pub fn semiclassical_order(
    family: Family,
    v: &Field<'_>,
    lam: C64,
    tau: UpperHalfPoint,
    kappa: f64,
    etas: &[C64],
    tol: &Tolerance,
) -> Result<SemiclassicalReport> {
    if etas.len() < 3 {
        return Err(Error::Domain(format!(
            "need at least 3 values of η, got {}",
            etas.len()
        )));
    }
    if let Some(e) = etas.iter().find(|e| e.im >= 0.0) {
        return Err(Error::Domain(format!(
            "η = {e} must lie in the lower half plane"
        )));
    }
    let mags: Vec<f64> = etas.iter().map(|e| e.norm()).collect();
    let (lo, hi) = mags
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &m| (a.min(m), b.max(m)));
    if hi < 10.0 * lo {
        return Err(Error::Domain(format!(
            "|η| must span at least a decade, got [{lo:.3e}, {hi:.3e}]"
        )));
    }
    let tv = tau.value();
    let v0 = v(lam, tv)?;
    let mut ds = Vec::with_capacity(etas.len());
    for &eta in etas {
        let p = -eta * 2.0 * kappa;
        let next = tv + p;
        let f = |z: C64| v(z, next);
        let stepped = match family {
            Family::Free => translation_free(eta)?.apply_numeric(&f, lam, tol)?,
            Family::One => {
                TranslationOne::new(tau, UpperHalfPoint::new(p)?, eta, tol)?.apply(&f, lam, tol)?
            }
        };
        ds.push(stepped - v0);
    }
    let abs_d: Vec<f64> = ds.iter().map(|d| d.norm()).collect();

    let vt = differentiate(|s| v(lam, s), tv, 1, C64::new(0.0, 1e-3))?;
    let vll = differentiate(|z| v(z, tv), lam, 2, C64::new(1e-3, 0.0))?;
    let pot = if family.coupling() == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        rho_dt(lam, tau, tol)? * v0 * family.coupling()
    };
    let first = C64::new(0.0, 1.0 / PI) * (C64::new(0.0, 2.0 * PI * kappa) * vt - vll - pot);
    let k = mags
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap_or(0);
    let coeff_check = if first.norm() == 0.0 {
        f64::INFINITY
    } else {
        (ds[k] / etas[k] - first).norm() / first.norm()
    };

    if abs_d.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(Error::FitUnstable {
            residual: f64::INFINITY,
        });
    }
    let x: Vec<f64> = mags.iter().map(|m| m.ln()).collect();
    let y: Vec<f64> = abs_d.iter().map(|d| d.ln()).collect();
    let (slope, intercept, rms) = linear_fit(&x, &y);
    if rms > 0.1 {
        return Err(Error::FitUnstable { residual: rms });
    }
    Ok(SemiclassicalReport {
        slope,
        intercept,
        rms,
        coeff_check,
        abs_eta: mags,
        abs_d,
    })
}
