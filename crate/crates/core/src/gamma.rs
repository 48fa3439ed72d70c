//! The elliptic gamma function
//! `Γ(t,τ,p) = Π_{j,k≥0} (1 − e(−t+(j+1)τ+(k+1)p)) / (1 − e(t+jτ+kp))`,
//! `e(x) = exp(2πix)`, the ratio Ω_a and the cubic Q of its modular equation.

use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::theta::UpperHalfPoint;
use crate::C64;
use std::f64::consts::PI;

fn e(x: C64) -> C64 {
    (C64::i() * 2.0 * PI * x).exp()
}

/// Validated arguments of Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaArgs {
    pub t: C64,
    pub tau: UpperHalfPoint,
    pub p: UpperHalfPoint,
}

impl GammaArgs {
    pub fn new(t: C64, tau: C64, p: C64) -> Result<Self> {
        Ok(Self {
            t,
            tau: UpperHalfPoint::new(tau)?,
            p: UpperHalfPoint::new(p)?,
        })
    }
}

/// Running product kept as (direct part, logarithm of the small-factor part).
struct LogProduct {
    direct: C64,
    log: C64,
}

impl LogProduct {
    fn new() -> Self {
        Self {
            direct: C64::new(1.0, 0.0),
            log: C64::new(0.0, 0.0),
        }
    }

    /// Multiplies by `1 − x`.
    fn push(&mut self, x: C64) {
        let n = x.norm();
        if n < 1e-4 {
            self.log -= x + x * x * 0.5 + x * x * x / 3.0;
        } else if n < 0.5 {
            self.log += (C64::new(1.0, 0.0) - x).ln();
        } else {
            self.direct *= C64::new(1.0, 0.0) - x;
        }
    }

    fn value(&self) -> C64 {
        self.direct * self.log.exp()
    }
}

/// `Π_{j,k≥0} (1 − e(w) q^j r^k)` with `q = e(τ)`, `r = e(p)`.
///
/// Truncated once the remaining factors differ from one by less than the
/// cutoff in total. With `pole_check`, a factor within 1e-12 of zero is an
/// error; `skip00` drops the `(0,0)` factor.
fn lattice_product(
    w: C64,
    tau: UpperHalfPoint,
    p: UpperHalfPoint,
    skip00: bool,
    pole_check: bool,
    tol: &Tolerance,
) -> Result<C64> {
    let q = e(tau.value());
    let r = e(p.value());
    let (aq, ar) = (q.norm(), r.norm());
    let cut = tol.abs_tol.min(1e-17);
    let mut acc = LogProduct::new();
    let mut evals = 0usize;
    let mut xj = e(w);
    let mut j = 0usize;
    loop {
        if xj.norm() / (1.0 - ar) < cut * (1.0 - aq) && j > 0 {
            break;
        }
        let mut x = xj;
        let mut k = 0usize;
        loop {
            if x.norm() < cut * (1.0 - ar) && k > 0 {
                break;
            }
            if !(skip00 && j == 0 && k == 0) {
                if pole_check && (C64::new(1.0, 0.0) - x).norm() < 1e-12 {
                    return Err(Error::Pole(format!(
                        "factor (j,k) = ({j},{k}) of the gamma product vanishes"
                    )));
                }
                acc.push(x);
            }
            x *= r;
            k += 1;
            evals += 1;
            if evals > tol.max_evals {
                return Err(Error::NonConvergence {
                    what: "elliptic gamma product",
                    evals,
                    err: x.norm(),
                });
            }
        }
        xj *= q;
        j += 1;
    }
    Ok(acc.value())
}

/// Numerator and denominator products of Γ(z); `skip00` drops the vanishing
/// denominator factor at `z = 0`.
pub(crate) fn gamma_parts(
    z: C64,
    tau: UpperHalfPoint,
    p: UpperHalfPoint,
    skip00: bool,
    tol: &Tolerance,
) -> Result<(C64, C64)> {
    let num = lattice_product(-z + tau.value() + p.value(), tau, p, false, false, tol)?;
    let den = lattice_product(z, tau, p, skip00, true, tol)?;
    Ok((num, den))
}

pub fn ellgamma(args: GammaArgs, tol: &Tolerance) -> Result<C64> {
    let (n, d) = gamma_parts(args.t, args.tau, args.p, false, tol)?;
    Ok(n / d)
}

/// Ω_a(t) = Γ(t+a)/Γ(t−a).
pub fn omega(
    a: C64,
    t: C64,
    tau: UpperHalfPoint,
    p: UpperHalfPoint,
    tol: &Tolerance,
) -> Result<C64> {
    let num = ellgamma(GammaArgs { t: t + a, tau, p }, tol)?;
    let den = ellgamma(GammaArgs { t: t - a, tau, p }, tol)?;
    Ok(num / den)
}

/// Ω_a from its own double product, multiplying the four-factor term of each
/// `(j,k)` directly. Serves as a cross-check of [`omega`].
pub fn omega_product(
    a: C64,
    t: C64,
    tau: UpperHalfPoint,
    p: UpperHalfPoint,
    tol: &Tolerance,
) -> Result<C64> {
    let (tv, pv) = (tau.value(), p.value());
    let one = C64::new(1.0, 0.0);
    let cut = tol.abs_tol.min(1e-17);
    let mut prod = one;
    let mut evals = 0usize;
    let mut j = 0usize;
    loop {
        let mut k = 0usize;
        let mut row_max = 0.0f64;
        loop {
            let s = tv * j as f64 + pv * k as f64;
            let s1 = tv * (j + 1) as f64 + pv * (k + 1) as f64;
            let xs = [e(t - a + s), e(-t - a + s1), e(t + a + s), e(-t + a + s1)];
            let m = xs.iter().map(|x| x.norm()).fold(0.0, f64::max);
            let den = (one - xs[2]) * (one - xs[3]);
            if den.norm() < 1e-12 {
                return Err(Error::Pole(format!("Ω product factor ({j},{k}) vanishes")));
            }
            prod *= (one - xs[0]) * (one - xs[1]) / den;
            row_max = row_max.max(m);
            evals += 1;
            if evals > tol.max_evals {
                return Err(Error::NonConvergence {
                    what: "omega product",
                    evals,
                    err: m,
                });
            }
            k += 1;
            if m < cut && k > 1 {
                break;
            }
        }
        j += 1;
        if row_max < cut && j > 1 {
            break;
        }
    }
    Ok(prod)
}

/// The cubic in the exponent of the gamma modular equation.
pub fn q_cubic(t: C64, tau: C64, p: C64) -> Result<C64> {
    let tp = tau * p;
    if tp.norm() == 0.0 {
        return Err(Error::Domain("Q needs τ·p ≠ 0".into()));
    }
    let s = tau + p - 1.0;
    Ok(t * t * t / (tp * 3.0) - s * t * t / (tp * 2.0)
        + (tau * tau + p * p + tp * 3.0 - tau * 3.0 - p * 3.0 + 1.0) * t / (tp * 6.0)
        + s * (1.0 / tau + 1.0 / p - 1.0) / 12.0)
}

/// The two functional equations of Γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaIdentity {
    /// Γ(t+τ,τ,τ+p)·Γ(t,τ+p,p) = Γ(t,τ,p)
    Heat,
    /// Γ(t/p,τ/p,−1/p) = e^{iπQ(t;τ,p)}·Γ((t−p)/τ,−1/τ,−p/τ)·Γ(t,τ,p)
    Modular,
}

fn modulus(z: C64, name: &str) -> Result<UpperHalfPoint> {
    if z.im > 0.0 {
        UpperHalfPoint::new(z)
    } else {
        Err(Error::Domain(format!(
            "transformed modulus {name} = {z} is not in the upper half plane"
        )))
    }
}

/// Both sides of an identity. The left side is evaluated at `t_lhs`, the right
/// at `t_rhs`; they coincide except in detector checks.
pub fn gamma_identity_sides(
    kind: GammaIdentity,
    t_lhs: C64,
    t_rhs: C64,
    tau: C64,
    p: C64,
    tol: &Tolerance,
) -> Result<(C64, C64)> {
    let tau_h = modulus(tau, "τ")?;
    let p_h = modulus(p, "p")?;
    match kind {
        GammaIdentity::Heat => {
            let tp = modulus(tau + p, "τ+p")?;
            let lhs = ellgamma(
                GammaArgs {
                    t: t_lhs + tau,
                    tau: tau_h,
                    p: tp,
                },
                tol,
            )? * ellgamma(
                GammaArgs {
                    t: t_lhs,
                    tau: tp,
                    p: p_h,
                },
                tol,
            )?;
            let rhs = ellgamma(
                GammaArgs {
                    t: t_rhs,
                    tau: tau_h,
                    p: p_h,
                },
                tol,
            )?;
            Ok((lhs, rhs))
        }
        GammaIdentity::Modular => {
            let a = modulus(tau / p, "τ/p")?;
            let b = modulus(-1.0 / p, "−1/p")?;
            let c = modulus(-1.0 / tau, "−1/τ")?;
            let d = modulus(-p / tau, "−p/τ")?;
            let lhs = ellgamma(
                GammaArgs {
                    t: t_lhs / p,
                    tau: a,
                    p: b,
                },
                tol,
            )?;
            let phase = (C64::i() * PI * q_cubic(t_rhs, tau, p)?).exp();
            let rhs = phase
                * ellgamma(
                    GammaArgs {
                        t: (t_rhs - p) / tau,
                        tau: c,
                        p: d,
                    },
                    tol,
                )?
                * ellgamma(
                    GammaArgs {
                        t: t_rhs,
                        tau: tau_h,
                        p: p_h,
                    },
                    tol,
                )?;
            Ok((lhs, rhs))
        }
    }
}

/// `|LHS − RHS| / (|LHS| + |RHS|)`.
pub fn verify_gamma_identity(
    kind: GammaIdentity,
    t: C64,
    tau: C64,
    p: C64,
    tol: &Tolerance,
) -> Result<f64> {
    let (l, r) = gamma_identity_sides(kind, t, t, tau, p, tol)?;
    Ok((l - r).norm() / (l.norm() + r.norm()))
}
