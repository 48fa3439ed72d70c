use crate::error::{Error, Result};
use crate::gamma::{ellgamma, gamma_parts, omega, GammaArgs};
use crate::numerics::Tolerance;
use crate::theta::{theta1, theta1_dt0, UpperHalfPoint};
use crate::C64;
use std::f64::consts::PI;

/// Arguments of the m = 1 kernel `u(λ, μ, τ, p, η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArgs {
    pub lam: C64,
    pub mu: C64,
    pub tau: UpperHalfPoint,
    pub p: UpperHalfPoint,
    pub eta: C64,
}

/// Precomputed quadrature for
/// `u = exp(−πiλμ/2η) ∫₀¹ Ω_{2η}(t) θ(λ+t,τ) θ(μ+t,p) / (θ(t−2η,τ) θ(t−2η,p)) dt`.
///
/// The integrand is 1-periodic in `t` with simple poles at `t = 2η` and
/// `t = −2η` (mod 1). For `Im η > 0` the real segment separates the upward
/// pole sequence `2η + ℕτ + ℕp` from the downward one `−2η − ℕτ − ℕp`; for
/// `Im η < 0` the two starting poles swap sides and the integral is defined by
/// analytic continuation in η. Both cases are covered by one formula: the
/// trapezoid rule on the horizontal line midway between `|2 Im η|` and the
/// next poles at height `min(Im τ, Im p) − |2 Im η|`, plus `2πi·Res_{t=2η}`
/// in closed form.
#[derive(Debug, Clone)]
pub struct Kernel {
    tau: UpperHalfPoint,
    p: UpperHalfPoint,
    eta: C64,
    nodes: Vec<C64>,
    weights: Vec<C64>,
    /// `2πi·Res_{t=2η}` without the two θ factors of λ and μ.
    residue: C64,
    half_width: f64,
}

fn strip(tau: UpperHalfPoint, p: UpperHalfPoint, eta: C64) -> Result<(f64, f64)> {
    let lo = 2.0 * eta.im.abs();
    let up = tau.value().im.min(p.value().im) - 2.0 * eta.im.abs();
    if eta.norm() == 0.0 || up.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Domain(format!(
            "kernel needs η ≠ 0 and 4|Im η| < min(Im τ, Im p); η = {eta}, τ = {}, p = {}",
            tau.value(),
            p.value()
        )));
    }
    Ok((lo, up))
}

impl Kernel {
    /// Node count from the strip half-width `d`: the periodic trapezoid error
    /// is `O(exp(−2πNd))`; the factor 2 covers growth of the θ factors.
    pub fn default_nodes(
        tau: UpperHalfPoint,
        p: UpperHalfPoint,
        eta: C64,
        tol: &Tolerance,
    ) -> Result<usize> {
        let (lo, up) = strip(tau, p, eta)?;
        let d = 0.5 * (up - lo);
        let digits = -tol.rel_tol.min(tol.abs_tol).max(1e-16).ln();
        Ok(((2.0 * digits / (2.0 * PI * d)).ceil() as usize).max(16))
    }

    pub fn new(tau: UpperHalfPoint, p: UpperHalfPoint, eta: C64, tol: &Tolerance) -> Result<Self> {
        let n = Self::default_nodes(tau, p, eta, tol)?;
        Self::with_nodes(tau, p, eta, n, tol)
    }

    pub fn with_nodes(
        tau: UpperHalfPoint,
        p: UpperHalfPoint,
        eta: C64,
        n: usize,
        tol: &Tolerance,
    ) -> Result<Self> {
        let (lo, up) = strip(tau, p, eta)?;
        if n == 0 {
            return Err(Error::Domain("kernel needs at least one node".into()));
        }
        let y = 0.5 * (lo + up);
        let two_eta = eta * 2.0;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for k in 0..n {
            let t = C64::new(k as f64 / n as f64, y);
            let den = theta1(t - two_eta, tau, tol)? * theta1(t - two_eta, p, tol)?;
            let w = omega(two_eta, t, tau, p, tol)? / den / n as f64;
            nodes.push(t);
            weights.push(w);
        }
        // Near t = 2η: 1/Γ(t−2η) ≈ −2πi(t−2η)·C₀ with C₀ the product without
        // its vanishing factor, and θ(t−2η,·) ≈ θ′(0,·)(t−2η).
        let (n0, d0) = gamma_parts(C64::new(0.0, 0.0), tau, p, true, tol)?;
        let c0 = d0 / n0;
        let g4 = ellgamma(
            GammaArgs {
                t: eta * 4.0,
                tau,
                p,
            },
            tol,
        )?;
        let two_pi_i = C64::new(0.0, 2.0 * PI);
        let res = -two_pi_i * g4 * c0 / (theta1_dt0(tau, tol)? * theta1_dt0(p, tol)?);
        Ok(Self {
            tau,
            p,
            eta,
            nodes,
            weights,
            residue: two_pi_i * res,
            half_width: 0.5 * (up - lo),
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Multiplies Ω by `s` throughout; used to check that residuals react to
    /// a perturbed kernel.
    pub fn scale_omega(mut self, s: f64) -> Self {
        for w in &mut self.weights {
            *w *= s;
        }
        self.residue *= s;
        self
    }

    /// The integral without the exponential prefactor.
    pub fn integral_part(&self, lam: C64, mu: C64, tol: &Tolerance) -> Result<C64> {
        self.fix_first(lam, tol)?.integral_part(mu, tol)
    }

    pub fn eval(&self, lam: C64, mu: C64, tol: &Tolerance) -> Result<C64> {
        self.fix_first(lam, tol)?.eval(mu, tol)
    }

    /// `μ ↦ u(λ, μ)` with the λ-dependent factors precomputed.
    pub fn fix_first(&self, lam: C64, tol: &Tolerance) -> Result<KernelRow> {
        self.row(lam, self.tau, self.p, tol)
    }

    /// `λ ↦ u(λ, μ)` with the μ-dependent factors precomputed.
    pub fn fix_second(&self, mu: C64, tol: &Tolerance) -> Result<KernelRow> {
        self.row(mu, self.p, self.tau, tol)
    }

    fn row(
        &self,
        fixed: C64,
        fixed_mod: UpperHalfPoint,
        free_mod: UpperHalfPoint,
        tol: &Tolerance,
    ) -> Result<KernelRow> {
        let mut coeffs = Vec::with_capacity(self.nodes.len() + 1);
        let mut nodes = Vec::with_capacity(self.nodes.len() + 1);
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            coeffs.push(w * theta1(fixed + t, fixed_mod, tol)?);
            nodes.push(*t);
        }
        let t2 = self.eta * 2.0;
        coeffs.push(self.residue * theta1(fixed + t2, fixed_mod, tol)?);
        nodes.push(t2);
        Ok(KernelRow {
            fixed,
            free_mod,
            eta: self.eta,
            nodes,
            coeffs,
        })
    }
}

/// The kernel with one argument fixed.
#[derive(Debug, Clone)]
pub struct KernelRow {
    fixed: C64,
    free_mod: UpperHalfPoint,
    eta: C64,
    nodes: Vec<C64>,
    coeffs: Vec<C64>,
}

impl KernelRow {
    pub fn integral_part(&self, z: C64, tol: &Tolerance) -> Result<C64> {
        let mut s = C64::new(0.0, 0.0);
        for (t, c) in self.nodes.iter().zip(&self.coeffs) {
            s += c * theta1(z + t, self.free_mod, tol)?;
        }
        Ok(s)
    }

    pub fn eval(&self, z: C64, tol: &Tolerance) -> Result<C64> {
        let pre = (C64::new(0.0, -PI) * self.fixed * z / (self.eta * 2.0)).exp();
        Ok(pre * self.integral_part(z, tol)?)
    }
}

/// `u(λ, μ, τ, p, η)`, with the node count doubled until two levels agree.
pub fn kernel_u(args: KernelArgs, tol: &Tolerance) -> Result<C64> {
    let mut n = Kernel::default_nodes(args.tau, args.p, args.eta, tol)?;
    let mut prev =
        Kernel::with_nodes(args.tau, args.p, args.eta, n, tol)?.eval(args.lam, args.mu, tol)?;
    loop {
        n *= 2;
        let next =
            Kernel::with_nodes(args.tau, args.p, args.eta, n, tol)?.eval(args.lam, args.mu, tol)?;
        let err = (next - prev).norm();
        if err <= tol.target(next.norm()) {
            return Ok(next);
        }
        if n > tol.max_evals {
            return Err(Error::NonConvergence {
                what: "kernel trapezoid",
                evals: n,
                err,
            });
        }
        prev = next;
    }
}
