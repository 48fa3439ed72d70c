use crate::error::{Error, Result};
use crate::numerics::{differentiate, Tolerance};
use crate::theta::{rho, rho_dt, theta1, UpperHalfPoint};
use crate::C64;

const NEWTON_STEPS: usize = 50;
const ROOT_TOL: f64 = 1e-11;

/// A critical point of `exp(−μt) θ(t, τ)`, i.e. a root of `ρ(t, τ) = μ`, by
/// Newton's method from the seeds `½, ½ ± ¼, ½ ± τ/4`.
///
/// The result is reduced to `Re t ∈ [0, 1)`. The imaginary part is left as
/// found: a shift by τ changes ρ by `−2πi`, so no other representative solves
/// the same equation.
pub fn hermite_critical(mu: C64, tau: UpperHalfPoint, tol: &Tolerance) -> Result<C64> {
    let tv = tau.value();
    let half = C64::new(0.5, 0.0);
    let seeds = [
        half,
        half + 0.25,
        half - 0.25,
        half + tv / 4.0,
        half - tv / 4.0,
    ];
    for seed in seeds {
        let mut t = seed;
        for _ in 0..NEWTON_STEPS {
            let h = match rho(t, tau, tol) {
                Ok(r) => r - mu,
                Err(_) => break,
            };
            if h.norm() < ROOT_TOL {
                let shift = t.re.floor();
                return Ok(t - shift);
            }
            let d = match rho_dt(t, tau, tol) {
                Ok(d) if d.norm() > 0.0 => d,
                _ => break,
            };
            t -= h / d;
            if !t.is_finite() {
                break;
            }
        }
    }
    Err(Error::NonConvergence {
        what: "Newton iteration for the Hermite critical point",
        evals: NEWTON_STEPS * seeds.len(),
        err: f64::NAN,
    })
}

/// Local eigenvalues of `∂_λ² + 2ρ′` on Hermite's function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteReport {
    pub eigenvalue: C64,
    /// `max |Ê(λ) − E|`, divided by `|E|` when `|E| ≥ 1`.
    pub constancy_dev: f64,
    pub t0: C64,
}

/// Checks that `v(λ) = exp(λμ) θ(λ − t₀, τ)/θ(λ, τ)` satisfies
/// `(∂_λ² + 2ρ′) v = E v` by evaluating the quotient on `grid`.
pub fn hermite_eigen(
    mu: C64,
    tau: UpperHalfPoint,
    grid: &[C64],
    step: f64,
    tol: &Tolerance,
) -> Result<HermiteReport> {
    let t0 = hermite_critical(mu, tau, tol)?;
    hermite_eigen_at(mu, t0, tau, grid, step, tol)
}

/// [`hermite_eigen`] with an explicit `t₀`.
pub fn hermite_eigen_at(
    mu: C64,
    t0: C64,
    tau: UpperHalfPoint,
    grid: &[C64],
    step: f64,
    tol: &Tolerance,
) -> Result<HermiteReport> {
    if grid.len() < 8 {
        return Err(Error::Domain(format!(
            "need at least 8 grid points, got {}",
            grid.len()
        )));
    }
    let v = |l: C64| -> Result<C64> {
        Ok((l * mu).exp() * theta1(l - t0, tau, tol)? / theta1(l, tau, tol)?)
    };
    let mut es = Vec::with_capacity(grid.len());
    for &lam in grid {
        let v0 = v(lam)?;
        if v0.norm() == 0.0 {
            return Err(Error::Pole(format!(
                "Hermite function vanishes at λ = {lam}"
            )));
        }
        let d2 = differentiate(v, lam, 2, C64::new(step, 0.0))?;
        es.push((d2 + rho_dt(lam, tau, tol)? * v0 * 2.0) / v0);
    }
    let e = es.iter().sum::<C64>() / es.len() as f64;
    let dev = es.iter().map(|x| (x - e).norm()).fold(0.0, f64::max) / e.norm().max(1.0);
    Ok(HermiteReport {
        eigenvalue: e,
        constancy_dev: dev,
        t0,
    })
}

/// `(−H v)(λ⃗) = Σᵢ ∂²v/∂λᵢ² + 2m(m+1) Σ_{i<j} ρ′(λᵢ − λⱼ, τ) v`, second
/// derivatives by central differences with step `step`.
pub fn cm_apply(
    m: u32,
    v: &dyn Fn(&[C64]) -> Result<C64>,
    lams: &[C64],
    tau: UpperHalfPoint,
    step: C64,
    tol: &Tolerance,
) -> Result<C64> {
    let n = lams.len();
    if n < 2 {
        return Err(Error::Domain(format!(
            "the Calogero–Moser operator needs N ≥ 2, got {n}"
        )));
    }
    let v0 = v(lams)?;
    let mut lap = C64::new(0.0, 0.0);
    let mut x = lams.to_vec();
    for i in 0..n {
        lap += differentiate(
            |z| {
                x[i] = z;
                v(&x)
            },
            lams[i],
            2,
            step,
        )?;
        x[i] = lams[i];
    }
    let mut pot = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            pot += rho_dt(lams[i] - lams[j], tau, tol).map_err(|e| match e {
                Error::Pole(_) => Error::Pole(format!(
                    "λ{} − λ{} lies on the period lattice",
                    i + 1,
                    j + 1
                )),
                other => other,
            })?;
        }
    }
    Ok(lap + pot * v0 * (2 * m * (m + 1)) as f64)
}
