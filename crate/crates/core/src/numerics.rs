//! Quadrature, finite differences and principal-branch powers.
//!
//! Nothing here knows about theta functions. Every integrator returns a
//! [`QuadratureResult`] whose error estimate is the change between the last
//! two refinement levels.

use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

/// Accuracy request shared by every numerical routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_evals: usize) -> Result<Self> {
        if !(abs_tol >= 0.0 && rel_tol >= 0.0) || abs_tol + rel_tol <= 0.0 {
            return Err(Error::InvalidTolerance(format!(
                "need abs_tol, rel_tol >= 0 with positive sum, got {abs_tol}, {rel_tol}"
            )));
        }
        if max_evals < 16 {
            return Err(Error::InvalidTolerance(format!(
                "max_evals must be at least 16, got {max_evals}"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_evals,
        })
    }

    /// Target error for a quantity of size `scale`.
    pub fn target(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale)
    }

    pub fn with_max_evals(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals.max(16);
        self
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_evals: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: C64,
    pub err_estimate: f64,
    pub evals: usize,
}

/// The segment `center + direction * s`, `s` in `[-radius, radius]`.
///
/// The measure is the complex line element `direction * ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineContour {
    pub direction: C64,
    pub center: C64,
    pub radius: f64,
}

impl LineContour {
    pub fn new(direction: C64, center: C64, radius: f64) -> Result<Self> {
        if direction.norm() == 0.0 || !direction.is_finite() {
            return Err(Error::Domain("contour direction must be nonzero".into()));
        }
        if radius.is_nan() || radius <= 0.0 {
            return Err(Error::Domain(format!(
                "truncation radius must be positive, got {radius}"
            )));
        }
        Ok(Self {
            direction,
            center,
            radius,
        })
    }

    /// Radius for an integrand bounded by `exp(-c s^2)`: solves
    /// `exp(-c R^2) = abs_tol / 10`.
    pub fn for_decay(direction: C64, center: C64, decay: f64, tol: &Tolerance) -> Result<Self> {
        if decay.is_nan() || decay <= 0.0 {
            return Err(Error::Domain(format!(
                "decay constant must be positive, got {decay}"
            )));
        }
        let budget = (tol.abs_tol / 10.0).max(1e-300);
        let r = ((-budget.ln()) / decay).sqrt();
        Self::new(direction, center, r)
    }

    pub fn point(&self, s: f64) -> C64 {
        self.center + self.direction * s
    }
}

fn check_finite(z: C64, at: C64) -> Result<C64> {
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain(format!("integrand not finite at {at}")))
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pn1) = if n == 1 { (z, 1.0) } else { (p1, p0) };
            dp = nf * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

const GL_ORDER: usize = 16;

/// `∫_a^b f` along the straight segment.
///
/// Regular integrands use composite Gauss–Legendre with the panel count
/// doubled until two levels agree. With `endpoint_singular` a tanh-sinh
/// change of variables clusters nodes at both ends, which handles integrable
/// algebraic singularities.
pub fn integrate_segment<F>(
    mut f: F,
    a: C64,
    b: C64,
    tol: &Tolerance,
    endpoint_singular: bool,
) -> Result<QuadratureResult>
where
    F: FnMut(C64) -> Result<C64>,
{
    if a == b {
        return Ok(QuadratureResult {
            value: C64::new(0.0, 0.0),
            err_estimate: 0.0,
            evals: 0,
        });
    }
    if endpoint_singular {
        tanh_sinh(&mut f, a, b, tol)
    } else {
        composite_gl(&mut f, a, b, tol)
    }
}

fn composite_gl<F>(f: &mut F, a: C64, b: C64, tol: &Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(C64) -> Result<C64>,
{
    let (xs, ws) = gauss_legendre(GL_ORDER);
    let mut evals = 0usize;
    let mut prev: Option<C64> = None;
    let mut panels = 1usize;
    loop {
        let h = (b - a) / panels as f64;
        let mut sum = C64::new(0.0, 0.0);
        for p in 0..panels {
            let lo = a + h * p as f64;
            for (x, w) in xs.iter().zip(&ws) {
                let z = lo + h * (0.5 * (x + 1.0));
                sum += check_finite(f(z)?, z)? * (0.5 * w);
            }
        }
        evals += panels * GL_ORDER;
        let value = sum * h;
        if let Some(p) = prev {
            let err = (value - p).norm();
            if err <= tol.target(value.norm()) {
                return Ok(QuadratureResult {
                    value,
                    err_estimate: err,
                    evals,
                });
            }
            if evals + 2 * panels * GL_ORDER > tol.max_evals {
                return Err(Error::NonConvergence {
                    what: "composite Gauss-Legendre",
                    evals,
                    err,
                });
            }
        }
        prev = Some(value);
        panels *= 2;
    }
}

fn tanh_sinh<F>(f: &mut F, a: C64, b: C64, tol: &Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(C64) -> Result<C64>,
{
    // Nodes beyond |t| = 4.5 sit within e^-140 of an endpoint.
    const T_MAX: f64 = 4.5;
    let half = (b - a) * 0.5;
    let mut evals = 0usize;
    // Contribution of the node at t, measured from the nearer endpoint so that
    // points next to a singular end are not rounded onto it.
    let mut node = |t: f64, evals: &mut usize| -> Result<C64> {
        let u = 0.5 * PI * t.sinh();
        let cu = u.cosh();
        let w = 0.5 * PI * t.cosh() / (cu * cu);
        // 1 - tanh|u| computed without cancellation.
        let d = 2.0 / ((2.0 * u.abs()).exp() + 1.0);
        let z = if u >= 0.0 { b - half * d } else { a + half * d };
        if z == a || z == b || w == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        *evals += 1;
        Ok(check_finite(f(z)?, z)? * w)
    };

    let mut h = 1.0;
    let mut sum = node(0.0, &mut evals)?;
    let mut k = 1;
    while (k as f64) * h <= T_MAX {
        let t = k as f64 * h;
        sum += node(t, &mut evals)? + node(-t, &mut evals)?;
        k += 1;
    }
    let mut value = sum * h * half;
    for level in 1.. {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= T_MAX {
            let t = k as f64 * h;
            sum += node(t, &mut evals)? + node(-t, &mut evals)?;
            k += 2;
        }
        let next = sum * h * half;
        let err = (next - value).norm();
        value = next;
        if level >= 3 && err <= tol.target(value.norm()) {
            return Ok(QuadratureResult {
                value,
                err_estimate: err,
                evals,
            });
        }
        if evals > tol.max_evals {
            return Err(Error::NonConvergence {
                what: "tanh-sinh",
                evals,
                err,
            });
        }
    }
    unreachable!()
}

/// Trapezoid rule on a truncated line, refined by halving the step.
///
/// For integrands analytic in a strip around the contour and decaying like a
/// Gaussian this converges geometrically.
pub fn integrate_line<F>(
    mut f: F,
    contour: &LineContour,
    tol: &Tolerance,
) -> Result<QuadratureResult>
where
    F: FnMut(C64) -> Result<C64>,
{
    let r = contour.radius;
    let eta = contour.direction;
    let mut n = 64usize;
    let mut h = 2.0 * r / n as f64;
    let mut evals = 0usize;
    let mut sum = C64::new(0.0, 0.0);
    let mut tail = 0.0f64;
    for j in 0..=n {
        let z = contour.point(-r + j as f64 * h);
        let v = check_finite(f(z)?, z)?;
        if j == 0 || j == n {
            tail = tail.max(v.norm() * eta.norm());
            sum += v * 0.5;
        } else {
            sum += v;
        }
    }
    evals += n + 1;
    let mut value = sum * h * eta;
    let mut level = 0;
    loop {
        h *= 0.5;
        for j in 0..n {
            let z = contour.point(-r + (2 * j + 1) as f64 * h);
            sum += check_finite(f(z)?, z)?;
        }
        evals += n;
        n *= 2;
        level += 1;
        let next = sum * h * eta;
        let err = (next - value).norm();
        value = next;
        if level >= 2 && err <= tol.target(value.norm()) {
            let budget = tol.target(value.norm()) / 10.0;
            if tail > 10.0 * budget {
                return Err(Error::DecayViolation { tail, budget });
            }
            return Ok(QuadratureResult {
                value,
                err_estimate: err,
                evals,
            });
        }
        if evals + n > tol.max_evals {
            return Err(Error::NonConvergence {
                what: "line trapezoid",
                evals,
                err,
            });
        }
    }
}

/// Line integral whose truncation radius is found by sampling: the radius is
/// doubled until the integrand at both ends is negligible against its peak.
pub fn integrate_line_auto<F>(
    mut f: F,
    direction: C64,
    center: C64,
    tol: &Tolerance,
) -> Result<QuadratureResult>
where
    F: FnMut(C64) -> Result<C64>,
{
    let mut r = 4.0;
    loop {
        let probe = LineContour::new(direction, center, r)?;
        let mut peak = 0.0f64;
        for j in 0..=32 {
            let z = probe.point(-r + j as f64 * r / 16.0);
            peak = peak.max(f(z)?.norm());
        }
        let ends = f(probe.point(r))?.norm().max(f(probe.point(-r))?.norm());
        let budget = tol.target(peak) * 1e-3;
        if ends.is_finite() && ends <= budget {
            return integrate_line(&mut f, &probe, tol);
        }
        r *= 1.5;
        if r > 1e5 || !ends.is_finite() {
            return Err(Error::DecayViolation { tail: ends, budget });
        }
    }
}

/// `∫ f` over one period `[start, start + period]` of a periodic analytic
/// integrand, by the trapezoid rule with doubling node count.
pub fn integrate_periodic<F>(
    mut f: F,
    start: C64,
    period: C64,
    tol: &Tolerance,
) -> Result<QuadratureResult>
where
    F: FnMut(C64) -> Result<C64>,
{
    let mut n = 16usize;
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..n {
        let z = start + period * (k as f64 / n as f64);
        sum += check_finite(f(z)?, z)?;
    }
    let mut evals = n;
    let mut value = sum * period / n as f64;
    loop {
        for k in 0..n {
            let z = start + period * ((2 * k + 1) as f64 / (2 * n) as f64);
            sum += check_finite(f(z)?, z)?;
        }
        evals += n;
        n *= 2;
        let next = sum * period / n as f64;
        let err = (next - value).norm();
        value = next;
        if err <= tol.target(value.norm()) {
            return Ok(QuadratureResult {
                value,
                err_estimate: err,
                evals,
            });
        }
        if evals + n > tol.max_evals {
            return Err(Error::NonConvergence {
                what: "periodic trapezoid",
                evals,
                err,
            });
        }
    }
}

/// Central difference of order 1 or 2 with one Richardson step, error
/// `O(step^4)`. The step may be complex, e.g. `1e-3 i` to keep a stencil in
/// the upper half plane.
pub fn differentiate<F>(mut f: F, z: C64, order: u8, step: C64) -> Result<C64>
where
    F: FnMut(C64) -> Result<C64>,
{
    if step.norm() == 0.0 {
        return Err(Error::Domain(
            "finite-difference step must be nonzero".into(),
        ));
    }
    let h = step;
    match order {
        1 => {
            let d = |f: &mut F, h: C64| -> Result<C64> { Ok((f(z + h)? - f(z - h)?) / (h * 2.0)) };
            let d1 = d(&mut f, h)?;
            let d2 = d(&mut f, h * 2.0)?;
            Ok((d1 * 4.0 - d2) / 3.0)
        }
        2 => {
            let f0 = f(z)?;
            let mut d =
                |h: C64| -> Result<C64> { Ok((f(z + h)? - f0 * 2.0 + f(z - h)?) / (h * h)) };
            let d1 = d(h)?;
            let d2 = d(h * 2.0)?;
            Ok((d1 * 4.0 - d2) / 3.0)
        }
        _ => Err(Error::Domain(format!(
            "differentiate supports order 1 or 2, got {order}"
        ))),
    }
}

/// `exp(s log z)` with the principal logarithm, `arg z` in `(-pi, pi]`.
pub fn power_principal(z: C64, s: C64) -> Result<C64> {
    if z.norm() == 0.0 {
        if s.re > 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        return Err(Error::Domain(format!("0^{s} is undefined")));
    }
    Ok((s * z.ln()).exp())
}

/// Least-squares line through `(x, y)`; returns slope, intercept and the
/// root-mean-square residual.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rms = (x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - icpt - slope * a).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, icpt, rms)
}
