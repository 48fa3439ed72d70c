//! Heat-equation residuals, Lamé eigenfunctions, the hypergeometric
//! solution and the semiclassical fit.

use qkzb::spectral::{
    cm_apply, hermite_critical, hermite_eigen, hypergeom_m1, kzb_residual, modular_map_classical,
    semiclassical_order, shift_map, Family, FdSteps, HeatSolutionSpec, HypergeomGauge,
    HypergeomOptions,
};
use qkzb::theta::{rho, theta1};
use qkzb::{Error, Tolerance, UpperHalfPoint, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn uhp(re: f64, im: f64) -> UpperHalfPoint {
    UpperHalfPoint::new(c(re, im)).unwrap()
}

#[test]
fn heat_solution_survives_modular_and_shift_maps() {
    let tol = Tolerance::default();
    let kappa = c(3.0, 0.0);
    let g = HeatSolutionSpec::new(c(0.4, 0.1), kappa).unwrap();
    let v = |l: C64, t: C64| Ok(g.eval(l, t));
    let m = modular_map_classical(&v, kappa);
    let s = shift_map(&v);
    let tau = uhp(0.2, 1.1);
    for f in [&m as &dyn Fn(C64, C64) -> qkzb::Result<C64>, &s] {
        let r = kzb_residual(f, c(0.3, 0.0), tau, kappa, 0, FdSteps::default(), &tol).unwrap();
        assert!(r < 1e-6, "{r}");
    }
}

#[test]
fn hermite_function_is_a_lame_eigenfunction() {
    let tol = Tolerance::default();
    let tau = uhp(0.0, 1.0);
    let mu = c(0.6, 0.2);
    let t0 = hermite_critical(mu, tau, &tol).unwrap();
    assert!((rho(t0, tau, &tol).unwrap() - mu).norm() < 1e-10);
    let grid: Vec<C64> = (0..10).map(|k| c(0.2 + 0.06 * k as f64, 0.05)).collect();
    let rep = hermite_eigen(mu, tau, &grid, 1e-3, &tol).unwrap();
    assert!(rep.constancy_dev < 1e-6, "{rep:?}");
    // The same function through the N = 2 operator in the relative coordinate.
    let v = |x: &[C64]| -> qkzb::Result<C64> {
        let d = x[0] - x[1];
        Ok((d * mu).exp() * theta1(d - t0, tau, &tol)? / theta1(d, tau, &tol)?)
    };
    let lams = [c(0.55, 0.0), c(0.1, 0.0)];
    let hv = cm_apply(1, &v, &lams, tau, c(1e-3, 0.0), &tol).unwrap();
    let e = rep.eigenvalue * 2.0;
    assert!(
        (hv - e * v(&lams).unwrap()).norm() < 1e-5 * hv.norm(),
        "{hv}"
    );
}

#[test]
fn hypergeometric_solution_over_a_grid() {
    let tol = Tolerance::default();
    let g = HeatSolutionSpec::new(c(-0.3, 0.0), c(5.0, 0.0)).unwrap();
    let v = |l: C64, t: C64| {
        hypergeom_m1(
            5.0,
            g,
            l,
            UpperHalfPoint::new(t)?,
            HypergeomOptions::default(),
            &tol,
        )
    };
    for (lam, tau) in [(0.3, 0.9), (0.45, 1.3)] {
        let r = kzb_residual(
            &v,
            c(lam, 0.0),
            uhp(0.0, tau),
            c(5.0, 0.0),
            1,
            FdSteps::default(),
            &tol,
        )
        .unwrap();
        assert!(r < 1e-4, "λ={lam}, τ={tau}i: {r}");
    }
}

#[test]
fn hypergeometric_domain_errors() {
    let tol = Tolerance::default();
    let g = HeatSolutionSpec::new(c(0.5, 0.0), c(2.0, 0.0)).unwrap();
    let r = hypergeom_m1(
        2.0,
        g,
        c(0.3, 0.0),
        uhp(0.0, 1.0),
        HypergeomOptions::default(),
        &tol,
    );
    assert!(matches!(r, Err(Error::Domain(_))));
    let opts = HypergeomOptions {
        gauge: HypergeomGauge::Theta,
        delta: 0.7,
        ..Default::default()
    };
    assert!(hypergeom_m1(4.0, g, c(0.3, 0.0), uhp(0.0, 1.0), opts, &tol).is_err());
}

#[test]
fn semiclassical_fit_on_a_first_order_defect() {
    let tol = Tolerance::default();
    let v = |l: C64, t: C64| Ok((l * 0.5).cos() * t);
    let etas: Vec<C64> = (0..4).map(|k| c(0.0, -0.03 / 2.5f64.powi(k))).collect();
    let rep = semiclassical_order(
        Family::Free,
        &v,
        c(0.2, 0.0),
        uhp(0.0, 1.0),
        3.0,
        &etas,
        &tol,
    )
    .unwrap();
    assert!((rep.slope - 1.0).abs() < 0.1, "{rep:?}");
    assert!(rep.coeff_check < 0.05, "{rep:?}");
    let upper = [c(0.0, 0.01), c(0.0, -0.001), c(0.0, -0.0001)];
    assert!(semiclassical_order(
        Family::Free,
        &v,
        c(0.2, 0.0),
        uhp(0.0, 1.0),
        3.0,
        &upper,
        &tol
    )
    .is_err());
}
