//! Subcommands and their mapping onto library calls.

use crate::literal::parse_complex as cx;
use crate::report::{complex, real, RunReport};
use crate::Usage;
use clap::{Args, Subcommand, ValueEnum};
use qkzb::free::{
    fourier_identity_residual, projective_residual_free, theta_block_residual,
    true_solution_residual, verify_relation_auto, FourierIdentity, PrefactorSign, Relation,
};
use qkzb::gamma::{ellgamma, omega, q_cubic, verify_gamma_identity};
use qkzb::interacting::{kernel_u, projective_residual_one, KernelArgs};
use qkzb::spectral::{
    hermite_eigen, hypergeom_m1, kzb_residual, modular_map_classical, semiclassical_order, Family,
    FdSteps, HeatSolutionSpec, HypergeomGauge, HypergeomOptions,
};
use qkzb::theta::{rho, rho_dt, theta1, theta_level};
use qkzb::{
    BasePoint, GammaArgs, GammaIdentity, GaussianElem, ThetaIndex, Tolerance, UpperHalfPoint, C64,
};
use serde_json::{json, Value};
use std::collections::BTreeMap;

type Inputs = BTreeMap<String, String>;
type Details = BTreeMap<String, Value>;

fn uhp(z: C64) -> qkzb::Result<UpperHalfPoint> {
    UpperHalfPoint::new(z)
}

fn put(m: &mut Inputs, k: &str, v: impl ToString) {
    m.insert(k.to_string(), v.to_string());
}

#[derive(Args, Debug, Clone)]
pub struct ThetaArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    t: Option<C64>,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    tau: C64,
}

#[derive(Args, Debug, Clone)]
pub struct LevelArgs {
    #[arg(long)]
    j: u32,
    #[arg(long)]
    kappa: u32,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    lambda: Option<C64>,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    tau: C64,
}

#[derive(Args, Debug, Clone)]
pub struct GammaCliArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    t: Option<C64>,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    tau: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    p: C64,
}

#[derive(Args, Debug, Clone)]
pub struct OmegaArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    a: C64,
    #[command(flatten)]
    rest: GammaCliArgs,
}

#[derive(Args, Debug, Clone)]
pub struct KernelCliArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    lambda: Option<C64>,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    mu: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    tau: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    p: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    eta: C64,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum GaugeArg {
    Plain,
    Theta,
}

#[derive(Args, Debug, Clone)]
pub struct HypergeomArgs {
    /// Level κ > 2.
    #[arg(long)]
    kappa: f64,
    /// μ of the heat solution `g = exp(λμ + μ²τ/2πiκ)`.
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    mu_g: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    lambda: Option<C64>,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    tau: C64,
    #[arg(long, value_enum, default_value = "plain")]
    gauge: GaugeArg,
}

#[derive(Subcommand, Debug, Clone)]
pub enum EvalCmd {
    /// θ(t, τ).
    Theta1(ThetaArgs),
    /// θ_{j,κ}(λ, τ).
    ThetaLevel(LevelArgs),
    /// ρ(t, τ) = θ′/θ.
    Rho(ThetaArgs),
    /// ∂_t ρ(t, τ).
    RhoPrime(ThetaArgs),
    /// Γ(t, τ, p).
    Gamma(GammaCliArgs),
    /// Ω_a(t, τ, p) = Γ(t+a)/Γ(t−a).
    Omega(OmegaArgs),
    /// The cubic Q(t; τ, p).
    QCubic(GammaCliArgs),
    /// The m = 1 kernel u(λ, μ, τ, p, η).
    KernelU(KernelCliArgs),
    /// The m = 1 hypergeometric solution v(λ, τ).
    HypergeomM1(HypergeomArgs),
}

impl EvalCmd {
    fn name(&self) -> &'static str {
        match self {
            EvalCmd::Theta1(_) => "theta1",
            EvalCmd::ThetaLevel(_) => "theta-level",
            EvalCmd::Rho(_) => "rho",
            EvalCmd::RhoPrime(_) => "rho-prime",
            EvalCmd::Gamma(_) => "gamma",
            EvalCmd::Omega(_) => "omega",
            EvalCmd::QCubic(_) => "q-cubic",
            EvalCmd::KernelU(_) => "kernel-u",
            EvalCmd::HypergeomM1(_) => "hypergeom-m1",
        }
    }

    /// Name and current value of the variable a grid sweeps.
    fn swept(&self) -> (&'static str, Option<C64>) {
        match self {
            EvalCmd::Theta1(a) | EvalCmd::Rho(a) | EvalCmd::RhoPrime(a) => ("t", a.t),
            EvalCmd::Gamma(a) | EvalCmd::QCubic(a) => ("t", a.t),
            EvalCmd::Omega(a) => ("t", a.rest.t),
            EvalCmd::ThetaLevel(a) => ("lambda", a.lambda),
            EvalCmd::KernelU(a) => ("lambda", a.lambda),
            EvalCmd::HypergeomM1(a) => ("lambda", a.lambda),
        }
    }

    /// Every input except the swept variable.
    fn fixed_inputs(&self) -> Inputs {
        let mut m = Inputs::new();
        match self {
            EvalCmd::Theta1(a) | EvalCmd::Rho(a) | EvalCmd::RhoPrime(a) => {
                put(&mut m, "tau", a.tau)
            }
            EvalCmd::ThetaLevel(a) => {
                put(&mut m, "j", a.j);
                put(&mut m, "kappa", a.kappa);
                put(&mut m, "tau", a.tau);
            }
            EvalCmd::Gamma(a) | EvalCmd::QCubic(a) => {
                put(&mut m, "tau", a.tau);
                put(&mut m, "p", a.p);
            }
            EvalCmd::Omega(a) => {
                put(&mut m, "a", a.a);
                put(&mut m, "tau", a.rest.tau);
                put(&mut m, "p", a.rest.p);
            }
            EvalCmd::KernelU(a) => {
                put(&mut m, "mu", a.mu);
                put(&mut m, "tau", a.tau);
                put(&mut m, "p", a.p);
                put(&mut m, "eta", a.eta);
            }
            EvalCmd::HypergeomM1(a) => {
                put(&mut m, "kappa", a.kappa);
                put(&mut m, "mu_g", a.mu_g);
                put(&mut m, "tau", a.tau);
                put(&mut m, "gauge", format!("{:?}", a.gauge).to_lowercase());
            }
        }
        m
    }

    fn compute(&self, x: C64, tol: &Tolerance) -> qkzb::Result<C64> {
        match self {
            EvalCmd::Theta1(a) => theta1(x, uhp(a.tau)?, tol),
            EvalCmd::Rho(a) => rho(x, uhp(a.tau)?, tol),
            EvalCmd::RhoPrime(a) => rho_dt(x, uhp(a.tau)?, tol),
            EvalCmd::ThetaLevel(a) => {
                theta_level(ThetaIndex::new(a.j, a.kappa)?, x, uhp(a.tau)?, tol)
            }
            EvalCmd::Gamma(a) => ellgamma(GammaArgs::new(x, a.tau, a.p)?, tol),
            EvalCmd::Omega(a) => omega(a.a, x, uhp(a.rest.tau)?, uhp(a.rest.p)?, tol),
            EvalCmd::QCubic(a) => q_cubic(x, a.tau, a.p),
            EvalCmd::KernelU(a) => kernel_u(
                KernelArgs {
                    lam: x,
                    mu: a.mu,
                    tau: uhp(a.tau)?,
                    p: uhp(a.p)?,
                    eta: a.eta,
                },
                tol,
            ),
            EvalCmd::HypergeomM1(a) => {
                let g = HeatSolutionSpec::new(a.mu_g, C64::new(a.kappa, 0.0))?;
                let opts = HypergeomOptions {
                    gauge: match a.gauge {
                        GaugeArg::Plain => HypergeomGauge::Plain,
                        GaugeArg::Theta => HypergeomGauge::Theta,
                    },
                    ..Default::default()
                };
                hypergeom_m1(a.kappa, g, x, uhp(a.tau)?, opts, tol)
            }
        }
    }
}

pub fn eval(cmd: &EvalCmd, tol: &Tolerance) -> Result<RunReport, Usage> {
    let (var, x) = cmd.swept();
    let x = x.ok_or_else(|| Usage(format!("eval {} needs --{var}", cmd.name())))?;
    let mut inputs = cmd.fixed_inputs();
    put(&mut inputs, var, x);
    let mut report = RunReport::new(format!("eval {}", cmd.name()), inputs, tol.rel_tol);
    match cmd.compute(x, tol) {
        Ok(v) => {
            report.value = Some(complex(v));
            report.pass = true;
        }
        Err(e) => report.fail_with(&e),
    }
    Ok(report)
}

/// Evaluates on `points`, stopping at the first numerical error.
pub fn grid(
    cmd: &EvalCmd,
    points: &[C64],
    tol: &Tolerance,
) -> Result<(RunReport, Vec<(C64, C64)>), Usage> {
    let (var, _) = cmd.swept();
    let mut inputs = cmd.fixed_inputs();
    put(&mut inputs, &format!("{var}_from"), points[0]);
    put(&mut inputs, &format!("{var}_to"), points[points.len() - 1]);
    put(&mut inputs, "n", points.len());
    let mut report = RunReport::new(format!("grid {}", cmd.name()), inputs, tol.rel_tol);
    let mut values = Vec::with_capacity(points.len());
    for &x in points {
        match cmd.compute(x, tol) {
            Ok(v) => values.push((x, v)),
            Err(e) => {
                report.fail_with(&e);
                report.details.insert("failed_at".into(), complex(x));
                return Ok((report, values));
            }
        }
    }
    report.pass = true;
    report.details.insert("points".into(), json!(values.len()));
    Ok((report, values))
}

#[derive(Args, Debug, Clone)]
pub struct Threshold {
    /// Pass when the residual is at most this value.
    #[arg(long, value_parser = crate::literal::parse_positive)]
    threshold: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct GammaVerifyArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    t: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    tau: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    p: C64,
    #[command(flatten)]
    th: Threshold,
}

#[derive(Args, Debug, Clone)]
pub struct BaseArgs {
    /// Base point `x1,x2,x3`.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = cx)]
    x: Vec<C64>,
}

impl BaseArgs {
    fn point(&self) -> Result<[C64; 3], Usage> {
        <[C64; 3]>::try_from(self.x.as_slice()).map_err(|_| {
            Usage(format!(
                "--x needs three comma-separated values, got {}",
                self.x.len()
            ))
        })
    }
}

fn show_x(x: &[C64; 3]) -> String {
    x.iter()
        .map(|z| z.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Args, Debug, Clone)]
pub struct FourierArgs {
    #[command(flatten)]
    x: BaseArgs,
    /// Probe Gaussian: fiber parameter for q-heat, quadratic coefficient for
    /// the modular identity.
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    probe: Option<C64>,
    #[command(flatten)]
    th: Threshold,
}

#[derive(Args, Debug, Clone)]
pub struct Sl3Args {
    /// `commute:ij,kl`, `braid:i,j,k`, `braidijk`, `commij_kl` or `torsion4`.
    #[arg(long)]
    relation: String,
    #[command(flatten)]
    x: BaseArgs,
    /// Number of Gaussian probes.
    #[arg(long, default_value_t = 4)]
    probes: usize,
    #[command(flatten)]
    th: Threshold,
}

#[derive(Args, Debug, Clone)]
pub struct ThetaBlockArgs {
    #[arg(long)]
    kappa: u32,
    /// One index; all `0..2κ` when omitted.
    #[arg(long)]
    j: Option<u32>,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    lambda: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    tau: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    eta: C64,
    #[command(flatten)]
    th: Threshold,
}

#[derive(Args, Debug, Clone)]
pub struct ProjectiveFreeArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    lambda: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    mu: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    eta: C64,
    /// With `--p`, also checks the true solution.
    #[arg(long, allow_hyphen_values = true, value_parser = cx, requires = "p")]
    tau: Option<C64>,
    #[arg(long, allow_hyphen_values = true, value_parser = cx, requires = "tau")]
    p: Option<C64>,
    #[command(flatten)]
    th: Threshold,
}

#[derive(Args, Debug, Clone)]
pub struct ProjectiveOneArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    lambda: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    mu: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    tau: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    p: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    eta: C64,
    #[command(flatten)]
    th: Threshold,
}

#[derive(Args, Debug, Clone)]
pub struct HermiteArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    mu: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    tau: C64,
    #[command(flatten)]
    th: Threshold,
}

#[derive(Args, Debug, Clone)]
pub struct HeatArgs {
    #[arg(long)]
    kappa: f64,
    /// μ of the heat solution `g = exp(λμ + μ²τ/2πiκ)`.
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    mu_g: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    lambda: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = cx)]
    tau: C64,
}

impl HeatArgs {
    fn inputs(&self, m: &mut Inputs) {
        put(m, "kappa", self.kappa);
        put(m, "mu_g", self.mu_g);
        put(m, "lambda", self.lambda);
        put(m, "tau", self.tau);
    }

    fn spec(&self) -> qkzb::Result<HeatSolutionSpec> {
        HeatSolutionSpec::new(self.mu_g, C64::new(self.kappa, 0.0))
    }
}

#[derive(Args, Debug, Clone)]
pub struct KzbArgs {
    /// Coupling: 0 checks the heat solution g, 1 the hypergeometric solution.
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=1))]
    m: u32,
    #[command(flatten)]
    heat: HeatArgs,
    #[command(flatten)]
    th: Threshold,
}

#[derive(Args, Debug, Clone)]
pub struct ModularArgs {
    #[command(flatten)]
    heat: HeatArgs,
    #[command(flatten)]
    th: Threshold,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum FamilyArg {
    Free,
    One,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum SolutionArg {
    /// The heat solution g.
    Heat,
    /// The hypergeometric solution in the theta gauge.
    Hypergeom,
    /// `exp(λ)`, which solves nothing.
    Exp,
}

#[derive(Args, Debug, Clone)]
pub struct SemiclassicalArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_enum)]
    solution: Option<SolutionArg>,
    #[command(flatten)]
    heat: HeatArgs,
    /// Largest |η|; the others are halved down from it.
    #[arg(long, default_value_t = 0.02)]
    eta_max: f64,
    #[arg(long, default_value_t = 5)]
    levels: usize,
    /// Expected slope of log|D| against log|η|.
    #[arg(long)]
    expect_slope: Option<f64>,
    #[command(flatten)]
    th: Threshold,
}

#[derive(Subcommand, Debug, Clone)]
pub enum VerifyCmd {
    /// Γ(t+τ,τ,τ+p)Γ(t,τ+p,p) = Γ(t,τ,p).
    GammaHeat(GammaVerifyArgs),
    /// The modular equation of Γ with the cubic Q.
    GammaModular(GammaVerifyArgs),
    /// αUαUα ∝ U with Gaussian probes.
    FourierQheat(FourierArgs),
    /// The Fourier modular identity with Gaussian probes.
    FourierModular(FourierArgs),
    /// A relation of SL(3,ℤ) for the projective flat connection.
    Sl3(Sl3Args),
    /// Invariance of the level-κ thetas under the m = 0 operator.
    ThetaBlock(ThetaBlockArgs),
    /// The m = 0 plane wave is a projective solution.
    ProjectiveFree(ProjectiveFreeArgs),
    /// The m = 1 kernel is a projective solution.
    ProjectiveOne(ProjectiveOneArgs),
    /// Hermite's function is a Lamé eigenfunction.
    Hermite(HermiteArgs),
    /// Residual of the KZB heat equation.
    KzbResidual(KzbArgs),
    /// The modular image of g solves the heat equation.
    ModularMap(ModularArgs),
    /// Order of the defect `T v − v` as η → 0.
    Semiclassical(SemiclassicalArgs),
}

/// Residual, pass threshold and extra report fields.
struct Check {
    residual: f64,
    threshold: f64,
    details: Details,
}

fn check(residual: f64, threshold: f64) -> Check {
    Check {
        residual,
        threshold,
        details: Details::new(),
    }
}

fn fourier(
    kind: FourierIdentity,
    a: &FourierArgs,
    tol_default: f64,
    inputs: &mut Inputs,
) -> Result<qkzb::Result<Check>, Usage> {
    let x = a.x.point()?;
    put(inputs, "x", show_x(&x));
    let run = || -> qkzb::Result<Check> {
        let base = BasePoint::new(x[0], x[1], x[2])?;
        let probe = match kind {
            FourierIdentity::QHeat => {
                let t = a.probe.unwrap_or(C64::new(-0.5, 0.0));
                GaussianElem::from_fiber(C64::new(1.0, 0.0), t, base.x3())
            }
            FourierIdentity::Modular => {
                GaussianElem::new(C64::new(1.0, 0.0), a.probe.unwrap_or(C64::new(0.0, 0.25)))
            }
        };
        let rep = fourier_identity_residual(kind, &base, probe)?;
        let mut c = check(rep.dev, a.th.threshold.unwrap_or(tol_default));
        c.details.insert("ratio".into(), complex(rep.ratio));
        c.details.insert("probe_quad".into(), complex(probe.quad));
        Ok(c)
    };
    Ok(run())
}

pub fn verify(cmd: &VerifyCmd, tol: &Tolerance) -> Result<RunReport, Usage> {
    let mut inputs = Inputs::new();
    let (name, outcome): (&str, qkzb::Result<Check>) = match cmd {
        VerifyCmd::GammaHeat(a) | VerifyCmd::GammaModular(a) => {
            put(&mut inputs, "t", a.t);
            put(&mut inputs, "tau", a.tau);
            put(&mut inputs, "p", a.p);
            let (name, kind, default) = match cmd {
                VerifyCmd::GammaHeat(_) => ("gamma-heat", GammaIdentity::Heat, 1e-9),
                _ => ("gamma-modular", GammaIdentity::Modular, 1e-8),
            };
            let r = verify_gamma_identity(kind, a.t, a.tau, a.p, tol)
                .map(|r| check(r, a.th.threshold.unwrap_or(default)));
            (name, r)
        }
        VerifyCmd::FourierQheat(a) => (
            "fourier-qheat",
            fourier(FourierIdentity::QHeat, a, 1e-8, &mut inputs)?,
        ),
        VerifyCmd::FourierModular(a) => (
            "fourier-modular",
            fourier(FourierIdentity::Modular, a, 1e-8, &mut inputs)?,
        ),
        VerifyCmd::Sl3(a) => {
            let x = a.x.point()?;
            let rel = Relation::parse(&a.relation).map_err(|e| Usage(e.to_string()))?;
            put(&mut inputs, "relation", &rel.name);
            put(&mut inputs, "x", show_x(&x));
            put(&mut inputs, "probes", a.probes);
            let default = if rel.name == "torsion4" { 1e-6 } else { 1e-8 };
            let r = BasePoint::new(x[0], x[1], x[2])
                .and_then(|b| verify_relation_auto(&rel, &b, a.probes))
                .map(|rep| {
                    let mut c = check(rep.max_dev, a.th.threshold.unwrap_or(default));
                    c.details.insert("ratio".into(), complex(rep.ratio));
                    c.details.insert("probes_used".into(), json!(rep.probes));
                    c
                });
            ("sl3", r)
        }
        VerifyCmd::ThetaBlock(a) => {
            put(&mut inputs, "kappa", a.kappa);
            put(&mut inputs, "lambda", a.lambda);
            put(&mut inputs, "tau", a.tau);
            put(&mut inputs, "eta", a.eta);
            let js: Vec<u32> = match a.j {
                Some(j) => {
                    put(&mut inputs, "j", j);
                    vec![j]
                }
                None => (0..2 * a.kappa).collect(),
            };
            let run = || -> qkzb::Result<Check> {
                let tau = uhp(a.tau)?;
                let mut worst = 0.0f64;
                for &j in &js {
                    worst = worst.max(theta_block_residual(
                        ThetaIndex::new(j, a.kappa)?,
                        a.lambda,
                        tau,
                        a.eta,
                        tol,
                    )?);
                }
                Ok(check(worst, a.th.threshold.unwrap_or(1e-8)))
            };
            ("theta-block", run())
        }
        VerifyCmd::ProjectiveFree(a) => {
            put(&mut inputs, "lambda", a.lambda);
            put(&mut inputs, "mu", a.mu);
            put(&mut inputs, "eta", a.eta);
            let run = || -> qkzb::Result<Check> {
                let proj = projective_residual_free(a.lambda, a.mu, a.eta)?;
                let mut c = check(proj, a.th.threshold.unwrap_or(1e-10));
                c.details.insert("projective".into(), real(proj));
                if let (Some(tau), Some(p)) = (a.tau, a.p) {
                    let t =
                        true_solution_residual(a.lambda, a.mu, tau, p, a.eta, PrefactorSign::Flat)?;
                    c.details.insert("true_solution".into(), real(t));
                    c.residual = c.residual.max(t);
                }
                Ok(c)
            };
            if let (Some(tau), Some(p)) = (a.tau, a.p) {
                put(&mut inputs, "tau", tau);
                put(&mut inputs, "p", p);
            }
            ("projective-free", run())
        }
        VerifyCmd::ProjectiveOne(a) => {
            put(&mut inputs, "lambda", a.lambda);
            put(&mut inputs, "mu", a.mu);
            put(&mut inputs, "tau", a.tau);
            put(&mut inputs, "p", a.p);
            put(&mut inputs, "eta", a.eta);
            let r = uhp(a.tau)
                .and_then(|tau| projective_residual_one(a.lambda, a.mu, tau, uhp(a.p)?, a.eta, tol))
                .map(|r| check(r, a.th.threshold.unwrap_or(1e-6)));
            ("projective-one", r)
        }
        VerifyCmd::Hermite(a) => {
            put(&mut inputs, "mu", a.mu);
            put(&mut inputs, "tau", a.tau);
            let grid: Vec<C64> = (0..12)
                .map(|k| C64::new(0.15 + 0.7 * k as f64 / 11.0, 0.0))
                .collect();
            let r = uhp(a.tau)
                .and_then(|tau| hermite_eigen(a.mu, tau, &grid, 1e-3, tol))
                .map(|rep| {
                    let mut c = check(rep.constancy_dev, a.th.threshold.unwrap_or(1e-6));
                    c.details
                        .insert("eigenvalue".into(), complex(rep.eigenvalue));
                    c.details.insert("t0".into(), complex(rep.t0));
                    c
                });
            ("hermite", r)
        }
        VerifyCmd::KzbResidual(a) => {
            put(&mut inputs, "m", a.m);
            a.heat.inputs(&mut inputs);
            let run = || -> qkzb::Result<Check> {
                let g = a.heat.spec()?;
                let kappa = C64::new(a.heat.kappa, 0.0);
                let tau = uhp(a.heat.tau)?;
                let r = if a.m == 0 {
                    let v = |l: C64, t: C64| Ok(g.eval(l, t));
                    kzb_residual(&v, a.heat.lambda, tau, kappa, 0, FdSteps::default(), tol)?
                } else {
                    let v = |l: C64, t: C64| {
                        hypergeom_m1(
                            a.heat.kappa,
                            g,
                            l,
                            uhp(t)?,
                            HypergeomOptions::default(),
                            tol,
                        )
                    };
                    kzb_residual(&v, a.heat.lambda, tau, kappa, 1, FdSteps::default(), tol)?
                };
                Ok(check(r, a.th.threshold.unwrap_or(1e-4)))
            };
            ("kzb-residual", run())
        }
        VerifyCmd::ModularMap(a) => {
            a.heat.inputs(&mut inputs);
            let run = || -> qkzb::Result<Check> {
                let g = a.heat.spec()?;
                let kappa = C64::new(a.heat.kappa, 0.0);
                let v = |l: C64, t: C64| Ok(g.eval(l, t));
                let w = modular_map_classical(&v, kappa);
                let r = kzb_residual(
                    &w,
                    a.heat.lambda,
                    uhp(a.heat.tau)?,
                    kappa,
                    0,
                    FdSteps::default(),
                    tol,
                )?;
                Ok(check(r, a.th.threshold.unwrap_or(1e-6)))
            };
            ("modular-map", run())
        }
        VerifyCmd::Semiclassical(a) => semiclassical(a, tol, &mut inputs)?,
    };
    let mut report = RunReport::new(format!("verify {name}"), inputs, 0.0);
    match outcome {
        Ok(c) => {
            report.residual = Some(c.residual);
            report.tolerance = c.threshold;
            report.pass = c.residual <= c.threshold;
            report.details = c.details;
        }
        Err(e) => report.fail_with(&e),
    }
    Ok(report)
}

fn semiclassical(
    a: &SemiclassicalArgs,
    tol: &Tolerance,
    inputs: &mut Inputs,
) -> Result<(&'static str, qkzb::Result<Check>), Usage> {
    if a.levels < 3 {
        return Err(Usage(format!(
            "--levels must be at least 3, got {}",
            a.levels
        )));
    }
    if a.eta_max.is_nan() || a.eta_max <= 0.0 {
        return Err(Usage(format!(
            "--eta-max must be positive, got {}",
            a.eta_max
        )));
    }
    let family = match a.family {
        FamilyArg::Free => Family::Free,
        FamilyArg::One => Family::One,
    };
    let solution = a.solution.unwrap_or(match a.family {
        FamilyArg::Free => SolutionArg::Heat,
        FamilyArg::One => SolutionArg::Hypergeom,
    });
    put(inputs, "family", format!("{:?}", a.family).to_lowercase());
    put(inputs, "solution", format!("{:?}", solution).to_lowercase());
    put(inputs, "eta_max", a.eta_max);
    put(inputs, "levels", a.levels);
    a.heat.inputs(inputs);
    let expect = a.expect_slope.unwrap_or(match solution {
        SolutionArg::Exp => 1.0,
        _ => 2.0,
    });
    let threshold = a.th.threshold.unwrap_or(match family {
        Family::Free => 0.1,
        Family::One => 0.2,
    });
    let etas: Vec<C64> = (0..a.levels)
        .map(|k| C64::new(0.0, -a.eta_max / 2f64.powi(k as i32)))
        .collect();
    let run = || -> qkzb::Result<Check> {
        let g = a.heat.spec()?;
        let tau = uhp(a.heat.tau)?;
        let opts = HypergeomOptions {
            gauge: HypergeomGauge::Theta,
            ..Default::default()
        };
        let heat = |l: C64, t: C64| Ok(g.eval(l, t));
        let hyper = |l: C64, t: C64| hypergeom_m1(a.heat.kappa, g, l, uhp(t)?, opts, tol);
        let exp = |l: C64, _: C64| Ok(l.exp());
        let v: &qkzb::spectral::Field<'_> = match solution {
            SolutionArg::Heat => &heat,
            SolutionArg::Hypergeom => &hyper,
            SolutionArg::Exp => &exp,
        };
        let rep = semiclassical_order(family, v, a.heat.lambda, tau, a.heat.kappa, &etas, tol)?;
        let mut c = check((rep.slope - expect).abs(), threshold);
        c.details.insert("slope".into(), real(rep.slope));
        c.details.insert("expected_slope".into(), real(expect));
        c.details.insert("rms".into(), real(rep.rms));
        c.details
            .insert("coeff_check".into(), real(rep.coeff_check));
        Ok(c)
    };
    Ok(("semiclassical", run()))
}
