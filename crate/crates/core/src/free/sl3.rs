use super::gaussian::GaussianElem;
use super::ops::{Factor, LinearOp};
use crate::error::{Error, Result};
use crate::C64;
use std::fmt;

pub type IntMat = [[i64; 3]; 3];

const IDENTITY: IntMat = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let mut m = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

/// A point `(x₁,x₂,x₃)` of `(ℂ∖{0})³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasePoint {
    pub x: [C64; 3],
}

impl BasePoint {
    pub fn new(x1: C64, x2: C64, x3: C64) -> Result<Self> {
        let x = [x1, x2, x3];
        if let Some(k) = x.iter().position(|z| z.norm() == 0.0) {
            return Err(Error::Domain(format!(
                "coordinate x{} of the base point is zero",
                k + 1
            )));
        }
        Ok(Self { x })
    }

    pub fn x1(&self) -> C64 {
        self.x[0]
    }
    pub fn x2(&self) -> C64 {
        self.x[1]
    }
    pub fn x3(&self) -> C64 {
        self.x[2]
    }

    /// `m·x`; fails if a coordinate of the image vanishes.
    pub fn act(&self, m: &IntMat) -> Result<Self> {
        let mut y = [C64::new(0.0, 0.0); 3];
        for (i, row) in m.iter().enumerate() {
            y[i] = (0..3).map(|k| self.x[k] * row[k] as f64).sum();
        }
        Self::new(y[0], y[1], y[2])
    }
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x[0], self.x[1], self.x[2])
    }
}

/// The elementary matrix `e_{i,j}` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElemGen {
    pub i: u8,
    pub j: u8,
    pub exp: i8,
}

impl ElemGen {
    pub fn new(i: u8, j: u8, exp: i8) -> Result<Self> {
        if !(1..=3).contains(&i) || !(1..=3).contains(&j) || i == j {
            return Err(Error::Domain(format!("no elementary matrix e_{{{i},{j}}}")));
        }
        if exp != 1 && exp != -1 {
            return Err(Error::Domain(format!(
                "generator exponent must be ±1, got {exp}"
            )));
        }
        Ok(Self { i, j, exp })
    }

    /// `e_{i,j}` with exponent +1. Panics on invalid indices; for literals.
    pub fn e(i: u8, j: u8) -> Self {
        Self::new(i, j, 1).expect("valid generator")
    }

    pub fn inv(self) -> Self {
        Self {
            exp: -self.exp,
            ..self
        }
    }

    pub fn matrix(&self) -> IntMat {
        let mut m = IDENTITY;
        m[self.i as usize - 1][self.j as usize - 1] = self.exp as i64;
        m
    }
}

impl fmt::Display for ElemGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "e{}{}", self.i, self.j)
        } else {
            write!(f, "e{}{}^-1", self.i, self.j)
        }
    }
}

pub type Word = Vec<ElemGen>;

pub fn word_matrix(w: &[ElemGen]) -> IntMat {
    w.iter().fold(IDENTITY, |m, g| mat_mul(&m, &g.matrix()))
}

pub fn word_to_string(w: &[ElemGen]) -> String {
    w.iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn nonzero(z: C64, what: &str) -> std::result::Result<C64, String> {
    if z.norm() == 0.0 {
        Err(format!("{what} vanishes"))
    } else {
        Ok(z)
    }
}

fn alpha(x3: C64) -> std::result::Result<Factor, String> {
    Ok(Factor::Alpha {
        x3: nonzero(x3, "alpha argument")?,
        inverse: false,
    })
}

fn beta(x1: C64, x2: C64, x3: C64, inverse: bool) -> std::result::Result<Factor, String> {
    Ok(Factor::Beta {
        x1,
        x2: nonzero(x2, "second beta argument")?,
        x3: nonzero(x3, "third beta argument")?,
        inverse,
    })
}

fn fourier(y: C64, inverse: bool) -> std::result::Result<Factor, String> {
    Ok(Factor::Fourier {
        y: nonzero(y, "U argument")?,
        inverse,
    })
}

/// The operator table for `e_{i,j}` at `x`. U depends only on its third
/// argument, so only that argument is stored.
fn phi_factors(i: u8, j: u8, x: &BasePoint) -> std::result::Result<Vec<Factor>, String> {
    let (x1, x2, x3) = (x.x1(), x.x2(), x.x3());
    Ok(match (i, j) {
        (1, 3) | (2, 3) => vec![],
        (1, 2) => vec![alpha(x3)?],
        (3, 2) => vec![beta(x1, x2 - x3, x3, false)?],
        (2, 1) => vec![alpha(x3)?, fourier(x3, false)?, alpha(x3)?],
        (3, 1) => vec![
            beta(x1 - x3, -x3, x2, true)?,
            fourier(x2, true)?,
            beta(x3, x2, x3 - x1, true)?,
        ],
        _ => unreachable!("validated generator"),
    })
}

/// φ_g(x) : F(g⁻¹x) → F(x). For an inverse generator this is
/// `φ_e(e·x)⁻¹`.
pub fn build_phi(gen: ElemGen, x: &BasePoint) -> Result<LinearOp> {
    let degenerate = |detail: String| Error::DegenerateBasePoint {
        prefix: gen.to_string(),
        detail,
    };
    if gen.exp == 1 {
        Ok(LinearOp::from_factors(
            phi_factors(gen.i, gen.j, x).map_err(degenerate)?,
        ))
    } else {
        let ex = x
            .act(&gen.inv().matrix())
            .map_err(|e| degenerate(e.to_string()))?;
        LinearOp::from_factors(phi_factors(gen.i, gen.j, &ex).map_err(degenerate)?).inverse()
    }
}

/// Φ(g·w′, x) = φ_g(x) ∘ Φ(w′, g⁻¹x).
pub fn path_operator(w: &[ElemGen], x: &BasePoint) -> Result<LinearOp> {
    let mut op = LinearOp::identity();
    let mut cur = *x;
    for (k, g) in w.iter().enumerate() {
        let prefix = word_to_string(&w[..=k]);
        let phi = build_phi(*g, &cur).map_err(|e| match e {
            Error::DegenerateBasePoint { detail, .. } => Error::DegenerateBasePoint {
                prefix: prefix.clone(),
                detail,
            },
            other => other,
        })?;
        op = op.then_after(&phi);
        cur = cur
            .act(&g.inv().matrix())
            .map_err(|e| Error::DegenerateBasePoint {
                prefix,
                detail: e.to_string(),
            })?;
    }
    Ok(op)
}

/// The Möbius map `f_{i,j}(x, t)` on fiber parameters.
pub fn moebius_f(i: u8, j: u8, x: &BasePoint, t: C64) -> Result<C64> {
    ElemGen::new(i, j, 1)?;
    let (x1, x2, x3) = (x.x1(), x.x2(), x.x3());
    let one = C64::new(1.0, 0.0);
    let (num, den) = match (i, j) {
        (1, 3) | (2, 3) => (t, one),
        (1, 2) => (t - 1.0, one),
        (3, 2) => (t * x3 + x1, x3 - x2),
        (2, 1) => (t, one - t),
        (3, 1) => (t * (x3 - x1), t * x2 + x3),
        _ => unreachable!(),
    };
    if den.norm() <= 1e-14 * num.norm().max(1.0) {
        return Err(Error::Pole(format!(
            "f_{{{i},{j}}} sends t = {t} to infinity"
        )));
    }
    Ok(num / den)
}

/// Applies φ_{i,j}(x) to the Gaussian with parameter `t_in` over `e⁻¹x` and
/// returns the parameter of the image over `x`.
pub fn propagate_fiber(i: u8, j: u8, x: &BasePoint, t_in: C64) -> Result<C64> {
    let g = ElemGen::new(i, j, 1)?;
    let src = x.act(&g.inv().matrix())?;
    let probe = GaussianElem::from_fiber(C64::new(1.0, 0.0), t_in, src.x3());
    let img = build_phi(g, x)?.apply_gaussian(probe)?;
    Ok(img.fiber_param(x.x3()))
}

/// A relation `lhs = rhs` in SL(3,ℤ).
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub name: String,
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    /// `e_{i,j} e_{k,l} = e_{k,l} e_{i,j}` for `i ≠ l`, `j ≠ k`.
    pub fn commute(ij: (u8, u8), kl: (u8, u8)) -> Result<Self> {
        let a = ElemGen::new(ij.0, ij.1, 1)?;
        let b = ElemGen::new(kl.0, kl.1, 1)?;
        if ij.0 == kl.1 || ij.1 == kl.0 || ij == kl {
            return Err(Error::Domain(format!(
                "{a} and {b} do not form a commuting pair"
            )));
        }
        Ok(Self {
            name: format!("comm{}{}_{}{}", ij.0, ij.1, kl.0, kl.1),
            lhs: vec![a, b],
            rhs: vec![b, a],
        })
    }

    /// `e_{i,j} e_{j,k} = e_{i,k} e_{j,k} e_{i,j}`.
    pub fn braid(i: u8, j: u8, k: u8) -> Result<Self> {
        if i == j || j == k || i == k {
            return Err(Error::Domain(format!(
                "braid indices {i},{j},{k} must be distinct"
            )));
        }
        Ok(Self {
            name: format!("braid{i}{j}{k}"),
            lhs: vec![ElemGen::new(i, j, 1)?, ElemGen::new(j, k, 1)?],
            rhs: vec![
                ElemGen::new(i, k, 1)?,
                ElemGen::new(j, k, 1)?,
                ElemGen::new(i, j, 1)?,
            ],
        })
    }

    /// `(e_{1,3} e_{3,1}⁻¹ e_{1,3})⁴ = 1`, the right side written as
    /// `e_{1,3} e_{1,3}⁻¹`.
    pub fn torsion4() -> Self {
        let s = [ElemGen::e(1, 3), ElemGen::e(3, 1).inv(), ElemGen::e(1, 3)];
        Self {
            name: "torsion4".into(),
            lhs: s.iter().copied().cycle().take(12).collect(),
            rhs: vec![ElemGen::e(1, 3), ElemGen::e(1, 3).inv()],
        }
    }

    /// All commuting pairs among the six generators, each once.
    pub fn all_commuting() -> Vec<Self> {
        let gens: Vec<(u8, u8)> = (1..=3u8)
            .flat_map(|i| (1..=3u8).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let mut out = Vec::new();
        for (a, &ij) in gens.iter().enumerate() {
            for &kl in &gens[a + 1..] {
                if let Ok(r) = Self::commute(ij, kl) {
                    out.push(r);
                }
            }
        }
        out
    }

    /// Parses `torsion4`, `braid321`, `braid:3,2,1`, `comm13_12` or
    /// `commute:13,12`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("unknown relation '{s}'"));
        let digits = |t: &str| -> Result<Vec<u8>> {
            t.chars()
                .filter(|c| c.is_ascii_digit())
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
                .collect()
        };
        if s == "torsion4" || s == "torsion" {
            return Ok(Self::torsion4());
        }
        if let Some(rest) = s.strip_prefix("braid") {
            let d = digits(rest)?;
            if d.len() != 3 {
                return Err(bad());
            }
            return Self::braid(d[0], d[1], d[2]);
        }
        let rest = s
            .strip_prefix("commute")
            .or_else(|| s.strip_prefix("comm"))
            .ok_or_else(bad)?;
        let d = digits(rest)?;
        if d.len() != 4 {
            return Err(bad());
        }
        Self::commute((d[0], d[1]), (d[2], d[3]))
    }
}

/// Outcome of a projective relation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationReport {
    /// Common scalar `Φ(lhs)/Φ(rhs)`.
    pub ratio: C64,
    /// Largest relative spread of the per-probe ratios, or mismatch of the
    /// quadratic and linear coefficients, whichever is larger.
    pub max_dev: f64,
    pub probes: usize,
}

/// Checks `Φ(lhs, x) = c·Φ(rhs, x)` on Gaussian probes.
pub fn verify_relation(
    lhs: &[ElemGen],
    rhs: &[ElemGen],
    x: &BasePoint,
    probes: &[GaussianElem],
) -> Result<RelationReport> {
    if word_matrix(lhs) != word_matrix(rhs) {
        return Err(Error::MatrixMismatch);
    }
    if probes.len() < 2 {
        return Err(Error::NoProbe("at least two probes are required".into()));
    }
    let l = path_operator(lhs, x)?;
    let r = path_operator(rhs, x)?;
    let mut ratios = Vec::with_capacity(probes.len());
    let mut coeff_dev = 0.0f64;
    for g in probes {
        let gl = l.apply_gaussian(*g)?;
        let gr = r.apply_gaussian(*g)?;
        let scale = gl.quad.norm().max(1.0);
        coeff_dev = coeff_dev
            .max((gl.quad - gr.quad).norm() / scale)
            .max((gl.lin - gr.lin).norm() / gl.lin.norm().max(1.0));
        ratios.push(gl.coeff / gr.coeff);
    }
    let r0 = ratios[0];
    let spread = ratios
        .iter()
        .map(|r| (r - r0).norm() / r0.norm())
        .fold(0.0, f64::max);
    Ok(RelationReport {
        ratio: r0,
        max_dev: spread.max(coeff_dev),
        probes: probes.len(),
    })
}

/// Candidate quadratic coefficients: the grid `(u + iv)/8`, `|u|,|v| ≤ 24`.
pub fn probe_candidates() -> impl Iterator<Item = C64> {
    (-24..=24).flat_map(|u| {
        (-24..=24)
            .filter(move |&v| (u, v) != (0, 0))
            .map(move |v| C64::new(u as f64 / 8.0, v as f64 / 8.0))
    })
}

/// Whether every Gaussian on the segment from quadratic coefficient `a` to
/// `b` is admissible for both operators.
///
/// The scalar of a projective identity is analytic in the probe, hence
/// constant only on a connected set of admissible probes; across a gap it may
/// change, e.g. by the sign of a square root.
pub fn probes_joined(lhs: &LinearOp, rhs: &LinearOp, a: C64, b: C64) -> bool {
    const SAMPLES: usize = 64;
    (0..=SAMPLES).all(|k| {
        let g = GaussianElem::new(
            C64::new(1.0, 0.0),
            a + (b - a) * (k as f64 / SAMPLES as f64),
        );
        lhs.apply_gaussian(g).is_ok() && rhs.apply_gaussian(g).is_ok()
    })
}

/// Picks `count` Gaussian probes for which every Fourier factor on both
/// sides converges, all from one connected piece of the admissible set.
///
/// The piece is the largest grid-connected component of admissible
/// [`probe_candidates`]. Its point nearest the centroid is the anchor, and
/// the probes are spread evenly over the points joined to the anchor by an
/// admissible segment.
pub fn find_probes(lhs: &LinearOp, rhs: &LinearOp, count: usize) -> Result<Vec<GaussianElem>> {
    const R: i32 = 24;
    let side = (2 * R + 1) as usize;
    let index = |u: i32, v: i32| (u + R) as usize * side + (v + R) as usize;
    let quad = |u: i32, v: i32| C64::new(u as f64 / 8.0, v as f64 / 8.0);
    let mut ok = vec![false; side * side];
    for u in -R..=R {
        for v in -R..=R {
            if (u, v) != (0, 0) {
                let g = GaussianElem::new(C64::new(1.0, 0.0), quad(u, v));
                ok[index(u, v)] = lhs.apply_gaussian(g).is_ok() && rhs.apply_gaussian(g).is_ok();
            }
        }
    }
    let mut seen = vec![false; side * side];
    let mut best: Vec<(i32, i32)> = Vec::new();
    for u in -R..=R {
        for v in -R..=R {
            if !ok[index(u, v)] || seen[index(u, v)] {
                continue;
            }
            seen[index(u, v)] = true;
            let mut comp = vec![(u, v)];
            let mut k = 0;
            while k < comp.len() {
                let (cu, cv) = comp[k];
                k += 1;
                for (nu, nv) in [(cu + 1, cv), (cu - 1, cv), (cu, cv + 1), (cu, cv - 1)] {
                    if nu.abs() <= R && nv.abs() <= R && ok[index(nu, nv)] && !seen[index(nu, nv)] {
                        seen[index(nu, nv)] = true;
                        comp.push((nu, nv));
                    }
                }
            }
            if comp.len() > best.len() {
                best = comp;
            }
        }
    }
    if best.len() < 2 || count < 2 {
        return Err(Error::NoProbe(format!(
            "{} connected admissible grid probes for {lhs} vs {rhs}",
            best.len()
        )));
    }
    best.sort_unstable();
    let n = best.len() as f64;
    let centroid = best.iter().map(|&(u, v)| quad(u, v)).sum::<C64>() / n;
    let anchor = best
        .iter()
        .map(|&(u, v)| quad(u, v))
        .min_by(|a, b| (a - centroid).norm().total_cmp(&(b - centroid).norm()))
        .unwrap_or(centroid);
    let joined: Vec<C64> = best
        .iter()
        .map(|&(u, v)| quad(u, v))
        .filter(|&a| a == anchor || probes_joined(lhs, rhs, anchor, a))
        .collect();
    if joined.len() < 2 {
        return Err(Error::NoProbe(format!(
            "no probe joined to {anchor} for {lhs} vs {rhs}"
        )));
    }
    let m = count.min(joined.len());
    Ok((0..m)
        .map(|k| GaussianElem::new(C64::new(1.0, 0.0), joined[k * (joined.len() - 1) / (m - 1)]))
        .collect())
}

/// [`verify_relation`] with probes chosen by [`find_probes`].
pub fn verify_relation_auto(rel: &Relation, x: &BasePoint, count: usize) -> Result<RelationReport> {
    let l = path_operator(&rel.lhs, x)?;
    let r = path_operator(&rel.rhs, x)?;
    let probes = find_probes(&l, &r, count)?;
    verify_relation(&rel.lhs, &rel.rhs, x, &probes)
}
