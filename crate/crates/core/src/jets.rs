//! Third-order jets of candidate potentials φ: ℝ³ → ℝ.
//!
//! A [`Jet3`] (value, gradient, Hessian, third derivatives at a point) is the
//! single input everything downstream consumes: the Hessian realizes the Gram
//! matrix C of the torus directions, and the third derivatives provide dC,
//! which the coframe exterior derivative needs. [`PhiFamily`] is a named
//! provider of jets — exact for polynomial and radial profiles, composed
//! central differences for black-box scalar fields.

use std::sync::Arc;

use thiserror::Error;

use crate::radial::{RadialError, RadialSource};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetsError {
    #[error("non-finite value of φ at ({0}, {1}, {2})")]
    NonFinite(f64, f64, f64),
    #[error("cannot parse polynomial line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("family '{0}' has no exact jet; use finite-difference mode")]
    ExactUnavailable(String),
    #[error(transparent)]
    Radial(#[from] RadialError),
}

/// A point of the moment-coordinate quotient U ⊂ ℝ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3(pub [f64; 3]);

impl Point3 {
    pub fn new(y1: f64, y2: f64, y3: f64) -> Self {
        Point3([y1, y2, y3])
    }

    pub fn origin() -> Self {
        Point3([0.0; 3])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// r² = y₁² + y₂² + y₃²
    pub fn r2(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.r2().sqrt()
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(v: [f64; 3]) -> Self {
        Point3(v)
    }
}

impl std::ops::Index<usize> for Point3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Third-order Taylor data of φ at a point. The Hessian is stored exactly
/// symmetric and the third derivatives exactly symmetric under all index
/// permutations (enforced by the constructor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub phi: f64,
    pub grad: [f64; 3],
    pub hess: [[f64; 3]; 3],
    pub third: [[[f64; 3]; 3]; 3],
}

impl Jet3 {
    pub fn new(phi: f64, grad: [f64; 3], hess: [[f64; 3]; 3], third: [[[f64; 3]; 3]; 3]) -> Self {
        let mut h = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let v = 0.5 * (hess[i][j] + hess[j][i]);
                h[i][j] = v;
                h[j][i] = v;
            }
        }
        let mut t = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                for k in j..3 {
                    let v = (third[i][j][k]
                        + third[i][k][j]
                        + third[j][i][k]
                        + third[j][k][i]
                        + third[k][i][j]
                        + third[k][j][i])
                        / 6.0;
                    t[i][j][k] = v;
                    t[i][k][j] = v;
                    t[j][i][k] = v;
                    t[j][k][i] = v;
                    t[k][i][j] = v;
                    t[k][j][i] = v;
                }
            }
        }
        Jet3 {
            phi,
            grad,
            hess: h,
            third: t,
        }
    }

    /// Radial derivative ∂_rφ = Σ y_i ∂φ/∂y_i at the base point.
    pub fn radial_derivative(&self, y: Point3) -> f64 {
        (0..3).map(|i| y[i] * self.grad[i]).sum()
    }

    /// The quadratic form ᵗVCV = Σ y_i C_ij y_j.
    pub fn vcv(&self, y: Point3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += y[i] * self.hess[i][j] * y[j];
            }
        }
        s
    }

    pub fn det_hess(&self) -> f64 {
        let h = &self.hess;
        h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
            - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
            + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0])
    }
}

/// Trivariate polynomial Σ c·y₁^i y₂^j y₃^k with exact jets.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly3 {
    terms: Vec<([u32; 3], f64)>,
}

impl Poly3 {
    pub fn new(terms: Vec<([u32; 3], f64)>) -> Self {
        Poly3 { terms }
    }

    /// Parses "i j k coeff" lines; blank lines and '#' comments are skipped.
    pub fn parse(text: &str) -> Result<Self, JetsError> {
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(JetsError::Parse {
                    line: idx + 1,
                    reason: format!("expected 4 fields, found {}", fields.len()),
                });
            }
            let mut e = [0u32; 3];
            for (slot, field) in e.iter_mut().zip(&fields[..3]) {
                *slot = field.parse().map_err(|_| JetsError::Parse {
                    line: idx + 1,
                    reason: format!("bad exponent '{field}'"),
                })?;
            }
            let c: f64 = fields[3].parse().map_err(|_| JetsError::Parse {
                line: idx + 1,
                reason: format!("bad coefficient '{}'", fields[3]),
            })?;
            terms.push((e, c));
        }
        Ok(Poly3 { terms })
    }

    pub fn eval(&self, y: Point3) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * y[0].powi(e[0] as i32) * y[1].powi(e[1] as i32) * y[2].powi(e[2] as i32)
            })
            .sum()
    }

    /// Value of ∂^|d| / ∂y^d of one monomial, with falling-factorial
    /// coefficients; exact for any derivative order.
    fn monomial_derivative(e: [u32; 3], c: f64, d: [u32; 3], y: Point3) -> f64 {
        let mut v = c;
        for axis in 0..3 {
            if d[axis] > e[axis] {
                return 0.0;
            }
            let mut p = e[axis];
            for _ in 0..d[axis] {
                v *= p as f64;
                p -= 1;
            }
            v *= y[axis].powi(p as i32);
        }
        v
    }

    fn derivative(&self, d: [u32; 3], y: Point3) -> f64 {
        self.terms
            .iter()
            .map(|&(e, c)| Self::monomial_derivative(e, c, d, y))
            .sum()
    }

    pub fn jet(&self, y: Point3) -> Jet3 {
        let unit = |i: usize| -> [u32; 3] {
            let mut d = [0; 3];
            d[i] = 1;
            d
        };
        let mut grad = [0.0; 3];
        let mut hess = [[0.0; 3]; 3];
        let mut third = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            grad[i] = self.derivative(unit(i), y);
            for j in 0..3 {
                let mut d2 = unit(i);
                d2[j] += 1;
                hess[i][j] = self.derivative(d2, y);
                for k in 0..3 {
                    let mut d3 = d2;
                    d3[k] += 1;
                    third[i][j][k] = self.derivative(d3, y);
                }
            }
        }
        Jet3::new(self.eval(y), grad, hess, third)
    }
}

/// How a family produces jets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffMode {
    ExactTaylor,
    FiniteDifference,
}

#[derive(Clone)]
enum FamilyKind {
    Poly(Poly3),
    Radial(Arc<dyn RadialSource>),
    BlackBox(Arc<dyn Fn(Point3) -> f64 + Send + Sync>),
}

/// A named provider of third-order jets at arbitrary points.
///
/// Polynomial and radial families evaluate jets exactly; any family can be
/// switched to finite-difference mode (composed central differences, O(h²))
/// for cross-checks. Evaluators are pure and safe to share across threads.
#[derive(Clone)]
pub struct PhiFamily {
    name: String,
    kind: FamilyKind,
    mode: DiffMode,
    fd_step: Option<f64>,
}

impl std::fmt::Debug for PhiFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PhiFamily")
            .field("name", &self.name)
            .field("mode", &self.mode)
            .finish()
    }
}

impl PhiFamily {
    pub fn polynomial(name: impl Into<String>, poly: Poly3) -> Self {
        PhiFamily {
            name: name.into(),
            kind: FamilyKind::Poly(poly),
            mode: DiffMode::ExactTaylor,
            fd_step: None,
        }
    }

    pub fn radial(name: impl Into<String>, source: Arc<dyn RadialSource>) -> Self {
        PhiFamily {
            name: name.into(),
            kind: FamilyKind::Radial(source),
            mode: DiffMode::ExactTaylor,
            fd_step: None,
        }
    }

    /// A black-box scalar field; jets always come from finite differences.
    pub fn black_box(
        name: impl Into<String>,
        f: impl Fn(Point3) -> f64 + Send + Sync + 'static,
    ) -> Self {
        PhiFamily {
            name: name.into(),
            kind: FamilyKind::BlackBox(Arc::new(f)),
            mode: DiffMode::FiniteDifference,
            fd_step: None,
        }
    }

    pub fn with_mode(mut self, mode: DiffMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        assert!(h > 0.0, "finite-difference step must be positive");
        self.fd_step = Some(h);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mode(&self) -> DiffMode {
        self.mode
    }

    /// Step used in finite-difference mode: explicit override or the default
    /// rule h = 1e-3·max(1, ‖y‖).
    pub fn fd_step_at(&self, y: Point3) -> f64 {
        self.fd_step.unwrap_or_else(|| 1e-3 * y.norm().max(1.0))
    }

    pub fn value(&self, y: Point3) -> Result<f64, JetsError> {
        match &self.kind {
            FamilyKind::Poly(p) => Ok(p.eval(y)),
            FamilyKind::Radial(src) => Ok(src.radial_jet(y.r2() / 2.0)?.x),
            FamilyKind::BlackBox(f) => {
                let v = f(y);
                if !v.is_finite() {
                    return Err(JetsError::NonFinite(y[0], y[1], y[2]));
                }
                Ok(v)
            }
        }
    }

    pub fn jet(&self, y: Point3) -> Result<Jet3, JetsError> {
        match self.mode {
            DiffMode::ExactTaylor => match &self.kind {
                FamilyKind::Poly(p) => Ok(p.jet(y)),
                FamilyKind::Radial(src) => radial_chain_rule(src.as_ref(), y),
                FamilyKind::BlackBox(_) => Err(JetsError::ExactUnavailable(self.name.clone())),
            },
            DiffMode::FiniteDifference => {
                finite_difference_jet_checked(|p| self.value(p), y, self.fd_step_at(y))
            }
        }
    }
}

/// The potential of the homogeneous structure on S³×S³:
/// φ = (1/3)(y₁²+y₂²+y₃²) + (1/√3)·y₁y₂y₃ + 1/9.
pub fn s3s3_phi() -> PhiFamily {
    let third = 1.0 / 3.0;
    let c3 = 1.0 / 3.0f64.sqrt();
    PhiFamily::polynomial(
        "s3s3",
        Poly3::new(vec![
            ([2, 0, 0], third),
            ([0, 2, 0], third),
            ([0, 0, 2], third),
            ([1, 1, 1], c3),
            ([0, 0, 0], 1.0 / 9.0),
        ]),
    )
}

/// Radial potential φ(y) = x(r²/2) with jets assembled by the chain rule:
/// grad = x′y, Hess = x′·Id + x″·y·yᵀ,
/// ∂³φ = x″(δ_ij y_k + δ_jk y_i + δ_ki y_j) + x‴ y_i y_j y_k.
pub fn radial_phi(name: impl Into<String>, source: Arc<dyn RadialSource>) -> PhiFamily {
    PhiFamily::radial(name, source)
}

fn radial_chain_rule(src: &dyn RadialSource, y: Point3) -> Result<Jet3, JetsError> {
    let t = y.r2() / 2.0;
    let rj = src.radial_jet(t)?;
    let mut grad = [0.0; 3];
    let mut hess = [[0.0; 3]; 3];
    let mut third = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        grad[i] = rj.xp * y[i];
        for j in 0..3 {
            let delta_ij = if i == j { 1.0 } else { 0.0 };
            hess[i][j] = rj.xp * delta_ij + rj.xpp * y[i] * y[j];
            for k in 0..3 {
                let delta_jk = if j == k { 1.0 } else { 0.0 };
                let delta_ki = if k == i { 1.0 } else { 0.0 };
                third[i][j][k] = rj.xpp * (delta_ij * y[k] + delta_jk * y[i] + delta_ki * y[j])
                    + rj.xppp * y[i] * y[j] * y[k];
            }
        }
    }
    Ok(Jet3::new(rj.x, grad, hess, third))
}

/// Central-difference jet of a scalar field, O(h²) in every entry.
///
/// Each derivative is a composition of the central-difference operator
/// D_i g(y) = (g(y+h e_i) − g(y−h e_i)) / 2h, which stays well-defined for
/// repeated indices (the stencil widens); the output is symmetrized so the
/// `Jet3` invariants hold exactly.
pub fn finite_difference_jet(
    f: impl Fn(Point3) -> f64,
    y: Point3,
    h: f64,
) -> Result<Jet3, JetsError> {
    finite_difference_jet_checked(
        |p| {
            let v = f(p);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(JetsError::NonFinite(p[0], p[1], p[2]))
            }
        },
        y,
        h,
    )
}

fn finite_difference_jet_checked(
    f: impl Fn(Point3) -> Result<f64, JetsError>,
    y: Point3,
    h: f64,
) -> Result<Jet3, JetsError> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let shift = |mut p: Point3, axis: usize, s: f64| {
        p.0[axis] += s * h;
        p
    };
    let phi = f(y)?;

    let mut grad = [0.0; 3];
    for i in 0..3 {
        grad[i] = (f(shift(y, i, 1.0))? - f(shift(y, i, -1.0))?) / (2.0 * h);
    }

    let mut hess = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let mut acc = 0.0;
            for si in [1.0, -1.0] {
                for sj in [1.0, -1.0] {
                    acc += si * sj * f(shift(shift(y, i, si), j, sj))?;
                }
            }
            hess[i][j] = acc / (4.0 * h * h);
            hess[j][i] = hess[i][j];
        }
    }

    let mut third = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            for k in j..3 {
                let mut acc = 0.0;
                for si in [1.0, -1.0] {
                    for sj in [1.0, -1.0] {
                        for sk in [1.0, -1.0] {
                            acc += si * sj * sk * f(shift(shift(shift(y, i, si), j, sj), k, sk))?;
                        }
                    }
                }
                let v = acc / (8.0 * h * h * h);
                third[i][j][k] = v;
                third[i][k][j] = v;
                third[j][i][k] = v;
                third[j][k][i] = v;
                third[k][i][j] = v;
                third[k][j][i] = v;
            }
        }
    }

    Ok(Jet3::new(phi, grad, hess, third))
}
