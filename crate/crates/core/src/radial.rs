//! Radial reduction of the Monge–Ampère-type equation.
//!
//! For potentials of the form φ(y) = x(r²/2) the equation collapses to the
//! second-order ODE x″ = F(t, x, x′) with
//!
//! ```text
//! F(t, p, q) = (8p − (10tq + 3q³)) / (6(q²t − 2t²)),
//! ```
//!
//! valid away from the singular locus q² = 2t. Initial data inside the wedge
//! 𝒮 = {t > 0, p > 2tq > 2t√(2t)} produce solutions whose admissible set is
//! U₀ = {t > 0 | x(t) > 2tx′(t) > 2t√(2t)}. This module provides the
//! right-hand side and its analytic partials, an embedded Dormand–Prince 4(5)
//! integrator with event detection (leaving 𝒮, approaching the singular
//! locus, step underflow), cubic Hermite dense output, and the admissible
//! window extraction.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadialError {
    #[error("singular denominator at t={t}: x'²·t − 2t² ≈ 0")]
    Singular { t: f64 },
    #[error("initial data (t={t}, x={x}, x'={xp}) outside the admissible wedge")]
    OutsideWedge { t: f64, x: f64, xp: f64 },
    #[error("t={t} outside the solution domain [{t0}, {t1}]")]
    OutOfDomain { t: f64, t0: f64, t1: f64 },
    #[error("invalid integration span: t_end={t_end} < t0={t0}")]
    InvalidSpan { t0: f64, t_end: f64 },
    #[error("step budget of {0} steps exhausted")]
    MaxSteps(usize),
    #[error("trajectory data is not strictly increasing in t or is empty")]
    BadTrajectory,
}

/// Tolerance below which |x′²·t − 2t²| counts as singular.
pub fn singularity_tolerance(t: f64) -> f64 {
    1e-10 * t.mul_add(t, 0.0).max(1.0)
}

/// Right-hand side of the radial ODE: x″ = F(t, x, x′).
pub fn rhs(t: f64, x: f64, xp: f64) -> Result<f64, RadialError> {
    let den_core = xp * xp * t - 2.0 * t * t;
    if den_core.abs() < singularity_tolerance(t) {
        return Err(RadialError::Singular { t });
    }
    Ok((8.0 * x - (10.0 * t * xp + 3.0 * xp * xp * xp)) / (6.0 * den_core))
}

/// Analytic partials (F_t, F_p, F_q) of the right-hand side.
pub fn rhs_partials(t: f64, x: f64, xp: f64) -> Result<(f64, f64, f64), RadialError> {
    let den_core = xp * xp * t - 2.0 * t * t;
    if den_core.abs() < singularity_tolerance(t) {
        return Err(RadialError::Singular { t });
    }
    let n = 8.0 * x - 10.0 * t * xp - 3.0 * xp * xp * xp;
    let d = 6.0 * den_core;
    let n_t = -10.0 * xp;
    let n_q = -10.0 * t - 9.0 * xp * xp;
    let d_t = 6.0 * (xp * xp - 4.0 * t);
    let d_q = 12.0 * xp * t;
    let d2 = d * d;
    Ok(((n_t * d - n * d_t) / d2, 8.0 / d, (n_q * d - n * d_q) / d2))
}

/// Third derivative along a trajectory of the ODE:
/// x‴ = dF/dt = F_t + F_p·x′ + F_q·F.
pub fn third_derivative(t: f64, x: f64, xp: f64) -> Result<f64, RadialError> {
    let f = rhs(t, x, xp)?;
    let (f_t, f_p, f_q) = rhs_partials(t, x, xp)?;
    Ok(f_t + f_p * xp + f_q * f)
}

/// Membership in the wedge 𝒮 = {t > 0, p > 2tq > 2t√(2t)} (strict).
pub fn in_s(t: f64, p: f64, q: f64) -> bool {
    if t <= 0.0 {
        return false;
    }
    let tq2 = 2.0 * t * q;
    p > tq2 && tq2 > 2.0 * t * (2.0 * t).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateFlags {
    pub in_s: bool,
    pub near_singularity: bool,
}

/// A point (t, x, x′) of the reduced problem with its admissibility flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialState {
    pub t: f64,
    pub x: f64,
    pub xp: f64,
    pub flags: StateFlags,
}

impl RadialState {
    pub fn new(t: f64, x: f64, xp: f64) -> Self {
        let near = (xp * xp * t - 2.0 * t * t).abs() < singularity_tolerance(t);
        RadialState {
            t,
            x,
            xp,
            flags: StateFlags {
                in_s: in_s(t, x, xp),
                near_singularity: near,
            },
        }
    }
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ReachedTEnd,
    LeftS,
    HitSingularity,
    StepUnderflow,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::ReachedTEnd => "reached_t_end",
            Termination::LeftS => "left_S",
            Termination::HitSingularity => "hit_singularity",
            Termination::StepUnderflow => "step_underflow",
        }
    }
}

impl std::fmt::Display for Termination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Integrator controls. `fixed_step` disables the error control (used by the
/// convergence-order checks).
#[derive(Debug, Clone, Copy)]
pub struct Controls {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
    pub fixed_step: Option<f64>,
}

impl Default for Controls {
    fn default() -> Self {
        Controls {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: 2e-3,
            max_steps: 2_000_000,
            fixed_step: None,
        }
    }
}

/// One accepted node of a trajectory. `xpp` is the ODE right-hand side at the
/// node (used as the Hermite slope of x′).
#[derive(Debug, Clone, Copy)]
pub struct RadialNode {
    pub t: f64,
    pub x: f64,
    pub xp: f64,
    pub xpp: f64,
}

/// An integrated trajectory with cubic Hermite dense output between nodes.
#[derive(Debug, Clone)]
pub struct RadialSolution {
    nodes: Vec<RadialNode>,
    termination: Termination,
}

/// Third-order data of the radial profile at a given t = r²/2.
#[derive(Debug, Clone, Copy)]
pub struct RadialJet {
    pub x: f64,
    pub xp: f64,
    pub xpp: f64,
    pub xppp: f64,
}

/// Provider of third-order radial data; implemented by integrated
/// trajectories and by closed-form profiles.
pub trait RadialSource: Send + Sync {
    fn radial_jet(&self, t: f64) -> Result<RadialJet, RadialError>;
}

/// Closed-form radial profile x(t) = c·t^l. Covers the exact test profiles
/// and the power-law solutions x = ±(2√2/9)·t^{3/2} and x = k·t^{1/2}.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawRadial {
    pub coeff: f64,
    pub exponent: f64,
}

impl PowerLawRadial {
    pub fn new(coeff: f64, exponent: f64) -> Self {
        PowerLawRadial { coeff, exponent }
    }

    pub fn x(&self, t: f64) -> f64 {
        self.coeff * t.powf(self.exponent)
    }

    pub fn xp(&self, t: f64) -> f64 {
        let l = self.exponent;
        self.coeff * l * t.powf(l - 1.0)
    }

    pub fn xpp(&self, t: f64) -> f64 {
        let l = self.exponent;
        self.coeff * l * (l - 1.0) * t.powf(l - 2.0)
    }
}

impl RadialSource for PowerLawRadial {
    fn radial_jet(&self, t: f64) -> Result<RadialJet, RadialError> {
        if t <= 0.0 {
            return Err(RadialError::OutOfDomain {
                t,
                t0: 0.0,
                t1: f64::INFINITY,
            });
        }
        let l = self.exponent;
        Ok(RadialJet {
            x: self.x(t),
            xp: self.xp(t),
            xpp: self.xpp(t),
            xppp: self.coeff * l * (l - 1.0) * (l - 2.0) * t.powf(l - 3.0),
        })
    }
}

impl RadialSolution {
    /// Builds a solution from explicit nodes, e.g. sampled from a closed-form
    /// profile. Nodes must be strictly increasing in t.
    pub fn from_nodes(nodes: Vec<RadialNode>) -> Result<Self, RadialError> {
        if nodes.is_empty() || nodes.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(RadialError::BadTrajectory);
        }
        Ok(RadialSolution {
            nodes,
            termination: Termination::ReachedTEnd,
        })
    }

    /// Builds a solution from raw (t, x, x′) samples (e.g. a reloaded
    /// trajectory file). Node slopes x″ are recovered from the ODE.
    pub fn from_samples(samples: &[(f64, f64, f64)]) -> Result<Self, RadialError> {
        if samples.is_empty() {
            return Err(RadialError::BadTrajectory);
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(RadialError::BadTrajectory);
        }
        let mut nodes = Vec::with_capacity(samples.len());
        for &(t, x, xp) in samples {
            let xpp = rhs(t, x, xp).unwrap_or(0.0);
            nodes.push(RadialNode { t, x, xp, xpp });
        }
        Ok(RadialSolution {
            nodes,
            termination: Termination::ReachedTEnd,
        })
    }

    pub fn nodes(&self) -> &[RadialNode] {
        &self.nodes
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn t_start(&self) -> f64 {
        self.nodes[0].t
    }

    pub fn t_end(&self) -> f64 {
        self.nodes[self.nodes.len() - 1].t
    }

    fn interval_of(&self, t: f64) -> Result<usize, RadialError> {
        if t < self.t_start() || t > self.t_end() {
            return Err(RadialError::OutOfDomain {
                t,
                t0: self.t_start(),
                t1: self.t_end(),
            });
        }
        // rightmost interval whose left node is <= t
        let idx = self
            .nodes
            .partition_point(|n| n.t <= t)
            .saturating_sub(1)
            .min(self.nodes.len().saturating_sub(2));
        Ok(idx)
    }

    /// Dense output (x, x′) by cubic Hermite interpolation: x from (x, x′)
    /// node data, x′ from (x′, x″) node data.
    pub fn eval(&self, t: f64) -> Result<(f64, f64), RadialError> {
        if self.nodes.len() == 1 {
            let n = self.nodes[0];
            if t == n.t {
                return Ok((n.x, n.xp));
            }
            return Err(RadialError::OutOfDomain {
                t,
                t0: n.t,
                t1: n.t,
            });
        }
        let i = self.interval_of(t)?;
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        let x = hermite(t, a.t, b.t, a.x, a.xp, b.x, b.xp);
        let xp = hermite(t, a.t, b.t, a.xp, a.xpp, b.xp, b.xpp);
        Ok((x, xp))
    }

    /// x″ estimated as the derivative of the Hermite interpolant of x′.
    /// Independent of the ODE right-hand side; used by the residual oracles.
    pub fn xpp_from_interpolant(&self, t: f64) -> Result<f64, RadialError> {
        if self.nodes.len() == 1 {
            return Ok(self.nodes[0].xpp);
        }
        let i = self.interval_of(t)?;
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        Ok(hermite_derivative(t, a.t, b.t, a.xp, a.xpp, b.xp, b.xpp))
    }
}

impl RadialSource for RadialSolution {
    fn radial_jet(&self, t: f64) -> Result<RadialJet, RadialError> {
        let (x, xp) = self.eval(t)?;
        let xpp = rhs(t, x, xp)?;
        let xppp = third_derivative(t, x, xp)?;
        Ok(RadialJet { x, xp, xpp, xppp })
    }
}

fn hermite(t: f64, t0: f64, t1: f64, v0: f64, d0: f64, v1: f64, d1: f64) -> f64 {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * v0
        + (s3 - 2.0 * s2 + s) * h * d0
        + (-2.0 * s3 + 3.0 * s2) * v1
        + (s3 - s2) * h * d1
}

fn hermite_derivative(t: f64, t0: f64, t1: f64, v0: f64, d0: f64, v1: f64, d1: f64) -> f64 {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    ((6.0 * s2 - 6.0 * s) * v0 / h)
        + (3.0 * s2 - 4.0 * s + 1.0) * d0
        + ((-6.0 * s2 + 6.0 * s) * v1 / h)
        + (3.0 * s2 - 2.0 * s) * d1
}

// Dormand–Prince 4(5) tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

type State2 = [f64; 2];

fn system_rhs(t: f64, y: &State2) -> Result<State2, RadialError> {
    Ok([y[1], rhs(t, y[0], y[1])?])
}

struct StepOutcome {
    y_new: State2,
    err_est: State2,
    k_end: State2,
}

fn dp45_step(t: f64, y: &State2, h: f64) -> Result<StepOutcome, RadialError> {
    let mut k = [[0.0f64; 2]; 7];
    k[0] = system_rhs(t, y)?;
    for stage in 1..7 {
        let mut ys = *y;
        for j in 0..stage {
            let a = DP_A[stage - 1][j];
            if a != 0.0 {
                ys[0] += h * a * k[j][0];
                ys[1] += h * a * k[j][1];
            }
        }
        k[stage] = system_rhs(t + DP_C[stage] * h, &ys)?;
    }
    let mut y_new = *y;
    let mut err = [0.0f64; 2];
    for (j, kj) in k.iter().enumerate() {
        y_new[0] += h * DP_B5[j] * kj[0];
        y_new[1] += h * DP_B5[j] * kj[1];
        let de = DP_B5[j] - DP_B4[j];
        err[0] += h * de * kj[0];
        err[1] += h * de * kj[1];
    }
    Ok(StepOutcome {
        y_new,
        err_est: err,
        k_end: k[6],
    })
}

fn step_floor(t: f64) -> f64 {
    1e-12 * t.abs().max(1.0)
}

/// Locates the first zero of `g` in (t0, t1] by bisection on the interpolant,
/// assuming g(t0) > 0 >= g(t1). Refined to 1e-10 in t.
fn bisect_crossing(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= 1e-10 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Adaptive integration of x″ = F from `initial` towards `t_end`.
///
/// Terminates at `t_end` or at the first event among: leaving 𝒮 through
/// x = 2tx′, approaching the singular locus x′² = 2t within tolerance, or
/// step underflow. Event locations are refined by bisection to 1e-10 in t.
pub fn integrate(
    initial: RadialState,
    t_end: f64,
    controls: &Controls,
) -> Result<RadialSolution, RadialError> {
    if !in_s(initial.t, initial.x, initial.xp) {
        return Err(RadialError::OutsideWedge {
            t: initial.t,
            x: initial.x,
            xp: initial.xp,
        });
    }
    if t_end < initial.t {
        return Err(RadialError::InvalidSpan {
            t0: initial.t,
            t_end,
        });
    }

    let first_xpp = rhs(initial.t, initial.x, initial.xp)?;
    let mut nodes = vec![RadialNode {
        t: initial.t,
        x: initial.x,
        xp: initial.xp,
        xpp: first_xpp,
    }];
    if t_end == initial.t {
        return Ok(RadialSolution {
            nodes,
            termination: Termination::ReachedTEnd,
        });
    }

    let mut t = initial.t;
    let mut y: State2 = [initial.x, initial.xp];
    let span = t_end - initial.t;
    let mut h = match controls.fixed_step {
        Some(h0) => h0,
        None => controls.max_step.min(span / 10.0).max(step_floor(t)),
    };
    let mut err_prev: f64 = 1e-4;
    let mut steps = 0usize;
    let mut singular_pressure = false;

    let termination = loop {
        steps += 1;
        if steps > controls.max_steps {
            return Err(RadialError::MaxSteps(controls.max_steps));
        }
        if t + h > t_end {
            h = t_end - t;
        }

        let outcome = match dp45_step(t, &y, h) {
            Ok(o) => o,
            Err(RadialError::Singular { .. }) => {
                // a stage probed inside the singular band: shrink towards it
                singular_pressure = true;
                h *= 0.5;
                if h < step_floor(t) {
                    break Termination::HitSingularity;
                }
                continue;
            }
            Err(e) => return Err(e),
        };

        if controls.fixed_step.is_none() {
            let sc0 = controls.atol + controls.rtol * y[0].abs().max(outcome.y_new[0].abs());
            let sc1 = controls.atol + controls.rtol * y[1].abs().max(outcome.y_new[1].abs());
            let e0 = outcome.err_est[0] / sc0;
            let e1 = outcome.err_est[1] / sc1;
            let err = (0.5 * (e0 * e0 + e1 * e1)).sqrt();
            if err > 1.0 {
                let factor = (0.9 * err.powf(-0.17)).clamp(0.1, 0.9);
                h *= factor;
                if h < step_floor(t) {
                    break if singular_pressure {
                        Termination::HitSingularity
                    } else {
                        Termination::StepUnderflow
                    };
                }
                continue;
            }
            let factor = (0.9 * err.powf(-0.17) * err_prev.powf(0.04)).clamp(0.2, 5.0);
            err_prev = err.max(1e-4);
            singular_pressure = false;
            let t_new = t + h;
            h = (h * factor).min(controls.max_step);
            t = t_new;
        } else {
            t += h;
        }

        y = outcome.y_new;
        nodes.push(RadialNode {
            t,
            x: y[0],
            xp: y[1],
            xpp: outcome.k_end[1],
        });

        // event checks at the accepted node
        let sing_gap = y[1] * y[1] * t - 2.0 * t * t;
        if sing_gap <= singularity_tolerance(t) {
            truncate_at_event(&mut nodes, |tau, _x, xp| {
                xp * xp * tau - 2.0 * tau * tau - singularity_tolerance(tau)
            });
            break Termination::HitSingularity;
        }
        if y[0] - 2.0 * t * y[1] <= 0.0 {
            truncate_at_event(&mut nodes, |tau, x, xp| x - 2.0 * tau * xp);
            break Termination::LeftS;
        }

        if t >= t_end {
            break Termination::ReachedTEnd;
        }
    };

    Ok(RadialSolution { nodes, termination })
}

/// Replaces the last node with the bisected event location on the last
/// Hermite interval. `g` is positive strictly inside the admissible region.
fn truncate_at_event(nodes: &mut Vec<RadialNode>, g: impl Fn(f64, f64, f64) -> f64) {
    if nodes.len() < 2 {
        return;
    }
    let a = nodes[nodes.len() - 2];
    let b = nodes[nodes.len() - 1];
    let eval = |tau: f64| -> (f64, f64) {
        (
            hermite(tau, a.t, b.t, a.x, a.xp, b.x, b.xp),
            hermite(tau, a.t, b.t, a.xp, a.xpp, b.xp, b.xpp),
        )
    };
    if g(a.t, a.x, a.xp) <= 0.0 {
        // event already active at the interval start; keep the start only
        nodes.pop();
        return;
    }
    let tau = bisect_crossing(a.t, b.t, |tt| {
        let (x, xp) = eval(tt);
        g(tt, x, xp)
    });
    let (x, xp) = eval(tau);
    let xpp = rhs(tau, x, xp)
        .unwrap_or_else(|_| hermite_derivative(tau, a.t, b.t, a.xp, a.xpp, b.xp, b.xpp));
    let last = nodes.len() - 1;
    nodes[last] = RadialNode { t: tau, x, xp, xpp };
}

/// Maximal subintervals of the solution domain where x > 2tx′ > 2t√(2t)
/// holds strictly; boundaries located by bisection on the interpolant.
pub fn admissible_window(sol: &RadialSolution) -> Vec<(f64, f64)> {
    let window_gap = |t: f64| -> f64 {
        match sol.eval(t) {
            Ok((x, xp)) => {
                if t <= 0.0 {
                    return -1.0;
                }
                let g1 = x - 2.0 * t * xp;
                let g2 = xp - (2.0 * t).sqrt();
                g1.min(g2)
            }
            Err(_) => -1.0,
        }
    };

    if sol.nodes.len() == 1 {
        let n = sol.nodes[0];
        return if in_s(n.t, n.x, n.xp) {
            vec![(n.t, n.t)]
        } else {
            vec![]
        };
    }

    // sample at nodes and midpoints, then refine sign changes
    let mut samples = Vec::with_capacity(sol.nodes.len() * 2);
    for w in sol.nodes.windows(2) {
        samples.push(w[0].t);
        samples.push(0.5 * (w[0].t + w[1].t));
    }
    samples.push(sol.t_end());

    let mut windows = Vec::new();
    let mut open: Option<f64> = None;
    let mut prev_t = samples[0];
    let mut prev_pos = window_gap(prev_t) > 0.0;
    if prev_pos {
        open = Some(prev_t);
    }
    for &t in &samples[1..] {
        let pos = window_gap(t) > 0.0;
        if pos != prev_pos {
            let crossing = if prev_pos {
                bisect_crossing(prev_t, t, window_gap)
            } else {
                // falling-to-rising: bisect on the negated gap
                bisect_crossing(prev_t, t, |tt| -window_gap(tt))
            };
            if prev_pos {
                windows.push((open.take().unwrap_or(prev_t), crossing));
            } else {
                open = Some(crossing);
            }
        }
        prev_t = t;
        prev_pos = pos;
    }
    if let Some(start) = open {
        windows.push((start, sol.t_end()));
    }
    windows
}

/// Power-law solutions of the ODE: x = ±(2√2/9)·t^{3/2} and x = k·t^{1/2}.
/// All of them fail the admissibility requirements.
pub fn special_solutions(k: f64) -> Vec<(String, PowerLawRadial)> {
    let c = 2.0 * std::f64::consts::SQRT_2 / 9.0;
    vec![
        ("(2√2/9)·t^{3/2}".to_string(), PowerLawRadial::new(c, 1.5)),
        ("-(2√2/9)·t^{3/2}".to_string(), PowerLawRadial::new(-c, 1.5)),
        (format!("{k}·t^{{1/2}}"), PowerLawRadial::new(k, 0.5)),
    ]
}

/// ODE residual and admissibility verdict for one closed-form solution.
#[derive(Debug, Clone)]
pub struct SpecialSolutionCheck {
    pub name: String,
    pub max_ode_residual: f64,
    pub admissible_anywhere: bool,
}

/// Evaluates the power-law solutions at the sample abscissae: the ODE
/// residual |x″ − F(t, x, x′)| must vanish while the admissibility
/// requirements must fail everywhere.
pub fn special_solution_residuals(sample_ts: &[f64]) -> Vec<SpecialSolutionCheck> {
    special_solutions(3.0)
        .into_iter()
        .map(|(name, sol)| {
            let mut max_res = 0.0f64;
            let mut admissible = false;
            for &t in sample_ts {
                let res = match rhs(t, sol.x(t), sol.xp(t)) {
                    Ok(f) => (sol.xpp(t) - f).abs(),
                    Err(_) => f64::INFINITY,
                };
                max_res = max_res.max(res);
                admissible |= in_s(t, sol.x(t), sol.xp(t));
            }
            SpecialSolutionCheck {
                name,
                max_ode_residual: max_res,
                admissible_anywhere: admissible,
            }
        })
        .collect()
}
