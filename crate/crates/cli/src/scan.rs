//! Grid scans of residual and admissibility reports.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use nk_core::jets::{DiffMode, PhiFamily, Point3};
use nk_core::structure::{admissibility, epsilon_sq, ma_residual, nk_residuals};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanConfig {
    pub family: String,
    /// Closed intervals per axis.
    pub bounds: [[f64; 2]; 3],
    pub resolution: [usize; 3],
    pub mode: String,
    pub residual_tol: f64,
    pub pivot_tol: f64,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        for (axis, b) in self.bounds.iter().enumerate() {
            if !(b[0] <= b[1]) || !b[0].is_finite() || !b[1].is_finite() {
                bail!("axis {} interval [{}, {}] is invalid", axis + 1, b[0], b[1]);
            }
        }
        if self.resolution.iter().any(|&n| n == 0) {
            bail!("resolution must be at least 1 per axis");
        }
        if !(self.residual_tol > 0.0) {
            bail!("residual tolerance must be positive");
        }
        Ok(())
    }

    fn axis_points(&self, axis: usize) -> Vec<f64> {
        let [a, b] = self.bounds[axis];
        let n = self.resolution[axis];
        if n == 1 {
            return vec![0.5 * (a + b)];
        }
        (0..n)
            .map(|i| a + (b - a) * (i as f64) / ((n - 1) as f64))
            .collect()
    }

    pub fn grid(&self) -> Vec<Point3> {
        let xs = self.axis_points(0);
        let ys = self.axis_points(1);
        let zs = self.axis_points(2);
        let mut pts = Vec::with_capacity(xs.len() * ys.len() * zs.len());
        for &a in &xs {
            for &b in &ys {
                for &c in &zs {
                    pts.push(Point3::new(a, b, c));
                }
            }
        }
        pts
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HitchinRecord {
    pub wedge_zero: f64,
    pub trk_relative: f64,
    pub comp_residual: f64,
    pub j_square_residual: f64,
    pub g_min_eigenvalue: f64,
}

/// Per-point record. The equation residuals (ma, vol1) are pure jet algebra
/// and are recorded at every evaluable point; the differential and Hitchin
/// residuals need the coframe and are null where ε² ≤ 0, so the
/// admissible-fraction accounting stays explicit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointRecord {
    pub y: [f64; 3],
    pub eps2: f64,
    pub in_u0: bool,
    pub ma_residual: Option<f64>,
    pub vol1_residual: Option<f64>,
    pub nk1_residual: Option<f64>,
    pub nk2_residual: Option<f64>,
    pub integrability_max: Option<f64>,
    pub hitchin: Option<HitchinRecord>,
    /// Set when the jet provider itself failed at this point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl PointRecord {
    /// Largest residual at this record, infinity when a frame exists but a
    /// residual could not be computed.
    pub fn max_residual(&self) -> Option<f64> {
        let mut m: Option<f64> = None;
        let mut push = |v: Option<f64>| {
            if let Some(v) = v {
                m = Some(m.map_or(v, |cur: f64| cur.max(v)));
            }
        };
        push(self.ma_residual);
        push(self.vol1_residual);
        push(self.nk1_residual);
        push(self.nk2_residual);
        push(self.integrability_max);
        if let Some(h) = &self.hitchin {
            push(Some(h.wedge_zero));
            push(Some(h.trk_relative));
            push(Some(h.comp_residual));
            push(Some(h.j_square_residual));
        }
        m
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Aggregates {
    pub points: usize,
    pub admissible_count: usize,
    pub admissible_fraction: f64,
    /// Largest equation residual (ma, vol1) over every evaluable point.
    pub max_equation_residual: Option<f64>,
    pub max_residual_over_u0: Option<f64>,
    pub worst_point: Option<[f64; 3]>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub aggregates: Aggregates,
    pub records: Vec<PointRecord>,
}

fn evaluate_point(family: &PhiFamily, y: Point3, mode: DiffMode) -> PointRecord {
    let fam = family.clone().with_mode(mode);
    let jet = match fam.jet(y) {
        Ok(j) => j,
        Err(e) => {
            return PointRecord {
                y: y.0,
                eps2: f64::NAN,
                in_u0: false,
                ma_residual: None,
                vol1_residual: None,
                nk1_residual: None,
                nk2_residual: None,
                integrability_max: None,
                hitchin: None,
                error: Some(e.to_string()),
            }
        }
    };
    let adm = admissibility(&jet, y);
    let ma = ma_residual(&jet, y).abs();
    let vol1 = (jet.det_hess() - epsilon_sq(&jet, y) - jet.vcv(y)).abs();
    if adm.eps2 <= 0.0 {
        return PointRecord {
            y: y.0,
            eps2: adm.eps2,
            in_u0: false,
            ma_residual: Some(ma),
            vol1_residual: Some(vol1),
            nk1_residual: None,
            nk2_residual: None,
            integrability_max: None,
            hitchin: None,
            error: None,
        };
    }
    match nk_residuals(&jet, y) {
        Ok(rep) => PointRecord {
            y: y.0,
            eps2: adm.eps2,
            in_u0: adm.in_u0,
            ma_residual: Some(rep.ma_residual),
            vol1_residual: Some(rep.vol1_residual),
            nk1_residual: Some(rep.nk1_residual),
            nk2_residual: Some(rep.nk2_residual),
            integrability_max: Some(
                rep.integrability_residuals
                    .iter()
                    .cloned()
                    .fold(0.0f64, f64::max),
            ),
            hitchin: Some(HitchinRecord {
                wedge_zero: rep.hitchin.wedge_zero,
                trk_relative: rep.hitchin.trk_residual
                    / (rep.hitchin.omega3 * rep.hitchin.omega3 / 6.0),
                comp_residual: rep.hitchin.comp_residual,
                j_square_residual: rep.hitchin.j_square_residual,
                g_min_eigenvalue: rep.hitchin.g_min_eigenvalue,
            }),
            error: None,
        },
        Err(e) => {
            // ε² > 0 but the structure is degenerate (ω³ = 0)
            PointRecord {
                y: y.0,
                eps2: adm.eps2,
                in_u0: adm.in_u0,
                ma_residual: Some(ma),
                vol1_residual: Some(vol1),
                nk1_residual: None,
                nk2_residual: None,
                integrability_max: None,
                hitchin: None,
                error: Some(e.to_string()),
            }
        }
    }
}

/// Evaluates residual and admissibility reports at every grid point.
/// The scan passes iff every in-U₀ point has all residuals ≤ residual_tol,
/// a positive-definite induced metric, and no evaluation errors.
pub fn run_scan(family: &PhiFamily, config: &ScanConfig) -> Result<ScanReport> {
    config.validate()?;
    let mode = match config.mode.as_str() {
        "exact" => DiffMode::ExactTaylor,
        "fd" => DiffMode::FiniteDifference,
        other => bail!("unknown mode '{other}' (expected 'exact' or 'fd')"),
    };
    let grid = config.grid();
    let records: Vec<PointRecord> = grid
        .par_iter()
        .map(|&y| evaluate_point(family, y, mode))
        .collect();

    let points = records.len();
    let admissible_count = records.iter().filter(|r| r.in_u0).count();
    let mut max_equation_residual: Option<f64> = None;
    let mut max_residual_over_u0: Option<f64> = None;
    let mut worst_point = None;
    let mut pass = true;
    for r in &records {
        if r.error.is_some() && r.in_u0 {
            pass = false;
        }
        // the equation residuals apply wherever the jet is evaluable
        for eq in [r.ma_residual, r.vol1_residual].into_iter().flatten() {
            if max_equation_residual.map_or(true, |cur| eq > cur) {
                max_equation_residual = Some(eq);
            }
            if eq > config.residual_tol {
                pass = false;
            }
        }
        if !r.in_u0 {
            continue;
        }
        let m = r.max_residual().unwrap_or(f64::INFINITY);
        if max_residual_over_u0.map_or(true, |cur| m > cur) {
            max_residual_over_u0 = Some(m);
            worst_point = Some(r.y);
        }
        if m > config.residual_tol {
            pass = false;
        }
        if let Some(h) = &r.hitchin {
            if h.g_min_eigenvalue <= 0.0 {
                pass = false;
            }
        }
    }

    Ok(ScanReport {
        config: config.clone(),
        aggregates: Aggregates {
            points,
            admissible_count,
            admissible_fraction: admissible_count as f64 / points.max(1) as f64,
            max_equation_residual,
            max_residual_over_u0,
            worst_point,
            pass,
        },
        records,
    })
}

pub fn write_report(report: &ScanReport, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(report).context("cannot serialize report")?;
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("cannot create '{}'", parent.display()))?;
        }
    }
    fs::write(path, json).with_context(|| format!("cannot write '{}'", path.display()))?;
    Ok(())
}
