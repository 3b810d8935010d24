//! The golden verification suite: pipeline outputs against the closed forms
//! of the homogeneous potential on S³×S³.

use anyhow::Result;
use nk_core::jets::{s3s3_phi, Point3};
use nk_core::structure::{epsilon_sq, ma_residual, nk_residuals};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub name: String,
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoldenReport {
    pub seed: u64,
    pub points: usize,
    pub checks: Vec<GoldenCheck>,
    pub pass: bool,
}

fn eps2_closed(y: Point3) -> f64 {
    -(8.0 / 9.0) * y.r2() - 16.0 / (3.0 * 3.0f64.sqrt()) * y[0] * y[1] * y[2] + 8.0 / 27.0
}

fn detc_closed(y: Point3) -> f64 {
    -(2.0 / 9.0) * y.r2() + 2.0 / (3.0 * 3.0f64.sqrt()) * y[0] * y[1] * y[2] + 8.0 / 27.0
}

fn vcv_closed(y: Point3) -> f64 {
    (2.0 / 3.0) * y.r2() + 2.0 * 3.0f64.sqrt() * y[0] * y[1] * y[2]
}

fn ball_point(rng: &mut ChaCha8Rng, radius: f64) -> Point3 {
    loop {
        let y = Point3::new(
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        );
        if y.norm() <= radius {
            return y;
        }
    }
}

/// Compares ε², det C and ᵗVCV against the closed forms at `points` random
/// points with ‖y‖ ≤ 0.25, then the volume relation and the full residual
/// report; adds the frozen spot checks at the origin, at (1/2, 0, 0) and the
/// sign-flip symmetry at (0.1, 0.1, 0).
pub fn run_golden(seed: u64, points: usize) -> Result<GoldenReport> {
    let fam = s3s3_phi();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut worst_eps2 = 0.0f64;
    let mut worst_detc = 0.0f64;
    let mut worst_vcv = 0.0f64;
    let mut worst_vol1 = 0.0f64;
    let mut worst_resid = 0.0f64;
    for _ in 0..points {
        let y = ball_point(&mut rng, 0.25);
        let jet = fam.jet(y).unwrap();
        worst_eps2 = worst_eps2.max((epsilon_sq(&jet, y) - eps2_closed(y)).abs());
        worst_detc = worst_detc.max((jet.det_hess() - detc_closed(y)).abs());
        worst_vcv = worst_vcv.max((jet.vcv(y) - vcv_closed(y)).abs());
        worst_vol1 = worst_vol1.max((jet.det_hess() - epsilon_sq(&jet, y) - jet.vcv(y)).abs());
        let rep = nk_residuals(&jet, y)?;
        worst_resid = worst_resid
            .max(rep.ma_residual)
            .max(rep.nk1_residual)
            .max(rep.nk2_residual)
            .max(
                rep.integrability_residuals
                    .iter()
                    .cloned()
                    .fold(0.0, f64::max),
            )
            .max(rep.hitchin.wedge_zero)
            .max(rep.hitchin.comp_residual)
            .max(rep.hitchin.j_square_residual);
    }

    // frozen spot values
    let origin = fam.jet(Point3::origin()).unwrap();
    let spot_origin = (epsilon_sq(&origin, Point3::origin()) - 8.0 / 27.0)
        .abs()
        .max((origin.det_hess() - 8.0 / 27.0).abs())
        .max(origin.vcv(Point3::origin()).abs());

    let y_half = Point3::new(0.5, 0.0, 0.0);
    let jet_half = fam.jet(y_half).unwrap();
    let spot_half = (epsilon_sq(&jet_half, y_half) - 2.0 / 27.0)
        .abs()
        .max((jet_half.det_hess() - 13.0 / 54.0).abs())
        .max((jet_half.vcv(y_half) - 1.0 / 6.0).abs())
        .max((13.0f64 / 54.0 - (2.0 / 27.0 + 1.0 / 6.0)).abs())
        .max(ma_residual(&jet_half, y_half).abs());

    // ε² is even under y → −y exactly when the cubic term vanishes
    let y_sym = Point3::new(0.1, 0.1, 0.0);
    let y_neg = Point3::new(-0.1, -0.1, 0.0);
    let sym_diff = (eps2_closed(y_sym) - eps2_closed(y_neg)).abs().max(
        (epsilon_sq(&fam.jet(y_sym).unwrap(), y_sym) - epsilon_sq(&fam.jet(y_neg).unwrap(), y_neg))
            .abs(),
    );
    let y_asym = Point3::new(0.1, 0.1, 0.1);
    let y_asym_neg = Point3::new(-0.1, -0.1, -0.1);
    let asym_gap = (epsilon_sq(&fam.jet(y_asym).unwrap(), y_asym)
        - epsilon_sq(&fam.jet(y_asym_neg).unwrap(), y_asym_neg))
    .abs();

    let checks = vec![
        GoldenCheck {
            name: "eps2 closed form".into(),
            worst: worst_eps2,
            tolerance: TOL,
            pass: worst_eps2 <= TOL,
        },
        GoldenCheck {
            name: "det C closed form".into(),
            worst: worst_detc,
            tolerance: TOL,
            pass: worst_detc <= TOL,
        },
        GoldenCheck {
            name: "tVCV closed form".into(),
            worst: worst_vcv,
            tolerance: TOL,
            pass: worst_vcv <= TOL,
        },
        GoldenCheck {
            name: "volume relation det C = eps2 + tVCV".into(),
            worst: worst_vol1,
            tolerance: TOL,
            pass: worst_vol1 <= TOL,
        },
        GoldenCheck {
            name: "full residual report".into(),
            worst: worst_resid,
            tolerance: TOL,
            pass: worst_resid <= TOL,
        },
        GoldenCheck {
            name: "origin spot values (8/27, 8/27, 0)".into(),
            worst: spot_origin,
            tolerance: TOL,
            pass: spot_origin <= TOL,
        },
        GoldenCheck {
            name: "(1/2,0,0) spot values (2/27, 13/54, 1/6)".into(),
            worst: spot_half,
            tolerance: TOL,
            pass: spot_half <= TOL,
        },
        GoldenCheck {
            name: "sign-flip symmetry at (0.1, 0.1, 0)".into(),
            worst: sym_diff,
            tolerance: TOL,
            pass: sym_diff <= TOL && asym_gap > TOL,
        },
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(GoldenReport {
        seed,
        points,
        checks,
        pass,
    })
}
