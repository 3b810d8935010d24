//! Acceptance suite. Each test prints one `criterion N: PASS/FAIL` line
//! (run with `--nocapture` to see them) and asserts the stated tolerance.

use std::sync::Arc;
use std::time::Instant;

use nalgebra::{Matrix3, Matrix6, SymmetricEigen};
use nk_core::exterior::{k_tensor, Form, GENERATORS};
use nk_core::jets::{radial_phi, s3s3_phi, Jet3, PhiFamily, Point3, Poly3};
use nk_core::radial::{
    admissible_window, in_s, integrate, rhs, special_solution_residuals, Controls, RadialState,
};
use nk_core::structure::{
    admissibility, block_matrix_d, d, epsilon_sq, frame_at, ma_residual, nk_residuals,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(criterion: usize, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn random_point_in_ball(rng: &mut ChaCha8Rng, radius: f64) -> Point3 {
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

fn grid_21() -> Vec<Point3> {
    let axis: Vec<f64> = (0..21).map(|i| -0.25 + 0.5 * (i as f64) / 20.0).collect();
    let mut pts = Vec::with_capacity(21 * 21 * 21);
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                pts.push(Point3::new(a, b, c));
            }
        }
    }
    pts
}

fn eps2_closed(y: Point3) -> f64 {
    let cube = y[0] * y[1] * y[2];
    -(8.0 / 9.0) * y.r2() - 16.0 / (3.0 * 3.0f64.sqrt()) * cube + 8.0 / 27.0
}

fn detc_closed(y: Point3) -> f64 {
    let cube = y[0] * y[1] * y[2];
    -(2.0 / 9.0) * y.r2() + 2.0 / (3.0 * 3.0f64.sqrt()) * cube + 8.0 / 27.0
}

fn vcv_closed(y: Point3) -> f64 {
    let cube = y[0] * y[1] * y[2];
    (2.0 / 3.0) * y.r2() + 2.0 * 3.0f64.sqrt() * cube
}

#[test]
fn criterion_1_golden_closed_forms() {
    let fam = s3s3_phi();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e6b_0001);
    let points: Vec<Point3> = (0..500)
        .map(|_| random_point_in_ball(&mut rng, 0.25))
        .collect();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &y in &points {
        let jet = fam.jet(y).unwrap();
        worst = worst
            .max((epsilon_sq(&jet, y) - eps2_closed(y)).abs())
            .max((jet.det_hess() - detc_closed(y)).abs())
            .max((jet.vcv(y) - vcv_closed(y)).abs());
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-12 && elapsed.as_secs_f64() < 1.0;
    report(
        1,
        pass,
        &format!(
            "ε², det C, ᵗVCV vs closed forms at 500 points: max |Δ| = {worst:.3e} (tol 1e-12), {:.0} ms",
            elapsed.as_secs_f64() * 1e3
        ),
    );
}

#[test]
fn criterion_2_monge_ampere_on_grid() {
    let fam = s3s3_phi();
    let mut worst_ma = 0.0f64;
    let mut worst_vol1 = 0.0f64;
    for y in grid_21() {
        let jet = fam.jet(y).unwrap();
        worst_ma = worst_ma.max(ma_residual(&jet, y).abs());
        worst_vol1 = worst_vol1.max((jet.det_hess() - epsilon_sq(&jet, y) - jet.vcv(y)).abs());
    }
    let pass = worst_ma <= 1e-10 && worst_vol1 <= 1e-10;
    report(
        2,
        pass,
        &format!(
            "21³ grid on [−0.25, 0.25]³: max |ma| = {worst_ma:.3e}, max |vol1| = {worst_vol1:.3e} (tol 1e-10)"
        ),
    );
}

#[test]
fn criterion_3_structure_equations_on_grid() {
    let fam = s3s3_phi();
    let mut worst = 0.0f64;
    let mut admissible = 0usize;
    for y in grid_21() {
        let jet = fam.jet(y).unwrap();
        if !admissibility(&jet, y).in_u0 {
            continue;
        }
        admissible += 1;
        let rep = nk_residuals(&jet, y).unwrap();
        worst = worst
            .max(rep.nk1_residual)
            .max(rep.nk2_residual)
            .max(rep.integrability_residuals[0])
            .max(rep.integrability_residuals[1])
            .max(rep.integrability_residuals[2]);
    }
    let pass = admissible > 0 && worst <= 1e-9;
    report(
        3,
        pass,
        &format!(
            "dω−3ψ⁺, dψ⁻+2ω², d(dθⁱ) at {admissible} admissible grid points: max = {worst:.3e} (tol 1e-9)"
        ),
    );
}

#[test]
fn criterion_4_negative_control() {
    let c3 = 1.0 / 3.0f64.sqrt();
    let fam = PhiFamily::polynomial(
        "perturbed",
        Poly3::new(vec![
            ([2, 0, 0], 1.0 / 3.0),
            ([0, 2, 0], 1.0 / 3.0),
            ([0, 0, 2], 1.0 / 3.0),
            ([1, 1, 1], c3),
            ([0, 0, 0], 1.0 / 9.0),
            ([4, 0, 0], 0.01),
        ]),
    );
    let y = Point3::new(0.1, 0.05, 0.0);
    let jet = fam.jet(y).unwrap();
    let ma = ma_residual(&jet, y).abs();
    let rep = nk_residuals(&jet, y).unwrap();
    let max_int = rep
        .integrability_residuals
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    let pass = ma > 1e-5 && max_int > 1e-6;
    report(
        4,
        pass,
        &format!(
            "φ + 0.01·y₁⁴ at (0.1, 0.05, 0): |ma| = {ma:.3e} (> 1e-5), max ‖d(dθⁱ)‖ = {max_int:.3e} (> 1e-6)"
        ),
    );
}

#[test]
fn criterion_5_hitchin_suite_on_grid() {
    let fam = s3s3_phi();
    let mut worst_wedge = 0.0f64;
    let mut worst_trk_rel = 0.0f64;
    let mut worst_j = 0.0f64;
    let mut worst_comp = 0.0f64;
    let mut min_g = f64::MAX;
    let mut admissible = 0usize;
    for y in grid_21() {
        let jet = fam.jet(y).unwrap();
        if !admissibility(&jet, y).in_u0 {
            continue;
        }
        admissible += 1;
        let frame = frame_at(&jet, y).unwrap();
        let h = nk_core::structure::hitchin_check(&frame).unwrap();
        worst_wedge = worst_wedge.max(h.wedge_zero);
        worst_trk_rel = worst_trk_rel.max(h.trk_residual / (h.omega3 * h.omega3 / 6.0));
        worst_j = worst_j.max(h.j_square_residual);
        worst_comp = worst_comp.max(h.comp_residual);
        min_g = min_g.min(h.g_min_eigenvalue);
    }
    let pass = admissible > 0
        && worst_wedge <= 1e-10
        && worst_trk_rel <= 1e-10
        && worst_j <= 1e-10
        && worst_comp <= 1e-10
        && min_g > 0.0;
    report(
        5,
        pass,
        &format!(
            "{admissible} points: ‖ω∧ψ⁺‖ = {worst_wedge:.3e}, rel |tr K²+(ω³)²/6| = {worst_trk_rel:.3e}, ‖J²+Id‖ = {worst_j:.3e}, ‖ψ⁺∧ψ⁻−(2/3)ω³‖ = {worst_comp:.3e} (tol 1e-10), min eig g = {min_g:.3}"
        ),
    );
}

#[test]
fn criterion_6_positivity_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e6b_0006);
    let mut agreements = 0usize;
    let mut positives = 0usize;
    for _ in 0..1000 {
        let a = Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        let c = a.transpose() * a + Matrix3::identity() * 0.05;
        let scale = 10f64.powf(rng.gen_range(-2.0..1.0));
        let y = Point3::new(
            scale * rng.gen_range(-1.0..1.0),
            scale * rng.gen_range(-1.0..1.0),
            scale * rng.gen_range(-1.0..1.0),
        );
        let mut hess = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                hess[i][j] = c[(i, j)];
            }
        }
        let jet = Jet3::new(1.0, [0.0; 3], hess, [[[0.0; 3]; 3]; 3]);
        let rep = admissibility(&jet, y);
        let d6: Matrix6<f64> = block_matrix_d(&jet, y);
        let eig_verdict = SymmetricEigen::new(d6).eigenvalues.min() > 0.0;
        let criterion = rep.c_positive && rep.pairing_condition;
        if eig_verdict == criterion {
            agreements += 1;
        }
        if eig_verdict {
            positives += 1;
        }
    }
    let pass = agreements == 1000 && positives > 0 && positives < 1000;
    report(
        6,
        pass,
        &format!(
            "eigenvalue verdict on D vs C ≻ 0 ∧ pairing: {agreements}/1000 agree ({positives} positive)"
        ),
    );
}

#[test]
fn criterion_7_radial_reduction_end_to_end() {
    let f_exact = rhs(1.0, 10.0, 2.0).unwrap() == 3.0;

    let specials = special_solution_residuals(&[0.5, 1.0, 2.0]);
    let specials_ok = specials
        .iter()
        .all(|c| c.max_ode_residual <= 1e-12 && !c.admissible_anywhere);
    let wedge_rejects = !in_s(
        1.0,
        2.0 * std::f64::consts::SQRT_2 / 9.0,
        std::f64::consts::SQRT_2 / 3.0,
    );

    let state = RadialState::new(1.0, 10.0, 2.0);
    let sol = integrate(state, 1.5, &Controls::default()).unwrap();
    let windows = admissible_window(&sol);
    let fam = radial_phi("traj", Arc::new(sol));
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e6b_0007);
    let mut worst = 0.0f64;
    let mut shells = 0usize;
    for &(a, b) in &windows {
        for s in 0..5 {
            let t = a + (b - a) * (0.1 + 0.8 * s as f64 / 4.0);
            let r = (2.0 * t).sqrt();
            shells += 1;
            for _ in 0..20 {
                let mut u = [0.0f64; 3];
                loop {
                    for slot in &mut u {
                        *slot = rng.gen_range(-1.0..1.0);
                    }
                    let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
                    if n > 1e-3 {
                        for slot in &mut u {
                            *slot /= n;
                        }
                        break;
                    }
                }
                let y = Point3::new(r * u[0], r * u[1], r * u[2]);
                let jet = fam.jet(y).unwrap();
                worst = worst.max(ma_residual(&jet, y).abs());
            }
        }
    }
    let pass = f_exact && specials_ok && wedge_rejects && shells > 0 && worst <= 1e-8;
    report(
        7,
        pass,
        &format!(
            "F(1,10,2) = 3 exact: {f_exact}; power-law solutions residual ≤ 1e-12 and rejected: {specials_ok}; trajectory family max |ma| over {shells} shells × 20 directions = {worst:.3e} (tol 1e-8)"
        ),
    );
}

#[test]
fn criterion_8_exterior_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e6b_0008);
    let rel = 1e-12;
    let random_form = |rng: &mut ChaCha8Rng, degree: usize| {
        let mut f = Form::zero(degree);
        fn rec(
            degree: usize,
            start: usize,
            acc: &mut Vec<usize>,
            rng: &mut ChaCha8Rng,
            f: &mut Form,
        ) {
            if acc.len() == degree {
                *f += Form::monomial(acc, rng.gen_range(-1.0..1.0));
                return;
            }
            for g in start..GENERATORS {
                acc.push(g);
                rec(degree, g + 1, acc, rng, f);
                acc.pop();
            }
        }
        rec(degree, 0, &mut Vec::new(), rng, &mut f);
        f
    };

    let fam = s3s3_phi();
    let y = Point3::new(0.08, -0.12, 0.05);
    let jet = fam.jet(y).unwrap();
    let frame = frame_at(&jet, y).unwrap();

    let mut failures = 0usize;
    for _ in 0..1000 {
        let da = rng.gen_range(1..=2usize);
        let db = rng.gen_range(1..=2usize);
        let a = random_form(&mut rng, da);
        let b = random_form(&mut rng, db);
        let scale = (a.norm_sup() + 1.0) * (b.norm_sup() + 1.0);

        // graded commutativity
        let sign = if (da * db) % 2 == 0 { 1.0 } else { -1.0 };
        if !a
            .wedge(&b)
            .unwrap()
            .approx_eq(&(b.wedge(&a).unwrap() * sign), rel * scale)
        {
            failures += 1;
        }

        // interior-product antiderivation
        let g = rng.gen_range(0..GENERATORS);
        let lhs = Form::interior_gen(g, &a.wedge(&b).unwrap());
        let s2 = if da % 2 == 0 { 1.0 } else { -1.0 };
        let rhs_form = Form::interior_gen(g, &a).wedge(&b).unwrap()
            + a.wedge(&Form::interior_gen(g, &b)).unwrap() * s2;
        if !lhs.approx_eq(&rhs_form, rel * scale) {
            failures += 1;
        }

        // Leibniz rule for the coframe differential
        let aj = nk_core::exterior::FormJet::constant(a);
        let bj = nk_core::exterior::FormJet::constant(b);
        let dl = d(&aj.wedge(&bj).unwrap(), &frame);
        let dr = d(&aj, &frame).wedge(&b).unwrap() + a.wedge(&d(&bj, &frame)).unwrap() * s2;
        if !dl.approx_eq(&dr, rel * scale / frame.eps) {
            failures += 1;
        }

        // Hitchin's quadratic identity on a random 3-form
        let psi = random_form(&mut rng, 3);
        let k = k_tensor(&psi);
        let k2 = k * k;
        let res = (k2 - nalgebra::Matrix6::identity() * (k2.trace() / 6.0))
            .abs()
            .max();
        let kn = k.abs().max();
        if res > 1e-10 * kn * kn {
            failures += 1;
        }
    }
    let pass = failures == 0;
    report(
        8,
        pass,
        &format!("1000 randomized trials of the exterior-algebra laws: {failures} failures (rel tol 1e-12)"),
    );
}
