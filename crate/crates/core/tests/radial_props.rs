//! Properties of the radial reduction: integrator convergence order,
//! the radial↔PDE coupling (the ODE is exactly the radial form of the
//! Monge–Ampère-type equation), rotational invariance, and the eigenstructure
//! of radial Hessians.

use std::sync::Arc;

use nalgebra::{Matrix3, SymmetricEigen};
use nk_core::jets::{radial_phi, Point3};
use nk_core::radial::{admissible_window, integrate, Controls, RadialState, Termination};
use nk_core::structure::{admissibility, ma_residual};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

#[test]
fn fixed_step_convergence_order_of_the_pair() {
    let state = RadialState::new(1.0, 10.0, 2.0);
    let t_end = 1.5;
    let reference = integrate(
        state,
        t_end,
        &Controls {
            rtol: 1e-13,
            atol: 1e-14,
            max_step: 2.5e-4,
            ..Controls::default()
        },
    )
    .unwrap();
    let (x_ref, xp_ref) = reference.eval(t_end).unwrap();

    let mut errors = Vec::new();
    let mut steps = Vec::new();
    for &h in &[4e-2, 2e-2, 1e-2] {
        let sol = integrate(
            state,
            t_end,
            &Controls {
                fixed_step: Some(h),
                ..Controls::default()
            },
        )
        .unwrap();
        assert_eq!(sol.termination(), Termination::ReachedTEnd);
        let (x, xp) = sol.eval(t_end).unwrap();
        errors.push(((x - x_ref).abs() + (xp - xp_ref).abs()).max(1e-16));
        steps.push(h);
    }
    let mut slopes = Vec::new();
    for i in 0..errors.len() - 1 {
        slopes.push((errors[i] / errors[i + 1]).ln() / (steps[i] / steps[i + 1]).ln());
    }
    let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
    assert!(
        mean >= 3.5,
        "observed order {mean}, errors {errors:?}, slopes {slopes:?}"
    );
}

#[test]
fn radial_family_satisfies_the_equation_on_admissible_shells() {
    let state = RadialState::new(1.0, 10.0, 2.0);
    let sol = integrate(state, 1.5, &Controls::default()).unwrap();
    let windows = admissible_window(&sol);
    assert!(!windows.is_empty());
    let (w0, w1) = windows[0];
    let fam = radial_phi("traj", Arc::new(sol));

    let mut rng = ChaCha8Rng::seed_from_u64(0x4e4b_2001);
    for shell in 0..5 {
        let t: f64 = w0 + (w1 - w0) * (0.1 + 0.8 * shell as f64 / 4.0);
        let r = (2.0 * t).sqrt();
        for _ in 0..20 {
            let u = random_direction(&mut rng);
            let y = Point3::new(r * u[0], r * u[1], r * u[2]);
            let jet = fam.jet(y).unwrap();
            let res = ma_residual(&jet, y).abs();
            assert!(res <= 1e-8, "residual {res} at t={t}, y={y:?}");
        }
    }
}

#[test]
fn admissible_window_matches_structure_admissibility() {
    let state = RadialState::new(1.0, 10.0, 2.0);
    let sol = integrate(state, 1.5, &Controls::default()).unwrap();
    let windows = admissible_window(&sol);
    let fam = radial_phi("traj", Arc::new(sol));
    for &(a, b) in &windows {
        for frac in [0.05, 0.3, 0.6, 0.95] {
            let t: f64 = a + (b - a) * frac;
            let y = Point3::new((2.0 * t).sqrt(), 0.0, 0.0);
            let jet = fam.jet(y).unwrap();
            let rep = admissibility(&jet, y);
            assert!(rep.in_u0, "window point t={t} not admissible: {rep:?}");
        }
    }
}

#[test]
fn ma_residual_is_rotation_invariant_for_radial_potentials() {
    let state = RadialState::new(1.0, 10.0, 2.0);
    let sol = integrate(state, 1.5, &Controls::default()).unwrap();
    let fam = radial_phi("traj", Arc::new(sol));
    let mut rng = ChaCha8Rng::seed_from_u64(0x4e4b_2002);
    let t = 1.2f64;
    let r = (2.0 * t).sqrt();
    let mut values = Vec::new();
    for _ in 0..20 {
        let u = random_direction(&mut rng);
        let y = Point3::new(r * u[0], r * u[1], r * u[2]);
        let jet = fam.jet(y).unwrap();
        values.push(ma_residual(&jet, y));
    }
    let spread = values.iter().cloned().fold(f64::MIN, f64::max)
        - values.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread.abs() <= 1e-10, "directional spread {spread}");
}

#[test]
fn radial_hessian_eigenstructure_against_general_solver() {
    let state = RadialState::new(1.0, 10.0, 2.0);
    let sol = integrate(state, 1.5, &Controls::default()).unwrap();
    let fam = radial_phi("traj", Arc::new(sol.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(0x4e4b_2003);
    for _ in 0..50 {
        let t: f64 = rng.gen_range(1.05..1.45);
        let r = (2.0 * t).sqrt();
        let u = random_direction(&mut rng);
        let y = Point3::new(r * u[0], r * u[1], r * u[2]);
        let jet = fam.jet(y).unwrap();
        let (x, xp) = (sol.eval(t).unwrap().0, sol.eval(t).unwrap().1);
        let _ = x;
        let xpp = nk_core::radial::rhs(t, sol.eval(t).unwrap().0, xp).unwrap();
        let mut expected = vec![xp, xp, xp + 2.0 * t * xpp];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let h = Matrix3::from_fn(|i, j| jet.hess[i][j]);
        let mut eigs: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().cloned().collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (e, x) in eigs.iter().zip(&expected) {
            assert!((e - x).abs() <= 1e-10, "eig {e} vs {x} at t={t}");
        }
    }
}
