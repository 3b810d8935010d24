//! Randomized properties of the structure pipeline: the graded Leibniz rule
//! of the coframe exterior derivative, d∘d on coordinate functions, the
//! equivalence of the two positivity criteria for D, the identity between
//! the volume relation and the Monge–Ampère residual, and the closed form of
//! the ω³ coefficient.

use nalgebra::{Matrix3, Matrix6, SymmetricEigen};
use nk_core::exterior::{Form, FormJet, GENERATORS};
use nk_core::jets::{s3s3_phi, Jet3, PhiFamily, Point3, Poly3};
use nk_core::structure::{admissibility, block_matrix_d, d, frame_at, ma_residual, nk_residuals};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

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

fn random_form_jet(rng: &mut ChaCha8Rng, degree: usize) -> FormJet {
    let mut random_form = |deg: usize| {
        let mut f = Form::zero(deg);
        let mut emit = |idx: &[usize]| {
            f += Form::monomial(idx, rng.gen_range(-1.0..1.0));
        };
        enumerate_monomials(deg, 0, &mut Vec::new(), &mut emit);
        f
    };
    FormJet {
        value: random_form(degree),
        grad: [
            random_form(degree),
            random_form(degree),
            random_form(degree),
        ],
    }
}

fn enumerate_monomials(
    degree: usize,
    start: usize,
    acc: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if acc.len() == degree {
        emit(acc);
        return;
    }
    for g in start..GENERATORS {
        acc.push(g);
        enumerate_monomials(degree, g + 1, acc, emit);
        acc.pop();
    }
}

#[test]
fn leibniz_rule_for_d_on_random_jets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4e4b_1001);
    let fam = s3s3_phi();
    let y = Point3::new(0.11, -0.07, 0.16);
    let jet = fam.jet(y).unwrap();
    let frame = frame_at(&jet, y).unwrap();
    for trial in 0..1000 {
        let da = rng.gen_range(0..=2usize);
        let db = rng.gen_range(0..=(3 - da));
        let a = random_form_jet(&mut rng, da);
        let b = random_form_jet(&mut rng, db);
        let ab = a.wedge(&b).unwrap();
        let lhs = d(&ab, &frame);
        let sign = if da % 2 == 0 { 1.0 } else { -1.0 };
        let rhs =
            d(&a, &frame).wedge(&b.value).unwrap() + a.value.wedge(&d(&b, &frame)).unwrap() * sign;
        let scale = (a.value.norm_sup() + 1.0) * (b.value.norm_sup() + 1.0) / frame.eps;
        assert!(
            lhs.approx_eq(&rhs, 1e-12 * scale),
            "Leibniz failed at trial {trial} (deg {da},{db}): diff {}",
            (lhs - rhs).norm_sup()
        );
    }
}

#[test]
fn d_squared_vanishes_on_coordinates_across_u0() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4e4b_1002);
    let fam = s3s3_phi();
    let mut checked = 0;
    while checked < 100 {
        let y = random_point_in_ball(&mut rng, 0.3);
        let jet = fam.jet(y).unwrap();
        let Ok(frame) = frame_at(&jet, y) else {
            continue;
        };
        checked += 1;
        for i in 0..3 {
            // dy_i = −3εγⁱ as a jet: coefficient −3ε with gradient −3·∂ε
            let mut grad = [Form::zero(1); 3];
            for (k, slot) in grad.iter_mut().enumerate() {
                *slot = Form::generator(nk_core::exterior::GAMMA[i]) * (-3.0 * frame.eps_grad[k]);
            }
            let dy = FormJet {
                value: Form::generator(nk_core::exterior::GAMMA[i]) * (-3.0 * frame.eps),
                grad,
            };
            let dd = d(&dy, &frame);
            assert!(
                dd.norm_sup() <= 1e-10,
                "d(dy_{}) = {} at {:?}",
                i + 1,
                dd.norm_sup(),
                y
            );
        }
    }
}

#[test]
fn integrability_residual_grows_monotonically_with_perturbation() {
    let y = Point3::new(0.1, 0.05, 0.0);
    let c3 = 1.0 / 3.0f64.sqrt();
    let residual_for = |scale: f64| -> f64 {
        let fam = PhiFamily::polynomial(
            "perturbed",
            Poly3::new(vec![
                ([2, 0, 0], 1.0 / 3.0),
                ([0, 2, 0], 1.0 / 3.0),
                ([0, 0, 2], 1.0 / 3.0),
                ([1, 1, 1], c3),
                ([0, 0, 0], 1.0 / 9.0),
                ([4, 0, 0], scale),
            ]),
        );
        let jet = fam.jet(y).unwrap();
        let rep = nk_residuals(&jet, y).unwrap();
        rep.integrability_residuals
            .iter()
            .cloned()
            .fold(0.0f64, f64::max)
    };
    let r0 = residual_for(0.0);
    let r1 = residual_for(1e-4);
    let r2 = residual_for(1e-3);
    let r3 = residual_for(1e-2);
    assert!(r0 <= 1e-12, "baseline not flat: {r0}");
    assert!(
        r0 < r1 && r1 < r2 && r2 < r3,
        "not monotone: {r0} {r1} {r2} {r3}"
    );
}

#[test]
fn positivity_of_d_matches_pairing_criterion_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4e4b_1003);
    let mut positive = 0usize;
    let mut negative = 0usize;
    for trial in 0..1000 {
        // random SPD Hessian and a point of log-uniform magnitude
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
        assert_eq!(
            eig_verdict, criterion,
            "trial {trial}: eigenvalue test and (i)+(ii) disagree"
        );
        assert_eq!(eig_verdict, rep.d_positive, "trial {trial}: factorization");
        if eig_verdict {
            positive += 1;
        } else {
            negative += 1;
        }
    }
    assert!(positive > 100 && negative > 100, "{positive} / {negative}");
}

#[test]
fn volume_relation_equals_ma_residual_under_eps_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4e4b_1004);
    // arbitrary cubic-plus-quartic potentials, no solution property assumed
    for _ in 0..200 {
        let poly = Poly3::new(vec![
            ([2, 0, 0], rng.gen_range(0.2..0.5)),
            ([0, 2, 0], rng.gen_range(0.2..0.5)),
            ([0, 0, 2], rng.gen_range(0.2..0.5)),
            ([1, 1, 1], rng.gen_range(-0.5..0.5)),
            ([0, 0, 0], rng.gen_range(-0.3..0.3)),
            ([4, 0, 0], rng.gen_range(-0.05..0.05)),
            ([1, 2, 0], rng.gen_range(-0.2..0.2)),
        ]);
        let fam = PhiFamily::polynomial("rnd", poly);
        let y = random_point_in_ball(&mut rng, 0.4);
        let jet = fam.jet(y).unwrap();
        let ma = ma_residual(&jet, y);
        let vol1 = jet.det_hess() - nk_core::structure::epsilon_sq(&jet, y) - jet.vcv(y);
        assert!(
            (ma - vol1).abs() <= 1e-12 * (1.0 + ma.abs()),
            "ma {ma} vs vol1 {vol1}"
        );
    }
}

#[test]
fn omega_cubed_coefficient_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4e4b_1005);
    let fam = s3s3_phi();
    let mut checked = 0;
    while checked < 200 {
        let y = random_point_in_ball(&mut rng, 0.3);
        let jet = fam.jet(y).unwrap();
        let Ok(frame) = frame_at(&jet, y) else {
            continue;
        };
        checked += 1;
        let omega3 = frame
            .omega
            .value
            .wedge(&frame.omega.value)
            .unwrap()
            .wedge(&frame.omega.value)
            .unwrap()
            .top_coefficient();
        let closed = -6.0 * jet.det_hess() + 6.0 * jet.vcv(y);
        assert!(
            (omega3 - closed).abs() <= 1e-12 * closed.abs().max(1.0),
            "ω³ {omega3} vs closed form {closed} at {y:?}"
        );
    }
}
