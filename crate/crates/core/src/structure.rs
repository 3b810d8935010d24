//! Pointwise SU(3)/nearly-Kähler structure built from a third-order jet of φ.
//!
//! On the admissible set U₀ = {ε² > 0 and D ≻ 0} the jet determines, in the
//! coframe {θⁱ, γⁱ} normalized by dy_i = −3εγⁱ:
//!
//! ```text
//! ε² = (8/3)(φ − ∂_rφ),          C = Hess(φ),        cⁱ = Σ_j C_ij γʲ,
//! c  = y₁c¹ + y₂c² + y₃c³,       η  = y₁γ²³ + y₂γ³¹ + y₃γ¹²,
//! ω  = Σ_{i<j} μ_ij(θ^{ij} + γ^{ij}) + Σ_i θⁱ∧cⁱ,
//! ψ⁺ = ε(γ¹²³ − θ¹²∧γ³ − θ³¹∧γ² − θ²³∧γ¹),
//! ψ⁻ = ε(θ¹²³ − γ¹²∧θ³ − γ³¹∧θ² − γ²³∧θ¹),
//! ```
//!
//! with the structure equations (ε/4)dθ¹ = c²∧c³ − y₁η (cyclically),
//! dγⁱ = −(4/ε)c∧γⁱ and dε = 4c. The exterior derivative [`d`] works through
//! these relations, so dω − 3ψ⁺, dψ⁻ + 2ω∧ω and d(dθⁱ) become pointwise
//! residuals: they all vanish exactly where φ satisfies the Monge–Ampère-type
//! equation det C = (8/3)φ − (11/3)∂_rφ + ∂_r²φ.

use nalgebra::{Matrix3, Matrix6, SMatrix, SymmetricEigen};
use thiserror::Error;

use crate::exterior::{k_tensor, leibniz_terms, Form, FormJet, ScalarJet, GAMMA, THETA};
use crate::jets::{Jet3, Point3};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error("ε² = {eps2:e} ≤ 0 at y = ({}, {}, {}): outside the admissible domain", y[0], y[1], y[2])]
    OutsideU0 { y: [f64; 3], eps2: f64 },
    #[error("degenerate structure: ω³ = 0")]
    DegenerateOmega,
}

/// ε² = (8/3)(φ − ∂_rφ).
pub fn epsilon_sq(jet: &Jet3, y: Point3) -> f64 {
    (8.0 / 3.0) * (jet.phi - jet.radial_derivative(y))
}

/// Signed residual of the Monge–Ampère-type equation,
/// det C − (8/3)φ + (8/3)∂_rφ − ᵗVCV, using ∂_r²φ = ∂_rφ + ᵗVCV.
pub fn ma_residual(jet: &Jet3, y: Point3) -> f64 {
    jet.det_hess() - (8.0 / 3.0) * jet.phi + (8.0 / 3.0) * jet.radial_derivative(y) - jet.vcv(y)
}

/// The moment-map matrix μ with μ₁₂ = y₃, μ₁₃ = −y₂, μ₂₃ = y₁.
pub fn mu_matrix(y: Point3) -> Matrix3<f64> {
    Matrix3::new(
        0.0, y[2], -y[1], //
        -y[2], 0.0, y[0], //
        y[1], -y[0], 0.0,
    )
}

/// The block matrix D = [[C, −μ], [μ, C]] whose positivity cuts out U₀.
pub fn block_matrix_d(jet: &Jet3, y: Point3) -> Matrix6<f64> {
    let c = Matrix3::from_fn(|i, j| jet.hess[i][j]);
    let mu = mu_matrix(y);
    let mut d = Matrix6::zeros();
    d.fixed_view_mut::<3, 3>(0, 0).copy_from(&c);
    d.fixed_view_mut::<3, 3>(0, 3).copy_from(&(-mu));
    d.fixed_view_mut::<3, 3>(3, 0).copy_from(&mu);
    d.fixed_view_mut::<3, 3>(3, 3).copy_from(&c);
    d
}

/// Cholesky factorization with pivot tolerance 1e-12·max|entry|; returns
/// whether the matrix is positive definite at that tolerance.
fn cholesky_positive<const N: usize>(m: &SMatrix<f64, N, N>) -> bool {
    let tol = 1e-12 * m.amax().max(f64::MIN_POSITIVE);
    let mut l = *m;
    for k in 0..N {
        let mut pivot = l[(k, k)];
        for j in 0..k {
            pivot -= l[(k, j)] * l[(k, j)];
        }
        if pivot <= tol {
            return false;
        }
        let s = pivot.sqrt();
        l[(k, k)] = s;
        for i in (k + 1)..N {
            let mut v = l[(i, k)];
            for j in 0..k {
                v -= l[(i, j)] * l[(k, j)];
            }
            l[(i, k)] = v / s;
        }
    }
    true
}

/// Admissibility verdicts at a point, with margins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityReport {
    pub eps2: f64,
    pub eps2_positive: bool,
    pub c_positive: bool,
    pub d_positive: bool,
    /// ⟨μa,b⟩² < ⟨Ca,a⟩⟨Cb,b⟩ for all (a,b) ≠ 0, decided through the Schur
    /// complement C + μC⁻¹μ ≻ 0 (given C ≻ 0).
    pub pairing_condition: bool,
    pub in_u0: bool,
    /// Smallest eigenvalue of D.
    pub d_min_eigenvalue: f64,
    /// φ − ∂_rφ (positive on U₀).
    pub phi_minus_dr: f64,
}

/// Decides membership in U₀: ε² > 0 together with D = [[C, −μ],[μ, C]] ≻ 0.
/// D-positivity is decided by a tolerance-pivoted factorization; the Schur
/// route provides the equivalent pairing criterion independently.
pub fn admissibility(jet: &Jet3, y: Point3) -> AdmissibilityReport {
    let eps2 = epsilon_sq(jet, y);
    let c = Matrix3::from_fn(|i, j| jet.hess[i][j]);
    let mu = mu_matrix(y);
    let d = block_matrix_d(jet, y);

    let c_positive = cholesky_positive(&c);
    let d_positive = cholesky_positive(&d);
    let pairing_condition = c_positive
        && match c.try_inverse() {
            Some(c_inv) => {
                let schur = c + mu * c_inv * mu;
                cholesky_positive(&schur)
            }
            None => false,
        };
    let d_min_eigenvalue = SymmetricEigen::new(d).eigenvalues.min();

    AdmissibilityReport {
        eps2,
        eps2_positive: eps2 > 0.0,
        c_positive,
        d_positive,
        pairing_condition,
        in_u0: eps2 > 0.0 && d_positive,
        d_min_eigenvalue,
        phi_minus_dr: jet.phi - jet.radial_derivative(y),
    }
}

/// All pointwise structure data derived from a jet, with the coefficient
/// derivatives needed to apply the exterior derivative.
#[derive(Debug, Clone)]
pub struct StructureFrame {
    pub y: Point3,
    pub eps2: f64,
    pub eps: f64,
    pub eps_grad: [f64; 3],
    /// ε² lies in (0, 1e-12): the coframe is close to degenerate.
    pub near_degenerate: bool,
    pub c: [[f64; 3]; 3],
    pub dc: [[[f64; 3]; 3]; 3],
    pub v: [f64; 3],
    pub mu: [[f64; 3]; 3],
    pub c_forms: [FormJet; 3],
    pub c_form: FormJet,
    pub eta: FormJet,
    pub d_theta: [FormJet; 3],
    pub d_gamma: [FormJet; 3],
    pub omega: FormJet,
    pub psi_plus: FormJet,
    pub psi_minus: FormJet,
}

/// Builds the structure frame at y. Fails outside U₀ (where ε² ≤ 0 the
/// coframe normalization dy_i = −3εγⁱ is undefined).
pub fn frame_at(jet: &Jet3, y: Point3) -> Result<StructureFrame, StructureError> {
    frame_at_signed(jet, y, false)
}

/// Same as [`frame_at`] but with ε = −√(ε²). Flipping the sign of ε flips
/// ψ± consistently and leaves every residual invariant.
pub fn frame_at_signed(
    jet: &Jet3,
    y: Point3,
    negative_eps: bool,
) -> Result<StructureFrame, StructureError> {
    let eps2 = epsilon_sq(jet, y);
    if eps2 <= 0.0 {
        return Err(StructureError::OutsideU0 { y: y.0, eps2 });
    }

    let yj = [
        ScalarJet::coordinate(0, y[0]),
        ScalarJet::coordinate(1, y[1]),
        ScalarJet::coordinate(2, y[2]),
    ];
    let phi_j = ScalarJet {
        value: jet.phi,
        grad: jet.grad,
    };
    let grad_j = [
        ScalarJet {
            value: jet.grad[0],
            grad: jet.hess[0],
        },
        ScalarJet {
            value: jet.grad[1],
            grad: jet.hess[1],
        },
        ScalarJet {
            value: jet.grad[2],
            grad: jet.hess[2],
        },
    ];
    let c_j = |i: usize, j: usize| ScalarJet {
        value: jet.hess[i][j],
        grad: jet.third[i][j],
    };

    let dr_j = yj[0] * grad_j[0] + yj[1] * grad_j[1] + yj[2] * grad_j[2];
    let eps2_j = (phi_j - dr_j) * (8.0 / 3.0);
    let sign = if negative_eps { -1.0 } else { 1.0 };
    let eps_j = eps2_j.sqrt() * sign;

    let gamma_fj: [FormJet; 3] =
        std::array::from_fn(|i| FormJet::constant(Form::generator(GAMMA[i])));
    let theta_fj: [FormJet; 3] =
        std::array::from_fn(|i| FormJet::constant(Form::generator(THETA[i])));

    let c_forms: [FormJet; 3] = std::array::from_fn(|i| {
        gamma_fj[0].scale(c_j(i, 0)) + gamma_fj[1].scale(c_j(i, 1)) + gamma_fj[2].scale(c_j(i, 2))
    });
    let c_form = c_forms[0].scale(yj[0]) + c_forms[1].scale(yj[1]) + c_forms[2].scale(yj[2]);

    let g23 = FormJet::constant(Form::monomial(&[GAMMA[1], GAMMA[2]], 1.0));
    let g31 = FormJet::constant(Form::monomial(&[GAMMA[2], GAMMA[0]], 1.0));
    let g12 = FormJet::constant(Form::monomial(&[GAMMA[0], GAMMA[1]], 1.0));
    let eta = g23.scale(yj[0]) + g31.scale(yj[1]) + g12.scale(yj[2]);

    // μ₁₂ = y₃, μ₁₃ = −y₂, μ₂₃ = y₁
    let mu_pairs = [(0usize, 1usize, yj[2]), (0, 2, -yj[1]), (1, 2, yj[0])];
    let mut omega = FormJet::zero(2);
    for &(i, j, m) in &mu_pairs {
        let tt = FormJet::constant(Form::monomial(&[THETA[i], THETA[j]], 1.0));
        let gg = FormJet::constant(Form::monomial(&[GAMMA[i], GAMMA[j]], 1.0));
        omega = omega + (tt + gg).scale(m);
    }
    for i in 0..3 {
        omega = omega + theta_fj[i].wedge(&c_forms[i]).expect("1+1 <= 6");
    }

    let psi_plus_base = Form::monomial(&[GAMMA[0], GAMMA[1], GAMMA[2]], 1.0)
        + Form::monomial(&[THETA[0], THETA[1], GAMMA[2]], -1.0)
        + Form::monomial(&[THETA[2], THETA[0], GAMMA[1]], -1.0)
        + Form::monomial(&[THETA[1], THETA[2], GAMMA[0]], -1.0);
    let psi_minus_base = Form::monomial(&[THETA[0], THETA[1], THETA[2]], 1.0)
        + Form::monomial(&[GAMMA[0], GAMMA[1], THETA[2]], -1.0)
        + Form::monomial(&[GAMMA[2], GAMMA[0], THETA[1]], -1.0)
        + Form::monomial(&[GAMMA[1], GAMMA[2], THETA[0]], -1.0);
    let psi_plus = FormJet::constant(psi_plus_base).scale(eps_j);
    let psi_minus = FormJet::constant(psi_minus_base).scale(eps_j);

    let four_over_eps = eps_j.recip() * 4.0;
    let d_theta = [
        (c_forms[1].wedge(&c_forms[2]).expect("1+1 <= 6") - eta.scale(yj[0])).scale(four_over_eps),
        (c_forms[2].wedge(&c_forms[0]).expect("1+1 <= 6") - eta.scale(yj[1])).scale(four_over_eps),
        (c_forms[0].wedge(&c_forms[1]).expect("1+1 <= 6") - eta.scale(yj[2])).scale(four_over_eps),
    ];
    let d_gamma: [FormJet; 3] = std::array::from_fn(|i| {
        -(c_form.wedge(&gamma_fj[i]).expect("1+1 <= 6")).scale(four_over_eps)
    });

    let mu = mu_matrix(y);
    Ok(StructureFrame {
        y,
        eps2,
        eps: eps_j.value,
        eps_grad: eps_j.grad,
        near_degenerate: eps2 < 1e-12,
        c: jet.hess,
        dc: jet.third,
        v: y.0,
        mu: [
            [mu[(0, 0)], mu[(0, 1)], mu[(0, 2)]],
            [mu[(1, 0)], mu[(1, 1)], mu[(1, 2)]],
            [mu[(2, 0)], mu[(2, 1)], mu[(2, 2)]],
        ],
        c_forms,
        c_form,
        eta,
        d_theta,
        d_gamma,
        omega,
        psi_plus,
        psi_minus,
    })
}

/// Exterior derivative of a coefficient jet through the structure equations:
/// d(Σ f_I e_I) = Σ df_I∧e_I + Σ f_I d(e_I) with df = −3ε Σ_k (∂f/∂y_k)γᵏ
/// and the generator differentials dθⁱ, dγⁱ taken from the frame.
pub fn d(fj: &FormJet, frame: &StructureFrame) -> Form {
    let degree = fj.value.degree();
    if degree == 6 {
        return Form::zero(6);
    }
    let mut out = Form::zero(degree + 1);
    for k in 0..3 {
        let dyk = Form::generator(GAMMA[k]) * (-3.0 * frame.eps);
        out += dyk.wedge(&fj.grad[k]).expect("1 + deg <= 6");
    }
    let dgen: [&Form; 6] = [
        &frame.d_theta[0].value,
        &frame.d_theta[1].value,
        &frame.d_theta[2].value,
        &frame.d_gamma[0].value,
        &frame.d_gamma[1].value,
        &frame.d_gamma[2].value,
    ];
    leibniz_terms(&fj.value, |coeff, g, rest| {
        out += dgen[g].wedge(&rest).expect("2 + deg-1 <= 6") * coeff;
    });
    out
}

/// Hitchin-condition residuals of the pair (ω, ψ⁺) and the induced (J, g).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HitchinReport {
    /// ‖ω∧ψ⁺‖ (compatibility (i)).
    pub wedge_zero: f64,
    /// |tr K² + (1/6)(ω³)²| in units of the reference top form squared.
    pub trk_residual: f64,
    /// ‖ψ⁺∧ψ⁻ − (2/3)ω³‖.
    pub comp_residual: f64,
    /// ‖J² + Id‖ for J = 6K/ω³.
    pub j_square_residual: f64,
    /// Smallest eigenvalue of g = ω(·, J·) (positive definiteness is
    /// condition (iii)).
    pub g_min_eigenvalue: f64,
    /// Coefficient of ω³ against θ¹²³∧γ¹²³.
    pub omega3: f64,
}

/// Checks the algebraic SU(3) compatibility of the frame's (ω, ψ±).
///
/// The operator is normalized as K(X) = −(1/2)·(X⌟ψ⁺)∧ψ⁺ against the
/// reference top form; with this scale J := 6K/ω³ squares to −Id and
/// g = ω(·, J·) is the induced metric whenever the conditions hold.
pub fn hitchin_check(frame: &StructureFrame) -> Result<HitchinReport, StructureError> {
    let omega = &frame.omega.value;
    let psi_plus = &frame.psi_plus.value;
    let psi_minus = &frame.psi_minus.value;

    let wedge_zero = omega.wedge(psi_plus).expect("2+3 <= 6").norm_sup();

    let omega2 = omega.wedge(omega).expect("2+2 <= 6");
    let omega3 = omega2.wedge(omega).expect("4+2 <= 6");
    let w = omega3.top_coefficient();
    if w.abs() <= 1e-14 * omega.norm_sup().powi(3).max(f64::MIN_POSITIVE) {
        return Err(StructureError::DegenerateOmega);
    }

    let k = k_tensor(psi_plus) * (-0.5);
    let k2 = k * k;
    let trk_residual = (k2.trace() + w * w / 6.0).abs();

    let j = k * (6.0 / w);
    let j_square_residual = (j * j + Matrix6::identity()).abs().max();

    let mut big_omega = Matrix6::zeros();
    for a in 0..6 {
        for b in (a + 1)..6 {
            let c = omega.coeff(&[a, b]);
            big_omega[(a, b)] = c;
            big_omega[(b, a)] = -c;
        }
    }
    let g = big_omega * j;
    let g_sym = (g + g.transpose()) * 0.5;
    let g_min_eigenvalue = SymmetricEigen::new(g_sym).eigenvalues.min();

    let comp_residual =
        (psi_plus.wedge(psi_minus).expect("3+3 <= 6") - omega3 * (2.0 / 3.0)).norm_sup();

    Ok(HitchinReport {
        wedge_zero,
        trk_residual,
        comp_residual,
        j_square_residual,
        g_min_eigenvalue,
        omega3: w,
    })
}

/// Residuals of the nearly-Kähler structure equations and the associated
/// integrability system at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NKResidualReport {
    /// |det C − (8/3)φ + (8/3)∂_rφ − ᵗVCV|.
    pub ma_residual: f64,
    /// |det C − ε² − ᵗVCV|.
    pub vol1_residual: f64,
    /// ‖dω − 3ψ⁺‖.
    pub nk1_residual: f64,
    /// ‖dψ⁻ + 2ω∧ω‖.
    pub nk2_residual: f64,
    /// ‖d(dθⁱ)‖ for i = 1, 2, 3 (closedness of the 2-forms (ε/4)dθⁱ).
    pub integrability_residuals: [f64; 3],
    pub hitchin: HitchinReport,
    pub near_degenerate: bool,
    /// max of the differential residuals rescaled by ε (the γⁱ coefficients
    /// grow like 1/ε near the boundary of U₀).
    pub eps_weighted_max: f64,
}

impl NKResidualReport {
    /// Largest of the differential-equation residuals.
    pub fn max_differential_residual(&self) -> f64 {
        self.nk1_residual
            .max(self.nk2_residual)
            .max(self.integrability_residuals[0])
            .max(self.integrability_residuals[1])
            .max(self.integrability_residuals[2])
    }
}

/// Evaluates every structure-equation residual of the jet at y.
pub fn nk_residuals(jet: &Jet3, y: Point3) -> Result<NKResidualReport, StructureError> {
    let frame = frame_at(jet, y)?;
    residuals_on_frame(jet, &frame)
}

pub(crate) fn residuals_on_frame(
    jet: &Jet3,
    frame: &StructureFrame,
) -> Result<NKResidualReport, StructureError> {
    let ma = ma_residual(jet, frame.y).abs();
    let vol1 = (jet.det_hess() - frame.eps2 - jet.vcv(frame.y)).abs();

    let d_omega = d(&frame.omega, frame);
    let nk1 = (d_omega - frame.psi_plus.value * 3.0).norm_sup();

    let d_psi_minus = d(&frame.psi_minus, frame);
    let omega2 = frame
        .omega
        .value
        .wedge(&frame.omega.value)
        .expect("2+2 <= 6");
    let nk2 = (d_psi_minus + omega2 * 2.0).norm_sup();

    let integrability: [f64; 3] = std::array::from_fn(|i| d(&frame.d_theta[i], frame).norm_sup());

    let hitchin = hitchin_check(frame)?;

    let max_diff = nk1
        .max(nk2)
        .max(integrability[0])
        .max(integrability[1])
        .max(integrability[2]);

    Ok(NKResidualReport {
        ma_residual: ma,
        vol1_residual: vol1,
        nk1_residual: nk1,
        nk2_residual: nk2,
        integrability_residuals: integrability,
        hitchin,
        near_degenerate: frame.near_degenerate,
        eps_weighted_max: frame.eps.abs() * max_diff,
    })
}
