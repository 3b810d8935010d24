//! Toolkit for toric nearly-Kähler structures built from a scalar potential
//! φ on ℝ³.
//!
//! Given third-order jets of φ in the moment coordinates y = (y₁, y₂, y₃), the
//! crate decides whether φ solves the Monge–Ampère-type equation
//! det(Hess φ) = (8/3)φ − (11/3)∂_rφ + ∂_r²φ, computes the admissible domain
//! U₀, assembles the induced SU(3)-structure (ω, ψ⁺, ψ⁻) in the natural
//! coframe {θⁱ, γⁱ}, and certifies the nearly-Kähler structure equations
//! dω = 3ψ⁺ and dψ⁻ = −2ω∧ω pointwise. A radial reduction integrates the
//! associated second-order ODE to generate new potentials.
//!
//! Modules:
//! - [`exterior`]: Grassmann algebra over the fixed 6-generator coframe.
//! - [`jets`]: third-order jets of candidate potentials (exact or finite
//!   difference) and the built-in families.
//! - [`structure`]: the pointwise SU(3)/NK frame, admissibility and residual
//!   reports.
//! - [`radial`]: the radial ODE x″ = F(t, x, x′), event-detecting integration
//!   and the admissibility wedge 𝒮.

pub mod exterior;
pub mod jets;
pub mod radial;
pub mod structure;

pub use exterior::{k_tensor, Form, FormJet, ScalarJet};
pub use jets::{
    finite_difference_jet, radial_phi, s3s3_phi, DiffMode, Jet3, JetsError, PhiFamily, Point3,
    Poly3,
};
pub use radial::{
    admissible_window, in_s, integrate, rhs, Controls, PowerLawRadial, RadialError, RadialJet,
    RadialNode, RadialSolution, RadialSource, RadialState, Termination,
};
pub use structure::{
    admissibility, d, epsilon_sq, frame_at, hitchin_check, ma_residual, nk_residuals,
    AdmissibilityReport, HitchinReport, NKResidualReport, StructureError, StructureFrame,
};
