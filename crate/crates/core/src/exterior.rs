//! Grassmann algebra over the fixed 6-generator coframe {θ¹, θ², θ³, γ¹, γ², γ³}.
//!
//! Generators are indexed 0..6 in the order θ¹ < θ² < θ³ < γ¹ < γ² < γ³ and a
//! degree-k form is stored densely over the C(6,k) strictly increasing index
//! tuples (encoded as bitmasks, ordered by ascending mask value). All signs are
//! normalized to increasing tuples at insertion.
//!
//! Besides the plain pointwise algebra ([`Form`]) this module provides
//! [`ScalarJet`] (a value with its y-gradient) and [`FormJet`] (a form whose
//! coefficients carry y-gradients). One gradient order is exactly what the
//! coframe exterior derivative needs.

use nalgebra::Matrix6;
use thiserror::Error;

/// Number of coframe generators.
pub const GENERATORS: usize = 6;

/// Generator indices of θ¹, θ², θ³.
pub const THETA: [usize; 3] = [0, 1, 2];
/// Generator indices of γ¹, γ², γ³.
pub const GAMMA: [usize; 3] = [3, 4, 5];

/// Basis dimension of Λᵏ for k = 0..6.
pub const DIMS: [usize; 7] = [1, 6, 15, 20, 15, 6, 1];

const MAX_DIM: usize = 20;
const FULL_MASK: u8 = 0b11_1111;

/// Rank of a monomial mask within its degree class (ascending mask order),
/// and the inverse table.
const TABLES: ([u8; 64], [[u8; MAX_DIM]; 7]) = build_tables();

const fn build_tables() -> ([u8; 64], [[u8; MAX_DIM]; 7]) {
    let mut mask_to_rank = [0u8; 64];
    let mut rank_to_mask = [[0u8; MAX_DIM]; 7];
    let mut counts = [0usize; 7];
    let mut m = 0usize;
    while m < 64 {
        let d = (m as u32).count_ones() as usize;
        mask_to_rank[m] = counts[d] as u8;
        rank_to_mask[d][counts[d]] = m as u8;
        counts[d] += 1;
        m += 1;
    }
    (mask_to_rank, rank_to_mask)
}

#[inline]
fn rank_of(mask: u8) -> usize {
    TABLES.0[mask as usize] as usize
}

#[inline]
fn mask_of(degree: usize, rank: usize) -> u8 {
    TABLES.1[degree][rank]
}

/// Sign of merging two disjoint increasing tuples a∧b into one increasing
/// tuple: parity of the number of pairs (i ∈ a, j ∈ b) with i > j.
#[inline]
fn merge_sign(a: u8, b: u8) -> f64 {
    let mut inversions = 0u32;
    let mut bits = b;
    while bits != 0 {
        let j = bits.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        bits &= bits - 1;
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("wedge degree overflow: {left} + {right} > 6")]
    DegreeOverflow { left: usize, right: usize },
}

/// Homogeneous element of the Grassmann algebra over the coframe.
#[derive(Clone, Copy)]
pub struct Form {
    degree: usize,
    coeffs: [f64; MAX_DIM],
}

impl Form {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= 6, "form degree out of range");
        Form {
            degree,
            coeffs: [0.0; MAX_DIM],
        }
    }

    pub fn scalar(value: f64) -> Self {
        let mut f = Form::zero(0);
        f.coeffs[0] = value;
        f
    }

    /// The basis 1-form of generator `g` (0..6).
    pub fn generator(g: usize) -> Self {
        assert!(g < GENERATORS, "generator index out of range");
        let mut f = Form::zero(1);
        f.coeffs[rank_of(1 << g)] = 1.0;
        f
    }

    /// Wedge monomial c·e_{i1}∧…∧e_{ik} for an arbitrary index sequence.
    /// The sign is normalized to the increasing tuple; repeated indices give 0.
    pub fn monomial(indices: &[usize], coeff: f64) -> Self {
        let degree = indices.len();
        assert!(degree <= 6, "monomial degree out of range");
        let mut f = Form::zero(degree);
        let mut mask = 0u8;
        let mut sign = 1.0;
        for &i in indices {
            assert!(i < GENERATORS, "generator index out of range");
            let bit = 1u8 << i;
            if mask & bit != 0 {
                return f; // repeated generator: zero monomial
            }
            // parity of moving e_i left past the already-placed larger indices
            if (mask >> (i + 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        f.coeffs[rank_of(mask)] = sign * coeff;
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn dim(&self) -> usize {
        DIMS[self.degree]
    }

    /// Coefficient of the (sign-normalized) monomial given by `indices`.
    /// Returns 0 for a repeated index or a length different from the degree.
    pub fn coeff(&self, indices: &[usize]) -> f64 {
        if indices.len() != self.degree {
            return 0.0;
        }
        let probe = Form::monomial(indices, 1.0);
        let mut mask = 0u8;
        for &i in indices {
            mask |= 1 << i;
        }
        if (mask.count_ones() as usize) != self.degree {
            return 0.0;
        }
        let r = rank_of(mask);
        probe.coeffs[r] * self.coeffs[r]
    }

    #[inline]
    pub(crate) fn coeff_at(&self, rank: usize) -> f64 {
        self.coeffs[rank]
    }

    #[inline]
    pub(crate) fn set_at(&mut self, rank: usize, value: f64) {
        self.coeffs[rank] = value;
    }

    /// Iterator over (mask, coefficient) pairs of the stored basis monomials.
    pub(crate) fn entries(&self) -> impl Iterator<Item = (u8, f64)> + '_ {
        (0..self.dim()).map(|r| (mask_of(self.degree, r), self.coeffs[r]))
    }

    pub fn wedge(&self, other: &Form) -> Result<Form, ExteriorError> {
        let degree = self.degree + other.degree;
        if degree > 6 {
            return Err(ExteriorError::DegreeOverflow {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut out = Form::zero(degree);
        for ra in 0..self.dim() {
            let ca = self.coeffs[ra];
            if ca == 0.0 {
                continue;
            }
            let ma = mask_of(self.degree, ra);
            for rb in 0..other.dim() {
                let cb = other.coeffs[rb];
                if cb == 0.0 {
                    continue;
                }
                let mb = mask_of(other.degree, rb);
                if ma & mb != 0 {
                    continue;
                }
                out.coeffs[rank_of(ma | mb)] += merge_sign(ma, mb) * ca * cb;
            }
        }
        Ok(out)
    }

    /// Interior product against the dual vector of generator `g`.
    /// A 0-form contracts to the zero 0-form.
    pub fn interior_gen(g: usize, a: &Form) -> Form {
        assert!(g < GENERATORS, "generator index out of range");
        if a.degree == 0 {
            return Form::zero(0);
        }
        let mut out = Form::zero(a.degree - 1);
        let bit = 1u8 << g;
        for r in 0..a.dim() {
            let c = a.coeffs[r];
            if c == 0.0 {
                continue;
            }
            let m = mask_of(a.degree, r);
            if m & bit == 0 {
                continue;
            }
            // sign (−1)^p where p = position of g inside the increasing tuple
            let below = (m & (bit - 1)).count_ones();
            let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
            out.coeffs[rank_of(m & !bit)] += sign * c;
        }
        out
    }

    /// Interior product against the vector Σ vᵍ·(dual of generator g).
    pub fn interior(v: &[f64; GENERATORS], a: &Form) -> Form {
        if a.degree == 0 {
            return Form::zero(0);
        }
        let mut out = Form::zero(a.degree - 1);
        for (g, &vg) in v.iter().enumerate() {
            if vg != 0.0 {
                out = out + Form::interior_gen(g, a) * vg;
            }
        }
        out
    }

    /// Max absolute coefficient; zero iff the form vanishes.
    pub fn norm_sup(&self) -> f64 {
        self.coeffs[..self.dim()]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// Coefficient-wise comparison with absolute tolerance. Forms of different
    /// degree only compare equal when both vanish.
    pub fn approx_eq(&self, other: &Form, tol: f64) -> bool {
        if self.degree != other.degree {
            return self.norm_sup() <= tol && other.norm_sup() <= tol;
        }
        self.coeffs[..self.dim()]
            .iter()
            .zip(&other.coeffs[..self.dim()])
            .all(|(a, b)| (a - b).abs() <= tol)
    }

    /// Coefficient of the reference top form θ¹²³∧γ¹²³ (only for 6-forms).
    pub fn top_coefficient(&self) -> f64 {
        assert_eq!(self.degree, 6, "top_coefficient requires a 6-form");
        self.coeffs[0]
    }
}

impl std::ops::Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        assert_eq!(self.degree, rhs.degree, "degree mismatch in form sum");
        let mut out = self;
        for r in 0..out.dim() {
            out.coeffs[r] += rhs.coeffs[r];
        }
        out
    }
}

impl std::ops::AddAssign for Form {
    fn add_assign(&mut self, rhs: Form) {
        assert_eq!(self.degree, rhs.degree, "degree mismatch in form sum");
        for r in 0..self.dim() {
            self.coeffs[r] += rhs.coeffs[r];
        }
    }
}

impl std::ops::Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        assert_eq!(
            self.degree, rhs.degree,
            "degree mismatch in form difference"
        );
        let mut out = self;
        for r in 0..out.dim() {
            out.coeffs[r] -= rhs.coeffs[r];
        }
        out
    }
}

impl std::ops::Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        self * -1.0
    }
}

impl std::ops::Mul<f64> for Form {
    type Output = Form;
    fn mul(self, rhs: f64) -> Form {
        let mut out = self;
        for r in 0..out.dim() {
            out.coeffs[r] *= rhs;
        }
        out
    }
}

impl std::fmt::Debug for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl std::fmt::Display for Form {
    /// Prints in coframe notation, e.g. `0.5·θ^{12}∧γ^{3}`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (mask, c) in self.entries() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if self.degree == 0 {
                continue;
            }
            let thetas: String = (0..3)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| char::from(b'1' + i as u8))
                .collect();
            let gammas: String = (3..6)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| char::from(b'1' + (i - 3) as u8))
                .collect();
            if !thetas.is_empty() {
                write!(f, "·θ^{{{thetas}}}")?;
            }
            if !gammas.is_empty() {
                if thetas.is_empty() {
                    write!(f, "·γ^{{{gammas}}}")?;
                } else {
                    write!(f, "∧γ^{{{gammas}}}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Hitchin's operator of a 3-form ψ⁺: the matrix K with
/// (X⌟ψ⁺)∧ψ⁺ = K(X)⌟Θ, where Θ = θ¹²³∧γ¹²³ is the reference top form.
/// For any 3-form it satisfies K² = (1/6)·tr(K²)·Id.
pub fn k_tensor(psi_plus: &Form) -> Matrix6<f64> {
    assert_eq!(psi_plus.degree(), 3, "k_tensor requires a 3-form");
    let mut k = Matrix6::zeros();
    for a in 0..GENERATORS {
        let five = Form::interior_gen(a, psi_plus)
            .wedge(psi_plus)
            .expect("2+3 <= 6");
        for b in 0..GENERATORS {
            // e_b⌟Θ = (−1)^b · (monomial with generator b removed)
            let missing = FULL_MASK & !(1u8 << b);
            let sign = if b % 2 == 0 { 1.0 } else { -1.0 };
            k[(b, a)] = sign * five.coeff_at(rank_of(missing));
        }
    }
    k
}

/// A scalar value together with its gradient in the base coordinates y.
/// Plain first-order dual-number arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarJet {
    pub value: f64,
    pub grad: [f64; 3],
}

impl ScalarJet {
    pub fn constant(value: f64) -> Self {
        ScalarJet {
            value,
            grad: [0.0; 3],
        }
    }

    /// The coordinate function y_i evaluated at `value`.
    pub fn coordinate(i: usize, value: f64) -> Self {
        let mut grad = [0.0; 3];
        grad[i] = 1.0;
        ScalarJet { value, grad }
    }

    pub fn sqrt(self) -> Self {
        let v = self.value.sqrt();
        let inv = 0.5 / v;
        ScalarJet {
            value: v,
            grad: [self.grad[0] * inv, self.grad[1] * inv, self.grad[2] * inv],
        }
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.value;
        let d = -inv * inv;
        ScalarJet {
            value: inv,
            grad: [self.grad[0] * d, self.grad[1] * d, self.grad[2] * d],
        }
    }
}

impl std::ops::Add for ScalarJet {
    type Output = ScalarJet;
    fn add(self, rhs: ScalarJet) -> ScalarJet {
        ScalarJet {
            value: self.value + rhs.value,
            grad: [
                self.grad[0] + rhs.grad[0],
                self.grad[1] + rhs.grad[1],
                self.grad[2] + rhs.grad[2],
            ],
        }
    }
}

impl std::ops::Sub for ScalarJet {
    type Output = ScalarJet;
    fn sub(self, rhs: ScalarJet) -> ScalarJet {
        self + (-rhs)
    }
}

impl std::ops::Neg for ScalarJet {
    type Output = ScalarJet;
    fn neg(self) -> ScalarJet {
        ScalarJet {
            value: -self.value,
            grad: [-self.grad[0], -self.grad[1], -self.grad[2]],
        }
    }
}

impl std::ops::Mul for ScalarJet {
    type Output = ScalarJet;
    fn mul(self, rhs: ScalarJet) -> ScalarJet {
        ScalarJet {
            value: self.value * rhs.value,
            grad: [
                self.grad[0] * rhs.value + self.value * rhs.grad[0],
                self.grad[1] * rhs.value + self.value * rhs.grad[1],
                self.grad[2] * rhs.value + self.value * rhs.grad[2],
            ],
        }
    }
}

impl std::ops::Mul<f64> for ScalarJet {
    type Output = ScalarJet;
    fn mul(self, rhs: f64) -> ScalarJet {
        ScalarJet {
            value: self.value * rhs,
            grad: [self.grad[0] * rhs, self.grad[1] * rhs, self.grad[2] * rhs],
        }
    }
}

impl std::ops::Div for ScalarJet {
    type Output = ScalarJet;
    fn div(self, rhs: ScalarJet) -> ScalarJet {
        self * rhs.recip()
    }
}

/// A form whose coefficients are functions of y, carried to first order:
/// `grad[k]` holds the coefficient-wise partial ∂/∂y_k of `value`.
#[derive(Clone, Copy, Debug)]
pub struct FormJet {
    pub value: Form,
    pub grad: [Form; 3],
}

impl FormJet {
    pub fn zero(degree: usize) -> Self {
        FormJet {
            value: Form::zero(degree),
            grad: [Form::zero(degree); 3],
        }
    }

    /// A form with constant coefficients.
    pub fn constant(form: Form) -> Self {
        let degree = form.degree();
        FormJet {
            value: form,
            grad: [Form::zero(degree); 3],
        }
    }

    /// Product with a scalar function (product rule on the gradient).
    pub fn scale(&self, s: ScalarJet) -> FormJet {
        FormJet {
            value: self.value * s.value,
            grad: [
                self.grad[0] * s.value + self.value * s.grad[0],
                self.grad[1] * s.value + self.value * s.grad[1],
                self.grad[2] * s.value + self.value * s.grad[2],
            ],
        }
    }

    pub fn wedge(&self, other: &FormJet) -> Result<FormJet, ExteriorError> {
        let value = self.value.wedge(&other.value)?;
        let mut grad = [Form::zero(value.degree()); 3];
        for k in 0..3 {
            grad[k] = self.grad[k].wedge(&other.value)? + self.value.wedge(&other.grad[k])?;
        }
        Ok(FormJet { value, grad })
    }
}

impl std::ops::Add for FormJet {
    type Output = FormJet;
    fn add(self, rhs: FormJet) -> FormJet {
        FormJet {
            value: self.value + rhs.value,
            grad: [
                self.grad[0] + rhs.grad[0],
                self.grad[1] + rhs.grad[1],
                self.grad[2] + rhs.grad[2],
            ],
        }
    }
}

impl std::ops::Sub for FormJet {
    type Output = FormJet;
    fn sub(self, rhs: FormJet) -> FormJet {
        FormJet {
            value: self.value - rhs.value,
            grad: [
                self.grad[0] - rhs.grad[0],
                self.grad[1] - rhs.grad[1],
                self.grad[2] - rhs.grad[2],
            ],
        }
    }
}

impl std::ops::Neg for FormJet {
    type Output = FormJet;
    fn neg(self) -> FormJet {
        FormJet {
            value: -self.value,
            grad: [-self.grad[0], -self.grad[1], -self.grad[2]],
        }
    }
}

/// Iterate the monomials of `form`; for each generator g at sorted position p
/// inside a monomial, calls `visit(coeff·(−1)^p, g, monomial \ g)`.
/// This is the combinatorial core of the graded Leibniz rule.
pub(crate) fn leibniz_terms(form: &Form, mut visit: impl FnMut(f64, usize, Form)) {
    let degree = form.degree();
    if degree == 0 {
        return;
    }
    for (mask, c) in form.entries() {
        if c == 0.0 {
            continue;
        }
        let mut pos = 0usize;
        for g in 0..GENERATORS {
            let bit = 1u8 << g;
            if mask & bit == 0 {
                continue;
            }
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            let mut rest = Form::zero(degree - 1);
            rest.set_at(rank_of(mask & !bit), 1.0);
            visit(sign * c, g, rest);
            pos += 1;
        }
    }
}
