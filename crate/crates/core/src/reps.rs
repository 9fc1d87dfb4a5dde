//! The finite-dimensional pieces of the automorphy factors: Jacobians of the
//! fractional-linear actions and the representation they factor through.
//!
//! *Hermitian side.* The derivative of Z ↦ M⟨Z⟩ at Z is the rank-one-factored
//! map W ↦ (C̄Z′ + D̄)′⁻¹ · W · (CZ + D)⁻¹, with determinant
//! (det M)² · det(CZ + D)⁻⁴ when flattened to ℂ⁴ in the row-major coordinate
//! order (z₁₁, z₁₂, z₂₁, z₂₂).
//!
//! *Quaternionic side.* The map ρ(U)W = UWŪ′ on quaternionic 2×2 matrices is
//! a polynomial in the entries of the check image Ǔ and extends
//! holomorphically to all of GL(4, ℂ) as ρ_Jac(A)W = A·W·J̃A′J̃⁻¹. The
//! extension preserves the six-dimensional slice {J̃W′J̃⁻¹ = W} for *every* A,
//! is multiplicative, and the derivative of the quaternionic Möbius action is
//! Jac(M, Z) = ρ_Jac(V̌⁻¹) with V̌ = J̃(ČŽ + Ď)′J̃⁻¹, of determinant
//! det(ČŽ + Ď)⁻³ on the slice.

use nalgebra::{Matrix2, Matrix4, SMatrix};
use num_complex::Complex64;
use thiserror::Error;

use crate::groups::{GroupElement, GroupError};
use crate::halfplane::{jtilde, HalfPlaneError, HermitianPoint, QuaternionicPoint};

pub type Matrix6 = SMatrix<Complex64, 6, 6>;

#[derive(Debug, Error)]
pub enum RepsError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    HalfPlane(#[from] HalfPlaneError),
    #[error("cocycle factor is numerically singular")]
    SingularFactor,
}

/// The map W ↦ left · W · right on 2×2 complex matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMap2 {
    pub left: Matrix2<Complex64>,
    pub right: Matrix2<Complex64>,
}

impl LinearMap2 {
    pub fn apply(&self, w: &Matrix2<Complex64>) -> Matrix2<Complex64> {
        self.left * w * self.right
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LinearMap2) -> LinearMap2 {
        LinearMap2 {
            left: self.left * other.left,
            right: other.right * self.right,
        }
    }

    /// Flatten to the 4×4 matrix acting on row-major coordinates
    /// (w₁₁, w₁₂, w₂₁, w₂₂): entry ((j,k), (l,m)) = left[j,l] · right[m,k].
    pub fn flatten(&self) -> Matrix4<Complex64> {
        Matrix4::from_fn(|row, col| {
            let (j, k) = (row / 2, row % 2);
            let (l, m) = (col / 2, col % 2);
            self.left[(j, l)] * self.right[(m, k)]
        })
    }
}

/// Flatten a 2×2 matrix into the row-major vector (w₁₁, w₁₂, w₂₁, w₂₂).
pub fn vec_row(w: &Matrix2<Complex64>) -> [Complex64; 4] {
    [w[(0, 0)], w[(0, 1)], w[(1, 0)], w[(1, 1)]]
}

/// The two cocycle matrices of the hermitian action:
/// U = CZ + D and V = C̄Z′ + D̄.
pub fn cocycle_pair(
    m: &GroupElement,
    z: &HermitianPoint,
) -> Result<(Matrix2<Complex64>, Matrix2<Complex64>), RepsError> {
    let [_, _, c, d] = m.blocks2()?;
    let u = c * z.z + d;
    let v = c.conjugate() * z.z.transpose() + d.conjugate();
    Ok((u, v))
}

/// Derivative of the hermitian Möbius action: W ↦ V′⁻¹ · W · U⁻¹.
pub fn hermitian_jacobian(
    m: &GroupElement,
    z: &HermitianPoint,
) -> Result<LinearMap2, RepsError> {
    let (u, v) = cocycle_pair(m, z)?;
    let ui = u.try_inverse().ok_or(RepsError::SingularFactor)?;
    let vti = v.transpose().try_inverse().ok_or(RepsError::SingularFactor)?;
    Ok(LinearMap2 {
        left: vti,
        right: ui,
    })
}

/// ρ_Jac(A)W = A · W · J̃A′J̃⁻¹ on raw 4×4 matrices.
pub fn rho_jac_apply(a: &Matrix4<Complex64>, w: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let j = jtilde();
    let jinv = -j;
    a * w * (j * a.transpose() * jinv)
}

/// The slice basis: packed unit vectors of the six coordinates.
fn slice_basis() -> [Matrix4<Complex64>; 6] {
    std::array::from_fn(|k| {
        let mut coords = [Complex64::ZERO; 6];
        coords[k] = Complex64::ONE;
        QuaternionicPoint::new(coords).pack()
    })
}

/// The 6×6 matrix of ρ_Jac(A) in slice coordinates
/// (z₀, z₂, z₁₀, z₁₁, z₁₂, z₁₃).
pub fn rho_jac_slice_matrix(a: &Matrix4<Complex64>) -> Result<Matrix6, RepsError> {
    let mut out = Matrix6::zeros();
    for (k, b) in slice_basis().iter().enumerate() {
        let img = QuaternionicPoint::unpack(&rho_jac_apply(a, b))?;
        for r in 0..6 {
            out[(r, k)] = img.coords[r];
        }
    }
    Ok(out)
}

/// The derivative of the quaternionic Möbius action in slice coordinates,
/// together with the GL(4, ℂ) factor it comes from.
#[derive(Debug, Clone)]
pub struct QuaternionicJacobian {
    /// V̌⁻¹ with V̌ = J̃(ČŽ + Ď)′J̃⁻¹; the slice map is ρ_Jac of this.
    pub factor: Matrix4<Complex64>,
    pub on_slice: Matrix6,
    /// det(ČŽ + Ď), whose inverse cube is the slice determinant.
    pub cocycle_det: Complex64,
}

pub fn quaternionic_jacobian(
    m: &GroupElement,
    z: &QuaternionicPoint,
) -> Result<QuaternionicJacobian, RepsError> {
    let [_, _, c, d] = m.blocks4()?;
    let u = c * z.pack() + d;
    let j = jtilde();
    let v = j * u.transpose() * (-j);
    let factor = v.try_inverse().ok_or(RepsError::SingularFactor)?;
    let on_slice = rho_jac_slice_matrix(&factor)?;
    Ok(QuaternionicJacobian {
        factor,
        on_slice,
        cocycle_det: u.determinant(),
    })
}
