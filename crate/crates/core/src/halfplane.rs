//! The rank-two hermitian half-plane and its quaternionic analogue.
//!
//! ℋ₂ = {Z ∈ ℂ^{2×2} : i(Z̄′ − Z) > 0} carries the action
//! Z ↦ M⟨Z⟩ = (AZ + B)(CZ + D)⁻¹. Membership is quantified by the *margin*
//! λ_min(i(Z̄′ − Z)) = 2·λ_min(Y) with Y = (Z − Z̄′)/(2i); all sampling and
//! truncation bounds are phrased in terms of it.
//!
//! The quaternionic half-plane sits inside ℂ^{4×4} through the entrywise
//! embedding x ↦ x̌: a point has six complex coordinates
//! (z₀, z₂, z₁₀, z₁₁, z₁₂, z₁₃), packed as the block matrix
//! [[z₀E, ž₁], [(z̄₁)̌, z₂E]] with z₁ = z₁₀ + z₁₁i₁ + z₁₂i₂ + z₁₃i₃. The image
//! is exactly the slice {W : J̃W′J̃⁻¹ = W}, J̃ = diag(J₂, J₂), and unpacking
//! verifies the slice property numerically. Membership uses the closed-form
//! margin (y₀ + y₂) − √((y₀ − y₂)² + 4N(y₁)) of the 2×2 quaternionic
//! imaginary part.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::QuatC;
use crate::groups::{GroupElement, GroupError, SignedPermutation};

/// Tolerance for the slice property when unpacking quaternionic points.
pub const SLICE_TOL: f64 = 1e-9;
/// Reject Möbius transforms whose cocycle CZ + D has a reciprocal condition
/// number (or lower bound thereof) below this.
pub const COCYCLE_RCOND_MIN: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum HalfPlaneError {
    #[error("point lies outside the half-plane (margin {margin:.3e})")]
    OutsideDomain { margin: f64 },
    #[error("cocycle CZ + D is numerically singular (rcond bound {rcond:.3e})")]
    IllConditionedCocycle { rcond: f64 },
    #[error("matrix deviates from the quaternionic slice by {deviation:.3e}")]
    SliceEscape { deviation: f64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Membership verdict with the quantitative margin that backs it.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MembershipReport {
    pub is_member: bool,
    pub margin: f64,
}

/// Smallest eigenvalue of a 2×2 hermitian matrix (imaginary parts of the
/// diagonal are ignored; callers pass matrices hermitian up to rounding).
pub fn lambda_min_2x2(h: &Matrix2<Complex64>) -> f64 {
    let t = (h[(0, 0)] + h[(1, 1)]).re;
    let d = (h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)]).re;
    let disc = (t * t - 4.0 * d).max(0.0);
    0.5 * (t - disc.sqrt())
}

/// A point of the hermitian half-plane (or at least a candidate for one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianPoint {
    pub z: Matrix2<Complex64>,
}

impl HermitianPoint {
    pub fn new(z: Matrix2<Complex64>) -> Self {
        Self { z }
    }

    /// The hermitian imaginary part Y = (Z − Z̄′)/(2i).
    pub fn imag_part(&self) -> Matrix2<Complex64> {
        let zbar_t = self.z.conjugate().transpose();
        (self.z - zbar_t) / Complex64::new(0.0, 2.0)
    }

    /// Margin λ_min(i(Z̄′ − Z)) = 2·λ_min(Y); positive exactly on ℋ₂.
    pub fn margin(&self) -> f64 {
        2.0 * lambda_min_2x2(&self.imag_part())
    }

    pub fn membership(&self) -> MembershipReport {
        let margin = self.margin();
        MembershipReport {
            is_member: margin > 0.0,
            margin,
        }
    }

    /// The involution Z ↦ Z′.
    pub fn transpose(&self) -> Self {
        Self::new(self.z.transpose())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.z - other.z).norm()
    }
}

/// Reciprocal condition number of a 2×2 complex matrix, exact via singular
/// values: σmin·σmax = |det|, σmax² = (t + √(t² − 4d))/2 with t = ‖U‖²_F,
/// d = |det U|².
fn rcond_2x2(u: &Matrix2<Complex64>) -> f64 {
    let t = u.iter().map(|e| e.norm_sqr()).sum::<f64>();
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let d = det.norm_sqr();
    if t == 0.0 {
        return 0.0;
    }
    let smax_sq = 0.5 * (t + (t * t - 4.0 * d).max(0.0).sqrt());
    d.sqrt() / smax_sq
}

/// Lower bound for the reciprocal condition number of a 4×4 complex matrix:
/// σmin ≥ |det|/σmax³ and σmax ≤ ‖U‖_F give rcond ≥ |det|/‖U‖⁴_F.
fn rcond_lower_4x4(u: &Matrix4<Complex64>) -> f64 {
    let f = u.norm();
    if f == 0.0 {
        return 0.0;
    }
    u.determinant().norm() / f.powi(4)
}

/// The fractional-linear action M⟨Z⟩ = (AZ + B)(CZ + D)⁻¹ for unitary M.
pub fn moebius_hermitian(
    m: &GroupElement,
    z: &HermitianPoint,
) -> Result<HermitianPoint, HalfPlaneError> {
    let [a, b, c, d] = m.blocks2()?;
    let u = c * z.z + d;
    let rc = rcond_2x2(&u);
    if rc < COCYCLE_RCOND_MIN {
        return Err(HalfPlaneError::IllConditionedCocycle { rcond: rc });
    }
    let inv = u.try_inverse().ok_or(HalfPlaneError::IllConditionedCocycle { rcond: rc })?;
    Ok(HermitianPoint::new((a * z.z + b) * inv))
}

/// The cocycle CZ + D of the hermitian action.
pub fn cocycle_hermitian(
    m: &GroupElement,
    z: &HermitianPoint,
) -> Result<Matrix2<Complex64>, HalfPlaneError> {
    let [_, _, c, d] = m.blocks2()?;
    Ok(c * z.z + d)
}

/// A point of the quaternionic half-plane in slice coordinates
/// (z₀, z₂, z₁₀, z₁₁, z₁₂, z₁₃).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuaternionicPoint {
    pub coords: [Complex64; 6],
}

impl QuaternionicPoint {
    pub fn new(coords: [Complex64; 6]) -> Self {
        Self { coords }
    }

    pub fn z0(&self) -> Complex64 {
        self.coords[0]
    }

    pub fn z2(&self) -> Complex64 {
        self.coords[1]
    }

    /// The quaternion coordinate z₁ with complex coefficients.
    pub fn z1(&self) -> QuatC {
        QuatC::new([self.coords[2], self.coords[3], self.coords[4], self.coords[5]])
    }

    /// Pack into the 4×4 complex matrix [[z₀E, ž₁], [(z̄₁)̌, z₂E]].
    pub fn pack(&self) -> Matrix4<Complex64> {
        let z1 = self.z1().embed();
        let z1c = self.z1().quat_conj().embed();
        let mut w = Matrix4::zeros();
        for k in 0..2 {
            w[(k, k)] = self.z0();
            w[(k + 2, k + 2)] = self.z2();
        }
        for r in 0..2 {
            for c in 0..2 {
                w[(r, c + 2)] = z1[(r, c)];
                w[(r + 2, c)] = z1c[(r, c)];
            }
        }
        w
    }

    /// Recover coordinates from a packed matrix, verifying it lies on the
    /// slice to within [`SLICE_TOL`].
    pub fn unpack(w: &Matrix4<Complex64>) -> Result<Self, HalfPlaneError> {
        let x = w.fixed_view::<2, 2>(0, 2).into_owned();
        let q = QuatC::from_embedded(&x);
        let z0 = (w[(0, 0)] + w[(1, 1)]) * Complex64::new(0.5, 0.0);
        let z2 = (w[(2, 2)] + w[(3, 3)]) * Complex64::new(0.5, 0.0);
        let candidate = Self::new([z0, z2, q.c[0], q.c[1], q.c[2], q.c[3]]);
        let deviation = (candidate.pack() - w).norm();
        if deviation > SLICE_TOL {
            return Err(HalfPlaneError::SliceEscape { deviation });
        }
        Ok(candidate)
    }

    /// Margin (y₀ + y₂) − √((y₀ − y₂)² + 4N(y₁)) of the imaginary part;
    /// positive exactly on the half-plane (y₀ > 0 and y₀y₂ − N(y₁) > 0).
    pub fn margin(&self) -> f64 {
        let y0 = self.coords[0].im;
        let y2 = self.coords[1].im;
        let n: f64 = self.coords[2..6].iter().map(|z| z.im * z.im).sum();
        (y0 + y2) - ((y0 - y2).powi(2) + 4.0 * n).sqrt()
    }

    pub fn membership(&self) -> MembershipReport {
        let margin = self.margin();
        MembershipReport {
            is_member: margin > 0.0,
            margin,
        }
    }

    /// The transpose involution W ↦ W′: fixes z₀, z₂, z₁₀ and negates
    /// z₁₁, z₁₂, z₁₃ (quaternion conjugation of z₁).
    pub fn transpose(&self) -> Self {
        let c = self.coords;
        Self::new([c[0], c[1], c[2], -c[3], -c[4], -c[5]])
    }

    /// Action of a signed coordinate permutation on (z₁₀, z₁₁, z₁₂, z₁₃).
    pub fn apply_signed_permutation(&self, p: &SignedPermutation) -> Self {
        let v = [self.coords[2], self.coords[3], self.coords[4], self.coords[5]];
        let w = p.apply(&v);
        Self::new([self.coords[0], self.coords[1], w[0], w[1], w[2], w[3]])
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// The matrix-level transpose W̌ ↦ (W′)̌ (2×2 blocks swap places without
/// internal transposition, since (W′)_{ij} = W_{ji} over the quaternions).
pub fn quaternionic_transpose_matrix(w: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let mut out = Matrix4::zeros();
    for bi in 0..2 {
        for bj in 0..2 {
            for r in 0..2 {
                for c in 0..2 {
                    out[(2 * bi + r, 2 * bj + c)] = w[(2 * bj + r, 2 * bi + c)];
                }
            }
        }
    }
    out
}

/// J̃ = diag(J₂, J₂), the matrix implementing quaternionic conjugation:
/// (x̄)̌ = J₂x̌′J₂⁻¹ entrywise.
pub fn jtilde() -> Matrix4<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let mut j = Matrix4::zeros();
    j[(0, 1)] = -one;
    j[(1, 0)] = one;
    j[(2, 3)] = -one;
    j[(3, 2)] = one;
    j
}

/// Deviation of a 4×4 matrix from the slice {W : J̃W′J̃⁻¹ = W}.
pub fn slice_deviation(w: &Matrix4<Complex64>) -> f64 {
    let j = jtilde();
    let jinv = -j; // J̃² = −E
    (j * w.transpose() * jinv - w).norm()
}

/// The quaternionic fractional-linear action through packed 4×4 blocks.
pub fn moebius_quaternionic(
    m: &GroupElement,
    z: &QuaternionicPoint,
) -> Result<QuaternionicPoint, HalfPlaneError> {
    let [a, b, c, d] = m.blocks4()?;
    let w = z.pack();
    let u = c * w + d;
    let rc = rcond_lower_4x4(&u);
    if rc < COCYCLE_RCOND_MIN {
        return Err(HalfPlaneError::IllConditionedCocycle { rcond: rc });
    }
    let inv = u.try_inverse().ok_or(HalfPlaneError::IllConditionedCocycle { rcond: rc })?;
    QuaternionicPoint::unpack(&((a * w + b) * inv))
}

/// The cocycle ČŽ + Ď of the quaternionic action.
pub fn cocycle_quaternionic(
    m: &GroupElement,
    z: &QuaternionicPoint,
) -> Result<Matrix4<Complex64>, HalfPlaneError> {
    let [_, _, c, d] = m.blocks4()?;
    Ok(c * z.pack() + d)
}

/// Random sampling parameters; defaults keep every sampled point at margin
/// well above the truncation policy's minimum.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SampleConfig {
    /// Uniform bound for real parts.
    pub x_bound: f64,
    /// Required lower bound on sampled margins.
    pub min_margin: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            x_bound: 1.0,
            min_margin: 0.4,
        }
    }
}

fn uniform<R: Rng>(rng: &mut R, b: f64) -> f64 {
    rng.gen_range(-b..=b)
}

/// Sample Z = X + iY with X hermitian uniform and Y = E + R/4 a small
/// hermitian perturbation of the identity, so the margin stays ≥ 0.75.
pub fn sample_hermitian<R: Rng>(rng: &mut R, cfg: &SampleConfig) -> HermitianPoint {
    let b = cfg.x_bound;
    let x11 = uniform(rng, b);
    let x22 = uniform(rng, b);
    let x12 = Complex64::new(uniform(rng, b), uniform(rng, b));
    let r11 = uniform(rng, 1.0);
    let r22 = uniform(rng, 1.0);
    let r12 = Complex64::new(uniform(rng, 1.0), uniform(rng, 1.0));
    let i = Complex64::i();
    let y = Matrix2::new(
        Complex64::new(1.0 + 0.25 * r11, 0.0),
        0.25 * r12,
        0.25 * r12.conj(),
        Complex64::new(1.0 + 0.25 * r22, 0.0),
    );
    let x = Matrix2::new(
        Complex64::new(x11, 0.0),
        x12,
        x12.conj(),
        Complex64::new(x22, 0.0),
    );
    let p = HermitianPoint::new(x + y * i);
    debug_assert!(p.margin() >= cfg.min_margin, "hermitian sampler under margin");
    p
}

/// Sample a quaternionic point with y₀, y₂ ∈ [1.5, 2.5] and |Im z₁ⱼ| ≤ 0.4,
/// which keeps the margin above 1.1.
pub fn sample_quaternionic<R: Rng>(rng: &mut R, cfg: &SampleConfig) -> QuaternionicPoint {
    let b = cfg.x_bound;
    let y0 = rng.gen_range(1.5..=2.5);
    let y2 = rng.gen_range(1.5..=2.5);
    let coords = [
        Complex64::new(uniform(rng, b), y0),
        Complex64::new(uniform(rng, b), y2),
        Complex64::new(uniform(rng, b), uniform(rng, 0.4)),
        Complex64::new(uniform(rng, b), uniform(rng, 0.4)),
        Complex64::new(uniform(rng, b), uniform(rng, 0.4)),
        Complex64::new(uniform(rng, b), uniform(rng, 0.4)),
    ];
    let p = QuaternionicPoint::new(coords);
    debug_assert!(p.margin() >= cfg.min_margin, "quaternionic sampler under margin");
    p
}

/// Serialization format for hermitian points: entries as [re, im] pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HermitianPointDto {
    pub z11: (f64, f64),
    pub z12: (f64, f64),
    pub z21: (f64, f64),
    pub z22: (f64, f64),
}

impl From<&HermitianPoint> for HermitianPointDto {
    fn from(p: &HermitianPoint) -> Self {
        let e = |z: Complex64| (z.re, z.im);
        Self {
            z11: e(p.z[(0, 0)]),
            z12: e(p.z[(0, 1)]),
            z21: e(p.z[(1, 0)]),
            z22: e(p.z[(1, 1)]),
        }
    }
}

impl From<&HermitianPointDto> for HermitianPoint {
    fn from(d: &HermitianPointDto) -> Self {
        let c = |t: (f64, f64)| Complex64::new(t.0, t.1);
        HermitianPoint::new(Matrix2::new(c(d.z11), c(d.z12), c(d.z21), c(d.z22)))
    }
}

/// Serialization format for quaternionic points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuaternionicPointDto {
    pub z0: (f64, f64),
    pub z2: (f64, f64),
    pub z10: (f64, f64),
    pub z11: (f64, f64),
    pub z12: (f64, f64),
    pub z13: (f64, f64),
}

impl From<&QuaternionicPoint> for QuaternionicPointDto {
    fn from(p: &QuaternionicPoint) -> Self {
        let e = |z: Complex64| (z.re, z.im);
        Self {
            z0: e(p.coords[0]),
            z2: e(p.coords[1]),
            z10: e(p.coords[2]),
            z11: e(p.coords[3]),
            z12: e(p.coords[4]),
            z13: e(p.coords[5]),
        }
    }
}

impl From<&QuaternionicPointDto> for QuaternionicPoint {
    fn from(d: &QuaternionicPointDto) -> Self {
        let c = |t: (f64, f64)| Complex64::new(t.0, t.1);
        QuaternionicPoint::new([c(d.z0), c(d.z2), c(d.z10), c(d.z11), c(d.z12), c(d.z13)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Ring;
    use crate::groups::GroupKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_points_are_members_with_comfortable_margin() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cfg = SampleConfig::default();
        for _ in 0..50 {
            let z = sample_hermitian(&mut rng, &cfg);
            let r = z.membership();
            assert!(r.is_member && r.margin >= cfg.min_margin);
            let w = sample_quaternionic(&mut rng, &cfg);
            let r = w.membership();
            assert!(r.is_member && r.margin >= cfg.min_margin);
        }
    }

    #[test]
    fn moebius_is_a_group_action_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cfg = SampleConfig::default();
        for ring in [Ring::Eisenstein, Ring::Gauss] {
            let kind = GroupKind::Unitary(ring);
            for _ in 0..20 {
                let z = sample_hermitian(&mut rng, &cfg);
                let m = GroupElement::random_word(kind, &mut rng, 4);
                let n = GroupElement::random_word(kind, &mut rng, 4);
                let lhs = moebius_hermitian(&m, &moebius_hermitian(&n, &z).unwrap()).unwrap();
                let rhs = moebius_hermitian(&m.mul(&n).unwrap(), &z).unwrap();
                assert!(lhs.distance(&rhs) < 1e-10, "action not compatible with product");
                assert!(rhs.membership().is_member, "action left the half-plane");
            }
        }
    }

    #[test]
    fn j_acts_as_minus_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = sample_hermitian(&mut rng, &SampleConfig::default());
        let j = GroupElement::j(GroupKind::Unitary(Ring::Gauss));
        let jz = moebius_hermitian(&j, &z).unwrap();
        let expect = -z.z.try_inverse().unwrap();
        assert!((jz.z - expect).norm() < 1e-12);
    }

    #[test]
    fn pack_unpack_roundtrip_and_slice_detection() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let z = sample_quaternionic(&mut rng, &SampleConfig::default());
        let w = z.pack();
        assert!(slice_deviation(&w) < 1e-14, "packed points satisfy J̃W′J̃⁻¹ = W");
        let back = QuaternionicPoint::unpack(&w).unwrap();
        assert!(z.distance(&back) < 1e-14);
        let mut off = w;
        off[(0, 1)] += Complex64::new(1e-3, 0.0);
        assert!(matches!(
            QuaternionicPoint::unpack(&off),
            Err(HalfPlaneError::SliceEscape { .. })
        ));
    }

    #[test]
    fn moebius_is_a_group_action_quaternionic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = SampleConfig::default();
        for _ in 0..20 {
            let z = sample_quaternionic(&mut rng, &cfg);
            let m = GroupElement::random_word(GroupKind::Quaternionic, &mut rng, 4);
            let n = GroupElement::random_word(GroupKind::Quaternionic, &mut rng, 4);
            let lhs =
                moebius_quaternionic(&m, &moebius_quaternionic(&n, &z).unwrap()).unwrap();
            let rhs = moebius_quaternionic(&m.mul(&n).unwrap(), &z).unwrap();
            assert!(lhs.distance(&rhs) < 1e-9, "action not compatible with product");
            assert!(rhs.membership().is_member, "action left the half-plane");
        }
    }

    #[test]
    fn transpose_matches_matrix_level_blockswap() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let z = sample_quaternionic(&mut rng, &SampleConfig::default());
        let via_matrix =
            QuaternionicPoint::unpack(&quaternionic_transpose_matrix(&z.pack())).unwrap();
        assert!(z.transpose().distance(&via_matrix) < 1e-14);
        // Pattern: fixes z0, z2, z10; negates z11, z12, z13.
        let t = z.transpose();
        assert_eq!(t.coords[0], z.coords[0]);
        assert_eq!(t.coords[2], z.coords[2]);
        assert_eq!(t.coords[3], -z.coords[3]);
        assert_eq!(t.coords[5], -z.coords[5]);
    }

    #[test]
    fn signed_permutation_acts_on_the_quaternion_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let z = sample_quaternionic(&mut rng, &SampleConfig::default());
        let p = SignedPermutation::try_new([1, 0, 3, 2], [-1, -1, 1, 1]).unwrap();
        let w = z.apply_signed_permutation(&p);
        assert_eq!(w.coords[0], z.coords[0]);
        assert_eq!(w.coords[2], -z.coords[3]);
        assert_eq!(w.coords[3], -z.coords[2]);
        assert_eq!(w.coords[4], z.coords[5]);
        assert_eq!(w.margin(), z.margin());
    }

    #[test]
    fn point_dtos_roundtrip_through_json() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let z = sample_hermitian(&mut rng, &SampleConfig::default());
        let dto = HermitianPointDto::from(&z);
        let s = serde_json::to_string(&dto).unwrap();
        let back: HermitianPointDto = serde_json::from_str(&s).unwrap();
        assert!(z.distance(&HermitianPoint::from(&back)) < 1e-15);
        let w = sample_quaternionic(&mut rng, &SampleConfig::default());
        let dto = QuaternionicPointDto::from(&w);
        let s = serde_json::to_string(&dto).unwrap();
        let back: QuaternionicPointDto = serde_json::from_str(&s).unwrap();
        assert!(w.distance(&QuaternionicPoint::from(&back)) < 1e-15);
    }
}
