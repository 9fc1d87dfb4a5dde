//! Exact arithmetic in the two imaginary quadratic rings ℤ[ω] (ω² + ω + 1 = 0)
//! and ℤ[i], in the rational quaternion algebra with i₁i₂ = i₃, and in the
//! Hurwitz order spanned by 1, i₁, i₂, (1 + i₁ + i₂ + i₃)/2.
//!
//! Everything here is integer or rational arithmetic: no floats enter until a
//! value is explicitly converted with [`ImagQuadInt::to_complex`] or
//! [`Quaternion::embed`]. The congruence conditions used elsewhere reduce to
//! the residue maps implemented here:
//!
//! * ℤ[ω]/(√−3) ≅ 𝔽₃ and ℤ[i]/(1+i) ≅ 𝔽₂, both computed as a + b mod ℓ since
//!   the generator of the residue ring is ≡ 1 modulo the level;
//! * 𝔬/𝔭 ≅ 𝔽₄ for the Hurwitz order 𝔬 and its unique ramified prime
//!   𝔭 = (1 + i₁), with x ∈ 𝔭 exactly when N(x) is even.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Errors from exact-arithmetic constructors and conversions.
#[derive(Debug, Error)]
pub enum ArithError {
    /// Quaternion coordinates are neither all integral nor all half-odd.
    #[error("quaternion {0} does not lie in the Hurwitz order")]
    NotHurwitz(String),
    /// Two operands belong to different quadratic rings.
    #[error("cannot combine elements of ℤ[ω] and ℤ[i]")]
    MixedRings,
}

/// The two imaginary quadratic rings in play.
///
/// `Eisenstein` is ℤ[ω] with ω = (−1 + √−3)/2; `Gauss` is ℤ[i]. The same tag
/// selects the matching theta family and congruence level everywhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Ring {
    Eisenstein,
    Gauss,
}

impl Ring {
    /// Norm of the level generator: 3 for √−3, 2 for 1 + i.
    pub fn level_norm(self) -> i64 {
        match self {
            Ring::Eisenstein => 3,
            Ring::Gauss => 2,
        }
    }

    /// The generator of the congruence level as a ring element.
    pub fn level(self) -> ImagQuadInt {
        match self {
            // √−3 = 1 + 2ω
            Ring::Eisenstein => ImagQuadInt::new(self, 1, 2),
            Ring::Gauss => ImagQuadInt::new(self, 1, 1),
        }
    }

    /// The complex number the ring generator maps to: ω or i.
    pub fn generator_complex(self) -> Complex64 {
        match self {
            Ring::Eisenstein => Complex64::new(-0.5, 0.5 * 3f64.sqrt()),
            Ring::Gauss => Complex64::new(0.0, 1.0),
        }
    }

    /// All units of the ring: six for ℤ[ω], four for ℤ[i].
    pub fn units(self) -> Vec<ImagQuadInt> {
        match self {
            Ring::Eisenstein => vec![
                ImagQuadInt::new(self, 1, 0),
                ImagQuadInt::new(self, -1, 0),
                ImagQuadInt::new(self, 0, 1),
                ImagQuadInt::new(self, 0, -1),
                ImagQuadInt::new(self, -1, -1),
                ImagQuadInt::new(self, 1, 1),
            ],
            Ring::Gauss => vec![
                ImagQuadInt::new(self, 1, 0),
                ImagQuadInt::new(self, -1, 0),
                ImagQuadInt::new(self, 0, 1),
                ImagQuadInt::new(self, 0, -1),
            ],
        }
    }
}

/// An element a + b·η of ℤ[η], where η is ω or i depending on the ring tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImagQuadInt {
    pub ring: Ring,
    pub a: BigInt,
    pub b: BigInt,
}

impl ImagQuadInt {
    pub fn new(ring: Ring, a: i64, b: i64) -> Self {
        Self { ring, a: a.into(), b: b.into() }
    }

    pub fn zero(ring: Ring) -> Self {
        Self::new(ring, 0, 0)
    }

    pub fn one(ring: Ring) -> Self {
        Self::new(ring, 1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn assert_same_ring(&self, other: &Self) {
        assert_eq!(self.ring, other.ring, "mixed quadratic rings in arithmetic");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        Self { ring: self.ring, a: &self.a + &other.a, b: &self.b + &other.b }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        Self { ring: self.ring, a: &self.a - &other.a, b: &self.b - &other.b }
    }

    pub fn neg(&self) -> Self {
        Self { ring: self.ring, a: -&self.a, b: -&self.b }
    }

    /// Ring multiplication; for ℤ[ω] uses ω² = −1 − ω.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        let (a, b, c, d) = (&self.a, &self.b, &other.a, &other.b);
        match self.ring {
            Ring::Eisenstein => Self {
                ring: self.ring,
                a: a * c - b * d,
                b: a * d + b * c - b * d,
            },
            Ring::Gauss => Self {
                ring: self.ring,
                a: a * c - b * d,
                b: a * d + b * c,
            },
        }
    }

    /// Complex conjugation: ω̄ = −1 − ω, ī = −i.
    pub fn conj(&self) -> Self {
        match self.ring {
            Ring::Eisenstein => Self {
                ring: self.ring,
                a: &self.a - &self.b,
                b: -&self.b,
            },
            Ring::Gauss => Self { ring: self.ring, a: self.a.clone(), b: -&self.b },
        }
    }

    /// The norm x·x̄ as an integer: a² − ab + b² or a² + b².
    pub fn norm(&self) -> BigInt {
        let (a, b) = (&self.a, &self.b);
        match self.ring {
            Ring::Eisenstein => a * a - a * b + b * b,
            Ring::Gauss => a * a + b * b,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Exact division: `Some(q)` with `self = q·d` when `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.assert_same_ring(d);
        if d.is_zero() {
            return None;
        }
        let num = self.mul(&d.conj());
        let n = d.norm();
        if (&num.a % &n).is_zero() && (&num.b % &n).is_zero() {
            Some(Self { ring: self.ring, a: num.a / &n, b: num.b / n })
        } else {
            None
        }
    }

    /// Whether the level generator (√−3 resp. 1 + i) divides this element.
    pub fn divisible_by_level(&self) -> bool {
        self.div_exact(&self.ring.level()).is_some()
    }

    /// Residue modulo the level ideal, as 0..3 for ℤ[ω] and 0..2 for ℤ[i].
    ///
    /// Both maps are (a + b) mod ℓ because ω ≡ 1 (mod √−3) and i ≡ 1 (mod 1+i).
    pub fn quad_residue(&self) -> u8 {
        let l = BigInt::from(self.ring.level_norm());
        let mut r = (&self.a + &self.b) % &l;
        if r.is_negative() {
            r += &l;
        }
        r.to_u8().expect("residue fits in u8")
    }

    pub fn to_complex(&self) -> Complex64 {
        let a = self.a.to_f64().expect("coefficient exceeds f64 range");
        let b = self.b.to_f64().expect("coefficient exceeds f64 range");
        Complex64::new(a, 0.0) + Complex64::new(b, 0.0) * self.ring.generator_complex()
    }
}

impl fmt::Display for ImagQuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.ring {
            Ring::Eisenstein => "ω",
            Ring::Gauss => "i",
        };
        write!(f, "{}{:+}{}", self.a, self.b, sym)
    }
}

fn br(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A quaternion x₀ + x₁i₁ + x₂i₂ + x₃i₃ with rational coordinates, using the
/// relations i₁² = i₂² = i₃² = −1 and i₁i₂ = i₃ = −i₂i₁ (cyclically).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quaternion {
    pub c: [BigRational; 4],
}

impl Quaternion {
    pub fn new(c: [BigRational; 4]) -> Self {
        Self { c }
    }

    /// Quaternion with integer coordinates.
    pub fn from_ints(c: [i64; 4]) -> Self {
        Self::new([br(c[0], 1), br(c[1], 1), br(c[2], 1), br(c[3], 1)])
    }

    /// Quaternion with coordinates cⱼ/2.
    pub fn from_halves(c: [i64; 4]) -> Self {
        Self::new([br(c[0], 2), br(c[1], 2), br(c[2], 2), br(c[3], 2)])
    }

    pub fn zero() -> Self {
        Self::from_ints([0, 0, 0, 0])
    }

    pub fn one() -> Self {
        Self::from_ints([1, 0, 0, 0])
    }

    /// The basis unit i₁, i₂ or i₃ (k = 1, 2, 3); k = 0 gives 1.
    pub fn unit(k: usize) -> Self {
        let mut c = [0i64; 4];
        c[k] = 1;
        Self::from_ints(c)
    }

    /// ω_H = (1 + i₁ + i₂ + i₃)/2, a sixth root of unity: ω_H³ = −1.
    pub fn omega_h() -> Self {
        Self::from_halves([1, 1, 1, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(std::array::from_fn(|j| &self.c[j] + &o.c[j]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(std::array::from_fn(|j| &self.c[j] - &o.c[j]))
    }

    pub fn neg(&self) -> Self {
        Self::new(std::array::from_fn(|j| -&self.c[j]))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(std::array::from_fn(|j| &self.c[j] * s))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.c;
        let b = &o.c;
        Self::new([
            &a[0] * &b[0] - &a[1] * &b[1] - &a[2] * &b[2] - &a[3] * &b[3],
            &a[0] * &b[1] + &a[1] * &b[0] + &a[2] * &b[3] - &a[3] * &b[2],
            &a[0] * &b[2] - &a[1] * &b[3] + &a[2] * &b[0] + &a[3] * &b[1],
            &a[0] * &b[3] + &a[1] * &b[2] - &a[2] * &b[1] + &a[3] * &b[0],
        ])
    }

    /// Quaternion conjugation x̄ = x₀ − x₁i₁ − x₂i₂ − x₃i₃.
    pub fn conj(&self) -> Self {
        Self::new([
            self.c[0].clone(),
            -&self.c[1],
            -&self.c[2],
            -&self.c[3],
        ])
    }

    /// The reduced norm N(x) = x·x̄ = Σ xⱼ².
    pub fn norm(&self) -> BigRational {
        self.c.iter().map(|x| x * x).sum()
    }

    /// Inverse x̄/N(x); `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(self.conj().scale(&n.recip()))
    }

    /// Exact image under the embedding x ↦ x̌ into ℂ^{2×2}:
    /// x̌ = [[x₀ + ix₁, x₂ + ix₃], [−x₂ + ix₃, x₀ − ix₁]],
    /// returned as (re, im) rational pairs in row-major order.
    pub fn embed_exact(&self) -> [[(BigRational, BigRational); 2]; 2] {
        let [x0, x1, x2, x3] = &self.c;
        [
            [(x0.clone(), x1.clone()), (x2.clone(), x3.clone())],
            [(-x2, x3.clone()), (x0.clone(), -x1)],
        ]
    }

    /// Floating-point image x̌ ∈ ℂ^{2×2}.
    pub fn embed(&self) -> nalgebra::Matrix2<Complex64> {
        let e = self.embed_exact();
        nalgebra::Matrix2::from_fn(|r, c| {
            Complex64::new(
                e[r][c].0.to_f64().expect("coordinate exceeds f64 range"),
                e[r][c].1.to_f64().expect("coordinate exceeds f64 range"),
            )
        })
    }

    pub fn to_quat_c(&self) -> QuatC {
        QuatC {
            c: std::array::from_fn(|j| {
                Complex64::new(self.c[j].to_f64().expect("coordinate exceeds f64 range"), 0.0)
            }),
        }
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}·i1 + {}·i2 + {}·i3",
            self.c[0], self.c[1], self.c[2], self.c[3]
        )
    }
}

/// The residue field 𝔬/𝔭 ≅ 𝔽₄ of the Hurwitz order modulo 𝔭 = (1 + i₁),
/// written {0, 1, ω, ω²} with ω² = ω + 1 in characteristic two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum F4 {
    Zero,
    One,
    Omega,
    OmegaSq,
}

impl std::ops::Add for F4 {
    type Output = F4;

    fn add(self, o: F4) -> F4 {
        use F4::*;
        match (self, o) {
            (Zero, x) | (x, Zero) => x,
            (a, b) if a == b => Zero,
            (One, Omega) | (Omega, One) => OmegaSq,
            (One, OmegaSq) | (OmegaSq, One) => Omega,
            _ => One, // Omega + OmegaSq
        }
    }
}

impl std::ops::Mul for F4 {
    type Output = F4;

    fn mul(self, o: F4) -> F4 {
        use F4::*;
        match (self, o) {
            (Zero, _) | (_, Zero) => Zero,
            (One, x) | (x, One) => x,
            (Omega, Omega) => OmegaSq,
            (OmegaSq, OmegaSq) => Omega,
            _ => One, // Omega · OmegaSq
        }
    }
}

/// An element of the Hurwitz order: all coordinates integral, or all
/// half-odd-integral. Construction validates the invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzInt(Quaternion);

impl HurwitzInt {
    pub fn try_new(q: Quaternion) -> Result<Self, ArithError> {
        let two = BigInt::from(2);
        let all_integral = q.c.iter().all(|x| x.denom().is_one());
        let all_half_odd = q.c.iter().all(|x| {
            x.denom() == &two && (x.numer() % &two).abs().is_one()
        });
        if all_integral || all_half_odd {
            Ok(Self(q))
        } else {
            Err(ArithError::NotHurwitz(q.to_string()))
        }
    }

    pub fn as_quaternion(&self) -> &Quaternion {
        &self.0
    }

    pub fn into_quaternion(self) -> Quaternion {
        self.0
    }

    pub fn mul(&self, o: &Self) -> Self {
        // The order is closed under multiplication; revalidate in debug only.
        let p = self.0.mul(&o.0);
        if cfg!(debug_assertions) {
            Self::try_new(p).expect("Hurwitz order closed under multiplication")
        } else {
            Self(p)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, ArithError> {
        Self::try_new(self.0.add(&o.0))
    }

    /// The reduced norm, always a non-negative integer on the order.
    pub fn norm(&self) -> BigInt {
        let n = self.0.norm();
        assert!(n.denom().is_one(), "Hurwitz norm is integral");
        n.numer().clone()
    }

    /// Membership in the ramified prime ideal 𝔭 = (1 + i₁): N(x) even.
    pub fn in_prime(&self) -> bool {
        use num_integer::Integer;
        self.norm().is_even()
    }

    /// Residue in 𝔬/𝔭 ≅ 𝔽₄.
    ///
    /// Integral coordinates land in the prime field via Σxⱼ mod 2; half-odd
    /// coordinates map to ω when Σ(xⱼ − ½) is even and to ω² otherwise, the
    /// convention fixed by (1 + i₁ + i₂ + i₃)/2 ↦ ω.
    pub fn residue(&self) -> F4 {
        use num_integer::Integer;
        if self.0.c[0].denom().is_one() {
            let s: BigInt = self.0.c.iter().map(|x| x.numer().clone()).sum();
            if s.is_even() {
                F4::Zero
            } else {
                F4::One
            }
        } else {
            let t: BigInt = self.0.c.iter().map(|x| (x - br(1, 2)).to_integer()).sum();
            if t.is_even() {
                F4::Omega
            } else {
                F4::OmegaSq
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// All 24 units: ±1, ±i₁, ±i₂, ±i₃ and (±1 ± i₁ ± i₂ ± i₃)/2.
    pub fn units() -> Vec<HurwitzInt> {
        let mut out = Vec::with_capacity(24);
        for k in 0..4 {
            for s in [1i64, -1] {
                let mut c = [0i64; 4];
                c[k] = s;
                out.push(Self(Quaternion::from_ints(c)));
            }
        }
        for s0 in [1i64, -1] {
            for s1 in [1i64, -1] {
                for s2 in [1i64, -1] {
                    for s3 in [1i64, -1] {
                        out.push(Self(Quaternion::from_halves([s0, s1, s2, s3])));
                    }
                }
            }
        }
        out
    }
}

/// A quaternion with complex coordinates: the scalar extension ℍ ⊗ ℂ used by
/// the floating-point evaluation paths. Same multiplication table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuatC {
    pub c: [Complex64; 4],
}

impl QuatC {
    pub fn new(c: [Complex64; 4]) -> Self {
        Self { c }
    }

    pub fn zero() -> Self {
        Self::new([Complex64::ZERO; 4])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.c;
        let b = &o.c;
        Self::new([
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        ])
    }

    /// Quaternion conjugation (the complex coordinates are untouched).
    pub fn quat_conj(&self) -> Self {
        Self::new([self.c[0], -self.c[1], -self.c[2], -self.c[3]])
    }

    /// Image under the same embedding x ↦ x̌ as [`Quaternion::embed`],
    /// extended complex-bilinearly.
    pub fn embed(&self) -> nalgebra::Matrix2<Complex64> {
        let i = Complex64::i();
        let [x0, x1, x2, x3] = self.c;
        nalgebra::Matrix2::new(x0 + i * x1, x2 + i * x3, -x2 + i * x3, x0 - i * x1)
    }

    /// Recover coordinates from a matrix of the form x̌; the caller is
    /// responsible for the matrix actually having that form.
    pub fn from_embedded(m: &nalgebra::Matrix2<Complex64>) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let i = Complex64::i();
        Self::new([
            (m[(0, 0)] + m[(1, 1)]) * half,
            (m[(0, 0)] - m[(1, 1)]) * half / i,
            (m[(0, 1)] - m[(1, 0)]) * half,
            (m[(0, 1)] + m[(1, 0)]) * half / i,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eis(a: i64, b: i64) -> ImagQuadInt {
        ImagQuadInt::new(Ring::Eisenstein, a, b)
    }

    fn gau(a: i64, b: i64) -> ImagQuadInt {
        ImagQuadInt::new(Ring::Gauss, a, b)
    }

    #[test]
    fn omega_satisfies_its_minimal_polynomial() {
        let w = eis(0, 1);
        let p = w.mul(&w).add(&w).add(&eis(1, 0));
        assert!(p.is_zero());
        // and numerically
        let wc = w.to_complex();
        assert!((wc * wc + wc + 1.0).norm() < 1e-15);
    }

    #[test]
    fn level_generators_square_correctly() {
        let s = Ring::Eisenstein.level();
        let s2 = s.mul(&s);
        assert_eq!(s2, eis(-3, 0));
        let t = Ring::Gauss.level();
        assert_eq!(t.mul(&t), gau(0, 2));
    }

    #[test]
    fn quad_norm_is_multiplicative() {
        let pairs = [
            (eis(3, -2), eis(-1, 4)),
            (eis(7, 5), eis(2, -9)),
            (gau(3, -2), gau(-1, 4)),
            (gau(7, 5), gau(2, -9)),
        ];
        for (x, y) in pairs {
            assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
        }
    }

    #[test]
    fn conjugation_matches_complex_conjugation() {
        for x in [eis(3, -2), eis(-1, 4), gau(3, -2), gau(-1, 4)] {
            let d = x.conj().to_complex() - x.to_complex().conj();
            assert!(d.norm() < 1e-15);
        }
    }

    #[test]
    fn level_divisibility_and_residues() {
        // ω ≡ 1 mod √−3, i ≡ 1 mod 1+i.
        assert_eq!(eis(0, 1).quad_residue(), 1);
        assert_eq!(gau(0, 1).quad_residue(), 1);
        assert!(eis(-1, 1).divisible_by_level()); // ω − 1
        assert!(gau(-1, 1).divisible_by_level()); // i − 1
        assert!(eis(3, 0).divisible_by_level());
        assert!(!eis(1, 1).divisible_by_level());
        assert!(gau(2, 0).divisible_by_level());
        assert!(!gau(2, 1).divisible_by_level());
        // Residue is a ring homomorphism on a few samples.
        for (x, y) in [(eis(2, 5), eis(-3, 1)), (eis(4, -7), eis(6, 2))] {
            assert_eq!(
                x.mul(&y).quad_residue(),
                (x.quad_residue() * y.quad_residue()) % 3
            );
            assert_eq!(
                x.add(&y).quad_residue(),
                (x.quad_residue() + y.quad_residue()) % 3
            );
        }
    }

    #[test]
    fn div_exact_roundtrips() {
        let x = eis(4, -5);
        let d = eis(2, 1);
        let p = x.mul(&d);
        assert_eq!(p.div_exact(&d), Some(x));
        assert_eq!(eis(1, 0).div_exact(&eis(2, 1)), None);
    }

    #[test]
    fn quaternion_table_is_associative_on_basis() {
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let (qa, qb, qc) = (Quaternion::unit(a), Quaternion::unit(b), Quaternion::unit(c));
                    assert_eq!(qa.mul(&qb).mul(&qc), qa.mul(&qb.mul(&qc)));
                }
            }
        }
    }

    #[test]
    fn embedding_is_a_homomorphism_on_basis() {
        for a in 0..4 {
            for b in 0..4 {
                let (qa, qb) = (Quaternion::unit(a), Quaternion::unit(b));
                let lhs = qa.mul(&qb).embed();
                let rhs = qa.embed() * qb.embed();
                assert!((lhs - rhs).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn omega_h_is_a_sixth_root_of_unity() {
        let w = Quaternion::omega_h();
        let w2 = w.mul(&w);
        assert_eq!(w2, w.sub(&Quaternion::one())); // ω_H² = ω_H − 1
        let w3 = w2.mul(&w);
        assert_eq!(w3, Quaternion::one().neg());
    }

    #[test]
    fn quaternion_norm_is_multiplicative() {
        let x = Quaternion::from_ints([1, -2, 3, 4]);
        let y = Quaternion::from_halves([1, 1, -3, 5]);
        assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
        let inv = x.inverse().unwrap();
        assert_eq!(x.mul(&inv), Quaternion::one());
    }

    #[test]
    fn hurwitz_order_membership() {
        assert!(HurwitzInt::try_new(Quaternion::from_ints([1, 0, -2, 7])).is_ok());
        assert!(HurwitzInt::try_new(Quaternion::from_halves([1, 1, 1, -3])).is_ok());
        assert!(HurwitzInt::try_new(Quaternion::from_halves([1, 1, 1, 2])).is_err());
        assert!(HurwitzInt::try_new(Quaternion::new([
            br(1, 3),
            br(0, 1),
            br(0, 1),
            br(0, 1)
        ]))
        .is_err());
    }

    #[test]
    fn hurwitz_units_count_and_norms() {
        let units = HurwitzInt::units();
        assert_eq!(units.len(), 24);
        assert!(units.iter().all(|u| u.is_unit()));
        // All Lipschitz units are ≡ 1 mod 𝔭; no half-unit is in 𝔭.
        for u in &units[..8] {
            assert_eq!(u.residue(), F4::One);
        }
        for u in &units[8..] {
            assert!(matches!(u.residue(), F4::Omega | F4::OmegaSq));
        }
    }

    #[test]
    fn prime_ideal_and_residue_field() {
        let one_plus_i1 = HurwitzInt::try_new(Quaternion::from_ints([1, 1, 0, 0])).unwrap();
        assert!(one_plus_i1.in_prime());
        assert_eq!(one_plus_i1.residue(), F4::Zero);
        let two = HurwitzInt::try_new(Quaternion::from_ints([2, 0, 0, 0])).unwrap();
        assert!(two.in_prime());
        let w = HurwitzInt::try_new(Quaternion::omega_h()).unwrap();
        assert_eq!(w.residue(), F4::Omega);
        assert_eq!(
            HurwitzInt::try_new(Quaternion::omega_h().mul(&Quaternion::omega_h()))
                .unwrap()
                .residue(),
            F4::OmegaSq
        );
        // ω + ω² = 1 in 𝔽₄.
        assert_eq!(F4::Omega + F4::OmegaSq, F4::One);
        assert_eq!(F4::Omega * F4::OmegaSq, F4::One);
        assert_eq!(F4::Omega * F4::Omega, F4::OmegaSq);
    }

    #[test]
    fn residue_map_is_multiplicative_on_samples() {
        let xs = [
            HurwitzInt::try_new(Quaternion::from_ints([1, 2, -1, 3])).unwrap(),
            HurwitzInt::try_new(Quaternion::from_halves([1, -1, 3, 1])).unwrap(),
            HurwitzInt::try_new(Quaternion::from_ints([0, 1, 1, 0])).unwrap(),
            HurwitzInt::try_new(Quaternion::from_halves([3, 1, -1, 1])).unwrap(),
        ];
        for x in &xs {
            for y in &xs {
                assert_eq!(x.mul(y).residue(), x.residue() * y.residue());
            }
        }
    }

    #[test]
    fn quatc_embed_roundtrip() {
        let q = QuatC::new([
            Complex64::new(0.3, -1.2),
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.7, 0.1),
            Complex64::new(0.0, 2.0),
        ]);
        let back = QuatC::from_embedded(&q.embed());
        for j in 0..4 {
            assert!((q.c[j] - back.c[j]).norm() < 1e-15);
        }
        let p = QuatC::new([
            Complex64::new(1.1, 0.2),
            Complex64::new(-0.4, 0.9),
            Complex64::new(0.6, -0.3),
            Complex64::new(0.2, 0.8),
        ]);
        // Embedding stays multiplicative after complex scalar extension.
        assert!((q.mul(&p).embed() - q.embed() * p.embed()).norm() < 1e-12);
    }
}
