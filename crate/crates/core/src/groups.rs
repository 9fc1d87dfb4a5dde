//! Exact symplectic/unitary matrix groups over the rings from [`crate::arith`].
//!
//! A [`GroupElement`] is a 4×4 matrix over ℤ[ω], ℤ[i], or the Hurwitz order,
//! satisfying M̄′JM = J for J = [[0, −E], [E, 0]] (conjugate-transpose taken in
//! the coefficient ring). For such matrices the inverse is exact:
//! M⁻¹ = J⁻¹M̄′J = [[D̄′, −B̄′], [−C̄′, Ā′]] in 2×2 blocks.
//!
//! Congruence subgroups are the kernels of entrywise reduction: M ≡ E modulo
//! √−3, 1 + i, or 𝔭 = (1 + i₁). Elements are built from generator words
//! (translations, elementary and unit dilations, and J), and congruence
//! elements from level generators together with their conjugates by arbitrary
//! words — conjugation preserves the kernel exactly.
//!
//! The module also hosts the finite symmetry data of the quaternionic theory:
//! the order-three map σ(x) = ω_H x ω̄_H, the rational involution
//! τ(x) = (1 + i₁)x̄(1 − i₁)/2, and signed coordinate permutations with an
//! even number of sign flips.

use nalgebra::{Matrix2, Matrix4, SMatrix};
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::arith::{ArithError, HurwitzInt, ImagQuadInt, Quaternion, Ring};

/// 8×8 complex matrices, the image of quaternionic 4×4 under entrywise x ↦ x̌.
pub type Matrix8 = SMatrix<Complex64, 8, 8>;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("matrix does not satisfy the symplectic relation M̄′JM = J")]
    NotSymplectic,
    #[error("expected a {expected} element, got a {got} element")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("diagonal entries of a dilation must be units")]
    NotAUnit,
    #[error("signed permutation needs a permutation of four letters and an even number of −1 signs")]
    InvalidSignedPermutation,
}

/// Which group a matrix belongs to: U(2,2) over one of the quadratic rings,
/// or the quaternionic symplectic group over the Hurwitz order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GroupKind {
    Unitary(Ring),
    Quaternionic,
}

impl GroupKind {
    fn name(self) -> &'static str {
        match self {
            GroupKind::Unitary(Ring::Eisenstein) => "unitary/ℤ[ω]",
            GroupKind::Unitary(Ring::Gauss) => "unitary/ℤ[i]",
            GroupKind::Quaternionic => "quaternionic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Entries {
    Quad(Box<[[ImagQuadInt; 4]; 4]>),
    Quat(Box<[[Quaternion; 4]; 4]>),
}

/// An exact element of one of the three groups.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    kind: GroupKind,
    entries: Entries,
}

fn quad_matrix<F: FnMut(usize, usize) -> ImagQuadInt>(mut f: F) -> Box<[[ImagQuadInt; 4]; 4]> {
    Box::new(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
}

fn quat_matrix<F: FnMut(usize, usize) -> Quaternion>(mut f: F) -> Box<[[Quaternion; 4]; 4]> {
    Box::new(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
}

/// All 24 permutations of {0,1,2,3} with their signs.
fn permutations4() -> Vec<([usize; 4], i64)> {
    let mut out = Vec::with_capacity(24);
    let mut items = [0usize, 1, 2, 3];
    fn rec(items: &mut [usize; 4], k: usize, sign: i64, out: &mut Vec<([usize; 4], i64)>) {
        if k == 4 {
            out.push((*items, sign));
            return;
        }
        for i in k..4 {
            items.swap(k, i);
            rec(items, k + 1, if i == k { sign } else { -sign }, out);
            items.swap(k, i);
        }
    }
    rec(&mut items, 0, 1, &mut out);
    out
}

impl GroupElement {
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    fn from_quad(ring: Ring, m: Box<[[ImagQuadInt; 4]; 4]>) -> Self {
        let g = Self {
            kind: GroupKind::Unitary(ring),
            entries: Entries::Quad(m),
        };
        debug_assert!(g.is_symplectic(), "constructed unitary element fails M̄′JM = J");
        g
    }

    fn from_quat(m: Box<[[Quaternion; 4]; 4]>) -> Self {
        let g = Self {
            kind: GroupKind::Quaternionic,
            entries: Entries::Quat(m),
        };
        debug_assert!(g.is_symplectic(), "constructed quaternionic element fails M̄′JM = J");
        g
    }

    pub fn identity(kind: GroupKind) -> Self {
        match kind {
            GroupKind::Unitary(ring) => Self::from_quad(
                ring,
                quad_matrix(|i, j| ImagQuadInt::new(ring, (i == j) as i64, 0)),
            ),
            GroupKind::Quaternionic => Self::from_quat(quat_matrix(|i, j| {
                Quaternion::from_ints([(i == j) as i64, 0, 0, 0])
            })),
        }
    }

    pub fn minus_identity(kind: GroupKind) -> Self {
        match kind {
            GroupKind::Unitary(ring) => Self::from_quad(
                ring,
                quad_matrix(|i, j| ImagQuadInt::new(ring, -((i == j) as i64), 0)),
            ),
            GroupKind::Quaternionic => Self::from_quat(quat_matrix(|i, j| {
                Quaternion::from_ints([-((i == j) as i64), 0, 0, 0])
            })),
        }
    }

    /// The standard symplectic involution J = [[0, −E], [E, 0]].
    pub fn j(kind: GroupKind) -> Self {
        let val = |i: usize, j: usize| -> i64 {
            if i < 2 && j == i + 2 {
                -1
            } else if i >= 2 && j == i - 2 {
                1
            } else {
                0
            }
        };
        match kind {
            GroupKind::Unitary(ring) => {
                Self::from_quad(ring, quad_matrix(|i, j| ImagQuadInt::new(ring, val(i, j), 0)))
            }
            GroupKind::Quaternionic => {
                Self::from_quat(quat_matrix(|i, j| Quaternion::from_ints([val(i, j), 0, 0, 0])))
            }
        }
    }

    /// Translation [[E, H], [0, E]] with H = [[h₁₁, h₁₂], [h̄₁₂, h₂₂]] hermitian
    /// over a quadratic ring.
    pub fn quad_translation(ring: Ring, h11: i64, h12: ImagQuadInt, h22: i64) -> Self {
        assert_eq!(h12.ring, ring);
        let h = [
            [ImagQuadInt::new(ring, h11, 0), h12.clone()],
            [h12.conj(), ImagQuadInt::new(ring, h22, 0)],
        ];
        Self::from_quad(
            ring,
            quad_matrix(|i, j| {
                if i == j {
                    ImagQuadInt::one(ring)
                } else if i < 2 && j >= 2 {
                    h[i][j - 2].clone()
                } else {
                    ImagQuadInt::zero(ring)
                }
            }),
        )
    }

    /// Dilation [[U, 0], [0, Ū′⁻¹]] with U = E + λ·e_{jk} elementary.
    pub fn quad_elementary(ring: Ring, lambda: ImagQuadInt, upper: bool) -> Self {
        assert_eq!(lambda.ring, ring);
        let (r, c) = if upper { (0, 1) } else { (1, 0) };
        // Ū′⁻¹ = E − λ̄·e_{kj}
        let m = quad_matrix(|i, j| {
            if i == j {
                ImagQuadInt::one(ring)
            } else if (i, j) == (r, c) {
                lambda.clone()
            } else if (i, j) == (c + 2, r + 2) {
                lambda.conj().neg()
            } else {
                ImagQuadInt::zero(ring)
            }
        });
        Self::from_quad(ring, m)
    }

    /// Dilation [[U, 0], [0, Ū′⁻¹]] with U = diag(u, v) for units u, v, so that
    /// Ū′⁻¹ = diag(u, v) as well.
    pub fn quad_unit_dilation(ring: Ring, u: ImagQuadInt, v: ImagQuadInt) -> Result<Self, GroupError> {
        if !u.is_unit() || !v.is_unit() {
            return Err(GroupError::NotAUnit);
        }
        let d = [u, v];
        Ok(Self::from_quad(
            ring,
            quad_matrix(|i, j| {
                if i == j {
                    d[i % 2].clone()
                } else {
                    ImagQuadInt::zero(ring)
                }
            }),
        ))
    }

    /// Quaternionic translation; entries must lie in the Hurwitz order and the
    /// diagonal of H is (real) integral.
    pub fn quat_translation(h11: i64, h12: Quaternion, h22: i64) -> Result<Self, GroupError> {
        HurwitzInt::try_new(h12.clone())?;
        let h = [
            [Quaternion::from_ints([h11, 0, 0, 0]), h12.clone()],
            [h12.conj(), Quaternion::from_ints([h22, 0, 0, 0])],
        ];
        Ok(Self::from_quat(quat_matrix(|i, j| {
            if i == j {
                Quaternion::one()
            } else if i < 2 && j >= 2 {
                h[i][j - 2].clone()
            } else {
                Quaternion::zero()
            }
        })))
    }

    /// Quaternionic dilation with U = E + λ·e_{jk}, λ in the Hurwitz order.
    pub fn quat_elementary(lambda: Quaternion, upper: bool) -> Result<Self, GroupError> {
        HurwitzInt::try_new(lambda.clone())?;
        let (r, c) = if upper { (0, 1) } else { (1, 0) };
        Ok(Self::from_quat(quat_matrix(|i, j| {
            if i == j {
                Quaternion::one()
            } else if (i, j) == (r, c) {
                lambda.clone()
            } else if (i, j) == (c + 2, r + 2) {
                lambda.conj().neg()
            } else {
                Quaternion::zero()
            }
        })))
    }

    /// Quaternionic dilation with U = diag(u, v) for Hurwitz units.
    pub fn quat_unit_dilation(u: Quaternion, v: Quaternion) -> Result<Self, GroupError> {
        let hu = HurwitzInt::try_new(u.clone())?;
        let hv = HurwitzInt::try_new(v.clone())?;
        if !hu.is_unit() || !hv.is_unit() {
            return Err(GroupError::NotAUnit);
        }
        let d = [u, v];
        Ok(Self::from_quat(quat_matrix(|i, j| {
            if i == j {
                d[i % 2].clone()
            } else {
                Quaternion::zero()
            }
        })))
    }

    /// The scalar matrix u·E for a Hurwitz unit u (symplectic since ū·u = 1).
    pub fn quat_scalar_unit(u: Quaternion) -> Result<Self, GroupError> {
        let hu = HurwitzInt::try_new(u.clone())?;
        if !hu.is_unit() {
            return Err(GroupError::NotAUnit);
        }
        Ok(Self::from_quat(quat_matrix(|i, j| {
            if i == j {
                u.clone()
            } else {
                Quaternion::zero()
            }
        })))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GroupError> {
        if self.kind != other.kind {
            return Err(GroupError::KindMismatch {
                expected: self.kind.name(),
                got: other.kind.name(),
            });
        }
        match (&self.entries, &other.entries) {
            (Entries::Quad(a), Entries::Quad(b)) => {
                let ring = a[0][0].ring;
                Ok(Self {
                    kind: self.kind,
                    entries: Entries::Quad(quad_matrix(|i, j| {
                        let mut s = ImagQuadInt::zero(ring);
                        for k in 0..4 {
                            s = s.add(&a[i][k].mul(&b[k][j]));
                        }
                        s
                    })),
                })
            }
            (Entries::Quat(a), Entries::Quat(b)) => Ok(Self {
                kind: self.kind,
                entries: Entries::Quat(quat_matrix(|i, j| {
                    let mut s = Quaternion::zero();
                    for k in 0..4 {
                        s = s.add(&a[i][k].mul(&b[k][j]));
                    }
                    s
                })),
            }),
            _ => unreachable!("kind and entries always agree"),
        }
    }

    /// Exact inverse via M⁻¹ = J⁻¹M̄′J = [[D̄′, −B̄′], [−C̄′, Ā′]].
    pub fn inverse(&self) -> Self {
        // Index gymnastics: target (i, j) takes the conjugate of source
        // (j ± 2, i ± 2) with a sign flip on the off-diagonal blocks.
        let src = |i: usize, j: usize| -> (usize, usize, bool) {
            let (bi, bj) = (i / 2, j / 2);
            let (si, sj) = ((j % 2) + 2 * (1 - bj), (i % 2) + 2 * (1 - bi));
            (si, sj, bi != bj)
        };
        let inv = match &self.entries {
            Entries::Quad(a) => Entries::Quad(quad_matrix(|i, j| {
                let (si, sj, flip) = src(i, j);
                let e = a[si][sj].conj();
                if flip {
                    e.neg()
                } else {
                    e
                }
            })),
            Entries::Quat(a) => Entries::Quat(quat_matrix(|i, j| {
                let (si, sj, flip) = src(i, j);
                let e = a[si][sj].conj();
                if flip {
                    e.neg()
                } else {
                    e
                }
            })),
        };
        let g = Self {
            kind: self.kind,
            entries: inv,
        };
        debug_assert_eq!(
            self.mul(&g).expect("same kind").entries,
            Self::identity(self.kind).entries,
            "J⁻¹M̄′J must invert a symplectic matrix"
        );
        g
    }

    /// Exact check of M̄′JM = J.
    pub fn is_symplectic(&self) -> bool {
        let j_val = |i: usize, jj: usize| -> i64 {
            if i < 2 && jj == i + 2 {
                -1
            } else if i >= 2 && jj == i - 2 {
                1
            } else {
                0
            }
        };
        match &self.entries {
            Entries::Quad(a) => {
                let ring = a[0][0].ring;
                for i in 0..4 {
                    for j in 0..4 {
                        // (M̄′JM)_{ij} = Σ_{k,l} conj(a[k][i]) J[k][l] a[l][j]
                        let mut s = ImagQuadInt::zero(ring);
                        for k in 0..4 {
                            for l in 0..4 {
                                let jv = j_val(k, l);
                                if jv != 0 {
                                    let t = a[k][i].conj().mul(&a[l][j]);
                                    s = if jv > 0 { s.add(&t) } else { s.sub(&t) };
                                }
                            }
                        }
                        if s != ImagQuadInt::new(ring, j_val(i, j), 0) {
                            return false;
                        }
                    }
                }
                true
            }
            Entries::Quat(a) => {
                for i in 0..4 {
                    for j in 0..4 {
                        let mut s = Quaternion::zero();
                        for k in 0..4 {
                            for l in 0..4 {
                                let jv = j_val(k, l);
                                if jv != 0 {
                                    let t = a[k][i].conj().mul(&a[l][j]);
                                    s = if jv > 0 { s.add(&t) } else { s.sub(&t) };
                                }
                            }
                        }
                        if s != Quaternion::from_ints([j_val(i, j), 0, 0, 0]) {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        if self.is_symplectic() {
            Ok(())
        } else {
            Err(GroupError::NotSymplectic)
        }
    }

    /// Entrywise congruence M ≡ E modulo the level (√−3, 1 + i, or 𝔭).
    pub fn is_congruence(&self) -> bool {
        match &self.entries {
            Entries::Quad(a) => {
                let ring = a[0][0].ring;
                (0..4).all(|i| {
                    (0..4).all(|j| {
                        let e = ImagQuadInt::new(ring, (i == j) as i64, 0);
                        a[i][j].sub(&e).divisible_by_level()
                    })
                })
            }
            Entries::Quat(a) => (0..4).all(|i| {
                (0..4).all(|j| {
                    let e = Quaternion::from_ints([(i == j) as i64, 0, 0, 0]);
                    HurwitzInt::try_new(a[i][j].sub(&e))
                        .map(|h| h.in_prime())
                        .unwrap_or(false)
                })
            }),
        }
    }

    /// Exact determinant (unitary kinds only) — always a unit for symplectic M.
    pub fn det_unitary(&self) -> Result<ImagQuadInt, GroupError> {
        match &self.entries {
            Entries::Quad(a) => {
                let ring = a[0][0].ring;
                let mut det = ImagQuadInt::zero(ring);
                for (perm, sign) in permutations4() {
                    let mut term = ImagQuadInt::new(ring, sign, 0);
                    for (i, &p) in perm.iter().enumerate() {
                        term = term.mul(&a[i][p]);
                    }
                    det = det.add(&term);
                }
                Ok(det)
            }
            Entries::Quat(_) => Err(GroupError::KindMismatch {
                expected: "unitary",
                got: "quaternionic",
            }),
        }
    }

    pub fn quad_entries(&self) -> Option<&[[ImagQuadInt; 4]; 4]> {
        match &self.entries {
            Entries::Quad(a) => Some(a),
            _ => None,
        }
    }

    pub fn quat_entries(&self) -> Option<&[[Quaternion; 4]; 4]> {
        match &self.entries {
            Entries::Quat(a) => Some(a),
            _ => None,
        }
    }

    /// Floating-point image: the matrix itself for unitary kinds.
    pub fn complex_matrix4(&self) -> Result<Matrix4<Complex64>, GroupError> {
        match &self.entries {
            Entries::Quad(a) => Ok(Matrix4::from_fn(|i, j| a[i][j].to_complex())),
            Entries::Quat(_) => Err(GroupError::KindMismatch {
                expected: "unitary",
                got: "quaternionic",
            }),
        }
    }

    /// Floating-point image under entrywise x ↦ x̌ (quaternionic kind): 8×8.
    pub fn complex_matrix8(&self) -> Result<Matrix8, GroupError> {
        match &self.entries {
            Entries::Quat(a) => {
                let mut m = Matrix8::zeros();
                for i in 0..4 {
                    for j in 0..4 {
                        let e = a[i][j].embed();
                        for r in 0..2 {
                            for c in 0..2 {
                                m[(2 * i + r, 2 * j + c)] = e[(r, c)];
                            }
                        }
                    }
                }
                Ok(m)
            }
            Entries::Quad(_) => Err(GroupError::KindMismatch {
                expected: "quaternionic",
                got: "unitary",
            }),
        }
    }

    /// The blocks (A, B, C, D) as complex 2×2 matrices (unitary kinds).
    pub fn blocks2(&self) -> Result<[Matrix2<Complex64>; 4], GroupError> {
        let m = self.complex_matrix4()?;
        let block = |r: usize, c: usize| m.fixed_view::<2, 2>(r, c).into_owned();
        Ok([block(0, 0), block(0, 2), block(2, 0), block(2, 2)])
    }

    /// The blocks (Ǎ, B̌, Č, Ď) as complex 4×4 matrices (quaternionic kind).
    pub fn blocks4(&self) -> Result<[Matrix4<Complex64>; 4], GroupError> {
        let m = self.complex_matrix8()?;
        let block = |r: usize, c: usize| m.fixed_view::<4, 4>(r, c).into_owned();
        Ok([block(0, 0), block(0, 4), block(4, 0), block(4, 4)])
    }

    /// A random product of `len` generators (J, translations, dilations).
    pub fn random_word<R: Rng>(kind: GroupKind, rng: &mut R, len: usize) -> Self {
        let mut g = Self::identity(kind);
        for _ in 0..len {
            g = g.mul(&random_generator(kind, rng)).expect("same kind");
        }
        g
    }

    /// A random element of the congruence kernel: a short product of level
    /// generators and their conjugates by arbitrary words.
    pub fn random_congruence<R: Rng>(kind: GroupKind, rng: &mut R, word_len: usize) -> Self {
        let pieces = rng.gen_range(1..=3);
        let mut g = Self::identity(kind);
        for _ in 0..pieces {
            let t = random_level_generator(kind, rng);
            let piece = if rng.gen_bool(0.5) {
                let len = rng.gen_range(1..=word_len.max(1));
                let w = Self::random_word(kind, rng, len);
                w.mul(&t).expect("same kind").mul(&w.inverse()).expect("same kind")
            } else {
                t
            };
            g = g.mul(&piece).expect("same kind");
        }
        debug_assert!(g.is_congruence(), "congruence sampler left the kernel");
        g
    }
}

fn random_quad_small<R: Rng>(ring: Ring, rng: &mut R) -> ImagQuadInt {
    ImagQuadInt::new(ring, rng.gen_range(-1..=1), rng.gen_range(-1..=1))
}

fn random_hurwitz_small<R: Rng>(rng: &mut R) -> Quaternion {
    if rng.gen_bool(0.5) {
        Quaternion::from_ints(std::array::from_fn(|_| rng.gen_range(-1..=1)))
    } else {
        Quaternion::from_halves(std::array::from_fn(|_| if rng.gen_bool(0.5) { 1 } else { -1 }))
    }
}

fn random_generator<R: Rng>(kind: GroupKind, rng: &mut R) -> GroupElement {
    match kind {
        GroupKind::Unitary(ring) => match rng.gen_range(0..4) {
            0 => GroupElement::j(kind),
            1 => GroupElement::quad_translation(
                ring,
                rng.gen_range(-2..=2),
                random_quad_small(ring, rng),
                rng.gen_range(-2..=2),
            ),
            2 => GroupElement::quad_elementary(ring, random_quad_small(ring, rng), rng.gen_bool(0.5)),
            _ => {
                let units = ring.units();
                let u = units[rng.gen_range(0..units.len())].clone();
                let v = units[rng.gen_range(0..units.len())].clone();
                GroupElement::quad_unit_dilation(ring, u, v).expect("units")
            }
        },
        GroupKind::Quaternionic => match rng.gen_range(0..4) {
            0 => GroupElement::j(kind),
            1 => GroupElement::quat_translation(
                rng.gen_range(-2..=2),
                random_hurwitz_small(rng),
                rng.gen_range(-2..=2),
            )
            .expect("small Hurwitz entries"),
            2 => GroupElement::quat_elementary(random_hurwitz_small(rng), rng.gen_bool(0.5))
                .expect("small Hurwitz entries"),
            _ => {
                let units = HurwitzInt::units();
                let u = units[rng.gen_range(0..units.len())].as_quaternion().clone();
                let v = units[rng.gen_range(0..units.len())].as_quaternion().clone();
                GroupElement::quat_unit_dilation(u, v).expect("units")
            }
        },
    }
}

/// A generator of the congruence kernel: a translation by a level-divisible
/// hermitian matrix, a unit dilation congruent to the identity, or an
/// elementary dilation with level-divisible parameter.
fn random_level_generator<R: Rng>(kind: GroupKind, rng: &mut R) -> GroupElement {
    match kind {
        GroupKind::Unitary(ring) => {
            let ell = ring.level();
            let n = ring.level_norm();
            match rng.gen_range(0..3) {
                0 => GroupElement::quad_translation(
                    ring,
                    n * rng.gen_range(-1..=1),
                    ell.mul(&random_quad_small(ring, rng)),
                    n * rng.gen_range(-1..=1),
                ),
                1 => GroupElement::quad_elementary(
                    ring,
                    ell.mul(&random_quad_small(ring, rng)),
                    rng.gen_bool(0.5),
                ),
                _ => {
                    let units: Vec<_> = ring
                        .units()
                        .into_iter()
                        .filter(|u| u.sub(&ImagQuadInt::one(ring)).divisible_by_level())
                        .collect();
                    let u = units[rng.gen_range(0..units.len())].clone();
                    let v = units[rng.gen_range(0..units.len())].clone();
                    GroupElement::quad_unit_dilation(ring, u, v).expect("units")
                }
            }
        }
        GroupKind::Quaternionic => {
            // Small elements of 𝔭 = (1 + i₁): integral with even coordinate sum.
            fn in_prime<R: Rng>(rng: &mut R) -> Quaternion {
                loop {
                    let q = Quaternion::from_ints(std::array::from_fn(|_| rng.gen_range(-1..=1)));
                    let h = HurwitzInt::try_new(q.clone()).expect("integral");
                    if h.in_prime() {
                        return q;
                    }
                }
            }
            match rng.gen_range(0..3) {
                0 => {
                    let h12 = in_prime(rng);
                    GroupElement::quat_translation(
                        2 * rng.gen_range(-1..=1),
                        h12,
                        2 * rng.gen_range(-1..=1),
                    )
                    .expect("Hurwitz entries")
                }
                1 => GroupElement::quat_elementary(in_prime(rng), rng.gen_bool(0.5))
                    .expect("Hurwitz entries"),
                _ => {
                    // Lipschitz units are all ≡ 1 mod 𝔭.
                    let mut unit = || {
                        let mut c = [0i64; 4];
                        c[rng.gen_range(0..4)] = if rng.gen_bool(0.5) { 1 } else { -1 };
                        Quaternion::from_ints(c)
                    };
                    GroupElement::quat_unit_dilation(unit(), unit()).expect("units")
                }
            }
        }
    }
}

/// σ(x) = ω_H · x · ω̄_H, an order-three rotation of the imaginary units:
/// i₁ ↦ i₂ ↦ i₃ ↦ i₁.
pub fn s3_sigma(x: &Quaternion) -> Quaternion {
    let w = Quaternion::omega_h();
    w.mul(x).mul(&w.conj())
}

/// τ(x) = (1 + i₁) · x̄ · (1 − i₁) / 2, an involution exchanging i₂ and i₃
/// (exact rational arithmetic).
pub fn s3_tau(x: &Quaternion) -> Quaternion {
    let one = Quaternion::one();
    let i1 = Quaternion::unit(1);
    let half = num_rational::BigRational::new(1.into(), 2.into());
    one.add(&i1).mul(&x.conj()).mul(&one.sub(&i1)).scale(&half)
}

/// A signed permutation of four coordinates with an even number of −1 signs,
/// acting by (Pv)ⱼ = sⱼ · v_{π(j)}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    perm: [usize; 4],
    signs: [i8; 4],
}

impl SignedPermutation {
    pub fn try_new(perm: [usize; 4], signs: [i8; 4]) -> Result<Self, GroupError> {
        let mut seen = [false; 4];
        for &p in &perm {
            if p >= 4 || seen[p] {
                return Err(GroupError::InvalidSignedPermutation);
            }
            seen[p] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(GroupError::InvalidSignedPermutation);
        }
        if signs.iter().filter(|&&s| s == -1).count() % 2 != 0 {
            return Err(GroupError::InvalidSignedPermutation);
        }
        Ok(Self { perm, signs })
    }

    pub fn identity() -> Self {
        Self {
            perm: [0, 1, 2, 3],
            signs: [1; 4],
        }
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let perms = permutations4();
        let (perm, _) = perms[rng.gen_range(0..perms.len())];
        let mut signs = [1i8; 4];
        let flips = 2 * rng.gen_range(0..=2);
        let mut idx: Vec<usize> = (0..4).collect();
        for k in 0..flips {
            let pick = rng.gen_range(0..idx.len());
            signs[idx.remove(pick)] = -1;
            let _ = k;
        }
        Self { perm, signs }
    }

    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        std::array::from_fn(|j| Complex64::new(self.signs[j] as f64, 0.0) * v[self.perm[j]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn j_squares_to_minus_identity() {
        for kind in [
            GroupKind::Unitary(Ring::Eisenstein),
            GroupKind::Unitary(Ring::Gauss),
            GroupKind::Quaternionic,
        ] {
            let j = GroupElement::j(kind);
            assert_eq!(j.mul(&j).unwrap(), GroupElement::minus_identity(kind));
            assert!(j.is_symplectic());
        }
    }

    #[test]
    fn generators_are_symplectic_and_inverses_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kind in [
            GroupKind::Unitary(Ring::Eisenstein),
            GroupKind::Unitary(Ring::Gauss),
            GroupKind::Quaternionic,
        ] {
            for _ in 0..20 {
                let g = GroupElement::random_word(kind, &mut rng, 4);
                assert!(g.is_symplectic());
                let inv = g.inverse();
                assert_eq!(g.mul(&inv).unwrap(), GroupElement::identity(kind));
                assert_eq!(inv.mul(&g).unwrap(), GroupElement::identity(kind));
            }
        }
    }

    #[test]
    fn unitary_determinants_are_units() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ring in [Ring::Eisenstein, Ring::Gauss] {
            for _ in 0..10 {
                let g = GroupElement::random_word(GroupKind::Unitary(ring), &mut rng, 5);
                let det = g.det_unitary().unwrap();
                assert!(det.is_unit(), "det {det} not a unit");
            }
        }
    }

    #[test]
    fn congruence_sampler_stays_in_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for kind in [
            GroupKind::Unitary(Ring::Eisenstein),
            GroupKind::Unitary(Ring::Gauss),
            GroupKind::Quaternionic,
        ] {
            for _ in 0..20 {
                let g = GroupElement::random_congruence(kind, &mut rng, 4);
                assert!(g.is_symplectic());
                assert!(g.is_congruence());
            }
        }
    }

    #[test]
    fn minus_identity_congruence_depends_on_ring() {
        // −2 is divisible by 1 + i but not by √−3.
        assert!(GroupElement::minus_identity(GroupKind::Unitary(Ring::Gauss)).is_congruence());
        assert!(!GroupElement::minus_identity(GroupKind::Unitary(Ring::Eisenstein)).is_congruence());
        // 𝔭 contains 2, so −E is quaternionic-congruent.
        assert!(GroupElement::minus_identity(GroupKind::Quaternionic).is_congruence());
    }

    #[test]
    fn sigma_rotates_the_imaginary_units() {
        let i1 = Quaternion::unit(1);
        let i2 = Quaternion::unit(2);
        let i3 = Quaternion::unit(3);
        assert_eq!(s3_sigma(&i1), i2);
        assert_eq!(s3_sigma(&i2), i3);
        assert_eq!(s3_sigma(&i3), i1);
        // σ³ = id on a generic element.
        let x = Quaternion::from_halves([1, 3, -5, 7]);
        assert_eq!(s3_sigma(&s3_sigma(&s3_sigma(&x))), x);
    }

    #[test]
    fn tau_squares_to_conjugation_by_i1() {
        let x = Quaternion::from_halves([1, 3, -5, 7]);
        let i1 = Quaternion::unit(1);
        let tt = s3_tau(&s3_tau(&x));
        assert_eq!(tt, i1.mul(&x).mul(&i1.conj()));
        assert_eq!(s3_tau(&Quaternion::unit(2)), Quaternion::unit(3).neg());
        assert_eq!(s3_tau(&Quaternion::unit(3)), Quaternion::unit(2));
        // τστ = σ², so τ and σ generate a copy of S₃ modulo inner maps.
        let lhs = s3_tau(&s3_sigma(&s3_tau(&x)));
        let rhs = s3_sigma(&s3_sigma(&x));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn signed_permutations_enforce_even_sign_count() {
        assert!(SignedPermutation::try_new([1, 0, 2, 3], [1, 1, -1, -1]).is_ok());
        assert!(SignedPermutation::try_new([0, 1, 2, 3], [1, -1, -1, -1]).is_err());
        assert!(SignedPermutation::try_new([0, 0, 2, 3], [1, 1, 1, 1]).is_err());
        let p = SignedPermutation::try_new([2, 3, 0, 1], [-1, 1, -1, 1]).unwrap();
        let v = [
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(4.0, 0.0),
        ];
        let w = p.apply(&v);
        assert_eq!(w[0].re, -3.0);
        assert_eq!(w[1].re, 4.0);
        assert_eq!(w[2].re, -1.0);
        assert_eq!(w[3].re, 2.0);
    }

    #[test]
    fn blocks_partition_the_complex_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = GroupElement::random_word(GroupKind::Unitary(Ring::Gauss), &mut rng, 3);
        let [a, b, c, d] = g.blocks2().unwrap();
        let m = g.complex_matrix4().unwrap();
        assert_eq!(m[(0, 2)], b[(0, 0)]);
        assert_eq!(m[(2, 0)], c[(0, 0)]);
        assert_eq!(m[(0, 0)], a[(0, 0)]);
        assert_eq!(m[(3, 3)], d[(1, 1)]);
        let q = GroupElement::random_word(GroupKind::Quaternionic, &mut rng, 3);
        let m8 = q.complex_matrix8().unwrap();
        let [qa, _, _, qd] = q.blocks4().unwrap();
        assert_eq!(m8[(1, 2)], qa[(1, 2)]);
        assert_eq!(m8[(5, 6)], qd[(1, 2)]);
    }

    #[test]
    fn scalar_unit_is_symplectic_and_congruent_for_i1() {
        let g = GroupElement::quat_scalar_unit(Quaternion::unit(1)).unwrap();
        assert!(g.is_symplectic());
        // i₁ − 1 has norm 2, so i₁·E ≡ E mod 𝔭.
        assert!(g.is_congruence());
    }
}
