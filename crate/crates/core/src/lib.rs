//! Theta constants on rank-two hermitian and quaternionic half-planes,
//! first-order covariant brackets between them, and a randomized numerical
//! harness that verifies the transformation laws and determinant identities
//! relating the two.
//!
//! The crate is organized bottom-up:
//!
//! * [`arith`] — exact arithmetic in the imaginary quadratic rings ℤ[ω] and
//!   ℤ[i], in the rational quaternions, and in the Hurwitz order, together
//!   with the residue maps used to define congruence subgroups.
//! * [`halfplane`] — the hermitian half-plane ℋ₂ ⊂ ℂ^{2×2}, its quaternionic
//!   analogue in the 2×2 quaternion matrices, fractional-linear group
//!   actions, membership margins, and random sampling.
//! * [`groups`] — exact matrix groups: U(2,2) over ℤ[ω] and ℤ[i],
//!   quaternionic symplectic matrices over the Hurwitz order, congruence
//!   conditions, and random word generation.
//! * [`theta`] — the theta constants themselves, evaluated by certified
//!   lattice-sum truncation, with analytic gradients.
//! * [`reps`] — the finite-dimensional representations that appear as
//!   automorphy factors of gradients and brackets, including the holomorphic
//!   extension of U ↦ (W ↦ U W Ū′) to GL(4, ℂ).
//! * [`brackets`] — the covariant bracket {f, g} = wt(g)·g·df − wt(f)·f·dg,
//!   determinants of bracket matrices, and the scalar forms they factor into.
//! * [`harness`] — named numerical checks, suite configuration, and JSON
//!   reporting used by the CLI and the acceptance tests.

pub mod arith;
pub mod brackets;
pub mod groups;
pub mod halfplane;
pub mod harness;
pub mod reps;
pub mod theta;

pub use arith::Ring;
pub use halfplane::{HermitianPoint, QuaternionicPoint};
pub use harness::{run_suite, SuiteConfig, VerificationReport};
pub use theta::{ThetaCharacteristic, TruncationPolicy};
