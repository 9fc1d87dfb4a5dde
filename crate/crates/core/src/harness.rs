//! The verification harness: a registry of named numerical checks over the
//! lower modules, deterministic sampling, finite-difference oracles, and JSON
//! report assembly.
//!
//! Every check is identified by a stable string id, carries the statement it
//! verifies as a formula, runs a fixed number of randomized samples from a
//! generator seeded by (suite seed, check id), and reports its worst residual
//! against a pinned tolerance. Residuals are normalized by max(1, ‖reference
//! side‖). Reports are deterministic given the seed: repeated runs produce
//! identical check records (only the timing field varies).

use std::fmt::Write as _;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{HurwitzInt, Quaternion, QuatC, Ring};
use crate::brackets::{
    bracket, bracket6, eisenstein_bracket_det, phi4_proxy, phi9_proxy, reduction_residual,
    three_term_residual, HermitianForm, Poly6, QuaternionicForm,
};
use crate::groups::{s3_sigma, s3_tau, GroupElement, GroupKind};
use crate::halfplane::{
    jtilde, moebius_hermitian, moebius_quaternionic, sample_hermitian, sample_quaternionic,
    slice_deviation, HalfPlaneError, HermitianPoint, QuaternionicPoint, SampleConfig,
};
use crate::reps::{
    cocycle_pair, hermitian_jacobian, quaternionic_jacobian, rho_jac_apply, rho_jac_slice_matrix,
    vec_row, Matrix6,
};
use crate::theta::{phi10, theta_eval, theta_eval_raw, ThetaCharacteristic, TruncationPolicy};

/// Environment variable overriding the default suite seed.
pub const SEED_ENV: &str = "THETA_BRACKET_SEED";

pub const DEFAULT_SEED: u64 = 20260814;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite or check selector: {0}")]
    UnknownSelector(String),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Suite configuration; serializable so it can live in a config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Multiplied into every tolerance.
    pub tol_scale: f64,
    /// Suite names or check ids to run; empty means everything.
    pub selectors: Vec<String>,
    pub policy: TruncationPolicy,
    pub sample: SampleConfig,
    /// Maximum generator-word length for random group elements.
    pub max_word_len: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            tol_scale: 1.0,
            selectors: Vec::new(),
            policy: TruncationPolicy::default(),
            sample: SampleConfig::default(),
            max_word_len: 6,
        }
    }
}

/// Resolve the suite seed: explicit value, else the environment override,
/// else the default.
pub fn effective_seed(explicit: Option<u64>) -> u64 {
    explicit.unwrap_or_else(|| {
        std::env::var(SEED_ENV)
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_SEED)
    })
}

/// One executed check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub suite: String,
    /// The verified statement, as a formula.
    pub statement: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// The derived per-check seed (suite seed folded with the id).
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportEnvironment {
    pub package: String,
    pub version: String,
    pub os: String,
    pub arch: String,
    pub policy: TruncationPolicy,
    pub sample: SampleConfig,
}

/// The full verification report emitted by `run_suite`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub seed: u64,
    pub tol_scale: f64,
    pub selectors: Vec<String>,
    pub environment: ReportEnvironment,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    pub elapsed_ms: u64,
}

struct CheckOutcome {
    samples: usize,
    max_residual: f64,
    note: Option<String>,
}

impl CheckOutcome {
    fn new(samples: usize, max_residual: f64) -> Self {
        Self {
            samples,
            max_residual,
            note: None,
        }
    }

    fn with_note(samples: usize, max_residual: f64, note: String) -> Self {
        Self {
            samples,
            max_residual,
            note: Some(note),
        }
    }
}

type CheckFn = fn(&SuiteConfig, &mut ChaCha8Rng) -> Result<CheckOutcome, String>;

pub struct CheckSpec {
    pub suite: &'static str,
    pub id: &'static str,
    pub statement: &'static str,
    pub tolerance: f64,
    run: CheckFn,
}

/// Fold a check id into the suite seed (FNV-style) for per-check generators.
fn derive_seed(seed: u64, id: &str) -> u64 {
    let mut s = seed ^ 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        s = (s ^ b as u64).wrapping_mul(0x1000_0000_01b3);
    }
    s
}

fn residual_norm(diff: f64, reference: f64) -> f64 {
    diff / reference.max(1.0)
}

/// Largest entrywise modulus of a complex matrix.
fn max_abs_entry<R, C, S>(m: &nalgebra::Matrix<Complex64, R, C, S>) -> f64
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::storage::Storage<Complex64, R, C>,
{
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Sampling helpers
// ---------------------------------------------------------------------------

/// A congruence element and a point such that both Z and M⟨Z⟩ clear the
/// evaluation margin.
fn automorphy_sample(
    kind: GroupKind,
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(GroupElement, HermitianPoint, HermitianPoint), String> {
    for _ in 0..500 {
        let m = GroupElement::random_congruence(kind, rng, 3);
        let z = sample_hermitian(rng, &cfg.sample);
        if let Ok(mz) = moebius_hermitian(&m, &z) {
            if mz.margin() >= cfg.policy.min_margin {
                return Ok((m, z, mz));
            }
        }
    }
    Err("no well-margined congruence pair found in 500 attempts".into())
}

fn word_and_point(
    kind: GroupKind,
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(GroupElement, HermitianPoint), String> {
    for _ in 0..200 {
        let len = rng.gen_range(1..=cfg.max_word_len);
        let m = GroupElement::random_word(kind, rng, len);
        let z = sample_hermitian(rng, &cfg.sample);
        if moebius_hermitian(&m, &z).is_ok() {
            return Ok((m, z));
        }
    }
    Err("no well-conditioned word/point pair found".into())
}

fn quat_word_and_point(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(GroupElement, QuaternionicPoint), String> {
    for _ in 0..200 {
        let len = rng.gen_range(1..=cfg.max_word_len.min(4));
        let m = GroupElement::random_word(GroupKind::Quaternionic, rng, len);
        let z = sample_quaternionic(rng, &cfg.sample);
        if moebius_quaternionic(&m, &z).is_ok() {
            return Ok((m, z));
        }
    }
    Err("no well-conditioned quaternionic word/point pair found".into())
}

fn random_complex<R: Rng>(rng: &mut R, b: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-b..=b), rng.gen_range(-b..=b))
}

/// A point on one of the two candidate vanishing loci: z₁₂ = i·z₂₁ (first) or
/// z₂₁ = i·z₁₂ (second), with the diagonal high enough for a fat margin.
fn sample_locus_point(rng: &mut ChaCha8Rng, first: bool) -> HermitianPoint {
    loop {
        let i = Complex64::i();
        let c = random_complex(rng, 0.6);
        let (z12, z21) = if first { (i * c, c) } else { (c, i * c) };
        let d1 = Complex64::new(rng.gen_range(-1.0..=1.0), 2.0);
        let d2 = Complex64::new(rng.gen_range(-1.0..=1.0), 2.0);
        let z = HermitianPoint::new(Matrix2::new(d1, z12, z21, d2));
        if z.margin() >= 0.4 {
            return z;
        }
    }
}

// ---------------------------------------------------------------------------
// Finite-difference oracles
// ---------------------------------------------------------------------------

/// Central-difference Jacobian of a hermitian-point map in the coordinate
/// order (z₁₁, z₁₂, z₂₁, z₂₂): entry (r, k) = ∂(label r of image)/∂(label k).
/// If evaluation fails, the step is reduced once before giving up.
pub fn fd_jacobian_hermitian<F>(
    map: F,
    z: &HermitianPoint,
    step: f64,
) -> Result<Matrix4<Complex64>, HarnessError>
where
    F: Fn(&HermitianPoint) -> Result<HermitianPoint, HalfPlaneError>,
{
    let attempt = |h: f64| -> Result<Matrix4<Complex64>, HalfPlaneError> {
        let mut out = Matrix4::zeros();
        for k in 0..4 {
            let (r, c) = (k / 2, k % 2);
            let mut zp = *z;
            zp.z[(r, c)] += Complex64::new(h, 0.0);
            let mut zm = *z;
            zm.z[(r, c)] -= Complex64::new(h, 0.0);
            let d = (map(&zp)?.z - map(&zm)?.z) / Complex64::new(2.0 * h, 0.0);
            let v = vec_row(&d);
            for (row, val) in v.iter().enumerate() {
                out[(row, k)] = *val;
            }
        }
        Ok(out)
    };
    attempt(step)
        .or_else(|_| attempt(step / 10.0))
        .map_err(|e| HarnessError::Sampling(e.to_string()))
}

/// Central-difference Jacobian of a quaternionic-point map in the coordinate
/// order (z₀, z₂, z₁₀, z₁₁, z₁₂, z₁₃).
pub fn fd_jacobian_quaternionic<F>(
    map: F,
    z: &QuaternionicPoint,
    step: f64,
) -> Result<Matrix6, HarnessError>
where
    F: Fn(&QuaternionicPoint) -> Result<QuaternionicPoint, HalfPlaneError>,
{
    let attempt = |h: f64| -> Result<Matrix6, HalfPlaneError> {
        let mut out = Matrix6::zeros();
        for k in 0..6 {
            let mut zp = *z;
            zp.coords[k] += Complex64::new(h, 0.0);
            let mut zm = *z;
            zm.coords[k] -= Complex64::new(h, 0.0);
            let (fp, fm) = (map(&zp)?, map(&zm)?);
            for r in 0..6 {
                out[(r, k)] = (fp.coords[r] - fm.coords[r]) / (2.0 * h);
            }
        }
        Ok(out)
    };
    attempt(step)
        .or_else(|_| attempt(step / 10.0))
        .map_err(|e| HarnessError::Sampling(e.to_string()))
}

// ---------------------------------------------------------------------------
// Scalar automorphy residual
// ---------------------------------------------------------------------------

/// Residual of f(M⟨Z⟩) = det(M)^χ · det(CZ+D)^w · f(Z) for a scalar form.
fn scalar_automorphy_residual(
    value_at: impl Fn(&HermitianPoint) -> Result<Complex64, String>,
    det_m_power: i32,
    weight: i32,
    m: &GroupElement,
    z: &HermitianPoint,
    mz: &HermitianPoint,
) -> Result<f64, String> {
    let det_m = m
        .det_unitary()
        .map_err(|e| e.to_string())?
        .to_complex()
        .powi(det_m_power);
    let (u, _) = cocycle_pair(m, z).map_err(|e| e.to_string())?;
    let lhs = value_at(mz)?;
    let rhs = det_m * u.determinant().powi(weight) * value_at(z)?;
    Ok(residual_norm((lhs - rhs).norm(), rhs.norm()))
}

// ---------------------------------------------------------------------------
// The checks
// ---------------------------------------------------------------------------

fn check_arith_exactness(_cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<CheckOutcome, String> {
    // Exact relation table and ω_H³ = −1.
    let i1 = Quaternion::unit(1);
    let i2 = Quaternion::unit(2);
    let i3 = Quaternion::unit(3);
    let minus_one = Quaternion::one().neg();
    let exact = i1.mul(&i1) == minus_one
        && i2.mul(&i2) == minus_one
        && i3.mul(&i3) == minus_one
        && i1.mul(&i2) == i3
        && i2.mul(&i3) == i1
        && i3.mul(&i1) == i2
        && i2.mul(&i1) == i3.neg()
        && Quaternion::omega_h()
            .mul(&Quaternion::omega_h())
            .mul(&Quaternion::omega_h())
            == minus_one;
    if !exact {
        return Ok(CheckOutcome::with_note(
            1,
            1.0,
            "exact quaternion relations violated".into(),
        ));
    }
    // Hurwitz closure and embedding homomorphism on random pairs.
    let mut max_resid = 0f64;
    let random_hurwitz = |rng: &mut ChaCha8Rng| -> HurwitzInt {
        let q = if rng.gen_bool(0.5) {
            Quaternion::from_ints(std::array::from_fn(|_| rng.gen_range(-5..=5)))
        } else {
            Quaternion::from_halves(std::array::from_fn(|_| 2 * rng.gen_range(-2..=2) + 1))
        };
        HurwitzInt::try_new(q).expect("constructed inside the order")
    };
    for _ in 0..100 {
        let x = random_hurwitz(rng);
        let y = random_hurwitz(rng);
        // Closure: the product must re-validate (panics inside mul if not).
        let p = x.mul(&y);
        // Norm multiplicativity, exact.
        if p.norm() != x.norm() * y.norm() {
            return Ok(CheckOutcome::with_note(100, 1.0, "norm not multiplicative".into()));
        }
        // Embedding homomorphism, floating point.
        let lhs = p.as_quaternion().embed();
        let rhs = x.as_quaternion().embed() * y.as_quaternion().embed();
        max_resid = max_resid.max((lhs - rhs).norm());
    }
    Ok(CheckOutcome::new(100, max_resid))
}

fn check_cocycle_det_conjugate(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    let mut samples = 0;
    for ring in [Ring::Eisenstein, Ring::Gauss] {
        let kind = GroupKind::Unitary(ring);
        for _ in 0..25 {
            let len = rng.gen_range(1..=cfg.max_word_len);
            let m = GroupElement::random_word(kind, rng, len);
            let det_m = m.det_unitary().map_err(|e| e.to_string())?.to_complex();
            for _ in 0..3 {
                let z = sample_hermitian(rng, &cfg.sample);
                let (u, v) = cocycle_pair(&m, &z).map_err(|e| e.to_string())?;
                let lhs = u.determinant();
                let rhs = det_m * v.determinant();
                max_resid = max_resid.max(residual_norm((lhs - rhs).norm(), lhs.norm()));
                samples += 1;
            }
        }
    }
    Ok(CheckOutcome::new(samples, max_resid))
}

fn check_hermitian_jacobian_fd(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    for _ in 0..20 {
        let kind = GroupKind::Unitary(if rng.gen_bool(0.5) {
            Ring::Eisenstein
        } else {
            Ring::Gauss
        });
        let (m, z) = word_and_point(kind, cfg, rng)?;
        let fd = fd_jacobian_hermitian(|p| moebius_hermitian(&m, p), &z, 1e-5)
            .map_err(|e| e.to_string())?;
        let closed = hermitian_jacobian(&m, &z).map_err(|e| e.to_string())?.flatten();
        max_resid = max_resid.max(max_abs_entry(&(fd - closed)));
    }
    Ok(CheckOutcome::new(20, max_resid))
}

fn check_hermitian_jacobian_det(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    for _ in 0..50 {
        let kind = GroupKind::Unitary(if rng.gen_bool(0.5) {
            Ring::Eisenstein
        } else {
            Ring::Gauss
        });
        let (m, z) = word_and_point(kind, cfg, rng)?;
        let det_m = m.det_unitary().map_err(|e| e.to_string())?.to_complex();
        let (u, _) = cocycle_pair(&m, &z).map_err(|e| e.to_string())?;
        let lhs = hermitian_jacobian(&m, &z)
            .map_err(|e| e.to_string())?
            .flatten()
            .determinant();
        let rhs = det_m.powi(2) * u.determinant().powi(-4);
        max_resid = max_resid.max(residual_norm((lhs - rhs).norm(), rhs.norm()));
    }
    Ok(CheckOutcome::new(50, max_resid))
}

fn check_eisenstein_theta_automorphy(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let kind = GroupKind::Unitary(Ring::Eisenstein);
    let chars = ThetaCharacteristic::eisenstein_all();
    let mut max_resid = 0f64;
    let mut samples = 0;
    for _ in 0..100 {
        let (m, z, mz) = automorphy_sample(kind, cfg, rng)?;
        for ch in &chars {
            let r = scalar_automorphy_residual(
                |p| {
                    theta_eval(p, ch, &cfg.policy)
                        .map(|t| t.value)
                        .map_err(|e| e.to_string())
                },
                1,
                1,
                &m,
                &z,
                &mz,
            )?;
            max_resid = max_resid.max(r);
            samples += 1;
        }
    }
    Ok(CheckOutcome::new(samples, max_resid))
}

fn check_eisenstein_theta_symmetry(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    let mut samples = 0;
    for _ in 0..10 {
        let z = sample_hermitian(rng, &cfg.sample);
        let zt = z.transpose();
        for ch in ThetaCharacteristic::eisenstein_all() {
            let a = theta_eval(&z, &ch, &cfg.policy).map_err(|e| e.to_string())?;
            let b = theta_eval(&zt, &ch, &cfg.policy).map_err(|e| e.to_string())?;
            max_resid = max_resid.max(residual_norm((a.value - b.value).norm(), a.value.norm()));
            samples += 1;
        }
    }
    Ok(CheckOutcome::new(samples, max_resid))
}

fn ordered_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

fn check_eisenstein_three_term(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let forms: Vec<HermitianForm> = ThetaCharacteristic::eisenstein_all()
        .into_iter()
        .map(|ch| HermitianForm::theta(ch, cfg.policy))
        .collect();
    let mut max_resid = 0f64;
    let mut samples = 0;
    for t in ordered_triples(5) {
        for _ in 0..5 {
            let z = sample_hermitian(rng, &cfg.sample);
            let r = three_term_residual(&forms[t[0]], &forms[t[1]], &forms[t[2]], &z)
                .map_err(|e| e.to_string())?;
            max_resid = max_resid.max(r);
            samples += 1;
        }
    }
    Ok(CheckOutcome::new(samples, max_resid))
}

fn check_eisenstein_det_skew(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    for _ in 0..10 {
        let z = sample_hermitian(rng, &cfg.sample);
        let d = eisenstein_bracket_det(&z, &cfg.policy).map_err(|e| e.to_string())?;
        let dt = eisenstein_bracket_det(&z.transpose(), &cfg.policy).map_err(|e| e.to_string())?;
        max_resid = max_resid.max(residual_norm((d + dt).norm(), d.norm()));
    }
    Ok(CheckOutcome::new(10, max_resid))
}

fn check_eisenstein_quotient_skew(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    let mut done = 0;
    let mut attempts = 0;
    while done < 10 && attempts < 200 {
        attempts += 1;
        let z = sample_hermitian(rng, &cfg.sample);
        let (a, b) = match (
            phi9_proxy(&z, &cfg.policy),
            phi9_proxy(&z.transpose(), &cfg.policy),
        ) {
            (Ok(a), Ok(b)) => (a, b),
            // Pivot too small: resample away from the zero divisor of Θ₁.
            _ => continue,
        };
        max_resid = max_resid.max(residual_norm((a + b).norm(), a.norm()));
        done += 1;
    }
    if done < 10 {
        return Err("could not find 10 points clear of the Θ₁ zero divisor".into());
    }
    Ok(CheckOutcome::new(done, max_resid))
}

fn check_gauss_square_automorphy(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let kind = GroupKind::Unitary(Ring::Gauss);
    let chars = ThetaCharacteristic::gauss_all();
    let mut max_resid = 0f64;
    let mut samples = 0;
    for _ in 0..40 {
        let (m, z, mz) = automorphy_sample(kind, cfg, rng)?;
        for ch in &chars {
            let r = scalar_automorphy_residual(
                |p| {
                    theta_eval(p, ch, &cfg.policy)
                        .map(|t| t.value * t.value)
                        .map_err(|e| e.to_string())
                },
                1, // det(M)^{r/2} with r = 2
                2,
                &m,
                &z,
                &mz,
            )?;
            max_resid = max_resid.max(r);
            samples += 1;
        }
    }
    Ok(CheckOutcome::new(samples, max_resid))
}

fn check_gauss_three_term(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let forms: Vec<HermitianForm> = ThetaCharacteristic::gauss_generators()
        .into_iter()
        .map(|ch| HermitianForm::theta_square(ch, cfg.policy))
        .collect();
    let mut max_resid = 0f64;
    let mut samples = 0;
    for t in ordered_triples(5) {
        for _ in 0..5 {
            let z = sample_hermitian(rng, &cfg.sample);
            let r = three_term_residual(&forms[t[0]], &forms[t[1]], &forms[t[2]], &z)
                .map_err(|e| e.to_string())?;
            max_resid = max_resid.max(r);
            samples += 1;
        }
    }
    Ok(CheckOutcome::new(samples, max_resid))
}

fn check_gauss_quotient_skew(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    let mut done = 0;
    let mut attempts = 0;
    while done < 10 && attempts < 200 {
        attempts += 1;
        let z = sample_hermitian(rng, &cfg.sample);
        let (a, b) = match (
            phi4_proxy(&z, &cfg.policy),
            phi4_proxy(&z.transpose(), &cfg.policy),
        ) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        max_resid = max_resid.max(residual_norm((a + b).norm(), a.norm()));
        done += 1;
    }
    if done < 10 {
        return Err("could not find 10 points clear of the pivot zero divisors".into());
    }
    Ok(CheckOutcome::new(done, max_resid))
}

fn check_phi10_symmetry(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    for _ in 0..10 {
        let z = sample_hermitian(rng, &cfg.sample);
        let a = phi10(&z, &cfg.policy).map_err(|e| e.to_string())?;
        let b = phi10(&z.transpose(), &cfg.policy).map_err(|e| e.to_string())?;
        max_resid = max_resid.max(residual_norm((a.value - b.value).norm(), a.value.norm()));
    }
    Ok(CheckOutcome::new(10, max_resid))
}

fn check_gauss_vanishing_locus(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let chars = ThetaCharacteristic::gauss_all();
    let mut vanishing = Vec::new();
    let mut gray = Vec::new();
    let mut samples = 0;
    for (locus, first) in [("z12=i·z21", true), ("z21=i·z12", false)] {
        let points: Vec<HermitianPoint> =
            (0..20).map(|_| sample_locus_point(rng, first)).collect();
        for ch in &chars {
            let mut max_mod = 0f64;
            for z in &points {
                let t = theta_eval(z, ch, &cfg.policy).map_err(|e| e.to_string())?;
                max_mod = max_mod.max(t.value.norm());
                samples += 1;
            }
            if max_mod < 1e-6 {
                vanishing.push(format!("{} on {} (max {:.2e})", ch.label(), locus, max_mod));
            } else if max_mod <= 1e-3 {
                gray.push(format!("{} on {} (max {:.2e})", ch.label(), locus, max_mod));
            }
        }
    }
    let residual = (vanishing.len() as f64 - 1.0).abs() + gray.len() as f64;
    let note = format!(
        "vanishing pairs: [{}]; between thresholds: [{}]",
        vanishing.join(", "),
        gray.join(", ")
    );
    Ok(CheckOutcome::with_note(samples, residual, note))
}

fn check_rho_multiplicative(
    _cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    for _ in 0..100 {
        let a = Matrix4::from_fn(|_, _| random_complex(rng, 1.0));
        let b = Matrix4::from_fn(|_, _| random_complex(rng, 1.0));
        let ra = rho_jac_slice_matrix(&a).map_err(|e| e.to_string())?;
        let rb = rho_jac_slice_matrix(&b).map_err(|e| e.to_string())?;
        let rab = rho_jac_slice_matrix(&(a * b)).map_err(|e| e.to_string())?;
        max_resid = max_resid.max(residual_norm((ra * rb - rab).norm(), rab.norm()));
    }
    Ok(CheckOutcome::new(100, max_resid))
}

fn check_rho_real_form(cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    for _ in 0..50 {
        let entries: [Quaternion; 4] = std::array::from_fn(|_| {
            if rng.gen_bool(0.5) {
                Quaternion::from_ints(std::array::from_fn(|_| rng.gen_range(-2..=2)))
            } else {
                Quaternion::from_halves(std::array::from_fn(|_| 2 * rng.gen_range(-1..=1) + 1))
            }
        });
        let z = sample_quaternionic(rng, &cfg.sample);
        max_resid = max_resid.max(quaternionic_action_residual(&entries, &z));
    }
    Ok(CheckOutcome::new(50, max_resid))
}

/// ‖ρ_Jac(Ǔ)(W̌) − (U W Ū′)̌‖ for a quaternionic 2×2 matrix U given by its
/// entries (u₁₁, u₁₂, u₂₁, u₂₂), normalized.
fn quaternionic_action_residual(entries: &[Quaternion; 4], z: &QuaternionicPoint) -> f64 {
    let mut ucheck = Matrix4::zeros();
    for (idx, q) in entries.iter().enumerate() {
        let (bi, bj) = (idx / 2, idx % 2);
        let e = q.embed();
        for r in 0..2 {
            for c in 0..2 {
                ucheck[(2 * bi + r, 2 * bj + c)] = e[(r, c)];
            }
        }
    }
    let scalar =
        |z: Complex64| QuatC::new([z, Complex64::ZERO, Complex64::ZERO, Complex64::ZERO]);
    let w = [
        [scalar(z.z0()), z.z1()],
        [z.z1().quat_conj(), scalar(z.z2())],
    ];
    let uq: [[QuatC; 2]; 2] = [
        [entries[0].to_quat_c(), entries[1].to_quat_c()],
        [entries[2].to_quat_c(), entries[3].to_quat_c()],
    ];
    let mut uw = [[QuatC::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let p = uq[i][k].mul(&w[k][j]);
                for t in 0..4 {
                    uw[i][j].c[t] += p.c[t];
                }
            }
        }
    }
    let mut uwu = [[QuatC::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let p = uw[i][k].mul(&uq[j][k].quat_conj());
                for t in 0..4 {
                    uwu[i][j].c[t] += p.c[t];
                }
            }
        }
    }
    let mut expected = Matrix4::zeros();
    for (bi, row) in uwu.iter().enumerate() {
        for (bj, q) in row.iter().enumerate() {
            let e = q.embed();
            for r in 0..2 {
                for c in 0..2 {
                    expected[(2 * bi + r, 2 * bj + c)] = e[(r, c)];
                }
            }
        }
    }
    let got = rho_jac_apply(&ucheck, &z.pack());
    residual_norm((got - expected).norm(), expected.norm())
}

fn check_rho_slice_invariance(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    for _ in 0..50 {
        let a = Matrix4::from_fn(|_, _| random_complex(rng, 1.0));
        let w = sample_quaternionic(rng, &cfg.sample).pack();
        let img = rho_jac_apply(&a, &w);
        max_resid = max_resid.max(residual_norm(slice_deviation(&img), img.norm()));
    }
    Ok(CheckOutcome::new(50, max_resid))
}

fn highest_weight_vector() -> QuaternionicPoint {
    let mut c = [Complex64::ZERO; 6];
    c[0] = Complex64::ONE;
    QuaternionicPoint::new(c)
}

fn check_rho_highest_weight_diagonal(
    _cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let e0 = highest_weight_vector().pack();
    let mut max_resid = 0f64;
    for _ in 0..20 {
        let d: [Complex64; 4] = std::array::from_fn(|_| loop {
            let c = random_complex(rng, 1.5);
            if c.norm() > 0.2 {
                break c;
            }
        });
        let a = Matrix4::from_diagonal(&nalgebra::Vector4::new(d[0], d[1], d[2], d[3]));
        let img = rho_jac_apply(&a, &e0);
        let expect = e0 * (d[0] * d[1]);
        max_resid = max_resid.max((img - expect).norm());
    }
    Ok(CheckOutcome::new(20, max_resid))
}

fn check_rho_highest_weight_unipotent(
    _cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let e0 = highest_weight_vector().pack();
    let mut max_resid = 0f64;
    for _ in 0..20 {
        let mut a = Matrix4::identity();
        for r in 0..4 {
            for c in (r + 1)..4 {
                a[(r, c)] = random_complex(rng, 1.0);
            }
        }
        let img = rho_jac_apply(&a, &e0);
        max_resid = max_resid.max((img - e0).norm());
    }
    Ok(CheckOutcome::new(20, max_resid))
}

fn check_slice_dimension(_cfg: &SuiteConfig, _rng: &mut ChaCha8Rng) -> Result<CheckOutcome, String> {
    // The projector W ↦ (W + J̃W′J̃⁻¹)/2 on ℂ^{4×4}, flattened to 16×16.
    let j = jtilde();
    let jinv = -j;
    let mut p = DMatrix::<Complex64>::zeros(16, 16);
    for col in 0..16 {
        let mut w = Matrix4::<Complex64>::zeros();
        w[(col / 4, col % 4)] = Complex64::ONE;
        let img = (w + j * w.transpose() * jinv) * Complex64::new(0.5, 0.0);
        for row in 0..16 {
            p[(row, col)] = img[(row / 4, row % 4)];
        }
    }
    let rank = p.rank(1e-9);
    Ok(CheckOutcome::with_note(
        1,
        (rank as f64 - 6.0).abs(),
        format!("slice projector rank = {rank}"),
    ))
}

fn check_quaternionic_jacobian_fd(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    for _ in 0..20 {
        let (m, z) = quat_word_and_point(cfg, rng)?;
        let fd = fd_jacobian_quaternionic(|p| moebius_quaternionic(&m, p), &z, 1e-5)
            .map_err(|e| e.to_string())?;
        let jac = quaternionic_jacobian(&m, &z).map_err(|e| e.to_string())?;
        max_resid = max_resid.max(max_abs_entry(&(fd - jac.on_slice)));
    }
    Ok(CheckOutcome::new(20, max_resid))
}

fn check_quaternionic_jacobian_det(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    for _ in 0..30 {
        let (m, z) = quat_word_and_point(cfg, rng)?;
        let jac = quaternionic_jacobian(&m, &z).map_err(|e| e.to_string())?;
        let lhs = jac.on_slice.determinant();
        let rhs = jac.cocycle_det.powi(-3);
        max_resid = max_resid.max(residual_norm((lhs - rhs).norm(), rhs.norm()));
    }
    Ok(CheckOutcome::new(30, max_resid))
}

fn check_s3_quotient(_cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Result<CheckOutcome, String> {
    let i1 = Quaternion::unit(1);
    for _ in 0..20 {
        let x = Quaternion::new(std::array::from_fn(|_| {
            num_rational::BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())
        }));
        // σ³ = id
        if s3_sigma(&s3_sigma(&s3_sigma(&x))) != x {
            return Ok(CheckOutcome::with_note(20, 1.0, "σ³ ≠ id".into()));
        }
        // τ² = conjugation by i₁
        if s3_tau(&s3_tau(&x)) != i1.mul(&x).mul(&i1.conj()) {
            return Ok(CheckOutcome::with_note(20, 1.0, "τ² ≠ conj by i₁".into()));
        }
        // τστ = σ²
        if s3_tau(&s3_sigma(&s3_tau(&x))) != s3_sigma(&s3_sigma(&x)) {
            return Ok(CheckOutcome::with_note(20, 1.0, "τστ ≠ σ²".into()));
        }
    }
    // i₁·E₄ is symplectic and ≡ E mod 𝔭, so τ² is inner for the congruence
    // quotient and the images of σ, τ satisfy the S₃ presentation.
    let g = GroupElement::quat_scalar_unit(i1).map_err(|e| e.to_string())?;
    if !g.is_symplectic() || !g.is_congruence() {
        return Ok(CheckOutcome::with_note(
            21,
            1.0,
            "i₁E₄ fails the symplectic/congruence test".into(),
        ));
    }
    Ok(CheckOutcome::new(21, 0.0))
}

fn check_reduction_identity(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    for _ in 0..20 {
        let z = sample_quaternionic(rng, &cfg.sample);
        let fs: [QuaternionicForm; 6] = std::array::from_fn(|j| {
            QuaternionicForm::new(format!("f{}", j + 1), 1, Poly6::random(rng, 4, 2))
        });
        let g = QuaternionicForm::new("g", 3, Poly6::random(rng, 4, 2));
        let r = reduction_residual(&fs, &g, &z).map_err(|e| e.to_string())?;
        max_resid = max_resid.max(r);
    }
    Ok(CheckOutcome::new(20, max_resid))
}

fn check_three_term_general(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let mut max_resid = 0f64;
    for _ in 0..20 {
        let z = sample_quaternionic(rng, &cfg.sample);
        let mk = |label: &str, rng: &mut ChaCha8Rng| {
            QuaternionicForm::new(label, rng.gen_range(1..=5), Poly6::random(rng, 4, 2))
        };
        let f = mk("f", rng);
        let g = mk("g", rng);
        let h = mk("h", rng);
        let fg = bracket6(&f, &g, &z);
        let fh = bracket6(&f, &h, &z);
        let hg = bracket6(&h, &g, &z);
        let (fv, gv, hv) = (f.poly.eval(&z), g.poly.eval(&z), h.poly.eval(&z));
        let mut num = 0f64;
        let mut den = 0f64;
        for k in 0..6 {
            let lhs = hv * fg[k] * h.weight as f64;
            let rhs = gv * fh[k] * g.weight as f64 + fv * hg[k] * f.weight as f64;
            num += (lhs - rhs).norm_sqr();
            den += lhs.norm_sqr();
        }
        max_resid = max_resid.max(residual_norm(num.sqrt(), den.sqrt()));
    }
    Ok(CheckOutcome::new(20, max_resid))
}

fn check_bracket_automorphy(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let kind = GroupKind::Unitary(Ring::Eisenstein);
    let pairs = [(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)];
    let mut max_resid = 0f64;
    for n in 0..10 {
        let (i, j) = pairs[n % pairs.len()];
        let f = HermitianForm::theta(ThetaCharacteristic::Eisenstein(i), cfg.policy);
        let g = HermitianForm::theta(ThetaCharacteristic::Eisenstein(j), cfg.policy);
        let (m, z, mz) = automorphy_sample(kind, cfg, rng)?;
        let det_m = m.det_unitary().map_err(|e| e.to_string())?.to_complex();
        let (u, v) = cocycle_pair(&m, &z).map_err(|e| e.to_string())?;
        let b_z = bracket(&f, &g, &z).map_err(|e| e.to_string())?;
        let b_mz = bracket(&f, &g, &mz).map_err(|e| e.to_string())?;
        // B̃(M⟨Z⟩) = det(M)² · det(CZ+D)² · (CZ+D) · B̃(Z) · (C̄Z′+D̄)′
        let rhs = u * b_z.comp * v.transpose() * (det_m.powi(2) * u.determinant().powi(2));
        max_resid = max_resid.max(residual_norm((b_mz.comp - rhs).norm(), rhs.norm()));
    }
    Ok(CheckOutcome::new(10, max_resid))
}

fn check_truncation_certificates(
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOutcome, String> {
    let eis = ThetaCharacteristic::eisenstein_all();
    let gau = ThetaCharacteristic::gauss_all();
    let mut max_ratio = 0f64;
    let mut samples = 0;
    for k in 0..10 {
        let z = sample_hermitian(rng, &cfg.sample);
        for ch in [&eis[k % eis.len()], &gau[k % gau.len()]] {
            let t = theta_eval(&z, ch, &cfg.policy).map_err(|e| e.to_string())?;
            let r = theta_eval_raw(&z, ch, t.radius + 3.0);
            let ratio = (t.value - r.value).norm() / t.tail_bound;
            max_ratio = max_ratio.max(ratio);
            samples += 1;
        }
    }
    Ok(CheckOutcome::new(samples, max_ratio))
}

// ---------------------------------------------------------------------------
// Registry, runner, report
// ---------------------------------------------------------------------------

/// The full check registry, in execution order.
pub fn registry() -> Vec<CheckSpec> {
    vec![
        CheckSpec {
            suite: "arith",
            id: "quaternion-ring-exactness",
            statement: "i₁²=i₂²=i₃²=−1, i₁i₂=i₃ (cyclic); ω_H³=−1; Hurwitz closure; (xy)̌=x̌·y̌",
            tolerance: 1e-12,
            run: check_arith_exactness,
        },
        CheckSpec {
            suite: "hermitian",
            id: "cocycle-det-conjugate",
            statement: "det(CZ+D) = det(M)·det(C̄Z′+D̄)",
            tolerance: 1e-9,
            run: check_cocycle_det_conjugate,
        },
        CheckSpec {
            suite: "hermitian",
            id: "hermitian-jacobian-fd",
            statement: "d(M⟨Z⟩) = (C̄Z′+D̄)′⁻¹ · dZ · (CZ+D)⁻¹ (finite differences)",
            tolerance: 1e-5,
            run: check_hermitian_jacobian_fd,
        },
        CheckSpec {
            suite: "hermitian",
            id: "hermitian-jacobian-det",
            statement: "det Jac(M,Z) = det(M)²·det(CZ+D)⁻⁴",
            tolerance: 1e-9,
            run: check_hermitian_jacobian_det,
        },
        CheckSpec {
            suite: "eisenstein",
            id: "eisenstein-theta-automorphy",
            statement: "Θ_p(M⟨Z⟩) = det(M)·det(CZ+D)·Θ_p(Z) on the level-√−3 kernel",
            tolerance: 1e-8,
            run: check_eisenstein_theta_automorphy,
        },
        CheckSpec {
            suite: "eisenstein",
            id: "eisenstein-theta-symmetry",
            statement: "Θ_p(Z′) = Θ_p(Z)",
            tolerance: 1e-10,
            run: check_eisenstein_theta_symmetry,
        },
        CheckSpec {
            suite: "eisenstein",
            id: "eisenstein-three-term",
            statement: "wt(h)·h·{f,g} = wt(g)·g·{f,h} + wt(f)·f·{h,g} on Θ₁…Θ₅",
            tolerance: 1e-8,
            run: check_eisenstein_three_term,
        },
        CheckSpec {
            suite: "eisenstein",
            id: "eisenstein-det-skew",
            statement: "D(Z′) = −D(Z) for D = det({Θ₁,Θ₂},…,{Θ₁,Θ₅})",
            tolerance: 1e-8,
            run: check_eisenstein_det_skew,
        },
        CheckSpec {
            suite: "eisenstein",
            id: "eisenstein-det-quotient-skew",
            statement: "D/Θ₁³ changes sign under Z ↦ Z′ (away from the Θ₁ zero divisor)",
            tolerance: 1e-6,
            run: check_eisenstein_quotient_skew,
        },
        CheckSpec {
            suite: "gauss",
            id: "gauss-square-automorphy",
            statement: "Θ[m]²(M⟨Z⟩) = det(M)·det(CZ+D)²·Θ[m]²(Z) on the level-(1+i) kernel",
            tolerance: 1e-8,
            run: check_gauss_square_automorphy,
        },
        CheckSpec {
            suite: "gauss",
            id: "gauss-three-term",
            statement: "three-term relation on the five generator squares Θ(1)²…Θ(5)²",
            tolerance: 1e-8,
            run: check_gauss_three_term,
        },
        CheckSpec {
            suite: "gauss",
            id: "gauss-det-quotient-skew",
            statement: "D/(Θ(1)⁶·φ₁₀) changes sign under Z ↦ Z′, D = det({Θ(1)²,Θ(j)²})",
            tolerance: 1e-6,
            run: check_gauss_quotient_skew,
        },
        CheckSpec {
            suite: "gauss",
            id: "gauss-phi10-symmetry",
            statement: "φ₁₀(Z′) = φ₁₀(Z) for the product of the ten thetas",
            tolerance: 1e-8,
            run: check_phi10_symmetry,
        },
        CheckSpec {
            suite: "gauss",
            id: "gauss-vanishing-locus",
            statement: "exactly one (theta, locus) pair vanishes on {z₁₂=i·z₂₁} / {z₂₁=i·z₁₂}",
            tolerance: 0.0,
            run: check_gauss_vanishing_locus,
        },
        CheckSpec {
            suite: "quaternionic",
            id: "rho-jac-multiplicative",
            statement: "ρ_Jac(AB) = ρ_Jac(A)·ρ_Jac(B) in slice coordinates",
            tolerance: 1e-10,
            run: check_rho_multiplicative,
        },
        CheckSpec {
            suite: "quaternionic",
            id: "rho-jac-real-form",
            statement: "ρ_Jac(Ǔ)(W̌) = (U·W·Ū′)̌ for quaternionic U",
            tolerance: 1e-12,
            run: check_rho_real_form,
        },
        CheckSpec {
            suite: "quaternionic",
            id: "rho-jac-slice-invariance",
            statement: "ρ_Jac(A) preserves {W : J̃W′J̃⁻¹ = W} for every A",
            tolerance: 1e-10,
            run: check_rho_slice_invariance,
        },
        CheckSpec {
            suite: "quaternionic",
            id: "rho-jac-highest-weight-diagonal",
            statement: "ρ_Jac(diag(d))·(z₀-direction) = d₁d₂·(z₀-direction)",
            tolerance: 1e-12,
            run: check_rho_highest_weight_diagonal,
        },
        CheckSpec {
            suite: "quaternionic",
            id: "rho-jac-highest-weight-unipotent",
            statement: "upper unipotent factors fix the z₀-direction",
            tolerance: 1e-10,
            run: check_rho_highest_weight_unipotent,
        },
        CheckSpec {
            suite: "quaternionic",
            id: "rho-jac-slice-dimension",
            statement: "rank of the slice projector (W + J̃W′J̃⁻¹)/2 equals 6",
            tolerance: 0.0,
            run: check_slice_dimension,
        },
        CheckSpec {
            suite: "quaternionic",
            id: "quaternionic-jacobian-fd",
            statement: "d(M⟨Z⟩) = ρ_Jac(V̌⁻¹), V̌ = J̃(ČŽ+Ď)′J̃⁻¹ (finite differences)",
            tolerance: 1e-5,
            run: check_quaternionic_jacobian_fd,
        },
        CheckSpec {
            suite: "quaternionic",
            id: "quaternionic-jacobian-det",
            statement: "det Jac(M,Z) = det(ČŽ+Ď)⁻³",
            tolerance: 1e-8,
            run: check_quaternionic_jacobian_det,
        },
        CheckSpec {
            suite: "quaternionic",
            id: "s3-quotient-relations",
            statement: "σ³ = id; τ² = conjugation by i₁; i₁E₄ symplectic and ≡ E mod 𝔭",
            tolerance: 0.0,
            run: check_s3_quotient,
        },
        CheckSpec {
            suite: "brackets",
            id: "reduction-identity",
            statement: "f₁⁵·det₇[[wt·val],[∇val]] = det₆({f₁,f₂},…,{f₁,f₆},{f₁,g})",
            tolerance: 1e-8,
            run: check_reduction_identity,
        },
        CheckSpec {
            suite: "brackets",
            id: "three-term-general",
            statement: "wt(h)h{f,g} = wt(g)g{f,h} + wt(f)f{h,g} for arbitrary weights",
            tolerance: 1e-10,
            run: check_three_term_general,
        },
        CheckSpec {
            suite: "brackets",
            id: "bracket-automorphy",
            statement: "{f,g}(M⟨Z⟩) = det(M)²·det(CZ+D)²·(CZ+D)·{f,g}(Z)·(C̄Z′+D̄)′",
            tolerance: 1e-6,
            run: check_bracket_automorphy,
        },
        CheckSpec {
            suite: "truncation",
            id: "truncation-certificates",
            statement: "|Θ_certified − Θ_(radius+3)| ≤ declared tail bound",
            tolerance: 1.0,
            run: check_truncation_certificates,
        },
    ]
}

/// All suite names, in registry order, without duplicates.
pub fn suite_names() -> Vec<&'static str> {
    let mut names = Vec::new();
    for c in registry() {
        if !names.contains(&c.suite) {
            names.push(c.suite);
        }
    }
    names
}

fn selected(spec: &CheckSpec, selectors: &[String]) -> bool {
    selectors.is_empty() || selectors.iter().any(|s| s == spec.suite || s == spec.id)
}

/// Run a single check by id under the given configuration.
pub fn run_check(id: &str, cfg: &SuiteConfig) -> Result<CheckRecord, HarnessError> {
    let spec = registry()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| HarnessError::UnknownSelector(id.to_string()))?;
    Ok(execute(&spec, cfg))
}

fn execute(spec: &CheckSpec, cfg: &SuiteConfig) -> CheckRecord {
    let seed = derive_seed(cfg.seed, spec.id);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tolerance = spec.tolerance * cfg.tol_scale;
    match (spec.run)(cfg, &mut rng) {
        Ok(out) => CheckRecord {
            id: spec.id.to_string(),
            suite: spec.suite.to_string(),
            statement: spec.statement.to_string(),
            samples: out.samples,
            max_residual: out.max_residual,
            tolerance,
            passed: out.max_residual <= tolerance,
            seed,
            note: out.note,
        },
        Err(e) => CheckRecord {
            id: spec.id.to_string(),
            suite: spec.suite.to_string(),
            statement: spec.statement.to_string(),
            samples: 0,
            max_residual: f64::INFINITY,
            tolerance,
            passed: false,
            seed,
            note: Some(format!("check aborted: {e}")),
        },
    }
}

/// Run the configured checks and assemble the report.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport, HarnessError> {
    let regs = registry();
    for sel in &cfg.selectors {
        let known = regs.iter().any(|c| c.suite == sel.as_str() || c.id == sel.as_str());
        if !known {
            return Err(HarnessError::UnknownSelector(sel.clone()));
        }
    }
    let start = std::time::Instant::now();
    let checks: Vec<CheckRecord> = regs
        .iter()
        .filter(|c| selected(c, &cfg.selectors))
        .map(|c| execute(c, cfg))
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        schema_version: 1,
        seed: cfg.seed,
        tol_scale: cfg.tol_scale,
        selectors: cfg.selectors.clone(),
        environment: ReportEnvironment {
            package: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            policy: cfg.policy,
            sample: cfg.sample,
        },
        checks,
        passed,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Human-readable rendering of a report.
pub fn report_to_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "verification report (schema {}, seed {}, tol scale {})",
        report.schema_version, report.seed, report.tol_scale
    );
    for c in &report.checks {
        let _ = writeln!(
            out,
            "[{}] {:<34} max residual {:>12.3e}  tol {:>9.1e}  samples {:>4}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.max_residual,
            c.tolerance,
            c.samples
        );
        if let Some(n) = &c.note {
            let _ = writeln!(out, "       {n}");
        }
    }
    let _ = writeln!(
        out,
        "overall: {} ({} checks, {} ms)",
        if report.passed { "PASS" } else { "FAIL" },
        report.checks.len(),
        report.elapsed_ms
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_jacobian_of_identity_and_translation_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let cfg = SuiteConfig::default();
        let z = sample_hermitian(&mut rng, &cfg.sample);
        let fd = fd_jacobian_hermitian(|p| Ok(*p), &z, 1e-5).unwrap();
        assert!((fd - Matrix4::identity()).norm() < 1e-10);
        let h = Matrix2::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.5),
            Complex64::new(0.5, -0.5),
            Complex64::new(-2.0, 0.0),
        );
        let fd = fd_jacobian_hermitian(|p| Ok(HermitianPoint::new(p.z + h)), &z, 1e-5).unwrap();
        assert!((fd - Matrix4::identity()).norm() < 1e-10);
    }

    #[test]
    fn fd_jacobian_of_minus_inverse_matches_closed_form() {
        // At any Z, the derivative of Z ↦ −Z⁻¹ is W ↦ Z⁻¹WZ⁻¹.
        let i = Complex64::i();
        let z = HermitianPoint::new(Matrix2::new(
            i * 1.3,
            Complex64::new(0.2, 0.1),
            Complex64::new(0.2, -0.1),
            i * 1.7,
        ));
        let fd = fd_jacobian_hermitian(
            |p| {
                p.z.try_inverse()
                    .map(|w| HermitianPoint::new(-w))
                    .ok_or(HalfPlaneError::IllConditionedCocycle { rcond: 0.0 })
            },
            &z,
            1e-5,
        )
        .unwrap();
        let zi = z.z.try_inverse().unwrap();
        let closed = crate::reps::LinearMap2 {
            left: zi,
            right: zi,
        }
        .flatten();
        assert!(max_abs_entry(&(fd - closed)) < 1e-6);
    }

    #[test]
    fn registry_ids_are_unique_and_cover_all_suites() {
        let regs = registry();
        let mut ids: Vec<_> = regs.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), regs.len(), "duplicate check ids");
        let suites = suite_names();
        for s in ["arith", "hermitian", "eisenstein", "gauss", "quaternionic", "brackets", "truncation"] {
            assert!(suites.contains(&s), "missing suite {s}");
        }
    }

    #[test]
    fn unknown_selectors_are_rejected() {
        let cfg = SuiteConfig {
            selectors: vec!["nonsense".into()],
            ..SuiteConfig::default()
        };
        assert!(matches!(
            run_suite(&cfg),
            Err(HarnessError::UnknownSelector(_))
        ));
    }

    #[test]
    fn arith_suite_runs_clean_and_deterministically() {
        let cfg = SuiteConfig {
            selectors: vec!["arith".into()],
            ..SuiteConfig::default()
        };
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert!(a.passed);
        assert_eq!(a.checks.len(), 1);
        assert_eq!(
            serde_json::to_string(&a.checks).unwrap(),
            serde_json::to_string(&b.checks).unwrap(),
            "reports must be deterministic given the seed"
        );
    }
}
