//! First-order covariant brackets between weighted forms and the determinant
//! identities built from them.
//!
//! For forms f, g of weights a, b the bracket is
//! {f, g} = b·g·df − a·f·dg, a matrix-valued differential: we store the 2×2
//! matrix B̃ with B̃[(j,k)] = coefficient of dz_{kj}, i.e. the transpose of the
//! gradient-matrix combination. With this convention a pair transforming with
//! character det^s and weight r satisfies the standard-by-standard law
//! B̃(M⟨Z⟩) = (det M)^{2s} · det(CZ+D)^{2r} · (CZ+D) · B̃(Z) · (C̄Z′+D̄)′.
//!
//! Flattening in the coordinate label order (z₁₁, z₁₂, z₂₁, z₂₂) turns four
//! brackets against a common pivot into a 4×4 determinant; dividing by powers
//! of the pivot isolates the scalar forms the determinant factors into.
//!
//! The quaternionic (six-coordinate) bracket {f, g} = b·g·∇f − a·f·∇g obeys
//! an exact algebraic reduction: for weights wt(fᵢ) = 1, wt(g) = 3,
//! f₁⁵ · det₇[[f₁ … f₆, 3g], [∇f₁ … ∇f₆, ∇g]]
//!   = det₆({f₁,f₂}, …, {f₁,f₆}, {f₁,g}),
//! which holds for arbitrary differentiable functions and is exercised here
//! with polynomial test forms.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::halfplane::{HermitianPoint, QuaternionicPoint};
use crate::reps::Matrix6;
use crate::theta::{theta_gradient, ThetaCharacteristic, ThetaError, TruncationPolicy};

#[derive(Debug, Error)]
pub enum BracketError {
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("pivot {label} too small in modulus ({magnitude:.3e}) to divide by")]
    PivotTooSmall { label: String, magnitude: f64 },
    #[error("reduction identity requires weights 1,…,1 and 3 (got {got})")]
    BadWeights { got: String },
}

/// A scalar form on the hermitian half-plane with a formal weight and a
/// single evaluator returning value and gradient together.
pub struct HermitianForm {
    pub label: String,
    pub weight: u32,
    #[allow(clippy::type_complexity)]
    eval: Box<dyn Fn(&HermitianPoint) -> Result<(Complex64, Matrix2<Complex64>), BracketError>>,
}

impl HermitianForm {
    pub fn from_parts(
        label: impl Into<String>,
        weight: u32,
        eval: impl Fn(&HermitianPoint) -> Result<(Complex64, Matrix2<Complex64>), BracketError>
            + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            weight,
            eval: Box::new(eval),
        }
    }

    /// A theta constant as a weight-one form.
    pub fn theta(ch: ThetaCharacteristic, policy: TruncationPolicy) -> Self {
        Self::from_parts(ch.label(), 1, move |z| {
            let g = theta_gradient(z, &ch, &policy)?;
            Ok((g.value, g.gradient))
        })
    }

    /// The square of a theta constant as a weight-two form.
    pub fn theta_square(ch: ThetaCharacteristic, policy: TruncationPolicy) -> Self {
        Self::from_parts(format!("{}²", ch.label()), 2, move |z| {
            let g = theta_gradient(z, &ch, &policy)?;
            Ok((g.value * g.value, g.gradient * (2.0 * g.value)))
        })
    }

    pub fn eval(&self, z: &HermitianPoint) -> Result<(Complex64, Matrix2<Complex64>), BracketError> {
        (self.eval)(z)
    }
}

/// A bracket value: the matrix B̃ with B̃[(j,k)] = coefficient of dz_{kj}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketValue {
    pub comp: Matrix2<Complex64>,
}

impl BracketValue {
    /// Coefficients in the label order (dz₁₁, dz₁₂, dz₂₁, dz₂₂).
    pub fn flatten(&self) -> [Complex64; 4] {
        [
            self.comp[(0, 0)],
            self.comp[(1, 0)],
            self.comp[(0, 1)],
            self.comp[(1, 1)],
        ]
    }

    pub fn norm(&self) -> f64 {
        self.comp.norm()
    }
}

/// {f, g} = wt(g)·g·df − wt(f)·f·dg from precomputed values and gradients.
pub fn bracket_from_values(
    (fw, fv, fg): (u32, Complex64, &Matrix2<Complex64>),
    (gw, gv, gg): (u32, Complex64, &Matrix2<Complex64>),
) -> BracketValue {
    let combo = fg * Complex64::new(gw as f64, 0.0) * gv - gg * Complex64::new(fw as f64, 0.0) * fv;
    BracketValue {
        comp: combo.transpose(),
    }
}

/// The covariant bracket of two forms at a point.
pub fn bracket(
    f: &HermitianForm,
    g: &HermitianForm,
    z: &HermitianPoint,
) -> Result<BracketValue, BracketError> {
    let (fv, fg) = f.eval(z)?;
    let (gv, gg) = g.eval(z)?;
    Ok(bracket_from_values((f.weight, fv, &fg), (g.weight, gv, &gg)))
}

/// Normalized residual of the three-term relation
/// wt(h)·h·{f,g} = wt(g)·g·{f,h} + wt(f)·f·{h,g}.
pub fn three_term_residual(
    f: &HermitianForm,
    g: &HermitianForm,
    h: &HermitianForm,
    z: &HermitianPoint,
) -> Result<f64, BracketError> {
    let (fv, fg) = f.eval(z)?;
    let (gv, gg) = g.eval(z)?;
    let (hv, hg) = h.eval(z)?;
    let tf = (f.weight, fv, &fg);
    let tg = (g.weight, gv, &gg);
    let th = (h.weight, hv, &hg);
    let lhs = bracket_from_values(tf, tg).comp * (hv * h.weight as f64);
    let mid = bracket_from_values(tf, th).comp * (gv * g.weight as f64);
    let rhs = bracket_from_values(th, tg).comp * (fv * f.weight as f64);
    let reference = lhs.norm().max(1.0);
    Ok((lhs - mid - rhs).norm() / reference)
}

/// Determinant of the 4×4 matrix whose rows are the flattened brackets of a
/// pivot form against four others.
pub fn bracket_det(
    pivot: &HermitianForm,
    others: &[HermitianForm; 4],
    z: &HermitianPoint,
) -> Result<Complex64, BracketError> {
    let (pv, pg) = pivot.eval(z)?;
    let mut m = Matrix4::zeros();
    for (r, form) in others.iter().enumerate() {
        let (fv, fg) = form.eval(z)?;
        let b = bracket_from_values((pivot.weight, pv, &pg), (form.weight, fv, &fg));
        let row = b.flatten();
        for c in 0..4 {
            m[(r, c)] = row[c];
        }
    }
    Ok(m.determinant())
}

/// Pivot-division guard used by the proxy forms.
const PIVOT_MIN: f64 = 1e-3;

fn check_pivot(label: &str, v: Complex64) -> Result<Complex64, BracketError> {
    if v.norm() < PIVOT_MIN {
        Err(BracketError::PivotTooSmall {
            label: label.to_string(),
            magnitude: v.norm(),
        })
    } else {
        Ok(v)
    }
}

/// The Eisenstein bracket determinant D = det({Θ₁,Θ₂}, …, {Θ₁,Θ₅}).
pub fn eisenstein_bracket_det(
    z: &HermitianPoint,
    policy: &TruncationPolicy,
) -> Result<Complex64, BracketError> {
    let pivot = HermitianForm::theta(ThetaCharacteristic::Eisenstein(0), *policy);
    let others: [HermitianForm; 4] = std::array::from_fn(|k| {
        HermitianForm::theta(ThetaCharacteristic::Eisenstein(k + 1), *policy)
    });
    bracket_det(&pivot, &others, z)
}

/// The weight-nine scalar form extracted as D/Θ₁³ (up to the constant the
/// determinant identity carries).
pub fn phi9_proxy(z: &HermitianPoint, policy: &TruncationPolicy) -> Result<Complex64, BracketError> {
    let d = eisenstein_bracket_det(z, policy)?;
    let t1 = theta_gradient(z, &ThetaCharacteristic::Eisenstein(0), policy)?.value;
    let t1 = check_pivot("Θ1", t1)?;
    Ok(d / (t1 * t1 * t1))
}

/// The Gauss bracket determinant D = det({Θ(1)², Θ(j)²}), j = 2..5, over the
/// five generator characteristics.
pub fn gauss_bracket_det(
    z: &HermitianPoint,
    policy: &TruncationPolicy,
) -> Result<Complex64, BracketError> {
    let gens = ThetaCharacteristic::gauss_generators();
    let pivot = HermitianForm::theta_square(gens[0], *policy);
    let others: [HermitianForm; 4] =
        std::array::from_fn(|k| HermitianForm::theta_square(gens[k + 1], *policy));
    bracket_det(&pivot, &others, z)
}

/// The weight-four scalar form extracted as D/(Θ(1)⁶·φ₁₀) (up to constant).
pub fn phi4_proxy(z: &HermitianPoint, policy: &TruncationPolicy) -> Result<Complex64, BracketError> {
    let d = gauss_bracket_det(z, policy)?;
    let gens = ThetaCharacteristic::gauss_generators();
    let t1 = theta_gradient(z, &gens[0], policy)?.value;
    let t1 = check_pivot("Θ(1)", t1)?;
    let p10 = crate::theta::phi10(z, policy)?.value;
    let p10 = check_pivot("φ10", p10)?;
    Ok(d / (t1.powi(6) * p10))
}

/// A polynomial in the six slice coordinates, used as a synthetic weighted
/// form for the reduction identity.
#[derive(Debug, Clone)]
pub struct Poly6 {
    /// (coefficient, exponents per coordinate).
    pub terms: Vec<(Complex64, [u8; 6])>,
}

impl Poly6 {
    pub fn eval(&self, z: &QuaternionicPoint) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                let mut t = *c;
                for (j, &p) in e.iter().enumerate() {
                    t *= z.coords[j].powi(p as i32);
                }
                t
            })
            .sum()
    }

    pub fn gradient(&self, z: &QuaternionicPoint) -> [Complex64; 6] {
        std::array::from_fn(|k| {
            self.terms
                .iter()
                .filter(|(_, e)| e[k] > 0)
                .map(|(c, e)| {
                    let mut t = *c * e[k] as f64;
                    for (j, &p) in e.iter().enumerate() {
                        let q = if j == k { p - 1 } else { p };
                        t *= z.coords[j].powi(q as i32);
                    }
                    t
                })
                .sum()
        })
    }

    pub fn random<R: Rng>(rng: &mut R, terms: usize, max_deg: u8) -> Self {
        let terms = (0..terms)
            .map(|_| {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let e = std::array::from_fn(|_| rng.gen_range(0..=max_deg));
                (c, e)
            })
            .collect();
        Self { terms }
    }
}

/// A weighted polynomial form on the quaternionic half-plane.
pub struct QuaternionicForm {
    pub label: String,
    pub weight: u32,
    pub poly: Poly6,
}

impl QuaternionicForm {
    pub fn new(label: impl Into<String>, weight: u32, poly: Poly6) -> Self {
        Self {
            label: label.into(),
            weight,
            poly,
        }
    }
}

/// The six-coordinate bracket {f, g} = wt(g)·g·∇f − wt(f)·f·∇g.
pub fn bracket6(
    f: &QuaternionicForm,
    g: &QuaternionicForm,
    z: &QuaternionicPoint,
) -> [Complex64; 6] {
    let fv = f.poly.eval(z);
    let gv = g.poly.eval(z);
    let fg = f.poly.gradient(z);
    let gg = g.poly.gradient(z);
    std::array::from_fn(|k| {
        Complex64::new(g.weight as f64, 0.0) * gv * fg[k]
            - Complex64::new(f.weight as f64, 0.0) * fv * gg[k]
    })
}

/// Normalized residual of the reduction identity
/// f₁⁵ · det₇[[f₁ … f₆, 3g], [∇f₁ … ∇f₆, ∇g]] = det₆({f₁,fⱼ}, {f₁,g}).
pub fn reduction_residual(
    fs: &[QuaternionicForm; 6],
    g: &QuaternionicForm,
    z: &QuaternionicPoint,
) -> Result<f64, BracketError> {
    if fs.iter().any(|f| f.weight != 1) || g.weight != 3 {
        return Err(BracketError::BadWeights {
            got: format!(
                "[{}], {}",
                fs.iter()
                    .map(|f| f.weight.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                g.weight
            ),
        });
    }
    // 7×7 bordered determinant: column j = (wtⱼ·valⱼ, ∇valⱼ).
    let mut m7 = nalgebra::SMatrix::<Complex64, 7, 7>::zeros();
    let push_col = |col: usize, w: u32, v: Complex64, grad: &[Complex64; 6],
                        m7: &mut nalgebra::SMatrix<Complex64, 7, 7>| {
        m7[(0, col)] = Complex64::new(w as f64, 0.0) * v;
        for r in 0..6 {
            m7[(r + 1, col)] = grad[r];
        }
    };
    for (j, f) in fs.iter().enumerate() {
        push_col(j, f.weight, f.poly.eval(z), &f.poly.gradient(z), &mut m7);
    }
    push_col(6, g.weight, g.poly.eval(z), &g.poly.gradient(z), &mut m7);
    let f1 = fs[0].poly.eval(z);
    let lhs = f1.powi(5) * m7.determinant();

    let mut m6 = Matrix6::zeros();
    for j in 0..6 {
        let b = if j < 5 {
            bracket6(&fs[0], &fs[j + 1], z)
        } else {
            bracket6(&fs[0], g, z)
        };
        for r in 0..6 {
            m6[(r, j)] = b[r];
        }
    }
    let rhs = m6.determinant();
    Ok((lhs - rhs).norm() / rhs.norm().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfplane::{sample_hermitian, sample_quaternionic, SampleConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn bracket_is_antisymmetric_and_vanishes_on_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let z = sample_hermitian(&mut rng, &SampleConfig::default());
        let f = HermitianForm::theta(ThetaCharacteristic::Eisenstein(1), policy());
        let g = HermitianForm::theta(ThetaCharacteristic::Eisenstein(2), policy());
        let fg = bracket(&f, &g, &z).unwrap();
        let gf = bracket(&g, &f, &z).unwrap();
        assert!((fg.comp + gf.comp).norm() < 1e-12);
        let ff = bracket(&f, &f, &z).unwrap();
        assert!(ff.comp.norm() < 1e-12);
        // {f, f²} = 2f²·df·f − f·2f·df = 0.
        let fsq = HermitianForm::theta_square(ThetaCharacteristic::Eisenstein(1), policy());
        let mixed = bracket(&f, &fsq, &z).unwrap();
        assert!(
            mixed.comp.norm() < 1e-10,
            "bracket with own square should vanish, got {}",
            mixed.comp.norm()
        );
    }

    #[test]
    fn three_term_relation_holds_for_thetas() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let z = sample_hermitian(&mut rng, &SampleConfig::default());
        let f = HermitianForm::theta(ThetaCharacteristic::Eisenstein(0), policy());
        let g = HermitianForm::theta(ThetaCharacteristic::Eisenstein(3), policy());
        let h = HermitianForm::theta_square(
            ThetaCharacteristic::gauss([0, 0], [1, 1]).unwrap(),
            policy(),
        );
        // The relation is pure algebra, so it holds across families/weights.
        let r = three_term_residual(&f, &g, &h, &z).unwrap();
        assert!(r < 1e-10, "three-term residual {r}");
    }

    #[test]
    fn eisenstein_det_is_skew_under_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let z = sample_hermitian(&mut rng, &SampleConfig::default());
        let d = eisenstein_bracket_det(&z, &policy()).unwrap();
        let dt = eisenstein_bracket_det(&z.transpose(), &policy()).unwrap();
        assert!(
            (d + dt).norm() / d.norm().max(1e-30) < 1e-8,
            "D(Z′) = −D(Z) violated: {d} vs {dt}"
        );
    }

    #[test]
    fn poly_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let z = sample_quaternionic(&mut rng, &SampleConfig::default());
        let p = Poly6::random(&mut rng, 5, 2);
        let g = p.gradient(&z);
        let h = 1e-6;
        for (k, gk) in g.iter().enumerate() {
            let mut zp = z;
            zp.coords[k] += Complex64::new(h, 0.0);
            let mut zm = z;
            zm.coords[k] -= Complex64::new(h, 0.0);
            let fd = (p.eval(&zp) - p.eval(&zm)) / (2.0 * h);
            assert!((fd - gk).norm() < 1e-5, "coord {k}: {fd} vs {gk}");
        }
    }

    #[test]
    fn reduction_identity_holds_for_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..5 {
            let z = sample_quaternionic(&mut rng, &SampleConfig::default());
            let fs: [QuaternionicForm; 6] = std::array::from_fn(|j| {
                QuaternionicForm::new(format!("f{}", j + 1), 1, Poly6::random(&mut rng, 4, 2))
            });
            let g = QuaternionicForm::new("g", 3, Poly6::random(&mut rng, 4, 2));
            let r = reduction_residual(&fs, &g, &z).unwrap();
            assert!(r < 1e-8, "reduction residual {r}");
        }
    }

    #[test]
    fn reduction_identity_rejects_wrong_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let z = sample_quaternionic(&mut rng, &SampleConfig::default());
        let fs: [QuaternionicForm; 6] = std::array::from_fn(|j| {
            QuaternionicForm::new(format!("f{}", j + 1), 1, Poly6::random(&mut rng, 3, 2))
        });
        let g = QuaternionicForm::new("g", 2, Poly6::random(&mut rng, 3, 2));
        assert!(matches!(
            reduction_residual(&fs, &g, &z),
            Err(BracketError::BadWeights { .. })
        ));
    }
}
