//! Acceptance gate: every advertised identity, transformation law, and
//! certification claim, run end to end at its pinned tolerance.
//!
//! Each test executes the named harness checks with the default (or
//! environment-provided) seed and prints one line per check, so a run of this
//! target doubles as a readable verification transcript.

use theta_bracket::harness::{effective_seed, run_check, SuiteConfig};

fn run(ids: &[&str]) {
    let cfg = SuiteConfig {
        seed: effective_seed(None),
        ..SuiteConfig::default()
    };
    let mut failures = Vec::new();
    for id in ids {
        let rec = run_check(id, &cfg).expect("check id is registered");
        println!(
            "[{}] {:<34} max residual {:>12.3e}  tol {:>9.1e}  samples {:>4}",
            if rec.passed { "PASS" } else { "FAIL" },
            rec.id,
            rec.max_residual,
            rec.tolerance,
            rec.samples
        );
        if let Some(n) = &rec.note {
            println!("       {n}");
        }
        if !rec.passed {
            failures.push(format!(
                "{}: max residual {:.3e} exceeds tolerance {:.1e}{}",
                rec.id,
                rec.max_residual,
                rec.tolerance,
                rec.note.map(|n| format!(" — {n}")).unwrap_or_default()
            ));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn criterion_01_exact_quaternion_arithmetic() {
    run(&["quaternion-ring-exactness"]);
}

#[test]
fn criterion_02_cocycle_determinant_conjugate() {
    run(&["cocycle-det-conjugate"]);
}

#[test]
fn criterion_03_hermitian_jacobian() {
    run(&["hermitian-jacobian-fd", "hermitian-jacobian-det"]);
}

#[test]
fn criterion_04_eisenstein_theta_automorphy_and_symmetry() {
    run(&["eisenstein-theta-automorphy", "eisenstein-theta-symmetry"]);
}

#[test]
fn criterion_05_eisenstein_three_term_relations() {
    run(&["eisenstein-three-term"]);
}

#[test]
fn criterion_06_eisenstein_bracket_determinant_factors() {
    run(&["eisenstein-det-skew", "eisenstein-det-quotient-skew"]);
}

#[test]
fn criterion_07_gauss_square_automorphy_and_relations() {
    run(&["gauss-square-automorphy", "gauss-three-term"]);
}

#[test]
fn criterion_08_gauss_bracket_determinant_factors() {
    run(&["gauss-det-quotient-skew", "gauss-phi10-symmetry"]);
}

#[test]
fn criterion_09_gauss_vanishing_locus() {
    run(&["gauss-vanishing-locus"]);
}

#[test]
fn criterion_10_jacobian_representation() {
    run(&[
        "rho-jac-multiplicative",
        "rho-jac-real-form",
        "rho-jac-slice-invariance",
        "rho-jac-highest-weight-diagonal",
        "rho-jac-highest-weight-unipotent",
        "rho-jac-slice-dimension",
    ]);
}

#[test]
fn criterion_11_quaternionic_jacobian() {
    run(&["quaternionic-jacobian-fd", "quaternionic-jacobian-det"]);
}

#[test]
fn criterion_12_s3_symmetry_relations() {
    run(&["s3-quotient-relations"]);
}

#[test]
fn criterion_13_reduction_identity_and_general_three_term() {
    run(&["reduction-identity", "three-term-general"]);
}

#[test]
fn criterion_14_bracket_automorphy() {
    run(&["bracket-automorphy"]);
}

#[test]
fn criterion_15_truncation_certificates() {
    run(&["truncation-certificates"]);
}
