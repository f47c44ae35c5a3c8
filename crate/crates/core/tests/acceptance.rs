//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use nhosc_core::hamiltonian::{
    build_hamiltonian, hamiltonian_polynomial, omega_u_zero, omega_v_zero, omega_variational, u_zero_roots,
    v_zero_roots, verify_canonical_commutator,
};
use nhosc_core::lie_closed_form::{case_coefficients, lie_energy};
use nhosc_core::perturbation::{build_series_lowering, build_series_raising, raising_recursion, rs_corrections};
use nhosc_core::position_space::{eval_series_position, gauss_hermite, linspace, overlap, HermiteBasisFunction};
use nhosc_core::spectral::{
    commutator_defect, eigen_residual, energy_functional, expectation_consistency, overlap_with_base,
    triangular_spectrum,
};
use nhosc_core::{LadderPolynomial, TransformParams, ZeroBranch};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sample_params(rng: &mut ChaCha8Rng, count: usize) -> Vec<TransformParams> {
    (0..count)
        .map(|_| TransformParams::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9)).unwrap())
        .collect()
}

fn spot() -> TransformParams {
    TransformParams::new(0.5, 0.2).unwrap()
}

// Independent factorial for the printed-denominator check.
fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn canonical_commutator(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for p in sample_params(rng, 100) {
        for _ in 0..3 {
            let omega = rng.gen_range(0.05..10.0);
            let c = verify_canonical_commutator(&p, omega).unwrap();
            let diff = c.sub(&LadderPolynomial::scalar(Complex64::new(0.0, 1.0)));
            worst = worst.max(diff.max_abs_coefficient());
        }
    }
    outcome(worst <= 1e-14, format!("max |[x',p'] - i| = {worst:.3e} (tol 1e-14)"))
}

fn frequency_formulas(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for p in sample_params(rng, 100) {
        let (w1, w2) = (omega_u_zero(&p), omega_v_zero(&p));
        worst = worst
            .max((u_zero_roots(&p).positive - w1).abs())
            .max((v_zero_roots(&p).positive - w2).abs());
    }
    let p = spot();
    let (w1, w2) = (omega_u_zero(&p), omega_v_zero(&p));
    let spot_ok = (w1 - 2.4).abs() <= 1e-12 && (w2 - 0.5333333).abs() <= 5e-8;
    outcome(
        worst <= 1e-12 && spot_ok,
        format!("max |closed - root| = {worst:.3e} (tol 1e-12); spot w1={w1}, w2={w2}"),
    )
}

fn iso_spectrality(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for p in sample_params(rng, 20) {
        for branch in [ZeroBranch::UZero, ZeroBranch::VZero] {
            let m = hamiltonian_polynomial(&p, branch.omega(&p)).unwrap().to_matrix(64);
            match triangular_spectrum(&m) {
                Ok(s) => {
                    for (k, e) in s.iter().enumerate() {
                        let target = k as f64 + 0.5;
                        worst = worst.max((e - target).abs() / target);
                    }
                }
                Err(e) => return outcome(false, format!("{e}")),
            }
        }
    }
    outcome(worst <= 1e-14, format!("max relative deviation from n+1/2 = {worst:.3e} (tol 1e-14), N=64"))
}

fn vanishing_corrections(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for p in sample_params(rng, 50) {
        for branch in [ZeroBranch::UZero, ZeroBranch::VZero] {
            let d = build_hamiltonian(&p, branch.omega(&p)).unwrap();
            for n in 0..=10 {
                worst = worst.max(rs_corrections(&d, n, 8).unwrap().max_abs_correction());
            }
        }
    }
    outcome(worst <= 1e-12, format!("max |eps^(m)| = {worst:.3e} (tol 1e-12), n<=10, m<=8"))
}

fn variational_second_order() -> Outcome {
    let p = spot();
    let (l, b) = (p.lambda(), p.beta());
    let d = build_hamiltonian(&p, omega_variational(&p)).unwrap();
    let got = rs_corrections(&d, 0, 2).unwrap().corrections[1];
    let g = ((1.0 - l * l) * (1.0 - b * b)).sqrt();
    let want = (l + b).powi(2) / (4.0 * g * (1.0 + l * b));
    let err = (got - want).abs();
    outcome(
        err <= 1e-9 && (want - 0.131243).abs() < 5e-7,
        format!("eps_0^(2) = {got:.12}, closed form {want:.12}, |diff| = {err:.3e} (tol 1e-9)"),
    )
}

fn raising_denominators(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut points = vec![spot()];
    points.extend(
        sample_params(rng, 40)
            .into_iter()
            .filter(|p| p.coupling().abs() > 0.05),
    );
    for p in points {
        let f = p.coupling();
        for n in 0..=8 {
            let c = raising_recursion(f, n, 10);
            for (k, ck) in c.iter().enumerate() {
                let scale = f.powi(k as i32) * (factorial(n + 2 * k) / factorial(n)).sqrt();
                let ratio = ck * 2f64.powi(k as i32) * factorial(k) / scale;
                worst = worst.max((ratio - 1.0).abs());
            }
        }
    }
    let f = spot().coupling();
    let first = build_series_raising(&spot(), 0, 3);
    let printed = [2.0, 8.0, 48.0];
    let mut printed_ok = true;
    for k in 1..=3 {
        let via_print = f.powi(k as i32) * factorial(2 * k).sqrt() / printed[k - 1];
        printed_ok &= (first.coeffs[k] - via_print).abs() <= 1e-12 * via_print.abs();
    }
    outcome(
        worst <= 1e-12 && printed_ok,
        format!("max |c_k 2^k k! / (f^k sqrt((n+2k)!/n!)) - 1| = {worst:.3e} (tol 1e-12); 2,8,48 pattern {printed_ok}"),
    )
}

fn lowering_exactness(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut points = vec![spot()];
    points.extend(sample_params(rng, 20));
    for p in points {
        let m_full = hamiltonian_polynomial(&p, omega_v_zero(&p)).unwrap();
        for n in 0..=12 {
            let m = m_full.to_matrix(n + 4);
            let r = eigen_residual(&m, &build_series_lowering(&p, n), n as f64 + 0.5).unwrap();
            worst = worst.max(r.interior).max(r.boundary);
        }
    }
    outcome(worst <= 1e-10, format!("max ||(H - (n+1/2))Phi_n||_inf = {worst:.3e} (tol 1e-10), dim n+4"))
}

fn normalization_and_energy(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut base_exact = true;
    let mut points = vec![spot()];
    points.extend(sample_params(rng, 20));
    for p in points {
        let order = 10;
        for n in 0..=8 {
            let dim = n + 2 * order + 3;
            let psi = build_series_raising(&p, n, order);
            let phi = build_series_lowering(&p, n);
            base_exact &= overlap_with_base(&psi) == 1.0 && overlap_with_base(&phi) == 1.0;
            let h1 = hamiltonian_polynomial(&p, omega_u_zero(&p)).unwrap().to_matrix(dim);
            let h2 = hamiltonian_polynomial(&p, omega_v_zero(&p)).unwrap().to_matrix(dim);
            let target = n as f64 + 0.5;
            worst = worst
                .max((energy_functional(&h1, &psi, n).unwrap() - target).abs())
                .max((energy_functional(&h2, &phi, n).unwrap() - target).abs());
        }
    }
    outcome(
        worst <= 1e-10 && base_exact,
        format!("<psi_n|Psi_n> == 1: {base_exact}; max |<psi_n|H|Psi_n> - (n+1/2)| = {worst:.3e} (tol 1e-10)"),
    )
}

fn lie_cross_check(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for p in sample_params(rng, 100) {
        for branch in [ZeroBranch::UZero, ZeroBranch::VZero] {
            let c = case_coefficients(&p, branch);
            let d = build_hamiltonian(&p, branch.omega(&p)).unwrap();
            for n in 0..=10 {
                let lie = lie_energy(&c, n).unwrap();
                let pert = rs_corrections(&d, n, 8).unwrap().total();
                worst = worst.max((lie - (n as f64 + 0.5)).abs()).max((lie - pert).abs());
            }
        }
    }
    outcome(worst <= 1e-12, format!("max |lie - (n+1/2)|, |lie - perturbative| = {worst:.3e} (tol 1e-12)"))
}

fn ground_state_comparison(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut points = vec![spot()];
    points.extend(sample_params(rng, 10));
    for p in points {
        let w2 = omega_v_zero(&p);
        let phi0 = build_series_lowering(&p, 0);
        let half = 8.0 / w2.sqrt();
        for x in linspace(-half, half, 401).unwrap() {
            let closed = (w2 / PI).powf(0.25) * (-0.5 * w2 * x * x).exp();
            worst = worst.max((eval_series_position(&phi0, x) - closed).abs());
        }
    }
    outcome(worst <= 1e-12, format!("max |Phi_0(x) - (w2/pi)^(1/4) exp(-w2 x^2/2)| = {worst:.3e} (tol 1e-12), 401 points"))
}

fn four_way_identity(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for p in sample_params(rng, 20) {
        for n in 0..=6 {
            let e = expectation_consistency(&p, n, 10).unwrap();
            worst = worst.max(e.max_deviation(n as f64 + 0.5));
        }
    }
    outcome(worst <= 1e-10, format!("max deviation of the four expectations from n+1/2 = {worst:.3e} (tol 1e-10)"))
}

fn quadrature_health(rng: &mut ChaCha8Rng) -> Outcome {
    let rule = gauss_hermite(64).unwrap();
    let mut worst: f64 = 0.0;
    let mut points = vec![spot()];
    points.extend(sample_params(rng, 3));
    for p in points {
        for omega in [omega_u_zero(&p), omega_v_zero(&p)] {
            for m in 0..=20 {
                for n in 0..=20 {
                    let bm = HermiteBasisFunction::new(m, omega).unwrap();
                    let bn = HermiteBasisFunction::new(n, omega).unwrap();
                    let delta = if m == n { 1.0 } else { 0.0 };
                    worst = worst.max((overlap(&bm, &bn, &rule).unwrap() - delta).abs());
                }
            }
        }
    }
    outcome(worst <= 1e-10, format!("max |<psi_m|psi_n> - delta_mn| = {worst:.3e} (tol 1e-10), Q=64"))
}

fn non_commutativity(rng: &mut ChaCha8Rng) -> Outcome {
    let mut min_off: f64 = f64::INFINITY;
    let mut max_on: f64 = 0.0;
    let mut off_line = sample_params(rng, 100);
    off_line.retain(|p| (p.lambda() + p.beta()).abs() > 0.01);
    off_line.push(TransformParams::new(0.3, -0.289).unwrap());
    for p in off_line {
        for branch in [ZeroBranch::UZero, ZeroBranch::VZero] {
            min_off = min_off.min(commutator_defect(&p, branch.omega(&p)).unwrap());
        }
    }
    for _ in 0..20 {
        let l: f64 = rng.gen_range(-0.9..0.9);
        let p = TransformParams::new(l, -l).unwrap();
        for branch in [ZeroBranch::UZero, ZeroBranch::VZero] {
            max_on = max_on.max(commutator_defect(&p, branch.omega(&p)).unwrap());
        }
    }
    outcome(
        min_off > 1e-6 && max_on <= 1e-14,
        format!("min defect off the line = {min_off:.3e} (> 1e-6); max on lambda=-beta = {max_on:.3e} (<= 1e-14)"),
    )
}

fn decay(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut points = vec![spot()];
    points.extend(sample_params(rng, 20));
    for p in points {
        let w2 = omega_v_zero(&p);
        let edge = 10.0 / w2.sqrt();
        for n in 0..=12 {
            let s = build_series_lowering(&p, n);
            worst = worst
                .max(eval_series_position(&s, edge).abs())
                .max(eval_series_position(&s, -edge).abs());
        }
    }
    outcome(worst <= 1e-10, format!("max |Phi_n(x)| at sqrt(w2)|x| = 10 = {worst:.3e} (tol 1e-10)"))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2016);
    let criteria: Vec<(&str, Outcome)> = vec![
        ("canonical commutator preserved", canonical_commutator(&mut rng)),
        ("frequency closed forms", frequency_formulas(&mut rng)),
        ("iso-spectrality at both branches", iso_spectrality(&mut rng)),
        ("vanishing perturbative corrections", vanishing_corrections(&mut rng)),
        ("nonvanishing variational second order", variational_second_order()),
        ("raising-series printed denominators", raising_denominators(&mut rng)),
        ("lowering-series exactness", lowering_exactness(&mut rng)),
        ("normalization and energy functional", normalization_and_energy(&mut rng)),
        ("Lie-algebra cross-check", lie_cross_check(&mut rng)),
        ("similarity ground-state comparison", ground_state_comparison(&mut rng)),
        ("four-way expectation identity", four_way_identity(&mut rng)),
        ("Gauss-Hermite orthonormality", quadrature_health(&mut rng)),
        ("[H, H_D] non-commutativity", non_commutativity(&mut rng)),
        ("decay at infinity", decay(&mut rng)),
    ];
    let mut failed = 0;
    for (idx, (name, o)) in criteria.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] AC{:02} {name}: {}", idx + 1, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
