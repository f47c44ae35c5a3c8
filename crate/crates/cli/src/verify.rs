//! Built-in invariant sweep behind `nhosc verify`.

use std::f64::consts::PI;

use nhosc_core::hamiltonian::{
    build_hamiltonian, omega_u_zero, omega_v_zero, omega_variational, u_zero_roots, v_zero_roots,
    verify_canonical_commutator,
};
use nhosc_core::lie_closed_form::{case_coefficients, lie_energy};
use nhosc_core::perturbation::{
    build_series_lowering, build_series_raising, raising_closed_form, raising_recursion, rs_corrections,
};
use nhosc_core::position_space::{eval_series_position, gauss_hermite, overlap, HermiteBasisFunction};
use nhosc_core::spectral::{
    commutator_defect, eigen_residual, energy_functional, expectation_consistency, triangular_spectrum,
};
use nhosc_core::{LadderPolynomial, ModeDecomposition, TransformParams, ZeroBranch};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::{Report, Table};

pub const DEFAULT_SEED: u64 = 20_160_822;
pub const DEFAULT_POINTS: usize = 20;

pub const U_MINUS_V: &str = "U−V=4(λ+β)";

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub orders: usize,
    pub points: usize,
    pub seed: u64,
    /// Negative control: flips the sign of the 2(λ+β) term in V.
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    AtMost,
    Above,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub observed: f64,
    relation: Relation,
    pub tolerance: f64,
}

impl Check {
    fn at_most(name: &'static str, observed: f64, tolerance: f64) -> Self {
        Self {
            name,
            observed,
            relation: Relation::AtMost,
            tolerance,
        }
    }

    fn above(name: &'static str, observed: f64, tolerance: f64) -> Self {
        Self {
            name,
            observed,
            relation: Relation::Above,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.observed <= self.tolerance,
            Relation::Above => self.observed > self.tolerance,
        }
    }

    pub fn expected(&self) -> String {
        match self.relation {
            Relation::AtMost => format!("<= {:e}", self.tolerance),
            Relation::Above => format!("> {:e}", self.tolerance),
        }
    }
}

/// Running maximum; an `Err` counts as an infinite defect.
#[derive(Default)]
struct Worst(f64);

impl Worst {
    fn take(&mut self, v: nhosc_core::Result<f64>) {
        let v = v.unwrap_or(f64::INFINITY);
        if v.is_nan() || v > self.0 {
            self.0 = if v.is_nan() { f64::INFINITY } else { v };
        }
    }
}

struct Sampler {
    params: Vec<TransformParams>,
    inject_fault: bool,
}

impl Sampler {
    fn decomposition(&self, p: &TransformParams, omega: f64) -> nhosc_core::Result<ModeDecomposition> {
        let mut d = build_hamiltonian(p, omega)?;
        if self.inject_fault {
            d.v += 4.0 * (p.lambda() + p.beta());
        }
        Ok(d)
    }

    fn branch_pairs(&self) -> impl Iterator<Item = (&TransformParams, ZeroBranch)> + '_ {
        self.params
            .iter()
            .flat_map(|p| [(p, ZeroBranch::UZero), (p, ZeroBranch::VZero)])
    }
}

fn commutator(p: &TransformParams, omega: f64) -> nhosc_core::Result<f64> {
    let c = verify_canonical_commutator(p, omega)?;
    Ok(c.sub(&LadderPolynomial::scalar(Complex64::new(0.0, 1.0))).max_abs_coefficient())
}

fn spectrum_defect(s: &Sampler, p: &TransformParams, b: ZeroBranch, dim: usize) -> nhosc_core::Result<f64> {
    let m = s.decomposition(p, b.omega(p))?.polynomial().to_matrix(dim);
    Ok(triangular_spectrum(&m)?
        .iter()
        .enumerate()
        .map(|(k, e)| (e - (k as f64 + 0.5)).abs() / (k as f64 + 0.5))
        .fold(0.0, f64::max))
}

fn run_checks(s: &Sampler, orders: usize) -> Vec<Check> {
    let mut out = Vec::new();

    let mut w = Worst::default();
    for p in &s.params {
        for omega in [omega_u_zero(p), omega_v_zero(p), omega_variational(p)] {
            w.take(commutator(p, omega));
        }
    }
    out.push(Check::at_most("[x′,p′]=i", w.0, 1e-14));

    let mut w = Worst::default();
    for p in &s.params {
        w.take(Ok((u_zero_roots(p).positive - omega_u_zero(p)).abs()));
        w.take(Ok((v_zero_roots(p).positive - omega_v_zero(p)).abs()));
    }
    out.push(Check::at_most("ω₁,ω₂ closed forms = quadratic roots", w.0, 1e-12));

    let mut w = Worst::default();
    for p in &s.params {
        for omega in [omega_u_zero(p), omega_v_zero(p), omega_variational(p)] {
            w.take(s.decomposition(p, omega).map(|d| (d.u - d.v - 4.0 * (p.lambda() + p.beta())).abs()));
        }
    }
    out.push(Check::at_most(U_MINUS_V, w.0, 1e-12));

    let mut w = Worst::default();
    for (p, b) in s.branch_pairs() {
        w.take(s.decomposition(p, b.omega(p)).map(|d| (d.h_d - 0.5).abs()));
    }
    out.push(Check::at_most("h_d=½ on zero branches", w.0, 1e-13));

    let mut w = Worst::default();
    for (p, b) in s.branch_pairs() {
        w.take(spectrum_defect(s, p, b, 64));
    }
    out.push(Check::at_most("triangular spectrum = n+½ (N=64, relative)", w.0, 1e-14));

    let mut w = Worst::default();
    for (p, b) in s.branch_pairs() {
        for n in 0..=10 {
            w.take(
                s.decomposition(p, b.omega(p))
                    .and_then(|d| rs_corrections(&d, n, orders))
                    .map(|r| r.max_abs_correction()),
            );
        }
    }
    out.push(Check::at_most("ε^(m)=0 through the requested order", w.0, 1e-12));

    let mut w = Worst::default();
    for p in &s.params {
        let (l, b) = (p.lambda(), p.beta());
        let g = ((1.0 - l * l) * (1.0 - b * b)).sqrt();
        let want = (l + b).powi(2) / (4.0 * g * p.norm_factor());
        w.take(
            s.decomposition(p, omega_variational(p))
                .and_then(|d| rs_corrections(&d, 0, 2))
                .map(|r| (r.corrections[1] - want).abs()),
        );
    }
    out.push(Check::at_most("variational ε₀^(2) closed form", w.0, 1e-9));

    let mut w = Worst::default();
    for p in &s.params {
        let f = p.coupling();
        for n in 0..=8 {
            for (k, c) in raising_recursion(f, n, 10).iter().enumerate() {
                let closed = raising_closed_form(f, n, k);
                let rel = if closed == 0.0 { c.abs() } else { (c / closed - 1.0).abs() };
                w.take(Ok(rel));
            }
        }
    }
    out.push(Check::at_most("raising recursion = closed form (relative)", w.0, 1e-12));

    let mut w = Worst::default();
    for p in &s.params {
        for n in 0..=12 {
            let r = s
                .decomposition(p, omega_v_zero(p))
                .and_then(|d| eigen_residual(&d.polynomial().to_matrix(n + 4), &build_series_lowering(p, n), n as f64 + 0.5));
            w.take(r.map(|r| r.interior.max(r.boundary)));
        }
    }
    out.push(Check::at_most("lowering series exact eigenvector", w.0, 1e-10));

    let mut w = Worst::default();
    for (p, b) in s.branch_pairs() {
        for n in 0..=8 {
            let dim = n + 2 * orders + 3;
            let series = match b {
                ZeroBranch::UZero => build_series_raising(p, n, orders),
                ZeroBranch::VZero => build_series_lowering(p, n),
            };
            let e = s
                .decomposition(p, b.omega(p))
                .and_then(|d| energy_functional(&d.polynomial().to_matrix(dim), &series, n));
            w.take(e.map(|e| (e - (n as f64 + 0.5)).abs()));
        }
    }
    out.push(Check::at_most("⟨ψ_n|H|Ψ_n⟩ = n+½", w.0, 1e-10));

    let mut w = Worst::default();
    for (p, b) in s.branch_pairs() {
        let c = case_coefficients(p, b);
        for n in 0..=10 {
            let lie = lie_energy(&c, n);
            let pert = s
                .decomposition(p, b.omega(p))
                .and_then(|d| rs_corrections(&d, n, orders))
                .map(|r| r.total());
            w.take(lie.and_then(|l| pert.map(|q| (l - q).abs().max((l - (n as f64 + 0.5)).abs()))));
        }
    }
    out.push(Check::at_most("Lie energy = perturbative energy = n+½", w.0, 1e-12));

    let mut w = Worst::default();
    for p in &s.params {
        for n in 0..=6 {
            w.take(expectation_consistency(p, n, orders).map(|e| e.max_deviation(n as f64 + 0.5)));
        }
    }
    out.push(Check::at_most("four-way expectation identity", w.0, 1e-10));

    let mut w = Worst::default();
    match gauss_hermite(64) {
        Ok(rule) => {
            for p in s.params.iter().take(3) {
                for omega in [omega_u_zero(p), omega_v_zero(p)] {
                    for m in 0..=20 {
                        for n in 0..=20 {
                            let delta = if m == n { 1.0 } else { 0.0 };
                            let o = HermiteBasisFunction::new(m, omega).and_then(|bm| {
                                HermiteBasisFunction::new(n, omega).and_then(|bn| overlap(&bm, &bn, &rule))
                            });
                            w.take(o.map(|o| (o - delta).abs()));
                        }
                    }
                }
            }
        }
        Err(e) => w.take(Err(e)),
    }
    out.push(Check::at_most("Gauss-Hermite orthonormality (Q=64)", w.0, 1e-10));

    let mut off = f64::INFINITY;
    let mut on = Worst::default();
    for (p, b) in s.branch_pairs() {
        if (p.lambda() + p.beta()).abs() > 0.01 {
            off = off.min(commutator_defect(p, b.omega(p)).unwrap_or(0.0));
        }
        let diag = TransformParams::new(p.lambda(), -p.lambda()).expect("sampled inside the domain");
        on.take(commutator_defect(&diag, b.omega(&diag)));
    }
    out.push(Check::above("[H,H_D]≠0 off λ=−β", off, 1e-6));
    out.push(Check::at_most("[H,H_D]=0 on λ=−β", on.0, 1e-14));

    let mut w = Worst::default();
    for p in &s.params {
        let edge = 10.0 / omega_v_zero(p).sqrt();
        for n in 0..=12 {
            let series = build_series_lowering(p, n);
            w.take(Ok(eval_series_position(&series, edge).abs().max(eval_series_position(&series, -edge).abs())));
        }
    }
    out.push(Check::at_most("Φ_n decays at √ω₂|x|=10", w.0, 1e-10));

    let mut w = Worst::default();
    for p in &s.params {
        let w2 = omega_v_zero(p);
        let phi0 = build_series_lowering(p, 0);
        for i in 0..=40 {
            let x = (-8.0 + 0.4 * i as f64) / w2.sqrt();
            let closed = (w2 / PI).powf(0.25) * (-0.5 * w2 * x * x).exp();
            w.take(Ok((eval_series_position(&phi0, x) - closed).abs()));
        }
    }
    out.push(Check::at_most("Φ_0 = Gaussian ground state", w.0, 1e-12));

    out
}

pub struct VerifyOutcome {
    pub report: Report,
    pub failures: Vec<Check>,
}

pub fn verify(opts: VerifyOptions) -> nhosc_core::Result<VerifyOutcome> {
    if opts.orders == 0 {
        return Err(nhosc_core::Error::ZeroOrder);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut params = vec![TransformParams::new(0.5, 0.2)?, TransformParams::new(0.3, -0.3)?];
    for _ in 0..opts.points {
        params.push(TransformParams::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9))?);
    }
    let sampler = Sampler {
        params,
        inject_fault: opts.inject_fault,
    };
    let checks = run_checks(&sampler, opts.orders);

    let mut table = Table::new("checks", vec!["check", "observed", "expected", "status"]);
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        table.push(vec![c.name.into(), c.observed.into(), c.expected().into(), status.into()]);
    }
    let failures: Vec<Check> = checks.iter().filter(|c| !c.passed()).cloned().collect();

    let mut report = Report::new("verify");
    report.field("orders", opts.orders);
    report.field("points", sampler.params.len());
    report.field("seed", opts.seed.to_string());
    report.field("passed", checks.len() - failures.len());
    report.field("failed", failures.len());
    report.tables.push(table);
    Ok(VerifyOutcome { report, failures })
}
