use nhosc_core::hamiltonian::{
    build_hamiltonian, hamiltonian_polynomial, hermiticity_defect, omega_u_zero, omega_v_zero, omega_variational,
    u_zero_roots, v_zero_roots, verify_canonical_commutator,
};
use nhosc_core::perturbation::{
    build_series_lowering, build_series_raising, lowering_recursion, raising_recursion, rs_corrections,
};
use nhosc_core::position_space::{linspace, HermiteBasisFunction, PositionFunction};
use nhosc_core::spectral::{classify_structure, eigen_residual, expectation_consistency, triangular_spectrum};
use nhosc_core::{LadderPolynomial, SeriesBranch, TransformParams, ZeroBranch};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{Branch, RunConfig};
use crate::error::{invalid, CliResult};
use crate::output::{Cell, Report, Table};

/// Tolerance on the canonical commutator reported by `analyze`.
const COMMUTATOR_TOL: f64 = 1e-12;

fn zero_branch(cfg: &RunConfig, what: &str) -> CliResult<ZeroBranch> {
    match cfg.branch {
        Branch::U0 => Ok(ZeroBranch::UZero),
        Branch::V0 => Ok(ZeroBranch::VZero),
        other => Err(invalid(format!(
            "{what} requires triangular branch (u0 or v0); got {}",
            other.as_str()
        ))),
    }
}

pub fn analyze(cfg: &RunConfig) -> CliResult<Report> {
    let p = &cfg.params;
    let d = build_hamiltonian(p, cfg.omega)?;
    let ru = u_zero_roots(p);
    let rv = v_zero_roots(p);
    let ccr = verify_canonical_commutator(p, cfg.omega)?
        .sub(&LadderPolynomial::scalar(Complex64::new(0.0, 1.0)))
        .max_abs_coefficient();
    let structure = classify_structure(&hamiltonian_polynomial(p, cfg.omega)?.to_matrix(cfg.dim));

    let mut r = Report::new("analyze");
    r.field("lambda", p.lambda());
    r.field("beta", p.beta());
    r.field("branch", cfg.branch.as_str());
    r.field("omega", cfg.omega);
    r.field("omega1", omega_u_zero(p));
    r.field("omega2", omega_v_zero(p));
    r.field("omega_variational", omega_variational(p));
    r.field("u_zero_root_positive", ru.positive);
    r.field("u_zero_root_negative", ru.negative);
    r.field("v_zero_root_positive", rv.positive);
    r.field("v_zero_root_negative", rv.negative);
    r.field("h_d", d.h_d);
    r.field("U", d.u);
    r.field("V", d.v);
    r.field("f", d.f);
    r.field("hermiticity_defect", hermiticity_defect(p, cfg.omega)?.max_abs_coefficient());
    r.field("canonical_commutator_defect", ccr);
    r.field("canonical_commutator_ok", ccr <= COMMUTATOR_TOL);
    r.field("structure", structure.as_str());
    Ok(r)
}

pub fn spectrum(cfg: &RunConfig) -> CliResult<Report> {
    zero_branch(cfg, "spectrum extraction")?;
    let m = hamiltonian_polynomial(&cfg.params, cfg.omega)?.to_matrix(cfg.dim);
    let tag = classify_structure(&m);
    let values = triangular_spectrum(&m)?;

    let mut table = Table::new("levels", vec!["n", "eigenvalue", "deviation", "structure"]);
    let mut worst: f64 = 0.0;
    for (n, e) in values.iter().enumerate() {
        let dev = e - (n as f64 + 0.5);
        worst = worst.max(dev.abs());
        table.push(vec![n.into(), (*e).into(), dev.into(), tag.as_str().into()]);
    }

    let mut r = Report::new("spectrum");
    r.field("lambda", cfg.params.lambda());
    r.field("beta", cfg.params.beta());
    r.field("branch", cfg.branch.as_str());
    r.field("omega", cfg.omega);
    r.field("dim", cfg.dim);
    r.field("structure", tag.as_str());
    r.field("max_abs_deviation", worst);
    r.tables.push(table);
    Ok(r)
}

/// `f^k √(hi!/lo!)` accumulated in logs, keeping the sign of `f^k`.
fn printed_scale(f: f64, k: usize, lo: usize, hi: usize) -> f64 {
    let half_ln: f64 = 0.5 * ((lo + 1)..=hi).map(|j| (j as f64).ln()).sum::<f64>();
    let sign = if f < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * (k as f64 * f.abs().ln() + half_ln).exp()
}

pub fn wavefunction(cfg: &RunConfig) -> CliResult<Report> {
    let p = &cfg.params;
    let f = p.coupling();
    let (series, recursion) = match zero_branch(cfg, "wavefunction series")? {
        ZeroBranch::UZero => (build_series_raising(p, cfg.n, cfg.order), raising_recursion(f, cfg.n, cfg.order)),
        ZeroBranch::VZero => (build_series_lowering(p, cfg.n), lowering_recursion(f, cfg.n)),
    };
    let m = hamiltonian_polynomial(p, cfg.omega)?.to_matrix(cfg.dim);
    let residual = eigen_residual(&m, &series, cfg.n as f64 + 0.5)?;

    // denominator = f^k √(...)/c_k: 1, 2, 8, 48, ... i.e. 2^k k!
    let mut coeffs = Table::new(
        "coefficients",
        vec!["k", "level", "closed_form", "recursion", "denominator"],
    );
    for (k, (&c, &rec)) in series.coeffs.iter().zip(&recursion).enumerate() {
        let level = series.level(k);
        let scale = match series.branch {
            SeriesBranch::Raising => printed_scale(f, k, cfg.n, level),
            SeriesBranch::Lowering => printed_scale(f, k, level, cfg.n),
        };
        let denominator = if rec != 0.0 { scale / rec } else { f64::NAN };
        coeffs.push(vec![k.into(), level.into(), c.into(), rec.into(), denominator.into()]);
    }

    let basis = HermiteBasisFunction::new(cfg.n, cfg.omega)?;
    let mut grid = Table::new("grid", vec!["x", "series", "basis"]);
    for x in linspace(cfg.grid.min, cfg.grid.max, cfg.grid.points)? {
        grid.push(vec![x.into(), series.eval(x).into(), basis.eval(x).into()]);
    }

    let mut r = Report::new("wavefunction");
    r.field("lambda", p.lambda());
    r.field("beta", p.beta());
    r.field("branch", cfg.branch.as_str());
    r.field("series", series.branch.as_str());
    r.field("n", cfg.n);
    r.field("omega", cfg.omega);
    r.field("f", f);
    r.field("order", series.order());
    r.field("dim", cfg.dim);
    r.field("residual_interior", residual.interior);
    r.field("residual_boundary", residual.boundary);
    r.tables.push(coeffs);
    r.tables.push(grid);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepAxis {
    /// `(min (s−1−i) + max i)/(s−1)`: symmetric ranges give exactly negated pairs.
    pub fn values(&self) -> CliResult<Vec<f64>> {
        if self.steps == 0 || !self.min.is_finite() || !self.max.is_finite() || self.min > self.max {
            return Err(invalid(format!(
                "bad sweep axis [{}, {}] with {} steps",
                self.min, self.max, self.steps
            )));
        }
        if self.steps == 1 {
            return Ok(vec![self.min]);
        }
        let last = (self.steps - 1) as f64;
        let mut v: Vec<f64> = (0..self.steps)
            .map(|i| (self.min * (last - i as f64) + self.max * i as f64) / last)
            .collect();
        v[0] = self.min;
        v[self.steps - 1] = self.max;
        Ok(v)
    }
}

struct SweepRow {
    lambda: f64,
    beta: f64,
    omega1: f64,
    omega2: f64,
    f: f64,
    max_corr_u0: f64,
    max_corr_v0: f64,
    expectation_dev: f64,
}

fn sweep_point(p: TransformParams, n: usize, order: usize) -> CliResult<SweepRow> {
    let w1 = omega_u_zero(&p);
    let w2 = omega_v_zero(&p);
    let c1 = rs_corrections(&build_hamiltonian(&p, w1)?, n, order)?;
    let c2 = rs_corrections(&build_hamiltonian(&p, w2)?, n, order)?;
    let e = expectation_consistency(&p, n, order)?;
    Ok(SweepRow {
        lambda: p.lambda(),
        beta: p.beta(),
        omega1: w1,
        omega2: w2,
        f: p.coupling(),
        max_corr_u0: c1.max_abs_correction(),
        max_corr_v0: c2.max_abs_correction(),
        expectation_dev: e.max_deviation(n as f64 + 0.5),
    })
}

pub fn sweep(lambda: SweepAxis, beta: SweepAxis, n: usize, order: usize) -> CliResult<Report> {
    if order == 0 {
        return Err(nhosc_core::Error::ZeroOrder.into());
    }
    let mut points = Vec::new();
    for &l in &lambda.values()? {
        for &b in &beta.values()? {
            points.push(TransformParams::new(l, b)?);
        }
    }
    // Indexed parallel collect keeps the λ-major order.
    let rows: Vec<SweepRow> = points
        .into_par_iter()
        .map(|p| sweep_point(p, n, order))
        .collect::<CliResult<_>>()?;

    let mut table = Table::new(
        "points",
        vec![
            "lambda",
            "beta",
            "omega1",
            "omega2",
            "f",
            "max_corr_u0",
            "max_corr_v0",
            "expectation_max_dev",
        ],
    );
    for row in &rows {
        table.push(
            [
                row.lambda,
                row.beta,
                row.omega1,
                row.omega2,
                row.f,
                row.max_corr_u0,
                row.max_corr_v0,
                row.expectation_dev,
            ]
            .into_iter()
            .map(Cell::from)
            .collect(),
        );
    }
    let mut r = Report::new("sweep");
    r.field("n", n);
    r.field("order", order);
    r.tables.push(table);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_axis_is_exactly_antisymmetric() {
        for steps in [2, 5, 7, 11, 33] {
            let v = SweepAxis { min: -0.8, max: 0.8, steps }.values().unwrap();
            assert_eq!(v[0], -0.8);
            assert_eq!(v[steps - 1], 0.8);
            for i in 0..steps {
                assert_eq!(v[i], -v[steps - 1 - i]);
            }
        }
    }

    #[test]
    fn printed_denominators() {
        let f = 7.0 / 11.0;
        let s = raising_recursion(f, 0, 3);
        let d: Vec<f64> = (0..=3).map(|k| printed_scale(f, k, 0, 2 * k) / s[k]).collect();
        for (got, want) in d.iter().zip([1.0, 2.0, 8.0, 48.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }
}
