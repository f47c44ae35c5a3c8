//! Position-space representation: oscillator eigenfunctions at arbitrary
//! frequency, Gauss–Hermite quadrature, overlaps and grid sampling.

use std::f64::consts::PI;

use log::warn;

use crate::error::{Error, Result};
use crate::perturbation::WavefunctionSeries;

/// Default number of grid samples.
pub const DEFAULT_GRID_POINTS: usize = 401;

const RESCALE_ABOVE: f64 = 1e150;

/// Physicists' Hermite polynomial `H_n(y)` by the three-term recurrence.
pub fn hermite_poly(n: usize, y: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * y * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `π^{−1/4} (2^k k!)^{−1/2} H_k(y)` for `k = 0..=max`, each as `(mantissa, ln scale)`.
///
/// The recurrence runs on normalized polynomials and rescales whenever the
/// magnitude grows large, so neither factorials nor `H_k` ever overflow.
fn normalized_hermite_table(max: usize, y: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(max + 1);
    let mut log_scale = 0.0;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    out.push((cur, 0.0));
    for k in 1..=max {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * y * cur - ((kf - 1.0) / kf).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            prev /= RESCALE_ABOVE;
            cur /= RESCALE_ABOVE;
            log_scale += RESCALE_ABOVE.ln();
        }
        out.push((cur, log_scale));
    }
    out
}

/// Normalized oscillator eigenfunction `ψ_n` at frequency `ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteBasisFunction {
    pub n: usize,
    pub omega: f64,
}

impl HermiteBasisFunction {
    pub fn new(n: usize, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::NonPositiveOmega(omega));
        }
        Ok(Self { n, omega })
    }
}

/// `(√ω/(√π 2^n n!))^{1/2} H_n(√ω x) e^{−ωx²/2}`.
pub fn eval_basis(basis: &HermiteBasisFunction, x: f64) -> f64 {
    basis.eval(x)
}

/// Anything expandable on oscillator functions of a single frequency.
pub trait PositionFunction {
    fn omega(&self) -> f64;

    /// Degree of the polynomial multiplying `e^{−ωx²/2}`.
    fn degree(&self) -> usize;

    fn eval(&self, x: f64) -> f64;
}

impl PositionFunction for HermiteBasisFunction {
    fn omega(&self) -> f64 {
        self.omega
    }

    fn degree(&self) -> usize {
        self.n
    }

    fn eval(&self, x: f64) -> f64 {
        let y = self.omega.sqrt() * x;
        let (m, s) = normalized_hermite_table(self.n, y)[self.n];
        self.omega.powf(0.25) * m * (s - 0.5 * y * y).exp()
    }
}

impl WavefunctionSeries {
    fn position_value(&self, x: f64) -> f64 {
        let y = self.omega.sqrt() * x;
        let table = normalized_hermite_table(self.max_level(), y);
        let g = 0.5 * y * y;
        let sum: f64 = self
            .components()
            .map(|(level, c)| {
                let (m, s) = table[level];
                c * m * (s - g).exp()
            })
            .sum();
        self.omega.powf(0.25) * sum
    }
}

impl PositionFunction for WavefunctionSeries {
    fn omega(&self) -> f64 {
        self.omega
    }

    fn degree(&self) -> usize {
        self.max_level()
    }

    fn eval(&self, x: f64) -> f64 {
        self.position_value(x)
    }
}

/// `Σ_k c_k ψ_{level(k)}(x)` at the series frequency.
pub fn eval_series_position(series: &WavefunctionSeries, x: f64) -> f64 {
    series.eval(x)
}

/// The closed-form Gaussian `(ω/π)^{1/4} e^{−ωx²/2}` obtained for the ground
/// state by a similarity transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianGroundState {
    pub omega: f64,
}

impl PositionFunction for GaussianGroundState {
    fn omega(&self) -> f64 {
        self.omega
    }

    fn degree(&self) -> usize {
        0
    }

    fn eval(&self, x: f64) -> f64 {
        (self.omega / PI).powf(0.25) * (-0.5 * self.omega * x * x).exp()
    }
}

/// Gauss–Hermite rule for `∫ g(y) e^{−y²} dy`.
///
/// `scaled_weights` are `w_i e^{y_i²}`, used to integrate functions that
/// already carry their own Gaussian decay without under/overflow.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub scaled_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn count(&self) -> usize {
        self.nodes.len()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.count() - 1
    }

    /// `∫ g(y) e^{−y²} dy`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&y, &w)| w * g(y)).sum()
    }

    /// `∫ h(y) dy` for `h` that decays like `e^{−y²}` times a polynomial.
    pub fn integrate_decaying<F: Fn(f64) -> f64>(&self, h: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.scaled_weights)
            .map(|(&y, &w)| w * h(y))
            .sum()
    }
}

/// Normalized `H_Q(z)` and its derivative as `(p, dp, ln scale)`; the true
/// values are `p·e^{scale}` and `dp·e^{scale}`.
fn hermite_with_derivative(q: usize, z: f64) -> (f64, f64, f64) {
    let (mut p1, mut p2) = (PI.powf(-0.25), 0.0);
    let mut log_scale = 0.0;
    for j in 1..=q {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
        if p1.abs() > RESCALE_ABOVE {
            p1 /= RESCALE_ABOVE;
            p2 /= RESCALE_ABOVE;
            log_scale += RESCALE_ABOVE.ln();
        }
    }
    (p1, (2.0 * q as f64).sqrt() * p2, log_scale)
}

/// Safeguarded Newton on `H_Q` inside a sign-change bracket `[lo, hi]`.
fn polish_root(q: usize, mut lo: f64, mut hi: f64) -> f64 {
    let sign_lo = hermite_with_derivative(q, lo).0.signum();
    let mut z = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (p, dp, _) = hermite_with_derivative(q, z);
        if p == 0.0 {
            return z;
        }
        if p.signum() == sign_lo {
            lo = z;
        } else {
            hi = z;
        }
        let newton = z - p / dp;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        let done = (next - z).abs() <= 1e-15 * z.abs().max(1.0);
        z = next;
        if done {
            break;
        }
    }
    z
}

/// `Q`-point Gauss–Hermite rule.
///
/// Positive roots of `H_Q` are bracketed by a sign scan finer than the
/// smallest zero spacing `≈ π/√(2Q+1)`, then polished by Newton with a
/// bisection fallback. Weights come from the derivative formula
/// `w = 2 / H̃_Q′(y)²` on normalized polynomials.
pub fn gauss_hermite(q: usize) -> Result<QuadratureRule> {
    if q == 0 {
        return Err(Error::EmptyQuadrature);
    }
    let edge = (2.0 * q as f64 + 1.0).sqrt();
    let step = 0.1 * PI / edge;

    let mut positive = Vec::with_capacity(q / 2);
    let mut z = if q % 2 == 1 { 0.5 * step } else { 0.0 };
    let mut prev = hermite_with_derivative(q, z).0;
    while positive.len() < q / 2 {
        let next_z = z + step;
        let cur = hermite_with_derivative(q, next_z).0;
        if cur == 0.0 {
            positive.push(next_z);
            z = next_z + 0.5 * step;
            prev = hermite_with_derivative(q, z).0;
            continue;
        }
        if cur.signum() != prev.signum() {
            positive.push(polish_root(q, z, next_z));
        }
        z = next_z;
        prev = cur;
        debug_assert!(z < edge + 1.0, "missed a Hermite root");
    }

    let mut nodes: Vec<f64> = positive.iter().rev().map(|&r| -r).collect();
    if q % 2 == 1 {
        nodes.push(0.0);
    }
    nodes.extend(positive.iter().copied());

    let mut weights = Vec::with_capacity(q);
    let mut scaled_weights = Vec::with_capacity(q);
    for &y in &nodes {
        let (_, dp, s) = hermite_with_derivative(q, y);
        let base = 2.0 / (dp * dp);
        weights.push(base * (-2.0 * s).exp());
        scaled_weights.push(base * (y * y - 2.0 * s).exp());
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        scaled_weights,
    })
}

/// `∫ f(x) g(x) dx` for two functions at the same frequency.
pub fn overlap<F, G>(f: &F, g: &G, rule: &QuadratureRule) -> Result<f64>
where
    F: PositionFunction + ?Sized,
    G: PositionFunction + ?Sized,
{
    let (wf, wg) = (f.omega(), g.omega());
    if (wf - wg).abs() > 1e-14 * wf.max(wg) {
        return Err(Error::OmegaMismatch(wf, wg));
    }
    let degree = f.degree() + g.degree();
    if degree > rule.exact_degree() {
        warn!(
            "overlap integrand degree {degree} exceeds exactness {} of a {}-point rule",
            rule.exact_degree(),
            rule.count()
        );
    }
    let root = wf.sqrt();
    Ok(rule.integrate_decaying(|y| f.eval(y / root) * g.eval(y / root)) / root)
}

/// Samples of a function on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn sample<F: PositionFunction + ?Sized>(f: &F, min: f64, max: f64, points: usize) -> Result<Self> {
        let xs = linspace(min, max, points)?;
        let values = xs.iter().map(|&x| f.eval(x)).collect();
        Ok(Self { xs, values })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// `points` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(min < max) || !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidGrid);
    }
    let step = (max - min) / (points - 1) as f64;
    let mut xs: Vec<f64> = (0..points).map(|i| min + i as f64 * step).collect();
    xs[points - 1] = max;
    Ok(xs)
}

/// Half-width `8/√ω` of the default sampling window.
pub fn default_half_width(omega: f64) -> f64 {
    8.0 / omega.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{omega_u_zero, omega_v_zero, TransformParams};
    use crate::perturbation::{build_series_lowering, build_series_raising};

    fn ln_factorial(n: usize) -> f64 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    }

    // Direct textbook formula; valid while factorials stay finite.
    fn direct_basis(n: usize, omega: f64, x: f64) -> f64 {
        let y = omega.sqrt() * x;
        let norm = (0.25 * omega.ln() - 0.25 * PI.ln() - 0.5 * (n as f64 * 2f64.ln() + ln_factorial(n))).exp();
        norm * hermite_poly(n, y) * (-0.5 * y * y).exp()
    }

    #[test]
    fn hermite_values() {
        assert_eq!(hermite_poly(0, 3.7), 1.0);
        assert_eq!(hermite_poly(2, 1.0), 2.0);
        assert_eq!(hermite_poly(5, 0.0), 0.0);
        assert_eq!(hermite_poly(3, 2.0), 8.0 * 8.0 - 12.0 * 2.0);
    }

    #[test]
    fn basis_values() {
        let b = HermiteBasisFunction::new(0, 1.0).unwrap();
        assert!((eval_basis(&b, 0.0) - 0.7511255).abs() < 1e-7);
        let p = TransformParams::new(0.5, 0.2).unwrap();
        let w2 = omega_v_zero(&p);
        let b = HermiteBasisFunction::new(0, w2).unwrap();
        assert!((eval_basis(&b, 0.0) - (w2 / PI).powf(0.25)).abs() < 1e-15);
        assert!((eval_basis(&b, 0.0) - 0.6418924).abs() < 1e-7);
        // ψ_5(8) ≈ 1.5e-10 already; the bound only holds for low levels.
        for n in 0..=4 {
            for w in [0.5, 2.4] {
                let b = HermiteBasisFunction::new(n, w).unwrap();
                let edge = 8.0 / w.sqrt();
                assert!(eval_basis(&b, edge).abs() < 1e-10);
                assert!(eval_basis(&b, -edge).abs() < 1e-10);
            }
        }
        assert!(HermiteBasisFunction::new(1, 0.0).is_err());
    }

    #[test]
    fn recurrence_matches_direct_formula() {
        for n in 0..=30 {
            for &x in &[-3.1, -0.7, 0.0, 0.4, 1.9, 4.2] {
                let v = eval_basis(&HermiteBasisFunction { n, omega: 1.3 }, x);
                let d = direct_basis(n, 1.3, x);
                assert!((v - d).abs() <= 1e-10 * d.abs().max(1e-300) + 1e-300, "n={n} x={x}: {v} vs {d}");
            }
        }
    }

    #[test]
    fn high_levels_stay_finite_and_normalized() {
        let b = HermiteBasisFunction { n: 400, omega: 1.0 };
        for &x in &[0.1, 10.0, 27.0, 30.0, 40.0] {
            assert!(b.eval(x).is_finite());
        }
        let rule = gauss_hermite(450).unwrap();
        let norm = overlap(&b, &b, &rule).unwrap();
        assert!((norm - 1.0).abs() < 1e-8, "{norm}");
    }

    #[test]
    fn quadrature_small_rules() {
        let r = gauss_hermite(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - PI.sqrt()).abs() < 1e-15);
        let r = gauss_hermite(2).unwrap();
        let s = 0.5f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        for w in &r.weights {
            assert!((w - PI.sqrt() / 2.0).abs() < 1e-15);
        }
        assert!(gauss_hermite(0).is_err());
    }

    #[test]
    fn quadrature_moments() {
        for q in [3, 5, 17, 64, 100, 200, 450] {
            let r = gauss_hermite(q).unwrap();
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(r.weights.iter().all(|&w| w >= 0.0));
            assert!(r.scaled_weights.iter().all(|&w| w > 0.0));
            for i in 0..q {
                assert!((r.nodes[i] + r.nodes[q - 1 - i]).abs() < 1e-13);
            }
            assert!((r.weights.iter().sum::<f64>() - PI.sqrt()).abs() < 1e-12);
        }
        let r = gauss_hermite(64).unwrap();
        assert!((r.integrate(|y| y * y) - PI.sqrt() / 2.0).abs() < 1e-12);
        assert!((r.integrate(|y| y.powi(4)) - 0.75 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn orthonormality() {
        let rule = gauss_hermite(64).unwrap();
        let b3 = HermiteBasisFunction { n: 3, omega: 2.4 };
        assert!((overlap(&b3, &b3, &rule).unwrap() - 1.0).abs() < 1e-12);
        let b2 = HermiteBasisFunction { n: 2, omega: 2.4 };
        let b6 = HermiteBasisFunction { n: 6, omega: 2.4 };
        assert!(overlap(&b2, &b6, &rule).unwrap().abs() < 1e-12);
        let other = HermiteBasisFunction { n: 2, omega: 1.0 };
        assert!(matches!(overlap(&b2, &other, &rule), Err(Error::OmegaMismatch(..))));
    }

    #[test]
    fn ground_state_forms_agree() {
        let p = TransformParams::new(0.5, 0.2).unwrap();
        let phi0 = build_series_lowering(&p, 0);
        let g = GaussianGroundState { omega: omega_v_zero(&p) };
        let rule = gauss_hermite(16).unwrap();
        assert!((overlap(&g, &phi0, &rule).unwrap() - 1.0).abs() < 1e-13);
        for &x in &[-2.0, 0.0, 0.3, 5.0] {
            assert!((eval_series_position(&phi0, x) - g.eval(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn series_position_values() {
        let p = TransformParams::new(0.5, 0.2).unwrap();
        let w2 = omega_v_zero(&p);
        for n in 0..=12 {
            let s = build_series_lowering(&p, n);
            let edge = 10.0 / w2.sqrt();
            assert!(eval_series_position(&s, edge).abs() <= 1e-10);
            assert!(eval_series_position(&s, -edge).abs() <= 1e-10);
        }
        let s = build_series_lowering(&p, 4);
        let x = 0.37;
        let manual: f64 = s
            .components()
            .map(|(lvl, c)| c * direct_basis(lvl, w2, x))
            .sum();
        assert!((eval_series_position(&s, x) - manual).abs() < 1e-14);

        let q = TransformParams::new(0.3, -0.3).unwrap();
        let s = build_series_raising(&q, 3, 4);
        let b = HermiteBasisFunction { n: 3, omega: omega_u_zero(&q) };
        assert!((eval_series_position(&s, 0.8) - b.eval(0.8)).abs() < 1e-15);
    }

    #[test]
    fn fock_and_quadrature_overlaps_agree() {
        let p = TransformParams::new(-0.4, 0.7).unwrap();
        let rule = gauss_hermite(64).unwrap();
        for n in 0..=12 {
            let s = build_series_lowering(&p, n);
            let b = HermiteBasisFunction { n, omega: s.omega };
            assert!((overlap(&b, &s, &rule).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_sampling() {
        let g = GridFunction::sample(&GaussianGroundState { omega: 1.0 }, -8.0, 8.0, DEFAULT_GRID_POINTS).unwrap();
        assert_eq!(g.len(), 401);
        assert_eq!(g.xs[0], -8.0);
        assert_eq!(g.xs[200], 0.0);
        assert_eq!(g.xs[400], 8.0);
        assert!(g.xs.windows(2).all(|w| w[0] < w[1]));
        assert!(linspace(1.0, 1.0, 10).is_err());
        assert!(linspace(0.0, 1.0, 1).is_err());
    }
}
