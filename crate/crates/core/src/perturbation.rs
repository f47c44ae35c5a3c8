//! Rayleigh–Schrödinger corrections for the band-2 perturbation `H_N` and the
//! raising/lowering wavefunction series on the two zero branches.

use crate::error::{Error, Result};
use crate::fock_algebra::LadderPolynomial;
use crate::hamiltonian::{omega_u_zero, omega_v_zero, ModeDecomposition, TransformParams};

/// Default number of correction orders.
pub const DEFAULT_ORDER: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationResult {
    pub n: usize,
    pub omega: f64,
    pub zeroth: f64,
    /// `ε^(1) … ε^(K)`.
    pub corrections: Vec<f64>,
}

impl PerturbationResult {
    pub fn total(&self) -> f64 {
        self.zeroth + self.corrections.iter().sum::<f64>()
    }

    pub fn max_abs_correction(&self) -> f64 {
        self.corrections.iter().map(|c| c.abs()).fold(0.0, f64::max)
    }
}

/// `ε_n^(1) … ε_n^(K)` for `H_D + H_N` with intermediate normalization.
///
/// Works for any frequency; on the zero branches every order vanishes because
/// `H_N` only connects `n` to one side.
pub fn rs_corrections(decomp: &ModeDecomposition, n: usize, max_order: usize) -> Result<PerturbationResult> {
    if max_order == 0 {
        return Err(Error::ZeroOrder);
    }
    if decomp.h_d == 0.0 {
        return Err(Error::DegenerateUnperturbed);
    }
    let corrections = rs_series(|m| decomp.zeroth_energy(m), &decomp.off_diagonal_part(), n, max_order);
    Ok(PerturbationResult {
        n,
        omega: decomp.omega,
        zeroth: decomp.zeroth_energy(n),
        corrections,
    })
}

/// Generic nondegenerate RS recursion for a diagonal `H_0` with levels `e0(m)`
/// and a real perturbation given as a ladder polynomial.
///
/// `ψ^(k)_m = [ (Vψ^(k−1))_m − Σ_{j=1..k} ε^(j) ψ^(k−j)_m ] / (e0(n) − e0(m))`,
/// `ε^(k) = (Vψ^(k−1))_n`.
fn rs_series<F: Fn(usize) -> f64>(e0: F, perturbation: &LadderPolynomial, n: usize, order: usize) -> Vec<f64> {
    let raise = perturbation
        .terms()
        .map(|((r, s), _)| r.saturating_sub(s) as usize)
        .max()
        .unwrap_or(0);
    // Largest level reachable after `order` applications; truncation never bites.
    let dim = n + raise * order + 1;
    let v = perturbation.to_matrix(dim).real_rows();
    let en = e0(n);
    let denom: Vec<f64> = (0..dim).map(|m| en - e0(m)).collect();

    let apply = |psi: &[f64]| -> Vec<f64> {
        v.iter()
            .map(|row| row.iter().zip(psi).map(|(a, b)| a * b).sum())
            .collect()
    };

    let mut states: Vec<Vec<f64>> = Vec::with_capacity(order);
    let mut basis = vec![0.0; dim];
    basis[n] = 1.0;
    states.push(basis);
    let mut energies: Vec<f64> = Vec::with_capacity(order);

    for k in 1..=order {
        let vpsi = apply(&states[k - 1]);
        energies.push(vpsi[n]);
        if k == order {
            break;
        }
        let mut next = vec![0.0; dim];
        for m in (0..dim).filter(|&m| m != n) {
            let mut rhs = vpsi[m];
            for j in 1..=k {
                rhs -= energies[j - 1] * states[k - j][m];
            }
            next[m] = rhs / denom[m];
        }
        states.push(next);
    }
    energies
}

/// `⟨n|H_N|n⟩`.
pub fn first_order(decomp: &ModeDecomposition, n: usize) -> f64 {
    decomp.off_diagonal_part().matrix_element(n, n).re
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesBranch {
    /// Coefficients on `|n + 2k⟩` at `ω₁`; infinite, truncated at order `K`.
    Raising,
    /// Coefficients on `|n − 2k⟩` at `ω₂`; terminates at `k = ⌊n/2⌋`.
    Lowering,
}

impl SeriesBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesBranch::Raising => "raising",
            SeriesBranch::Lowering => "lowering",
        }
    }
}

/// `Ψ_n = Σ_k c_k |level(k)⟩` with `c_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionSeries {
    pub n: usize,
    pub branch: SeriesBranch,
    pub omega: f64,
    pub coeffs: Vec<f64>,
}

impl WavefunctionSeries {
    /// Index of the last kept coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Fock level carrying coefficient `k`.
    pub fn level(&self, k: usize) -> usize {
        match self.branch {
            SeriesBranch::Raising => self.n + 2 * k,
            SeriesBranch::Lowering => self.n - 2 * k,
        }
    }

    pub fn max_level(&self) -> usize {
        match self.branch {
            SeriesBranch::Raising => self.level(self.order()),
            SeriesBranch::Lowering => self.n,
        }
    }

    /// `(level, coefficient)` pairs.
    pub fn components(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs.iter().enumerate().map(|(k, &c)| (self.level(k), c))
    }

    /// Dense coefficient vector of length `dim`.
    pub fn fock_vector(&self, dim: usize) -> Result<Vec<f64>> {
        if self.max_level() >= dim {
            return Err(Error::DimensionMismatch {
                expected: self.max_level() + 1,
                actual: dim,
            });
        }
        let mut v = vec![0.0; dim];
        for (level, c) in self.components() {
            v[level] = c;
        }
        Ok(v)
    }

    /// `|c_{k+1}/c_k|²` for consecutive nonzero coefficients.
    pub fn ratio_sequence(&self) -> Vec<f64> {
        self.coeffs
            .windows(2)
            .filter(|w| w[0] != 0.0)
            .map(|w| (w[1] / w[0]).powi(2))
            .collect()
    }

    /// Partial sums `Σ_{j≤k} c_j²`.
    pub fn partial_norms(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .scan(0.0, |acc, c| {
                *acc += c * c;
                Some(*acc)
            })
            .collect()
    }
}

/// `½ ln(hi!/lo!)` as a sum of logarithms.
fn half_ln_factorial_ratio(lo: usize, hi: usize) -> f64 {
    0.5 * ((lo + 1)..=hi).map(|j| (j as f64).ln()).sum::<f64>()
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

fn signed_power_term(f: f64, k: usize, ln_rest: f64) -> f64 {
    if k == 0 {
        return ln_rest.exp();
    }
    if f == 0.0 {
        return 0.0;
    }
    let sign = if f < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * (k as f64 * f.abs().ln() + ln_rest).exp()
}

/// `f^k √((n+2k)!/n!) / (2^k k!)`.
pub fn raising_closed_form(f: f64, n: usize, k: usize) -> f64 {
    let ln_rest = half_ln_factorial_ratio(n, n + 2 * k) - k as f64 * std::f64::consts::LN_2 - ln_factorial(k);
    signed_power_term(f, k, ln_rest)
}

/// `f^k √(n!/(n−2k)!) / (2^k k!)`, zero once `2k > n`.
pub fn lowering_closed_form(f: f64, n: usize, k: usize) -> f64 {
    if 2 * k > n {
        return 0.0;
    }
    let ln_rest = half_ln_factorial_ratio(n - 2 * k, n) - k as f64 * std::f64::consts::LN_2 - ln_factorial(k);
    signed_power_term(f, k, ln_rest)
}

/// `c_k = f √((n+2k)(n+2k−1)) / (2k) · c_{k−1}`, from `(H − (n+½))Ψ = 0` at `ω₁`.
pub fn raising_recursion(f: f64, n: usize, order: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(order + 1);
    c.push(1.0);
    for k in 1..=order {
        let top = (n + 2 * k) as f64;
        let step = f * (top * (top - 1.0)).sqrt() / (2 * k) as f64;
        c.push(step * c[k - 1]);
    }
    c
}

/// `c_k = f √((n−2k+2)(n−2k+1)) / (2k) · c_{k−1}`, from `(H − (n+½))Φ = 0` at `ω₂`.
pub fn lowering_recursion(f: f64, n: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for k in 1..=n / 2 {
        let top = (n + 2 - 2 * k) as f64;
        let step = f * (top * (top - 1.0)).sqrt() / (2 * k) as f64;
        c.push(step * c[k - 1]);
    }
    c
}

/// Raising series at `ω₁`, kept through `|n + 2K⟩`.
pub fn build_series_raising(params: &TransformParams, n: usize, order: usize) -> WavefunctionSeries {
    let f = params.coupling();
    WavefunctionSeries {
        n,
        branch: SeriesBranch::Raising,
        omega: omega_u_zero(params),
        coeffs: (0..=order).map(|k| raising_closed_form(f, n, k)).collect(),
    }
}

/// Lowering series at `ω₂`; finite, ends at `|n mod 2⟩`.
pub fn build_series_lowering(params: &TransformParams, n: usize) -> WavefunctionSeries {
    let f = params.coupling();
    WavefunctionSeries {
        n,
        branch: SeriesBranch::Lowering,
        omega: omega_v_zero(params),
        coeffs: (0..=n / 2).map(|k| lowering_closed_form(f, n, k)).collect(),
    }
}
