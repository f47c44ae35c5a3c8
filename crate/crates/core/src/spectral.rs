//! Dense Fock-basis truncations and the checks built on them: band structure,
//! triangular spectra, eigen-residuals of wavefunction series and the
//! intermediate-normalization expectation identities.

use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{build_hamiltonian, hamiltonian_polynomial, TransformParams, ZeroBranch};
use crate::perturbation::{build_series_lowering, build_series_raising, SeriesBranch, WavefunctionSeries};

/// Entries below this fraction of the largest entry (or of 1, whichever is
/// larger) count as zero when classifying structure.
pub const STRUCTURE_TOLERANCE: f64 = 1e-13;

/// Dense `N × N` complex matrix in the number basis, entry `(m, n) = ⟨m|·|n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    entries: Array2<Complex64>,
}

impl FockMatrix {
    pub fn from_array(entries: Array2<Complex64>) -> Self {
        assert_eq!(entries.nrows(), entries.ncols(), "FockMatrix must be square");
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_array(Array2::zeros((dim, dim)))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_array(Array2::eye(dim))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[[m, n]]
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self::from_array(self.entries.dot(&other.entries))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_array(&self.entries - &other.entries)
    }

    /// `M − shift·I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut e = self.entries.clone();
        for k in 0..self.dim() {
            e[[k, k]] -= shift;
        }
        Self::from_array(e)
    }

    /// `M·v` for a real vector.
    pub fn apply_real(&self, v: &[f64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: v.len(),
            });
        }
        Ok(self
            .entries
            .rows()
            .into_iter()
            .map(|row| row.iter().zip(v).map(|(a, &b)| a * b).sum())
            .collect())
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.entries.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Real parts in row-major order.
    pub fn real_rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .rows()
            .into_iter()
            .map(|row| row.iter().map(|c| c.re).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureTag {
    Diagonal,
    /// Only `m = n + 2` off the diagonal: lower triangular.
    LowerBand2,
    /// Only `m = n − 2` off the diagonal: upper triangular.
    UpperBand2,
    FullBand2,
    /// Something outside the `{−2, 0, +2}` bands.
    General,
}

impl StructureTag {
    pub fn is_triangular(self) -> bool {
        matches!(
            self,
            StructureTag::Diagonal | StructureTag::LowerBand2 | StructureTag::UpperBand2
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StructureTag::Diagonal => "diagonal",
            StructureTag::LowerBand2 => "lower_band2",
            StructureTag::UpperBand2 => "upper_band2",
            StructureTag::FullBand2 => "full_band2",
            StructureTag::General => "general",
        }
    }
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_structure(m: &FockMatrix) -> StructureTag {
    let scale = m.entries.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let zero = STRUCTURE_TOLERANCE * scale;
    let (mut lower, mut upper, mut other) = (false, false, false);
    for ((row, col), v) in m.entries.indexed_iter() {
        if v.norm() <= zero || row == col {
            continue;
        }
        if row == col + 2 {
            lower = true;
        } else if col == row + 2 {
            upper = true;
        } else {
            other = true;
        }
    }
    match (other, lower, upper) {
        (true, _, _) => StructureTag::General,
        (false, false, false) => StructureTag::Diagonal,
        (false, true, false) => StructureTag::LowerBand2,
        (false, false, true) => StructureTag::UpperBand2,
        (false, true, true) => StructureTag::FullBand2,
    }
}

/// Eigenvalues of a triangular truncation, read off its diagonal in index order.
pub fn triangular_spectrum(m: &FockMatrix) -> Result<Vec<f64>> {
    let tag = classify_structure(m);
    if !tag.is_triangular() {
        return Err(Error::NotTriangular(tag.to_string()));
    }
    Ok((0..m.dim()).map(|k| m.get(k, k).re).collect())
}

/// Residual of `(M − E·I)c` split into rows the series controls and rows past its reach.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub interior: f64,
    /// Max over the excluded truncation rows; zero for finite (lowering) series.
    pub boundary: f64,
}

/// Rows `0..end` that a raising series fully controls.
fn interior_end(series: &WavefunctionSeries, dim: usize) -> usize {
    match series.branch {
        SeriesBranch::Lowering => dim,
        SeriesBranch::Raising => (series.n + 2 * series.order()).saturating_sub(1).min(dim),
    }
}

pub fn eigen_residual(m: &FockMatrix, series: &WavefunctionSeries, energy: f64) -> Result<Residual> {
    let dim = m.dim();
    if series.branch == SeriesBranch::Raising {
        let needed = series.n + 2 * series.order() + 3;
        if dim < needed {
            return Err(Error::DimensionMismatch {
                expected: needed,
                actual: dim,
            });
        }
    }
    let c = series.fock_vector(dim)?;
    let r = m.shifted(energy).apply_real(&c)?;
    let end = interior_end(series, dim);
    let max = |rows: &[Complex64]| rows.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(Residual {
        interior: max(&r[..end]),
        boundary: max(&r[end..]),
    })
}

/// `⟨base|Ψ⟩` under intermediate normalization, i.e. `c_0`.
pub fn overlap_with_base(series: &WavefunctionSeries) -> f64 {
    series.coeffs[0]
}

/// Row `n` of `M·c`: `⟨n|M|Ψ⟩`.
pub fn energy_functional(m: &FockMatrix, series: &WavefunctionSeries, n: usize) -> Result<f64> {
    let c = series.fock_vector(m.dim())?;
    if n >= m.dim() {
        return Err(Error::LevelOutOfRange { level: n, dim: m.dim() });
    }
    Ok(m.apply_real(&c)?[n].re)
}

/// The four expectation values that all equal `n + ½`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationIdentity {
    /// `⟨φ_n|H_D|φ_n⟩` at `ω₂`.
    pub diagonal_v_zero: f64,
    /// `⟨ψ_n|H_D|ψ_n⟩` at `ω₁`.
    pub diagonal_u_zero: f64,
    /// `⟨φ_n|H|Φ_n⟩` with the lowering series.
    pub series_v_zero: f64,
    /// `⟨ψ_n|H|Ψ_n⟩` with the raising series truncated at `order`.
    pub series_u_zero: f64,
}

impl ExpectationIdentity {
    pub fn values(&self) -> [f64; 4] {
        [
            self.diagonal_v_zero,
            self.diagonal_u_zero,
            self.series_v_zero,
            self.series_u_zero,
        ]
    }

    pub fn max_deviation(&self, target: f64) -> f64 {
        self.values()
            .iter()
            .map(|v| (v - target).abs())
            .fold(0.0, f64::max)
    }
}

pub fn expectation_consistency(params: &TransformParams, n: usize, order: usize) -> Result<ExpectationIdentity> {
    let dim = n + 2 * order + 3;
    let w1 = ZeroBranch::UZero.omega(params);
    let w2 = ZeroBranch::VZero.omega(params);
    let d1 = build_hamiltonian(params, w1)?;
    let d2 = build_hamiltonian(params, w2)?;

    let hd2 = d2.diagonal_part().matrix_element(n, n).re;
    let hd1 = d1.diagonal_part().matrix_element(n, n).re;

    let h2 = hamiltonian_polynomial(params, w2)?.to_matrix(dim);
    let h1 = hamiltonian_polynomial(params, w1)?.to_matrix(dim);
    let phi = build_series_lowering(params, n);
    let psi = build_series_raising(params, n, order);

    Ok(ExpectationIdentity {
        diagonal_v_zero: hd2,
        diagonal_u_zero: hd1,
        series_v_zero: energy_functional(&h2, &phi, n)?,
        series_u_zero: energy_functional(&h1, &psi, n)?,
    })
}

/// Largest coefficient of `[H, H_D]` at frequency `omega`.
///
/// On either zero branch this vanishes exactly when `λ + β = 0`; at a generic
/// frequency it vanishes only when both `U` and `V` do.
pub fn commutator_defect(params: &TransformParams, omega: f64) -> Result<f64> {
    let h = hamiltonian_polynomial(params, omega)?;
    let hd = build_hamiltonian(params, omega)?.diagonal_part();
    Ok(h.commutator(&hd).max_abs_coefficient())
}
