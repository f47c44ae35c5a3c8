//! Closed-form spectrum of the general quadratic oscillator
//! `s0(a†a + ½) + s1(a†)² + s2 a² + s3 a† + s4 a`.
//!
//! The published shift term divides by `s0² − 4 s0 s1 s2`, which does not match
//! the square-root argument `s0² − 4 s1 s2`. Both readings are available but
//! neither is picked silently: when `s3` or `s4` is nonzero the caller must
//! choose one. With `s3 = s4 = 0` the shift is zero under any reading.

use crate::error::{Error, Result};
use crate::hamiltonian::{ModeDecomposition, TransformParams, ZeroBranch};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieCoefficients {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
}

impl LieCoefficients {
    /// `s0² − 4 s1 s2`.
    pub fn discriminant(&self) -> f64 {
        self.s0 * self.s0 - 4.0 * self.s1 * self.s2
    }

    pub fn has_linear_terms(&self) -> bool {
        self.s3 != 0.0 || self.s4 != 0.0
    }
}

/// Which denominator to use for the constant shift term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDenominator {
    /// `s0² − 4 s0 s1 s2`, as printed.
    AsPrinted,
    /// `s0² − 4 s1 s2`, matching the square-root argument.
    RootArgument,
}

/// `√(s0² − 4 s1 s2)(n + ½) + shift`; refuses linear terms without an explicit reading.
pub fn lie_energy(c: &LieCoefficients, n: usize) -> Result<f64> {
    lie_energy_with(c, n, None)
}

pub fn lie_energy_with(c: &LieCoefficients, n: usize, reading: Option<ShiftDenominator>) -> Result<f64> {
    let disc = c.discriminant();
    if !(disc > 0.0) {
        return Err(Error::NonRealSpectrum(disc));
    }
    let level = disc.sqrt() * (n as f64 + 0.5);
    if !c.has_linear_terms() {
        return Ok(level);
    }
    let denom = match reading {
        None => return Err(Error::AmbiguousShiftDenominator),
        Some(ShiftDenominator::AsPrinted) => c.s0 * c.s0 - 4.0 * c.s0 * c.s1 * c.s2,
        Some(ShiftDenominator::RootArgument) => disc,
    };
    if denom == 0.0 {
        return Err(Error::ZeroShiftDenominator);
    }
    let numer = c.s2 * c.s3 * c.s3 + c.s1 * c.s4 * c.s4 - c.s0 * c.s3 * c.s4;
    Ok(level + numer / denom)
}

/// Coefficients as published for the two zero branches:
/// `U = 0 → (1, −f/2, 0, 0, 0)` and `V = 0 → (1, 0, f/2, 0, 0)`.
///
/// These carry half the off-diagonal weight that the decomposition itself
/// produces (see [`decomposition_coefficients`]); the spectrum is unaffected
/// because `s1 s2 = 0` either way.
pub fn case_coefficients(params: &TransformParams, branch: ZeroBranch) -> LieCoefficients {
    let half_f = 0.5 * params.coupling();
    let (s1, s2) = match branch {
        ZeroBranch::UZero => (-half_f, 0.0),
        ZeroBranch::VZero => (0.0, half_f),
    };
    LieCoefficients {
        s0: 1.0,
        s1,
        s2,
        s3: 0.0,
        s4: 0.0,
    }
}

/// Coefficients read off a decomposition: `s0 = 2h_d`, `s1 = V/(4(1+λβ))`, `s2 = U/(4(1+λβ))`.
pub fn decomposition_coefficients(decomp: &ModeDecomposition) -> LieCoefficients {
    LieCoefficients {
        s0: 2.0 * decomp.h_d,
        s1: decomp.adag2_coefficient(),
        s2: decomp.a2_coefficient(),
        s3: 0.0,
        s4: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_hamiltonian;

    fn coeffs(s0: f64, s1: f64, s2: f64, s3: f64, s4: f64) -> LieCoefficients {
        LieCoefficients { s0, s1, s2, s3, s4 }
    }

    #[test]
    fn sho_and_cases() {
        assert_eq!(lie_energy(&coeffs(1.0, 0.0, 0.0, 0.0, 0.0), 3).unwrap(), 3.5);
        let p = TransformParams::new(0.5, 0.2).unwrap();
        for n in 0..=10 {
            for b in [ZeroBranch::UZero, ZeroBranch::VZero] {
                let e = lie_energy(&case_coefficients(&p, b), n).unwrap();
                assert_eq!(e, n as f64 + 0.5);
            }
        }
    }

    #[test]
    fn case_coefficient_values() {
        let p = TransformParams::new(0.5, 0.2).unwrap();
        let u = case_coefficients(&p, ZeroBranch::UZero);
        assert!((u.s1 + 7.0 / 22.0).abs() < 1e-15);
        assert!((u.s1 + 0.3181818).abs() < 1e-7);
        assert_eq!(u.s2, 0.0);
        let v = case_coefficients(&p, ZeroBranch::VZero);
        assert!((v.s2 - 7.0 / 22.0).abs() < 1e-15);
        let q = TransformParams::new(-0.35, 0.35).unwrap();
        for b in [ZeroBranch::UZero, ZeroBranch::VZero] {
            let c = case_coefficients(&q, b);
            assert_eq!((c.s1, c.s2), (0.0, 0.0));
        }
    }

    #[test]
    fn decomposition_relation() {
        let p = TransformParams::new(0.5, 0.2).unwrap();
        for b in [ZeroBranch::UZero, ZeroBranch::VZero] {
            let d = build_hamiltonian(&p, b.omega(&p)).unwrap();
            let from_d = decomposition_coefficients(&d);
            let printed = case_coefficients(&p, b);
            assert!((from_d.s0 - printed.s0).abs() < 1e-14);
            assert!((from_d.s1 - 2.0 * printed.s1).abs() < 1e-14);
            assert!((from_d.s2 - 2.0 * printed.s2).abs() < 1e-14);
            assert_eq!(from_d.s1 * from_d.s2, 0.0);
            for n in 0..5 {
                let a = lie_energy(&from_d, n).unwrap();
                assert!((a - lie_energy(&printed, n).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn shift_term_needs_reading() {
        let c = coeffs(1.0, 0.1, 0.2, 0.3, 0.4);
        assert_eq!(lie_energy(&c, 0), Err(Error::AmbiguousShiftDenominator));
        let root = (1.0f64 - 0.08).sqrt() * 0.5;
        let numer = 0.2 * 0.09 + 0.1 * 0.16 - 0.12;
        let printed = lie_energy_with(&c, 0, Some(ShiftDenominator::AsPrinted)).unwrap();
        assert!((printed - (root + numer / (1.0 - 0.08))).abs() < 1e-15);
        let c2 = coeffs(2.0, 0.1, 0.2, 0.3, 0.4);
        let a = lie_energy_with(&c2, 1, Some(ShiftDenominator::AsPrinted)).unwrap();
        let b = lie_energy_with(&c2, 1, Some(ShiftDenominator::RootArgument)).unwrap();
        assert!((a - b).abs() > 1e-6);
    }

    #[test]
    fn rejects_complex_spectrum() {
        let c = coeffs(1.0, 0.5, 0.5, 0.0, 0.0);
        assert!(matches!(lie_energy(&c, 0), Err(Error::NonRealSpectrum(_))));
    }
}
