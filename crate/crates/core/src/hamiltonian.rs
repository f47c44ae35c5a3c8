//! The transformed oscillator `H = [(p + iβx)² + (x + iλp)²] / (2(1+λβ))`
//! written in ladder operators at a free frequency `ω`, and its split into a
//! number-diagonal part `H_D` and a band-2 remainder `H_N`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock_algebra::LadderPolynomial;

/// Transformation parameters `(λ, β)` on the open square `|λ| < 1, |β| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformParams {
    lambda: f64,
    beta: f64,
}

impl TransformParams {
    pub fn new(lambda: f64, beta: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda.abs() >= 1.0 {
            return Err(Error::LambdaOutOfDomain(lambda));
        }
        if !beta.is_finite() || beta.abs() >= 1.0 {
            return Err(Error::BetaOutOfDomain(beta));
        }
        Ok(Self { lambda, beta })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `1 + λβ`, strictly positive on the domain.
    pub fn norm_factor(&self) -> f64 {
        1.0 + self.lambda * self.beta
    }

    /// Coupling `f = (λ+β)/(1+λβ)`; `|f| < 1` on the domain.
    pub fn coupling(&self) -> f64 {
        (self.lambda + self.beta) / self.norm_factor()
    }

    /// Parameters with both signs flipped; `H(−λ,−β)` is the adjoint of `H(λ,β)`.
    pub fn negated(&self) -> Self {
        Self {
            lambda: -self.lambda,
            beta: -self.beta,
        }
    }
}

/// Which off-diagonal coefficient is tuned to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroBranch {
    /// `U = 0`: the `a²` term vanishes, `H_N ∝ (a†)²`.
    UZero,
    /// `V = 0`: the `(a†)²` term vanishes, `H_N ∝ a²`.
    VZero,
}

impl ZeroBranch {
    pub fn omega(self, params: &TransformParams) -> f64 {
        match self {
            ZeroBranch::UZero => omega_u_zero(params),
            ZeroBranch::VZero => omega_v_zero(params),
        }
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveOmega(omega))
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `x = (a + a†)/√(2ω)`.
pub fn position(omega: f64) -> Result<LadderPolynomial> {
    check_omega(omega)?;
    let k = 1.0 / (2.0 * omega).sqrt();
    Ok(LadderPolynomial::from_terms([((0, 1), real(k)), ((1, 0), real(k))]))
}

/// `p = i√(ω/2)(a† − a)`.
pub fn momentum(omega: f64) -> Result<LadderPolynomial> {
    check_omega(omega)?;
    let k = (omega / 2.0).sqrt();
    Ok(LadderPolynomial::from_terms([
        ((1, 0), Complex64::new(0.0, k)),
        ((0, 1), Complex64::new(0.0, -k)),
    ]))
}

/// `(x + iλp)/√(1+λβ)`.
pub fn transformed_position(params: &TransformParams, omega: f64) -> Result<LadderPolynomial> {
    let x = position(omega)?;
    let p = momentum(omega)?;
    let s = 1.0 / params.norm_factor().sqrt();
    Ok(x
        .add(&p.scale(Complex64::new(0.0, params.lambda)))
        .scale(real(s)))
}

/// `(p + iβx)/√(1+λβ)`.
pub fn transformed_momentum(params: &TransformParams, omega: f64) -> Result<LadderPolynomial> {
    let x = position(omega)?;
    let p = momentum(omega)?;
    let s = 1.0 / params.norm_factor().sqrt();
    Ok(p
        .add(&x.scale(Complex64::new(0.0, params.beta)))
        .scale(real(s)))
}

/// `[x′, p′]`, which should be `i·1` for every valid `(λ, β, ω)`.
pub fn verify_canonical_commutator(params: &TransformParams, omega: f64) -> Result<LadderPolynomial> {
    let xt = transformed_position(params, omega)?;
    let pt = transformed_momentum(params, omega)?;
    Ok(xt.commutator(&pt))
}

/// `(p′² + x′²)/2` assembled by operator multiplication.
pub fn hamiltonian_polynomial(params: &TransformParams, omega: f64) -> Result<LadderPolynomial> {
    let xt = transformed_position(params, omega)?;
    let pt = transformed_momentum(params, omega)?;
    Ok(pt.multiply(&pt).add(&xt.multiply(&xt)).scale(real(0.5)))
}

/// Closed-form split `H = h_d(2a†a+1) + U a²/(4(1+λβ)) + V (a†)²/(4(1+λβ))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeDecomposition {
    pub params: TransformParams,
    pub omega: f64,
    pub h_d: f64,
    pub u: f64,
    pub v: f64,
    pub f: f64,
}

impl ModeDecomposition {
    /// Coefficient of `a²` in `H_N`.
    pub fn a2_coefficient(&self) -> f64 {
        self.u / (4.0 * self.params.norm_factor())
    }

    /// Coefficient of `(a†)²` in `H_N`.
    pub fn adag2_coefficient(&self) -> f64 {
        self.v / (4.0 * self.params.norm_factor())
    }

    /// Unperturbed level `h_d (2n + 1)`.
    pub fn zeroth_energy(&self, n: usize) -> f64 {
        self.h_d * (2 * n + 1) as f64
    }

    /// `H_D = h_d (2a†a + 1)`.
    pub fn diagonal_part(&self) -> LadderPolynomial {
        LadderPolynomial::from_terms([((1, 1), real(2.0 * self.h_d)), ((0, 0), real(self.h_d))])
    }

    /// `H_N`, the band-2 remainder.
    pub fn off_diagonal_part(&self) -> LadderPolynomial {
        LadderPolynomial::from_terms([
            ((0, 2), real(self.a2_coefficient())),
            ((2, 0), real(self.adag2_coefficient())),
        ])
    }

    pub fn polynomial(&self) -> LadderPolynomial {
        self.diagonal_part().add(&self.off_diagonal_part())
    }
}

/// Closed-form decomposition of the transformed Hamiltonian at frequency `omega`.
pub fn build_hamiltonian(params: &TransformParams, omega: f64) -> Result<ModeDecomposition> {
    check_omega(omega)?;
    let (l, b) = (params.lambda, params.beta);
    let kinetic = (1.0 - l * l) * omega;
    let potential = (1.0 - b * b) / omega;
    let h_d = (kinetic + potential) / (4.0 * params.norm_factor());
    let u = -kinetic + potential + 2.0 * (l + b);
    let v = -kinetic + potential - 2.0 * (l + b);
    Ok(ModeDecomposition {
        params: *params,
        omega,
        h_d,
        u,
        v,
        f: params.coupling(),
    })
}

/// `ω₁ = (1+β)/(1−λ)`, the positive root of `U(ω) = 0`.
pub fn omega_u_zero(params: &TransformParams) -> f64 {
    (1.0 + params.beta) / (1.0 - params.lambda)
}

/// `ω₂ = (1−β)/(1+λ)`, the positive root of `V(ω) = 0`.
pub fn omega_v_zero(params: &TransformParams) -> f64 {
    (1.0 - params.beta) / (1.0 + params.lambda)
}

/// Stationary point of `h_d(ω)`: `√((1−β²)/(1−λ²))`.
pub fn omega_variational(params: &TransformParams) -> f64 {
    ((1.0 - params.beta * params.beta) / (1.0 - params.lambda * params.lambda)).sqrt()
}

/// Both roots of a frequency-selection quadratic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticRoots {
    pub positive: f64,
    pub negative: f64,
}

fn solve_quadratic(a: f64, b: f64, c: f64) -> QuadraticRoots {
    // a > 0 and c < 0 on the domain, so the roots have opposite signs.
    let disc = (b * b - 4.0 * a * c).sqrt();
    let q = -0.5 * (b + b.signum() * disc);
    let (r1, r2) = if q == 0.0 {
        (disc / (2.0 * a), -disc / (2.0 * a))
    } else {
        (q / a, c / q)
    };
    QuadraticRoots {
        positive: r1.max(r2),
        negative: r1.min(r2),
    }
}

/// Roots of `U(ω)·ω = −(1−λ²)ω² + 2(λ+β)ω + (1−β²) = 0`. The negative root is `−ω₂`.
pub fn u_zero_roots(params: &TransformParams) -> QuadraticRoots {
    let (l, b) = (params.lambda, params.beta);
    solve_quadratic(1.0 - l * l, -2.0 * (l + b), -(1.0 - b * b))
}

/// Roots of `V(ω)·ω = 0`. The negative root is `−ω₁`.
pub fn v_zero_roots(params: &TransformParams) -> QuadraticRoots {
    let (l, b) = (params.lambda, params.beta);
    solve_quadratic(1.0 - l * l, 2.0 * (l + b), -(1.0 - b * b))
}

/// `H − H†`; vanishes exactly when `λ + β = 0`.
pub fn hermiticity_defect(params: &TransformParams, omega: f64) -> Result<LadderPolynomial> {
    let h = hamiltonian_polynomial(params, omega)?;
    Ok(h.sub(&h.adjoint()))
}
