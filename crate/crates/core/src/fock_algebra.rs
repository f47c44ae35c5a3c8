//! Normal-ordered polynomials in a single pair of bosonic ladder operators.
//!
//! A [`LadderPolynomial`] stores a finite sum `Σ c_{rs} (a†)^r a^s` with every
//! term already in normal order. Products are brought back to normal order
//! with the single rewrite `a (a†)^r = (a†)^r a + r (a†)^(r-1)`, so two
//! polynomials that denote the same operator always carry identical term maps.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use ndarray::Array2;
use num_complex::Complex64;

use crate::spectral::FockMatrix;

/// Coefficients smaller than this are dropped during canonicalization.
pub const DROP_TOLERANCE: f64 = 1e-15;

/// Powers `(r, s)` of a normal-ordered monomial `(a†)^r a^s`.
pub type Powers = (u32, u32);

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LadderPolynomial {
    terms: BTreeMap<Powers, Complex64>,
}

impl LadderPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The identity operator.
    pub fn one() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn scalar(c: Complex64) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `c (a†)^r a^s`.
    pub fn monomial(r: u32, s: u32, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.accumulate((r, s), c);
        p
    }

    /// The annihilation operator `a`.
    pub fn annihilation() -> Self {
        Self::monomial(0, 1, Complex64::new(1.0, 0.0))
    }

    /// The creation operator `a†`.
    pub fn creation() -> Self {
        Self::monomial(1, 0, Complex64::new(1.0, 0.0))
    }

    /// The number operator `a†a`.
    pub fn number() -> Self {
        Self::monomial(1, 1, Complex64::new(1.0, 0.0))
    }

    /// Builds a polynomial from raw terms; duplicates are summed and the result canonicalized.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Powers, Complex64)>,
    {
        let mut p = Self::zero();
        for (k, c) in terms {
            *p.terms.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        p.canonicalize();
        p
    }

    fn accumulate(&mut self, key: Powers, c: Complex64) {
        let slot = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
        if slot.norm() < DROP_TOLERANCE {
            self.terms.remove(&key);
        }
    }

    fn canonicalize(&mut self) {
        self.terms.retain(|_, c| c.norm() >= DROP_TOLERANCE);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `(a†)^r a^s`, zero when absent.
    pub fn coefficient(&self, r: u32, s: u32) -> Complex64 {
        self.terms
            .get(&(r, s))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Terms in ascending `(r, s)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Powers, Complex64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    /// Largest `r + s` over stored terms (0 for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(r, s)| r + s).max().unwrap_or(0)
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest imaginary part over all coefficients.
    pub fn max_abs_imag(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (k, v * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.accumulate(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.accumulate(k, -c);
        }
        out
    }

    /// Operator product `self · other`, re-expressed in normal order.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut reorder = NormalOrderCache::default();
        let mut acc: BTreeMap<Powers, Complex64> = BTreeMap::new();
        for (&(r1, s1), &c1) in &self.terms {
            for (&(r2, s2), &c2) in &other.terms {
                // (a†)^r1 [a^s1 (a†)^r2] a^s2
                for (&(i, j), &w) in reorder.get(s1, r2).iter() {
                    let key = (r1 + i, j + s2);
                    *acc.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c1 * c2 * w;
                }
            }
        }
        let mut out = Self { terms: acc };
        out.canonicalize();
        out
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.multiply(other).sub(&other.multiply(self))
    }

    /// Hermitian adjoint: `c (a†)^r a^s ↦ c̄ (a†)^s a^r`.
    ///
    /// The adjoint of a normal-ordered monomial is again normal-ordered, so no
    /// reordering is needed beyond the canonical drop of tiny terms.
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms().map(|((r, s), c)| ((s, r), c.conj())))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.multiply(self))
    }

    /// `⟨m| self |n⟩` in the number basis.
    pub fn matrix_element(&self, m: usize, n: usize) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (&(r, s), &c) in &self.terms {
            let (r, s) = (r as usize, s as usize);
            if n < s || m != n - s + r {
                continue;
            }
            total += c * ladder_amplitude(n, s, r);
        }
        total
    }

    /// Dense `dim × dim` truncation with entry `(m, n) = ⟨m|self|n⟩`.
    pub fn to_matrix(&self, dim: usize) -> FockMatrix {
        let mut entries = Array2::<Complex64>::zeros((dim, dim));
        for (&(r, s), &c) in &self.terms {
            let (r, s) = (r as usize, s as usize);
            for n in s..dim {
                let m = n - s + r;
                if m >= dim {
                    continue;
                }
                entries[[m, n]] += c * ladder_amplitude(n, s, r);
            }
        }
        FockMatrix::from_array(entries)
    }
}

/// `√(n!/(n−s)!) · √((n−s+r)!/(n−s)!)`: the amplitude of `(a†)^r a^s |n⟩` on `|n−s+r⟩`.
fn ladder_amplitude(n: usize, s: usize, r: usize) -> f64 {
    let base = n - s;
    let lower: f64 = ((base + 1)..=n).map(|k| k as f64).product();
    let upper: f64 = ((base + 1)..=(base + r)).map(|k| k as f64).product();
    (lower * upper).sqrt()
}

/// Memoized normal forms of `a^s (a†)^r`, stored as `{(i, j): weight}` for `(a†)^i a^j`.
#[derive(Default)]
struct NormalOrderCache {
    table: HashMap<(u32, u32), BTreeMap<Powers, f64>>,
}

impl NormalOrderCache {
    fn get(&mut self, s: u32, r: u32) -> BTreeMap<Powers, f64> {
        if let Some(v) = self.table.get(&(s, r)) {
            return v.clone();
        }
        let result = if s == 0 || r == 0 {
            BTreeMap::from([((r, s), 1.0)])
        } else {
            // a^s (a†)^r = a^(s-1) [a (a†)^r] = a^(s-1) (a†)^r · a + r · a^(s-1) (a†)^(r-1)
            let mut out = BTreeMap::new();
            for ((i, j), w) in self.get(s - 1, r) {
                *out.entry((i, j + 1)).or_insert(0.0) += w;
            }
            for ((i, j), w) in self.get(s - 1, r - 1) {
                *out.entry((i, j)).or_insert(0.0) += r as f64 * w;
            }
            out
        };
        self.table.insert((s, r), result.clone());
        result
    }
}

impl<'a> Add<&'a LadderPolynomial> for &'a LadderPolynomial {
    type Output = LadderPolynomial;
    fn add(self, rhs: &'a LadderPolynomial) -> LadderPolynomial {
        LadderPolynomial::add(self, rhs)
    }
}

impl<'a> Sub<&'a LadderPolynomial> for &'a LadderPolynomial {
    type Output = LadderPolynomial;
    fn sub(self, rhs: &'a LadderPolynomial) -> LadderPolynomial {
        LadderPolynomial::sub(self, rhs)
    }
}

impl<'a> Mul<&'a LadderPolynomial> for &'a LadderPolynomial {
    type Output = LadderPolynomial;
    fn mul(self, rhs: &'a LadderPolynomial) -> LadderPolynomial {
        self.multiply(rhs)
    }
}

impl Neg for &LadderPolynomial {
    type Output = LadderPolynomial;
    fn neg(self) -> LadderPolynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl fmt::Display for LadderPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, ((r, s), c)) in self.terms().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)", c.re, c.im)?;
            match r {
                0 => {}
                1 => write!(f, " a†")?,
                _ => write!(f, " a†^{r}")?,
            }
            match s {
                0 => {}
                1 => write!(f, " a")?,
                _ => write!(f, " a^{s}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn a() -> LadderPolynomial {
        LadderPolynomial::annihilation()
    }

    fn ad() -> LadderPolynomial {
        LadderPolynomial::creation()
    }

    #[test]
    fn add_identity_and_doubling() {
        assert_eq!(a().add(&LadderPolynomial::zero()), a());
        assert_eq!(ad().add(&ad()), LadderPolynomial::monomial(1, 0, c(2.0)));
        let n = LadderPolynomial::number();
        assert!(n.add(&n.scale(c(-1.0))).is_zero());
    }

    #[test]
    fn multiply_reorders() {
        let expected = LadderPolynomial::from_terms([((1, 1), c(1.0)), ((0, 0), c(1.0))]);
        assert_eq!(a().multiply(&ad()), expected);
        assert_eq!(ad().multiply(&a()), LadderPolynomial::number());
    }

    // Oracle: the same product on a dim-10 truncation, compared on the unpolluted block.
    #[test]
    fn a2_adag2_matches_matrix_product() {
        let a2 = a().pow(2);
        let ad2 = ad().pow(2);
        let expected = LadderPolynomial::from_terms([
            ((2, 2), c(1.0)),
            ((1, 1), c(4.0)),
            ((0, 0), c(2.0)),
        ]);
        assert_eq!(a2.multiply(&ad2), expected);

        let dim = 10;
        let am = a().to_matrix(dim);
        let adm = ad().to_matrix(dim);
        let brute = am.matmul(&am).matmul(&adm).matmul(&adm);
        let algebra = expected.to_matrix(dim);
        for m in 0..dim - 2 {
            for n in 0..dim - 2 {
                assert!((brute.get(m, n) - algebra.get(m, n)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn commutators() {
        assert_eq!(a().commutator(&ad()), LadderPolynomial::one());
        let n = LadderPolynomial::number();
        assert_eq!(n.commutator(&ad()), ad());
        assert!(n.commutator(&n).is_zero());

        let dim = 10;
        let nm = n.to_matrix(dim);
        let adm = ad().to_matrix(dim);
        let brute = nm.matmul(&adm).sub(&adm.matmul(&nm));
        let algebra = ad().to_matrix(dim);
        for m in 0..dim - 1 {
            for k in 0..dim - 1 {
                assert!((brute.get(m, k) - algebra.get(m, k)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn adjoints() {
        assert_eq!(a().adjoint(), ad());
        let i1 = LadderPolynomial::scalar(Complex64::new(0.0, 1.0));
        assert_eq!(i1.adjoint(), LadderPolynomial::scalar(Complex64::new(0.0, -1.0)));
        assert_eq!(a().pow(2).adjoint(), ad().pow(2));
    }

    #[test]
    fn matrix_elements() {
        let ad2 = ad().pow(2);
        assert!((ad2.matrix_element(4, 2) - c(12f64.sqrt())).norm() < 1e-15);
        assert!((ad2.matrix_element(4, 2).re - 3.4641016).abs() < 1e-7);
        let h_n = ad2.scale(c(-0.6));
        assert_eq!(h_n.matrix_element(0, 2), c(0.0));
        for n in 0..8 {
            assert_eq!(LadderPolynomial::one().matrix_element(n, n), c(1.0));
        }
    }

    #[test]
    fn small_matrices() {
        let nm = LadderPolynomial::number().to_matrix(3);
        for m in 0..3 {
            for n in 0..3 {
                let want = if m == n { m as f64 } else { 0.0 };
                assert_eq!(nm.get(m, n), c(want));
            }
        }
        let am = a().to_matrix(3);
        assert_eq!(am.get(0, 1), c(1.0));
        assert!((am.get(1, 2) - c(2f64.sqrt())).norm() < 1e-15);
        assert_eq!(am.get(1, 0), c(0.0));
        assert_eq!(am.get(0, 2), c(0.0));
    }

    #[test]
    fn tiny_coefficients_dropped() {
        let p = LadderPolynomial::from_terms([((1, 0), c(1e-17)), ((0, 1), c(1.0))]);
        assert_eq!(p, a());
    }

    #[test]
    fn display_is_stable() {
        let p = a().multiply(&ad());
        assert_eq!(p.to_string(), "(1+0i) + (1+0i) a† a");
    }
}
