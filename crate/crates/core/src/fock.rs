//! Vectors in the Fock space F² written against the orthonormal monomials
//! `e_n(z) = z^n / sqrt(n!)`, truncated at degree N.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{FockError, Result};
use crate::special::poisson_tail;

/// Largest `|z|²/2` for which `e^{|z|²/2}` is a finite double.
const MAX_HALF_MODULUS_SQ: f64 = 709.0;

/// Coefficients `c_0..c_N` of an entire function against `e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coeffs: Vec<Complex64>,
}

impl FockVector {
    /// Builds a vector from coefficients. An empty slice is the zero vector of degree 0.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self::zeros(0);
        }
        Self { coeffs }
    }

    pub fn zeros(degree: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); degree + 1],
        }
    }

    /// The basis monomial `e_n` embedded at truncation `degree`.
    pub fn basis(n: usize, degree: usize) -> Self {
        let mut v = Self::zeros(degree.max(n));
        v.coeffs[n] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `e_n`, zero beyond the truncation.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Zero-pads (or truncates) to the given degree.
    pub fn resized(&self, degree: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(degree + 1, Complex64::new(0.0, 0.0));
        Self { coeffs: c }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Coefficient-wise sum, zero-padding the shorter operand.
    pub fn add(&self, other: &Self) -> Self {
        let degree = self.degree().max(other.degree());
        Self {
            coeffs: (0..=degree).map(|n| self.coeff(n) + other.coeff(n)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Largest coefficient-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let degree = self.degree().max(other.degree());
        (0..=degree)
            .map(|n| (self.coeff(n) - other.coeff(n)).norm())
            .fold(0.0, f64::max)
    }
}

impl Serialize for FockVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FockVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        if pairs.is_empty() {
            return Err(serde::de::Error::custom("empty coefficient array"));
        }
        Ok(Self::new(
            pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
        ))
    }
}

/// `Σ c_n(f) conj(c_n(g))`, zero-padding the shorter vector.
pub fn inner(f: &FockVector, g: &FockVector) -> Complex64 {
    f.coeffs.iter().zip(g.coeffs.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// Evaluates `Σ c_n z^n / sqrt(n!)` with the term recurrence `t_{n+1} = t_n z / sqrt(n+1)`.
pub fn eval(f: &FockVector, z: Complex64) -> Result<Complex64> {
    if z.norm_sqr() / 2.0 > MAX_HALF_MODULUS_SQ {
        return Err(FockError::Range(format!(
            "|z|^2/2 = {} exceeds the exponent range",
            z.norm_sqr() / 2.0
        )));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, c) in f.coeffs.iter().enumerate() {
        sum += c * term;
        term = term * z / ((n + 1) as f64).sqrt();
    }
    Ok(sum)
}

/// `f(z) e^{-|z|²/2}` without overflow for any `z`; the Fock-space weighted modulus.
pub fn eval_weighted(f: &FockVector, z: Complex64) -> Complex64 {
    const RESCALE: f64 = 1e200;
    let mut log_scale = 0.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, c) in f.coeffs.iter().enumerate() {
        sum += c * term;
        term = term * z / ((n + 1) as f64).sqrt();
        if term.norm() > RESCALE {
            term /= RESCALE;
            sum /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    sum * (log_scale - z.norm_sqr() / 2.0).exp()
}

/// Reproducing kernel `K(·,a)` or its unit-normalized version `k_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub a: Complex64,
    pub normalized: bool,
}

impl KernelPoint {
    pub fn new(a: Complex64, normalized: bool) -> Self {
        Self { a, normalized }
    }

    pub fn vector(&self, degree: usize) -> FockVector {
        kernel_vector(self.a, degree, self.normalized)
    }

    /// `1 - ‖k_a truncated at N‖²`, the Poisson tail of `|a|²`.
    pub fn truncation_defect(&self, degree: usize) -> f64 {
        poisson_tail(self.a.norm_sqr(), degree)
    }
}

/// Coefficients `s · conj(a)^n / sqrt(n!)` with `s = e^{-|a|²/2}` when normalized.
///
/// Moduli are accumulated in log form so that neither `|a|^n` nor the
/// normalizing exponential is ever materialized on its own.
pub fn kernel_vector(a: Complex64, degree: usize, normalized: bool) -> FockVector {
    let r2 = a.norm_sqr();
    let mut coeffs = Vec::with_capacity(degree + 1);
    if r2 == 0.0 {
        coeffs.push(Complex64::new(1.0, 0.0));
        coeffs.resize(degree + 1, Complex64::new(0.0, 0.0));
        return FockVector { coeffs };
    }
    let ln_r = 0.5 * r2.ln();
    let phase = a.conj() / a.norm();
    let mut ln_mod = if normalized { -r2 / 2.0 } else { 0.0 };
    let mut ph = Complex64::new(1.0, 0.0);
    for n in 0..=degree {
        if n > 0 {
            ln_mod += ln_r - 0.5 * (n as f64).ln();
            ph *= phase;
        }
        coeffs.push(ph * ln_mod.exp());
    }
    FockVector { coeffs }
}
