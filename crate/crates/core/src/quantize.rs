//! Toeplitz operators `T_φ f = P(φ f)` with polynomial symbols, their
//! anti-Wick realization as ordered products of `D` and `M`, and the Weyl
//! quantization of the heat-smoothed symbol.
//!
//! A [`PolySymbol`] stores `Σ a_{mn} z̄^m z^n`: `m` counts antiholomorphic
//! powers, `n` holomorphic ones.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::operator::{Basis, OperatorMatrix};
use crate::ops::md_matrices;
use crate::special::sqrt_factorial_ratio;

/// Highest total degree accepted by [`weyl_quantize_poly`].
pub const WEYL_MAX_DEGREE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct TermJson {
    m: usize,
    n: usize,
    re: f64,
    im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SymbolJson {
    terms: Vec<TermJson>,
}

/// Polynomial `Σ a_{mn} z̄^m z^n` with finitely many nonzero terms.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "SymbolJson", into = "SymbolJson")]
pub struct PolySymbol {
    terms: BTreeMap<(usize, usize), Complex64>,
}

impl From<SymbolJson> for PolySymbol {
    fn from(raw: SymbolJson) -> Self {
        let mut s = PolySymbol::default();
        for t in raw.terms {
            s.add_term(t.m, t.n, Complex64::new(t.re, t.im));
        }
        s
    }
}

impl From<PolySymbol> for SymbolJson {
    fn from(s: PolySymbol) -> Self {
        SymbolJson {
            terms: s
                .terms
                .iter()
                .map(|(&(m, n), c)| TermJson {
                    m,
                    n,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl PolySymbol {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `a z̄^m z^n`.
    pub fn monomial(m: usize, n: usize, a: Complex64) -> Self {
        let mut s = Self::default();
        s.add_term(m, n, a);
        s
    }

    pub fn constant(a: f64) -> Self {
        Self::monomial(0, 0, Complex64::new(a, 0.0))
    }

    /// Polynomial in `x = Re z` and `ζ = Im z` from `(x power, ζ power, coefficient)`.
    pub fn from_x_zeta(terms: &[(usize, usize, Complex64)]) -> Self {
        let half = Complex64::new(0.5, 0.0);
        // x = (z + z̄)/2, ζ = (z - z̄)/(2i)
        let x = Self::monomial(0, 1, half).add(&Self::monomial(1, 0, half));
        let zeta = Self::monomial(0, 1, Complex64::new(0.0, -0.5)).add(&Self::monomial(1, 0, Complex64::new(0.0, 0.5)));
        let mut out = Self::default();
        for &(p, q, c) in terms {
            let mut t = Self::constant(1.0);
            for _ in 0..p {
                t = t.mul(&x);
            }
            for _ in 0..q {
                t = t.mul(&zeta);
            }
            out = out.add(&t.scale(c));
        }
        out
    }

    pub fn add_term(&mut self, m: usize, n: usize, a: Complex64) {
        let e = self.terms.entry((m, n)).or_insert(Complex64::new(0.0, 0.0));
        *e += a;
        if *e == Complex64::new(0.0, 0.0) {
            self.terms.remove(&(m, n));
        }
    }

    /// Nonzero terms `((m, n), a_{mn})` in index order.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn coeff(&self, m: usize, n: usize) -> Complex64 {
        self.terms.get(&(m, n)).copied().unwrap_or_default()
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|&(m, n)| m + n).max().unwrap_or(0)
    }

    /// `a_{mn} = conj(a_{nm})` for every pair, i.e. the symbol is real-valued.
    pub fn is_real(&self) -> bool {
        self.terms
            .iter()
            .all(|(&(m, n), &a)| (a - self.coeff(n, m).conj()).norm() <= 1e-15 * a.norm())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(m, n), &a)| a * z.conj().powu(m as u32) * z.powu(n as u32))
            .sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(m, n), &a) in &other.terms {
            out.add_term(m, n, a);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::default();
        for (&(m, n), &a) in &self.terms {
            out.add_term(m, n, a * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(m1, n1), &a) in &self.terms {
            for (&(m2, n2), &b) in &other.terms {
                out.add_term(m1 + m2, n1 + n2, a * b);
            }
        }
        out
    }

    /// `φ(w) ↦ φ(w̄)`: swaps holomorphic and antiholomorphic powers.
    pub fn conjugate_argument(&self) -> Self {
        let mut out = Self::default();
        for (&(m, n), &a) in &self.terms {
            out.add_term(n, m, a);
        }
        out
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Matrix of `T_{z̄^m z^n}` on `e_0..e_N`: entry `(k, j)` is
/// `δ_{n+j, m+k} (n+j)! / √(j! k!)`.
pub fn toeplitz_monomial_matrix(m: usize, n: usize, degree: usize) -> Result<OperatorMatrix> {
    if m + n > degree {
        return Err(FockError::Degree(format!("z̄^{m} z^{n} needs degree ≥ {}", m + n)));
    }
    let dim = degree + 1;
    let mut t = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..dim {
        let s = n + j;
        if s < m || s - m > degree {
            continue;
        }
        let k = s - m;
        // s!/sqrt(j! k!) = (s!/hi!) sqrt(hi!/lo!), integer products exact while small
        let (lo, hi) = (j.min(k), j.max(k));
        let whole: f64 = (hi + 1..=s).map(|i| i as f64).product();
        t[(k, j)] = Complex64::new(whole * sqrt_factorial_ratio(hi, lo), 0.0);
    }
    Ok(OperatorMatrix::new(format!("T[zbar^{m} z^{n}]"), Basis::FockE, t))
}

/// `T_φ` for a polynomial symbol, summed over its monomials.
pub fn toeplitz_matrix(phi: &PolySymbol, degree: usize) -> Result<OperatorMatrix> {
    let mut out = OperatorMatrix::zeros("T", Basis::FockE, degree);
    for ((m, n), a) in phi.terms() {
        let t = toeplitz_monomial_matrix(m, n, degree)?;
        out = out.add(&t.scale(a));
    }
    Ok(out)
}

fn powers(a: &OperatorMatrix, k: usize) -> OperatorMatrix {
    (0..k).fold(OperatorMatrix::identity(a.degree()), |acc, _| acc.compose(a))
}

/// `Σ a_{mn} Dⁿ M^m`, built on a padded space and cropped so that no mass
/// is lost at the truncation edge.
pub fn anti_wick_matrix(sigma: &PolySymbol, degree: usize) -> Result<OperatorMatrix> {
    let deg = sigma.total_degree();
    if 2 * deg > degree {
        return Err(FockError::Degree(format!(
            "symbol degree {deg} exceeds N/2 = {}",
            degree / 2
        )));
    }
    let padded = degree + deg;
    let (m_op, d_op) = md_matrices(padded);
    let mut out = OperatorMatrix::zeros("anti-wick", Basis::FockE, padded);
    for ((m, n), a) in sigma.terms() {
        let term = powers(&d_op, n).compose(&powers(&m_op, m));
        out = out.add(&term.scale(a));
    }
    Ok(out.cropped(degree).with_name("anti-wick"))
}

/// Interior-block max difference between the anti-Wick operator of `σ` and
/// the Toeplitz operator of `φ(z) = σ(z̄, z)`.
pub fn verify_anti_wick(sigma: &PolySymbol, degree: usize) -> Result<f64> {
    let aw = anti_wick_matrix(sigma, degree)?;
    let t = toeplitz_matrix(&sigma.conjugate_argument(), degree)?;
    Ok(aw.block_max_diff(&t, degree + 1 - sigma.total_degree()))
}

/// `σ(z) = (2/π) ∫ φ(w̄) e^{-2|z-w|²} dA(w)` in closed form, using
/// `(2/π) ∫ v^p v̄^q e^{-2|v|²} dA = δ_{pq} p!/2^p`.
pub fn heat_symbol(phi: &PolySymbol) -> PolySymbol {
    let mut out = PolySymbol::default();
    for ((m, n), a) in phi.terms() {
        // φ(w̄) contributes a w^m w̄^n; expand around z and keep the diagonal moments
        let mut jf = 1.0;
        for j in 0..=m.min(n) {
            if j > 0 {
                jf *= j as f64 / 2.0;
            }
            let c = binomial(m, j) * binomial(n, j) * jf;
            out.add_term(n - j, m - j, a * c);
        }
    }
    out
}

/// Matrices of `X f = x f` and `D f = f'/(2i)` on `h_0..h_N`.
pub fn position_momentum_matrices(degree: usize) -> (OperatorMatrix, OperatorMatrix) {
    let (m, d) = md_matrices(degree);
    let x = m
        .add(&d)
        .scale(Complex64::new(0.5, 0.0))
        .with_name("X")
        .with_basis(Basis::LineH);
    let p = d
        .sub(&m)
        .scale(Complex64::new(0.0, -0.5))
        .with_name("D")
        .with_basis(Basis::LineH);
    (x, p)
}

/// Weyl quantization of `σ(z)`, `z = x + iζ`, as a matrix on `h_0..h_N`, with
/// `x ↦ X`, `ζ ↦ D` and mixed products fully symmetrized.
pub fn weyl_quantize_poly(sigma: &PolySymbol, degree: usize) -> Result<OperatorMatrix> {
    let deg = sigma.total_degree();
    if deg > WEYL_MAX_DEGREE {
        return Err(FockError::Unsupported(format!(
            "Weyl quantization implemented up to degree {WEYL_MAX_DEGREE}, symbol has degree {deg}"
        )));
    }
    let padded = degree + deg;
    let (x, p) = position_momentum_matrices(padded);
    let i = Complex64::new(0.0, 1.0);
    let z = x.add(&p.scale(i));
    let zbar = x.sub(&p.scale(i));
    let mut out = OperatorMatrix::zeros("weyl", Basis::LineH, padded);
    for ((m, n), a) in sigma.terms() {
        let op = match (m, n) {
            (0, 0) => OperatorMatrix::identity(padded),
            (0, 1) => z.clone(),
            (1, 0) => zbar.clone(),
            (0, 2) => z.compose(&z),
            (2, 0) => zbar.compose(&zbar),
            (1, 1) => z.compose(&zbar).add(&zbar.compose(&z)).scale(Complex64::new(0.5, 0.0)),
            _ => unreachable!("degree checked above"),
        };
        out = out.add(&op.scale(a));
    }
    Ok(out.cropped(degree).with_name("weyl").with_basis(Basis::LineH))
}

/// Interior-block max difference between `T_φ` and the Weyl quantization of
/// the heat-smoothed symbol, read in the `e_n` basis through `h_n ↦ e_n`.
pub fn verify_weyl_heat(phi: &PolySymbol, degree: usize) -> Result<f64> {
    let t = toeplitz_matrix(phi, degree)?;
    let w = weyl_quantize_poly(&heat_symbol(phi), degree)?.with_basis(Basis::FockE);
    Ok(t.block_max_diff(&w, degree + 1 - phi.total_degree()))
}
