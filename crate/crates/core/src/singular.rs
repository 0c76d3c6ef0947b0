//! Singular integral operators `S_φ f(z) = ∫ f(w) e^{z w̄} φ(z - w̄) dλ(w)` on F²
//! and the Fock-space form of the Hilbert transform.
//!
//! Differentiating the reproducing identity gives
//! `∫ f(w) w̄^j e^{z w̄} dλ(w) = f^{(j)}(z)`, so expanding `φ(z - w̄)` binomially
//! yields the normal-ordered form `S_φ = Σ_k φ_k Σ_j C(k,j) (-1)^j M^{k-j} D^j`.
//! In the monomial basis this is
//!
//! `⟨S_φ e_n, e_p⟩ = sqrt(p!/n!) Σ_j (-1)^j C(n,j) φ_{p-n+2j} (p-n+2j)! / (p-n+j)!`.
//!
//! The alternating sum cancels by many orders of magnitude (for `e^{u²/4}` at
//! `N = 64` the f64 sum is off by ~1e4), so it is evaluated exactly over the
//! integers and rounded once.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::exact::{dyadic, dyadic_complex_slice, factorials, ldexp, ratio_parts, GaussInt};
use crate::fock::{kernel_vector, FockVector};
use crate::operator::{Basis, OperatorMatrix};
use crate::quadrature::composite_legendre;
use crate::special::{ln_factorial, sqrt_factorial_ratio};

/// Seed of the start vector for [`boundedness_probe`].
pub const PROBE_SEED: u64 = 0x5eed_f0c5;

/// Power iterations used by [`boundedness_probe`].
pub const PROBE_ITERATIONS: usize = 200;

/// Where the Taylor coefficients of a symbol come from.
///
/// Closed families keep their coefficients exact (rational) all the way into
/// the matrix build; `Taylor` coefficients are taken as the exact binary
/// values of the given doubles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SymbolFamily {
    /// Explicit `φ_0..φ_K`.
    Taylor { coeffs: Vec<Complex64> },
    /// `e^{a u²}`.
    Gaussian { a: f64 },
    /// `e^{b u}`.
    Exponential { b: Complex64 },
    /// `Σ s^n u^{2n+1} / ((2n+1) n!)`, the antiderivative of `e^{s u²}` vanishing at 0.
    OddAntiderivative { s: f64 },
}

/// An entire function `φ = prefactor · family`.
///
/// In JSON `name` and `prefactor` may be omitted (defaults `""` and `1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntireSymbol {
    #[serde(default)]
    pub name: String,
    pub family: SymbolFamily,
    #[serde(default = "unit")]
    pub prefactor: Complex64,
}

fn unit() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl EntireSymbol {
    pub fn taylor(name: impl Into<String>, coeffs: Vec<Complex64>) -> Self {
        Self {
            name: name.into(),
            family: SymbolFamily::Taylor { coeffs },
            prefactor: Complex64::new(1.0, 0.0),
        }
    }

    pub fn from_real(name: impl Into<String>, coeffs: &[f64]) -> Self {
        Self::taylor(name, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn gaussian(a: f64) -> Self {
        Self {
            name: format!("exp({a} u^2)"),
            family: SymbolFamily::Gaussian { a },
            prefactor: Complex64::new(1.0, 0.0),
        }
    }

    pub fn exponential(b: Complex64) -> Self {
        Self {
            name: format!("exp(({b}) u)"),
            family: SymbolFamily::Exponential { b },
            prefactor: Complex64::new(1.0, 0.0),
        }
    }

    pub fn with_prefactor(mut self, s: Complex64) -> Self {
        self.prefactor *= s;
        self
    }

    /// Highest nonzero degree for polynomial symbols, `None` for entire families.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match &self.family {
            SymbolFamily::Taylor { coeffs } => Some(coeffs.iter().rposition(|c| *c != Complex64::zero()).unwrap_or(0)),
            _ => None,
        }
    }

    /// `prefactor · φ_k` for `k = 0..=max_degree`, in floating point.
    pub fn coeffs(&self, max_degree: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); max_degree + 1];
        match &self.family {
            SymbolFamily::Taylor { coeffs } => {
                for (o, c) in out.iter_mut().zip(coeffs) {
                    *o = *c;
                }
            }
            SymbolFamily::Gaussian { a } => {
                for i in 0..=max_degree / 2 {
                    out[2 * i] = Complex64::new(signed_ln_term(*a, i, ln_factorial(i)), 0.0);
                }
            }
            SymbolFamily::Exponential { b } => {
                let mut t = Complex64::new(1.0, 0.0);
                for (k, o) in out.iter_mut().enumerate() {
                    if k > 0 {
                        t = t * b / k as f64;
                    }
                    *o = t;
                }
            }
            SymbolFamily::OddAntiderivative { s } => {
                for n in 0..max_degree.saturating_sub(1) / 2 + usize::from(max_degree >= 1) {
                    let k = 2 * n + 1;
                    if k > max_degree {
                        break;
                    }
                    let v = signed_ln_term(*s, n, ln_factorial(n)) / k as f64;
                    out[k] = Complex64::new(v, 0.0);
                }
            }
        }
        out.iter().map(|c| c * self.prefactor).collect()
    }

    /// `φ(u)`.
    pub fn eval(&self, u: Complex64) -> Complex64 {
        let core = match &self.family {
            SymbolFamily::Taylor { coeffs } => coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * u + c),
            SymbolFamily::Gaussian { a } => (u * u * *a).exp(),
            SymbolFamily::Exponential { b } => (u * b).exp(),
            SymbolFamily::OddAntiderivative { s } => {
                let u2 = u * u * *s;
                let mut pow = u;
                let mut sum = Complex64::zero();
                let mut n = 0usize;
                loop {
                    let term = pow / (2 * n + 1) as f64;
                    sum += term;
                    if term.norm() <= 1e-17 * sum.norm() && n > 2 {
                        break;
                    }
                    n += 1;
                    pow = pow * u2 / n as f64;
                    if n > 10_000 {
                        break;
                    }
                }
                sum
            }
        };
        core * self.prefactor
    }

    /// Ratio of consecutive nonzero terms of `Σ |φ_n|² n!` near degree `k`. A
    /// value below 1 is the ratio-test evidence that `φ ∈ F²`.
    pub fn membership_ratio(&self, k: usize) -> f64 {
        let c = self.coeffs(k + 4);
        let terms: Vec<f64> = c
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(n, v)| 2.0 * v.norm().ln() + ln_factorial(n))
            .collect();
        if terms.len() < 2 {
            return 0.0;
        }
        (terms[terms.len() - 1] - terms[terms.len() - 2]).exp()
    }

    /// `(numerators, denominator)` with `φ_k = num_k / den` exactly, `k ≤ max_degree`,
    /// excluding the prefactor.
    fn exact_coeffs(&self, max_degree: usize) -> (Vec<GaussInt>, BigInt) {
        let kk = max_degree;
        match &self.family {
            SymbolFamily::Taylor { coeffs } => {
                let mut v: Vec<Complex64> = coeffs.iter().take(kk + 1).copied().collect();
                v.resize(kk + 1, Complex64::zero());
                let (ints, s) = dyadic_complex_slice(&v);
                (ints, BigInt::one() << s)
            }
            SymbolFamily::Gaussian { a } => {
                let (m, e) = dyadic(*a);
                let top = kk / 2;
                let s = ((-e).max(0) as usize) * top;
                let fact = factorials(top);
                let mut nums = vec![GaussInt::zero(); kk + 1];
                let mut mp = BigInt::one();
                for i in 0..=top {
                    let shift = (e * i as i64 + s as i64) as usize;
                    let re = (&mp << shift) * (&fact[top] / &fact[i]);
                    nums[2 * i] = GaussInt::new(re, BigInt::zero());
                    mp *= &m;
                }
                (nums, (BigInt::one() << s) * &fact[top])
            }
            SymbolFamily::Exponential { b } => {
                let (g, s0) = dyadic_complex_slice(&[*b]);
                let g = g.into_iter().next().unwrap_or_default();
                let fact = factorials(kk);
                let mut nums = Vec::with_capacity(kk + 1);
                let mut gp = GaussInt::new(BigInt::one(), BigInt::zero());
                for k in 0..=kk {
                    let scale = &fact[kk] / &fact[k];
                    nums.push(gp.shl(s0 * (kk - k)).scale(&scale));
                    gp = gp.mul(&g);
                }
                (nums, (BigInt::one() << (s0 * kk)) * &fact[kk])
            }
            SymbolFamily::OddAntiderivative { s } => {
                let mut nums = vec![GaussInt::zero(); kk + 1];
                if kk == 0 {
                    return (nums, BigInt::one());
                }
                let (m, e) = dyadic(*s);
                let top = (kk - 1) / 2;
                let sh = ((-e).max(0) as usize) * top;
                let fact = factorials(top);
                let odd: BigInt = (0..=top).map(|n| BigInt::from(2 * n + 1)).product();
                let mut mp = BigInt::one();
                for n in 0..=top {
                    let shift = (e * n as i64 + sh as i64) as usize;
                    let re = (&mp << shift) * (&fact[top] / &fact[n]) * (&odd / BigInt::from(2 * n + 1));
                    nums[2 * n + 1] = GaussInt::new(re, BigInt::zero());
                    mp *= &m;
                }
                (nums, (BigInt::one() << sh) * &fact[top] * odd)
            }
        }
    }
}

/// `x^i / i!` (with `ln i!` supplied) evaluated in log form.
fn signed_ln_term(x: f64, i: usize, ln_fact: f64) -> f64 {
    if i == 0 {
        return 1.0;
    }
    if x == 0.0 {
        return 0.0;
    }
    let sign = if x < 0.0 && i % 2 == 1 { -1.0 } else { 1.0 };
    sign * (i as f64 * x.abs().ln() - ln_fact).exp()
}

/// `A(z) = ∫_0^z e^{u²} du = Σ z^{2n+1} / ((2n+1) n!)`, up to degree `k`.
pub fn antiderivative_coeffs(max_degree: usize) -> Result<EntireSymbol> {
    if max_degree < 1 {
        return Err(FockError::Precondition("antiderivative needs degree at least 1".into()));
    }
    let full = EntireSymbol {
        name: "A".into(),
        family: SymbolFamily::OddAntiderivative { s: 1.0 },
        prefactor: Complex64::new(1.0, 0.0),
    };
    Ok(EntireSymbol::taylor("A", full.coeffs(max_degree)))
}

/// `φ(u) = -(2/sqrt(π)) A(u/sqrt(2))`, the symbol of the Hilbert transform.
pub fn hilbert_symbol() -> EntireSymbol {
    EntireSymbol {
        name: "hilbert".into(),
        family: SymbolFamily::OddAntiderivative { s: 0.5 },
        prefactor: Complex64::new(-(2.0 / std::f64::consts::PI).sqrt(), 0.0),
    }
}

/// Two independent summations of `‖A(z/sqrt 2)‖²_{F²}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormOfA {
    /// `½ Σ_{n<terms} (2n+1)! / ((2n+1)² 4ⁿ (n!)²)`.
    pub series: f64,
    /// Squared norm of the monomial coefficients of `A(z/sqrt 2)`.
    pub coefficient_path: f64,
    /// Upper bound on the omitted tail, from terms `≤ 1/(4 sqrt(π) n^{3/2})`.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Coefficients of `A(z/sqrt 2)` against `e_n`, first `terms` odd entries.
pub fn a_half_fock(terms: usize) -> FockVector {
    let mut c = vec![Complex64::zero(); 2 * terms.max(1)];
    // r_n = sqrt((2n+1)!) / (n! 2^n), r_{n+1}/r_n = sqrt((2n+2)(2n+3)) / (2(n+1))
    let mut r = 1.0f64;
    for n in 0..terms {
        c[2 * n + 1] = Complex64::new(r / ((2 * n + 1) as f64 * std::f64::consts::SQRT_2), 0.0);
        let nf = n as f64;
        r *= ((2.0 * nf + 2.0) * (2.0 * nf + 3.0)).sqrt() / (2.0 * (nf + 1.0));
    }
    FockVector::new(c)
}

pub fn fock_norm_a(terms: usize) -> NormOfA {
    let terms = terms.max(1);
    let mut q = 1.0f64;
    let mut series = 0.0;
    for n in 0..terms {
        let k = (2 * n + 1) as f64;
        series += 0.5 * q / (k * k);
        q *= (2.0 * n as f64 + 3.0) / (2.0 * (n as f64 + 1.0));
    }
    let coefficient_path = a_half_fock(terms).norm_sqr();
    let tail_bound = if terms >= 2 {
        1.0 / (2.0 * std::f64::consts::PI.sqrt() * ((terms - 1) as f64).sqrt())
    } else {
        f64::INFINITY
    };
    NormOfA {
        series,
        coefficient_path,
        tail_bound,
        terms,
    }
}

/// Partial sums of the series for `‖A(z/sqrt 2)‖²`.
pub fn fock_norm_a_partial_sums(terms: usize) -> Vec<f64> {
    let mut q = 1.0f64;
    let mut acc = 0.0;
    (0..terms)
        .map(|n| {
            let k = (2 * n + 1) as f64;
            acc += 0.5 * q / (k * k);
            q *= (2.0 * n as f64 + 3.0) / (2.0 * (n as f64 + 1.0));
            acc
        })
        .collect()
}

/// Matrix of `S_φ` on `e_0..e_N`, exact up to one final rounding per entry.
///
/// Only `φ_0..φ_{2N}` reach this block, so entire families are cut at `2N`;
/// polynomial symbols of higher degree are rejected.
pub fn s_phi_matrix(phi: &EntireSymbol, degree: usize) -> Result<OperatorMatrix> {
    let kmax = 2 * degree;
    if let Some(d) = phi.polynomial_degree() {
        if d > kmax {
            return Err(FockError::Degree(format!("symbol degree {d} exceeds 2N = {kmax}")));
        }
    }
    let (nums, den) = phi.exact_coeffs(kmax);
    // falling[k][j] = k! / (k-j)!
    let mut falling: Vec<Vec<BigInt>> = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let mut row = Vec::with_capacity(k + 1);
        let mut acc = BigInt::one();
        row.push(acc.clone());
        for j in 0..k {
            acc *= BigInt::from(k - j);
            row.push(acc.clone());
        }
        falling.push(row);
    }
    let dim = degree + 1;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let mut binom: Vec<BigInt> = vec![BigInt::one()];
    for n in 0..dim {
        if n > 0 {
            let mut next = vec![BigInt::one(); n + 1];
            for j in 1..n {
                next[j] = &binom[j - 1] + &binom[j];
            }
            binom = next;
        }
        for p in 0..dim {
            let mut acc = GaussInt::zero();
            let j0 = n.saturating_sub(p);
            for j in j0..=n {
                let k = p + 2 * j - n;
                if nums[k].is_zero() {
                    continue;
                }
                let term = nums[k].scale(&(&binom[j] * &falling[k][j]));
                if j % 2 == 0 {
                    acc.add_assign(&term);
                } else {
                    acc.sub_assign(&term);
                }
            }
            if acc.is_zero() {
                continue;
            }
            let w = sqrt_factorial_ratio(p, n);
            let (mr, er) = ratio_parts(&acc.re, &den);
            let (mi, ei) = ratio_parts(&acc.im, &den);
            m[(p, n)] = Complex64::new(ldexp(mr * w, er), ldexp(mi * w, ei)) * phi.prefactor;
        }
    }
    Ok(OperatorMatrix::new(format!("S[{}]", phi.name), Basis::FockE, m))
}

/// Fock-side Hilbert transform on `e_0..e_N`.
pub fn hilbert_fock_matrix(degree: usize) -> Result<OperatorMatrix> {
    Ok(s_phi_matrix(&hilbert_symbol(), degree)?.with_name("hilbert"))
}

/// `(⟨S_φ k_z, k_z⟩, φ(z - z̄))`; requires `|z| ≤ sqrt(N)/2`.
pub fn berezin_check(phi: &EntireSymbol, z: Complex64, degree: usize) -> Result<(Complex64, Complex64)> {
    if z.norm() > (degree as f64).sqrt() / 2.0 + 1e-12 {
        return Err(FockError::Precondition(format!(
            "|z| = {} exceeds sqrt(N)/2 = {}",
            z.norm(),
            (degree as f64).sqrt() / 2.0
        )));
    }
    let s = s_phi_matrix(phi, degree)?;
    Ok(berezin_with_matrix(&s, phi, z))
}

/// [`berezin_check`] against a prebuilt matrix.
pub fn berezin_with_matrix(s: &OperatorMatrix, phi: &EntireSymbol, z: Complex64) -> (Complex64, Complex64) {
    let k = kernel_vector(z, s.degree(), true);
    let kv = DVector::from_column_slice(k.coeffs());
    let lhs = (kv.adjoint() * s.entries() * &kv)[(0, 0)];
    let rhs = phi.eval(z - z.conj());
    (lhs, rhs)
}

/// Spectral-norm estimate of a matrix by power iteration on `A*A` from a
/// seeded random start.
pub fn spectral_norm_estimate(a: &DMatrix<Complex64>, iterations: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = a.ncols();
    let mut v = DVector::<Complex64>::from_fn(n, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let nv = v.norm();
    if nv == 0.0 {
        return 0.0;
    }
    v /= Complex64::new(nv, 0.0);
    let ah = a.adjoint();
    let mut est = 0.0;
    for _ in 0..iterations {
        let av = a * &v;
        est = av.norm();
        let w = &ah * av;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        v = w / Complex64::new(nw, 0.0);
    }
    est
}

/// Norm estimates of `S_φ` at each truncation in `degrees`.
pub fn boundedness_probe(phi: &EntireSymbol, degrees: &[usize]) -> Result<Vec<f64>> {
    degrees
        .iter()
        .map(|&n| {
            let s = s_phi_matrix(phi, n)?;
            Ok(spectral_norm_estimate(s.entries(), PROBE_ITERATIONS, PROBE_SEED))
        })
        .collect()
}

/// Shape of a sequence of norm estimates taken at increasing degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Bounded,
    Growing,
    Inconclusive,
}

/// Successive ratio above which a step counts as growth.
pub const GROWTH_RATIO: f64 = 1.5;

/// Successive ratio below which a step counts as levelling off.
pub const BOUNDED_RATIO: f64 = 1.1;

/// `Growing` if every successive ratio is at least [`GROWTH_RATIO`],
/// `Bounded` if every one is at most [`BOUNDED_RATIO`].
pub fn classify_trend(norms: &[f64]) -> Trend {
    if norms.len() < 2 {
        return Trend::Inconclusive;
    }
    let ratios: Vec<f64> = norms.windows(2).map(|w| w[1] / w[0]).collect();
    if ratios.iter().all(|&r| r >= GROWTH_RATIO) {
        Trend::Growing
    } else if ratios.iter().all(|&r| r <= BOUNDED_RATIO) {
        Trend::Bounded
    } else {
        Trend::Inconclusive
    }
}

/// Line-side Hilbert transform `(1/π) p.v. ∫ f(t) / (t - x) dt`, written as
/// `(1/π) ∫_0^reach (f(x+s) - f(x-s)) / s ds` so the singular point cancels
/// between mirrored nodes.
pub fn pv_hilbert_line<F: Fn(f64) -> Complex64>(f: F, x: f64, reach: f64, panels: usize) -> Result<Complex64> {
    let rule = composite_legendre(&[0.0, reach], panels, 16)?;
    let acc: Complex64 = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&s, &w)| (f(x + s) - f(x - s)) * (w / s))
        .sum();
    Ok(acc / std::f64::consts::PI)
}
