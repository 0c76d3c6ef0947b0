//! Hermite polynomials, the orthonormal Hermite functions `h_n` of the line,
//! and line vectors expanded against them.
//!
//! `h_n(x) = c / sqrt(2^n n!) e^{-x²} H_n(sqrt(2) x)` with `c = (2/π)^{1/4}`, which is
//! `2^{1/4} φ_n(sqrt(2) x)` for the textbook functions
//! `φ_n(y) = π^{-1/4} (2^n n!)^{-1/2} H_n(y) e^{-y²/2}`. Everything below runs
//! the three-term recurrence for `φ_n` with the Gaussian folded into a running
//! log-scale, so neither `H_n` nor `e^{-y²}` is formed on its own.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Flag, Flagged, FockError, Result};
use crate::quadrature::{composite_legendre, gauss_hermite, QuadratureRule, MAX_HERMITE_NODES};

const RESCALE: f64 = 1e150;

/// Physicists' Hermite polynomial by `H_{n+1} = 2y H_n - 2n H_{n-1}`.
pub fn hermite_poly(n: usize, y: f64) -> Result<f64> {
    let mut h_prev = 1.0;
    if n == 0 {
        return Ok(h_prev);
    }
    let mut h = 2.0 * y;
    for k in 1..n {
        let next = 2.0 * y * h - 2.0 * k as f64 * h_prev;
        h_prev = h;
        h = next;
        if !h.is_finite() {
            return Err(FockError::Range(format!("H_{n}({y}) overflows at degree {}", k + 1)));
        }
    }
    Ok(h)
}

/// Mantissas `(m_n, m_{n-1})` of `φ_n(y), φ_{n-1}(y)` sharing one unknown
/// positive scale. Only their ratio and signs are meaningful.
pub(crate) fn scaled_hermite_pair(y: f64, n: usize) -> (f64, f64) {
    let (p, p_prev, _) = run_recurrence(y, n, |_, _, _| {});
    (p, p_prev)
}

/// `ln |φ_n(y)|` (textbook normalization).
pub(crate) fn ln_abs_std_hermite_function(n: usize, y: f64) -> f64 {
    let (p, _, l) = run_recurrence(y, n, |_, _, _| {});
    p.abs().ln() + l
}

/// Runs the normalized recurrence up to degree `n`, calling `visit(k, m_k, L)`
/// with `φ_k(y) = m_k e^{L}`. Returns `(m_n, m_{n-1}, L)`.
fn run_recurrence<V: FnMut(usize, f64, f64)>(y: f64, n: usize, mut visit: V) -> (f64, f64, f64) {
    let mut l = -0.5 * y * y - 0.25 * std::f64::consts::PI.ln();
    let mut p_prev = 0.0;
    let mut p = 1.0;
    visit(0, p, l);
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * p - (kf / (kf + 1.0)).sqrt() * p_prev;
        p_prev = p;
        p = next;
        if p.abs() > RESCALE {
            p /= RESCALE;
            p_prev /= RESCALE;
            l += RESCALE.ln();
        }
        visit(k + 1, p, l);
    }
    (p, p_prev, l)
}

fn materialize(m: f64, l: f64) -> f64 {
    if m == 0.0 {
        0.0
    } else {
        m.signum() * (m.abs().ln() + l).exp()
    }
}

/// `φ_0(y)..φ_{n_max}(y)` each multiplied by `e^{ln_factor}`; the factor is
/// applied inside the log-scale so large Gaussian weights never overflow.
fn std_table(y: f64, n_max: usize, ln_factor: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    run_recurrence(y, n_max, |_, m, l| out.push(materialize(m, l + ln_factor)));
    out
}

/// The orthonormal Hermite function `h_n(x)`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let (p, _, l) = run_recurrence(std::f64::consts::SQRT_2 * x, n, |_, _, _| {});
    materialize(p, l + 0.25 * std::f64::consts::LN_2)
}

/// `h_0(x)..h_{n_max}(x)` in one pass.
pub fn hermite_functions(x: f64, n_max: usize) -> Vec<f64> {
    std_table(std::f64::consts::SQRT_2 * x, n_max, 0.25 * std::f64::consts::LN_2)
}

/// `h_0(x)..h_{n_max}(x)` scaled by `e^{ln_factor}`.
pub fn hermite_functions_scaled(x: f64, n_max: usize, ln_factor: f64) -> Vec<f64> {
    std_table(
        std::f64::consts::SQRT_2 * x,
        n_max,
        ln_factor + 0.25 * std::f64::consts::LN_2,
    )
}

/// Coefficients `b_0..b_N` of a function on the line against `h_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineVector {
    coeffs: Vec<Complex64>,
}

impl LineVector {
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

    pub fn basis(n: usize, degree: usize) -> Self {
        let mut v = Self::zeros(degree.max(n));
        v.coeffs[n] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ b_n h_n(x)`.
    pub fn eval(&self, x: f64) -> Complex64 {
        hermite_functions(x, self.degree())
            .iter()
            .zip(&self.coeffs)
            .map(|(h, b)| b * h)
            .sum()
    }
}

impl Serialize for LineVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LineVector {
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

/// Tail fraction above which a projection is flagged as under-resolved.
pub const TAIL_TOLERANCE: f64 = 1e-6;

/// Default Gauss–Hermite node count for smooth inputs at degree `n`.
pub fn default_nodes(degree: usize) -> usize {
    (4 * degree.max(1)).min(MAX_HERMITE_NODES)
}

/// `b_n = ∫ f h_n dx` by the rule, for `n ≤ degree`.
///
/// Gauss–Hermite rules are used through their plain-`dx` weights, folded into
/// the Hermite recurrence in log form, so no `e^{x_k²}` is ever formed. The
/// result is flagged when the top quarter of the coefficients carries more than
/// [`TAIL_TOLERANCE`] of the norm.
pub fn project_line<F: Fn(f64) -> Complex64>(f: F, degree: usize, rule: &QuadratureRule) -> Flagged<LineVector> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    for (&x, &lw) in rule.nodes().iter().zip(rule.ln_unit_weights()) {
        let fx = f(x);
        if fx == Complex64::new(0.0, 0.0) {
            continue;
        }
        let h = hermite_functions_scaled(x, degree, lw);
        for (c, hn) in coeffs.iter_mut().zip(&h) {
            *c += fx * *hn;
        }
    }
    let v = LineVector { coeffs };
    let flag = tail_flag(&v);
    Flagged::with(v, flag)
}

fn tail_flag(v: &LineVector) -> Option<Flag> {
    let n = v.coeffs.len();
    let start = n - n / 4;
    let total = v.norm();
    if total == 0.0 || start >= n {
        return None;
    }
    let tail = v.coeffs[start..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let ratio = tail / total;
    (ratio > TAIL_TOLERANCE).then_some(Flag::UnderResolved { tail_ratio: ratio })
}

/// Projects a smooth function with the default Gauss–Hermite rule.
pub fn project_smooth<F: Fn(f64) -> Complex64>(f: F, degree: usize) -> Result<Flagged<LineVector>> {
    let rule = gauss_hermite(default_nodes(degree))?;
    Ok(project_line(f, degree, &rule))
}

/// Projects a function supported on `[breaks[0], breaks[last]]` that is smooth
/// between consecutive breakpoints, using composite 32-point Legendre panels.
/// Outside the breakpoints the function is taken to vanish.
pub fn project_piecewise<F: Fn(f64) -> Complex64>(f: F, breaks: &[f64], degree: usize) -> Result<Flagged<LineVector>> {
    // h_N oscillates on the scale 1/sqrt(2N); keep several panels per wavelength
    let width = breaks.last().copied().unwrap_or(0.0) - breaks.first().copied().unwrap_or(0.0);
    let panels = ((width * (2.0 * degree as f64 + 1.0).sqrt()).ceil() as usize).max(1);
    let rule = composite_legendre(breaks, panels, 32)?;
    Ok(project_line(f, degree, &rule))
}

/// Coefficients of the indicator of `[lo, hi)`.
pub fn project_indicator(lo: f64, hi: f64, degree: usize) -> Result<Flagged<LineVector>> {
    project_piecewise(|_| Complex64::new(1.0, 0.0), &[lo, hi], degree)
}
