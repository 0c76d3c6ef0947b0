//! Gaussian quadrature on the line and tensor rules on the plane.
//!
//! Gauss–Hermite nodes start from the Golub–Welsch eigenvalues of the Jacobi
//! matrix and are polished by Newton steps on the normalized Hermite function
//! `φ_n`. Weights come from the confluent Christoffel–Darboux identity
//! `Σ_{j<n} φ_j(y)² = n φ_{n-1}(y)²` at a zero of `φ_n`, evaluated in log form so
//! the outermost weights keep full relative accuracy even when `e^{-y²}`
//! underflows.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{FockError, Result};
use crate::hermite::scaled_hermite_pair;

/// Largest Gauss–Hermite rule the library builds.
pub const MAX_HERMITE_NODES: usize = 256;

/// Weight function a line rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineWeight {
    /// `∫ g(x) e^{-x²} dx` over ℝ.
    Gaussian,
    /// `∫ g(x) dx` over a bounded union of panels.
    Lebesgue,
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    ln_unit_weights: Vec<f64>,
    weight: LineWeight,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for the tagged weight function.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_fn(&self) -> LineWeight {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Natural log of the weights for plain `∫ g(x) dx`
    /// (for Gauss–Hermite this is `ln w_k + x_k²`).
    pub fn ln_unit_weights(&self) -> &[f64] {
        &self.ln_unit_weights
    }

    pub fn unit_weights(&self) -> Vec<f64> {
        self.ln_unit_weights.iter().map(|l| l.exp()).collect()
    }

    /// `Σ w_k g(x_k)` against the tagged weight.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, g: F) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| g(x) * w).sum()
    }

    /// `∫ g(x) dx` for integrands that carry their own decay.
    pub fn integrate_unit<F: Fn(f64) -> Complex64>(&self, g: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.ln_unit_weights)
            .map(|(&x, &lw)| g(x) * lw.exp())
            .sum()
    }

    /// Largest node modulus, which bounds where the rule samples.
    pub fn span(&self) -> f64 {
        self.nodes.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Gauss–Hermite rule for the weight `e^{-x²}` with `n_nodes` nodes.
pub fn gauss_hermite(n_nodes: usize) -> Result<QuadratureRule> {
    if n_nodes == 0 || n_nodes > MAX_HERMITE_NODES {
        return Err(FockError::Precondition(format!(
            "gauss_hermite needs 1 ≤ n_nodes ≤ {MAX_HERMITE_NODES}, got {n_nodes}"
        )));
    }
    let n = n_nodes;
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let mut roots: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

    for y in roots.iter_mut() {
        for _ in 0..4 {
            let (pn, pn1) = scaled_hermite_pair(*y, n);
            let deriv = (2.0 * n as f64).sqrt() * pn1 - *y * pn;
            if deriv == 0.0 {
                break;
            }
            let step = pn / deriv;
            *y -= step;
            if step.abs() < 1e-16 * y.abs().max(1.0) {
                break;
            }
        }
    }
    // enforce exact mirror symmetry
    for k in 0..n / 2 {
        let m = 0.5 * (roots[n - 1 - k] - roots[k]);
        roots[k] = -m;
        roots[n - 1 - k] = m;
    }
    if n % 2 == 1 {
        roots[n / 2] = 0.0;
    }

    let mut ln_unit = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &y in &roots {
        let ln_phi_prev = crate::hermite::ln_abs_std_hermite_function(n - 1, y);
        let lu = -(n as f64).ln() - 2.0 * ln_phi_prev;
        ln_unit.push(lu);
        weights.push((lu - y * y).exp());
    }
    Ok(QuadratureRule {
        nodes: roots,
        weights,
        ln_unit_weights: ln_unit,
        weight: LineWeight::Gaussian,
    })
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre rule: each interval between consecutive `breaks`
/// is cut into `panels` equal panels carrying an `order`-point rule.
pub fn composite_legendre(breaks: &[f64], panels: usize, order: usize) -> Result<QuadratureRule> {
    if breaks.len() < 2 || panels == 0 || order == 0 {
        return Err(FockError::Precondition(
            "composite rule needs at least two breakpoints, one panel and one node".into(),
        ));
    }
    if breaks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FockError::Precondition("breakpoints must increase strictly".into()));
    }
    let (x0, w0) = gauss_legendre_unit(order);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for seg in breaks.windows(2) {
        let h = (seg[1] - seg[0]) / panels as f64;
        for p in 0..panels {
            let lo = seg[0] + p as f64 * h;
            for (x, w) in x0.iter().zip(&w0) {
                nodes.push(lo + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
    }
    let ln_unit_weights = weights.iter().map(|w: &f64| w.ln()).collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        ln_unit_weights,
        weight: LineWeight::Lebesgue,
    })
}

/// Tensor Gauss–Hermite rule on ℂ with `z = u + iv`.
#[derive(Debug, Clone)]
pub struct PlaneRule {
    line: QuadratureRule,
}

impl PlaneRule {
    pub fn gaussian(n_per_axis: usize) -> Result<Self> {
        Ok(Self {
            line: gauss_hermite(n_per_axis)?,
        })
    }

    pub fn line(&self) -> &QuadratureRule {
        &self.line
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.line.len()
    }

    /// `∫_ℂ g dλ` with `dλ = π^{-1} e^{-|z|²} dA`.
    pub fn integrate_dlambda<F: Fn(Complex64) -> Complex64>(&self, g: F) -> Complex64 {
        let nodes = self.line.nodes();
        let w = self.line.weights();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &u) in nodes.iter().enumerate() {
            for (j, &v) in nodes.iter().enumerate() {
                acc += g(Complex64::new(u, v)) * (w[i] * w[j]);
            }
        }
        acc / std::f64::consts::PI
    }

    /// `∫_ℂ P(z) e^{E(z)} dA(z)` for an integrand returned as `(P, E)`, sampled on
    /// the rule shifted to `center` and stretched by `(scale_u, scale_v)`.
    ///
    /// The stretched rule matches a Gaussian envelope `e^{-((u-c_u)/s_u)² - ((v-c_v)/s_v)²}`;
    /// choosing it close to the integrand's own envelope leaves only a slowly
    /// varying factor for the rule to resolve.
    pub fn integrate_adapted<F>(&self, center: Complex64, scale_u: f64, scale_v: f64, g: F) -> Complex64
    where
        F: Fn(Complex64) -> (Complex64, Complex64),
    {
        let nodes = self.line.nodes();
        let lw = self.line.ln_unit_weights();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &s) in nodes.iter().enumerate() {
            let u = center.re + scale_u * s;
            for (j, &t) in nodes.iter().enumerate() {
                let v = center.im + scale_v * t;
                let (pre, expo) = g(Complex64::new(u, v));
                if pre == Complex64::new(0.0, 0.0) {
                    continue;
                }
                acc += pre * (expo + lw[i] + lw[j]).exp();
            }
        }
        acc * (scale_u * scale_v)
    }
}
