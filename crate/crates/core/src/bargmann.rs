//! The Bargmann transform `B: L²(ℝ) → F²`,
//! `Bf(z) = c ∫ f(x) e^{2xz - x² - z²/2} dx`, and its inverse
//! `B⁻¹F(x) = c ∫ F(z) e^{2x z̄ - x² - z̄²/2} dλ(z)`.
//!
//! Since `B h_n = e_n` the exact transform on coefficients is the identity.
//! The quadrature forms evaluate the integrals themselves and serve as the
//! independent path every operator identity is checked against.

use num_complex::Complex64;

use crate::error::{Flag, Flagged, Result};
use crate::fock::{eval_weighted, FockVector};
use crate::hermite::{project_line, LineVector};
use crate::quadrature::{gauss_hermite, LineWeight, PlaneRule, QuadratureRule};

/// `c = (2/π)^{1/4}`.
pub fn bargmann_constant() -> f64 {
    (2.0 / std::f64::consts::PI).powf(0.25)
}

/// Largest Fock degree the plane rule is trusted to resolve.
pub const MAX_INVERSE_DEGREE: usize = 32;

/// Coefficient form of `B`: `b_n ↦ c_n = b_n`.
pub fn bargmann_coeff(f: &LineVector) -> FockVector {
    FockVector::new(f.coeffs().to_vec())
}

/// Coefficient form of `B⁻¹`.
pub fn inverse_bargmann_coeff(f: &FockVector) -> LineVector {
    LineVector::new(f.coeffs().to_vec())
}

/// Largest `|Im z|` a Gauss–Hermite rule is trusted with.
pub fn oscillation_budget(rule: &QuadratureRule) -> f64 {
    rule.len() as f64 / 8.0
}

/// `Bf(z)` by the rule. Flagged when `|Im z|` exceeds the oscillation budget of
/// a Gauss–Hermite rule.
pub fn bargmann_quadrature<F: Fn(f64) -> Complex64>(f: F, z: Complex64, rule: &QuadratureRule) -> Flagged<Complex64> {
    let value = bargmann_sum(&f, z, rule, 0.0);
    Flagged::with(value, oscillation_flag(z, rule))
}

/// `Bf(z) e^{-|z|²/2}`, the weighted modulus used by the `F^∞` norm. The weight
/// is merged into each exponent so large `|z|` does not overflow.
pub fn bargmann_quadrature_weighted<F: Fn(f64) -> Complex64>(
    f: F,
    z: Complex64,
    rule: &QuadratureRule,
) -> Flagged<Complex64> {
    let value = bargmann_sum(&f, z, rule, -0.5 * z.norm_sqr());
    Flagged::with(value, oscillation_flag(z, rule))
}

fn bargmann_sum<F: Fn(f64) -> Complex64>(f: &F, z: Complex64, rule: &QuadratureRule, shift: f64) -> Complex64 {
    let c = bargmann_constant();
    let base = -0.5 * z * z + shift;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &lw) in rule.nodes().iter().zip(rule.ln_unit_weights()) {
        let fx = f(x);
        if fx == Complex64::new(0.0, 0.0) {
            continue;
        }
        acc += fx * (base + 2.0 * x * z + (lw - x * x)).exp();
    }
    acc * c
}

fn oscillation_flag(z: Complex64, rule: &QuadratureRule) -> Option<Flag> {
    if rule.weight_fn() != LineWeight::Gaussian {
        return None;
    }
    let budget = oscillation_budget(rule);
    (z.im.abs() > budget).then_some(Flag::Oscillation { im_z: z.im, budget })
}

/// `B⁻¹F(x)` by a tensor rule adapted to the Gaussian envelope
/// `e^{-3u²/2 + 2xu - v²/2}` of the integrand.
pub fn inverse_bargmann_quadrature(f: &FockVector, x: f64, rule: &PlaneRule) -> Flagged<Complex64> {
    let c = bargmann_constant();
    let center = Complex64::new(2.0 * x / 3.0, 0.0);
    let su = (2.0f64 / 3.0).sqrt();
    let sv = std::f64::consts::SQRT_2;
    let value = rule.integrate_adapted(center, su, sv, |z| {
        let zb = z.conj();
        let pre = crate::fock::eval(f, z).unwrap_or_default();
        (pre, 2.0 * x * zb - x * x - 0.5 * zb * zb - z.norm_sqr())
    }) * (c / std::f64::consts::PI);
    let flag = (f.degree() > MAX_INVERSE_DEGREE)
        .then(|| Flag::Precondition(format!("degree {} above {MAX_INVERSE_DEGREE}", f.degree())));
    Flagged::with(value, flag)
}

/// Line rules, plane rule and degree bundled for round trips.
#[derive(Debug, Clone)]
pub struct BargmannPipeline {
    pub degree: usize,
    pub line: QuadratureRule,
    pub plane: PlaneRule,
    pub tolerance: f64,
}

impl BargmannPipeline {
    pub fn new(degree: usize, line_nodes: usize, plane_nodes: usize) -> Result<Self> {
        Ok(Self {
            degree,
            line: gauss_hermite(line_nodes)?,
            plane: PlaneRule::gaussian(plane_nodes)?,
            tolerance: 1e-7,
        })
    }

    /// Coefficients of `Bf` obtained by projecting `f` on the line.
    pub fn forward<F: Fn(f64) -> Complex64>(&self, f: F) -> Flagged<FockVector> {
        let p = project_line(f, self.degree, &self.line);
        Flagged::with(bargmann_coeff(&p.value), p.flag)
    }

    pub fn inverse_at(&self, f: &FockVector, x: f64) -> Flagged<Complex64> {
        inverse_bargmann_quadrature(f, x, &self.plane)
    }

    /// Largest gap between the quadrature transform and the coefficient path at
    /// the given points.
    pub fn cross_check<F: Fn(f64) -> Complex64>(&self, f: F, points: &[Complex64]) -> f64 {
        let coeffs = self.forward(&f).value;
        points
            .iter()
            .map(|&z| {
                let q = bargmann_quadrature(&f, z, &self.line).value;
                let e = crate::fock::eval(&coeffs, z).unwrap_or_default();
                (q - e).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Polar sampling grid `r_i = R (i+1)/n_r`, `θ_j = 2πj/n_θ`, plus the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarGrid {
    pub radius: f64,
    pub radial: usize,
    pub angular: usize,
}

impl PolarGrid {
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.radial * self.angular + 1);
        pts.push(Complex64::new(0.0, 0.0));
        for i in 0..self.radial {
            let r = self.radius * (i + 1) as f64 / self.radial as f64;
            for j in 0..self.angular {
                let t = 2.0 * std::f64::consts::PI * j as f64 / self.angular as f64;
                pts.push(Complex64::from_polar(r, t));
            }
        }
        pts
    }
}

/// `max |F(z)| e^{-|z|²/2}` over a polar grid with radial step `grid_step` and
/// arc spacing about `grid_step` on every ring.
pub fn fock_sup_norm(f: &FockVector, grid_radius: f64, grid_step: f64) -> f64 {
    let rings = (grid_radius / grid_step).ceil().max(1.0) as usize;
    let mut best = eval_weighted(f, Complex64::new(0.0, 0.0)).norm();
    for i in 1..=rings {
        let r = grid_radius * i as f64 / rings as f64;
        let count = ((2.0 * std::f64::consts::PI * r / grid_step).ceil() as usize).max(8);
        for j in 0..count {
            let z = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / count as f64);
            best = best.max(eval_weighted(f, z).norm());
        }
    }
    best
}

/// `(p/2π) ∫ |F(z) e^{-|z|²/2}|^p dA` to the power `1/p`, by the midpoint rule on
/// a polar grid. Exploratory only.
pub fn fock_p_norm(f: &FockVector, p: f64, radius: f64, radial: usize, angular: usize) -> f64 {
    let dr = radius / radial as f64;
    let dt = 2.0 * std::f64::consts::PI / angular as f64;
    let mut acc = 0.0;
    for i in 0..radial {
        let r = (i as f64 + 0.5) * dr;
        for j in 0..angular {
            let z = Complex64::from_polar(r, (j as f64 + 0.5) * dt);
            acc += eval_weighted(f, z).norm().powf(p) * r * dr * dt;
        }
    }
    (p / (2.0 * std::f64::consts::PI) * acc).powf(1.0 / p)
}

/// `(‖Bf‖_{F^∞}, c sqrt(π) ‖f‖_∞)` with the left side sampled on `grid` by
/// quadrature. The endpoint bound asserts `lhs ≤ rhs`.
pub fn verify_pbound<F: Fn(f64) -> Complex64>(f: F, sup_f: f64, rule: &QuadratureRule, grid: &PolarGrid) -> (f64, f64) {
    let lhs = grid
        .points()
        .iter()
        .map(|&z| bargmann_quadrature_weighted(&f, z, rule).value.norm())
        .fold(0.0, f64::max);
    let rhs = bargmann_constant() * std::f64::consts::PI.sqrt() * sup_f;
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_function;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gauss(x: f64) -> Complex64 {
        c(bargmann_constant() * (-x * x).exp(), 0.0)
    }

    #[test]
    fn coefficient_path_is_identity() {
        let v = LineVector::basis(3, 5);
        assert_eq!(bargmann_coeff(&v), FockVector::basis(3, 5));
        let w = LineVector::new(vec![c(0.3, 0.1), c(-2.0, 0.5)]);
        assert_abs_diff_eq!(bargmann_coeff(&w).norm(), w.norm(), epsilon = 0.0);
    }

    #[test]
    fn quadrature_of_gauss_is_one() {
        let rule = gauss_hermite(128).unwrap();
        let v = bargmann_quadrature(gauss, c(0.7, 0.3), &rule);
        assert!(v.is_reliable());
        assert_abs_diff_eq!((v.value - 1.0).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn quadrature_of_constant() {
        let rule = gauss_hermite(128).unwrap();
        let z = c(1.0, 1.0);
        let v = bargmann_quadrature(|_| c(1.0, 0.0), z, &rule).value;
        let want = (0.5 * z * z).exp() * bargmann_constant() * std::f64::consts::PI.sqrt();
        assert_abs_diff_eq!((v - want).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn quadrature_of_h1_at_two() {
        let rule = gauss_hermite(128).unwrap();
        let v = bargmann_quadrature(|x| c(hermite_function(1, x), 0.0), c(2.0, 0.0), &rule).value;
        assert_abs_diff_eq!((v - 2.0).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn oscillation_flag_raised() {
        let rule = gauss_hermite(16).unwrap();
        assert!(!bargmann_quadrature(gauss, c(0.0, 3.0), &rule).is_reliable());
        assert!(bargmann_quadrature(gauss, c(0.0, 1.0), &rule).is_reliable());
    }

    #[test]
    fn inverse_on_low_monomials() {
        let plane = PlaneRule::gaussian(48).unwrap();
        let v = inverse_bargmann_quadrature(&FockVector::basis(0, 0), 0.4, &plane).value;
        assert_abs_diff_eq!((v - hermite_function(0, 0.4)).norm(), 0.0, epsilon = 1e-8);
        let v = inverse_bargmann_quadrature(&FockVector::basis(2, 2), 0.0, &plane).value;
        assert_abs_diff_eq!((v - hermite_function(2, 0.0)).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn inverse_round_trip_to_hermite_functions() {
        let plane = PlaneRule::gaussian(48).unwrap();
        for n in 0..=8 {
            for &x in &[-1.7, -0.3, 0.0, 0.9, 2.2] {
                let v = inverse_bargmann_quadrature(&FockVector::basis(n, n), x, &plane).value;
                assert_abs_diff_eq!((v - hermite_function(n, x)).norm(), 0.0, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn sup_norms() {
        assert_abs_diff_eq!(fock_sup_norm(&FockVector::basis(0, 0), 6.0, 0.05), 1.0, epsilon = 1e-15);
        let s = fock_sup_norm(&FockVector::basis(1, 1), 6.0, 0.01);
        assert_abs_diff_eq!(s, (-0.5f64).exp(), epsilon = 1e-4);
    }

    #[test]
    fn p_norm_two_matches_coefficients() {
        let f = FockVector::from_real(&[0.5, -0.25, 0.75]);
        let n2 = fock_p_norm(&f, 2.0, 9.0, 400, 64);
        assert_abs_diff_eq!(n2, f.norm(), epsilon = 1e-4);
    }

    #[test]
    fn pbound_for_gauss() {
        let rule = gauss_hermite(128).unwrap();
        let grid = PolarGrid {
            radius: 4.0,
            radial: 20,
            angular: 20,
        };
        let (lhs, rhs) = verify_pbound(gauss, bargmann_constant(), &rule, &grid);
        assert_abs_diff_eq!(lhs, 1.0, epsilon = 1e-10);
        assert!(lhs <= rhs);
    }
}
