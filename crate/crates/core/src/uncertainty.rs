//! The Fock-space uncertainty inequality
//! `‖f' + zf - af‖ · ‖f' - zf - ibf‖ ≥ ‖f‖²` and its extremal family
//! `f(z) = C exp(α z² + β z)` with `α = (c-1)/(2(c+1))`, `β = (a + ibc)/(c+1)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Flag, Flagged, FockError, Result};
use crate::fock::FockVector;
use crate::operator::OperatorMatrix;
use crate::ops::{md_matrices, TRUNCATION_TOLERANCE};

/// Relative size of the last coefficients required of an extremal vector.
pub const TAIL_CERTIFICATE: f64 = 1e-10;

/// `S₁ = D + M`, i.e. `f ↦ f' + zf`.
pub fn s1_matrix(degree: usize) -> OperatorMatrix {
    let (m, d) = md_matrices(degree);
    d.add(&m).with_name("S1")
}

/// `S₂ = i(D - M)`, i.e. `f ↦ i(f' - zf)`.
pub fn s2_matrix(degree: usize) -> OperatorMatrix {
    let (m, d) = md_matrices(degree);
    d.sub(&m).scale(Complex64::new(0.0, 1.0)).with_name("S2")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyProduct {
    pub lhs: f64,
    pub rhs: f64,
}

impl UncertaintyProduct {
    pub fn gap(&self) -> f64 {
        self.lhs - self.rhs
    }
}

fn padding_flag(f: &FockVector) -> Option<Flag> {
    let n = f.degree();
    let norm = f.norm();
    let top = f.coeff(n).norm().max(if n > 0 { f.coeff(n - 1).norm() } else { 0.0 });
    (top > TRUNCATION_TOLERANCE * norm)
        .then(|| Flag::Precondition(format!("top coefficients {top:e} exceed {TRUNCATION_TOLERANCE:e}·‖f‖")))
}

/// Both sides of the inequality. Vectors whose two top coefficients are not
/// negligible come back flagged, since `M` would push mass past the truncation.
pub fn uncertainty_product(f: &FockVector, a: f64, b: f64) -> Flagged<UncertaintyProduct> {
    let (m, d) = md_matrices(f.degree());
    let mf = m.apply(f).expect("same degree");
    let df = d.apply(f).expect("same degree");
    let u = df.add(&mf).sub(&f.scale(Complex64::new(a, 0.0)));
    let v = df.sub(&mf).sub(&f.scale(Complex64::new(0.0, b)));
    let product = UncertaintyProduct {
        lhs: u.norm() * v.norm(),
        rhs: f.norm_sqr(),
    };
    Flagged::with(product, padding_flag(f))
}

/// `lhs - rhs`; zero on the extremal family.
pub fn nonextremal_gap(f: &FockVector, a: f64, b: f64) -> Flagged<f64> {
    let p = uncertainty_product(f, a, b);
    Flagged::with(p.value.gap(), p.flag)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalParams {
    pub amplitude: Complex64,
    pub c: f64,
    pub a: f64,
    pub b: f64,
}

impl ExtremalParams {
    pub fn new(c: f64, a: f64, b: f64) -> Result<Self> {
        if c.is_nan() || c <= 0.0 {
            return Err(FockError::Precondition(format!("c must be positive, got {c}")));
        }
        Ok(Self {
            amplitude: Complex64::new(1.0, 0.0),
            c,
            a,
            b,
        })
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn alpha(&self) -> f64 {
        (self.c - 1.0) / (2.0 * (self.c + 1.0))
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::new(self.a, self.b * self.c) / (self.c + 1.0)
    }
}

/// `e_n` coefficients of `C exp(αz² + βz)`. Errors if the last two
/// coefficients are not below `1e-10 ‖f‖`.
pub fn extremal_coeffs(p: &ExtremalParams, degree: usize) -> Result<FockVector> {
    let out = extremal_coeffs_unchecked(p, degree);
    let norm = out.norm();
    let top = out
        .coeff(degree)
        .norm()
        .max(if degree > 0 { out.coeff(degree - 1).norm() } else { 0.0 });
    if top.is_nan() || top > TAIL_CERTIFICATE * norm {
        return Err(FockError::Resolution(format!(
            "tail {top:e} exceeds {TAIL_CERTIFICATE:e}·‖f‖ at N={degree}; use a larger degree"
        )));
    }
    Ok(out)
}

fn extremal_coeffs_unchecked(p: &ExtremalParams, degree: usize) -> FockVector {
    // (n+1) a_{n+1} = β a_n + 2α a_{n-1}, rewritten for c_n = a_n √n!
    let alpha = p.alpha();
    let beta = p.beta();
    let mut c = vec![Complex64::new(0.0, 0.0); degree + 1];
    c[0] = p.amplitude;
    if degree >= 1 {
        c[1] = beta * p.amplitude;
    }
    for n in 1..degree {
        let k = (n + 1) as f64;
        c[n + 1] = (beta * c[n] + c[n - 1] * (2.0 * alpha * (n as f64).sqrt())) / k.sqrt();
    }
    FockVector::new(c)
}

/// Smallest degree in `[start, max]` that passes the tail certificate.
pub fn certified_degree(p: &ExtremalParams, start: usize, max: usize) -> Result<usize> {
    let full = extremal_coeffs_unchecked(p, max);
    let norm = full.norm();
    (start.max(1)..=max)
        .find(|&n| full.coeff(n).norm().max(full.coeff(n - 1).norm()) <= TAIL_CERTIFICATE * norm)
        .ok_or_else(|| FockError::Resolution(format!("no degree up to {max} passes the tail certificate")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn s_on_constant() {
        let e0 = FockVector::basis(0, 4);
        assert_eq!(s1_matrix(4).apply(&e0).unwrap(), FockVector::basis(1, 4));
        assert_eq!(
            s2_matrix(4).apply(&e0).unwrap(),
            FockVector::basis(1, 4).scale(Complex64::new(0.0, -1.0))
        );
    }

    #[test]
    fn commutator_and_symmetry() {
        let n = 20;
        let (s1, s2) = (s1_matrix(n), s2_matrix(n));
        let c = s1.commutator(&s2);
        assert!(c.block_identity_residual(Complex64::new(0.0, -2.0), n - 1) < 1e-13);
        assert_eq!(s1.hermitian_residual(n + 1), 0.0);
        assert_eq!(s2.hermitian_residual(n + 1), 0.0);
    }

    #[test]
    fn constant_is_extremal() {
        let p = uncertainty_product(&FockVector::basis(0, 6), 0.0, 0.0);
        assert!(p.is_reliable());
        assert_abs_diff_eq!(p.value.lhs, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.value.rhs, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn strict_and_homogeneous() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let f = FockVector::from_real(&[s, 0.0, 0.0, 0.0, s, 0.0, 0.0, 0.0]);
        assert!(uncertainty_product(&f, 0.0, 0.0).value.gap() > 0.1);
        let g = FockVector::from_real(&[s, 0.0, s, 0.0, 0.0]);
        let gap = nonextremal_gap(&g, 0.0, 0.0).value;
        assert!(gap > 0.1);
        let g5 = nonextremal_gap(&g.scale(Complex64::new(5.0, 0.0)), 0.0, 0.0).value;
        assert_abs_diff_eq!(g5, 25.0 * gap, epsilon = 1e-12);
    }

    #[test]
    fn unpadded_input_is_flagged() {
        let f = FockVector::from_real(&[1.0, 1.0]);
        assert!(!uncertainty_product(&f, 0.0, 0.0).is_reliable());
    }

    #[test]
    fn extremal_family() {
        let one = extremal_coeffs(&ExtremalParams::new(1.0, 0.0, 0.0).unwrap(), 8).unwrap();
        assert_eq!(one, FockVector::basis(0, 8));
        // e^{z/2}: c_n = 2^{-n} / √n!
        let half = extremal_coeffs(&ExtremalParams::new(1.0, 1.0, 0.0).unwrap(), 30).unwrap();
        let mut want = 1.0;
        for n in 0..=30 {
            if n > 0 {
                want *= 0.5 / (n as f64).sqrt();
            }
            assert_abs_diff_eq!(half.coeff(n).re, want, epsilon = 1e-15);
        }
        let p = ExtremalParams::new(2.0, 0.5, 0.3).unwrap();
        let n = certified_degree(&p, 10, 200).unwrap();
        let f = extremal_coeffs(&p, n).unwrap();
        let gap = nonextremal_gap(&f, 0.5, 0.3);
        assert!(gap.is_reliable());
        assert!(gap.value.abs() < 1e-7);
        assert!(extremal_coeffs(&ExtremalParams::new(9.0, 0.0, 0.0).unwrap(), 10).is_err());
    }
}
