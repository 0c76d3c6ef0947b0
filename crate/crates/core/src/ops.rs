//! Fock-side images of the line operators: Fourier transform and rotations,
//! spectral projections, Weyl (displacement) operators, translation and
//! modulation, dilation, and the band operators `M`, `D`, `A₁`, `A₂`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bargmann::{inverse_bargmann_quadrature, BargmannPipeline};
use crate::error::{Flag, Flagged, FockError, Result};
use crate::fock::{eval, FockVector};
use crate::hermite::project_line;
use crate::operator::{Basis, OperatorMatrix};
use crate::quadrature::{PlaneRule, QuadratureRule};
use crate::special::{ln_factorial, poisson_tail};

/// Truncation defect above which displaced kernels are flagged.
pub const TRUNCATION_TOLERANCE: f64 = 1e-8;

pub fn i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `Tf(z) = f(iz)`: `c_n ↦ iⁿ c_n`.
pub fn fourier_fock(f: &FockVector) -> FockVector {
    FockVector::new(f.coeffs().iter().enumerate().map(|(n, c)| c * i_pow(n)).collect())
}

/// `c_n ↦ (-i)ⁿ c_n`.
pub fn inverse_fourier_fock(f: &FockVector) -> FockVector {
    FockVector::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| c * i_pow(n).conj())
            .collect(),
    )
}

/// `U_θ f(z) = f(e^{iθ} z)`.
pub fn rotation(theta: f64, f: &FockVector) -> FockVector {
    FockVector::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * theta))
            .collect(),
    )
}

/// Keeps the coefficients with `n ≡ k (mod 4)`.
pub fn spectral_projection(k: usize, f: &FockVector) -> Result<FockVector> {
    if k > 3 {
        return Err(FockError::Precondition(format!("projection index {k} not in 0..=3")));
    }
    Ok(FockVector::new(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| if n % 4 == k { *c } else { Complex64::new(0.0, 0.0) })
            .collect(),
    ))
}

pub fn fourier_matrix(degree: usize) -> OperatorMatrix {
    OperatorMatrix::diagonal("fourier", degree, i_pow)
}

pub fn rotation_matrix(theta: f64, degree: usize) -> OperatorMatrix {
    OperatorMatrix::diagonal("rotation", degree, |n| Complex64::from_polar(1.0, n as f64 * theta))
}

/// Matrix of `W_a f(z) = f(z-a) k_a(z)`.
///
/// Entries are generalized-Laguerre values
/// `⟨W_a e_n, e_{n+k}⟩ = (ā/|a|)^k · sqrt(n!/(n+k)!) |a|^k e^{-|a|²/2} L_n^{(k)}(|a|²)`
/// (and `(-a/|a|)^k` times the same modulus above the diagonal), run along each
/// diagonal with the normalized three-term recurrence. That recurrence is
/// stable; summing the binomial double series directly loses all accuracy once
/// `|a|²` reaches about 10.
///
/// Requires `|a| ≤ sqrt(N)`. Flags a truncation defect of `k_a` above
/// [`TRUNCATION_TOLERANCE`].
pub fn weyl_matrix(a: Complex64, degree: usize) -> Result<Flagged<OperatorMatrix>> {
    let x = a.norm_sqr();
    if x > degree as f64 + 1e-12 {
        return Err(FockError::Precondition(format!(
            "|a|^2 = {x} exceeds the truncation degree {degree}"
        )));
    }
    let dim = degree + 1;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    if x == 0.0 {
        m.fill_with_identity();
    } else {
        let r = x.sqrt();
        let below = a.conj() / r;
        let above = -a / r;
        for k in 0..dim {
            let ph_below = below.powu(k as u32);
            let ph_above = above.powu(k as u32);
            let mut w_prev = 0.0;
            let mut w = (k as f64 * r.ln() - 0.5 * x - 0.5 * ln_factorial(k)).exp();
            for n in 0..(dim - k) {
                m[(n + k, n)] = ph_below * w;
                if k > 0 {
                    m[(n, n + k)] = ph_above * w;
                }
                let nf = n as f64;
                let kf = k as f64;
                let next = ((2.0 * nf + kf + 1.0 - x) * w - (nf * (nf + kf)).sqrt() * w_prev)
                    / ((nf + 1.0) * (nf + kf + 1.0)).sqrt();
                w_prev = w;
                w = next;
            }
        }
    }
    let defect = poisson_tail(x, degree);
    let flag = (defect > TRUNCATION_TOLERANCE).then_some(Flag::Truncation { defect });
    Ok(Flagged::with(OperatorMatrix::new("weyl", Basis::FockE, m), flag))
}

/// Leading block on which `W_a` (and `W_a W_{-a}`) is unitary to about 1e-10 at
/// truncation `N`: column `n` of `W_a` spreads over indices up to roughly
/// `(sqrt(n) + |a|)²`, so the block side is `(sqrt(N) - |a| - 1.5)²`.
pub fn weyl_interior_block(a: Complex64, degree: usize) -> usize {
    let s = (degree as f64).sqrt() - a.norm() - 1.5;
    if s <= 0.0 {
        0
    } else {
        ((s * s).floor() as usize).min(degree + 1)
    }
}

/// `B M_b T_a B⁻¹ = e^{iπab} W_{a - πbi}`.
pub fn translation_modulation_fock(a: f64, b: f64, degree: usize) -> Result<Flagged<OperatorMatrix>> {
    let z = Complex64::new(a, -std::f64::consts::PI * b);
    let w = weyl_matrix(z, degree)?;
    let phase = Complex64::from_polar(1.0, std::f64::consts::PI * a * b);
    Ok(Flagged::with(
        w.value.scale(phase).with_name("translation-modulation"),
        w.flag,
    ))
}

/// Multiplication `M f = z f` and differentiation `D f = f'`.
pub fn md_matrices(degree: usize) -> (OperatorMatrix, OperatorMatrix) {
    let dim = degree + 1;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let mut d = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 0..degree {
        let s = Complex64::new(((n + 1) as f64).sqrt(), 0.0);
        m[(n + 1, n)] = s;
        d[(n, n + 1)] = s;
    }
    (
        OperatorMatrix::new("M", Basis::FockE, m),
        OperatorMatrix::new("D", Basis::FockE, d),
    )
}

/// `A₁ f = ½(z f + f')`, the Fock image of multiplication by `x`.
pub fn a1_matrix(degree: usize) -> OperatorMatrix {
    let (m, d) = md_matrices(degree);
    m.add(&d).scale(Complex64::new(0.5, 0.0)).with_name("A1")
}

/// `A₂ f = f' - z f`, the Fock image of `d/dx`.
pub fn a2_matrix(degree: usize) -> OperatorMatrix {
    let (m, d) = md_matrices(degree);
    d.sub(&m).with_name("A2")
}

/// Line-side Fourier transform `π^{-1/2} ∫ f(t) e^{2ixt} dt` at `x` by the rule.
pub fn fourier_line<F: Fn(f64) -> Complex64>(f: F, x: f64, rule: &QuadratureRule) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&t, &lw) in rule.nodes().iter().zip(rule.ln_unit_weights()) {
        let ft = f(t);
        if ft == Complex64::new(0.0, 0.0) {
            continue;
        }
        acc += ft * Complex64::new(lw, 2.0 * x * t).exp();
    }
    acc / std::f64::consts::PI.sqrt()
}

/// `B M_b T_a B⁻¹ F` through the line: inverse quadrature, shift and modulate the
/// samples, project back onto `h_0..h_N`.
pub fn translation_modulation_pipeline(
    f: &FockVector,
    a: f64,
    b: f64,
    degree: usize,
    line: &QuadratureRule,
    plane: &PlaneRule,
) -> Flagged<FockVector> {
    let g = |x: f64| {
        let shifted = inverse_bargmann_quadrature(f, x - a, plane).value;
        shifted * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * b * x)
    };
    let p = project_line(g, degree, line);
    Flagged::with(FockVector::new(p.value.into_coeffs()), p.flag)
}

/// Outcome of the two dilation paths.
#[derive(Debug, Clone)]
pub struct DilationResult {
    /// `B D_r B⁻¹ f` coefficients from the line pipeline.
    pub coeffs: FockVector,
    /// `(z, line-pipeline value, plane-integral value)` at each sample point.
    pub samples: Vec<(Complex64, Complex64, Complex64)>,
    /// Largest gap between the two paths over the samples.
    pub discrepancy: f64,
    pub flag: Option<Flag>,
}

/// Discrepancy above which the two dilation paths are flagged.
pub const DILATION_TOLERANCE: f64 = 1e-5;

/// Admissible dilation parameters.
pub const DILATION_RANGE: (f64, f64) = (0.25, 4.0);

/// Highest input degree accepted by [`dilation_fock`].
pub const DILATION_MAX_DEGREE: usize = 24;

/// `T_r = B D_r B⁻¹` with `D_r g(x) = sqrt(r) g(rx)`, computed two ways.
///
/// The primary path samples `B⁻¹ f` by plane quadrature, rescales, and projects
/// onto the Hermite functions. The second path integrates the Fock-side kernel
///
/// `T_r f(z) = sqrt(2r/(1+r²)) e^{(1/(1+r²) - 1/2) z²} ∫ f(-iw) e^{(1/2 - r²/(1+r²)) w̄²} e^{2irz w̄/(1+r²)} dλ(w)`
///
/// directly on the plane at each sample point.
pub fn dilation_fock(
    r: f64,
    f: &FockVector,
    pipeline: &BargmannPipeline,
    samples: &[Complex64],
) -> Result<DilationResult> {
    if !(DILATION_RANGE.0..=DILATION_RANGE.1).contains(&r) {
        return Err(FockError::Precondition(format!(
            "dilation parameter {r} outside [{}, {}]",
            DILATION_RANGE.0, DILATION_RANGE.1
        )));
    }
    if f.degree() > DILATION_MAX_DEGREE {
        return Err(FockError::Precondition(format!(
            "input degree {} above {DILATION_MAX_DEGREE}",
            f.degree()
        )));
    }
    let sr = r.sqrt();
    let line = project_line(
        |x| inverse_bargmann_quadrature(f, r * x, &pipeline.plane).value * sr,
        pipeline.degree,
        &pipeline.line,
    );
    let coeffs = FockVector::new(line.value.into_coeffs());
    let mut out = Vec::with_capacity(samples.len());
    let mut discrepancy: f64 = 0.0;
    for &z in samples {
        let primary = eval(&coeffs, z)?;
        let cross = dilation_kernel_integral(r, f, z, &pipeline.plane);
        discrepancy = discrepancy.max((primary - cross).norm());
        out.push((z, primary, cross));
    }
    let flag = if discrepancy > DILATION_TOLERANCE {
        Some(Flag::Discrepancy {
            value: discrepancy,
            limit: DILATION_TOLERANCE,
        })
    } else {
        line.flag
    };
    Ok(DilationResult {
        coeffs,
        samples: out,
        discrepancy,
        flag,
    })
}

/// Plane quadrature of the dilation kernel at one point `z`.
pub fn dilation_kernel_integral(r: f64, f: &FockVector, z: Complex64, plane: &PlaneRule) -> Complex64 {
    let s = 1.0 + r * r;
    let alpha = 0.5 - r * r / s;
    let kappa = 2.0 * r / s;
    // envelope e^{-(1-α)u² - κ Im(z) u - (1+α)v² + κ Re(z) v}
    let center = Complex64::new(
        -kappa * z.im / (2.0 * (1.0 - alpha)),
        kappa * z.re / (2.0 * (1.0 + alpha)),
    );
    let su = 1.0 / (1.0 - alpha).sqrt();
    let sv = 1.0 / (1.0 + alpha).sqrt();
    let minus_i = Complex64::new(0.0, -1.0);
    let ik = Complex64::new(0.0, kappa);
    let integral = plane.integrate_adapted(center, su, sv, |w| {
        let wb = w.conj();
        let pre = eval(f, minus_i * w).unwrap_or_default();
        (pre, alpha * wb * wb + ik * z * wb - w.norm_sqr())
    }) / std::f64::consts::PI;
    let outer = ((1.0 / s - 0.5) * z * z).exp() * kappa.sqrt();
    integral * outer
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::kernel_vector;
    use crate::hermite::hermite_function;
    use crate::quadrature::gauss_hermite;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_vector() -> FockVector {
        FockVector::new(
            (0..11)
                .map(|n| c((n as f64 * 0.7).sin(), (n as f64 * 1.3).cos()))
                .collect(),
        )
    }

    #[test]
    fn fourier_on_monomials() {
        assert_eq!(fourier_fock(&FockVector::basis(3, 3)).coeff(3), c(0.0, -1.0));
        let f = FockVector::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 1.0)]);
        assert_eq!(fourier_fock(&f), f);
        let g = sample_vector();
        let four = fourier_fock(&fourier_fock(&fourier_fock(&fourier_fock(&g))));
        assert_eq!(four, g);
        assert_eq!(inverse_fourier_fock(&fourier_fock(&g)), g);
    }

    #[test]
    fn rotation_identities() {
        let g = sample_vector();
        assert_eq!(rotation(0.0, &g), g);
        assert!(rotation(std::f64::consts::FRAC_PI_2, &g).max_abs_diff(&fourier_fock(&g)) < 1e-15);
        assert_abs_diff_eq!(rotation(0.37, &g).norm(), g.norm(), epsilon = 1e-14);
    }

    #[test]
    fn spectral_recombination() {
        let g = sample_vector();
        let p: Vec<FockVector> = (0..4).map(|k| spectral_projection(k, &g).unwrap()).collect();
        let combo = p[0]
            .add(&p[1].scale(c(0.0, 1.0)))
            .sub(&p[2])
            .sub(&p[3].scale(c(0.0, 1.0)));
        assert_eq!(combo, fourier_fock(&g));
        assert_eq!(
            spectral_projection(1, &FockVector::basis(5, 5)).unwrap(),
            FockVector::basis(5, 5)
        );
        assert_eq!(spectral_projection(0, &FockVector::basis(5, 5)).unwrap().norm(), 0.0);
        assert!(spectral_projection(4, &g).is_err());
    }

    #[test]
    fn weyl_basic_contract() {
        let w = weyl_matrix(c(0.0, 0.0), 6).unwrap();
        assert_eq!(w.value, OperatorMatrix::identity(6).with_name("weyl"));
        let a = c(0.8, -0.6);
        let w = weyl_matrix(a, 40).unwrap();
        assert!(w.is_reliable());
        assert!(w.value.column(0).max_abs_diff(&kernel_vector(a, 40, true)) < 1e-15);
        assert_abs_diff_eq!(w.value.get(0, 0).re, (-0.5f64).exp(), epsilon = 1e-15);
        assert!(weyl_matrix(c(7.0, 0.0), 40).is_err());
    }

    #[test]
    fn weyl_unitary_and_inverse_on_interior() {
        let a = c(2.1, 2.4);
        let n = 80;
        let w = weyl_matrix(a, n).unwrap().value;
        let block = weyl_interior_block(a, n);
        assert!(block >= 15);
        assert!(w.unitarity_residual(block) < 1e-10);
        let winv = weyl_matrix(-a, n).unwrap().value;
        let prod = w.compose(&winv);
        assert!(prod.block_identity_residual(c(1.0, 0.0), block) < 1e-10);
    }

    #[test]
    fn weyl_entries_match_plane_quadrature() {
        // ⟨W_a e_n, e_p⟩ = ∫ e_n(z-a) k_a(z) conj(e_p(z)) dλ(z)
        let a = c(0.7, -0.4);
        let w = weyl_matrix(a, 20).unwrap().value;
        let rule = PlaneRule::gaussian(40).unwrap();
        for n in 0..4 {
            for p in 0..4 {
                let en = FockVector::basis(n, n);
                let ep = FockVector::basis(p, p);
                let ka = kernel_vector(a, 60, true);
                let q = rule.integrate_dlambda(|z| {
                    eval(&en, z - a).unwrap() * eval(&ka, z).unwrap() * eval(&ep, z).unwrap().conj()
                });
                assert_abs_diff_eq!((q - w.get(p, n)).norm(), 0.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn weyl_flags_truncation() {
        let w = weyl_matrix(c(3.0, 0.0), 10).unwrap();
        assert!(matches!(w.flag, Some(Flag::Truncation { .. })));
    }

    #[test]
    fn translation_modulation_special_cases() {
        let n = 30;
        let id = translation_modulation_fock(0.0, 0.0, n).unwrap().value;
        assert!(id.block_identity_residual(c(1.0, 0.0), n + 1) == 0.0);
        let t = translation_modulation_fock(1.2, 0.0, n).unwrap().value;
        assert!(t.block_max_diff(&weyl_matrix(c(1.2, 0.0), n).unwrap().value, n + 1) < 1e-15);
        let m = translation_modulation_fock(0.0, 0.4, n).unwrap().value;
        let pure = weyl_matrix(c(0.0, -std::f64::consts::PI * 0.4), n).unwrap().value;
        assert!(m.block_max_diff(&pure, n + 1) < 1e-15);
    }

    #[test]
    fn band_operators() {
        let (m, d) = md_matrices(10);
        assert_abs_diff_eq!(
            m.apply(&FockVector::basis(2, 10)).unwrap().coeff(3).re,
            3f64.sqrt(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            d.apply(&FockVector::basis(3, 10)).unwrap().coeff(2).re,
            3f64.sqrt(),
            epsilon = 1e-15
        );
        let a1 = a1_matrix(10).apply(&FockVector::basis(0, 10)).unwrap();
        assert_eq!(a1, FockVector::basis(1, 10).scale(c(0.5, 0.0)));
        let a2 = a2_matrix(10).apply(&FockVector::basis(0, 10)).unwrap();
        assert_eq!(a2, FockVector::basis(1, 10).scale(c(-1.0, 0.0)));
        assert!(d.commutator(&m).block_identity_residual(c(1.0, 0.0), 10) < 1e-13);
        assert!(
            a2_matrix(10)
                .commutator(&a1_matrix(10))
                .block_identity_residual(c(1.0, 0.0), 10)
                < 1e-13
        );
    }

    #[test]
    fn line_fourier_eigenrelation() {
        let rule = gauss_hermite(128).unwrap();
        for n in 0..=6 {
            for &x in &[-3.5, -1.0, 0.0, 0.6, 2.9] {
                let v = fourier_line(|t| c(hermite_function(n, t), 0.0), x, &rule);
                assert_abs_diff_eq!((v - i_pow(n) * hermite_function(n, x)).norm(), 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn dilation_identity_and_gauss() {
        let pipe = BargmannPipeline::new(48, 128, 48).unwrap();
        let pts = [c(0.3, 0.2), c(-0.5, 0.4), c(0.8, 0.0)];
        let res = dilation_fock(1.0, &FockVector::basis(1, 1), &pipe, &pts).unwrap();
        assert!(res.coeffs.max_abs_diff(&FockVector::basis(1, 48)) < 1e-8);
        // B(D_r g) = sqrt(2r/(1+r²)) e^{(1/(1+r²) - 1/2) z²}
        let r = 2.0;
        let res = dilation_fock(r, &FockVector::basis(0, 0), &pipe, &pts).unwrap();
        for (z, primary, cross) in &res.samples {
            let want = (2.0 * r / (1.0 + r * r)).sqrt() * ((1.0 / (1.0 + r * r) - 0.5) * z * z).exp();
            assert_abs_diff_eq!((primary - want).norm(), 0.0, epsilon = 1e-7);
            assert_abs_diff_eq!((cross - want).norm(), 0.0, epsilon = 1e-10);
        }
        assert!(res.flag.is_none() || !matches!(res.flag, Some(Flag::Discrepancy { .. })));
    }

    #[test]
    fn dilation_paths_agree_on_e1() {
        let pipe = BargmannPipeline::new(48, 128, 48).unwrap();
        let pts = [c(0.3, 0.2), c(-0.5, 0.4), c(0.8, 0.0), c(0.1, -0.9)];
        for r in [0.5, 2.0] {
            let res = dilation_fock(r, &FockVector::basis(1, 1), &pipe, &pts).unwrap();
            assert!(res.discrepancy <= 1e-5, "r={r} gap={}", res.discrepancy);
        }
        assert!(dilation_fock(5.0, &FockVector::basis(0, 0), &pipe, &pts).is_err());
    }
}
