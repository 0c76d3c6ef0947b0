//! Batch verification: each named suite runs a module's invariants at the
//! configured degree and reports one case per check.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bargmann::{
    bargmann_coeff, bargmann_quadrature, inverse_bargmann_quadrature, verify_pbound, BargmannPipeline, PolarGrid,
};
use crate::error::{FockError, Result};
use crate::fock::{eval, FockVector};
use crate::gabor::{
    center_grid, density_estimate, density_frame_predicate, frame_bounds_finite, kernel_gram, separation_check,
    FrameVerdict, PointSet, DENSITY_MARGIN,
};
use crate::hermite::{hermite_function, LineVector};
use crate::operator::OperatorMatrix;
use crate::ops::{
    a1_matrix, a2_matrix, dilation_fock, fourier_fock, fourier_line, i_pow, md_matrices, rotation_matrix,
    spectral_projection, translation_modulation_fock, translation_modulation_pipeline, weyl_interior_block,
    weyl_matrix,
};
use crate::quadrature::{gauss_hermite, PlaneRule};
use crate::quantize::{toeplitz_monomial_matrix, verify_anti_wick, verify_weyl_heat, weyl_quantize_poly, PolySymbol};
use crate::singular::{
    a_half_fock, berezin_with_matrix, boundedness_probe, classify_trend, fock_norm_a, hilbert_fock_matrix,
    s_phi_matrix, EntireSymbol, Trend,
};
use crate::uncertainty::{certified_degree, extremal_coeffs, nonextremal_gap, s1_matrix, s2_matrix, ExtremalParams};

pub const SUITE_NAMES: [&str; 9] = [
    "bargmann",
    "fourier",
    "weyl",
    "dilation",
    "gabor",
    "hilbert",
    "uncertainty",
    "quantize",
    "all",
];

pub const DEFAULT_SEED: u64 = 0x5eed_f0c5;

/// Everything a report needs to be re-run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub degree: usize,
    pub line_nodes: usize,
    pub plane_nodes: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            degree: 64,
            line_nodes: 128,
            plane_nodes: 48,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub reference: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub cases: Vec<CaseResult>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

struct Cases(Vec<CaseResult>);

impl Cases {
    fn push(&mut self, id: &str, reference: &str, residual: f64, tolerance: f64) {
        self.0.push(CaseResult {
            id: id.to_string(),
            reference: reference.to_string(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        });
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_disk_points(rng: &mut ChaCha8Rng, count: usize, radius: f64) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            Complex64::from_polar(r, 2.0 * std::f64::consts::PI * rng.random::<f64>())
        })
        .collect()
}

/// Random unit vector on `e_0..e_{active}` padded with zeros up to `degree`.
pub fn random_padded_vector(rng: &mut ChaCha8Rng, active: usize, degree: usize) -> FockVector {
    let mut v = vec![c(0.0, 0.0); degree + 1];
    for x in v.iter_mut().take(active + 1) {
        *x = c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0);
    }
    let f = FockVector::new(v);
    let n = f.norm();
    f.scale(c(1.0 / n, 0.0))
}

/// Draws `(c, a, b)` with `|α| ≤ 0.4`, i.e. `c ∈ [1/9, 9]`.
pub fn random_extremal_params(rng: &mut ChaCha8Rng) -> ExtremalParams {
    let lnc = (rng.random::<f64>() * 2.0 - 1.0) * 9f64.ln();
    let a = rng.random::<f64>() * 3.0 - 1.5;
    let b = rng.random::<f64>() * 3.0 - 1.5;
    let amp = c(rng.random::<f64>() + 0.5, rng.random::<f64>() - 0.5);
    ExtremalParams::new(lnc.exp(), a, b)
        .expect("c is positive")
        .with_amplitude(amp)
}

fn bargmann_cases(cfg: &SuiteConfig, out: &mut Cases) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rule = gauss_hermite(cfg.line_nodes)?;
    let pts = random_disk_points(&mut rng, 20, 2.0);
    let mut worst: f64 = 0.0;
    for n in 0..=8 {
        let en = FockVector::basis(n, n);
        for &z in &pts {
            let q = bargmann_quadrature(|x| c(hermite_function(n, x), 0.0), z, &rule).value;
            worst = worst.max((q - eval(&en, z)?).norm());
        }
    }
    out.push(
        "bargmann.transport",
        "quadrature of B h_n equals e_n, n ≤ 8, |z| ≤ 2",
        worst,
        1e-7,
    );

    let f = random_padded_vector(&mut rng, cfg.degree, cfg.degree);
    let line = LineVector::new(f.coeffs().to_vec());
    out.push(
        "bargmann.plancherel",
        "‖B f‖ = ‖f‖ on coefficient vectors",
        (bargmann_coeff(&line).norm() - line.norm()).abs(),
        1e-12,
    );

    let plane = PlaneRule::gaussian(cfg.plane_nodes)?;
    let mut worst: f64 = 0.0;
    for n in 0..=8 {
        for &x in &[-1.5, -0.3, 0.0, 0.8, 1.7] {
            let v = inverse_bargmann_quadrature(&FockVector::basis(n, n), x, &plane).value;
            worst = worst.max((v - hermite_function(n, x)).norm());
        }
    }
    out.push(
        "bargmann.round-trip",
        "plane quadrature of B⁻¹ e_n equals h_n, n ≤ 8",
        worst,
        1e-6,
    );

    let grid = PolarGrid {
        radius: 4.0,
        radial: 40,
        angular: 40,
    };
    let (lhs, rhs) = verify_pbound(|_| c(1.0, 0.0), 1.0, &rule, &grid);
    out.push(
        "bargmann.sup-bound-constant",
        "‖B1‖_∞ attains c√π (relative gap)",
        (1.0 - lhs / rhs).abs(),
        0.02,
    );
    let gauss = |x: f64| c((2.0 / std::f64::consts::PI).powf(0.25) * (-x * x).exp(), 0.0);
    let (lhs, rhs) = verify_pbound(gauss, (2.0 / std::f64::consts::PI).powf(0.25), &rule, &grid);
    out.push(
        "bargmann.sup-bound-gauss",
        "‖B g‖_∞ ≤ c√π ‖g‖_∞ (excess ratio)",
        (lhs / rhs - 1.0).max(0.0),
        1e-3,
    );
    Ok(())
}

fn fourier_cases(cfg: &SuiteConfig, out: &mut Cases) -> Result<()> {
    let n = cfg.degree;
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        let e = FockVector::basis(k, n);
        worst = worst.max(fourier_fock(&e).max_abs_diff(&e.scale(i_pow(k))));
    }
    out.push("fourier.fock-diagonal", "F e_n = iⁿ e_n", worst, 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let g = random_padded_vector(&mut rng, n, n);
    let p: Vec<FockVector> = (0..4).map(|k| spectral_projection(k, &g)).collect::<Result<_>>()?;
    let combo = p[0]
        .add(&p[1].scale(c(0.0, 1.0)))
        .sub(&p[2])
        .sub(&p[3].scale(c(0.0, 1.0)));
    out.push(
        "fourier.recombination",
        "P₀ + iP₁ - P₂ - iP₃ = F",
        combo.max_abs_diff(&fourier_fock(&g)),
        0.0,
    );

    let rule = gauss_hermite(cfg.line_nodes)?;
    let mut worst: f64 = 0.0;
    for k in 0..=6 {
        for j in 0..=16 {
            let x = -4.0 + 0.5 * j as f64;
            let v = fourier_line(|t| c(hermite_function(k, t), 0.0), x, &rule);
            worst = worst.max((v - i_pow(k) * hermite_function(k, x)).norm());
        }
    }
    out.push(
        "fourier.line-eigenrelation",
        "line Fourier of h_n is iⁿ h_n on |x| ≤ 4",
        worst,
        1e-6,
    );

    let rot = rotation_matrix(0.7, n);
    out.push(
        "fourier.rotation-unitary",
        "U_θ* U_θ = I",
        rot.unitarity_residual(n + 1),
        1e-15,
    );
    Ok(())
}

fn weyl_cases(cfg: &SuiteConfig, out: &mut Cases) -> Result<()> {
    let n = cfg.degree;
    let one = c(1.0, 0.0);
    let a = a2_matrix(n).commutator(&a1_matrix(n));
    out.push(
        "weyl.commutator-a2-a1",
        "[A₂, A₁] = I on indices < N",
        a.block_identity_residual(one, n),
        1e-12,
    );
    let (m, d) = md_matrices(n);
    out.push(
        "weyl.commutator-d-m",
        "[D, M] = I on indices < N",
        d.commutator(&m).block_identity_residual(one, n),
        1e-12,
    );
    for (label, a) in [("0.5", c(0.5, 0.0)), ("1", c(1.0, 0.0)), ("1.2-0.9i", c(1.2, -0.9))] {
        if a.norm_sqr() > n as f64 {
            continue;
        }
        let w = weyl_matrix(a, n)?.value;
        let block = weyl_interior_block(a, n);
        out.push(
            &format!("weyl.unitary.a={label}"),
            "W_a* W_a = I on the interior block",
            w.unitarity_residual(block),
            1e-10,
        );
        let inv = weyl_matrix(-a, n)?.value;
        out.push(
            &format!("weyl.inverse.a={label}"),
            "W_a W_{-a} = I on the interior block",
            w.compose(&inv).block_identity_residual(one, block),
            1e-10,
        );
    }
    let rule = gauss_hermite(cfg.line_nodes)?;
    let plane = PlaneRule::gaussian(cfg.plane_nodes)?;
    for (a, b) in [(0.5, 0.3), (1.0, 0.0), (0.0, 0.5)] {
        let tm = translation_modulation_fock(a, b, n)?.value;
        let mut worst: f64 = 0.0;
        for k in 0..=1 {
            let col = translation_modulation_pipeline(&FockVector::basis(k, k), a, b, n, &rule, &plane).value;
            worst = worst.max(col.max_abs_diff(&tm.column(k)));
        }
        out.push(
            &format!("weyl.pipeline.a={a}.b={b}"),
            "line pipeline of M_b T_a matches e^{iπab} W_(a-πbi) on e₀, e₁",
            worst,
            1e-6,
        );
    }
    Ok(())
}

fn dilation_cases(cfg: &SuiteConfig, out: &mut Cases) -> Result<()> {
    let pipe = BargmannPipeline::new(cfg.degree.clamp(24, 48), cfg.line_nodes, cfg.plane_nodes)?;
    let pts = [c(0.3, 0.2), c(-0.5, 0.4), c(0.8, 0.0), c(0.1, -0.9)];
    for r in [0.5, 2.0] {
        for k in 0..=1 {
            let res = dilation_fock(r, &FockVector::basis(k, k), &pipe, &pts)?;
            out.push(
                &format!("dilation.r={r}.e{k}"),
                "line pipeline and plane kernel of the dilation agree",
                res.discrepancy,
                1e-5,
            );
        }
    }
    Ok(())
}

fn gabor_cases(cfg: &SuiteConfig, out: &mut Cases) -> Result<()> {
    let centers = center_grid(5.0, 3);
    for (a, b) in [(1.0, 1.0), (0.8, 0.8), (0.5, 1.5)] {
        let z = PointSet::rectangular(a, b, 3.0)?;
        let rep = density_estimate(&z, &[50.0], &centers)?;
        let want = 1.0 / (std::f64::consts::PI * a * b);
        let err = (rep.d_minus / want - 1.0).abs().max((rep.d_plus / want - 1.0).abs());
        out.push(
            &format!("gabor.density.a={a}.b={b}"),
            "disk counts approach 1/(πab) at R = 50",
            err,
            0.05,
        );
    }

    let n = cfg.degree.max(80);
    let dense = PointSet::rectangular(0.8, 0.8, 6.0)?;
    let sparse = PointSet::rectangular(1.1, 1.1, 6.0)?;
    let (a1, b1) = frame_bounds_finite(&dense, n, 10)?;
    let (a2, b2) = frame_bounds_finite(&sparse, n, 10)?;
    out.push(
        "gabor.frame-ratio-contrast",
        "A/B at ab = 0.64 is at least 10× A/B at ab = 1.21 (inverse ratio ≤ 1)",
        10.0 * (a2 / b2) / (a1 / b1),
        1.0,
    );

    let pts = PointSet::new(vec![c(0.3, -0.2), c(-1.0, 0.5), c(0.0, 1.2), c(1.4, 0.9)])?;
    let g = kernel_gram(&pts, 60);
    let p = pts.points();
    let mut worst: f64 = 0.0;
    for i in 0..p.len() {
        for j in 0..p.len() {
            let want = (p[i].conj() * p[j] - 0.5 * (p[i].norm_sqr() + p[j].norm_sqr())).exp();
            worst = worst.max((g[(i, j)] - want).norm());
        }
    }
    out.push("gabor.kernel-gram", "⟨k_a, k_b⟩ closed form", worst, 1e-10);

    let mut wrong = 0.0;
    for (a, want) in [
        (0.8, FrameVerdict::Frame),
        (1.2, FrameVerdict::NotFrame),
        (1.0, FrameVerdict::Undecided),
    ] {
        let z = PointSet::rectangular(a, a, 3.0)?;
        let rep = density_estimate(&z, &[30.0, 50.0], &centers)?;
        if density_frame_predicate(&rep, separation_check(&z).0, DENSITY_MARGIN)? != want {
            wrong += 1.0;
        }
    }
    out.push(
        "gabor.density-verdicts",
        "verdicts for ab = 0.64, 1.44, 1 (count of wrong verdicts)",
        wrong,
        0.0,
    );
    Ok(())
}

/// `max |T² + I|` on the leading `block × block` corner of the Hilbert matrix.
pub fn hilbert_square_residual(degree: usize, block: usize) -> Result<f64> {
    let t = hilbert_fock_matrix(degree)?;
    Ok(t.compose(&t).block_identity_residual(c(-1.0, 0.0), block))
}

fn hilbert_cases(cfg: &SuiteConfig, out: &mut Cases) -> Result<()> {
    let n = cfg.degree;
    let t = hilbert_fock_matrix(n)?;
    let mut worst: f64 = 0.0;
    for i in 0..=n {
        for j in (i % 2..=n).step_by(2) {
            worst = worst.max(t.get(i, j).norm());
        }
    }
    out.push("hilbert.parity", "entries vanish when indices share parity", worst, 0.0);

    let a = a_half_fock(n / 2 + 1).resized(n);
    let want = a.scale(c(-2.0 / std::f64::consts::PI.sqrt(), 0.0));
    out.push(
        "hilbert.column-zero",
        "T e₀ = -(2/√π) A(z/√2)",
        t.column(0).max_abs_diff(&want),
        1e-14,
    );

    let norm = fock_norm_a(200);
    out.push(
        "hilbert.norm-two-paths",
        "series and coefficient norms of A(z/√2) agree at 200 terms",
        (norm.series - norm.coefficient_path).abs(),
        1e-12,
    );
    let partial = fock_norm_a(n.div_ceil(2));
    out.push(
        "hilbert.column-zero-norm",
        "‖T e₀‖² = (4/π) ‖A(z/√2)‖² (same truncation)",
        (t.column(0).norm_sqr() - 4.0 / std::f64::consts::PI * partial.series).abs(),
        1e-12,
    );

    let degrees = [n / 4, n / 2, n];
    let residuals: Vec<f64> = degrees
        .iter()
        .map(|&d| hilbert_square_residual(d, 9))
        .collect::<Result<_>>()?;
    out.push(
        &format!("hilbert.square.n={:03}", degrees[0]),
        "|T² + I| on e₀..e₈ (reported; bounded by 1)",
        residuals[0],
        1.0,
    );
    for k in 1..3 {
        out.push(
            &format!("hilbert.square.n={:03}", degrees[k]),
            "|T² + I| on e₀..e₈ does not exceed the previous degree's",
            residuals[k],
            residuals[k - 1],
        );
    }

    let a = 0.5;
    let phi = EntireSymbol::exponential(c(a, 0.0));
    let s = s_phi_matrix(&phi, n)?;
    let w = weyl_matrix(c(a, 0.0), n)?.value.scale(c((a * a / 2.0).exp(), 0.0));
    let block = weyl_interior_block(c(a, 0.0), n);
    out.push(
        "hilbert.exponential-symbol",
        "S for e^{u a} equals e^{a²/2} W_a (a real) on the interior block",
        s.block_max_diff(&w, block),
        1e-8,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let radius = (n as f64).sqrt() / 2.0;
    let pts = random_disk_points(&mut rng, 10, radius.min(2.0));
    let mut worst: f64 = 0.0;
    for phi in [
        EntireSymbol::from_real("u", &[0.0, 1.0]),
        crate::singular::hilbert_symbol(),
    ] {
        let s = s_phi_matrix(&phi, n)?;
        for &z in &pts {
            let (l, r) = berezin_with_matrix(&s, &phi, z);
            worst = worst.max((l - r).norm());
        }
    }
    out.push("hilbert.berezin", "⟨S k_z, k_z⟩ = φ(z - z̄) at 10 points", worst, 1e-6);

    let probe_degrees = [16, 32, 64];
    for (label, phi, want) in [
        ("gauss-0.25", EntireSymbol::gaussian(0.25), Trend::Bounded),
        ("gauss-0.6", EntireSymbol::gaussian(0.6), Trend::Growing),
        ("exp-minus-i", EntireSymbol::exponential(c(0.0, -1.0)), Trend::Growing),
    ] {
        let norms = boundedness_probe(&phi, &probe_degrees)?;
        let ok = classify_trend(&norms) == want;
        out.push(
            &format!("hilbert.probe.{label}"),
            &format!("norm trend over N = 16, 32, 64 is {want:?} ({norms:.3?})"),
            if ok { 0.0 } else { 1.0 },
            0.0,
        );
    }
    Ok(())
}

fn uncertainty_cases(cfg: &SuiteConfig, out: &mut Cases) -> Result<()> {
    let n = cfg.degree;
    let (s1, s2) = (s1_matrix(n), s2_matrix(n));
    out.push(
        "uncertainty.commutator",
        "[S₁, S₂] = -2iI on indices ≤ N-2",
        s1.commutator(&s2).block_identity_residual(c(0.0, -2.0), n - 1),
        1e-12,
    );
    out.push(
        "uncertainty.self-adjoint",
        "S₁ and S₂ are Hermitian",
        s1.hermitian_residual(n + 1).max(s2.hermitian_residual(n + 1)),
        0.0,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let f = random_padded_vector(&mut rng, n - 2, n);
        let a = rng.random::<f64>() * 4.0 - 2.0;
        let b = rng.random::<f64>() * 4.0 - 2.0;
        worst = worst.max(-nonextremal_gap(&f, a, b).value);
    }
    out.push(
        "uncertainty.inequality",
        "lhs ≥ rhs on 20 random padded vectors (max rhs - lhs)",
        worst.max(0.0),
        1e-9,
    );
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let p = random_extremal_params(&mut rng);
        let deg = certified_degree(&p, 8, 1024)?;
        let f = extremal_coeffs(&p, deg)?;
        let g = nonextremal_gap(&f, p.a, p.b);
        worst = worst.max(g.value.abs() / f.norm_sqr());
    }
    out.push(
        "uncertainty.equality",
        "extremal family attains equality (relative gap)",
        worst,
        1e-6,
    );
    Ok(())
}

fn quantize_cases(cfg: &SuiteConfig, out: &mut Cases) -> Result<()> {
    let n = cfg.degree.clamp(8, 32);
    let rule = PlaneRule::gaussian(20)?;
    let mut worst: f64 = 0.0;
    let mut fact = [1.0f64; 7];
    for k in 1..7 {
        fact[k] = fact[k - 1] * k as f64;
    }
    for p in 0..=6u32 {
        for q in 0..=6u32 {
            let v = rule.integrate_dlambda(|z| z.powu(p) * z.conj().powu(q));
            let want = if p == q { fact[p as usize] } else { 0.0 };
            worst = worst.max((v - want).norm());
        }
    }
    out.push("quantize.moments", "∫ z^p z̄^q dλ = δ_pq p!, p, q ≤ 6", worst, 1e-10);

    let mut worst: f64 = 0.0;
    for m in 0..=4 {
        for k in 0..=(4 - m) {
            worst = worst.max(verify_anti_wick(&PolySymbol::monomial(m, k, c(1.0, 0.0)), n)?);
        }
    }
    out.push(
        "quantize.anti-wick",
        "Σ a Dⁿ M^m equals the Toeplitz matrix, m + n ≤ 4",
        worst,
        1e-12,
    );

    let mut worst: f64 = 0.0;
    let mut symbols = vec![PolySymbol::constant(1.0)];
    for m in 0..=2 {
        for k in 0..=(2 - m) {
            symbols.push(PolySymbol::monomial(m, k, c(0.7, -0.4)));
        }
    }
    symbols.push(PolySymbol::monomial(1, 0, c(1.0, 0.0)).add(&PolySymbol::monomial(0, 1, c(1.0, 0.0))));
    for s in &symbols {
        worst = worst.max(verify_weyl_heat(s, n)?);
    }
    out.push(
        "quantize.weyl-heat",
        "Toeplitz equals Weyl of the heat-smoothed symbol, degree ≤ 2",
        worst,
        1e-8,
    );

    let t = toeplitz_monomial_matrix(1, 1, n)?;
    let osc = PolySymbol::from_x_zeta(&[(2, 0, c(1.0, 0.0)), (0, 2, c(1.0, 0.0))]).add(&PolySymbol::constant(0.5));
    let w = weyl_quantize_poly(&osc, n)?;
    let diag = OperatorMatrix::diagonal("n+1", n, |j| c((j + 1) as f64, 0.0));
    let r = t.block_max_diff(&diag, n + 1).max(w.block_max_diff(&diag, n + 1));
    out.push(
        "quantize.oscillator",
        "T of |z|² and Weyl of x² + ζ² + ½ are both diag(n+1)",
        r,
        1e-10,
    );
    Ok(())
}

type SuiteFn = fn(&SuiteConfig, &mut Cases) -> Result<()>;

const SUITES: [(&str, SuiteFn); 8] = [
    ("bargmann", bargmann_cases),
    ("fourier", fourier_cases),
    ("weyl", weyl_cases),
    ("dilation", dilation_cases),
    ("gabor", gabor_cases),
    ("hilbert", hilbert_cases),
    ("uncertainty", uncertainty_cases),
    ("quantize", quantize_cases),
];

/// Runs one suite (or `all`). Cases are sorted by id.
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<VerificationReport> {
    if config.degree < 8 {
        return Err(FockError::Precondition(format!(
            "suite degree must be at least 8, got {}",
            config.degree
        )));
    }
    let selected: Vec<&(&str, SuiteFn)> = if name == "all" {
        SUITES.iter().collect()
    } else {
        let s = SUITES.iter().find(|(n, _)| *n == name).ok_or_else(|| {
            FockError::Precondition(format!("unknown suite '{name}'; expected one of {SUITE_NAMES:?}"))
        })?;
        vec![s]
    };
    let mut cases = Cases(Vec::new());
    for (suite, run) in selected {
        if let Err(e) = run(config, &mut cases) {
            cases.push(&format!("{suite}.error"), &e.to_string(), f64::INFINITY, 0.0);
        }
    }
    let mut cases = cases.0;
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    let pass = cases.iter().all(|c| c.pass);
    Ok(VerificationReport {
        suite: name.to_string(),
        config: *config,
        cases,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            degree: 32,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn fourier_suite_passes() {
        let r = run_suite("fourier", &small()).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.cases.windows(2).all(|w| w[0].id <= w[1].id));
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", &small()).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&run_suite("uncertainty", &small()).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite("uncertainty", &small()).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
