//! Gabor systems seen from the Fock side: point sets and their Beurling
//! densities, finite-section frame bounds of kernel systems `{k_{z_n}}`, the
//! lattice criterion `ab < 1`, the box-window system, and finite linear
//! independence checks.
//!
//! The translation–modulation pair `(a, b)` corresponds to the point
//! `z = a - πb i`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bargmann::bargmann_constant;
use crate::error::{Flagged, FockError, Result};
use crate::fock::{inner, kernel_vector, FockVector};
use crate::hermite::project_indicator;
use crate::ops::{weyl_matrix, TRUNCATION_TOLERANCE};
use crate::quadrature::composite_legendre;
use crate::special::poisson_tail;

/// Points closer than this are treated as duplicates.
pub const DISTINCTNESS_EPS: f64 = 1e-9;

/// Largest radius (disk centre distance plus `R`) for on-demand lattice counts.
pub const MAX_GENERATION_RADIUS: f64 = 1e4;

/// Generators of a lattice `{n ω₁ + m ω₂ + offset}` (possibly a finite union of shifts).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeGenerator {
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub offsets: Vec<Complex64>,
}

impl LatticeGenerator {
    /// Time–frequency lattice `aℤ × bℤ`, i.e. points `n a - π m b i`.
    pub fn rectangular(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(FockError::Precondition(format!(
                "lattice steps must be positive, got a={a}, b={b}"
            )));
        }
        Ok(Self {
            omega1: Complex64::new(a, 0.0),
            omega2: Complex64::new(0.0, -std::f64::consts::PI * b),
            offsets: vec![Complex64::new(0.0, 0.0)],
        })
    }

    pub fn general(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        if (omega1.conj() * omega2).im.abs() < 1e-14 {
            return Err(FockError::Precondition("lattice generators are collinear".into()));
        }
        Ok(Self {
            omega1,
            omega2,
            offsets: vec![Complex64::new(0.0, 0.0)],
        })
    }

    /// Adds a shifted copy of the lattice.
    pub fn with_offset(mut self, offset: Complex64) -> Self {
        self.offsets.push(offset);
        self
    }

    /// Points per unit area.
    pub fn density(&self) -> f64 {
        self.offsets.len() as f64 / (self.omega1.conj() * self.omega2).im.abs()
    }

    /// Exact number of points in the closed disk `|z - center| ≤ radius`.
    pub fn count_in_disk(&self, center: Complex64, radius: f64) -> u64 {
        let w1 = self.omega1;
        let w2 = self.omega2;
        let n1 = w1.norm();
        let cross = (w1.conj() * w2).im;
        let mut total = 0u64;
        for off in &self.offsets {
            let d0 = *off - center;
            // perpendicular coordinate of row m is (m·cross + Im(w̄₁ d0)) / |w₁|
            let base = (w1.conj() * d0).im;
            let lo = ((-radius * n1 - base) / cross).min((radius * n1 - base) / cross).ceil() as i64;
            let hi = ((-radius * n1 - base) / cross)
                .max((radius * n1 - base) / cross)
                .floor() as i64;
            for m in lo..=hi {
                let d = d0 + w2 * m as f64;
                // |n w₁ + d|² ≤ R²  ⇔  |w₁|² n² + 2 Re(w̄₁ d) n + |d|² - R² ≤ 0
                let qa = w1.norm_sqr();
                let qb = 2.0 * (w1.conj() * d).re;
                let qc = d.norm_sqr() - radius * radius;
                let disc = qb * qb - 4.0 * qa * qc;
                if disc < 0.0 {
                    continue;
                }
                let s = disc.sqrt();
                let n_lo = ((-qb - s) / (2.0 * qa)).ceil() as i64;
                let n_hi = ((-qb + s) / (2.0 * qa)).floor() as i64;
                if n_hi >= n_lo {
                    total += (n_hi - n_lo + 1) as u64;
                }
            }
        }
        total
    }

    /// All points with `|z| ≤ radius`, sorted by real then imaginary part.
    pub fn points_in_disk(&self, radius: f64) -> Vec<Complex64> {
        let w1 = self.omega1;
        let w2 = self.omega2;
        let cross = (w1.conj() * w2).im.abs();
        // |m| ≤ R |w₁| / cross + 1 and similarly for n
        let mut pts = Vec::new();
        for off in &self.offsets {
            let reach = radius + off.norm();
            let mmax = (reach * w1.norm() / cross).ceil() as i64;
            let nmax = (reach * w2.norm() / cross).ceil() as i64;
            for m in -mmax - 1..=mmax + 1 {
                for n in -nmax - 1..=nmax + 1 {
                    let z = w1 * n as f64 + w2 * m as f64 + off;
                    if z.norm() <= radius + 1e-12 {
                        pts.push(z);
                    }
                }
            }
        }
        pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        pts
    }
}

/// A finite set of distinct points, optionally remembering the lattice it was
/// clipped from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet {
    points: Vec<Complex64>,
    generator: Option<LatticeGenerator>,
}

impl PointSet {
    /// Rejects sets with two points closer than [`DISTINCTNESS_EPS`].
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        let gap = min_gap(&points);
        if gap <= DISTINCTNESS_EPS {
            return Err(FockError::Distinctness(format!("minimum pairwise distance {gap:e}")));
        }
        Ok(Self {
            points,
            generator: None,
        })
    }

    /// The lattice points inside `|z| ≤ radius`, keeping the generator for
    /// on-demand density counts.
    pub fn from_lattice(generator: LatticeGenerator, radius: f64) -> Result<Self> {
        let pts = generator.points_in_disk(radius);
        let mut s = Self::new(pts)?;
        s.generator = Some(generator);
        Ok(s)
    }

    pub fn rectangular(a: f64, b: f64, radius: f64) -> Result<Self> {
        Self::from_lattice(LatticeGenerator::rectangular(a, b)?, radius)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn generator(&self) -> Option<&LatticeGenerator> {
        self.generator.as_ref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Adds points, keeping distinctness. The result has no generator.
    pub fn extended(&self, extra: &[Complex64]) -> Result<Self> {
        let mut pts = self.points.clone();
        pts.extend_from_slice(extra);
        Self::new(pts)
    }

    /// Points in `|z - center| ≤ radius`: exact lattice count when a generator
    /// is known, otherwise a direct count of the finite set.
    pub fn count_in_disk(&self, center: Complex64, radius: f64) -> u64 {
        match &self.generator {
            Some(g) => g.count_in_disk(center, radius),
            None => self.points.iter().filter(|z| (**z - center).norm() <= radius).count() as u64,
        }
    }
}

fn min_gap(points: &[Complex64]) -> f64 {
    let mut sorted: Vec<Complex64> = points.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut best = f64::INFINITY;
    for i in 0..sorted.len() {
        for j in (i + 1)..sorted.len() {
            if sorted[j].re - sorted[i].re >= best {
                break;
            }
            best = best.min((sorted[j] - sorted[i]).norm());
        }
    }
    best
}

/// Lower and upper disk-count densities per radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub r_values: Vec<f64>,
    pub lower_est: Vec<f64>,
    pub upper_est: Vec<f64>,
    /// Lower estimate at the largest radius.
    pub d_minus: f64,
    /// Upper estimate at the largest radius.
    pub d_plus: f64,
}

/// Square grid of `side × side` centres spanning `[-half, half]²`.
pub fn center_grid(half: f64, side: usize) -> Vec<Complex64> {
    if side <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    let step = 2.0 * half / (side - 1) as f64;
    let mut out = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            out.push(Complex64::new(-half + i as f64 * step, -half + j as f64 * step));
        }
    }
    out
}

/// `inf` and `sup` over the centres of `|Z ∩ B(c, R)| / (πR²)` for each `R`.
pub fn density_estimate(z: &PointSet, r_list: &[f64], centers: &[Complex64]) -> Result<DensityReport> {
    if r_list.is_empty() || centers.is_empty() {
        return Err(FockError::Precondition(
            "need at least one radius and one centre".into(),
        ));
    }
    let reach = centers.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut lower = Vec::with_capacity(r_list.len());
    let mut upper = Vec::with_capacity(r_list.len());
    for &r in r_list {
        if r.is_nan() || r <= 0.0 {
            return Err(FockError::Precondition(format!("radius must be positive, got {r}")));
        }
        if z.generator.is_some() && r + reach > MAX_GENERATION_RADIUS {
            return Err(FockError::Coverage(format!(
                "disks reach {} beyond the generation radius {MAX_GENERATION_RADIUS}",
                r + reach
            )));
        }
        let area = std::f64::consts::PI * r * r;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for &c in centers {
            let d = z.count_in_disk(c, r) as f64 / area;
            lo = lo.min(d);
            hi = hi.max(d);
        }
        lower.push(lo);
        upper.push(hi);
    }
    Ok(DensityReport {
        r_values: r_list.to_vec(),
        d_minus: *lower.last().unwrap_or(&0.0),
        d_plus: *upper.last().unwrap_or(&0.0),
        lower_est: lower,
        upper_est: upper,
    })
}

/// `(min_gap > ε, min_gap)`; a single point has gap `+∞`.
pub fn separation_check(z: &PointSet) -> (bool, f64) {
    let gap = min_gap(&z.points);
    (gap > DISTINCTNESS_EPS, gap)
}

/// Smallest and largest eigenvalues of the frame operator `Σ k_{z_n} k_{z_n}*`
/// compressed to `span{e_0..e_core}`.
pub fn frame_bounds_finite(z: &PointSet, degree: usize, core_degree: usize) -> Result<(f64, f64)> {
    if 2 * core_degree > degree {
        return Err(FockError::Precondition(format!(
            "core degree {core_degree} exceeds N/2"
        )));
    }
    let dim = core_degree + 1;
    let mut s = DMatrix::<Complex64>::zeros(dim, dim);
    for &p in &z.points {
        if p.norm_sqr() > degree as f64 / 2.0 + 1e-12 {
            return Err(FockError::Precondition(format!("|z|^2 = {} exceeds N/2", p.norm_sqr())));
        }
        let defect = poisson_tail(p.norm_sqr(), degree);
        if defect > TRUNCATION_TOLERANCE {
            return Err(FockError::Resolution(format!(
                "kernel at {p} has truncation defect {defect:e}"
            )));
        }
        let k = kernel_vector(p, core_degree, true);
        let kc = k.coeffs();
        for i in 0..dim {
            for j in 0..dim {
                s[(i, j)] += kc[i] * kc[j].conj();
            }
        }
    }
    let eig = SymmetricEigen::new(s).eigenvalues;
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min).max(0.0);
    let hi = eig.iter().copied().fold(0.0, f64::max);
    Ok((lo, hi))
}

/// `⟨k_{z_n}, k_{z_m}⟩`-type Gram matrix with entry `(m, n) = ⟨k_{z_m}, k_{z_n}⟩`.
pub fn kernel_gram(z: &PointSet, degree: usize) -> DMatrix<Complex64> {
    let ks: Vec<FockVector> = z.points.iter().map(|&p| kernel_vector(p, degree, true)).collect();
    DMatrix::from_fn(ks.len(), ks.len(), |m, n| inner(&ks[m], &ks[n]))
}

/// Frame criterion for `aℤ × bℤ`: `ab < 1`.
pub fn lattice_frame_predicate(a: f64, b: f64) -> Result<bool> {
    if !(a > 0.0 && b > 0.0) {
        return Err(FockError::Precondition(format!(
            "lattice steps must be positive, got a={a}, b={b}"
        )));
    }
    Ok(a * b < 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameVerdict {
    Frame,
    NotFrame,
    Undecided,
}

/// Default relative margin around the critical density `1/π`.
pub const DENSITY_MARGIN: f64 = 0.1;

/// Smallest radius at which a density verdict is issued.
pub const MIN_VERDICT_RADIUS: f64 = 30.0;

/// Density verdict with a relative `margin` around `1/π`.
pub fn density_frame_predicate(report: &DensityReport, separated: bool, margin: f64) -> Result<FrameVerdict> {
    let r = report.r_values.iter().copied().fold(0.0, f64::max);
    if r < MIN_VERDICT_RADIUS {
        return Err(FockError::Precondition(format!(
            "density verdicts need R ≥ {MIN_VERDICT_RADIUS}, largest R is {r}"
        )));
    }
    let critical = 1.0 / std::f64::consts::PI;
    Ok(if separated && report.d_minus > critical * (1.0 + margin) {
        FrameVerdict::Frame
    } else if report.d_minus < critical * (1.0 - margin) {
        FrameVerdict::NotFrame
    } else {
        FrameVerdict::Undecided
    })
}

/// `Bχ_{[0,1)}(z) = c ∫_0^1 e^{2xz - x² - z²/2} dx` by composite Legendre.
pub fn box_window_fock(z: Complex64) -> Complex64 {
    let panels = (2.0 * z.norm()).ceil().max(2.0) as usize;
    let rule = composite_legendre(&[0.0, 1.0], panels, 32).expect("valid breakpoints");
    let s: Complex64 = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&x, &w)| (2.0 * x * z - x * x - 0.5 * z * z).exp() * w)
        .sum();
    s * bargmann_constant()
}

/// Coefficients of `Bχ_{[0,1)}` on `e_0..e_N`. The coefficients decay slowly,
/// so the projection carries an under-resolution flag at any practical `N`.
pub fn box_window_coeffs(degree: usize) -> Result<Flagged<FockVector>> {
    let p = project_indicator(0.0, 1.0, degree)?;
    Ok(Flagged::with(FockVector::new(p.value.into_coeffs()), p.flag))
}

/// `z_{mn} = n - mπi`.
pub fn box_point(m: i64, n: i64) -> Complex64 {
    Complex64::new(n as f64, -(m as f64) * std::f64::consts::PI)
}

/// Gram matrix `⟨f_{mn}, f_{m'n'}⟩` of `f_{mn} = W_{z_{mn}} Bχ_{[0,1)}`, indexed
/// in row-major `(m, n)` order.
pub fn box_frame_gram(m_range: &[i64], n_range: &[i64], degree: usize) -> Result<Flagged<DMatrix<Complex64>>> {
    let window = box_window_coeffs(degree)?;
    let mut flag = window.flag;
    let window = window.value;
    let mut vecs = Vec::new();
    for &m in m_range {
        for &n in n_range {
            let z = box_point(m, n);
            if z.norm_sqr() > degree as f64 / 2.0 + 1e-12 {
                return Err(FockError::Precondition(format!(
                    "|z_({m},{n})|^2 = {} exceeds N/2",
                    z.norm_sqr()
                )));
            }
            let w = weyl_matrix(z, degree)?;
            if flag.is_none() {
                flag = w.flag.clone();
            }
            vecs.push(w.value.apply(&window)?);
        }
    }
    let g = DMatrix::from_fn(vecs.len(), vecs.len(), |i, j| inner(&vecs[i], &vecs[j]));
    Ok(Flagged::with(g, flag))
}

/// Largest entrywise deviation of a Gram matrix from the identity.
pub fn gram_identity_deviation(g: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - want).norm());
        }
    }
    worst
}

/// Gram test of `{W_{z_k} f}`: independent iff the smallest singular value
/// exceeds `1e-10` times the largest. Returns the ratio as evidence.
pub fn linear_independence_check(f: &FockVector, points: &[Complex64], degree: usize) -> Result<(bool, f64)> {
    if points.is_empty() || points.len() > 12 {
        return Err(FockError::Precondition(format!(
            "need 1..=12 points, got {}",
            points.len()
        )));
    }
    PointSet::new(points.to_vec())?;
    let f = f.resized(degree);
    if f.norm() == 0.0 {
        return Err(FockError::Precondition("f must be nonzero".into()));
    }
    let mut vecs = Vec::with_capacity(points.len());
    for &z in points {
        vecs.push(weyl_matrix(z, degree)?.value.apply(&f)?);
    }
    let g = DMatrix::from_fn(vecs.len(), vecs.len(), |i, j| inner(&vecs[i], &vecs[j]));
    // Gram is Hermitian positive semidefinite, so singular values are eigenvalues
    let eig = SymmetricEigen::new(g).eigenvalues;
    let hi = eig.iter().copied().fold(0.0, f64::max);
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min).max(0.0);
    let ratio = if hi > 0.0 { lo / hi } else { 0.0 };
    Ok((ratio > 1e-10, ratio))
}
