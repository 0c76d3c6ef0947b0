//! Dense operator matrices on truncated orthonormal bases.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::fock::FockVector;
use crate::hermite::LineVector;

/// Which orthonormal basis the matrix is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// Monomials `e_n` of the Fock space.
    FockE,
    /// Hermite functions `h_n` of the line.
    LineH,
}

/// `(N+1)×(N+1)` complex matrix with entry `(p, n) = ⟨A e_n, e_p⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub name: String,
    pub basis: Basis,
    entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn new(name: impl Into<String>, basis: Basis, entries: DMatrix<Complex64>) -> Self {
        assert!(entries.is_square(), "operator matrices are square");
        Self {
            name: name.into(),
            basis,
            entries,
        }
    }

    pub fn zeros(name: impl Into<String>, basis: Basis, degree: usize) -> Self {
        Self::new(name, basis, DMatrix::zeros(degree + 1, degree + 1))
    }

    pub fn identity(degree: usize) -> Self {
        Self::new("identity", Basis::FockE, DMatrix::identity(degree + 1, degree + 1))
    }

    /// Diagonal matrix from `d(n)`.
    pub fn diagonal<F: Fn(usize) -> Complex64>(name: impl Into<String>, degree: usize, d: F) -> Self {
        let mut m = DMatrix::zeros(degree + 1, degree + 1);
        for n in 0..=degree {
            m[(n, n)] = d(n);
        }
        Self::new(name, Basis::FockE, m)
    }

    pub fn degree(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn column(&self, n: usize) -> FockVector {
        FockVector::new(self.entries.column(n).iter().copied().collect())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_basis(mut self, basis: Basis) -> Self {
        self.basis = basis;
        self
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(FockError::Precondition(format!(
                "vector of length {len} does not match operator dimension {}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Matrix-vector product; the vector is zero-padded up to the operator's degree.
    pub fn apply(&self, f: &FockVector) -> Result<FockVector> {
        if f.degree() > self.degree() {
            self.check_len(f.degree() + 1)?;
        }
        let v = f.resized(self.degree());
        let x = nalgebra::DVector::from_column_slice(v.coeffs());
        Ok(FockVector::new((&self.entries * x).iter().copied().collect()))
    }

    pub fn apply_line(&self, f: &LineVector) -> Result<LineVector> {
        let as_fock = FockVector::new(f.coeffs().to_vec());
        Ok(LineVector::new(self.apply(&as_fock)?.into_coeffs()))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::new(
            format!("{}*{}", self.name, other.name),
            self.basis,
            &self.entries * &other.entries,
        )
    }

    pub fn adjoint(&self) -> Self {
        Self::new(format!("{}^*", self.name), self.basis, self.entries.adjoint())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.name.clone(), self.basis, &self.entries + &other.entries)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.name.clone(), self.basis, &self.entries - &other.entries)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.name.clone(), self.basis, &self.entries * s)
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        let ab = &self.entries * &other.entries;
        let ba = &other.entries * &self.entries;
        Self::new(format!("[{},{}]", self.name, other.name), self.basis, ab - ba)
    }

    /// Max entrywise modulus of `self - other` over the leading `block×block` corner.
    pub fn block_max_diff(&self, other: &Self, block: usize) -> f64 {
        let b = block.min(self.dim()).min(other.dim());
        let mut worst: f64 = 0.0;
        for i in 0..b {
            for j in 0..b {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        worst
    }

    /// Max entrywise modulus of `self - s·I` over the leading block.
    pub fn block_identity_residual(&self, s: Complex64, block: usize) -> f64 {
        let b = block.min(self.dim());
        let mut worst: f64 = 0.0;
        for i in 0..b {
            for j in 0..b {
                let want = if i == j { s } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((self.entries[(i, j)] - want).norm());
            }
        }
        worst
    }

    /// `‖A*A - I‖_max` on the leading `block×block` corner.
    pub fn unitarity_residual(&self, block: usize) -> f64 {
        let gram = self.entries.adjoint() * &self.entries;
        Self::new("gram", self.basis, gram).block_identity_residual(Complex64::new(1.0, 0.0), block)
    }

    /// Max modulus over the leading block of `A - A*`.
    pub fn hermitian_residual(&self, block: usize) -> f64 {
        self.block_max_diff(&self.adjoint(), block)
    }

    /// The leading `(degree+1)×(degree+1)` corner.
    pub fn cropped(&self, degree: usize) -> Self {
        let d = (degree + 1).min(self.dim());
        Self::new(
            self.name.clone(),
            self.basis,
            self.entries.view((0, 0), (d, d)).into_owned(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    name: String,
    basis: Basis,
    entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for OperatorMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| [self.entries[(i, j)].re, self.entries[(i, j)].im])
                    .collect()
            })
            .collect();
        MatrixJson {
            name: self.name.clone(),
            basis: self.basis,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OperatorMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let n = raw.entries.len();
        if n == 0 || raw.entries.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("entries must form a non-empty square array"));
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = raw.entries[i][j];
            Complex64::new(re, im)
        });
        Ok(Self::new(raw.name, raw.basis, m))
    }
}
