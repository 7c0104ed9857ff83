//! Bosonic symmetric space of `N` particles in `d` modes, in the
//! occupation-number basis.
//!
//! Every matrix in this crate is indexed by the reverse-lexicographic basis
//! produced by [`enumerate_basis`]. The full tensor space `(C^d)^{⊗N}` only
//! appears in [`full`], which holds the brute-force oracles used to check
//! the second-quantized kernels.

mod basis;
pub mod full;
mod ops;
mod tensor;

pub use basis::{enumerate_basis, sym_dimension, Basis, OccupationVector, SpaceShape};
pub use ops::{apply_annihilation, apply_creation, hartree_vector, number_operator};
pub use tensor::{sym_tensor_op, ShiftTable};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// A complex `d`-vector. Unit-norm instances are points of the one-body
/// sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct OneBodyVector(pub DVector<C64>);

impl OneBodyVector {
    pub fn new(components: Vec<C64>) -> Self {
        OneBodyVector(DVector::from_vec(components))
    }

    pub fn from_real(components: &[f64]) -> Self {
        Self::new(components.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// The `i`-th canonical basis vector of `C^d`.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = DVector::zeros(d);
        v[i] = C64::new(1.0, 0.0);
        OneBodyVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn normalized(&self) -> Self {
        OneBodyVector(self.0.normalize())
    }

    /// `<self, other>`, antilinear in `self`.
    pub fn inner(&self, other: &OneBodyVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn require_unit(&self, tol: f64) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > tol || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Ok(())
    }
}

/// Amplitudes over the occupation basis of a shape.
#[derive(Clone, Debug, PartialEq)]
pub struct SymVector {
    pub shape: SpaceShape,
    pub amplitudes: DVector<C64>,
}

impl SymVector {
    pub fn new(shape: SpaceShape, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != shape.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for a space of dimension {}",
                amplitudes.len(),
                shape.dim()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(SymVector { shape, amplitudes })
    }

    pub fn zeros(shape: SpaceShape) -> Self {
        SymVector {
            shape,
            amplitudes: DVector::zeros(shape.dim()),
        }
    }

    /// Normalized basis vector `|occ>`.
    pub fn basis_vector(shape: SpaceShape, occ: &[u32]) -> Result<Self> {
        let idx = shape
            .basis()
            .index_of(occ)
            .ok_or_else(|| Error::ShapeMismatch(format!("occupation {occ:?} not in space {shape}")))?;
        let mut v = Self::zeros(shape);
        v.amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn inner(&self, other: &SymVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// A square complex matrix over the occupation basis of a shape.
#[derive(Clone, Debug, PartialEq)]
pub struct SymOperator {
    pub shape: SpaceShape,
    pub matrix: DMatrix<C64>,
}

impl SymOperator {
    pub fn new(shape: SpaceShape, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != shape.dim() || matrix.ncols() != shape.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for a space of dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                shape.dim()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(SymOperator { shape, matrix })
    }

    pub fn zeros(shape: SpaceShape) -> Self {
        SymOperator {
            shape,
            matrix: DMatrix::zeros(shape.dim(), shape.dim()),
        }
    }

    pub fn identity(shape: SpaceShape) -> Self {
        SymOperator {
            shape,
            matrix: DMatrix::identity(shape.dim(), shape.dim()),
        }
    }

    /// `|v><v|`
    pub fn projector(v: &SymVector) -> Self {
        SymOperator {
            shape: v.shape,
            matrix: &v.amplitudes * v.amplitudes.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Largest entrywise modulus of `M - M^†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.matrix;
        let n = m.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M^†)/2`
    pub fn hermitian_part(&self) -> SymOperator {
        SymOperator {
            shape: self.shape,
            matrix: (&self.matrix + self.matrix.adjoint()).scale(0.5),
        }
    }

    /// `<v, M v>`
    pub fn expectation(&self, v: &SymVector) -> Result<C64> {
        if v.shape != self.shape {
            return Err(Error::ShapeMismatch(format!(
                "vector on {} against operator on {}",
                v.shape, self.shape
            )));
        }
        Ok(v.amplitudes.dotc(&(&self.matrix * &v.amplitudes)))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &SymOperator) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
