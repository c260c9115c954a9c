use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::{range_basis, ToleranceConfig};

/// Subspace of `ℂⁿ` given by an orthonormal basis stored as matrix columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: ComplexMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: ComplexMatrix::identity(n),
        }
    }

    /// Caller guarantees orthonormality of `columns`.
    pub fn from_orthonormal_columns(n: usize, columns: &[Vec<Complex64>]) -> Self {
        assert!(
            columns.len() <= n,
            "more basis vectors than the ambient dimension"
        );
        Self {
            ambient_dim: n,
            basis: ComplexMatrix::from_columns(n, columns),
        }
    }

    /// Span of arbitrary vectors (orthonormalised).
    pub fn span(n: usize, vectors: &[Vec<Complex64>], cfg: &ToleranceConfig) -> Self {
        if vectors.is_empty() {
            return Self::zero(n);
        }
        range_basis(&ComplexMatrix::from_columns(n, vectors), cfg)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// Orthogonal projection `B Bᴴ` onto the subspace.
    pub fn projector(&self) -> ComplexMatrix {
        &self.basis * &self.basis.adjoint()
    }

    pub fn orthogonal_complement(&self, cfg: &ToleranceConfig) -> Self {
        let comp = &ComplexMatrix::identity(self.ambient_dim) - &self.projector();
        range_basis(&comp, cfg)
    }

    /// `‖(I − BBᴴ) a B‖_F ≤ tol`: the subspace is invariant under `a`.
    pub fn is_invariant_under(&self, a: &ComplexMatrix, tol: f64) -> bool {
        if self.dim() == 0 {
            return true;
        }
        let image = a * &self.basis;
        let residual = &image - &(&self.projector() * &image);
        residual.frobenius_norm() <= tol * a.frobenius_norm().max(1.0)
    }

    /// `‖Bᴴ B − I‖_F`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = &self.basis.adjoint() * &self.basis;
        (&g - &ComplexMatrix::identity(self.dim())).frobenius_norm()
    }
}
