//! Tolerance-aware dense complex linear algebra.
//!
//! Everything downstream (partial isometries, projection lattices, semigroup
//! closures) is built on the predicates in this module, so they share one
//! notion of "equal", "projection" and "rank" through [`ToleranceConfig`].

mod matrix;
mod subspace;
mod svd;

pub use matrix::{ComplexMatrix, ONE, ZERO};
pub use num_complex::Complex64;
pub use subspace::Subspace;
pub use svd::{svd, Svd};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("data length {actual} does not match shape (expected {expected})")]
    BadLength { expected: usize, actual: usize },
    #[error("projection does not commute with the subspace (commutator norm {norm:.3e})")]
    NonCommuting { norm: f64 },
    #[error("tolerance {name} = {value} outside (0, 1e-2]")]
    InvalidTolerance { name: &'static str, value: f64 },
}

/// Thresholds shared by every predicate in the crate.
///
/// * `eq_tol`: relative Frobenius threshold for matrix equality.
/// * `proj_tol`: relative threshold for hermiticity, idempotency and commutation.
/// * `rank_tol`: singular-value cutoff relative to the largest singular value
///   (floored at 1, see [`rank`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub eq_tol: f64,
    pub proj_tol: f64,
    pub rank_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eq_tol: 1e-8,
            proj_tol: 1e-8,
            rank_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub const MAX_TOL: f64 = 1e-2;

    pub fn new(eq_tol: f64, proj_tol: f64, rank_tol: f64) -> Result<Self, LinalgError> {
        let cfg = Self {
            eq_tol,
            proj_tol,
            rank_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn uniform(tol: f64) -> Result<Self, LinalgError> {
        Self::new(tol, tol, tol)
    }

    pub fn validate(&self) -> Result<(), LinalgError> {
        for (name, value) in [
            ("eq_tol", self.eq_tol),
            ("proj_tol", self.proj_tol),
            ("rank_tol", self.rank_tol),
        ] {
            if !(value > 0.0 && value <= Self::MAX_TOL) {
                return Err(LinalgError::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }
}

pub(crate) fn scale_of(norms: &[f64]) -> f64 {
    norms.iter().copied().fold(1.0, f64::max)
}

fn require_square(a: &ComplexMatrix) -> Result<(), LinalgError> {
    if a.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

/// `‖a − b‖_F ≤ eq_tol · max(1, ‖a‖_F, ‖b‖_F)`.
///
/// Reflexive and symmetric but not transitive: chains of near-equal matrices
/// can drift further than the tolerance.
pub fn approx_equal(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<bool, LinalgError> {
    let diff = a.try_sub(b)?;
    Ok(diff.frobenius_norm() <= cfg.eq_tol * scale_of(&[a.frobenius_norm(), b.frobenius_norm()]))
}

/// Distance between `a` and `b` in units of the equality scale; `≤ 1` means approx equal.
pub fn relative_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm() / scale_of(&[a.frobenius_norm(), b.frobenius_norm()])
}

pub fn is_projection(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<bool, LinalgError> {
    require_square(a)?;
    let bound = cfg.proj_tol * scale_of(&[a.frobenius_norm()]);
    let herm = (a - &a.adjoint()).frobenius_norm();
    if herm > bound {
        return Ok(false);
    }
    let idem = (&(a * a) - a).frobenius_norm();
    Ok(idem <= bound)
}

pub(crate) fn rank_cutoff(singular_values: &[f64], cfg: &ToleranceConfig) -> f64 {
    let top = singular_values.first().copied().unwrap_or(0.0);
    cfg.rank_tol * top.max(1.0)
}

/// Number of singular values above `rank_tol · max(1, σ_max)`.
///
/// The floor at 1 keeps round-off residue (e.g. a product of orthogonal
/// projections with 1e-17 entries) at rank 0; for every operator this crate
/// handles, σ_max is 0 or at least 1.
pub fn rank(a: &ComplexMatrix, cfg: &ToleranceConfig) -> usize {
    let s = a.singular_values();
    let cutoff = rank_cutoff(&s, cfg);
    s.iter().filter(|&&x| x > cutoff).count()
}

/// Orthonormal basis of the column space.
pub fn range_basis(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Subspace {
    let d = a.svd();
    let cutoff = rank_cutoff(&d.singular_values, cfg);
    let keep = d.singular_values.iter().filter(|&&x| x > cutoff).count();
    let cols: Vec<_> = (0..keep).map(|j| d.u.column(j)).collect();
    Subspace::from_orthonormal_columns(a.rows(), &cols)
}

/// `‖ab − ba‖_F`.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64, LinalgError> {
    require_square(a)?;
    if a.shape() != b.shape() {
        return Err(LinalgError::ShapeMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok((&(a * b) - &(b * a)).frobenius_norm())
}

/// `s ∩ range(p)` (or `s ∩ ker(p)` when `take_range` is false) for a
/// projection `p` commuting with the orthogonal projection onto `s`.
pub fn intersect_with_projection(
    s: &Subspace,
    p: &ComplexMatrix,
    take_range: bool,
    cfg: &ToleranceConfig,
) -> Result<Subspace, LinalgError> {
    intersect_with_spectrum(s, p, take_range, cfg).map(|(sub, _)| sub)
}

/// Same as [`intersect_with_projection`], also returning the singular values
/// of the compressed operator so callers can detect ambiguous splits.
pub(crate) fn intersect_with_spectrum(
    s: &Subspace,
    p: &ComplexMatrix,
    take_range: bool,
    cfg: &ToleranceConfig,
) -> Result<(Subspace, Vec<f64>), LinalgError> {
    require_square(p)?;
    if p.rows() != s.ambient_dim() {
        return Err(LinalgError::ShapeMismatch {
            left: (s.ambient_dim(), s.ambient_dim()),
            right: p.shape(),
        });
    }
    let proj_s = s.projector();
    let norm = commutator_norm(&proj_s, p)?;
    if norm > cfg.proj_tol * scale_of(&[proj_s.frobenius_norm(), p.frobenius_norm()]) {
        return Err(LinalgError::NonCommuting { norm });
    }
    if s.dim() == 0 {
        return Ok((s.clone(), Vec::new()));
    }
    let factor = if take_range {
        p.clone()
    } else {
        &ComplexMatrix::identity(p.rows()) - p
    };
    let compressed = &factor * s.basis();
    let d = compressed.svd();
    let cutoff = rank_cutoff(&d.singular_values, cfg);
    let keep = d.singular_values.iter().filter(|&&x| x > cutoff).count();
    let cols: Vec<_> = (0..keep).map(|j| d.u.column(j)).collect();
    Ok((
        Subspace::from_orthonormal_columns(p.rows(), &cols),
        d.singular_values,
    ))
}

/// Haar-distributed unitary from the QR factorisation of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for c in &cols {
                let dot: Complex64 = c.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= dot * ci;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_columns(n, &cols)
}

/// `w · a · wᴴ`.
pub fn conjugate(a: &ComplexMatrix, w: &ComplexMatrix) -> ComplexMatrix {
    &(w * a) * &w.adjoint()
}
