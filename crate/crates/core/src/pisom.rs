//! Partial isometries and power partial isometries.
//!
//! A square matrix `V` is a partial isometry when `VᴴV` is a projection. The
//! product `VW` of two partial isometries is again one exactly when the final
//! projection of `W` commutes with the initial projection of `V`.
//!
//! In finite dimension an isometry is unitary, so a power partial isometry
//! splits into a unitary summand and a direct sum of truncated shifts only;
//! [`hw_decompose`] computes that splitting.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numlin::{
    approx_equal, commutator_norm, is_projection, range_basis, scale_of, Complex64, ComplexMatrix,
    LinalgError, Subspace, ToleranceConfig, ZERO,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PisomError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("not a partial isometry (‖(VᴴV)² − VᴴV‖_F = {deviation:.6e})")]
    NotPartialIsometry { deviation: f64 },
    #[error("not a power partial isometry: {reason}")]
    NotPowerPartialIsometry { reason: String },
    #[error(
        "product criterion disagrees with direct validation (commutator {commutator:.3e}, deviation {deviation:.3e})"
    )]
    InconsistentProductTest { commutator: f64, deviation: f64 },
}

/// Validated partial isometry with cached initial (`VᴴV`) and final (`VVᴴ`)
/// projections.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialIsometry {
    matrix: ComplexMatrix,
    initial: ComplexMatrix,
    final_projection: ComplexMatrix,
}

impl PartialIsometry {
    pub fn identity(n: usize) -> Self {
        let id = ComplexMatrix::identity(n);
        Self {
            matrix: id.clone(),
            initial: id.clone(),
            final_projection: id,
        }
    }

    pub fn zero(n: usize) -> Self {
        let z = ComplexMatrix::zeros(n, n);
        Self {
            matrix: z.clone(),
            initial: z.clone(),
            final_projection: z,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `P_V = VᴴV`.
    pub fn initial(&self) -> &ComplexMatrix {
        &self.initial
    }

    /// `Q_V = VVᴴ`.
    pub fn final_projection(&self) -> &ComplexMatrix {
        &self.final_projection
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Vᴴ`, with the two projections swapped.
    pub fn adjoint(&self) -> PartialIsometry {
        PartialIsometry {
            matrix: self.matrix.adjoint(),
            initial: self.final_projection.clone(),
            final_projection: self.initial.clone(),
        }
    }
}

/// `‖(mᴴm)² − mᴴm‖_F`, zero exactly for partial isometries.
pub fn pi_deviation(m: &ComplexMatrix) -> f64 {
    let p = &m.adjoint() * m;
    (&(&p * &p) - &p).frobenius_norm()
}

/// Operator-norm version of [`pi_deviation`].
pub fn pi_deviation_operator(m: &ComplexMatrix) -> f64 {
    let p = &m.adjoint() * m;
    (&(&p * &p) - &p).spectral_norm()
}

pub fn make_partial_isometry(
    m: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<PartialIsometry, PisomError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    let initial = &m.adjoint() * m;
    if !is_projection(&initial, cfg)? {
        return Err(PisomError::NotPartialIsometry {
            deviation: (&(&initial * &initial) - &initial).frobenius_norm(),
        });
    }
    let residual = (&(m * &initial) - m).frobenius_norm();
    if residual > cfg.proj_tol * scale_of(&[m.frobenius_norm()]) {
        return Err(PisomError::NotPartialIsometry {
            deviation: (&(&initial * &initial) - &initial).frobenius_norm(),
        });
    }
    let final_projection = m * &m.adjoint();
    Ok(PartialIsometry {
        matrix: m.clone(),
        initial,
        final_projection,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductTest {
    pub is_pi: bool,
    /// `‖[Q_W, P_V]‖_F`.
    pub commutator: f64,
}

/// Decides whether `v·w` is a partial isometry from `[Q_w, P_v]` alone, and
/// cross-checks the verdict against direct validation of the product.
///
/// Near-commuting inputs (commutator a little above `proj_tol`) can make the
/// two tests disagree, since the product's deviation scales with the square of
/// the commutator; that case is reported as `InconsistentProductTest`.
pub fn hw_product_test(
    v: &PartialIsometry,
    w: &PartialIsometry,
    cfg: &ToleranceConfig,
) -> Result<ProductTest, PisomError> {
    let q = w.final_projection();
    let p = v.initial();
    let commutator = commutator_norm(q, p)?;
    let is_pi = commutator <= cfg.proj_tol * scale_of(&[q.frobenius_norm(), p.frobenius_norm()]);
    let product = v.matrix() * w.matrix();
    let direct = make_partial_isometry(&product, cfg);
    if direct.is_ok() != is_pi {
        return Err(PisomError::InconsistentProductTest {
            commutator,
            deviation: pi_deviation(&product),
        });
    }
    Ok(ProductTest { is_pi, commutator })
}

/// True iff `vᵏ` is a partial isometry for `k = 1..=n` and the resulting
/// unitary / truncated-shift decomposition reassembles to `v`.
///
/// The reassembly certificate holds for every power at once, so the finite
/// power check is conclusive.
pub fn is_power_partial_isometry(v: &PartialIsometry, cfg: &ToleranceConfig) -> bool {
    hw_decompose(v, cfg).is_ok()
}

/// Orthonormal chain `v₁ → v₂ → … → v_k → 0` of a truncated shift.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftChain {
    pub vectors: Vec<Vec<Complex64>>,
}

impl ShiftChain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HWDecomposition {
    pub unitary_subspace: Subspace,
    /// Restriction of the operator to `unitary_subspace`, in its basis.
    pub unitary_restriction: ComplexMatrix,
    /// Longest first; equal lengths ordered by the dominant coordinate of the head.
    pub shift_blocks: Vec<ShiftChain>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HWDecompositionRecord {
    pub unitary_dim: usize,
    pub shift_lengths: Vec<usize>,
    /// Unitary basis first, then each chain in order; every column is a list of `[re, im]`.
    pub basis_columns: Vec<Vec<[f64; 2]>>,
}

impl HWDecomposition {
    pub fn unitary_dim(&self) -> usize {
        self.unitary_subspace.dim()
    }

    pub fn shift_lengths(&self) -> Vec<usize> {
        self.shift_blocks.iter().map(ShiftChain::len).collect()
    }

    /// `B U Bᴴ + Σ_chains Σ_i v_{i+1} v_iᴴ`.
    pub fn reassemble(&self) -> ComplexMatrix {
        let n = self.unitary_subspace.ambient_dim();
        let b = self.unitary_subspace.basis();
        let mut out = if b.cols() > 0 {
            &(b * &self.unitary_restriction) * &b.adjoint()
        } else {
            ComplexMatrix::zeros(n, n)
        };
        for chain in &self.shift_blocks {
            for pair in chain.vectors.windows(2) {
                let (from, to) = (&pair[0], &pair[1]);
                for i in 0..n {
                    for j in 0..n {
                        out[(i, j)] += to[i] * from[j].conj();
                    }
                }
            }
        }
        out
    }

    pub fn to_record(&self) -> HWDecompositionRecord {
        let encode = |v: &Vec<Complex64>| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
        let mut basis_columns: Vec<Vec<[f64; 2]>> = self
            .unitary_subspace
            .basis()
            .columns()
            .iter()
            .map(encode)
            .collect();
        for chain in &self.shift_blocks {
            basis_columns.extend(chain.vectors.iter().map(encode));
        }
        HWDecompositionRecord {
            unitary_dim: self.unitary_dim(),
            shift_lengths: self.shift_lengths(),
            basis_columns,
        }
    }
}

fn dominant_index(v: &[Complex64]) -> usize {
    let top = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    v.iter().position(|z| z.norm() >= top - 1e-9).unwrap_or(0)
}

pub fn hw_decompose(
    v: &PartialIsometry,
    cfg: &ToleranceConfig,
) -> Result<HWDecomposition, PisomError> {
    let n = v.dim();
    let id = ComplexMatrix::identity(n);
    let not_ppi = |reason: String| PisomError::NotPowerPartialIsometry { reason };

    // Initial projections P_k of V^k for k = 0..=n, and Q_n.
    let mut initials = vec![id.clone()];
    let mut power = id.clone();
    let mut last_final = id.clone();
    for k in 1..=n {
        power = &power * v.matrix();
        match make_partial_isometry(&power, cfg) {
            Ok(pk) => {
                initials.push(pk.initial().clone());
                last_final = pk.final_projection().clone();
            }
            Err(PisomError::NotPartialIsometry { deviation }) => {
                return Err(not_ppi(format!("power {k} has deviation {deviation:.3e}")));
            }
            Err(e) => return Err(e),
        }
    }

    // Unitary part: range(V^n), on which V restricts to a unitary.
    let unitary_subspace = range_basis(&last_final, cfg);
    let b = unitary_subspace.basis();
    let unitary_restriction = &(&b.adjoint() * v.matrix()) * b;
    if unitary_subspace.dim() > 0 {
        let uu = &unitary_restriction.adjoint() * &unitary_restriction;
        if !approx_equal(&uu, &ComplexMatrix::identity(uu.rows()), cfg)? {
            return Err(not_ppi(
                "restriction to the stable range is not unitary".into(),
            ));
        }
    }

    // Heads of length-k chains: range((I − Q_V)(P_{k−1} − P_k)).
    let not_range = &id - v.final_projection();
    let mut shift_blocks = Vec::new();
    for k in 1..=n {
        let layer = &initials[k - 1] - &initials[k];
        let heads = range_basis(&(&not_range * &layer), cfg);
        for h in heads.basis().columns() {
            let d = dominant_index(&h);
            let phase = if h[d].norm() > 0.0 {
                h[d].conj() / h[d].norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            let mut vectors = vec![h.iter().map(|z| z * phase).collect::<Vec<_>>()];
            for _ in 1..k {
                let next = v.matrix().apply(vectors.last().unwrap());
                vectors.push(next);
            }
            shift_blocks.push(ShiftChain { vectors });
        }
    }
    shift_blocks.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then_with(|| dominant_index(&a.vectors[0]).cmp(&dominant_index(&b.vectors[0])))
    });

    let covered = unitary_subspace.dim() + shift_blocks.iter().map(ShiftChain::len).sum::<usize>();
    if covered != n {
        return Err(not_ppi(format!(
            "decomposition covers {covered} of {n} dimensions"
        )));
    }
    let decomposition = HWDecomposition {
        unitary_subspace,
        unitary_restriction,
        shift_blocks,
    };
    if !approx_equal(&decomposition.reassemble(), v.matrix(), cfg)? {
        return Err(not_ppi(
            "reassembled operator differs from the input".into(),
        ));
    }
    Ok(decomposition)
}

/// Nilpotent Jordan block with ones on the subdiagonal (`e_i ↦ e_{i+1}`).
pub fn truncated_shift(k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(k, k, |i, j| {
        if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            ZERO
        }
    })
}
