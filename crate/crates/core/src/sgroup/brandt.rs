//! Brandt (matrix-unit) structure of a closed semigroup: a family of pairwise
//! orthogonal minimal projections covering the space, each carried by an
//! element, such that every element moves blocks onto blocks.

use serde::Serialize;

use super::{ClosureResult, SgroupError};
use crate::numlin::{
    approx_equal, range_basis, rank, scale_of, ComplexMatrix, Subspace, ToleranceConfig,
};
use crate::pisom::make_partial_isometry;

#[derive(Debug, Clone, PartialEq)]
pub struct BrandtBlock {
    pub projection: ComplexMatrix,
    pub rank: usize,
    /// Element `U` with `P_U = Q_U = E`.
    pub connector: ComplexMatrix,
    pub connector_word: String,
    pub basis: Subspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BrandtVerification {
    pub pairwise_orthogonal: bool,
    pub covered_rank: usize,
    pub members_checked: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BrandtStructure {
    pub family: Vec<BrandtBlock>,
    /// Orthogonal complement of the family ranges (zero when the family covers).
    pub complement: Subspace,
    pub verification: BrandtVerification,
}

impl BrandtStructure {
    pub fn family_ranks(&self) -> Vec<usize> {
        self.family.iter().map(|b| b.rank).collect()
    }
}

fn dominant_index(m: &ComplexMatrix) -> usize {
    let d = m.diagonal();
    let top = d.iter().map(|z| z.re).fold(f64::MIN, f64::max);
    d.iter().position(|z| z.re >= top - 1e-9).unwrap_or(0)
}

fn is_zero(m: &ComplexMatrix, cfg: &ToleranceConfig) -> bool {
    m.frobenius_norm() <= cfg.eq_tol
}

/// First ordered pair `(E₁, E₂)` for which `E₁ w E₂` is neither zero nor a
/// partial isometry from `E₂` onto `E₁`.
fn first_violation(
    w: &ComplexMatrix,
    family: &[ComplexMatrix],
    cfg: &ToleranceConfig,
) -> Option<(usize, usize)> {
    let scale = scale_of(&[w.frobenius_norm()]);
    for (i, e1) in family.iter().enumerate() {
        let left = e1 * w;
        for (j, e2) in family.iter().enumerate() {
            let x = &left * e2;
            if x.frobenius_norm() <= cfg.eq_tol * scale {
                continue;
            }
            let ok = match make_partial_isometry(&x, cfg) {
                Ok(pi) => {
                    approx_equal(pi.initial(), e2, cfg).unwrap_or(false)
                        && approx_equal(pi.final_projection(), e1, cfg).unwrap_or(false)
                }
                Err(_) => false,
            };
            if !ok {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn brandt_membership(
    w: &ComplexMatrix,
    s: &BrandtStructure,
    cfg: &ToleranceConfig,
) -> Result<bool, SgroupError> {
    let n = s.complement.ambient_dim();
    if w.shape() != (n, n) {
        return Err(crate::numlin::LinalgError::ShapeMismatch {
            left: (n, n),
            right: w.shape(),
        }
        .into());
    }
    let family: Vec<ComplexMatrix> = s.family.iter().map(|b| b.projection.clone()).collect();
    Ok(first_violation(w, &family, cfg).is_none())
}

/// Extracts and verifies the Brandt structure of a closed semigroup.
pub fn brandt_structure(
    c: &ClosureResult,
    cfg: &ToleranceConfig,
) -> Result<BrandtStructure, SgroupError> {
    let isos = c.isometries(cfg)?;
    let n = c.dim();

    let mut projections: Vec<ComplexMatrix> = Vec::new();
    for t in &isos {
        for p in [t.initial(), t.final_projection()] {
            if is_zero(p, cfg)
                || projections
                    .iter()
                    .any(|q| approx_equal(q, p, cfg).unwrap_or(false))
            {
                continue;
            }
            projections.push(p.clone());
        }
    }

    let below =
        |f: &ComplexMatrix, e: &ComplexMatrix| approx_equal(&(f * e), f, cfg).unwrap_or(false);
    let mut minimal: Vec<ComplexMatrix> = projections
        .iter()
        .filter(|e| {
            !projections
                .iter()
                .any(|f| below(f, e) && !approx_equal(f, e, cfg).unwrap_or(true))
        })
        .cloned()
        .collect();
    minimal.sort_by_key(dominant_index);

    let mut family = Vec::with_capacity(minimal.len());
    for (index, e) in minimal.iter().enumerate() {
        let r = rank(e, cfg);
        let loop_element = isos.iter().position(|u| {
            approx_equal(u.initial(), e, cfg).unwrap_or(false)
                && approx_equal(u.final_projection(), e, cfg).unwrap_or(false)
        });
        let Some(u) = loop_element else {
            return Err(SgroupError::NoMinimalWithLoop { index, rank: r });
        };
        family.push(BrandtBlock {
            projection: e.clone(),
            rank: r,
            connector: isos[u].matrix().clone(),
            connector_word: c.word_string(u),
            basis: range_basis(e, cfg),
        });
    }

    for i in 0..minimal.len() {
        for j in (i + 1)..minimal.len() {
            if !is_zero(&(&minimal[i] * &minimal[j]), cfg) {
                return Err(SgroupError::NonOrthogonalFamily {
                    first: i,
                    second: j,
                });
            }
        }
    }

    let covered: usize = family.iter().map(|b| b.rank).sum();
    if covered != n {
        return Err(SgroupError::CoverageGap { covered, dim: n });
    }

    for (k, t) in isos.iter().enumerate() {
        if let Some((first, second)) = first_violation(t.matrix(), &minimal, cfg) {
            return Err(SgroupError::MembershipViolation {
                word: c.word_string(k),
                first,
                second,
            });
        }
    }

    let total: ComplexMatrix = minimal
        .iter()
        .fold(ComplexMatrix::zeros(n, n), |acc, e| &acc + e);
    let complement = range_basis(&(&ComplexMatrix::identity(n) - &total), cfg);
    Ok(BrandtStructure {
        family,
        complement,
        verification: BrandtVerification {
            pairwise_orthogonal: true,
            covered_rank: covered,
            members_checked: isos.len(),
        },
    })
}
