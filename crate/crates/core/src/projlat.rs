//! Commuting projection families and the atoms of the algebra they generate.
//!
//! In finite dimension the von Neumann algebra generated by a commuting family
//! of projections is the linear span of finitely many pairwise orthogonal
//! atoms. An atom of rank `r` carries multiplicity `r`; the algebra has uniform
//! multiplicity when all atoms share one rank. Standard projections are the
//! sums of subsets of atoms.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numlin::{
    approx_equal, commutator_norm, intersect_with_spectrum, is_projection, range_basis, rank,
    scale_of, ComplexMatrix, LinalgError, Subspace, ToleranceConfig,
};
use crate::pisom::{make_partial_isometry, PartialIsometry, PisomError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjLatError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("family member {index} is not a projection")]
    NotProjection { index: usize },
    #[error(
        "family does not commute: members {first} and {second} have commutator norm {norm:.3e}"
    )]
    NonCommutingFamily {
        first: usize,
        second: usize,
        norm: f64,
    },
    #[error("ambiguous rank while splitting by member {member} (singular value {value:.3e})")]
    IllConditionedSplit { member: usize, value: f64 },
    #[error("atom index {index} out of range ({count} atoms)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("operator is not atom-block-diagonal: ‖a_{first} T a_{second}‖ = {residual:.3e}")]
    OffDiagonalResidual {
        first: usize,
        second: usize,
        residual: f64,
    },
    #[error("final projection of T·atom {atom} is not a standard projection")]
    NotStandard { atom: usize },
    #[error("T·atom {atom} is not a partial isometry (deviation {deviation:.3e})")]
    NotPartialIsometry { atom: usize, deviation: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionFamily {
    dim: usize,
    members: Vec<ComplexMatrix>,
    max_pairwise_commutator: f64,
    worst_pair: Option<(usize, usize)>,
}

impl ProjectionFamily {
    pub fn new(
        dim: usize,
        members: Vec<ComplexMatrix>,
        cfg: &ToleranceConfig,
    ) -> Result<Self, ProjLatError> {
        for (index, m) in members.iter().enumerate() {
            if m.shape() != (dim, dim) {
                return Err(ProjLatError::DimensionMismatch {
                    expected: dim,
                    actual: m.rows(),
                });
            }
            if !is_projection(m, cfg)? {
                return Err(ProjLatError::NotProjection { index });
            }
        }
        let mut max_pairwise_commutator: f64 = 0.0;
        let mut worst_pair = None;
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                let c = commutator_norm(&members[i], &members[j])?;
                if c > max_pairwise_commutator {
                    max_pairwise_commutator = c;
                    worst_pair = Some((i, j));
                }
            }
        }
        Ok(Self {
            dim,
            members,
            max_pairwise_commutator,
            worst_pair,
        })
    }

    /// Deduplicates under `approx_equal` (first occurrence wins) before building.
    pub fn deduplicated(
        dim: usize,
        members: Vec<ComplexMatrix>,
        cfg: &ToleranceConfig,
    ) -> Result<Self, ProjLatError> {
        let mut kept: Vec<ComplexMatrix> = Vec::new();
        for m in members {
            let mut seen = false;
            for k in &kept {
                if approx_equal(k, &m, cfg)? {
                    seen = true;
                    break;
                }
            }
            if !seen {
                kept.push(m);
            }
        }
        Self::new(dim, kept, cfg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[ComplexMatrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn max_pairwise_commutator(&self) -> f64 {
        self.max_pairwise_commutator
    }

    pub fn is_commuting(&self, cfg: &ToleranceConfig) -> bool {
        // projections have Frobenius norm ≤ √dim
        self.max_pairwise_commutator <= cfg.proj_tol * scale_of(&[(self.dim as f64).sqrt()])
    }

    /// True when `m` equals some member under `approx_equal`.
    pub fn contains(&self, m: &ComplexMatrix, cfg: &ToleranceConfig) -> bool {
        self.members
            .iter()
            .any(|p| approx_equal(p, m, cfg).unwrap_or(false))
    }

    fn require_commuting(&self, cfg: &ToleranceConfig) -> Result<(), ProjLatError> {
        if self.is_commuting(cfg) {
            return Ok(());
        }
        let (first, second) = self.worst_pair.unwrap_or((0, 0));
        Err(ProjLatError::NonCommutingFamily {
            first,
            second,
            norm: self.max_pairwise_commutator,
        })
    }
}

/// Atoms of the Boolean algebra generated by a commuting projection family.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomDecomposition {
    dim: usize,
    atoms: Vec<ComplexMatrix>,
    bases: Vec<Subspace>,
    ranks: Vec<usize>,
    generator_masks: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomDecompositionRecord {
    pub ranks: Vec<usize>,
    pub atoms: Vec<ComplexMatrix>,
    pub generator_masks: Vec<Vec<bool>>,
}

impl AtomDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[ComplexMatrix] {
        &self.atoms
    }

    pub fn bases(&self) -> &[Subspace] {
        &self.bases
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `generator_masks[k][a]`: atom `a` lies under family member `k`.
    pub fn generator_masks(&self) -> &[Vec<bool>] {
        &self.generator_masks
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn to_record(&self) -> AtomDecompositionRecord {
        AtomDecompositionRecord {
            ranks: self.ranks.clone(),
            atoms: self.atoms.clone(),
            generator_masks: self.generator_masks.clone(),
        }
    }

    pub fn from_record(
        rec: AtomDecompositionRecord,
        cfg: &ToleranceConfig,
    ) -> Result<Self, ProjLatError> {
        let dim = rec.atoms.first().map_or(0, ComplexMatrix::rows);
        for (index, a) in rec.atoms.iter().enumerate() {
            if a.shape() != (dim, dim) || !is_projection(a, cfg)? {
                return Err(ProjLatError::NotProjection { index });
            }
        }
        let bases = rec.atoms.iter().map(|a| range_basis(a, cfg)).collect();
        Ok(Self {
            dim,
            atoms: rec.atoms,
            bases,
            ranks: rec.ranks,
            generator_masks: rec.generator_masks,
        })
    }

    /// Atom index sets of the minimal standard projections above `p`, if `p`
    /// is itself standard.
    pub fn standard_subset(
        &self,
        p: &ComplexMatrix,
        cfg: &ToleranceConfig,
    ) -> Option<BTreeSet<usize>> {
        let scale = scale_of(&[p.frobenius_norm()]);
        let mut subset = BTreeSet::new();
        for (i, a) in self.atoms.iter().enumerate() {
            let block = &(a * p) * a;
            if block.frobenius_norm() <= cfg.eq_tol * scale {
                continue;
            }
            if approx_equal(&block, a, cfg).ok()? {
                subset.insert(i);
            } else {
                return None;
            }
        }
        let rebuilt = standard_projection(self, &subset).ok()?;
        approx_equal(&rebuilt, p, cfg).ok()?.then_some(subset)
    }
}

/// Deterministic order: descending rank, then the first index of the largest
/// diagonal entry, then entrywise comparison.
fn atom_order(a: &(ComplexMatrix, usize), b: &(ComplexMatrix, usize)) -> Ordering {
    fn dominant(m: &ComplexMatrix) -> usize {
        let d = m.diagonal();
        let top = d.iter().map(|z| z.re).fold(f64::MIN, f64::max);
        d.iter().position(|z| z.re >= top - 1e-9).unwrap_or(0)
    }
    let round = |x: f64| (x * 1e9).round();
    b.1.cmp(&a.1)
        .then_with(|| dominant(&a.0).cmp(&dominant(&b.0)))
        .then_with(|| {
            for (x, y) in a.0.as_slice().iter().zip(b.0.as_slice()) {
                let o = round(y.re)
                    .total_cmp(&round(x.re))
                    .then_with(|| round(y.im).total_cmp(&round(x.im)));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
}

/// Atoms by iterated splitting: every current cell `C` is replaced by
/// `C ∩ range(p)` and `C ∩ ker(p)` for each member `p`, dropping zero cells.
pub fn boolean_atoms(
    fam: &ProjectionFamily,
    cfg: &ToleranceConfig,
) -> Result<AtomDecomposition, ProjLatError> {
    fam.require_commuting(cfg)?;
    let n = fam.dim();
    let mut cells = vec![Subspace::full(n)];
    for (member, p) in fam.members().iter().enumerate() {
        let mut next = Vec::with_capacity(cells.len() * 2);
        for cell in &cells {
            let mut pieces = 0;
            for take_range in [true, false] {
                let (piece, spectrum) = intersect_with_spectrum(cell, p, take_range, cfg)?;
                let cutoff = cfg.rank_tol * spectrum.first().copied().unwrap_or(0.0).max(1.0);
                if let Some(&value) = spectrum
                    .iter()
                    .find(|&&s| s > cutoff / 10.0 && s < cutoff * 10.0)
                {
                    return Err(ProjLatError::IllConditionedSplit { member, value });
                }
                pieces += piece.dim();
                if piece.dim() > 0 {
                    next.push(piece);
                }
            }
            if pieces != cell.dim() {
                return Err(ProjLatError::IllConditionedSplit {
                    member,
                    value: f64::NAN,
                });
            }
        }
        cells = next;
    }

    let mut ranked: Vec<(ComplexMatrix, usize)> =
        cells.iter().map(|c| (c.projector(), c.dim())).collect();
    ranked.sort_by(atom_order);
    let atoms: Vec<ComplexMatrix> = ranked.iter().map(|(a, _)| a.clone()).collect();
    let ranks: Vec<usize> = ranked.iter().map(|(_, r)| *r).collect();
    let bases: Vec<Subspace> = atoms.iter().map(|a| range_basis(a, cfg)).collect();

    let mut generator_masks = Vec::with_capacity(fam.len());
    for p in fam.members() {
        let mut mask = Vec::with_capacity(atoms.len());
        for a in &atoms {
            mask.push(approx_equal(&(p * a), a, cfg)?);
        }
        generator_masks.push(mask);
    }

    Ok(AtomDecomposition {
        dim: n,
        atoms,
        bases,
        ranks,
        generator_masks,
    })
}

/// `E_X = Σ_{a ∈ X} a`.
pub fn standard_projection(
    atoms: &AtomDecomposition,
    subset: &BTreeSet<usize>,
) -> Result<ComplexMatrix, ProjLatError> {
    let mut out = ComplexMatrix::zeros(atoms.dim(), atoms.dim());
    for &index in subset {
        let a = atoms
            .atoms
            .get(index)
            .ok_or(ProjLatError::IndexOutOfRange {
                index,
                count: atoms.len(),
            })?;
        out = &out + a;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityProfile {
    /// rank → number of atoms of that rank
    pub counts: BTreeMap<usize, usize>,
    pub uniform: bool,
    pub multiplicity: Option<usize>,
}

pub fn multiplicity_profile(atoms: &AtomDecomposition) -> MultiplicityProfile {
    let mut counts = BTreeMap::new();
    for &r in atoms.ranks() {
        *counts.entry(r).or_insert(0) += 1;
    }
    let uniform = counts.len() == 1;
    let multiplicity = if uniform {
        counts.keys().next().copied()
    } else {
        None
    };
    MultiplicityProfile {
        counts,
        uniform,
        multiplicity,
    }
}

/// Diagonal blocks `Bᵢᴴ T Bᵢ` in the atom bases, provided `T` has no
/// off-diagonal atom blocks.
pub fn decompose_by_atoms(
    t: &ComplexMatrix,
    atoms: &AtomDecomposition,
    cfg: &ToleranceConfig,
) -> Result<Vec<ComplexMatrix>, ProjLatError> {
    if t.shape() != (atoms.dim(), atoms.dim()) {
        return Err(ProjLatError::DimensionMismatch {
            expected: atoms.dim(),
            actual: t.rows(),
        });
    }
    let bound = cfg.eq_tol * scale_of(&[t.frobenius_norm()]);
    let mut worst: Option<(usize, usize, f64)> = None;
    for (i, a) in atoms.atoms().iter().enumerate() {
        let left = a * t;
        for (j, b) in atoms.atoms().iter().enumerate() {
            if i == j {
                continue;
            }
            let residual = (&left * b).frobenius_norm();
            if residual > bound && worst.is_none_or(|(_, _, r)| residual > r) {
                worst = Some((i, j, residual));
            }
        }
    }
    if let Some((first, second, residual)) = worst {
        return Err(ProjLatError::OffDiagonalResidual {
            first,
            second,
            residual,
        });
    }
    Ok(atoms
        .bases()
        .iter()
        .map(|b| &(&b.basis().adjoint() * t) * b.basis())
        .collect())
}

/// Whether projection `p` is a standard projection, i.e. lies in the algebra
/// spanned by the atoms.
pub fn membership_in_span(
    p: &ComplexMatrix,
    atoms: &AtomDecomposition,
    cfg: &ToleranceConfig,
) -> Result<bool, ProjLatError> {
    if p.shape() != (atoms.dim(), atoms.dim()) {
        return Err(ProjLatError::DimensionMismatch {
            expected: atoms.dim(),
            actual: p.rows(),
        });
    }
    if !is_projection(p, cfg)? {
        return Err(ProjLatError::NotProjection { index: 0 });
    }
    Ok(atoms.standard_subset(p, cfg).is_some())
}

fn final_projection_subset(
    t: &PartialIsometry,
    e: &ComplexMatrix,
    atom: usize,
    atoms: &AtomDecomposition,
    cfg: &ToleranceConfig,
) -> Result<BTreeSet<usize>, ProjLatError> {
    let product = t.matrix() * e;
    let pi = match make_partial_isometry(&product, cfg) {
        Ok(pi) => pi,
        Err(PisomError::NotPartialIsometry { deviation }) => {
            return Err(ProjLatError::NotPartialIsometry { atom, deviation })
        }
        Err(PisomError::Linalg(e)) => return Err(e.into()),
        Err(_) => unreachable!("make_partial_isometry only fails validation or shape checks"),
    };
    atoms
        .standard_subset(pi.final_projection(), cfg)
        .ok_or(ProjLatError::NotStandard { atom })
}

/// For each atom `a`, the atoms making up the final projection of `T·a`.
pub fn induced_atom_map(
    t: &PartialIsometry,
    atoms: &AtomDecomposition,
    cfg: &ToleranceConfig,
) -> Result<Vec<BTreeSet<usize>>, ProjLatError> {
    if t.dim() != atoms.dim() {
        return Err(ProjLatError::DimensionMismatch {
            expected: atoms.dim(),
            actual: t.dim(),
        });
    }
    atoms
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| final_projection_subset(t, a, i, atoms, cfg))
        .collect()
}

/// The set `Y` with `Q_{T·E_X} = E_Y`.
pub fn induced_set_map(
    t: &PartialIsometry,
    atoms: &AtomDecomposition,
    subset: &BTreeSet<usize>,
    cfg: &ToleranceConfig,
) -> Result<BTreeSet<usize>, ProjLatError> {
    let e = standard_projection(atoms, subset)?;
    let label = subset.iter().next().copied().unwrap_or(0);
    final_projection_subset(t, &e, label, atoms, cfg)
}

/// Sanity check used by tests and the enrichment pipeline: same atom count and
/// each atom of `a` matches one of `b`.
pub fn same_atoms(a: &AtomDecomposition, b: &AtomDecomposition, cfg: &ToleranceConfig) -> bool {
    a.len() == b.len()
        && a.atoms().iter().all(|x| {
            b.atoms()
                .iter()
                .any(|y| approx_equal(x, y, cfg).unwrap_or(false))
        })
}

/// Rank of each member, convenient for reporting.
pub fn member_ranks(fam: &ProjectionFamily, cfg: &ToleranceConfig) -> Vec<usize> {
    fam.members().iter().map(|m| rank(m, cfg)).collect()
}
