//! Irreducibility through the dimension of the generated algebra.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{close, GeneratorSet, Limits, SgroupError};
use crate::numlin::{scale_of, Complex64, ComplexMatrix, Subspace, ToleranceConfig, ZERO};

const RANDOM_SEEDS: usize = 32;
const WITNESS_SEED: u64 = 0x0005_eed0_f1a7;

#[derive(Debug, Clone, PartialEq)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    /// Dimension of the linear span of all words.
    pub span_dim: usize,
    /// A nontrivial invariant subspace, when one was found.
    pub witness: Option<Subspace>,
}

fn inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// Orthonormal (Frobenius) basis that grows by Gram-Schmidt with
/// reorthogonalization.
struct SpanBasis {
    basis: Vec<ComplexMatrix>,
}

impl SpanBasis {
    fn try_add(&mut self, m: &ComplexMatrix, cfg: &ToleranceConfig) -> Option<ComplexMatrix> {
        let norm = m.frobenius_norm();
        let mut r = m.clone();
        for _ in 0..2 {
            for b in &self.basis {
                r = &r - &b.scale(inner(b, &r));
            }
        }
        let rn = r.frobenius_norm();
        if rn <= cfg.rank_tol * scale_of(&[norm]) {
            return None;
        }
        let r = r.scale_real(1.0 / rn);
        self.basis.push(r.clone());
        Some(r)
    }
}

/// Basis of the span of all words: start from the generators and close the
/// span under right multiplication by each generator.
fn algebra_basis(gens: &[ComplexMatrix], cfg: &ToleranceConfig) -> Vec<ComplexMatrix> {
    let mut span = SpanBasis { basis: Vec::new() };
    let mut queue: Vec<ComplexMatrix> = gens.iter().filter_map(|g| span.try_add(g, cfg)).collect();
    while let Some(m) = queue.pop() {
        for g in gens {
            if let Some(new) = span.try_add(&(&m * g), cfg) {
                queue.push(new);
            }
        }
    }
    span.basis
}

fn orbit(
    v: &[Complex64],
    algebra: &[ComplexMatrix],
    adjoint: bool,
    n: usize,
    cfg: &ToleranceConfig,
) -> Subspace {
    let mut vectors = vec![v.to_vec()];
    for a in algebra {
        let image = if adjoint {
            a.adjoint().apply(v)
        } else {
            a.apply(v)
        };
        vectors.push(image);
    }
    Subspace::span(n, &vectors, cfg)
}

fn find_witness(
    gens: &[ComplexMatrix],
    algebra: &[ComplexMatrix],
    n: usize,
    cfg: &ToleranceConfig,
) -> Option<Subspace> {
    let mut seeds: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        ZERO
                    }
                })
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    for _ in 0..RANDOM_SEEDS {
        seeds.push(
            (0..n)
                .map(|_| {
                    Complex64::new(
                        StandardNormal.sample(&mut rng),
                        StandardNormal.sample(&mut rng),
                    )
                })
                .collect(),
        );
    }
    let tol = cfg.eq_tol.sqrt();
    let invariant = |s: &Subspace| gens.iter().all(|g| s.is_invariant_under(g, tol));
    for v in &seeds {
        let w = orbit(v, algebra, false, n, cfg);
        if w.dim() > 0 && w.dim() < n && invariant(&w) {
            return Some(w);
        }
    }
    // a subspace invariant under every adjoint has an invariant complement
    for v in &seeds {
        let w = orbit(v, algebra, true, n, cfg);
        if w.dim() > 0 && w.dim() < n {
            let comp = w.orthogonal_complement(cfg);
            if invariant(&comp) {
                return Some(comp);
            }
        }
    }
    None
}

/// Burnside test: the words span all of `M_n` exactly when the semigroup acts
/// irreducibly. A witness is searched for heuristically and may be missing
/// even when the dimension count proves reducibility.
pub fn is_irreducible(gens: &GeneratorSet, cfg: &ToleranceConfig) -> IrreducibilityReport {
    let n = gens.dim();
    let mats: Vec<ComplexMatrix> = gens
        .effective()
        .into_iter()
        .map(|(_, g)| g.into_matrix())
        .collect();
    let algebra = algebra_basis(&mats, cfg);
    let span_dim = algebra.len();
    let irreducible = span_dim == n * n;
    let witness = if irreducible {
        None
    } else {
        find_witness(&mats, &algebra, n, cfg)
    };
    IrreducibilityReport {
        irreducible,
        span_dim,
        witness,
    }
}

/// Whether some word `w` of length at most `max_word_length` has
/// `a·w·b ≠ 0`. A `false` answer means none was found up to that length.
pub fn check_asb_nonzero(
    gens: &GeneratorSet,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    max_word_length: usize,
    cfg: &ToleranceConfig,
) -> Result<bool, SgroupError> {
    let (na, nb) = (a.frobenius_norm(), b.frobenius_norm());
    if na <= cfg.eq_tol || nb <= cfg.eq_tol {
        return Err(SgroupError::NonzeroRequired);
    }
    let n = gens.dim();
    for m in [a, b] {
        if m.shape() != (n, n) {
            return Err(crate::numlin::LinalgError::ShapeMismatch {
                left: (n, n),
                right: m.shape(),
            }
            .into());
        }
    }
    let limits = Limits {
        max_word_length,
        ..Limits::default()
    };
    let c = close(gens, limits, false, cfg);
    let bound = cfg.eq_tol * scale_of(&[na * nb]);
    Ok(c.elements()
        .iter()
        .any(|e| (&(a * e.matrix()) * b).frobenius_norm() > bound))
}
