//! Semigroups generated by finitely many partial isometries.
//!
//! Closures are computed breadth-first by word length, so every element comes
//! with a shortest word over the generator names and a failing product is
//! reported with a minimal-length witness.

mod brandt;
mod enrich;
mod irreducible;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numlin::{
    approx_equal, relative_distance, scale_of, ComplexMatrix, LinalgError, ToleranceConfig,
};
use crate::pisom::{make_partial_isometry, pi_deviation_operator, PartialIsometry, PisomError};
use crate::projlat::{ProjLatError, ProjectionFamily};

pub use brandt::{
    brandt_membership, brandt_structure, BrandtBlock, BrandtStructure, BrandtVerification,
};
pub use enrich::{
    adjoin_algebra_projections, adjoin_final_projections, adjoin_initial_projections,
    check_intertwining_identity, enrich, EnrichmentResult, IntertwiningReport,
};
pub use irreducible::{check_asb_nonzero, is_irreducible, IrreducibilityReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SgroupError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Pisom(#[from] PisomError),
    #[error(transparent)]
    ProjLat(#[from] ProjLatError),
    #[error("generator name {0:?} is used twice")]
    DuplicateName(String),
    #[error("generator {name:?} has shape {actual:?}, expected {expected}x{expected}")]
    DimensionMismatch {
        name: String,
        expected: usize,
        actual: (usize, usize),
    },
    #[error("generator {name:?} is not a partial isometry (deviation {deviation:.3e})")]
    InvalidGenerator { name: String, deviation: f64 },
    #[error("unknown generator name {0:?}")]
    UnknownName(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("final projections do not commute (commutator norm {norm:.3e})")]
    NonCommutingQ { norm: f64 },
    #[error("initial projections do not commute (commutator norm {norm:.3e})")]
    NonCommutingP { norm: f64 },
    #[error("both operators must be nonzero")]
    NonzeroRequired,
    #[error(
        "minimal projection of rank {rank} (index {index}) has no element U with P_U = Q_U = E"
    )]
    NoMinimalWithLoop { index: usize, rank: usize },
    #[error("minimal projections cover rank {covered} of {dim}")]
    CoverageGap { covered: usize, dim: usize },
    #[error("minimal projections {first} and {second} are not orthogonal")]
    NonOrthogonalFamily { first: usize, second: usize },
    #[error("element {word} violates the block condition at ({first}, {second})")]
    MembershipViolation {
        word: String,
        first: usize,
        second: usize,
    },
    #[error("intertwining identity fails for ({tuple}) with residual {residual:.3e}")]
    IdentityViolation { tuple: String, residual: f64 },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

/// Validated generators of a semigroup of operators on `ℂ^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    dim: usize,
    named: Vec<(String, PartialIsometry)>,
    include_identity: bool,
    include_zero: bool,
}

fn fresh_name(taken: &[(String, PartialIsometry)], base: &str) -> String {
    let mut name = base.to_string();
    while taken.iter().any(|(n, _)| *n == name) {
        name.push('\'');
    }
    name
}

impl GeneratorSet {
    /// Identity included, zero excluded.
    pub fn new(
        dim: usize,
        generators: Vec<(String, ComplexMatrix)>,
        cfg: &ToleranceConfig,
    ) -> Result<Self, SgroupError> {
        let mut named: Vec<(String, PartialIsometry)> = Vec::with_capacity(generators.len());
        for (name, m) in generators {
            if named.iter().any(|(n, _)| *n == name) {
                return Err(SgroupError::DuplicateName(name));
            }
            if m.shape() != (dim, dim) {
                return Err(SgroupError::DimensionMismatch {
                    name,
                    expected: dim,
                    actual: m.shape(),
                });
            }
            match make_partial_isometry(&m, cfg) {
                Ok(pi) => named.push((name, pi)),
                Err(PisomError::NotPartialIsometry { deviation }) => {
                    return Err(SgroupError::InvalidGenerator { name, deviation })
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(Self {
            dim,
            named,
            include_identity: true,
            include_zero: false,
        })
    }

    pub fn with_identity(mut self, include: bool) -> Self {
        self.include_identity = include;
        self
    }

    pub fn with_zero(mut self, include: bool) -> Self {
        self.include_zero = include;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn include_identity(&self) -> bool {
        self.include_identity
    }

    pub fn include_zero(&self) -> bool {
        self.include_zero
    }

    /// The named generators as given (without the implicit identity or zero).
    pub fn named(&self) -> &[(String, PartialIsometry)] {
        &self.named
    }

    /// Generators actually used by the closure: the named ones plus `I` and
    /// `0` when requested (renamed if the names are taken).
    pub fn effective(&self) -> Vec<(String, PartialIsometry)> {
        let mut out = self.named.clone();
        let dim = self.dim;
        if self.include_identity {
            let name = fresh_name(&out, "I");
            out.push((name, PartialIsometry::identity(dim)));
        }
        if self.include_zero {
            let name = fresh_name(&out, "0");
            out.push((name, PartialIsometry::zero(dim)));
        }
        out
    }

    /// Adds `X*` for every named generator `X` whose adjoint is not already
    /// a generator.
    pub fn with_adjoints(&self, cfg: &ToleranceConfig) -> Self {
        let mut named = self.named.clone();
        for (name, g) in &self.named {
            let adj = g.adjoint();
            let present = named
                .iter()
                .any(|(_, h)| approx_equal(h.matrix(), adj.matrix(), cfg).unwrap_or(false));
            if !present {
                let name = fresh_name(&named, &format!("{name}*"));
                named.push((name, adj));
            }
        }
        Self {
            named,
            ..self.clone()
        }
    }

    /// Appends already validated generators; names are made unique.
    pub fn extended(&self, extra: Vec<(String, PartialIsometry)>) -> Self {
        let mut named = self.named.clone();
        for (name, g) in extra {
            let name = fresh_name(&named, &name);
            named.push((name, g));
        }
        Self {
            named,
            ..self.clone()
        }
    }

    /// Simultaneous conjugation `g ↦ W g Wᴴ` by a unitary `W`.
    pub fn conjugated(
        &self,
        w: &ComplexMatrix,
        cfg: &ToleranceConfig,
    ) -> Result<Self, SgroupError> {
        let gens = self
            .named
            .iter()
            .map(|(n, g)| (n.clone(), crate::numlin::conjugate(g.matrix(), w)))
            .collect();
        Ok(Self::new(self.dim, gens, cfg)?
            .with_identity(self.include_identity)
            .with_zero(self.include_zero))
    }

    fn lookup(&self, name: &str) -> Option<ComplexMatrix> {
        if let Some((_, g)) = self.effective().into_iter().find(|(n, _)| n == name) {
            return Some(g.into_matrix());
        }
        let base = name.strip_suffix('*')?;
        self.lookup(base).map(|m| m.adjoint())
    }

    /// Product of the named generators, left to right. A trailing `*`
    /// denotes the adjoint of a generator.
    pub fn evaluate_word<S: AsRef<str>>(&self, word: &[S]) -> Result<ComplexMatrix, SgroupError> {
        let mut out = ComplexMatrix::identity(self.dim);
        for name in word {
            let g = self
                .lookup(name.as_ref())
                .ok_or_else(|| SgroupError::UnknownName(name.as_ref().to_string()))?;
            out = &out * &g;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_elements: usize,
    pub max_word_length: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_elements: 20_000,
            max_word_length: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitHit {
    MaxElements,
    MaxWordLength,
}

impl fmt::Display for LimitHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitHit::MaxElements => write!(f, "max_elements"),
            LimitHit::MaxWordLength => write!(f, "max_word_length"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClosureStatus {
    Closed,
    Truncated(LimitHit),
    /// First product (in breadth-first order) that is not a partial
    /// isometry, with its operator-norm deviation `‖(MᴴM)² − MᴴM‖`.
    FailureWitness {
        word: Vec<String>,
        deviation: f64,
    },
}

impl ClosureStatus {
    pub fn is_closed(&self) -> bool {
        matches!(self, ClosureStatus::Closed)
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, ClosureStatus::FailureWitness { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    word: Vec<usize>,
    matrix: ComplexMatrix,
    isometry: Option<PartialIsometry>,
}

impl Element {
    /// Generator indices (into [`ClosureResult::generators`]) of a shortest word.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Present when the element was validated (monitored closures).
    pub fn isometry(&self) -> Option<&PartialIsometry> {
        self.isometry.as_ref()
    }
}

/// Pair of retained elements closer than `10·eq_tol` (relative distance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearDuplicate {
    pub first: usize,
    pub second: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureResult {
    generators: Vec<(String, PartialIsometry)>,
    source: GeneratorSet,
    elements: Vec<Element>,
    status: ClosureStatus,
    near_duplicates: Vec<NearDuplicate>,
}

impl ClosureResult {
    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// Generators as used by the search, including `I`/`0` when present.
    pub fn generators(&self) -> &[(String, PartialIsometry)] {
        &self.generators
    }

    pub fn generator_set(&self) -> &GeneratorSet {
        &self.source
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn status(&self) -> &ClosureStatus {
        &self.status
    }

    pub fn near_duplicates(&self) -> &[NearDuplicate] {
        &self.near_duplicates
    }

    pub fn word_names(&self, index: usize) -> Vec<String> {
        self.elements[index]
            .word
            .iter()
            .map(|&g| self.generators[g].0.clone())
            .collect()
    }

    pub fn word_string(&self, index: usize) -> String {
        self.word_names(index).join("·")
    }

    /// Index of an element approximately equal to `m`.
    pub fn find(&self, m: &ComplexMatrix, cfg: &ToleranceConfig) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| approx_equal(&e.matrix, m, cfg).unwrap_or(false))
    }

    pub fn contains(&self, m: &ComplexMatrix, cfg: &ToleranceConfig) -> bool {
        self.find(m, cfg).is_some()
    }

    /// Every element as a validated partial isometry.
    pub fn isometries(&self, cfg: &ToleranceConfig) -> Result<Vec<PartialIsometry>, SgroupError> {
        if self.status.is_failure() {
            return Err(SgroupError::InvalidState(
                "closure ended with a failure witness".into(),
            ));
        }
        self.elements
            .iter()
            .enumerate()
            .map(|(i, e)| match &e.isometry {
                Some(pi) => Ok(pi.clone()),
                None => make_partial_isometry(&e.matrix, cfg).map_err(|_| {
                    SgroupError::InvalidState(format!(
                        "element {} is not a partial isometry",
                        self.word_string(i)
                    ))
                }),
            })
            .collect()
    }
}

/// Tolerant set of matrices: a sorted window over a Lipschitz probe value
/// narrows the candidates, `approx_equal` decides.
struct DedupIndex {
    keys: Vec<(f64, usize)>,
    weight: f64,
    max_norm: f64,
}

impl DedupIndex {
    fn new() -> Self {
        Self {
            keys: Vec::new(),
            weight: 0.0,
            max_norm: 1.0,
        }
    }

    fn candidates(&self, value: f64, radius: f64) -> impl Iterator<Item = usize> + '_ {
        let lo = self.keys.partition_point(|&(k, _)| k < value - radius);
        let hi = self.keys.partition_point(|&(k, _)| k <= value + radius);
        self.keys[lo..hi].iter().map(|&(_, i)| i)
    }

    fn radius(&self, norm: f64, factor: f64, cfg: &ToleranceConfig) -> f64 {
        self.weight * factor * cfg.eq_tol * scale_of(&[norm, self.max_norm])
    }

    fn find(
        &self,
        m: &ComplexMatrix,
        elements: &[Element],
        cfg: &ToleranceConfig,
    ) -> Option<usize> {
        let (value, _) = m.probe();
        let radius = self.radius(m.frobenius_norm(), 1.0, cfg);
        let mut hits: Vec<usize> = self
            .candidates(value, radius)
            .filter(|&i| approx_equal(&elements[i].matrix, m, cfg).unwrap_or(false))
            .collect();
        hits.sort_unstable();
        hits.first().copied()
    }

    fn near(
        &self,
        m: &ComplexMatrix,
        elements: &[Element],
        cfg: &ToleranceConfig,
    ) -> Vec<(usize, f64)> {
        let (value, _) = m.probe();
        let radius = self.radius(m.frobenius_norm(), 10.0, cfg);
        self.candidates(value, radius)
            .map(|i| (i, relative_distance(&elements[i].matrix, m)))
            .filter(|&(_, d)| d < 10.0 * cfg.eq_tol)
            .collect()
    }

    fn insert(&mut self, m: &ComplexMatrix, index: usize) {
        let (value, weight) = m.probe();
        self.weight = self.weight.max(weight);
        self.max_norm = self.max_norm.max(m.frobenius_norm());
        let pos = self.keys.partition_point(|&(k, _)| k < value);
        self.keys.insert(pos, (value, index));
    }
}

struct Builder<'a> {
    cfg: &'a ToleranceConfig,
    monitor: bool,
    elements: Vec<Element>,
    index: DedupIndex,
    near_duplicates: Vec<NearDuplicate>,
}

enum Outcome {
    Duplicate,
    Added,
    Failed(f64),
}

impl Builder<'_> {
    fn offer(&mut self, word: Vec<usize>, m: ComplexMatrix) -> Outcome {
        if self.index.find(&m, &self.elements, self.cfg).is_some() {
            return Outcome::Duplicate;
        }
        let isometry = if self.monitor {
            match make_partial_isometry(&m, self.cfg) {
                Ok(pi) => Some(pi),
                Err(_) => return Outcome::Failed(pi_deviation_operator(&m)),
            }
        } else {
            None
        };
        let new_index = self.elements.len();
        for (first, distance) in self.index.near(&m, &self.elements, self.cfg) {
            self.near_duplicates.push(NearDuplicate {
                first,
                second: new_index,
                distance,
            });
        }
        self.index.insert(&m, new_index);
        self.elements.push(Element {
            word,
            matrix: m,
            isometry,
        });
        Outcome::Added
    }
}

/// Breadth-first closure of the generated semigroup.
///
/// Generation `k` holds the new elements with shortest word length `k`; the
/// next generation multiplies each of them on the right by every generator.
/// `Closed` means a full generation added nothing. With `monitor_pi` every
/// new product is validated and the first failure stops the search.
pub fn close(
    gens: &GeneratorSet,
    limits: Limits,
    monitor_pi: bool,
    cfg: &ToleranceConfig,
) -> ClosureResult {
    let generators = gens.effective();
    let mut b = Builder {
        cfg,
        monitor: monitor_pi,
        elements: Vec::new(),
        index: DedupIndex::new(),
        near_duplicates: Vec::new(),
    };
    let finish = |b: Builder, status| ClosureResult {
        generators: generators.clone(),
        source: gens.clone(),
        elements: b.elements,
        status,
        near_duplicates: b.near_duplicates,
    };

    let mut frontier = Vec::new();
    for (gi, (_, g)) in generators.iter().enumerate() {
        if b.elements.len() >= limits.max_elements {
            return finish(b, ClosureStatus::Truncated(LimitHit::MaxElements));
        }
        if let Outcome::Added = b.offer(vec![gi], g.matrix().clone()) {
            frontier.push(b.elements.len() - 1);
        }
    }

    let mut length = 1;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &fi in &frontier {
            for (gi, (_, g)) in generators.iter().enumerate() {
                let product = b.elements[fi].matrix() * g.matrix();
                let mut word = b.elements[fi].word.clone();
                word.push(gi);
                if length + 1 > limits.max_word_length {
                    if b.index.find(&product, &b.elements, cfg).is_none() {
                        return finish(b, ClosureStatus::Truncated(LimitHit::MaxWordLength));
                    }
                    continue;
                }
                if b.elements.len() >= limits.max_elements
                    && b.index.find(&product, &b.elements, cfg).is_none()
                {
                    return finish(b, ClosureStatus::Truncated(LimitHit::MaxElements));
                }
                match b.offer(word.clone(), product) {
                    Outcome::Duplicate => {}
                    Outcome::Added => next.push(b.elements.len() - 1),
                    Outcome::Failed(deviation) => {
                        let word = word.iter().map(|&g| generators[g].0.clone()).collect();
                        return finish(b, ClosureStatus::FailureWitness { word, deviation });
                    }
                }
            }
        }
        frontier = next;
        length += 1;
    }
    finish(b, ClosureStatus::Closed)
}

/// Monitored closure of the generators together with their adjoints.
pub fn selfadjoint_closure(
    gens: &GeneratorSet,
    limits: Limits,
    cfg: &ToleranceConfig,
) -> ClosureResult {
    close(&gens.with_adjoints(cfg), limits, true, cfg)
}

/// Deduplicated initial and final projection families of a closure.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyProjections {
    pub p_set: ProjectionFamily,
    pub q_set: ProjectionFamily,
}

pub fn family_projections(
    c: &ClosureResult,
    cfg: &ToleranceConfig,
) -> Result<FamilyProjections, SgroupError> {
    let isos = c.isometries(cfg)?;
    let p = isos.iter().map(|t| t.initial().clone()).collect();
    let q = isos.iter().map(|t| t.final_projection().clone()).collect();
    Ok(FamilyProjections {
        p_set: ProjectionFamily::deduplicated(c.dim(), p, cfg)?,
        q_set: ProjectionFamily::deduplicated(c.dim(), q, cfg)?,
    })
}

/// `P(S) = Q(S)` as sets.
pub fn check_pq_equal(c: &ClosureResult, cfg: &ToleranceConfig) -> Result<bool, SgroupError> {
    let fp = family_projections(c, cfg)?;
    let sub =
        |a: &ProjectionFamily, b: &ProjectionFamily| a.members().iter().all(|m| b.contains(m, cfg));
    Ok(sub(&fp.p_set, &fp.q_set) && sub(&fp.q_set, &fp.p_set))
}

/// `P(S) ∪ Q(S) ⊆ S`.
pub fn check_pq_contained(c: &ClosureResult, cfg: &ToleranceConfig) -> Result<bool, SgroupError> {
    let fp = family_projections(c, cfg)?;
    Ok(fp
        .p_set
        .members()
        .iter()
        .chain(fp.q_set.members())
        .all(|m| c.contains(m, cfg)))
}

/// Every adjoint of an element is an element.
pub fn is_adjoint_closed(c: &ClosureResult, cfg: &ToleranceConfig) -> bool {
    c.elements()
        .iter()
        .all(|e| c.contains(&e.matrix().adjoint(), cfg))
}
