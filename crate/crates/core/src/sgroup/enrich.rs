//! Enrichment of a closed semigroup by projections, and the intertwining
//! identity `S (Q_{R₁}⋯Q_{R_m}) Sᴴ = Q_{SR₁}⋯Q_{SR_m}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{close, family_projections, ClosureResult, GeneratorSet, Limits, SgroupError};
use crate::numlin::{scale_of, ComplexMatrix, ToleranceConfig};
use crate::pisom::{make_partial_isometry, PartialIsometry};
use crate::projlat::{boolean_atoms, same_atoms, AtomDecomposition, ProjectionFamily};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Initial,
    Final,
}

fn require_usable(c: &ClosureResult) -> Result<(), SgroupError> {
    if c.status().is_failure() {
        return Err(SgroupError::InvalidState(
            "closure ended with a failure witness".into(),
        ));
    }
    Ok(())
}

fn side_family(
    c: &ClosureResult,
    side: Side,
    cfg: &ToleranceConfig,
) -> Result<ProjectionFamily, SgroupError> {
    let fp = family_projections(c, cfg)?;
    let fam = match side {
        Side::Initial => fp.p_set,
        Side::Final => fp.q_set,
    };
    if !fam.is_commuting(cfg) {
        let norm = fam.max_pairwise_commutator();
        return Err(match side {
            Side::Initial => SgroupError::NonCommutingP { norm },
            Side::Final => SgroupError::NonCommutingQ { norm },
        });
    }
    Ok(fam)
}

fn projection_generator(
    p: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<PartialIsometry, SgroupError> {
    Ok(make_partial_isometry(p, cfg)?)
}

/// Missing projections of one side, named after the element they come from.
fn missing_projections(
    c: &ClosureResult,
    side: Side,
    cfg: &ToleranceConfig,
) -> Result<Vec<(String, PartialIsometry)>, SgroupError> {
    let isos = c.isometries(cfg)?;
    let mut out: Vec<(String, PartialIsometry)> = Vec::new();
    for (i, t) in isos.iter().enumerate() {
        let (label, p) = match side {
            Side::Initial => ("P", t.initial()),
            Side::Final => ("Q", t.final_projection()),
        };
        if c.contains(p, cfg)
            || out
                .iter()
                .any(|(_, q)| crate::numlin::approx_equal(q.matrix(), p, cfg).unwrap_or(false))
        {
            continue;
        }
        out.push((
            format!("{label}({})", c.word_string(i)),
            projection_generator(p, cfg)?,
        ));
    }
    Ok(out)
}

fn adjoin_side(
    c: &ClosureResult,
    side: Side,
    limits: Limits,
    cfg: &ToleranceConfig,
) -> Result<ClosureResult, SgroupError> {
    require_usable(c)?;
    let before = boolean_atoms(&side_family(c, side, cfg)?, cfg)?;
    let mut current = c.clone();
    loop {
        if !current.status().is_closed() {
            return Ok(current);
        }
        side_family(&current, side, cfg)?;
        let missing = missing_projections(&current, side, cfg)?;
        if missing.is_empty() {
            break;
        }
        let gens = current.generator_set().extended(missing);
        current = close(&gens, limits, true, cfg);
    }
    let after = boolean_atoms(&side_family(&current, side, cfg)?, cfg)?;
    if !same_atoms(&before, &after, cfg) {
        return Err(SgroupError::InvariantViolation(
            "adjoining projections changed the generated Boolean algebra".into(),
        ));
    }
    Ok(current)
}

/// Adjoins `Q_T` for every element `T` and re-closes (monitored) until every
/// final projection is an element. A failure or truncation is returned as the
/// status of the result.
pub fn adjoin_final_projections(
    c: &ClosureResult,
    limits: Limits,
    cfg: &ToleranceConfig,
) -> Result<ClosureResult, SgroupError> {
    adjoin_side(c, Side::Final, limits, cfg)
}

/// Same as [`adjoin_final_projections`] for the initial projections `P_T`.
pub fn adjoin_initial_projections(
    c: &ClosureResult,
    limits: Limits,
    cfg: &ToleranceConfig,
) -> Result<ClosureResult, SgroupError> {
    adjoin_side(c, Side::Initial, limits, cfg)
}

/// Adjoins every atom of `W*(Q(S))` and re-closes; on success the atoms of the
/// new final-projection family must coincide with the given ones.
pub fn adjoin_algebra_projections(
    c: &ClosureResult,
    atoms: &AtomDecomposition,
    limits: Limits,
    cfg: &ToleranceConfig,
) -> Result<ClosureResult, SgroupError> {
    require_usable(c)?;
    side_family(c, Side::Final, cfg)?;
    let mut extra = Vec::new();
    for (i, a) in atoms.atoms().iter().enumerate() {
        if !c.contains(a, cfg) {
            extra.push((format!("atom{i}"), projection_generator(a, cfg)?));
        }
    }
    if extra.is_empty() {
        return Ok(c.clone());
    }
    let out = close(&c.generator_set().extended(extra), limits, true, cfg);
    if out.status().is_closed() {
        let after = boolean_atoms(&side_family(&out, Side::Final, cfg)?, cfg)?;
        if !same_atoms(atoms, &after, cfg) {
            return Err(SgroupError::InvariantViolation(
                "adjoining atoms changed the final-projection algebra".into(),
            ));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnrichmentResult {
    pub closure: ClosureResult,
    /// Number of full rounds (final projections, atoms, initial projections).
    pub rounds: usize,
}

/// Deterministic enrichment fixed point: close, then repeatedly adjoin final
/// projections, the atoms of their algebra and the initial projections until
/// a round adds nothing or the closure stops being `Closed`.
pub fn enrich(
    gens: &GeneratorSet,
    limits: Limits,
    cfg: &ToleranceConfig,
) -> Result<EnrichmentResult, SgroupError> {
    let mut c = close(gens, limits, true, cfg);
    let mut rounds = 0;
    while c.status().is_closed() {
        let before = c.len();
        rounds += 1;
        c = adjoin_final_projections(&c, limits, cfg)?;
        if !c.status().is_closed() {
            break;
        }
        let atoms = boolean_atoms(&side_family(&c, Side::Final, cfg)?, cfg)?;
        c = adjoin_algebra_projections(&c, &atoms, limits, cfg)?;
        if !c.status().is_closed() {
            break;
        }
        c = adjoin_initial_projections(&c, limits, cfg)?;
        if c.len() == before {
            break;
        }
    }
    Ok(EnrichmentResult { closure: c, rounds })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntertwiningReport {
    pub samples: usize,
    pub max_residual: f64,
}

/// Samples tuples `(S, R₁, …, R_m)`, `m ≤ 4`, from the elements and checks
/// `S (Q_{R₁}⋯Q_{R_m}) Sᴴ = Q_{SR₁}⋯Q_{SR_m}` within `eq_tol`.
pub fn check_intertwining_identity(
    c: &ClosureResult,
    samples: usize,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<IntertwiningReport, SgroupError> {
    require_usable(c)?;
    side_family(c, Side::Final, cfg)?;
    let isos = c.isometries(cfg)?;
    let n = c.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual: f64 = 0.0;
    for _ in 0..samples {
        let s = rng.random_range(0..isos.len());
        let m = rng.random_range(1..=4);
        let rs: Vec<usize> = (0..m).map(|_| rng.random_range(0..isos.len())).collect();
        let sm = isos[s].matrix();
        let mut inner = ComplexMatrix::identity(n);
        let mut rhs = ComplexMatrix::identity(n);
        for &r in &rs {
            inner = &inner * isos[r].final_projection();
            let sr = sm * isos[r].matrix();
            rhs = &rhs * &(&sr * &sr.adjoint());
        }
        let lhs = &(sm * &inner) * &sm.adjoint();
        let residual = (&lhs - &rhs).frobenius_norm();
        max_residual = max_residual.max(residual);
        if residual > cfg.eq_tol * scale_of(&[lhs.frobenius_norm(), rhs.frobenius_norm()]) {
            let tuple = std::iter::once(s)
                .chain(rs)
                .map(|i| c.word_string(i))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(SgroupError::IdentityViolation { tuple, residual });
        }
    }
    Ok(IntertwiningReport {
        samples,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{matrix_unit, matrix_unit_generators, noncommuting_block_generators};
    use crate::sgroup::{check_pq_contained, selfadjoint_closure};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn closed(gens: Vec<(String, ComplexMatrix)>, n: usize) -> ClosureResult {
        let g = GeneratorSet::new(n, gens, &cfg()).unwrap();
        let c = close(&g, Limits::default(), true, &cfg());
        assert!(c.status().is_closed());
        c
    }

    #[test]
    fn matrix_units_already_contain_their_projections() {
        let c = closed(matrix_unit_generators(3), 3);
        let d = adjoin_final_projections(&c, Limits::default(), &cfg()).unwrap();
        assert_eq!(d.len(), c.len());
    }

    #[test]
    fn single_shift_gains_its_final_projection() {
        let c = closed(vec![("V".into(), matrix_unit(2, 0, 1))], 2);
        assert_eq!(c.len(), 3); // V, I, 0
        let d = adjoin_final_projections(&c, Limits::default(), &cfg()).unwrap();
        assert!(d.status().is_closed());
        assert!(d.contains(&matrix_unit(2, 0, 0), &cfg()));
        assert_eq!(d.len(), 4);
        assert!(!d.contains(&matrix_unit(2, 1, 1), &cfg()));
        let e = adjoin_initial_projections(&d, Limits::default(), &cfg()).unwrap();
        assert!(e.contains(&matrix_unit(2, 1, 1), &cfg()));
    }

    #[test]
    fn identity_is_unchanged() {
        let c = closed(vec![], 3);
        let d = adjoin_final_projections(&c, Limits::default(), &cfg()).unwrap();
        assert_eq!(d.len(), 1);
        let atoms = boolean_atoms(&family_projections(&c, &cfg()).unwrap().q_set, &cfg()).unwrap();
        assert_eq!(
            adjoin_algebra_projections(&c, &atoms, Limits::default(), &cfg())
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn example_closure_accepts_its_atoms() {
        let c = closed(noncommuting_block_generators(), 8);
        let atoms = boolean_atoms(&family_projections(&c, &cfg()).unwrap().q_set, &cfg()).unwrap();
        let d = adjoin_algebra_projections(&c, &atoms, Limits::default(), &cfg()).unwrap();
        assert!(d.status().is_closed());
        for a in atoms.atoms() {
            assert!(d.contains(a, &cfg()));
        }
        // adjoints are still what breaks it
        let gens = d.generator_set().clone();
        assert!(selfadjoint_closure(&gens, Limits::default(), &cfg())
            .status()
            .is_failure());
    }

    #[test]
    fn enrichment_contains_all_projections() {
        let c = enrich(
            &GeneratorSet::new(2, vec![("V".into(), matrix_unit(2, 0, 1))], &cfg()).unwrap(),
            Limits::default(),
            &cfg(),
        )
        .unwrap();
        assert!(c.closure.status().is_closed());
        assert!(check_pq_contained(&c.closure, &cfg()).unwrap());
        // (Q_B − Q_A)·B has initial projection Diag(0, 0, 0, I − E), which does not commute with P_C
        let e = enrich(
            &GeneratorSet::new(8, noncommuting_block_generators(), &cfg()).unwrap(),
            Limits::default(),
            &cfg(),
        );
        assert!(matches!(e, Err(SgroupError::NonCommutingP { .. })));
    }

    #[test]
    fn intertwining_identity_holds() {
        let c = closed(matrix_unit_generators(3), 3);
        let r = check_intertwining_identity(&c, 100, 7, &cfg()).unwrap();
        assert!(r.max_residual <= 1e-12);
        let c = closed(noncommuting_block_generators(), 8);
        let r = check_intertwining_identity(&c, 100, 7, &cfg()).unwrap();
        assert!(r.max_residual <= 1e-12);
        let c = closed(vec![], 2);
        let r = check_intertwining_identity(&c, 1, 0, &cfg()).unwrap();
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn noncommuting_final_projections_are_rejected() {
        // |e₁⟩⟨e₃| and |u⟩⟨e₃| with u = (e₁ + e₂)/√2: all products vanish
        let r = 0.5f64.sqrt();
        let v1 =
            ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        let v2 = ComplexMatrix::from_real_rows(&[&[0.0, 0.0, r], &[0.0, 0.0, r], &[0.0, 0.0, 0.0]]);
        let c = closed(vec![("V1".into(), v1), ("V2".into(), v2)], 3);
        assert_eq!(c.len(), 4);
        assert!(matches!(
            adjoin_final_projections(&c, Limits::default(), &cfg()),
            Err(SgroupError::NonCommutingQ { .. })
        ));
        assert!(matches!(
            check_intertwining_identity(&c, 10, 0, &cfg()),
            Err(SgroupError::NonCommutingQ { .. })
        ));
        let failed = selfadjoint_closure(
            &GeneratorSet::new(8, noncommuting_block_generators(), &cfg()).unwrap(),
            Limits::default(),
            &cfg(),
        );
        assert!(matches!(
            adjoin_final_projections(&failed, Limits::default(), &cfg()),
            Err(SgroupError::InvalidState(_))
        ));
    }
}
