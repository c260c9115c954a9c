//! Seeded random families of generator sets with structural properties fixed
//! by construction. Every instance is finally conjugated by a Haar-random
//! unitary so that no structure is visible in the coordinates.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::catalog::{
    block_diag_projection, block_monomial, random_coordinate_projection, random_monomial_unitary,
    random_partial_isometry, random_partial_permutation, small_group, spanning_generators,
};
use crate::numlin::{random_unitary, ComplexMatrix, ToleranceConfig};
use crate::sgroup::{check_pq_contained, check_pq_equal, close, enrich, GeneratorSet, Limits};

/// Pair `(V, W)` of random partial isometries on `ℂⁿ`. With `commuting`, `W`
/// is a monomial unitary times a coordinate projection, so `Q_W` is diagonal
/// and commutes with the diagonal `P_V`.
pub fn product_pair<R: Rng + ?Sized>(
    n: usize,
    commuting: bool,
    rng: &mut R,
) -> (ComplexMatrix, ComplexMatrix) {
    let v = &random_unitary(n, rng) * &random_coordinate_projection(n, rng);
    let w = if commuting {
        &random_monomial_unitary(n, rng) * &random_coordinate_projection(n, rng)
    } else {
        random_partial_isometry(n, rng)
    };
    (v, w)
}

fn random_blocks<R: Rng + ?Sized>(
    k: usize,
    pool: &[ComplexMatrix],
    rng: &mut R,
) -> Vec<ComplexMatrix> {
    (0..k)
        .map(|_| pool.choose(rng).expect("nonempty pool").clone())
        .collect()
}

fn conjugated(
    gens: &GeneratorSet,
    rng: &mut (impl Rng + ?Sized),
    cfg: &ToleranceConfig,
) -> GeneratorSet {
    let w = random_unitary(gens.dim(), rng);
    gens.conjugated(&w, cfg)
        .expect("conjugation preserves partial isometries")
}

/// Generators of a semigroup `S` with `P(S) = Q(S)`: block partial
/// permutations on `k ≤ 4` blocks of size `b ≤ 2` with small-group entries,
/// sometimes with a coordinate projection cutting through blocks, enriched
/// until `P(S) ∪ Q(S) ⊆ S`. Returns `None` when a draw does not yield a
/// closed semigroup of partial isometries.
pub fn pq_equal_instance<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &ToleranceConfig,
) -> Option<GeneratorSet> {
    let k = rng.random_range(2..=4);
    let b = rng.random_range(1..=2);
    let n = k * b;
    let pool = small_group(b);
    let mut gens = Vec::new();
    for g in 0..rng.random_range(1..=3) {
        let map = random_partial_permutation(k, rng);
        gens.push((
            format!("T{g}"),
            block_monomial(&map, &random_blocks(k, &pool, rng)),
        ));
    }
    if b > 1 && rng.random_bool(0.3) {
        gens.push(("D".into(), random_coordinate_projection(n, rng)));
    }
    let limits = Limits {
        max_elements: 4000,
        ..Limits::default()
    };
    let set = GeneratorSet::new(n, gens, cfg).ok()?;
    let e = enrich(&set, limits, cfg).ok()?.closure;
    if !e.status().is_closed()
        || !check_pq_contained(&e, cfg).ok()?
        || !check_pq_equal(&e, cfg).ok()?
    {
        return None;
    }
    Some(conjugated(e.generator_set(), rng, cfg))
}

/// Commuting final projections with uniform multiplicity `m`: on
/// `ℂᵏ ⊗ ℂᵐ`, all block projections `e_jj ⊗ I_m` plus block partial
/// permutations whose entries come from a finite subgroup of `U(m)`.
pub fn uniform_multiplicity_instance<R: Rng + ?Sized>(
    m: usize,
    rng: &mut R,
    cfg: &ToleranceConfig,
) -> GeneratorSet {
    let k = rng.random_range(1..=3);
    let pool = small_group(m);
    let mut gens: Vec<(String, ComplexMatrix)> = (0..k)
        .map(|j| (format!("E{j}"), block_diag_projection(k, m, j)))
        .collect();
    for g in 0..rng.random_range(1..=3) {
        let map = random_partial_permutation(k, rng);
        gens.push((
            format!("T{g}"),
            block_monomial(&map, &random_blocks(k, &pool, rng)),
        ));
    }
    let set = GeneratorSet::new(k * m, gens, cfg).expect("block monomials are partial isometries");
    conjugated(&set, rng, cfg)
}

/// Irreducible generators with commuting final projections on `ℂᵏ ⊗ ℂᵐ`:
/// the block cycle `C ⊗ I_m`, `e_11 ⊗ g` for generators `g` spanning `M_m`,
/// and optionally one more block partial permutation.
pub fn irreducible_instance<R: Rng + ?Sized>(
    m: usize,
    rng: &mut R,
    cfg: &ToleranceConfig,
) -> GeneratorSet {
    let k = if m >= 3 {
        rng.random_range(1..=2)
    } else {
        rng.random_range(1..=3)
    };
    let n = k * m;
    let mut gens = Vec::new();
    if k > 1 {
        gens.push((
            "C".to_string(),
            crate::catalog::cyclic_shift(k).kron(&ComplexMatrix::identity(m)),
        ));
    }
    let head = crate::catalog::matrix_unit(k, 0, 0);
    for (i, g) in spanning_generators(m).iter().enumerate() {
        gens.push((format!("G{i}"), head.kron(g)));
    }
    if m < 3 && rng.random_bool(0.5) {
        let map = random_partial_permutation(k, rng);
        gens.push((
            "T".to_string(),
            block_monomial(&map, &random_blocks(k, &small_group(m), rng)),
        ));
    }
    let set = GeneratorSet::new(n, gens, cfg).expect("block monomials are partial isometries");
    conjugated(&set, rng, cfg)
}

/// Closes `gens` with the given element budget and reports whether the
/// semigroup was finite within it.
pub fn closes_within(gens: &GeneratorSet, max_elements: usize, cfg: &ToleranceConfig) -> bool {
    let limits = Limits {
        max_elements,
        ..Limits::default()
    };
    close(gens, limits, true, cfg).status().is_closed()
}
