//! Built-in instances and seeded random instance builders used by the
//! fixture corpus and the test suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::numlin::{conjugate, random_unitary, Complex64, ComplexMatrix, ONE, ZERO};
use crate::pisom::truncated_shift;

/// `½[[1,1],[1,1]]`, the projection onto `(1,1)/√2`.
pub fn projection_e() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])
}

/// `[[1,0],[0,0]]`.
pub fn projection_f() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]])
}

/// The three nilpotent 8x8 generators `A`, `B`, `C` (2x2 blocks):
/// `A` carries `E` from block 2 to block 1, `B` carries `I₂` from block 4 to
/// block 1 and `C` carries `F` from block 4 to block 3. Every product of two of
/// them is zero, their initial and final projections all commute, and yet no
/// selfadjoint semigroup of partial isometries contains them.
pub fn noncommuting_block_generators() -> Vec<(String, ComplexMatrix)> {
    let block = |i: usize, j: usize, m: ComplexMatrix| {
        let mut grid: Vec<Vec<Option<ComplexMatrix>>> = vec![vec![None; 4]; 4];
        grid[i][j] = Some(m);
        ComplexMatrix::from_blocks(2, &grid)
    };
    vec![
        ("A".to_string(), block(0, 1, projection_e())),
        ("B".to_string(), block(0, 3, ComplexMatrix::identity(2))),
        ("C".to_string(), block(2, 3, projection_f())),
    ]
}

/// Block-diagonal 8x8 matrix from four 2x2 blocks (`None` = zero block).
pub fn block_diag4(blocks: [Option<ComplexMatrix>; 4]) -> ComplexMatrix {
    let mut grid: Vec<Vec<Option<ComplexMatrix>>> = vec![vec![None; 4]; 4];
    for (i, b) in blocks.into_iter().enumerate() {
        grid[i][i] = b;
    }
    ComplexMatrix::from_blocks(2, &grid)
}

/// `e_ij` in `M_n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// `e_{i,i+1}` and `e_{i+1,i}`, which generate every matrix unit of `M_n`.
pub fn matrix_unit_generators(n: usize) -> Vec<(String, ComplexMatrix)> {
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        gens.push((format!("e{}{}", i + 1, i + 2), matrix_unit(n, i, i + 1)));
        gens.push((format!("e{}{}", i + 2, i + 1), matrix_unit(n, i + 1, i)));
    }
    gens
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// Cyclic shift `e_i ↦ e_{i+1 mod m}`.
pub fn cyclic_shift(m: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, m, |i, j| if i == (j + 1) % m { ONE } else { ZERO })
}

/// Clock matrix `diag(1, ω, …, ω^{m−1})`, `ω = e^{2πi/m}`.
pub fn clock(m: usize) -> ComplexMatrix {
    let diag: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64))
        .collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// Pauli group ⊗ matrix units on `ℂ² ⊗ ℂ³`: generators `X⊗I₃`, `Z⊗I₃`,
/// `I₂⊗e₁₂`, `I₂⊗e₂₃`, `I₂⊗e₃₁`. Irreducible, with `W*(Q)` spanned by the
/// rank-two atoms `I₂⊗e_jj`.
pub fn pauli_tensor_units() -> Vec<(String, ComplexMatrix)> {
    let i2 = ComplexMatrix::identity(2);
    let i3 = ComplexMatrix::identity(3);
    vec![
        ("X".to_string(), pauli_x().kron(&i3)),
        ("Z".to_string(), pauli_z().kron(&i3)),
        ("u12".to_string(), i2.kron(&matrix_unit(3, 0, 1))),
        ("u23".to_string(), i2.kron(&matrix_unit(3, 1, 2))),
        ("u31".to_string(), i2.kron(&matrix_unit(3, 2, 0))),
    ]
}

/// Diagonal 0/1 projection.
pub fn coordinate_projection(bits: &[bool]) -> ComplexMatrix {
    let diag: Vec<Complex64> = bits.iter().map(|&b| if b { ONE } else { ZERO }).collect();
    ComplexMatrix::from_diagonal(&diag)
}

pub fn random_coordinate_projection<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    coordinate_projection(&bits)
}

/// Permutation matrix with random unit phases.
pub fn random_monomial_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = ComplexMatrix::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    }
    m
}

/// `U·D` with `U` Haar-random and `D` a random coordinate projection.
pub fn random_partial_isometry<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let u = random_unitary(n, rng);
    &u * &random_coordinate_projection(n, rng)
}

/// A partial map of `{0, …, k−1}`: `map[x] = Some(y)` sends `x` to `y`.
pub type PartialMap = Vec<Option<usize>>;

/// Injective partial map with a random domain.
pub fn random_partial_permutation<R: Rng + ?Sized>(k: usize, rng: &mut R) -> PartialMap {
    let mut targets: Vec<usize> = (0..k).collect();
    targets.shuffle(rng);
    targets
        .into_iter()
        .map(|y| rng.random_bool(0.75).then_some(y))
        .collect()
}

/// `Σ_x e_{σ(x), x} ⊗ blocks[x]` over the domain of `σ`.
pub fn block_monomial(map: &[Option<usize>], blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let k = map.len();
    let b = blocks.first().map_or(1, ComplexMatrix::rows);
    let mut grid: Vec<Vec<Option<ComplexMatrix>>> = vec![vec![None; k]; k];
    for (x, y) in map.iter().enumerate() {
        if let Some(y) = y {
            grid[*y][x] = Some(blocks[x].clone());
        }
    }
    ComplexMatrix::from_blocks(b, &grid)
}

/// Elements of a small finite subgroup of `U(m)`: `{±1}`, the Pauli group
/// `{±I, ±X, ±Z, ±XZ}`, or the cyclic shifts of `ℂ³`.
pub fn small_group(m: usize) -> Vec<ComplexMatrix> {
    match m {
        1 => vec![
            ComplexMatrix::identity(1),
            ComplexMatrix::identity(1).scale_real(-1.0),
        ],
        2 => {
            let (i, x, z) = (ComplexMatrix::identity(2), pauli_x(), pauli_z());
            let xz = &x * &z;
            [i, x, z, xz]
                .into_iter()
                .flat_map(|g| [g.scale_real(-1.0), g])
                .collect()
        }
        _ => {
            let s = cyclic_shift(m);
            (0..m).map(|p| s.pow(p)).collect()
        }
    }
}

/// Generators whose words span all of `M_m`: `1`, `{X, Z}`, or shift and clock.
pub fn spanning_generators(m: usize) -> Vec<ComplexMatrix> {
    match m {
        1 => vec![ComplexMatrix::identity(1)],
        2 => vec![pauli_x(), pauli_z()],
        _ => vec![cyclic_shift(m), clock(m)],
    }
}

/// `W (U ⊕ J_{k₁} ⊕ … ⊕ J_{k_r}) Wᴴ` with `U`, `W` Haar-random.
pub fn hw_instance<R: Rng + ?Sized>(
    unitary_dim: usize,
    shift_lengths: &[usize],
    rng: &mut R,
) -> ComplexMatrix {
    let mut blocks = Vec::new();
    if unitary_dim > 0 {
        blocks.push(random_unitary(unitary_dim, rng));
    }
    blocks.extend(shift_lengths.iter().map(|&k| truncated_shift(k)));
    let core = ComplexMatrix::direct_sum(&blocks);
    let w = random_unitary(core.rows(), rng);
    conjugate(&core, &w)
}

/// `e_jj ⊗ I_m` on `ℂᵏ ⊗ ℂᵐ`.
pub fn block_diag_projection(k: usize, m: usize, j: usize) -> ComplexMatrix {
    matrix_unit(k, j, j).kron(&ComplexMatrix::identity(m))
}
