//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances and runtime bounds are pinned below.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pisomlab::input::{load_generator_file, load_table, GeneratorFile};
use pisomlab::{analyze, Context, Options, Verdict};
use pisomlab_core::catalog::{
    hw_instance, matrix_unit, matrix_unit_generators, noncommuting_block_generators,
};
use pisomlab_core::instances::{
    irreducible_instance, pq_equal_instance, product_pair, uniform_multiplicity_instance,
};
use pisomlab_core::invsg::{
    barnes_representation, check_representation, cyclic_group, symmetric_inverse_monoid,
    validate_table, InverseSemigroupTable,
};
use pisomlab_core::numlin::{
    approx_equal, conjugate, random_unitary, Complex64, ComplexMatrix, ToleranceConfig,
};
use pisomlab_core::pisom::{
    hw_decompose, hw_product_test, make_partial_isometry, pi_deviation_operator,
};
use pisomlab_core::projlat::{boolean_atoms, membership_in_span, multiplicity_profile};
use pisomlab_core::sgroup::{
    brandt_membership, brandt_structure, check_intertwining_identity, close, family_projections,
    is_irreducible, selfadjoint_closure, ClosureStatus, GeneratorSet, Limits,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_ENTRY_TOL: f64 = 1e-12;
const GOLDEN_DEVIATION: f64 = 0.25;
const GOLDEN_DEVIATION_TOL: f64 = 1e-6;
const INTERTWINING_SAMPLES: usize = 100;
const INTERTWINING_TOL: f64 = 1e-9;
const REASSEMBLY_TOL: f64 = 1e-9;
const BARNES_TOL: f64 = 1e-12;
/// Some finite selfadjoint closures of the random families need words longer
/// than the default bound of 16 (one draw needs 18).
const SUITE_LIMITS: Limits = Limits {
    max_elements: 20_000,
    max_word_length: 32,
};

const BOUND_GOLDEN: Duration = Duration::from_secs(1);
const BOUND_PRODUCT_FUZZ: Duration = Duration::from_secs(10);
const BOUND_PQ_EQUAL: Duration = Duration::from_secs(60);
const BOUND_UNIFORM: Duration = Duration::from_secs(120);
const BOUND_IRREDUCIBLE: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// 8x8 block diagonal from explicit 2x2 real blocks.
fn diag8(blocks: [[[f64; 2]; 2]; 4]) -> ComplexMatrix {
    ComplexMatrix::from_fn(8, 8, |i, j| {
        if i / 2 == j / 2 {
            Complex64::new(blocks[i / 2][i % 2][j % 2], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn mul2(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn transpose2(a: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Largest absolute eigenvalue of a real symmetric 2x2 matrix.
fn sym2_norm(a: [[f64; 2]; 2]) -> f64 {
    let (p, q, r) = (a[0][0], a[0][1], a[1][1]);
    let mean = (p + r) / 2.0;
    let rad = (((p - r) / 2.0).powi(2) + q * q).sqrt();
    (mean + rad).abs().max((mean - rad).abs())
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn within(start: Instant, bound: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < bound, || {
        format!(
            "took {:.2} s, bound {:.0} s",
            t.as_secs_f64(),
            bound.as_secs_f64()
        )
    })?;
    Ok(t)
}

fn golden_example() -> Outcome {
    let start = Instant::now();
    let cfg = cfg();
    let e = [[0.5, 0.5], [0.5, 0.5]];
    let f = [[1.0, 0.0], [0.0, 0.0]];
    let id = [[1.0, 0.0], [0.0, 1.0]];
    let z = [[0.0; 2]; 2];
    let file =
        load_generator_file(&fixtures().join("example-1-3.json")).map_err(|e| e.to_string())?;
    let gens = file.generator_set(&cfg).map_err(|e| e.to_string())?;
    let mut builtin = noncommuting_block_generators();
    builtin.push(("I8".into(), ComplexMatrix::identity(8)));
    ensure(
        gens.named().len() == builtin.len() && !gens.include_identity(),
        || "fixture generator list".into(),
    )?;
    for ((name, m), (bname, bm)) in gens.named().iter().zip(&builtin) {
        ensure(name == bname && m.matrix().max_abs_diff(bm) == 0.0, || {
            format!("fixture {name} differs")
        })?;
    }
    let expected = [
        ("A", diag8([z, e, z, z]), diag8([e, z, z, z])),
        ("B", diag8([z, z, z, id]), diag8([id, z, z, z])),
        ("C", diag8([z, z, z, f]), diag8([z, z, f, z])),
        ("I8", diag8([id; 4]), diag8([id; 4])),
    ];
    for (name, p, q) in &expected {
        let m = gens
            .named()
            .iter()
            .find(|(n, _)| n == name)
            .ok_or(format!("missing {name}"))?
            .1
            .matrix();
        let v = make_partial_isometry(m, &cfg).map_err(|e| format!("{name}: {e}"))?;
        let dp = v.initial().max_abs_diff(p);
        let dq = v.final_projection().max_abs_diff(q);
        ensure(dp <= GOLDEN_ENTRY_TOL && dq <= GOLDEN_ENTRY_TOL, || {
            format!("{name}: P off by {dp:.1e}, Q off by {dq:.1e}")
        })?;
    }

    let s = close(&gens, Limits::default(), true, &cfg);
    ensure(s.status().is_closed(), || {
        format!("closure status {:?}", s.status())
    })?;
    let q = family_projections(&s, &cfg)
        .map_err(|e| e.to_string())?
        .q_set;
    ensure(q.is_commuting(&cfg), || "Q-family does not commute".into())?;
    let atoms = boolean_atoms(&q, &cfg).map_err(|e| e.to_string())?;
    let ranks = sorted(atoms.ranks().to_vec());
    ensure(ranks == [1, 1, 1, 5], || format!("atom ranks {ranks:?}"))?;
    let profile = multiplicity_profile(&atoms);
    ensure(!profile.uniform, || "multiplicity reported uniform".into())?;
    let irr = is_irreducible(&gens, &cfg);
    ensure(!irr.irreducible, || "reported irreducible".into())?;

    // Q_A · B P_C B* = Diag(EF, 0, 0, 0); its deviation by hand.
    let ef = mul2(e, f);
    let p = mul2(transpose2(ef), ef);
    let p2 = mul2(p, p);
    let oracle = sym2_norm([
        [p2[0][0] - p[0][0], p2[0][1] - p[0][1]],
        [p2[1][0] - p[1][0], p2[1][1] - p[1][1]],
    ]);
    ensure(
        (oracle - GOLDEN_DEVIATION).abs() <= GOLDEN_DEVIATION_TOL,
        || format!("oracle gives {oracle}"),
    )?;
    let hand = gens
        .evaluate_word(&["A", "A*", "B", "C*", "C", "B*"])
        .map_err(|e| e.to_string())?;
    ensure(
        hand.max_abs_diff(&diag8([ef, z, z, z])) <= GOLDEN_ENTRY_TOL,
        || "hand product differs".into(),
    )?;

    let t = selfadjoint_closure(&gens, Limits::default(), &cfg);
    let ClosureStatus::FailureWitness { word, deviation } = t.status().clone() else {
        return Err(format!("selfadjoint closure status {:?}", t.status()));
    };
    let m = gens.evaluate_word(&word).map_err(|e| e.to_string())?;
    let replayed = pi_deviation_operator(&m);
    ensure(
        (replayed - oracle).abs() <= GOLDEN_DEVIATION_TOL
            && (deviation - oracle).abs() <= GOLDEN_DEVIATION_TOL,
        || {
            format!(
                "witness {} deviation {replayed} (recorded {deviation})",
                word.join("·")
            )
        },
    )?;
    let elapsed = within(start, BOUND_GOLDEN)?;
    Ok(format!(
        "atoms {ranks:?}, witness {} deviation {replayed:.6}, {:.3} s",
        word.join("·"),
        elapsed.as_secs_f64()
    ))
}

fn product_fuzz() -> Outcome {
    let start = Instant::now();
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let (mut yes, mut no) = (0, 0);
    for case in 0..1000 {
        let n = rng.random_range(2..=8);
        let (v, w) = product_pair(n, case % 2 == 0, &mut rng);
        let pv = make_partial_isometry(&v, &cfg).map_err(|e| format!("case {case}: {e}"))?;
        let pw = make_partial_isometry(&w, &cfg).map_err(|e| format!("case {case}: {e}"))?;
        let test =
            hw_product_test(&pv, &pw, &cfg).map_err(|e| format!("case {case} (n = {n}): {e}"))?;
        let direct = make_partial_isometry(&(&v * &w), &cfg).is_ok();
        ensure(test.is_pi == direct, || {
            format!("case {case}: criterion {} vs direct {direct}", test.is_pi)
        })?;
        if direct {
            yes += 1;
        } else {
            no += 1;
        }
    }
    let elapsed = within(start, BOUND_PRODUCT_FUZZ)?;
    Ok(format!(
        "1000/1000 agree ({yes} partial isometries, {no} not), {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn pq_equal_suite() -> Outcome {
    let start = Instant::now();
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let (mut accepted, mut draws, mut max_dim, mut max_len) = (0, 0, 0, 0);
    while accepted < 200 {
        draws += 1;
        ensure(draws <= 5000, || {
            format!("only {accepted} usable draws out of 5000")
        })?;
        let Some(gens) = pq_equal_instance(&mut rng, &cfg) else {
            continue;
        };
        ensure(gens.dim() <= 10, || format!("dimension {}", gens.dim()))?;
        let t = selfadjoint_closure(&gens, SUITE_LIMITS, &cfg);
        ensure(t.status().is_closed(), || {
            format!("instance {accepted}: status {:?}", t.status())
        })?;
        accepted += 1;
        max_dim = max_dim.max(gens.dim());
        max_len = max_len.max(t.len());
    }
    let elapsed = within(start, BOUND_PQ_EQUAL)?;
    Ok(format!(
        "200/200 closed ({draws} draws, dim ≤ {max_dim}, ≤ {max_len} elements), {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn uniform_suite() -> Outcome {
    let start = Instant::now();
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut max_len = 0;
    for i in 0..100 {
        let m = 1 + i % 3;
        let gens = uniform_multiplicity_instance(m, &mut rng, &cfg);
        let s = close(&gens, Limits::default(), true, &cfg);
        ensure(s.status().is_closed(), || {
            format!("instance {i}: semigroup status {:?}", s.status())
        })?;
        let q = family_projections(&s, &cfg)
            .map_err(|e| e.to_string())?
            .q_set;
        ensure(q.is_commuting(&cfg), || {
            format!("instance {i}: Q-family does not commute")
        })?;
        let profile = multiplicity_profile(&boolean_atoms(&q, &cfg).map_err(|e| e.to_string())?);
        ensure(profile.multiplicity == Some(m), || {
            format!("instance {i}: profile {profile:?}, expected {m}")
        })?;
        let t = selfadjoint_closure(&gens, SUITE_LIMITS, &cfg);
        ensure(t.status().is_closed(), || {
            format!("instance {i} (m = {m}): status {:?}", t.status())
        })?;
        max_len = max_len.max(t.len());
    }
    let elapsed = within(start, BOUND_UNIFORM)?;
    Ok(format!(
        "100/100 closed (≤ {max_len} elements), {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn irreducible_suite() -> Outcome {
    let start = Instant::now();
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut elements = 0;
    for i in 0..50 {
        let m = 1 + i % 3;
        let gens = irreducible_instance(m, &mut rng, &cfg);
        let n = gens.dim();
        let irr = is_irreducible(&gens, &cfg);
        ensure(irr.span_dim == n * n, || {
            format!("instance {i}: span {} of {}", irr.span_dim, n * n)
        })?;
        let s = close(&gens, Limits::default(), true, &cfg);
        ensure(s.status().is_closed(), || {
            format!("instance {i}: status {:?}", s.status())
        })?;
        let q = family_projections(&s, &cfg)
            .map_err(|e| e.to_string())?
            .q_set;
        ensure(q.is_commuting(&cfg), || {
            format!("instance {i}: Q-family does not commute")
        })?;
        let atoms = boolean_atoms(&q, &cfg).map_err(|e| e.to_string())?;
        let profile = multiplicity_profile(&atoms);
        ensure(profile.uniform, || {
            format!("instance {i}: profile {profile:?}")
        })?;
        for (j, el) in s.elements().iter().enumerate() {
            let p = &el.matrix().adjoint() * el.matrix();
            let inside = membership_in_span(&p, &atoms, &cfg).map_err(|e| e.to_string())?;
            ensure(inside, || {
                format!(
                    "instance {i}: P of {} outside the atom span",
                    s.word_string(j)
                )
            })?;
            elements += 1;
        }
    }
    let elapsed = within(start, BOUND_IRREDUCIBLE)?;
    Ok(format!(
        "50/50 uniform, {elements} initial projections in span, {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn corpus() -> Result<Vec<(String, GeneratorFile)>, String> {
    let mut out = Vec::new();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixtures())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    paths.sort();
    for p in paths {
        // tables share the directory; they fail to parse as generator files
        if let Ok(f) = load_generator_file(&p) {
            out.push((
                p.file_stem()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .into_owned(),
                f,
            ));
        }
    }
    ensure(out.len() >= 5, || {
        format!("only {} generator fixtures", out.len())
    })?;
    Ok(out)
}

fn intertwining_suite() -> Outcome {
    let cfg = cfg();
    let mut instances: Vec<(String, GeneratorSet)> = Vec::new();
    for (name, file) in corpus()? {
        instances.push((name, file.generator_set(&cfg).map_err(|e| e.to_string())?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for i in 0..10 {
        if let Some(g) = pq_equal_instance(&mut rng, &cfg) {
            instances.push((format!("pq-equal-{i}"), g));
        }
        instances.push((
            format!("uniform-{i}"),
            uniform_multiplicity_instance(1 + i % 3, &mut rng, &cfg),
        ));
        instances.push((
            format!("irreducible-{i}"),
            irreducible_instance(1 + i % 3, &mut rng, &cfg),
        ));
    }
    let (mut checked, mut worst) = (0, 0.0f64);
    for (k, (name, gens)) in instances.iter().enumerate() {
        let s = close(gens, Limits::default(), true, &cfg);
        if !s.status().is_closed() {
            continue;
        }
        let q = family_projections(&s, &cfg)
            .map_err(|e| e.to_string())?
            .q_set;
        if !q.is_commuting(&cfg) {
            continue;
        }
        let r = check_intertwining_identity(&s, INTERTWINING_SAMPLES, k as u64, &cfg)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(r.max_residual <= INTERTWINING_TOL, || {
            format!("{name}: residual {:.3e}", r.max_residual)
        })?;
        worst = worst.max(r.max_residual);
        checked += 1;
    }
    ensure(checked >= 20, || format!("only {checked} closed instances"))?;
    Ok(format!(
        "{checked} closed instances × {INTERTWINING_SAMPLES} tuples, max residual {worst:.2e}"
    ))
}

fn hw_round_trip() -> Outcome {
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let unitary_dim = rng.random_range(0..=3);
        let chains = rng.random_range(usize::from(unitary_dim == 0)..=3);
        let lengths: Vec<usize> = (0..chains).map(|_| rng.random_range(1..=4)).collect();
        let v = hw_instance(unitary_dim, &lengths, &mut rng);
        let pv = make_partial_isometry(&v, &cfg).map_err(|e| format!("instance {i}: {e}"))?;
        let d = hw_decompose(&pv, &cfg).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(d.unitary_dim() == unitary_dim, || {
            format!("instance {i}: unitary dim {}", d.unitary_dim())
        })?;
        let (got, want) = (sorted(d.shift_lengths()), sorted(lengths.clone()));
        ensure(got == want, || {
            format!("instance {i}: shifts {got:?}, expected {want:?}")
        })?;
        let err = (&d.reassemble() - &v).frobenius_norm();
        ensure(err <= REASSEMBLY_TOL, || {
            format!("instance {i}: reassembly error {err:.3e}")
        })?;
        worst = worst.max(err);
    }
    Ok(format!(
        "200/200 recovered, max reassembly error {worst:.2e}"
    ))
}

fn brandt_suite() -> Outcome {
    let cfg = cfg();
    let mut checked = 0;
    for n in 2..=5 {
        let gens =
            GeneratorSet::new(n, matrix_unit_generators(n), &cfg).map_err(|e| e.to_string())?;
        let c = close(&gens, Limits::default(), true, &cfg);
        ensure(c.status().is_closed(), || {
            format!("M_{n}: status {:?}", c.status())
        })?;
        let b = brandt_structure(&c, &cfg).map_err(|e| format!("M_{n}: {e}"))?;
        ensure(b.family.len() == n, || {
            format!("M_{n}: family of {}", b.family.len())
        })?;
        let mut hit = BTreeSet::new();
        for block in &b.family {
            let i = (0..n)
                .find(|&i| {
                    approx_equal(&block.projection, &matrix_unit(n, i, i), &cfg).unwrap_or(false)
                })
                .ok_or(format!("M_{n}: family member is not a diagonal unit"))?;
            hit.insert(i);
        }
        ensure(hit.len() == n, || format!("M_{n}: family covers {hit:?}"))?;
        for (j, el) in c.elements().iter().enumerate() {
            let ok = brandt_membership(el.matrix(), &b, &cfg).map_err(|e| e.to_string())?;
            ensure(ok, || format!("M_{n}: {} rejected", c.word_string(j)))?;
            checked += 1;
        }
    }
    let gens =
        GeneratorSet::new(8, noncommuting_block_generators(), &cfg).map_err(|e| e.to_string())?;
    let c = close(&gens, Limits::default(), true, &cfg);
    let err = match brandt_structure(&c, &cfg) {
        Ok(_) => return Err("8x8 example produced a Brandt structure".into()),
        Err(e) => e,
    };
    Ok(format!(
        "n = 2..5 with {{e_ii}}, {checked} elements accepted; example: \"{err}\""
    ))
}

fn barnes_table(
    name: &str,
    table: &InverseSemigroupTable,
    builtin: &InverseSemigroupTable,
) -> Result<usize, String> {
    let cfg = cfg();
    ensure(
        table.mult == builtin.mult && table.star == builtin.star,
        || format!("{name}: fixture differs from built-in"),
    )?;
    let violations = validate_table(table);
    ensure(violations.is_empty(), || {
        format!("{name}: {} table violations", violations.len())
    })?;
    let pi = barnes_representation(table, &cfg).map_err(|e| format!("{name}: {e}"))?;
    for (s, p) in pi.iter().enumerate() {
        let d = pi_deviation_operator(p.matrix());
        ensure(d <= BARNES_TOL, || {
            format!("{name}: π({}) deviation {d:.3e}", table.name(s))
        })?;
    }
    let check = check_representation(table, &pi, &cfg);
    ensure(check.multiplicative_residual <= BARNES_TOL, || {
        format!(
            "{name}: multiplicative residual {:.3e}",
            check.multiplicative_residual
        )
    })?;
    ensure(check.star_residual <= BARNES_TOL, || {
        format!("{name}: star residual {:.3e}", check.star_residual)
    })?;
    ensure(check.injective, || format!("{name}: not injective"))?;
    Ok(pi.len())
}

fn barnes_suite() -> Outcome {
    let cfg = cfg();
    let load = |f: &str| load_table(&fixtures().join(f)).map_err(|e| e.to_string());
    barnes_table("Z2", &load("z2.json")?, &cyclic_group(2))?;
    barnes_table("I1", &load("i1.json")?, &symmetric_inverse_monoid(1))?;
    let i2 = load("i2.json")?;
    barnes_table("I2", &i2, &symmetric_inverse_monoid(2))?;
    let pi = barnes_representation(&i2, &cfg).map_err(|e| e.to_string())?;
    let gens: Vec<_> = pi
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("s{i}"), p.matrix().clone()))
        .collect();
    let set = GeneratorSet::new(i2.n, gens, &cfg).map_err(|e| e.to_string())?;
    let t = selfadjoint_closure(&set, Limits::default(), &cfg);
    ensure(t.status().is_closed(), || {
        format!("π(I2) selfadjoint closure status {:?}", t.status())
    })?;
    Ok(format!(
        "Z2, I1, I2 faithful; π(I2) selfadjoint closure closed with {} elements",
        t.len()
    ))
}

fn fingerprint(file: &GeneratorFile) -> Result<(&'static str, Option<Vec<usize>>), String> {
    let ctx = Context::new(file, &Options::default()).map_err(|e| e.to_string())?;
    let report = analyze(&ctx).map_err(|e| e.to_string())?;
    let label = report.verdict.label();
    if let Verdict::NotExtendable {
        witness_word,
        deviation,
    } = &report.verdict
    {
        let m = ctx
            .gens
            .evaluate_word(witness_word)
            .map_err(|e| e.to_string())?;
        ensure(
            (pi_deviation_operator(&m) - deviation).abs() <= 1e-9,
            || "witness does not replay".into(),
        )?;
    }
    Ok((label, report.atoms.map(|a| sorted(a.ranks))))
}

fn determinism_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let mut runs = 0;
    let mut verdicts = Vec::new();
    for (name, file) in corpus()? {
        let base = fingerprint(&file)?;
        verdicts.push(format!("{name}={}", base.0));
        for trial in 0..=10 {
            let mut variant = file.clone();
            variant.generators.shuffle(&mut rng);
            // trial 0 only shuffles; the rest also conjugate
            if trial > 0 {
                let w = random_unitary(file.dim, &mut rng);
                for g in &mut variant.generators {
                    g.matrix = conjugate(&g.matrix, &w);
                }
            }
            let got = fingerprint(&variant)?;
            ensure(got == base, || {
                format!("{name} trial {trial}: {got:?} vs {base:?}")
            })?;
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} variant runs agree ({})",
        verdicts.join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("golden 8x8 example", golden_example),
        ("product criterion fuzz", product_fuzz),
        ("P(S) = Q(S) instances extend", pq_equal_suite),
        ("uniform multiplicity instances extend", uniform_suite),
        ("irreducible instances are uniform", irreducible_suite),
        ("intertwining identity", intertwining_suite),
        ("unitary / shift decomposition round trip", hw_round_trip),
        ("Brandt structure", brandt_suite),
        ("left regular representation", barnes_suite),
        (
            "determinism under reordering and conjugation",
            determinism_suite,
        ),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
