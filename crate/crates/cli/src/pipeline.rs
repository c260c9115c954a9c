//! Analysis stages behind each command, and the certificate logic.

use pisomlab_core::invsg::{
    barnes_representation, check_representation, validate_table, InverseSemigroupTable,
};
use pisomlab_core::numlin::{commutator_norm, rank, ComplexMatrix, ToleranceConfig};
use pisomlab_core::pisom::{hw_decompose, hw_product_test, pi_deviation_operator, PisomError};
use pisomlab_core::projlat::{boolean_atoms, multiplicity_profile, ProjectionFamily};
use pisomlab_core::sgroup::{
    brandt_structure, check_intertwining_identity, check_pq_contained, check_pq_equal, close,
    enrich, family_projections, is_irreducible, selfadjoint_closure, ClosureResult, ClosureStatus,
    GeneratorSet, LimitHit, Limits, SgroupError,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::GeneratorFile;
use crate::CliError;

pub const TOOL: &str = "pisomlab";
pub const INTERTWINING_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Options {
    pub tol: Option<f64>,
    pub max_elements: Option<usize>,
    pub max_word_length: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub tolerances: ToleranceConfig,
    pub limits: Limits,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    /// The selfadjoint closure is a finite semigroup of partial isometries.
    Extendable,
    /// Some product in the selfadjoint closure is not a partial isometry, so
    /// no selfadjoint semigroup of partial isometries contains the generators.
    NotExtendable {
        witness_word: Vec<String>,
        deviation: f64,
    },
    /// The search hit a limit before deciding.
    Inconclusive { limit: LimitHit },
}

impl Verdict {
    pub fn from_status(status: &ClosureStatus) -> Self {
        match status {
            ClosureStatus::Closed => Verdict::Extendable,
            ClosureStatus::Truncated(limit) => Verdict::Inconclusive { limit: *limit },
            ClosureStatus::FailureWitness { word, deviation } => Verdict::NotExtendable {
                witness_word: word.clone(),
                deviation: *deviation,
            },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Extendable => "Extendable",
            Verdict::NotExtendable { .. } => "NotExtendable",
            Verdict::Inconclusive { .. } => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomsSummary {
    pub ranks: Vec<usize>,
    pub uniform: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrandtSummary {
    pub family_ranks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageSummary {
    pub status: String,
    pub element_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntertwiningSummary {
    pub samples: usize,
    pub max_residual: f64,
}

/// Full pipeline output. `status`, `element_count`, `witness_word` and
/// `deviation` describe the selfadjoint closure; the remaining facts are about
/// the semigroup generated by the input alone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub status: String,
    pub element_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_word: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    pub semigroup: StageSummary,
    pub pq_equal: Option<bool>,
    pub pq_contained: Option<bool>,
    pub q_commuting: Option<bool>,
    pub atoms: Option<AtomsSummary>,
    pub irreducible: bool,
    pub span_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brandt: Option<BrandtSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intertwining: Option<IntertwiningSummary>,
    pub verdict: Verdict,
    pub provenance: Provenance,
}

/// Everything resolved from a generator file and the command-line options.
pub struct Context {
    pub gens: GeneratorSet,
    pub cfg: ToleranceConfig,
    pub limits: Limits,
    pub provenance: Provenance,
}

impl Context {
    pub fn new(file: &GeneratorFile, opts: &Options) -> Result<Self, CliError> {
        let cfg = file.tolerance_config(opts.tol)?;
        let limits = file.limits(opts.max_elements, opts.max_word_length)?;
        let gens = file.generator_set(&cfg)?;
        Ok(Self {
            gens,
            cfg,
            limits,
            provenance: provenance(cfg, limits, opts.seed),
        })
    }
}

pub fn provenance(tolerances: ToleranceConfig, limits: Limits, seed: u64) -> Provenance {
    Provenance {
        tool: TOOL,
        version: env!("CARGO_PKG_VERSION"),
        tolerances,
        limits,
        seed,
    }
}

fn status_label(s: &ClosureStatus) -> String {
    match s {
        ClosureStatus::Closed => "closed".into(),
        ClosureStatus::Truncated(limit) => format!("truncated ({limit})"),
        ClosureStatus::FailureWitness { .. } => "failure_witness".into(),
    }
}

fn summary(c: &ClosureResult) -> StageSummary {
    StageSummary {
        status: status_label(c.status()),
        element_count: c.len(),
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Invariant(e.to_string())
}

/// Re-evaluates a witness word on the stated generators; the deviation must
/// match the recorded one within 10%.
pub fn replay_witness(
    gens: &GeneratorSet,
    word: &[String],
    recorded: f64,
) -> Result<f64, CliError> {
    let m = gens.evaluate_word(word).map_err(internal)?;
    let deviation = pi_deviation_operator(&m);
    if (deviation - recorded).abs() > 0.1 * recorded {
        return Err(CliError::Invariant(format!(
            "witness {} replays with deviation {deviation:.6e}, recorded {recorded:.6e}",
            word.join("·")
        )));
    }
    Ok(deviation)
}

fn checked_verdict(gens: &GeneratorSet, t: &ClosureResult) -> Result<Verdict, CliError> {
    let verdict = Verdict::from_status(t.status());
    if let Verdict::NotExtendable {
        witness_word,
        deviation,
    } = &verdict
    {
        replay_witness(gens, witness_word, *deviation)?;
    }
    Ok(verdict)
}

fn q_family(
    c: &ClosureResult,
    cfg: &ToleranceConfig,
) -> Result<Option<ProjectionFamily>, CliError> {
    if !c.status().is_closed() {
        return Ok(None);
    }
    Ok(Some(family_projections(c, cfg).map_err(internal)?.q_set))
}

fn atoms_summary(
    q: &ProjectionFamily,
    cfg: &ToleranceConfig,
) -> Result<Option<AtomsSummary>, CliError> {
    if !q.is_commuting(cfg) {
        return Ok(None);
    }
    let atoms = boolean_atoms(q, cfg).map_err(internal)?;
    let profile = multiplicity_profile(&atoms);
    Ok(Some(AtomsSummary {
        ranks: atoms.ranks().to_vec(),
        uniform: profile.uniform,
        multiplicity: profile.multiplicity,
    }))
}

/// validate → close → Q-commutativity → atoms → multiplicity →
/// irreducibility → selfadjoint closure → verdict.
pub fn analyze(ctx: &Context) -> Result<Report, CliError> {
    let (gens, cfg, limits) = (&ctx.gens, &ctx.cfg, ctx.limits);
    let s = close(gens, limits, true, cfg);
    let q = q_family(&s, cfg)?;
    let q_commuting = q.as_ref().map(|q| q.is_commuting(cfg));
    let atoms = match &q {
        Some(q) => atoms_summary(q, cfg)?,
        None => None,
    };
    let (pq_equal, pq_contained) = if s.status().is_closed() {
        (
            Some(check_pq_equal(&s, cfg).map_err(internal)?),
            Some(check_pq_contained(&s, cfg).map_err(internal)?),
        )
    } else {
        (None, None)
    };
    let intertwining = match q_commuting {
        Some(true) => {
            let r = check_intertwining_identity(&s, INTERTWINING_SAMPLES, ctx.provenance.seed, cfg)
                .map_err(internal)?;
            Some(IntertwiningSummary {
                samples: r.samples,
                max_residual: r.max_residual,
            })
        }
        _ => None,
    };
    let irr = is_irreducible(gens, cfg);

    let t = selfadjoint_closure(gens, limits, cfg);
    let verdict = checked_verdict(gens, &t)?;
    let brandt = if t.status().is_closed() {
        brandt_structure(&t, cfg).ok().map(|b| BrandtSummary {
            family_ranks: b.family_ranks(),
        })
    } else {
        None
    };
    let (witness_word, deviation) = match &verdict {
        Verdict::NotExtendable {
            witness_word,
            deviation,
        } => (Some(witness_word.clone()), Some(*deviation)),
        _ => (None, None),
    };
    Ok(Report {
        status: status_label(t.status()),
        element_count: t.len(),
        witness_word,
        deviation,
        semigroup: summary(&s),
        pq_equal,
        pq_contained,
        q_commuting,
        atoms,
        irreducible: irr.irreducible,
        span_dim: irr.span_dim,
        brandt,
        intertwining,
        verdict,
        provenance: ctx.provenance.clone(),
    })
}

fn max_pairwise_commutator(ms: &[ComplexMatrix]) -> Result<f64, CliError> {
    let mut worst: f64 = 0.0;
    for i in 0..ms.len() {
        for j in (i + 1)..ms.len() {
            worst = worst.max(commutator_norm(&ms[i], &ms[j]).map_err(internal)?);
        }
    }
    Ok(worst)
}

pub fn check(ctx: &Context) -> Result<Value, CliError> {
    let cfg = &ctx.cfg;
    let named = ctx.gens.named();
    let generators: Vec<Value> = named
        .iter()
        .map(|(name, g)| {
            json!({
                "name": name,
                "initial_rank": rank(g.initial(), cfg),
                "final_rank": rank(g.final_projection(), cfg),
                "power_partial_isometry": hw_decompose(g, cfg).is_ok(),
            })
        })
        .collect();
    let qs: Vec<ComplexMatrix> = named
        .iter()
        .map(|(_, g)| g.final_projection().clone())
        .collect();
    let ps: Vec<ComplexMatrix> = named.iter().map(|(_, g)| g.initial().clone()).collect();
    let q_comm = max_pairwise_commutator(&qs)?;
    let p_comm = max_pairwise_commutator(&ps)?;
    let threshold = cfg.proj_tol * (ctx.gens.dim() as f64).sqrt().max(1.0);
    let mut products = Vec::new();
    for (vn, v) in named {
        let mut row = Vec::new();
        for (_, w) in named {
            match hw_product_test(v, w, cfg) {
                Ok(t) => row.push(json!(t.is_pi)),
                Err(PisomError::InconsistentProductTest { .. }) => row.push(Value::Null),
                Err(e) => return Err(internal(format!("{vn}: {e}"))),
            }
        }
        products.push(row);
    }
    Ok(json!({
        "dim": ctx.gens.dim(),
        "generators": generators,
        "q_commuting": q_comm <= threshold,
        "q_max_commutator": q_comm,
        "p_commuting": p_comm <= threshold,
        "p_max_commutator": p_comm,
        "product_is_partial_isometry": products,
        "provenance": ctx.provenance,
    }))
}

fn closure_value(c: &ClosureResult) -> Value {
    let mut v = json!({
        "status": status_label(c.status()),
        "element_count": c.len(),
        "words": (0..c.len()).map(|i| c.word_string(i)).collect::<Vec<_>>(),
        "near_duplicates": c.near_duplicates().len(),
    });
    if let ClosureStatus::FailureWitness { word, deviation } = c.status() {
        v["witness_word"] = json!(word);
        v["deviation"] = json!(deviation);
    }
    v
}

pub fn closure(ctx: &Context) -> Result<Value, CliError> {
    let c = close(&ctx.gens, ctx.limits, true, &ctx.cfg);
    checked_verdict(&ctx.gens, &c)?;
    let mut v = closure_value(&c);
    v["provenance"] = json!(ctx.provenance);
    Ok(v)
}

/// Enrichment fixed point, then the selfadjoint closure of the enriched
/// generators. The verdict always comes from the selfadjoint closure of the
/// input generators, which is sound whatever the enrichment does.
pub fn extend(ctx: &Context) -> Result<Value, CliError> {
    let (gens, cfg, limits) = (&ctx.gens, &ctx.cfg, ctx.limits);
    let enrichment = match enrich(gens, limits, cfg) {
        Ok(e) => {
            let ext = selfadjoint_closure(e.closure.generator_set(), limits, cfg);
            let pq = if e.closure.status().is_closed() {
                Some(check_pq_contained(&e.closure, cfg).map_err(internal)?)
            } else {
                None
            };
            json!({
                "status": status_label(e.closure.status()),
                "element_count": e.closure.len(),
                "rounds": e.rounds,
                "generator_count": e.closure.generators().len(),
                "pq_contained": pq,
                "extension": closure_summary(&ext),
            })
        }
        Err(e @ (SgroupError::NonCommutingQ { .. } | SgroupError::NonCommutingP { .. })) => {
            json!({ "error": e.to_string() })
        }
        Err(SgroupError::InvariantViolation(m)) => return Err(CliError::Invariant(m)),
        Err(e) => return Err(internal(e)),
    };
    let t = selfadjoint_closure(gens, limits, cfg);
    let verdict = checked_verdict(gens, &t)?;
    Ok(json!({
        "enrichment": enrichment,
        "selfadjoint_closure": closure_summary(&t),
        "verdict": verdict,
        "provenance": ctx.provenance,
    }))
}

fn closure_summary(c: &ClosureResult) -> Value {
    let mut v = json!({ "status": status_label(c.status()), "element_count": c.len() });
    if let ClosureStatus::FailureWitness { word, deviation } = c.status() {
        v["witness_word"] = json!(word);
        v["deviation"] = json!(deviation);
    }
    v
}

pub fn atoms(ctx: &Context, full: bool) -> Result<Value, CliError> {
    let cfg = &ctx.cfg;
    let s = close(&ctx.gens, ctx.limits, true, cfg);
    let Some(q) = q_family(&s, cfg)? else {
        return Ok(
            json!({ "semigroup": summary(&s), "q_commuting": Value::Null, "provenance": ctx.provenance }),
        );
    };
    if !q.is_commuting(cfg) {
        return Ok(json!({
            "semigroup": summary(&s),
            "q_commuting": false,
            "q_max_commutator": q.max_pairwise_commutator(),
            "provenance": ctx.provenance,
        }));
    }
    let atoms = boolean_atoms(&q, cfg).map_err(internal)?;
    let profile = multiplicity_profile(&atoms);
    let mut v = json!({
        "semigroup": summary(&s),
        "q_commuting": true,
        "multiplicity": profile,
        "provenance": ctx.provenance,
    });
    if full {
        v["atoms"] = json!(atoms.to_record());
    } else {
        v["ranks"] = json!(atoms.ranks());
    }
    Ok(v)
}

pub fn decompose(ctx: &Context) -> Result<Value, CliError> {
    let items: Vec<Value> = ctx
        .gens
        .named()
        .iter()
        .map(|(name, g)| match hw_decompose(g, &ctx.cfg) {
            Ok(d) => json!({
                "name": name,
                "power_partial_isometry": true,
                "unitary_dim": d.unitary_dim(),
                "shift_lengths": d.shift_lengths(),
                "reassembly_error": (&d.reassemble() - g.matrix()).frobenius_norm(),
                "decomposition": d.to_record(),
            }),
            Err(e) => {
                json!({ "name": name, "power_partial_isometry": false, "reason": e.to_string() })
            }
        })
        .collect();
    Ok(json!({ "generators": items, "provenance": ctx.provenance }))
}

pub fn brandt(ctx: &Context) -> Result<Value, CliError> {
    let s = close(&ctx.gens, ctx.limits, true, &ctx.cfg);
    if !s.status().is_closed() {
        return Ok(json!({ "semigroup": summary(&s), "provenance": ctx.provenance }));
    }
    let v = match brandt_structure(&s, &ctx.cfg) {
        Ok(b) => json!({
            "semigroup": summary(&s),
            "brandt": true,
            "family_ranks": b.family_ranks(),
            "connectors": b.family.iter().map(|f| f.connector_word.clone()).collect::<Vec<_>>(),
            "verification": b.verification,
            "provenance": ctx.provenance,
        }),
        Err(e) => json!({
            "semigroup": summary(&s),
            "brandt": false,
            "error": e.to_string(),
            "provenance": ctx.provenance,
        }),
    };
    Ok(v)
}

pub fn barnes(table: &InverseSemigroupTable, opts: &Options) -> Result<Value, CliError> {
    let cfg = match opts.tol {
        Some(t) => ToleranceConfig::uniform(t).map_err(|e| CliError::Schema(e.to_string()))?,
        None => ToleranceConfig::default(),
    };
    let limits = Limits {
        max_elements: opts.max_elements.unwrap_or(Limits::default().max_elements),
        max_word_length: opts
            .max_word_length
            .unwrap_or(Limits::default().max_word_length),
    };
    let violations = validate_table(table);
    if !violations.is_empty() {
        let listed: Vec<String> = violations
            .iter()
            .take(20)
            .map(ToString::to_string)
            .collect();
        return Err(CliError::Schema(format!(
            "invalid table: {}",
            listed.join("; ")
        )));
    }
    let pi = barnes_representation(table, &cfg).map_err(internal)?;
    let check = check_representation(table, &pi, &cfg);
    let gens: Vec<_> = pi
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("pi({})", table.name(i)), p.matrix().clone()))
        .collect();
    let set = GeneratorSet::new(table.n, gens, &cfg).map_err(internal)?;
    let t = selfadjoint_closure(&set, limits, &cfg);
    Ok(json!({
        "n": table.n,
        "valid": true,
        "representation": check,
        "ranks": pi.iter().map(|p| rank(p.initial(), &cfg)).collect::<Vec<_>>(),
        "selfadjoint_closure": closure_summary(&t),
        "provenance": provenance(cfg, limits, opts.seed),
    }))
}
