//! The analysis report and its text rendering.

use std::fmt::Write as _;

use monpres::classgroup::{class_group_normalized, CanonicalShape, ClassGroupError, ClassGroupParameters};
use monpres::criteria::{verdict_for, NormalityVerdict};
use monpres::divisors::{
    minimal_primes_one_relator, minimal_primes_two_relator, principal_decomposition_one_relator,
    principal_decomposition_two_relator, MinimalPrime,
};
use monpres::embedding::{embed_one_relator, embed_via_fractions, Embedding};
use monpres::presentation::{Normalized, Presentation, Trail, TrailStep};
use monpres::sweep::{InstanceCheck, OracleSet};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeEntry {
    /// Label in canonical coordinates, prefixed by the relation for products.
    pub label: String,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub generator: String,
    pub decomposition: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupEntry {
    pub group: String,
    pub free_rank: usize,
    pub invariant_factors: Vec<u64>,
    pub matrix_route: String,
    pub agree: bool,
    pub parameters: ClassGroupParameters,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleEntry {
    pub degree_bound: usize,
    pub requested: OracleSet,
    pub check: InstanceCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub input: String,
    pub normalized: String,
    pub trail: Trail,
    pub verdict: NormalityVerdict,
    pub canonical: Option<CanonicalShape>,
    /// Generator images, in the order of the normalized presentation.
    pub embedding: Option<Embedding>,
    pub minimal_primes: Vec<PrimeEntry>,
    pub principal_divisors: Vec<DivisorEntry>,
    pub class_group: Option<ClassGroupEntry>,
    pub notes: Vec<String>,
    pub oracles: Option<OracleEntry>,
}

impl AnalysisReport {
    /// Routes inside the report that contradict each other.
    pub fn disagreements(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(c) = &self.class_group {
            if !c.agree {
                out.push(format!("formula {} but divisor matrix {}", c.group, c.matrix_route));
            }
        }
        if let Some(o) = &self.oracles {
            out.extend(o.check.disagreements.iter().cloned());
        }
        out
    }
}

fn names(set: &[usize], relabel: &[usize], gens: &[String]) -> Vec<String> {
    set.iter().map(|&i| gens[relabel[i]].clone()).collect()
}

fn prime_entries(prefix: &str, primes: &[MinimalPrime], relabel: &[usize], gens: &[String]) -> Vec<PrimeEntry> {
    primes
        .iter()
        .map(|p| PrimeEntry {
            label: format!("{prefix}{}", p.label),
            generators: names(&p.generator_set, relabel, gens),
        })
        .collect()
}

fn divisors(shape: &CanonicalShape, gens: &[String]) -> (Vec<PrimeEntry>, Vec<DivisorEntry>) {
    let mut primes = Vec::new();
    let mut decs: Vec<(usize, DivisorEntry)> = Vec::new();
    let mut one = |prefix: &str, c: &monpres::criteria::CanonicalOneRelator| {
        primes.extend(prime_entries(prefix, &minimal_primes_one_relator(c), &c.relabel, gens));
        for i in 0..c.n {
            let d = principal_decomposition_one_relator(c, i).expect("index in range");
            let text: Vec<String> = d.to_string().split(" * ").map(|f| format!("{prefix}{f}")).collect();
            decs.push((
                c.relabel[i],
                DivisorEntry {
                    generator: gens[c.relabel[i]].clone(),
                    decomposition: text.join(" * "),
                },
            ));
        }
    };
    match shape {
        CanonicalShape::Free => {}
        CanonicalShape::One(c) => one("", c),
        CanonicalShape::Product { first, second } => {
            one("R1:", first);
            one("R2:", second);
        }
        CanonicalShape::Two(c) => {
            primes.extend(prime_entries("", &minimal_primes_two_relator(c), &c.relabel, gens));
            for i in 0..c.n {
                let d = principal_decomposition_two_relator(c, i).expect("index in range");
                decs.push((
                    c.relabel[i],
                    DivisorEntry {
                        generator: gens[c.relabel[i]].clone(),
                        decomposition: d.to_string(),
                    },
                ));
            }
        }
    }
    decs.sort_by_key(|(g, _)| *g);
    (primes, decs.into_iter().map(|(_, d)| d).collect())
}

/// Runs normalization, the criterion and, for normal input, the canonical
/// form, embedding, divisors and class group.
pub fn analyze(p: &Presentation, n: &Normalized) -> AnalysisReport {
    let verdict = verdict_for(n);
    let q = &n.presentation;
    let mut report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        input: p.to_inline(),
        normalized: q.to_inline(),
        trail: n.trail.clone(),
        verdict,
        canonical: None,
        embedding: None,
        minimal_primes: Vec::new(),
        principal_divisors: Vec::new(),
        class_group: None,
        notes: Vec::new(),
        oracles: None,
    };
    if report.verdict.conditional {
        report.notes.push(
            "normalization assumed cancellativity; run verify --oracle cancel to look for a counterexample".into(),
        );
    }
    if !report.verdict.is_normal() {
        return report;
    }
    match class_group_normalized(n) {
        Ok(r) => {
            report.embedding = match &r.shape {
                CanonicalShape::One(c) => Some(embed_one_relator(c)),
                _ => embed_via_fractions(q).ok(),
            };
            let (primes, decs) = divisors(&r.shape, q.generators());
            report.minimal_primes = primes;
            report.principal_divisors = decs;
            report.class_group = Some(ClassGroupEntry {
                group: r.formula.to_string(),
                free_rank: r.formula.free_rank,
                invariant_factors: r.formula.torsion.clone(),
                matrix_route: r.matrix_route.to_string(),
                agree: r.agree,
                parameters: r.parameters,
            });
            report.canonical = Some(r.shape);
        }
        Err(ClassGroupError::NoCanonicalShape) => {
            report.embedding = embed_via_fractions(q).ok();
            report.notes.push(
                "normal, but the relations fit neither canonical shape; \
                 verify --oracle class computes the class group from facet valuations"
                    .into(),
            );
        }
        Err(e) => report.notes.push(format!("class group unavailable: {e}")),
    }
    report
}

fn step_text(s: &TrailStep) -> String {
    match s {
        TrailStep::Cancelled {
            relation,
            generator,
            amount,
        } => format!("cancelled {generator}^{amount} in {relation}"),
        TrailStep::DroppedTrivial { relation } => format!("dropped trivial relation {relation}"),
        TrailStep::CollapsedToIdentity { relation, generators } => {
            format!("{relation} sets {} to 1", generators.join(", "))
        }
        TrailStep::Eliminated { generator, replacement } => format!("eliminated {generator} = {replacement}"),
        TrailStep::DependentReduced { relations, kept } => {
            format!("{} are dependent; kept {kept}", relations.join(" and "))
        }
        TrailStep::FreeFactors { generators } => format!("free factors {}", generators.join(", ")),
    }
}

fn parameters_text(p: &ClassGroupParameters) -> String {
    match p {
        ClassGroupParameters::Free => "free monoid".into(),
        ClassGroupParameters::One {
            k,
            n,
            d,
            copies,
            prime_count,
        } => format!("k = {k}, n = {n}, d = {d} (x{copies}), {prime_count} primes"),
        ClassGroupParameters::Two {
            k,
            n,
            f,
            d1,
            d1_copies,
            d2,
            d2_copies,
            prime_count,
        } => format!(
            "k = {k:?}, n = {n}, f = {f}, d1 = {d1} (x{d1_copies}), d2 = {d2} (x{d2_copies}), {prime_count} primes"
        ),
        ClassGroupParameters::Product { first, second } => {
            format!(
                "product of [{}] and [{}]",
                parameters_text(first),
                parameters_text(second)
            )
        }
    }
}

fn shape_text(s: &CanonicalShape, gens: &[String]) -> String {
    let order = |relabel: &[usize], n: usize| {
        let v: Vec<&str> = relabel[..n].iter().map(|&g| gens[g].as_str()).collect();
        v.join(" ")
    };
    match s {
        CanonicalShape::Free => "free".into(),
        CanonicalShape::One(c) => format!("k = {}, a = {:?}; u1.. = {}", c.k, c.a, order(&c.relabel, c.n)),
        CanonicalShape::Two(c) => format!(
            "k = {:?}, n = {}, a = {:?}, b = {:?}; u1.. = {}",
            c.k,
            c.n,
            c.a,
            c.b,
            order(&c.relabel, c.n)
        ),
        CanonicalShape::Product { first, second } => format!(
            "product of [{}] and [{}]",
            shape_text(&CanonicalShape::One(first.clone()), gens),
            shape_text(&CanonicalShape::One(second.clone()), gens)
        ),
    }
}

fn check_text(out: &mut String, o: &OracleEntry) {
    let c = &o.check;
    let _ = writeln!(out, "oracles (degree bound {}):", o.degree_bound);
    if let Some(n) = c.oracle_normal {
        let why = c
            .oracle_rejection
            .as_ref()
            .map(|r| format!(" ({r:?})"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "  normality:      {}{why}",
            if n { "normal" } else { "not normal" }
        );
    }
    if o.requested.cancel {
        let w = c.witness.as_deref().unwrap_or("none found");
        let _ = writeln!(out, "  cancellativity: {w}");
    }
    let route = |g: &Option<monpres::AbelianGroupInvariants>| g.as_ref().map_or("-".to_string(), |g| g.to_string());
    if o.requested.class {
        let _ = writeln!(
            out,
            "  class group:    formula {}, divisor matrix {}, facet valuations {}",
            route(&c.formula),
            route(&c.matrix_route),
            route(&c.facet_route)
        );
        if let (Some(p), Some(f)) = (c.prime_count, c.facet_count) {
            let _ = writeln!(out, "  primes/facets:  {p}/{f}");
        }
    }
    if let Some(i) = c.injective {
        let _ = writeln!(out, "  injective:      {i}");
    }
    for d in &c.disagreements {
        let _ = writeln!(out, "  DISAGREEMENT:   {d}");
    }
    for e in &c.errors {
        let _ = writeln!(out, "  unfinished:     {e}");
    }
}

/// Plain-text rendering.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input:      {}", r.input);
    let _ = writeln!(out, "normalized: {}", r.normalized);
    for s in &r.trail.steps {
        let _ = writeln!(out, "  - {}", step_text(s));
    }
    let _ = write!(out, "verdict:    {}", r.verdict.status);
    if let Some(c) = r.verdict.failed_condition {
        let _ = write!(out, " (fails {c})");
    }
    if r.verdict.conditional {
        let _ = write!(out, " [conditional]");
    }
    out.push('\n');
    if let Some(w) = &r.verdict.witness {
        let _ = writeln!(out, "  {w}");
    }
    let gens: Vec<String> = r
        .trail
        .kept
        .iter()
        .map(|&i| r.trail.original_generators[i].clone())
        .collect();
    if let Some(s) = &r.canonical {
        let _ = writeln!(out, "canonical:  {}", shape_text(s, &gens));
    }
    if let Some(e) = &r.embedding {
        let _ = writeln!(out, "embedding into Z^{}:", e.ambient_rank);
        for (g, v) in gens.iter().zip(&e.images) {
            let _ = writeln!(out, "  {g} -> {v:?}");
        }
    }
    if !r.minimal_primes.is_empty() {
        let _ = writeln!(out, "minimal primes:");
        for p in &r.minimal_primes {
            let _ = writeln!(out, "  {} = ({})", p.label, p.generators.join(", "));
        }
        let _ = writeln!(out, "principal divisors:");
        for d in &r.principal_divisors {
            let _ = writeln!(out, "  {}: {}", d.generator, d.decomposition);
        }
    }
    if let Some(c) = &r.class_group {
        let check = if c.agree {
            "divisor matrix agrees".to_string()
        } else {
            format!("divisor matrix gives {}", c.matrix_route)
        };
        let _ = writeln!(out, "class group: {} ({check})", c.group);
        let _ = writeln!(out, "  {}", parameters_text(&c.parameters));
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    if let Some(o) = &r.oracles {
        check_text(&mut out, o);
    }
    out
}
