//! Exhaustive families of small presentations and the per-instance
//! cross-check of the combinatorial layer against the oracles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classgroup::{class_group_normalized, CanonicalShape, ClassGroupError, ClassGroupParameters};
use crate::criteria::{canonicalize_two_relator, CanonicalTwoRelator, NormalityStatus, NormalityVerdict};
use crate::divisors::{
    divisor_data_one_relator, divisor_data_two_relator, minimal_primes_two_relator, two_relator_prime_count,
};
use crate::embedding::{embed_one_relator, embed_via_fractions, Embedding};
use crate::linalg::AbelianGroupInvariants;
use crate::oracle::congruence::{cancellativity_witness, congruence_classes, CancellativityWitness};
use crate::oracle::valuation::{facet_valuation_class_group, reconcile};
use crate::oracle::{oracle_normality, OracleError, OracleRejection};
use crate::presentation::{normalize, Normalized, Presentation, Relation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    One,
    Two,
}

/// One member of a sweep family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Instance {
    /// `u_1^{c_1} ⋯ u_k^{c_k} = u_{k+1}^{a_{k+1}} ⋯ u_n^{a_n}`.
    One {
        lhs: Vec<u64>,
        rhs: Vec<u64>,
    },
    Two(CanonicalTwoRelator),
}

impl Instance {
    pub fn presentation(&self) -> Presentation {
        match self {
            Instance::One { lhs, rhs } => {
                let k = lhs.len();
                let rel = Relation::new(
                    Word::from_pairs(lhs.iter().enumerate().map(|(i, &e)| (i, e))),
                    Word::from_pairs(rhs.iter().enumerate().map(|(i, &e)| (k + i, e))),
                );
                Presentation::with_indexed_names(k + rhs.len(), vec![rel]).expect("exponents are positive")
            }
            Instance::Two(c) => c.presentation(),
        }
    }

    pub fn parameters(&self) -> String {
        match self {
            Instance::One { lhs, rhs } => {
                format!("n={} k={} lhs={lhs:?} rhs={rhs:?}", lhs.len() + rhs.len(), lhs.len())
            }
            Instance::Two(c) => {
                let a: Vec<u64> = (0..c.k[4])
                    .map(|i| if (c.k[1]..c.k[2]).contains(&i) { 0 } else { c.a[i] })
                    .collect();
                format!("n={} k={:?} a={a:?} b={:?}", c.n, c.k, c.b)
            }
        }
    }
}

fn nonincreasing(len: usize, max: u64) -> Vec<Vec<u64>> {
    fn rec(len: usize, top: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for e in 1..=top {
            cur.push(e);
            rec(len, e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, max, &mut Vec::new(), &mut out);
    out
}

/// All one-relation presentations on `n ≤ max_n` generators with exponents
/// up to `max_exp` on both sides, one per isomorphism class under permuting
/// generators and swapping the sides.
///
/// ```
/// use monpres::sweep::{one_relator_family, Instance};
///
/// let f = one_relator_family(2, 2);
/// // u1 = u2, u1 = u2^2 and u1^2 = u2^2
/// assert_eq!(f.len(), 3);
/// assert!(f.iter().all(|i| matches!(i, Instance::One { lhs, .. } if lhs.len() == 1)));
/// ```
pub fn one_relator_family(max_n: usize, max_exp: u64) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for k in 1..n {
            for lhs in nonincreasing(k, max_exp) {
                for rhs in nonincreasing(n - k, max_exp) {
                    if (k, &lhs, &rhs) <= (n - k, &rhs, &lhs) {
                        out.push(Instance::One { lhs: lhs.clone(), rhs });
                    }
                }
            }
        }
    }
    out
}

fn tuples(len: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=max).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

fn block_sizes(n: usize) -> Vec<[usize; 5]> {
    let mut out = Vec::new();
    for k1 in 1..n {
        for k2 in k1..n {
            for k3 in k2..n {
                for k4 in k3..n {
                    for k5 in k4..n - 1 {
                        // the first relation needs a nonempty right side
                        if k2 > k1 || k4 > k3 {
                            out.push([k1, k2, k3, k4, k5]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Whether the canonical relations survive normalization untouched and the
/// canonical form of the result is the instance itself.
fn is_canonical_instance(c: &CanonicalTwoRelator) -> bool {
    let p = c.presentation();
    let Ok(n) = normalize(&p) else { return false };
    if n.presentation.relations() != p.relations() || n.presentation.generator_count() != p.generator_count() {
        return false;
    }
    match canonicalize_two_relator(&p) {
        Ok(found) => found.k == c.k && found.a == c.a && found.b == c.b,
        Err(_) => false,
    }
}

/// Canonical two-relation shapes with `n ≤ max_n` and exponents up to
/// `max_exp`, including every degenerate block pattern that admits an
/// instance. Instances that normalization would simplify, and relabelings of
/// an earlier instance, are skipped.
pub fn two_relator_family(max_n: usize, max_exp: u64) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        for k in block_sizes(n) {
            let weighted: Vec<usize> = (0..k[4]).filter(|i| !(k[1]..k[2]).contains(i)).collect();
            for a_values in tuples(weighted.len(), max_exp) {
                let mut a = vec![1; k[4]];
                for (&i, &e) in weighted.iter().zip(&a_values) {
                    a[i] = e;
                }
                for b in tuples(k[1] - k[0], max_exp) {
                    let c = CanonicalTwoRelator::standard(k, n, a.clone(), b, 0);
                    if is_canonical_instance(&c) {
                        out.push(Instance::Two(c));
                    }
                }
            }
        }
    }
    out
}

pub fn family(family: Family, max_n: usize, max_exp: u64) -> Vec<Instance> {
    match family {
        Family::One => one_relator_family(max_n, max_exp),
        Family::Two => two_relator_family(max_n, max_exp),
    }
}

/// Which oracles a check runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSet {
    pub cancel: bool,
    pub normal: bool,
    pub class: bool,
}

impl OracleSet {
    pub const ALL: OracleSet = OracleSet {
        cancel: true,
        normal: true,
        class: true,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub oracles: OracleSet,
    /// Degree bound of the cancellativity search.
    pub degree_bound: usize,
    /// Degree up to which congruence classes must have distinct images.
    pub injectivity_degree: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            oracles: OracleSet::ALL,
            degree_bound: 8,
            injectivity_degree: None,
        }
    }
}

/// Results of every route on one presentation. Route fields are `None` when
/// the route was not run or does not apply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceCheck {
    pub verdict: NormalityVerdict,
    pub oracle_normal: Option<bool>,
    pub oracle_rejection: Option<OracleRejection>,
    pub formula: Option<AbelianGroupInvariants>,
    pub matrix_route: Option<AbelianGroupInvariants>,
    pub facet_route: Option<AbelianGroupInvariants>,
    pub parameters: Option<ClassGroupParameters>,
    /// Minimal primes plus free generators, against the number of facets.
    pub prime_count: Option<usize>,
    pub facet_count: Option<usize>,
    pub reconciled: Option<bool>,
    pub witness: Option<String>,
    pub injective: Option<bool>,
    /// Routes that returned different answers.
    pub disagreements: Vec<String>,
    /// Routes that could not finish.
    pub errors: Vec<String>,
    /// Some route stopped at a resource limit.
    pub resource_limited: bool,
}

impl InstanceCheck {
    fn new(verdict: NormalityVerdict) -> Self {
        InstanceCheck {
            verdict,
            oracle_normal: None,
            oracle_rejection: None,
            formula: None,
            matrix_route: None,
            facet_route: None,
            parameters: None,
            prime_count: None,
            facet_count: None,
            reconciled: None,
            witness: None,
            injective: None,
            disagreements: Vec::new(),
            errors: Vec::new(),
            resource_limited: false,
        }
    }

    pub fn agree(&self) -> bool {
        self.disagreements.is_empty()
    }

    fn fail(&mut self, what: impl Into<String>) {
        self.disagreements.push(what.into());
    }

    fn error(&mut self, route: &str, e: &OracleError) {
        if matches!(
            e,
            OracleError::ResourceLimit { .. }
                | OracleError::DimensionTooLarge { .. }
                | OracleError::MembershipSolveBound { .. }
                | OracleError::Overflow
        ) {
            self.resource_limited = true;
        }
        self.errors.push(format!("{route}: {e}"));
    }
}

fn relation_primes(shape: &CanonicalShape) -> (usize, Option<(crate::divisors::DivisorData, Vec<usize>)>) {
    match shape {
        CanonicalShape::Free => (0, None),
        CanonicalShape::One(c) => {
            let d = divisor_data_one_relator(c);
            (d.primes.len(), Some((d, c.relabel.clone())))
        }
        CanonicalShape::Two(c) => {
            let d = divisor_data_two_relator(c);
            (d.primes.len(), Some((d, c.relabel.clone())))
        }
        CanonicalShape::Product { first, second } => (
            divisor_data_one_relator(first).primes.len() + divisor_data_one_relator(second).primes.len(),
            None,
        ),
    }
}

fn check_class_group(n: &Normalized, e: &Embedding, opts: &CheckOptions, out: &mut InstanceCheck) {
    let p = &n.presentation;
    let report = match class_group_normalized(n) {
        Ok(r) => Some(r),
        Err(ClassGroupError::NoCanonicalShape) => {
            out.errors
                .push("class group: no canonical shape, facet valuations only".into());
            None
        }
        Err(e) => {
            out.fail(format!("class group: {e}"));
            None
        }
    };
    if let Some(r) = &report {
        if !r.agree {
            out.fail(format!("formula {} but divisor matrix {}", r.formula, r.matrix_route));
        }
        out.formula = Some(r.formula.clone());
        out.matrix_route = Some(r.matrix_route.clone());
        out.parameters = Some(r.parameters.clone());
        if let CanonicalShape::Two(c) = &r.shape {
            let listed = minimal_primes_two_relator(c).len();
            if two_relator_prime_count(c) != listed {
                out.fail(format!(
                    "prime count {} but {listed} primes listed",
                    two_relator_prime_count(c)
                ));
            }
            if r.formula.free_rank + (c.n - 2) != listed {
                out.fail(format!(
                    "free rank {} with {listed} primes on {} generators",
                    r.formula.free_rank, c.n
                ));
            }
        }
    }
    if !opts.oracles.class {
        return;
    }
    let v = match facet_valuation_class_group(e) {
        Ok(v) => v,
        Err(err) => return out.error("facet valuations", &err),
    };
    out.facet_count = Some(v.normals.len());
    if let Some(r) = &report {
        if v.class_group != r.formula {
            out.fail(format!("formula {} but facet valuations {}", r.formula, v.class_group));
        }
        let (primes, data) = relation_primes(&r.shape);
        let expected = primes + p.free_generators().len();
        out.prime_count = Some(expected);
        if expected != v.normals.len() {
            out.fail(format!("{expected} minimal primes but {} facets", v.normals.len()));
        }
        if let Some((d, relabel)) = data {
            match reconcile(&d, &relabel, &v) {
                Ok(_) => out.reconciled = Some(true),
                Err(err) => {
                    out.reconciled = Some(false);
                    out.fail(err.to_string());
                }
            }
        }
    }
    out.facet_route = Some(v.class_group);
}

fn check_injectivity(n: &Normalized, e: &Embedding, degree: usize, out: &mut InstanceCheck) {
    let classes = match congruence_classes(&n.presentation, degree) {
        Ok(c) => c,
        Err(err) => return out.error("congruence classes", &err),
    };
    let mut images: Vec<Vec<i128>> = classes.classes.iter().map(|c| e.image_of(&c[0])).collect();
    images.sort();
    let injective = images.windows(2).all(|w| w[0] != w[1]);
    if !injective {
        out.fail(format!(
            "two congruence classes of degree at most {degree} share an image"
        ));
    }
    out.injective = Some(injective);
}

/// Searches up to twice the degree bound, backing off when the word count
/// exceeds the limit.
fn deeper_witness(p: &Presentation, degree_bound: usize) -> Option<CancellativityWitness> {
    (degree_bound.max(1)..=2 * degree_bound.max(1))
        .rev()
        .find_map(|d| cancellativity_witness(p, d).ok())
        .flatten()
}

/// Runs the criterion and the requested oracles on `p` and records every
/// disagreement between them.
///
/// ```
/// use monpres::presentation::parse_presentation;
/// use monpres::sweep::{check_presentation, CheckOptions};
///
/// let p = parse_presentation("u1 u2 u3 | u1 u2 = u3^2").unwrap();
/// let c = check_presentation(&p, &CheckOptions::default());
/// assert!(c.agree());
/// assert_eq!(c.facet_route.unwrap().to_string(), "Z/2");
/// ```
pub fn check_presentation(p: &Presentation, opts: &CheckOptions) -> InstanceCheck {
    let n = match normalize(p) {
        Ok(n) => n,
        Err(e) => {
            let mut out = InstanceCheck::new(NormalityVerdict::not_applicable(e.to_string()));
            out.errors.push(e.to_string());
            return out;
        }
    };
    let verdict = crate::criteria::verdict_for(&n);
    let normal = verdict.is_normal();
    let mut out = InstanceCheck::new(verdict);
    let q = &n.presentation;
    let applicable = out.verdict.status != NormalityStatus::NotApplicable;

    // The search runs on the input as given: normalization may already have
    // cancelled the evidence.
    let mut witness = None;
    if opts.oracles.cancel && applicable {
        match cancellativity_witness(p, opts.degree_bound) {
            Ok(w) => witness = w,
            Err(e) => out.error("cancellativity", &e),
        }
    }

    if opts.oracles.normal && applicable {
        match oracle_normality(q) {
            Ok(o) => {
                // The cone only sees the cancellative quotient.
                if o.normal && !normal && witness.is_none() {
                    witness = deeper_witness(p, opts.degree_bound);
                }
                let oracle_normal = o.normal && witness.is_none();
                if oracle_normal != normal && !(out.verdict.conditional && witness.is_some()) {
                    out.fail(format!(
                        "criterion says {} but the oracles say {}",
                        out.verdict.status,
                        if oracle_normal { "normal" } else { "not normal" }
                    ));
                }
                out.oracle_normal = Some(oracle_normal);
                out.oracle_rejection = o.rejection;
            }
            Err(e) => out.error("Hilbert basis", &e),
        }
    }

    if let Some(w) = witness {
        let text = w.render(p.generators());
        if out.verdict.conditional {
            out.verdict.status = NormalityStatus::NotCancellative;
            out.verdict.failed_condition = None;
            out.verdict.witness = Some(text.clone());
        } else if normal {
            out.fail(format!("normal verdict but not cancellative: {text}"));
        }
        out.witness = Some(text);
    }

    if !out.verdict.is_normal() {
        return out;
    }
    let e = match embed_via_fractions(q) {
        Ok(e) => e,
        Err(err) => {
            out.fail(format!("normal verdict but {err}"));
            return out;
        }
    };
    check_class_group(&n, &e, opts, &mut out);

    if let Some(degree) = opts.injectivity_degree {
        let e = match class_group_normalized(&n).map(|r| r.shape) {
            Ok(CanonicalShape::One(c)) => {
                let single = embed_one_relator(&c);
                if !single.satisfies(q) {
                    out.fail("the one-relation embedding violates the relation");
                }
                if !single.is_equivalent_to(&e) {
                    out.fail("the one-relation embedding and the group of fractions have different kernels");
                }
                single
            }
            _ => e,
        };
        check_injectivity(&n, &e, degree, &mut out);
    }
    out
}

/// An instance and its check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub instance: Instance,
    pub presentation: String,
    pub check: InstanceCheck,
}

/// Checks every instance, in parallel, returning rows in family order.
pub fn run_sweep(instances: Vec<Instance>, opts: &CheckOptions) -> Vec<SweepRow> {
    instances
        .into_par_iter()
        .enumerate()
        .map(|(index, instance)| {
            let p = instance.presentation();
            SweepRow {
                index,
                presentation: p.to_inline(),
                check: check_presentation(&p, opts),
                instance,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_family_counts() {
        // n = 3, exponents 1..2: k = 1 gives 2 * 3 pairs, k = 2 is covered by the swap
        let f: Vec<_> = one_relator_family(3, 2)
            .into_iter()
            .filter(|i| matches!(i, Instance::One { lhs, rhs } if lhs.len() + rhs.len() == 3))
            .collect();
        assert_eq!(f.len(), 6);
    }

    #[test]
    fn two_family_is_canonical_and_distinct() {
        let f = two_relator_family(5, 2);
        assert!(!f.is_empty());
        let texts: std::collections::BTreeSet<String> = f.iter().map(|i| i.presentation().to_inline()).collect();
        assert_eq!(texts.len(), f.len());
        assert!(
            texts.contains("u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5")
                || f.iter().any(|i| i.parameters().contains("k=[1, 2, 3, 3, 3]"))
        );
    }

    #[test]
    fn small_sweeps_agree() {
        let opts = CheckOptions {
            injectivity_degree: Some(4),
            degree_bound: 4,
            ..CheckOptions::default()
        };
        for row in run_sweep(one_relator_family(3, 2), &opts) {
            assert!(row.check.agree(), "{}: {:?}", row.presentation, row.check.disagreements);
        }
        for row in run_sweep(two_relator_family(4, 2), &opts) {
            assert!(row.check.agree(), "{}: {:?}", row.presentation, row.check.disagreements);
            assert!(row.check.verdict.is_normal(), "{}", row.presentation);
        }
    }
}
