//! Combinatorial normality tests and the canonical block shapes used by the
//! divisor and class group computations.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::{normalize, Normalized, Presentation, PresentationError, Relation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormalityStatus {
    NormalPositive,
    NotNormal,
    NotCancellative,
    NotApplicable,
}

impl fmt::Display for NormalityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NormalityStatus::NormalPositive => "NormalPositive",
            NormalityStatus::NotNormal => "NotNormal",
            NormalityStatus::NotCancellative => "NotCancellative",
            NormalityStatus::NotApplicable => "NotApplicable",
        };
        f.write_str(s)
    }
}

/// The condition of the two-relation criterion that failed. A single relation
/// failing its squarefree test is reported as `3b`, the same test applied to
/// the only relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FailedCondition {
    #[serde(rename = "3a")]
    DisjointSides,
    #[serde(rename = "3b")]
    FirstSquarefree,
    #[serde(rename = "3c")]
    SecondSquarefree,
    #[serde(rename = "3d")]
    Overlap,
}

impl FailedCondition {
    pub fn tag(&self) -> &'static str {
        match self {
            FailedCondition::DisjointSides => "3a",
            FailedCondition::FirstSquarefree => "3b",
            FailedCondition::SecondSquarefree => "3c",
            FailedCondition::Overlap => "3d",
        }
    }
}

impl fmt::Display for FailedCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityVerdict {
    pub status: NormalityStatus,
    pub failed_condition: Option<FailedCondition>,
    pub witness: Option<String>,
    /// The verdict rests on a normalization step that assumes cancellativity.
    pub conditional: bool,
}

impl NormalityVerdict {
    pub fn normal() -> Self {
        NormalityVerdict {
            status: NormalityStatus::NormalPositive,
            failed_condition: None,
            witness: None,
            conditional: false,
        }
    }

    pub fn not_normal(condition: FailedCondition, witness: String) -> Self {
        NormalityVerdict {
            status: NormalityStatus::NotNormal,
            failed_condition: Some(condition),
            witness: Some(witness),
            conditional: false,
        }
    }

    pub fn not_applicable(reason: String) -> Self {
        NormalityVerdict {
            status: NormalityStatus::NotApplicable,
            failed_condition: None,
            witness: Some(reason),
            conditional: false,
        }
    }

    pub fn is_normal(&self) -> bool {
        self.status == NormalityStatus::NormalPositive
    }
}

fn indexed_names(count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("u{i}")).collect()
}

fn render_set(set: &BTreeSet<usize>, names: &[String]) -> String {
    let parts: Vec<&str> = set.iter().map(|&g| names[g].as_str()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn one_relator_verdict(r: &Relation, names: &[String]) -> NormalityVerdict {
    if r.lhs.is_squarefree() || r.rhs.is_squarefree() {
        NormalityVerdict::normal()
    } else {
        NormalityVerdict::not_normal(
            FailedCondition::FirstSquarefree,
            format!(
                "neither side of {} is squarefree: Hsupp {} and {}",
                r.render(names),
                render_set(&r.lhs.hsupp(), names),
                render_set(&r.rhs.hsupp(), names)
            ),
        )
    }
}

/// Single-relation criterion: normal and positive iff one side is squarefree.
/// Generators are rendered as `u1, u2, …` in the witness.
///
/// ```
/// use monpres::criteria::{is_normal_one_relator, NormalityStatus};
/// use monpres::presentation::{Relation, Word};
///
/// let quadric = Relation::new(Word::from_dense(&[1, 1, 0]), Word::from_dense(&[0, 0, 2]));
/// assert_eq!(is_normal_one_relator(&quadric).status, NormalityStatus::NormalPositive);
///
/// let squares = Relation::new(Word::from_dense(&[2, 0]), Word::from_dense(&[0, 2]));
/// assert_eq!(is_normal_one_relator(&squares).status, NormalityStatus::NotNormal);
/// ```
pub fn is_normal_one_relator(r: &Relation) -> NormalityVerdict {
    let count = r.support().last().map_or(0, |&g| g + 1);
    one_relator_verdict(r, &indexed_names(count))
}

/// The four words `w1 = w2`, `w3 = w4` of a two-relation presentation under
/// one choice of relation order and side orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labeling {
    /// Index of the relation read as `w1 = w2`.
    pub first: usize,
    pub flip_first: bool,
    pub flip_second: bool,
}

impl Labeling {
    /// All eight labelings in a fixed order.
    pub fn all() -> impl Iterator<Item = Labeling> {
        (0..8).map(|i| Labeling {
            first: i >> 2,
            flip_first: i & 2 != 0,
            flip_second: i & 1 != 0,
        })
    }

    pub fn words<'a>(&self, relations: &'a [Relation]) -> [&'a Word; 4] {
        let r1 = &relations[self.first];
        let r2 = &relations[1 - self.first];
        let (w1, w2) = if self.flip_first {
            (&r1.rhs, &r1.lhs)
        } else {
            (&r1.lhs, &r1.rhs)
        };
        let (w3, w4) = if self.flip_second {
            (&r2.rhs, &r2.lhs)
        } else {
            (&r2.lhs, &r2.rhs)
        };
        [w1, w2, w3, w4]
    }
}

fn meets(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
    !a.is_disjoint(b)
}

/// Overlap condition for one labeling, with the overlapping pair read as
/// `(w1, w3)` and the optional second overlap as `(w2, w3)`.
fn overlap_condition_holds(words: [&Word; 4]) -> bool {
    let s: Vec<BTreeSet<usize>> = words.iter().map(|w| w.support()).collect();
    let cross = [(0, 2), (0, 3), (1, 2), (1, 3)];
    if cross.iter().all(|&(i, j)| !meets(&s[i], &s[j])) {
        return true;
    }
    if !meets(&s[0], &s[2]) {
        return false;
    }
    let only_first_third = [(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]
        .iter()
        .all(|&(i, j)| !meets(&s[i], &s[j]));
    if only_first_third && (words[1].is_squarefree() || words[3].is_squarefree()) {
        return true;
    }
    meets(&s[1], &s[2]) && (0..3).all(|i| !meets(&s[3], &s[i])) && words[3].is_squarefree()
}

fn two_relator_verdict(p: &Presentation) -> NormalityVerdict {
    let names = p.generators();
    let rels = p.relations();
    if rels.len() != 2 {
        return NormalityVerdict::not_applicable(format!("expected two relations, found {}", rels.len()));
    }
    for r in rels {
        if meets(&r.lhs.support(), &r.rhs.support()) {
            return NormalityVerdict::not_normal(
                FailedCondition::DisjointSides,
                format!("the sides of {} share a generator", r.render(names)),
            );
        }
    }
    for (r, condition) in rels
        .iter()
        .zip([FailedCondition::FirstSquarefree, FailedCondition::SecondSquarefree])
    {
        if !r.lhs.is_squarefree() && !r.rhs.is_squarefree() {
            return NormalityVerdict::not_normal(
                condition,
                format!(
                    "neither side of {} is squarefree: Hsupp {} and {}",
                    r.render(names),
                    render_set(&r.lhs.hsupp(), names),
                    render_set(&r.rhs.hsupp(), names)
                ),
            );
        }
    }
    if Labeling::all().any(|l| overlap_condition_holds(l.words(rels))) {
        return NormalityVerdict::normal();
    }
    let r0 = &rels[0];
    let r1 = &rels[1];
    let shared: BTreeSet<usize> = r0.support().intersection(&r1.support()).copied().collect();
    NormalityVerdict::not_normal(
        FailedCondition::Overlap,
        format!(
            "{} and {} overlap in {} in a way no labeling of the sides allows",
            r0.render(names),
            r1.render(names),
            render_set(&shared, names)
        ),
    )
}

/// Two-relation criterion, tried under all eight labelings of the sides.
/// Expects a normalized presentation; any other relation count is
/// `NotApplicable`.
pub fn check_two_relator_conditions(p: &Presentation) -> NormalityVerdict {
    two_relator_verdict(p)
}

/// Verdict for an already normalized presentation.
pub fn verdict_for(n: &Normalized) -> NormalityVerdict {
    let p = &n.presentation;
    let mut v = match p.relations().len() {
        0 => NormalityVerdict::normal(),
        1 => one_relator_verdict(&p.relations()[0], p.generators()),
        2 => two_relator_verdict(p),
        count => NormalityVerdict::not_applicable(format!("{count} relations are not supported")),
    };
    v.conditional = n.trail.conditional;
    v
}

/// Normalizes `p` and applies the criterion matching the remaining number of
/// relations. Presentations that still need three or more relations are
/// `NotApplicable`.
///
/// ```
/// use monpres::criteria::{is_normal, NormalityStatus};
/// use monpres::presentation::parse_presentation;
///
/// let p = parse_presentation("u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5").unwrap();
/// assert_eq!(is_normal(&p).status, NormalityStatus::NormalPositive);
///
/// let q = parse_presentation("u1 u2 u3 u4 | u1 u2 = u3^2 ; u1 u3 = u4^2").unwrap();
/// let v = is_normal(&q);
/// assert_eq!(v.status, NormalityStatus::NotNormal);
/// assert_eq!(v.failed_condition.unwrap().tag(), "3d");
/// ```
pub fn is_normal(p: &Presentation) -> NormalityVerdict {
    match normalize(p) {
        Ok(n) => verdict_for(&n),
        Err(e) => NormalityVerdict::not_applicable(e.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Canonical shapes

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonicalError {
    #[error("expected {expected} relation(s), found {found}")]
    RelationCount { expected: usize, found: usize },
    #[error("no labeling of the relations fits the canonical shape")]
    CanonicalizationFailed,
}

/// `u_1 ⋯ u_k = u_{k+1}^{a_{k+1}} ⋯ u_n^{a_n}` followed by `free_tail` unused
/// generators. Canonical indices are 0-based here: position `i` of `relabel`
/// is the generator index (in the presentation it came from) playing the
/// role of `u_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalOneRelator {
    pub n: usize,
    pub k: usize,
    /// `a_{k+1}, …, a_n`.
    pub a: Vec<u64>,
    pub free_tail: usize,
    pub relabel: Vec<usize>,
    /// The squarefree block was the right-hand side of the input relation.
    pub swapped: bool,
}

impl CanonicalOneRelator {
    /// A canonical form on generators `u1, …, u_{n+free_tail}` in order.
    pub fn standard(k: usize, a: Vec<u64>, free_tail: usize) -> Self {
        let n = k + a.len();
        assert!(k >= 1 && !a.is_empty() && a.iter().all(|&x| x >= 1));
        CanonicalOneRelator {
            n,
            k,
            a,
            free_tail,
            relabel: (0..n + free_tail).collect(),
            swapped: false,
        }
    }

    /// Exponent of canonical generator `i` (0-based) on its side.
    pub fn exponent(&self, i: usize) -> u64 {
        if i < self.k {
            1
        } else {
            self.a[i - self.k]
        }
    }

    /// The relation in canonical coordinates.
    pub fn canonical_relation(&self) -> Relation {
        Relation::new(
            Word::from_pairs((0..self.k).map(|i| (i, 1))),
            Word::from_pairs((self.k..self.n).map(|i| (i, self.exponent(i)))),
        )
    }

    /// The relation in the generator indices of the source presentation.
    pub fn expand(&self) -> Relation {
        let lhs = Word::from_pairs((0..self.k).map(|i| (self.relabel[i], 1)));
        let rhs = Word::from_pairs((self.k..self.n).map(|i| (self.relabel[i], self.exponent(i))));
        if self.swapped {
            Relation::new(rhs, lhs)
        } else {
            Relation::new(lhs, rhs)
        }
    }

    /// The canonical presentation on `u1, …`.
    pub fn presentation(&self) -> Presentation {
        Presentation::with_indexed_names(self.n + self.free_tail, vec![self.canonical_relation()])
            .expect("canonical relation is well formed")
    }
}

/// Brings a one-relation presentation with a squarefree side into canonical
/// form. When both sides are squarefree the smaller `(k, a)` wins.
///
/// ```
/// use monpres::criteria::canonicalize_one_relator;
/// use monpres::presentation::parse_presentation;
///
/// let p = parse_presentation("x y z | z^2 = x y").unwrap();
/// let c = canonicalize_one_relator(&p).unwrap();
/// assert_eq!((c.k, c.n, c.a.clone()), (2, 3, vec![2]));
/// assert_eq!(c.expand(), p.relations()[0]);
/// ```
pub fn canonicalize_one_relator(p: &Presentation) -> Result<CanonicalOneRelator, CanonicalError> {
    let rels = p.relations();
    if rels.len() != 1 {
        return Err(CanonicalError::RelationCount {
            expected: 1,
            found: rels.len(),
        });
    }
    let r = &rels[0];
    let mut best: Option<CanonicalOneRelator> = None;
    for swapped in [false, true] {
        let (square_free, other) = if swapped { (&r.rhs, &r.lhs) } else { (&r.lhs, &r.rhs) };
        if !square_free.is_squarefree() {
            continue;
        }
        let mut tail: Vec<(u64, usize)> = other.iter().map(|(g, e)| (e, g)).collect();
        tail.sort();
        let mut relabel: Vec<usize> = square_free.support().into_iter().collect();
        let k = relabel.len();
        relabel.extend(tail.iter().map(|&(_, g)| g));
        let n = relabel.len();
        relabel.extend(p.free_generators());
        let candidate = CanonicalOneRelator {
            n,
            k,
            a: tail.iter().map(|&(e, _)| e).collect(),
            free_tail: p.generator_count() - n,
            relabel,
            swapped,
        };
        let better = match &best {
            None => true,
            Some(b) => (candidate.k, &candidate.a) < (b.k, &b.a),
        };
        if better {
            best = Some(candidate);
        }
    }
    best.ok_or(CanonicalError::CanonicalizationFailed)
}

/// The two-relation block shape
///
/// ```text
/// u_1 ⋯ u_{k1} u_{k2+1} ⋯ u_{k3} = u_{k1+1}^{a} ⋯ u_{k2}^{a} u_{k3+1}^{a} ⋯ u_{k4}^{a}
/// u_1^{a} ⋯ u_{k1}^{a} u_{k1+1}^{b} ⋯ u_{k2}^{b} u_{k4+1}^{a} ⋯ u_{k5}^{a} = u_{k5+1} ⋯ u_n
/// ```
///
/// with blocks `B1 = [1, k1]`, `B2 = (k1, k2]`, …, `B6 = (k5, n]`. Canonical
/// indices in `relabel` are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalTwoRelator {
    /// `k1, …, k5`.
    pub k: [usize; 5],
    pub n: usize,
    /// `a_1, …, a_{k5}`; entries in `B3` do not occur in the relations and
    /// are stored as 1.
    pub a: Vec<u64>,
    /// `b_{k1+1}, …, b_{k2}`.
    pub b: Vec<u64>,
    pub free_tail: usize,
    pub relabel: Vec<usize>,
    pub labeling: Labeling,
}

/// Which of the six blocks a canonical generator belongs to (1-based).
pub fn block_of(k: &[usize; 5], i: usize) -> usize {
    k.iter().take_while(|&&kb| i >= kb).count() + 1
}

impl CanonicalTwoRelator {
    /// A canonical form on `u1, …` in order. `a` has length `k5` (entries in
    /// `B3` are ignored) and `b` has length `k2 - k1`.
    pub fn standard(k: [usize; 5], n: usize, a: Vec<u64>, b: Vec<u64>, free_tail: usize) -> Self {
        assert!(k[0] > 0 && k.windows(2).all(|w| w[0] <= w[1]) && k[4] < n);
        assert_eq!(a.len(), k[4]);
        assert_eq!(b.len(), k[1] - k[0]);
        let mut a = a;
        for i in k[1]..k[2] {
            a[i] = 1;
        }
        CanonicalTwoRelator {
            k,
            n,
            a,
            b,
            free_tail,
            relabel: (0..n + free_tail).collect(),
            labeling: Labeling {
                first: 0,
                flip_first: false,
                flip_second: false,
            },
        }
    }

    /// Block ranges `B1, …, B6` as 0-based half-open index ranges.
    pub fn blocks(&self) -> [std::ops::Range<usize>; 6] {
        let k = &self.k;
        [0..k[0], k[0]..k[1], k[1]..k[2], k[2]..k[3], k[3]..k[4], k[4]..self.n]
    }

    /// `b_v` for a 0-based index `v` in `B2`.
    pub fn b_at(&self, v: usize) -> u64 {
        self.b[v - self.k[0]]
    }

    /// The two relations in canonical coordinates.
    pub fn canonical_relations(&self) -> [Relation; 2] {
        let [b1, b2, b3, b4, b5, b6] = self.blocks();
        let rel1 = Relation::new(
            Word::from_pairs(b1.clone().chain(b3).map(|i| (i, 1))),
            Word::from_pairs(b2.clone().chain(b4).map(|i| (i, self.a[i]))),
        );
        let rel2 = Relation::new(
            Word::from_pairs(
                b1.map(|i| (i, self.a[i]))
                    .chain(b2.map(|i| (i, self.b_at(i))))
                    .chain(b5.map(|i| (i, self.a[i]))),
            ),
            Word::from_pairs(b6.map(|i| (i, 1))),
        );
        [rel1, rel2]
    }

    /// The relations in the generator indices and orientation of the source
    /// presentation.
    pub fn expand(&self) -> [Relation; 2] {
        let [r1, r2] = self.canonical_relations();
        let map = |w: &Word| Word::from_pairs(w.iter().map(|(g, e)| (self.relabel[g], e)));
        let orient = |r: &Relation, flip: bool| {
            let r = Relation::new(map(&r.lhs), map(&r.rhs));
            if flip {
                r.swapped()
            } else {
                r
            }
        };
        let r1 = orient(&r1, self.labeling.flip_first);
        let r2 = orient(&r2, self.labeling.flip_second);
        if self.labeling.first == 0 {
            [r1, r2]
        } else {
            [r2, r1]
        }
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::with_indexed_names(self.n + self.free_tail, self.canonical_relations().to_vec())
            .expect("canonical relations are well formed")
    }

    fn sort_key(&self) -> (Vec<usize>, Vec<u64>, Vec<u64>) {
        let mut shape = self.k.to_vec();
        shape.push(self.n);
        (shape, self.a.clone(), self.b.clone())
    }
}

fn fit_labeling(p: &Presentation, labeling: Labeling) -> Option<CanonicalTwoRelator> {
    let [l1, r1, l2, r2] = labeling.words(p.relations());
    if !l1.is_squarefree() || !r2.is_squarefree() {
        return None;
    }
    let (sl1, sr1, sl2, sr2) = (l1.support(), r1.support(), l2.support(), r2.support());
    if meets(&sr2, &sl1) || meets(&sr2, &sr1) || meets(&sl1, &sr1) || meets(&sl2, &sr2) {
        return None;
    }
    let by_exponents = |set: Vec<usize>, key: &dyn Fn(usize) -> (u64, u64)| {
        let mut v: Vec<((u64, u64), usize)> = set.into_iter().map(|g| (key(g), g)).collect();
        v.sort();
        v.into_iter().map(|(_, g)| g).collect::<Vec<_>>()
    };
    let block1 = by_exponents(sl1.intersection(&sl2).copied().collect(), &|g| (l2.exponent(g), 0));
    if block1.is_empty() || sr2.len() < 2 {
        return None;
    }
    let block2 = by_exponents(sr1.intersection(&sl2).copied().collect(), &|g| {
        (r1.exponent(g), l2.exponent(g))
    });
    let block3: Vec<usize> = sl1.difference(&sl2).copied().collect();
    let block4 = by_exponents(sr1.difference(&sl2).copied().collect(), &|g| (r1.exponent(g), 0));
    let block5 = by_exponents(
        sl2.iter()
            .filter(|g| !sl1.contains(g) && !sr1.contains(g))
            .copied()
            .collect(),
        &|g| (l2.exponent(g), 0),
    );
    let block6: Vec<usize> = sr2.into_iter().collect();

    let mut k = [0; 5];
    let mut acc = 0;
    for (slot, len) in k
        .iter_mut()
        .zip([block1.len(), block2.len(), block3.len(), block4.len(), block5.len()])
    {
        acc += len;
        *slot = acc;
    }
    let mut a = Vec::with_capacity(k[4]);
    a.extend(block1.iter().map(|&g| l2.exponent(g)));
    a.extend(block2.iter().map(|&g| r1.exponent(g)));
    a.extend(block3.iter().map(|_| 1));
    a.extend(block4.iter().map(|&g| r1.exponent(g)));
    a.extend(block5.iter().map(|&g| l2.exponent(g)));
    let b = block2.iter().map(|&g| l2.exponent(g)).collect();

    let mut relabel: Vec<usize> = [block1, block2, block3, block4, block5, block6].concat();
    let n = relabel.len();
    relabel.extend(p.free_generators());
    Some(CanonicalTwoRelator {
        k,
        n,
        a,
        b,
        free_tail: p.generator_count() - n,
        relabel,
        labeling,
    })
}

/// Fits a two-relation presentation to the block shape, choosing the
/// lexicographically smallest `(k1, …, k5, n, a, b)` over all labelings.
///
/// ```
/// use monpres::criteria::canonicalize_two_relator;
/// use monpres::presentation::parse_presentation;
///
/// let p = parse_presentation("u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5").unwrap();
/// let c = canonicalize_two_relator(&p).unwrap();
/// assert_eq!(c.k, [1, 2, 3, 3, 3]);
/// assert_eq!(c.relabel, vec![0, 2, 1, 3, 4]);
/// assert_eq!(c.expand().to_vec(), p.relations());
/// ```
pub fn canonicalize_two_relator(p: &Presentation) -> Result<CanonicalTwoRelator, CanonicalError> {
    if p.relations().len() != 2 {
        return Err(CanonicalError::RelationCount {
            expected: 2,
            found: p.relations().len(),
        });
    }
    Labeling::all()
        .filter_map(|l| fit_labeling(p, l))
        .min_by(|x, y| x.sort_key().cmp(&y.sort_key()))
        .ok_or(CanonicalError::CanonicalizationFailed)
}

/// True when the two relations share no generator, so the monoid is a
/// product of two one-relation monoids.
pub fn relations_disjoint(p: &Presentation) -> bool {
    let rels = p.relations();
    rels.len() == 2 && !meets(&rels[0].support(), &rels[1].support())
}

/// Normalizes `p` and returns the normalized form together with its verdict.
pub fn normalized_verdict(p: &Presentation) -> Result<(Normalized, NormalityVerdict), PresentationError> {
    let n = normalize(p)?;
    let v = verdict_for(&n);
    Ok((n, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn verdict(text: &str) -> NormalityVerdict {
        is_normal(&parse_presentation(text).unwrap())
    }

    #[test]
    fn one_relator_examples() {
        assert!(verdict("u1 u2 u3 | u1 u2 = u3^2").is_normal());
        let v = verdict("u1 u2 | u1^2 = u2^2");
        assert_eq!(v.status, NormalityStatus::NotNormal);
        assert_eq!(v.failed_condition, Some(FailedCondition::FirstSquarefree));
        assert!(verdict("u1 u2 | u1 = u2^3").is_normal());
    }

    #[test]
    fn golden_examples() {
        assert!(verdict("u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5").is_normal());
        let v = verdict("u1 u2 u3 u4 | u1 u2 = u3^2 ; u1 u3 = u4^2");
        assert_eq!(v.status, NormalityStatus::NotNormal);
        assert_eq!(v.failed_condition, Some(FailedCondition::Overlap));
    }

    #[test]
    fn disjoint_and_free() {
        // a = b^2 and c = d^2 eliminate a and c, leaving a free monoid
        assert!(verdict("a b c d | a = b^2 ; c = d^2").is_normal());
        assert!(verdict("a b c d e f | a b = c^2 ; d e = f^3").is_normal());
        assert!(verdict("a b c d").is_normal());
    }

    #[test]
    fn non_cancellative_input_is_conditional() {
        let v = verdict("a b | a^2 = a b");
        assert!(v.is_normal());
        assert!(v.conditional);
    }

    #[test]
    fn squarefree_failures() {
        let v = verdict("a b c d e f | a^2 b = c^2 ; d e = f");
        // the second relation eliminates f, leaving one relation
        assert_eq!(v.failed_condition, Some(FailedCondition::FirstSquarefree));
        let v = verdict("a b c d e f | a b = c^2 ; d^2 e = f^2");
        assert_eq!(v.failed_condition, Some(FailedCondition::SecondSquarefree));
    }

    #[test]
    fn one_relator_canonical_round_trip() {
        let p = parse_presentation("u1 u2 u3 | u1 u2 = u3^2").unwrap();
        let c = canonicalize_one_relator(&p).unwrap();
        assert_eq!((c.k, c.n, c.a.clone(), c.free_tail), (2, 3, vec![2], 0));
        assert_eq!(c.expand(), p.relations()[0]);

        let p = parse_presentation("a b c d | a^2 b^3 = c d").unwrap();
        let c = canonicalize_one_relator(&p).unwrap();
        assert!(c.swapped);
        assert_eq!(c.a, vec![2, 3]);
        assert_eq!(c.free_tail, 0);
        assert_eq!(c.expand(), p.relations()[0]);
    }

    #[test]
    fn golden_example_canonical_form() {
        let p = parse_presentation("u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5").unwrap();
        let c = canonicalize_two_relator(&p).unwrap();
        assert_eq!(c.k, [1, 2, 3, 3, 3]);
        assert_eq!(c.n, 5);
        assert_eq!(c.a[0], 1);
        assert_eq!(c.a[1], 2);
        assert_eq!(c.b, vec![1]);
        let names: Vec<&str> = c.relabel.iter().map(|&g| p.generators()[g].as_str()).collect();
        assert_eq!(names, ["u1", "u3", "u2", "u4", "u5"]);
        assert_eq!(c.expand().to_vec(), p.relations());
    }

    #[test]
    fn uncovered_overlap_has_no_canonical_form() {
        let p = parse_presentation("u1 u2 u3 u4 u5 u6 u7 | u1^2 u2 = u3 u4 ; u1^2 u5 = u6 u7").unwrap();
        assert!(is_normal(&p).is_normal());
        assert_eq!(
            canonicalize_two_relator(&p),
            Err(CanonicalError::CanonicalizationFailed)
        );
    }

    #[test]
    fn standard_two_relator_expands_to_itself() {
        let c = CanonicalTwoRelator::standard([1, 2, 3, 4, 5], 7, vec![2, 1, 1, 2, 2], vec![2], 1);
        let p = c.presentation();
        assert!(is_normal(&p).is_normal());
        assert_eq!(c.expand().to_vec(), p.relations());
        assert_eq!(block_of(&c.k, 0), 1);
        assert_eq!(block_of(&c.k, 4), 5);
        assert_eq!(block_of(&c.k, 6), 6);
    }
}
