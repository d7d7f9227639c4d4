//! Bounded enumeration of the congruence generated by the relations.
//!
//! Words of total degree at most `search_bound` are ranked densely and joined
//! in a union-find whenever one relation rewrite connects them. Two words of
//! degree at most `degree_bound` are reported equal when such a rewrite
//! chain exists without leaving the search bound.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::presentation::{Presentation, Word};

/// Default cap on the number of words explored.
pub const DEFAULT_WORD_LIMIT: usize = 20_000_000;

/// Dense ranking of exponent vectors with `m` entries and total at most `bound`
/// via the combinatorial number system.
struct Ranker {
    m: usize,
    bound: usize,
    /// `binom[s][i] = C(s, i)`.
    binom: Vec<Vec<usize>>,
}

impl Ranker {
    fn new(m: usize, bound: usize) -> Self {
        let top = bound + m + 1;
        let mut binom = vec![vec![0usize; m + 2]; top + 1];
        for s in 0..=top {
            binom[s][0] = 1;
            for i in 1..=(m + 1).min(s) {
                binom[s][i] = binom[s - 1][i - 1].saturating_add(if i < s { binom[s - 1][i] } else { 0 });
            }
        }
        Ranker { m, bound, binom }
    }

    fn count(&self) -> usize {
        self.binom[self.bound + self.m][self.m]
    }

    fn rank(&self, e: &[u64]) -> usize {
        let mut s = 0usize;
        let mut r = 0usize;
        for (i, &x) in e.iter().enumerate() {
            s += x as usize + usize::from(i > 0);
            r += self.binom[s][i + 1];
        }
        r
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }
}

/// Calls `f` on every exponent vector of length `m` with total at most
/// `bound`, in order of total degree and then descending lexicographic order
/// (so `a` precedes `b`).
fn for_each_word(m: usize, bound: usize, mut f: impl FnMut(&[u64])) {
    let mut e = vec![0u64; m];
    for degree in 0..=bound {
        fill(&mut e, 0, degree as u64, &mut f);
    }
}

fn fill(e: &mut [u64], i: usize, remaining: u64, f: &mut impl FnMut(&[u64])) {
    if i + 1 == e.len() {
        e[i] = remaining;
        f(e);
        e[i] = 0;
        return;
    }
    if e.is_empty() {
        if remaining == 0 {
            f(e);
        }
        return;
    }
    for x in (0..=remaining).rev() {
        e[i] = x;
        fill(e, i + 1, remaining - x, f);
    }
    e[i] = 0;
}

/// The union-find over all words up to the search bound.
struct Congruence {
    ranker: Ranker,
    uf: UnionFind,
}

impl Congruence {
    fn build(p: &Presentation, degree_bound: usize, word_limit: usize) -> Result<Self, OracleError> {
        let m = p.generator_count();
        let max_side = p
            .relations()
            .iter()
            .map(|r| r.lhs.degree().max(r.rhs.degree()))
            .max()
            .unwrap_or(0) as usize;
        let bound = degree_bound + max_side;
        let ranker = Ranker::new(m, bound);
        let count = ranker.count();
        if count > word_limit || count >= u32::MAX as usize {
            return Err(OracleError::ResourceLimit {
                what: "words in the congruence search",
                limit: word_limit,
            });
        }
        let rels: Vec<(Vec<u64>, Vec<u64>, u64, u64)> = p
            .relations()
            .iter()
            .map(|r| (r.lhs.to_dense(m), r.rhs.to_dense(m), r.lhs.degree(), r.rhs.degree()))
            .collect();
        let mut uf = UnionFind::new(count);
        let mut image = vec![0u64; m];
        for_each_word(m, bound, |w| {
            let total: u64 = w.iter().sum();
            for (l, r, dl, dr) in &rels {
                if w.iter().zip(l).any(|(x, y)| x < y) || total - dl + dr > bound as u64 {
                    continue;
                }
                for i in 0..m {
                    image[i] = w[i] - l[i] + r[i];
                }
                uf.union(ranker.rank(w), ranker.rank(&image));
            }
        });
        Ok(Congruence { ranker, uf })
    }

    fn class(&mut self, w: &[u64]) -> usize {
        let r = self.ranker.rank(w);
        self.uf.find(r)
    }
}

/// Partition of the words of degree at most `degree_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceClasses {
    pub degree_bound: usize,
    /// Largest degree rewrites were allowed to pass through.
    pub search_bound: usize,
    pub generators: usize,
    /// Each class sorted ascending as exponent vectors; classes sorted by
    /// their least element, which serves as representative.
    pub classes: Vec<Vec<Vec<u64>>>,
}

impl CongruenceClasses {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Index of the class containing `w`, if `w` is within the degree bound.
    pub fn class_of(&self, w: &[u64]) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.binary_search_by(|x| x.as_slice().cmp(w)).is_ok())
    }

    pub fn representative(&self, class: usize) -> &[u64] {
        &self.classes[class][0]
    }

    /// Lookup table from word to class index.
    pub fn index(&self) -> HashMap<Vec<u64>, usize> {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |w| (w.clone(), i)))
            .collect()
    }
}

/// Congruence classes of all words of degree at most `degree_bound`.
///
/// ```
/// use monpres::oracle::congruence::congruence_classes;
/// use monpres::presentation::parse_presentation;
///
/// let p = parse_presentation("a b | a^2 = a b").unwrap();
/// let c = congruence_classes(&p, 2).unwrap();
/// assert_eq!(c.class_of(&[2, 0]), c.class_of(&[1, 1]));
/// assert_ne!(c.class_of(&[1, 0]), c.class_of(&[0, 1]));
/// ```
pub fn congruence_classes(p: &Presentation, degree_bound: usize) -> Result<CongruenceClasses, OracleError> {
    congruence_classes_with_limit(p, degree_bound, DEFAULT_WORD_LIMIT)
}

pub fn congruence_classes_with_limit(
    p: &Presentation,
    degree_bound: usize,
    word_limit: usize,
) -> Result<CongruenceClasses, OracleError> {
    let mut cong = Congruence::build(p, degree_bound, word_limit)?;
    let m = p.generator_count();
    let mut groups: HashMap<usize, Vec<Vec<u64>>> = HashMap::new();
    for_each_word(m, degree_bound, |w| {
        let c = cong.class(w);
        groups.entry(c).or_default().push(w.to_vec());
    });
    let mut classes: Vec<Vec<Vec<u64>>> = groups
        .into_values()
        .map(|mut c| {
            c.sort();
            c
        })
        .collect();
    classes.sort();
    Ok(CongruenceClasses {
        degree_bound,
        search_bound: cong.ranker.bound,
        generators: m,
        classes,
    })
}

/// Words with `g·x ~ g·y` although `x ≁ y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellativityWitness {
    pub generator: usize,
    pub x: Word,
    pub y: Word,
}

impl CancellativityWitness {
    pub fn render(&self, names: &[String]) -> String {
        format!(
            "{g} * {x} = {g} * {y} but {x} != {y}",
            g = names[self.generator],
            x = self.x.render(names),
            y = self.y.render(names)
        )
    }
}

/// Searches generators `g` and words `x`, `y` of degree below `degree_bound`
/// for `g·x ~ g·y` with `x ≁ y`. `None` means no failure was found up to the
/// bound, which does not prove cancellativity.
///
/// ```
/// use monpres::oracle::congruence::cancellativity_witness;
/// use monpres::presentation::{parse_presentation, Word};
///
/// let p = parse_presentation("a b | a^2 = a b").unwrap();
/// let w = cancellativity_witness(&p, 2).unwrap().unwrap();
/// assert_eq!((w.generator, w.x, w.y), (0, Word::generator(0), Word::generator(1)));
/// ```
pub fn cancellativity_witness(
    p: &Presentation,
    degree_bound: usize,
) -> Result<Option<CancellativityWitness>, OracleError> {
    cancellativity_witness_with_limit(p, degree_bound, DEFAULT_WORD_LIMIT)
}

pub fn cancellativity_witness_with_limit(
    p: &Presentation,
    degree_bound: usize,
    word_limit: usize,
) -> Result<Option<CancellativityWitness>, OracleError> {
    if degree_bound == 0 || p.relations().is_empty() {
        return Ok(None);
    }
    let mut cong = Congruence::build(p, degree_bound, word_limit)?;
    let m = p.generator_count();
    let mut words = Vec::new();
    for_each_word(m, degree_bound - 1, |w| words.push(w.to_vec()));
    let own: Vec<usize> = words.iter().map(|w| cong.class(w)).collect();
    for g in 0..m {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for (i, w) in words.iter().enumerate() {
            let mut gw = w.clone();
            gw[g] += 1;
            let c = cong.class(&gw);
            match seen.get(&c) {
                Some(&j) if own[j] != own[i] => {
                    return Ok(Some(CancellativityWitness {
                        generator: g,
                        x: Word::from_dense(&words[j]),
                        y: Word::from_dense(w),
                    }));
                }
                Some(_) => {}
                None => {
                    seen.insert(c, i);
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    #[test]
    fn ranking_is_a_bijection() {
        let r = Ranker::new(3, 4);
        let mut seen = vec![false; r.count()];
        for_each_word(3, 4, |w| {
            let k = r.rank(w);
            assert!(!seen[k]);
            seen[k] = true;
        });
        assert!(seen.iter().all(|&x| x));
        assert_eq!(r.count(), 35);
    }

    #[test]
    fn free_monoid_words_are_singletons() {
        let p = parse_presentation("a b c").unwrap();
        let c = congruence_classes(&p, 3).unwrap();
        assert_eq!(c.class_count(), 20);
        assert!(c.classes.iter().all(|x| x.len() == 1));
    }

    #[test]
    fn quadric_classes_merge() {
        let p = parse_presentation("u1 u2 u3 | u1 u2 = u3^2").unwrap();
        let c = congruence_classes(&p, 4).unwrap();
        assert_eq!(c.class_of(&[1, 1, 0]), c.class_of(&[0, 0, 2]));
        assert_eq!(c.class_of(&[2, 2, 0]), c.class_of(&[0, 0, 4]));
        assert_eq!(c.representative(c.class_of(&[0, 0, 2]).unwrap()), &[0, 0, 2]);
    }

    #[test]
    fn cancellative_examples() {
        let quadric = parse_presentation("u1 u2 u3 | u1 u2 = u3^2").unwrap();
        assert_eq!(cancellativity_witness(&quadric, 6).unwrap(), None);
        let squares = parse_presentation("a b | a^2 = b^2").unwrap();
        assert_eq!(cancellativity_witness(&squares, 6).unwrap(), None);
    }

    #[test]
    fn limit_is_enforced() {
        let p = parse_presentation("a b c d e f g h | a b = c^2").unwrap();
        assert!(matches!(
            congruence_classes_with_limit(&p, 8, 1000),
            Err(OracleError::ResourceLimit { .. })
        ));
    }
}
