//! Minimal primes of the canonical shapes and the decomposition of principal
//! ideals into divisorial products of them.
//!
//! All indices here are 0-based canonical indices; labels print 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::{CanonicalOneRelator, CanonicalTwoRelator};
use crate::linalg::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisorError {
    #[error("generator {0} lies in no relation, so its principal ideal meets no minimal prime")]
    FreeGenerator(usize),
    #[error("generator {0} is out of range")]
    OutOfRange(usize),
}

/// Triples sort before pairs; each kind sorts lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PrimeLabel {
    Triple(usize, usize, usize),
    Pair(usize, usize),
}

impl fmt::Display for PrimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PrimeLabel::Triple(t, v, x) => write!(f, "P({},{},{})", t + 1, v + 1, x + 1),
            PrimeLabel::Pair(y, z) => write!(f, "P({},{})", y + 1, z + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalPrime {
    /// The generators inside the prime, sorted.
    pub generator_set: Vec<usize>,
    pub label: PrimeLabel,
}

impl MinimalPrime {
    fn new(label: PrimeLabel) -> Self {
        let mut generator_set = match label {
            PrimeLabel::Triple(t, v, x) => vec![t, v, x],
            PrimeLabel::Pair(y, z) => vec![y, z],
        };
        generator_set.sort_unstable();
        MinimalPrime { generator_set, label }
    }

    pub fn contains(&self, generator: usize) -> bool {
        self.generator_set.binary_search(&generator).is_ok()
    }
}

/// `S·u_w` as a divisorial product: primes with their multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorDecomposition {
    pub generator: usize,
    pub factors: Vec<(PrimeLabel, u64)>,
}

impl DivisorDecomposition {
    pub fn multiplicity(&self, label: &PrimeLabel) -> u64 {
        self.factors.iter().find(|(l, _)| l == label).map_or(0, |&(_, m)| m)
    }
}

impl fmt::Display for DivisorDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(l, m)| if *m == 1 { l.to_string() } else { format!("{l}^{m}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Rows are primes, columns are the generators occurring in the relations,
/// entry = multiplicity of the prime in the principal ideal of the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorData {
    pub primes: Vec<MinimalPrime>,
    pub matrix: IntMatrix,
}

/// `P(y,z)` for `y < k ≤ z < n`, in lexicographic order.
///
/// ```
/// use monpres::criteria::CanonicalOneRelator;
/// use monpres::divisors::minimal_primes_one_relator;
///
/// let primes = minimal_primes_one_relator(&CanonicalOneRelator::standard(3, vec![2, 3], 0));
/// assert_eq!(primes.len(), 6);
/// ```
pub fn minimal_primes_one_relator(c: &CanonicalOneRelator) -> Vec<MinimalPrime> {
    (0..c.k)
        .flat_map(|y| (c.k..c.n).map(move |z| MinimalPrime::new(PrimeLabel::Pair(y, z))))
        .collect()
}

fn one_relator_valuation(c: &CanonicalOneRelator, label: &PrimeLabel, w: usize) -> u64 {
    match *label {
        PrimeLabel::Pair(y, z) if w == y => c.exponent(z),
        PrimeLabel::Pair(_, z) if w == z => 1,
        _ => 0,
    }
}

fn check_generator(w: usize, n: usize, total: usize) -> Result<(), DivisorError> {
    if w >= total {
        Err(DivisorError::OutOfRange(w))
    } else if w >= n {
        Err(DivisorError::FreeGenerator(w))
    } else {
        Ok(())
    }
}

fn decomposition(primes: &[MinimalPrime], w: usize, valuation: impl Fn(&PrimeLabel) -> u64) -> DivisorDecomposition {
    let factors = primes
        .iter()
        .filter_map(|p| {
            let m = valuation(&p.label);
            (m > 0).then_some((p.label, m))
        })
        .collect();
    DivisorDecomposition { generator: w, factors }
}

/// `S·u_z = P(1,z) * ⋯ * P(k,z)` for `z` on the right, and
/// `S·u_y = P(y,k+1)^{a_{k+1}} * ⋯ * P(y,n)^{a_n}` for `y` on the left.
///
/// ```
/// use monpres::criteria::CanonicalOneRelator;
/// use monpres::divisors::principal_decomposition_one_relator;
///
/// let c = CanonicalOneRelator::standard(2, vec![2], 0);
/// assert_eq!(principal_decomposition_one_relator(&c, 2).unwrap().to_string(), "P(1,3) * P(2,3)");
/// assert_eq!(principal_decomposition_one_relator(&c, 0).unwrap().to_string(), "P(1,3)^2");
/// ```
pub fn principal_decomposition_one_relator(
    c: &CanonicalOneRelator,
    w: usize,
) -> Result<DivisorDecomposition, DivisorError> {
    check_generator(w, c.n, c.n + c.free_tail)?;
    Ok(decomposition(&minimal_primes_one_relator(c), w, |l| {
        one_relator_valuation(c, l, w)
    }))
}

/// Triples `(t, v, x)` with `t ∈ B1, v ∈ B2 ∪ B4` or `t ∈ B3, v ∈ B2`, and
/// `x ∈ B6`; then pairs `(y, z)` with `y ∈ B3, z ∈ B4` or `y ∈ B5, z ∈ B6`.
/// Empty blocks contribute nothing.
pub fn minimal_primes_two_relator(c: &CanonicalTwoRelator) -> Vec<MinimalPrime> {
    let [b1, b2, b3, b4, b5, b6] = c.blocks();
    let mut labels = Vec::new();
    for t in b1 {
        for v in b2.clone().chain(b4.clone()) {
            labels.extend(b6.clone().map(|x| PrimeLabel::Triple(t, v, x)));
        }
    }
    for t in b3.clone() {
        for v in b2.clone() {
            labels.extend(b6.clone().map(|x| PrimeLabel::Triple(t, v, x)));
        }
    }
    for y in b3 {
        labels.extend(b4.clone().map(|z| PrimeLabel::Pair(y, z)));
    }
    for y in b5 {
        labels.extend(b6.clone().map(|z| PrimeLabel::Pair(y, z)));
    }
    labels.sort();
    labels.into_iter().map(MinimalPrime::new).collect()
}

/// Number of minimal primes of a two-relation canonical shape.
pub fn two_relator_prime_count(c: &CanonicalTwoRelator) -> usize {
    let [k1, k2, k3, k4, k5] = c.k;
    let n = c.n;
    (k3 - k2) * (k4 - k3)
        + (k5 - k4) * (n - k5)
        + k1 * (k4 - k3 + k2 - k1) * (n - k5)
        + (k3 - k2) * (k2 - k1) * (n - k5)
}

fn two_relator_valuation(c: &CanonicalTwoRelator, label: &PrimeLabel, w: usize) -> u64 {
    let in_b2 = |v: usize| c.k[0] <= v && v < c.k[1];
    match *label {
        PrimeLabel::Pair(y, z) if y < c.k[2] => {
            // y ∈ B3, z ∈ B4
            if w == y {
                c.a[z]
            } else if w == z {
                1
            } else {
                0
            }
        }
        PrimeLabel::Pair(y, z) => {
            // y ∈ B5, z ∈ B6
            if w == y {
                1
            } else if w == z {
                c.a[y]
            } else {
                0
            }
        }
        PrimeLabel::Triple(t, v, x) => {
            let t_in_b1 = t < c.k[0];
            if w == v {
                1
            } else if w == t {
                c.a[v]
            } else if w == x {
                match (t_in_b1, in_b2(v)) {
                    (true, true) => c.a[t] * c.a[v] + c.b_at(v),
                    (true, false) => c.a[t] * c.a[v],
                    (false, _) => c.b_at(v),
                }
            } else {
                0
            }
        }
    }
}

/// The divisorial product for `S·u_w` in a two-relation canonical shape.
///
/// ```
/// use monpres::criteria::CanonicalTwoRelator;
/// use monpres::divisors::principal_decomposition_two_relator;
///
/// // u1 u3 = u2^2, u1 u2 = u4 u5
/// let c = CanonicalTwoRelator::standard([1, 2, 3, 3, 3], 5, vec![1, 2, 1], vec![1], 0);
/// let d = principal_decomposition_two_relator(&c, 3).unwrap();
/// assert_eq!(d.to_string(), "P(1,2,4)^3 * P(3,2,4)");
/// ```
pub fn principal_decomposition_two_relator(
    c: &CanonicalTwoRelator,
    w: usize,
) -> Result<DivisorDecomposition, DivisorError> {
    check_generator(w, c.n, c.n + c.free_tail)?;
    Ok(decomposition(&minimal_primes_two_relator(c), w, |l| {
        two_relator_valuation(c, l, w)
    }))
}

/// Assembles the matrix with one row per prime and one column per
/// decomposition.
pub fn divisor_matrix(primes: &[MinimalPrime], decompositions: &[DivisorDecomposition]) -> DivisorData {
    let mut matrix = IntMatrix::zeros(primes.len(), decompositions.len());
    for (j, d) in decompositions.iter().enumerate() {
        for (i, p) in primes.iter().enumerate() {
            let m = d.multiplicity(&p.label);
            if m > 0 {
                matrix.set(i, j, m);
            }
        }
    }
    DivisorData {
        primes: primes.to_vec(),
        matrix,
    }
}

/// Primes and divisor matrix of a one-relation canonical shape.
///
/// ```
/// use monpres::criteria::CanonicalOneRelator;
/// use monpres::divisors::divisor_data_one_relator;
///
/// let d = divisor_data_one_relator(&CanonicalOneRelator::standard(2, vec![2], 0));
/// assert_eq!(d.matrix.to_string(), "[[2, 0, 1], [0, 2, 1]]");
/// ```
pub fn divisor_data_one_relator(c: &CanonicalOneRelator) -> DivisorData {
    let primes = minimal_primes_one_relator(c);
    let decompositions: Vec<DivisorDecomposition> = (0..c.n)
        .map(|w| principal_decomposition_one_relator(c, w).expect("relation generator"))
        .collect();
    divisor_matrix(&primes, &decompositions)
}

/// Primes and divisor matrix of a two-relation canonical shape.
pub fn divisor_data_two_relator(c: &CanonicalTwoRelator) -> DivisorData {
    let primes = minimal_primes_two_relator(c);
    let decompositions: Vec<DivisorDecomposition> = (0..c.n)
        .map(|w| principal_decomposition_two_relator(c, w).expect("relation generator"))
        .collect();
    divisor_matrix(&primes, &decompositions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_relation_example() -> CanonicalTwoRelator {
        CanonicalTwoRelator::standard([1, 2, 3, 3, 3], 5, vec![1, 2, 1], vec![1], 0)
    }

    #[test]
    fn one_relator_primes() {
        let labels: Vec<PrimeLabel> = minimal_primes_one_relator(&CanonicalOneRelator::standard(2, vec![2], 0))
            .into_iter()
            .map(|p| p.label)
            .collect();
        assert_eq!(labels, vec![PrimeLabel::Pair(0, 2), PrimeLabel::Pair(1, 2)]);
        assert_eq!(
            minimal_primes_one_relator(&CanonicalOneRelator::standard(1, vec![3], 0)).len(),
            1
        );
    }

    #[test]
    fn one_relator_decomposition() {
        let c = CanonicalOneRelator::standard(2, vec![1, 3], 0);
        let d = principal_decomposition_one_relator(&c, 1).unwrap();
        assert_eq!(
            d.factors,
            vec![(PrimeLabel::Pair(1, 2), 1), (PrimeLabel::Pair(1, 3), 3)]
        );
        let c = CanonicalOneRelator::standard(2, vec![2], 1);
        assert_eq!(
            principal_decomposition_one_relator(&c, 3),
            Err(DivisorError::FreeGenerator(3))
        );
    }

    #[test]
    fn one_relator_k1_matrix() {
        let d = divisor_data_one_relator(&CanonicalOneRelator::standard(1, vec![2, 3], 0));
        assert_eq!(d.matrix.to_string(), "[[2, 1, 0], [3, 0, 1]]");
    }

    #[test]
    fn two_relation_example_primes() {
        let c = two_relation_example();
        let labels: Vec<String> = minimal_primes_two_relator(&c)
            .iter()
            .map(|p| p.label.to_string())
            .collect();
        assert_eq!(labels, ["P(1,2,4)", "P(1,2,5)", "P(3,2,4)", "P(3,2,5)"]);
        assert_eq!(two_relator_prime_count(&c), 4);
        let d = divisor_data_two_relator(&c);
        assert_eq!(d.matrix.rows(), 4);
        assert_eq!(d.matrix.cols(), 5);
    }

    #[test]
    fn middle_block_decomposition() {
        // w ∈ B5 gets multiplicity one on every P(w, l), l ∈ B6
        let c = CanonicalTwoRelator::standard([1, 2, 3, 4, 5], 7, vec![2, 1, 1, 2, 2], vec![2], 0);
        let d = principal_decomposition_two_relator(&c, 4).unwrap();
        assert_eq!(
            d.factors,
            vec![(PrimeLabel::Pair(4, 5), 1), (PrimeLabel::Pair(4, 6), 1)]
        );
    }

    #[test]
    fn degenerate_blocks() {
        // k2 = k3 = k4 = k5: only triples with v ∈ B2
        let c = CanonicalTwoRelator::standard([1, 3, 3, 3, 3], 5, vec![1, 2, 2], vec![1, 1], 0);
        let primes = minimal_primes_two_relator(&c);
        assert_eq!(primes.len(), 4);
        assert!(primes
            .iter()
            .all(|p| matches!(p.label, PrimeLabel::Triple(0, 1..=2, 3..=4))));
    }

    #[test]
    fn support_consistency() {
        let c = CanonicalTwoRelator::standard([1, 2, 3, 4, 5], 7, vec![2, 1, 1, 2, 2], vec![2], 0);
        let d = divisor_data_two_relator(&c);
        for (i, p) in d.primes.iter().enumerate() {
            for w in 0..c.n {
                assert_eq!(p.contains(w), d.matrix.get(i, w) > &0.into(), "{} {w}", p.label);
            }
        }
    }
}
