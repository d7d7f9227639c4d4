//! Divisor class groups by closed formula and by reduction of the divisor
//! matrix.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::{
    canonicalize_one_relator, canonicalize_two_relator, relations_disjoint, verdict_for, CanonicalOneRelator,
    CanonicalTwoRelator, NormalityStatus,
};
use crate::divisors::{divisor_data_one_relator, divisor_data_two_relator, two_relator_prime_count, DivisorData};
use crate::linalg::{cokernel_invariants, AbelianGroupInvariants};
use crate::presentation::{normalize, Normalized, Presentation, PresentationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassGroupError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("the monoid is not normal and positive (verdict {0})")]
    NotNormalInput(NormalityStatus),
    #[error("the relations are normal but fit neither canonical shape; use the facet valuation oracle")]
    NoCanonicalShape,
    #[error("the divisor matrix has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
}

/// Numbers entering the closed formulas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ClassGroupParameters {
    Free,
    One {
        k: usize,
        n: usize,
        d: u64,
        copies: usize,
        prime_count: usize,
    },
    Two {
        k: [usize; 5],
        n: usize,
        f: usize,
        d1: u64,
        d1_copies: usize,
        d2: u64,
        d2_copies: usize,
        prime_count: usize,
    },
    Product {
        first: Box<ClassGroupParameters>,
        second: Box<ClassGroupParameters>,
    },
}

/// Canonical forms used for the computation. Relabelings refer to generator
/// indices of the normalized presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CanonicalShape {
    Free,
    One(CanonicalOneRelator),
    Two(CanonicalTwoRelator),
    Product {
        first: CanonicalOneRelator,
        second: CanonicalOneRelator,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupReport {
    pub formula: AbelianGroupInvariants,
    pub matrix_route: AbelianGroupInvariants,
    pub agree: bool,
    pub parameters: ClassGroupParameters,
    pub shape: CanonicalShape,
}

fn gcd_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0, |g, x| g.gcd(&x))
}

fn one_parameters(c: &CanonicalOneRelator) -> ClassGroupParameters {
    ClassGroupParameters::One {
        k: c.k,
        n: c.n,
        d: gcd_all(c.a.iter().copied()),
        copies: c.k - 1,
        prime_count: c.k * (c.n - c.k),
    }
}

/// `Z^{k(n-k)-(n-1)} × (Z/d)^{k-1}` with `d = gcd(a_{k+1}, …, a_n)`.
///
/// ```
/// use monpres::classgroup::class_group_formula_one;
/// use monpres::criteria::CanonicalOneRelator;
///
/// let g = class_group_formula_one(&CanonicalOneRelator::standard(2, vec![2], 0));
/// assert_eq!(g.to_string(), "Z/2");
/// ```
pub fn class_group_formula_one(c: &CanonicalOneRelator) -> AbelianGroupInvariants {
    let ClassGroupParameters::One {
        n,
        d,
        copies,
        prime_count,
        ..
    } = one_parameters(c)
    else {
        unreachable!()
    };
    AbelianGroupInvariants::from_moduli(prime_count - (n - 1), &vec![d; copies])
}

fn two_parameters(c: &CanonicalTwoRelator) -> ClassGroupParameters {
    let [b1, b2, _, b4, b5, _] = c.blocks();
    let [k1, k2, k3, _, k5] = c.k;
    let n = c.n;
    let d1_list: Vec<u64> = b2.clone().chain(b4.clone()).map(|i| c.a[i]).collect();
    assert!(!d1_list.is_empty(), "the right side of the first relation is nonempty");
    let d1 = gcd_all(d1_list);
    let d2 = if k2 < k3 {
        gcd_all(
            b1.map(|t| c.a[t] * d1)
                .chain(b2.map(|v| c.b_at(v)))
                .chain(b5.map(|y| c.a[y])),
        )
    } else {
        let mut q = Vec::new();
        for t in b1 {
            q.extend(b2.clone().map(|v| c.a[t] * c.a[v] + c.b_at(v)));
            q.extend(b4.clone().map(|v| c.a[t] * c.a[v]));
        }
        q.extend(b5.map(|y| c.a[y]));
        gcd_all(q)
    };
    let prime_count = two_relator_prime_count(c);
    ClassGroupParameters::Two {
        k: c.k,
        n,
        f: prime_count - (n - 2),
        d1,
        d1_copies: k1 + k3 - k2 - 1,
        d2,
        d2_copies: n - k5 - 1,
        prime_count,
    }
}

/// `Z^f × (Z/d1)^{k1+k3-k2-1} × (Z/d2)^{n-k5-1}`, normalized to invariant
/// factors.
///
/// ```
/// use monpres::classgroup::class_group_formula_two;
/// use monpres::criteria::CanonicalTwoRelator;
///
/// // u1 u3 = u2^2, u1 u2 = u4 u5
/// let c = CanonicalTwoRelator::standard([1, 2, 3, 3, 3], 5, vec![1, 2, 1], vec![1], 0);
/// assert_eq!(class_group_formula_two(&c).to_string(), "Z x Z/2");
/// ```
pub fn class_group_formula_two(c: &CanonicalTwoRelator) -> AbelianGroupInvariants {
    let ClassGroupParameters::Two {
        f,
        d1,
        d1_copies,
        d2,
        d2_copies,
        ..
    } = two_parameters(c)
    else {
        unreachable!()
    };
    let mut moduli = vec![d1; d1_copies];
    moduli.extend(std::iter::repeat_n(d2, d2_copies));
    AbelianGroupInvariants::from_moduli(f, &moduli)
}

/// Cokernel of the divisor matrix. The columns span the principal divisors,
/// a lattice isomorphic to the group of fractions, so the matrix rank must
/// equal `gof_rank`.
pub fn class_group_from_matrix(d: &DivisorData, gof_rank: usize) -> Result<AbelianGroupInvariants, ClassGroupError> {
    let found = d.matrix.rank();
    if found != gof_rank {
        return Err(ClassGroupError::RankMismatch {
            expected: gof_rank,
            found,
        });
    }
    Ok(cokernel_invariants(&d.matrix))
}

struct Route {
    formula: AbelianGroupInvariants,
    matrix_route: AbelianGroupInvariants,
    parameters: ClassGroupParameters,
}

fn one_route(c: &CanonicalOneRelator) -> Result<Route, ClassGroupError> {
    Ok(Route {
        formula: class_group_formula_one(c),
        matrix_route: class_group_from_matrix(&divisor_data_one_relator(c), c.n - 1)?,
        parameters: one_parameters(c),
    })
}

fn two_route(c: &CanonicalTwoRelator) -> Result<Route, ClassGroupError> {
    Ok(Route {
        formula: class_group_formula_two(c),
        matrix_route: class_group_from_matrix(&divisor_data_two_relator(c), c.n - 2)?,
        parameters: two_parameters(c),
    })
}

/// Canonical form of relation `r` alone, with the relabeling composed back to
/// indices of `p`; every generator outside the relation joins the free tail.
fn canonical_part(p: &Presentation, r: usize) -> Result<CanonicalOneRelator, ClassGroupError> {
    let support: Vec<usize> = p.relations()[r].support().into_iter().collect();
    let part = p.restrict(&support, &[r]);
    let mut c = canonicalize_one_relator(&part).map_err(|_| ClassGroupError::NoCanonicalShape)?;
    c.relabel = c.relabel.iter().map(|&i| support[i]).collect();
    c.relabel
        .extend((0..p.generator_count()).filter(|g| !support.contains(g)));
    c.free_tail = p.generator_count() - c.n;
    Ok(c)
}

/// Class group of a normalized presentation with a normal verdict.
pub fn class_group_normalized(n: &Normalized) -> Result<ClassGroupReport, ClassGroupError> {
    let verdict = verdict_for(n);
    if !verdict.is_normal() {
        return Err(ClassGroupError::NotNormalInput(verdict.status));
    }
    let p = &n.presentation;
    let (route, shape) = match p.relations().len() {
        0 => (
            Route {
                formula: AbelianGroupInvariants::trivial(),
                matrix_route: AbelianGroupInvariants::trivial(),
                parameters: ClassGroupParameters::Free,
            },
            CanonicalShape::Free,
        ),
        1 => {
            let c = canonicalize_one_relator(p).map_err(|_| ClassGroupError::NoCanonicalShape)?;
            (one_route(&c)?, CanonicalShape::One(c))
        }
        _ if relations_disjoint(p) => {
            let first = canonical_part(p, 0)?;
            let second = canonical_part(p, 1)?;
            let (r1, r2) = (one_route(&first)?, one_route(&second)?);
            (
                Route {
                    formula: r1.formula.product(&r2.formula),
                    matrix_route: r1.matrix_route.product(&r2.matrix_route),
                    parameters: ClassGroupParameters::Product {
                        first: Box::new(r1.parameters),
                        second: Box::new(r2.parameters),
                    },
                },
                CanonicalShape::Product { first, second },
            )
        }
        _ => {
            let c = canonicalize_two_relator(p).map_err(|_| ClassGroupError::NoCanonicalShape)?;
            (two_route(&c)?, CanonicalShape::Two(c))
        }
    };
    Ok(ClassGroupReport {
        agree: route.formula == route.matrix_route,
        formula: route.formula,
        matrix_route: route.matrix_route,
        parameters: route.parameters,
        shape,
    })
}

/// Normalizes, checks normality, and computes the class group by formula and
/// by the divisor matrix.
///
/// ```
/// use monpres::classgroup::class_group;
/// use monpres::presentation::parse_presentation;
///
/// let r = class_group(&parse_presentation("u1 u2 u3 | u1 u2 = u3^2").unwrap()).unwrap();
/// assert!(r.agree);
/// assert_eq!(r.formula.to_string(), "Z/2");
/// ```
pub fn class_group(p: &Presentation) -> Result<ClassGroupReport, ClassGroupError> {
    class_group_normalized(&normalize(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn report(text: &str) -> ClassGroupReport {
        class_group(&parse_presentation(text).unwrap()).unwrap()
    }

    #[test]
    fn one_relator_formula_examples() {
        assert!(class_group_formula_one(&CanonicalOneRelator::standard(1, vec![2, 3], 0)).is_trivial());
        let g = class_group_formula_one(&CanonicalOneRelator::standard(3, vec![2, 3], 0));
        assert_eq!(g, AbelianGroupInvariants::from_moduli(2, &[]));
    }

    #[test]
    fn quadric_and_two_relation_example() {
        let r = report("u1 u2 u3 | u1 u2 = u3^2");
        assert_eq!(r.matrix_route.to_string(), "Z/2");
        assert!(r.agree);
        let r = report("u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5");
        assert!(r.agree);
        assert_eq!(r.formula.to_string(), "Z x Z/2");
        match r.parameters {
            ClassGroupParameters::Two {
                f, d1, d2, prime_count, ..
            } => {
                assert_eq!((f, d1, d2, prime_count), (1, 2, 1, 4));
            }
            other => panic!("unexpected parameters {other:?}"),
        }
    }

    #[test]
    fn disjoint_relations_multiply() {
        let r = report("a b c d e f | a b = c^2 ; d e = f^3");
        assert!(r.agree);
        assert_eq!(r.formula, AbelianGroupInvariants::from_moduli(0, &[6]));
        let CanonicalShape::Product { first, second } = &r.shape else {
            panic!("expected a product");
        };
        let p = parse_presentation("a b c d e f | a b = c^2 ; d e = f^3").unwrap();
        assert_eq!(first.expand(), p.relations()[0]);
        assert_eq!(second.expand(), p.relations()[1]);
    }

    #[test]
    fn free_and_rejected_inputs() {
        assert!(report("a b c").formula.is_trivial());
        let p = parse_presentation("u1 u2 u3 u4 | u1 u2 = u3^2 ; u1 u3 = u4^2").unwrap();
        assert_eq!(
            class_group(&p),
            Err(ClassGroupError::NotNormalInput(NormalityStatus::NotNormal))
        );
        let p = parse_presentation("u1 u2 u3 u4 u5 u6 u7 | u1^2 u2 = u3 u4 ; u1^2 u5 = u6 u7").unwrap();
        assert_eq!(class_group(&p), Err(ClassGroupError::NoCanonicalShape));
    }
}
