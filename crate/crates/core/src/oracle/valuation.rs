//! Facet valuations: the class group of a normal positive monoid read off
//! from the primitive facet normals of its cone.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::cone::{dot, facets, lattice_coordinates, Vector};
use super::{OracleError, MAX_RANK};
use crate::divisors::DivisorData;
use crate::embedding::Embedding;
use crate::linalg::{cokernel_invariants, AbelianGroupInvariants, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetValuation {
    /// Primitive inner facet normals in coordinates of the group generated by
    /// the images.
    pub normals: Vec<Vector>,
    /// Rows are facets, columns generators; entry = normal · image.
    pub valuation_matrix: IntMatrix,
    pub class_group: AbelianGroupInvariants,
}

/// Valuations of the generators at every facet, and the cokernel of the
/// group of fractions mapped through all facet valuations.
///
/// ```
/// use monpres::embedding::Embedding;
/// use monpres::oracle::valuation::facet_valuation_class_group;
///
/// let e = Embedding { ambient_rank: 2, images: vec![vec![2, 0], vec![0, 2], vec![1, 1]] };
/// let v = facet_valuation_class_group(&e).unwrap();
/// assert_eq!(v.class_group.to_string(), "Z/2");
/// assert_eq!(v.valuation_matrix.rows(), 2);
/// ```
pub fn facet_valuation_class_group(e: &Embedding) -> Result<FacetValuation, OracleError> {
    let coords = lattice_coordinates(&e.images)?;
    let dim = coords.first().map_or(0, Vec::len);
    if dim > MAX_RANK {
        return Err(OracleError::DimensionTooLarge {
            rank: dim,
            max: MAX_RANK,
        });
    }
    let f = facets(&coords, dim)?;
    if !f.pointed {
        return Err(OracleError::NotPointed);
    }
    let mut valuation_matrix = IntMatrix::zeros(f.normals.len(), coords.len());
    for (i, n) in f.normals.iter().enumerate() {
        for (j, g) in coords.iter().enumerate() {
            valuation_matrix.set(i, j, dot(n, g)?);
        }
    }
    let normal_rows: Vec<Vector> = f.normals.clone();
    let class_group = cokernel_invariants(&IntMatrix::from_rows(dim, &normal_rows));
    Ok(FacetValuation {
        normals: f.normals,
        valuation_matrix,
        class_group,
    })
}

fn positive_support(row: &[BigInt]) -> BTreeSet<usize> {
    row.iter()
        .enumerate()
        .filter(|(_, x)| *x > &BigInt::zero())
        .map(|(i, _)| i)
        .collect()
}

/// Matches the rows of a divisor matrix to facets by the set of generators
/// each contains, then checks every multiplicity against the facet
/// valuations. Column `c` of the divisor matrix is generator `relabel[c]` of
/// the embedding. Returns the facet index for each prime.
pub fn reconcile(
    divisor: &DivisorData,
    relabel: &[usize],
    valuation: &FacetValuation,
) -> Result<Vec<usize>, OracleError> {
    let m = &divisor.matrix;
    let facet_supports: Vec<BTreeSet<usize>> = (0..valuation.valuation_matrix.rows())
        .map(|j| positive_support(valuation.valuation_matrix.row(j)))
        .collect();
    let mut matched = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let support: BTreeSet<usize> = positive_support(m.row(i)).into_iter().map(|c| relabel[c]).collect();
        let hits: Vec<usize> = (0..facet_supports.len())
            .filter(|&j| facet_supports[j] == support)
            .collect();
        let label = divisor.primes[i].label;
        let j = match hits.as_slice() {
            [j] => *j,
            [] => {
                return Err(OracleError::Reconciliation(format!(
                    "no facet has the generator set of {label}"
                )))
            }
            _ => return Err(OracleError::Reconciliation(format!("several facets match {label}"))),
        };
        if matched.contains(&j) {
            return Err(OracleError::Reconciliation(format!("facet {j} matches two primes")));
        }
        for c in 0..m.cols() {
            let expected = m.get(i, c);
            let found = valuation.valuation_matrix.get(j, relabel[c]);
            if expected != found {
                return Err(OracleError::Reconciliation(format!(
                    "{label}: multiplicity {expected} for generator {c} but facet valuation {found}",
                    c = c + 1
                )));
            }
        }
        matched.push(j);
    }
    Ok(matched)
}

/// Valuation matrix restricted to matched facets and reordered like the
/// primes, as plain integers.
pub fn matched_rows(valuation: &FacetValuation, matching: &[usize]) -> Vec<Vec<i64>> {
    matching
        .iter()
        .map(|&j| {
            valuation
                .valuation_matrix
                .row(j)
                .iter()
                .map(|x| x.to_i64().unwrap_or(i64::MAX))
                .collect()
        })
        .collect()
}
