//! Rational polyhedral cones spanned by integer vectors: coordinates in the
//! generated lattice and facet enumeration by double description.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::OracleError;
use crate::linalg::{smith_normal_form, IntMatrix};

pub type Vector = Vec<i128>;

pub fn dot(a: &[i128], b: &[i128]) -> Result<i128, OracleError> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y)
            .and_then(|p| acc.checked_add(p))
            .ok_or(OracleError::Overflow)
    })
}

/// Divides out the content; the zero vector is returned unchanged.
pub fn primitive(v: &[i128]) -> Vector {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Rewrites the vectors in coordinates of the lattice they generate, which
/// then becomes `Z^r`.
///
/// ```
/// use monpres::oracle::cone::lattice_coordinates;
///
/// // (2,0), (0,2), (1,1) generate the lattice {x + y even}
/// let c = lattice_coordinates(&[vec![2, 0], vec![0, 2], vec![1, 1]]).unwrap();
/// assert_eq!(c.len(), 3);
/// assert_eq!(c[0].len(), 2);
/// ```
pub fn lattice_coordinates(vectors: &[Vec<i64>]) -> Result<Vec<Vector>, OracleError> {
    let dim = vectors.first().map_or(0, Vec::len);
    let mut a = IntMatrix::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            a.set(i, j, x);
        }
    }
    let snf = smith_normal_form(&a);
    let factors = snf.invariant_factors();
    let ua = &snf.u * &a;
    let mut out = vec![Vec::with_capacity(factors.len()); vectors.len()];
    for (j, coords) in out.iter_mut().enumerate() {
        for (i, d) in factors.iter().enumerate() {
            let x = ua.get(i, j);
            debug_assert!((x % d).is_zero());
            coords.push((x / d).to_i128().ok_or(OracleError::Overflow)?);
        }
    }
    Ok(out)
}

fn rank_i128(rows: &[Vector], dim: usize) -> usize {
    let rows: Vec<Vec<i128>> = rows.to_vec();
    IntMatrix::from_rows(dim, &rows).rank()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facets {
    /// Primitive inner normals, sorted.
    pub normals: Vec<Vector>,
    /// The cone contains no line.
    pub pointed: bool,
}

struct Ray {
    v: Vector,
    /// Indices of the processed generators the ray vanishes on.
    zeros: Vec<usize>,
}

/// Facets of the cone spanned by `generators`, which must span `Q^dim`.
/// The facet normals are the extreme rays of the dual cone
/// `{y : y·g ≥ 0 for every generator g}`, found by double description.
pub fn facets(generators: &[Vector], dim: usize) -> Result<Facets, OracleError> {
    if dim == 0 {
        return Ok(Facets {
            normals: Vec::new(),
            pointed: true,
        });
    }
    // An independent starting set of generators.
    let mut basis: Vec<usize> = Vec::new();
    for (i, _) in generators.iter().enumerate() {
        let mut trial: Vec<Vector> = basis.iter().map(|&j| generators[j].clone()).collect();
        trial.push(generators[i].clone());
        if rank_i128(&trial, dim) == trial.len() {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    if basis.len() < dim {
        return Err(OracleError::NotFullDimensional);
    }

    // The dual of a simplicial cone is spanned by the columns of the inverse
    // of its generator matrix, i.e. the adjugate columns scaled by sign(det).
    let rows: Vec<Vector> = basis.iter().map(|&j| generators[j].clone()).collect();
    let b = IntMatrix::from_rows(dim, &rows);
    let det = b.determinant();
    let mut rays: Vec<Ray> = Vec::new();
    for col in 0..dim {
        // Column `col` of adj(B): cofactors C_{col, i}.
        let mut v = Vec::with_capacity(dim);
        for i in 0..dim {
            let minor_rows: Vec<Vec<num_bigint::BigInt>> = (0..dim)
                .filter(|&r| r != col)
                .map(|r| (0..dim).filter(|&c| c != i).map(|c| b.get(r, c).clone()).collect())
                .collect();
            let minor = IntMatrix::from_rows(dim - 1, &minor_rows).determinant();
            let mut cof = if (col + i) % 2 == 0 { minor } else { -minor };
            if det.is_negative() {
                cof = -cof;
            }
            v.push(cof.to_i128().ok_or(OracleError::Overflow)?);
        }
        let v = primitive(&v);
        let zeros = basis
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != col)
            .map(|(_, &g)| g)
            .collect();
        rays.push(Ray { v, zeros });
    }

    for (g, gen) in generators.iter().enumerate() {
        if basis.contains(&g) {
            continue;
        }
        let values: Vec<i128> = rays.iter().map(|r| dot(&r.v, gen)).collect::<Result<_, _>>()?;
        let mut next: Vec<Ray> = Vec::new();
        for (r, &val) in rays.iter().zip(&values) {
            if val >= 0 {
                let mut zeros = r.zeros.clone();
                if val == 0 {
                    zeros.push(g);
                }
                next.push(Ray { v: r.v.clone(), zeros });
            }
        }
        for (i, pos) in rays.iter().enumerate() {
            if values[i] <= 0 {
                continue;
            }
            for (j, neg) in rays.iter().enumerate() {
                if values[j] >= 0 {
                    continue;
                }
                let common: Vec<usize> = pos.zeros.iter().filter(|z| neg.zeros.contains(z)).copied().collect();
                if common.len() + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, other)| k == i || k == j || !common.iter().all(|z| other.zeros.contains(z)));
                if !adjacent {
                    continue;
                }
                let a = values[i];
                let b = -values[j];
                let v: Vector = pos
                    .v
                    .iter()
                    .zip(&neg.v)
                    .map(|(x, y)| {
                        b.checked_mul(*x)
                            .zip(a.checked_mul(*y))
                            .and_then(|(p, q)| p.checked_add(q))
                            .ok_or(OracleError::Overflow)
                    })
                    .collect::<Result<_, _>>()?;
                let mut zeros = common;
                zeros.push(g);
                next.push(Ray {
                    v: primitive(&v),
                    zeros,
                });
            }
        }
        rays = next;
    }

    let mut normals: Vec<Vector> = rays.into_iter().map(|r| r.v).collect();
    normals.sort();
    normals.dedup();
    let pointed = rank_i128(&normals, dim) == dim;
    Ok(Facets { normals, pointed })
}

/// True when `v` satisfies every facet inequality.
pub fn in_cone(normals: &[Vector], v: &[i128]) -> Result<bool, OracleError> {
    for n in normals {
        if dot(n, v)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}
