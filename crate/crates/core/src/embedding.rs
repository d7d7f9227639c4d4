//! Embeddings of cancellative monoids into free abelian groups.

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::CanonicalOneRelator;
use crate::linalg::{kernel_basis, smith_normal_form, IntMatrix};
use crate::presentation::Presentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("the group of fractions has torsion {torsion:?}")]
    TorsionPresent { torsion: Vec<u64> },
    #[error("an embedding coordinate does not fit in 64 bits")]
    CoordinateOverflow,
}

/// Images of the generators in `Z^ambient_rank`, in the generator order of
/// the presentation they were built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub ambient_rank: usize,
    pub images: Vec<Vec<i64>>,
}

impl Embedding {
    /// Image of a word given as a dense exponent vector.
    pub fn image_of(&self, exponents: &[u64]) -> Vec<i128> {
        let mut v = vec![0i128; self.ambient_rank];
        for (g, &e) in exponents.iter().enumerate() {
            for (slot, &x) in v.iter_mut().zip(&self.images[g]) {
                *slot += e as i128 * x as i128;
            }
        }
        v
    }

    /// Every defining relation holds as a vector identity.
    pub fn satisfies(&self, p: &Presentation) -> bool {
        let m = p.generator_count();
        m == self.images.len()
            && p.relations()
                .iter()
                .all(|r| self.image_of(&r.lhs.to_dense(m)) == self.image_of(&r.rhs.to_dense(m)))
    }

    /// The images as the columns of a matrix `Z^generators → Z^ambient_rank`.
    pub fn matrix(&self) -> IntMatrix {
        let mut a = IntMatrix::zeros(self.ambient_rank, self.images.len());
        for (g, img) in self.images.iter().enumerate() {
            for (i, &x) in img.iter().enumerate() {
                a.set(i, g, x);
            }
        }
        a
    }

    /// Lattice of integer relations among the images, in Hermite form.
    pub fn relation_lattice(&self) -> IntMatrix {
        kernel_basis(&self.matrix())
    }

    /// Two embeddings of the same generators define isomorphic monoids (via
    /// the generator correspondence) exactly when the images satisfy the same
    /// integer relations.
    pub fn is_equivalent_to(&self, other: &Embedding) -> bool {
        self.images.len() == other.images.len() && self.relation_lattice() == other.relation_lattice()
    }
}

/// The explicit embedding of `u_1 ⋯ u_k = u_{k+1}^{a_{k+1}} ⋯ u_n^{a_n}` into
/// `Z^{k(n-k)}`: with coordinates `e_{j,i}` (`j ≤ k`, `i ≤ n-k`), `u_j` maps to
/// `Σ_i a_{k+i} e_{j,i}` and `u_{k+i}` to `Σ_j e_{j,i}`. Free generators get
/// fresh coordinates.
///
/// ```
/// use monpres::criteria::CanonicalOneRelator;
/// use monpres::embedding::embed_one_relator;
///
/// let e = embed_one_relator(&CanonicalOneRelator::standard(2, vec![2], 0));
/// assert_eq!(e.images, vec![vec![2, 0], vec![0, 2], vec![1, 1]]);
/// ```
pub fn embed_one_relator(c: &CanonicalOneRelator) -> Embedding {
    let (k, n) = (c.k, c.n);
    let width = n - k;
    let ambient_rank = k * width + c.free_tail;
    let mut canonical = vec![vec![0i64; ambient_rank]; n + c.free_tail];
    for j in 0..k {
        for i in 0..width {
            canonical[j][j * width + i] = c.a[i] as i64;
            canonical[k + i][j * width + i] = 1;
        }
    }
    for t in 0..c.free_tail {
        canonical[n + t][k * width + t] = 1;
    }
    let mut images = vec![Vec::new(); n + c.free_tail];
    for (i, img) in canonical.into_iter().enumerate() {
        images[c.relabel[i]] = img;
    }
    Embedding { ambient_rank, images }
}

/// `Z^generators` modulo the differences `lhs - rhs` of the relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupOfFractions {
    pub rank: usize,
    pub torsion: Vec<u64>,
    /// Coordinates of each generator in the free part.
    pub basis_map: Vec<Vec<i64>>,
}

/// Group generated by the monoid, via the Smith form of the relation matrix.
///
/// ```
/// use monpres::embedding::group_of_fractions;
/// use monpres::presentation::parse_presentation;
///
/// let g = group_of_fractions(&parse_presentation("a b | a^2 = b^2").unwrap()).unwrap();
/// assert_eq!((g.rank, g.torsion.clone()), (1, vec![2]));
/// ```
pub fn group_of_fractions(p: &Presentation) -> Result<GroupOfFractions, EmbeddingError> {
    let m = p.generator_count();
    if p.relations().is_empty() {
        return Ok(GroupOfFractions {
            rank: m,
            torsion: Vec::new(),
            basis_map: (0..m).map(|g| (0..m).map(|i| i64::from(g == i)).collect()).collect(),
        });
    }
    let rows: Vec<Vec<i128>> = p.relations().iter().map(|r| r.difference(m)).collect();
    let snf = smith_normal_form(&IntMatrix::from_rows(m, &rows));
    let factors = snf.invariant_factors();
    let r = factors.len();
    let torsion = factors
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().ok_or(EmbeddingError::CoordinateOverflow))
        .collect::<Result<Vec<u64>, _>>()?;
    let basis_map = (0..m)
        .map(|g| {
            (r..m)
                .map(|j| snf.v.get(g, j).to_i64().ok_or(EmbeddingError::CoordinateOverflow))
                .collect::<Result<Vec<i64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupOfFractions {
        rank: m - r,
        torsion,
        basis_map,
    })
}

/// Coordinates of the generators in a basis of a torsion-free group of
/// fractions.
pub fn embed_via_fractions(p: &Presentation) -> Result<Embedding, EmbeddingError> {
    let g = group_of_fractions(p)?;
    if !g.torsion.is_empty() {
        return Err(EmbeddingError::TorsionPresent { torsion: g.torsion });
    }
    Ok(Embedding {
        ambient_rank: g.rank,
        images: g.basis_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::canonicalize_one_relator;
    use crate::presentation::parse_presentation;

    #[test]
    fn one_relator_images() {
        let e = embed_one_relator(&CanonicalOneRelator::standard(1, vec![2, 3], 0));
        assert_eq!(e.ambient_rank, 2);
        assert_eq!(e.images, vec![vec![2, 3], vec![1, 0], vec![0, 1]]);

        let c = CanonicalOneRelator::standard(2, vec![1, 2], 0);
        let e = embed_one_relator(&c);
        assert_eq!(e.ambient_rank, 4);
        assert_eq!(
            e.images,
            vec![vec![1, 2, 0, 0], vec![0, 0, 1, 2], vec![1, 0, 1, 0], vec![0, 1, 0, 1]]
        );
        assert!(e.satisfies(&c.presentation()));
    }

    #[test]
    fn free_tail_gets_fresh_coordinates() {
        let c = CanonicalOneRelator::standard(2, vec![2], 2);
        let e = embed_one_relator(&c);
        assert_eq!(e.ambient_rank, 4);
        assert_eq!(e.images[3], vec![0, 0, 1, 0]);
        assert_eq!(e.images[4], vec![0, 0, 0, 1]);
        assert!(e.satisfies(&c.presentation()));
    }

    #[test]
    fn relabelled_images_follow_source_order() {
        let p = parse_presentation("x y z | z^2 = x y").unwrap();
        let c = canonicalize_one_relator(&p).unwrap();
        let e = embed_one_relator(&c);
        assert!(e.satisfies(&p));
    }

    #[test]
    fn groups_of_fractions() {
        let g = group_of_fractions(&parse_presentation("u1 u2 u3 | u1 u2 = u3^2").unwrap()).unwrap();
        assert_eq!((g.rank, g.torsion.len()), (2, 0));
        let g = group_of_fractions(&parse_presentation("a b c").unwrap()).unwrap();
        assert_eq!((g.rank, g.torsion.len()), (3, 0));
        let p = parse_presentation("u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5").unwrap();
        let e = embed_via_fractions(&p).unwrap();
        assert_eq!(e.ambient_rank, 3);
        assert!(e.satisfies(&p));
        assert_eq!(
            embed_via_fractions(&parse_presentation("a b | a^2 = b^2").unwrap()),
            Err(EmbeddingError::TorsionPresent { torsion: vec![2] })
        );
    }

    #[test]
    fn both_embeddings_agree_on_the_quadric() {
        let p = parse_presentation("u1 u2 u3 | u1 u2 = u3^2").unwrap();
        let direct = embed_one_relator(&canonicalize_one_relator(&p).unwrap());
        let via = embed_via_fractions(&p).unwrap();
        assert!(direct.is_equivalent_to(&via));
    }
}
