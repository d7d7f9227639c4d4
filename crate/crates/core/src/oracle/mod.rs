//! Brute-force checks independent of the combinatorial criteria and closed
//! formulas: bounded congruence enumeration, Hilbert bases of the cone over
//! an embedding, and facet valuations.

pub mod cone;
pub mod congruence;
pub mod hilbert;
pub mod valuation;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{embed_via_fractions, group_of_fractions, Embedding, EmbeddingError};
use crate::presentation::Presentation;
use cone::{facets, lattice_coordinates, Vector};
use hilbert::{grading, hilbert_basis, is_member, DEFAULT_MEMBERSHIP_BUDGET};

/// Largest lattice rank the cone computations accept.
pub const MAX_RANK: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("resource limit reached: more than {limit} {what}")]
    ResourceLimit { what: &'static str, limit: usize },
    #[error("lattice rank {rank} exceeds the supported maximum {max}")]
    DimensionTooLarge { rank: usize, max: usize },
    #[error("membership search exceeded {budget} nodes")]
    MembershipSolveBound { budget: usize },
    #[error("the cone contains a line")]
    NotPointed,
    #[error("the generators do not span the ambient space")]
    NotFullDimensional,
    #[error("integer overflow in the cone computation")]
    Overflow,
    #[error("the embedding does not satisfy the relations")]
    InvalidEmbedding,
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("divisor matrix and facet valuations disagree: {0}")]
    Reconciliation(String),
}

/// The cone over the generator images, in coordinates of the lattice the
/// images generate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeData {
    pub rank: usize,
    pub generator_images: Vec<Vector>,
    pub facets: Vec<Vector>,
    pub pointed: bool,
    /// Empty unless the cone is pointed.
    pub hilbert_basis: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityCertificate {
    /// Every Hilbert basis element lies in the monoid.
    pub normal: bool,
    pub cone: ConeData,
    /// A lattice point of the cone outside the monoid.
    pub outside: Option<Vector>,
}

/// Cone, facets and Hilbert basis for the images of an embedding.
pub fn cone_data(e: &Embedding) -> Result<ConeData, OracleError> {
    let coords = lattice_coordinates(&e.images)?;
    let rank = coords.first().map_or(0, Vec::len);
    if rank > MAX_RANK {
        return Err(OracleError::DimensionTooLarge { rank, max: MAX_RANK });
    }
    let f = facets(&coords, rank)?;
    let hilbert_basis = if f.pointed {
        hilbert_basis(&coords, &f.normals, rank)?
    } else {
        Vec::new()
    };
    Ok(ConeData {
        rank,
        generator_images: coords,
        facets: f.normals,
        pointed: f.pointed,
        hilbert_basis,
    })
}

/// Checks `S = cone ∩ group` for the monoid generated by the images: every
/// Hilbert basis element must be a nonnegative combination of the images.
/// A cone containing a line is reported as not normal-positive.
///
/// ```
/// use monpres::embedding::Embedding;
/// use monpres::oracle::hilbert_basis_normality;
/// use monpres::presentation::parse_presentation;
///
/// let p = parse_presentation("u1 u2 u3 | u1 u2 = u3^2").unwrap();
/// let e = Embedding { ambient_rank: 2, images: vec![vec![2, 0], vec![0, 2], vec![1, 1]] };
/// let c = hilbert_basis_normality(&e, &p).unwrap();
/// assert!(c.normal);
/// assert_eq!(c.cone.hilbert_basis.len(), 3);
/// ```
pub fn hilbert_basis_normality(e: &Embedding, p: &Presentation) -> Result<NormalityCertificate, OracleError> {
    if !e.satisfies(p) {
        return Err(OracleError::InvalidEmbedding);
    }
    let cone = cone_data(e)?;
    if !cone.pointed {
        return Ok(NormalityCertificate {
            normal: false,
            cone,
            outside: None,
        });
    }
    let w = grading(&cone.facets, cone.rank);
    let mut outside = None;
    for h in &cone.hilbert_basis {
        if !is_member(h, &cone.generator_images, &cone.facets, &w, DEFAULT_MEMBERSHIP_BUDGET)? {
            outside = Some(h.clone());
            break;
        }
    }
    Ok(NormalityCertificate {
        normal: outside.is_none(),
        cone,
        outside,
    })
}

/// Why the oracle rejects normality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum OracleRejection {
    /// The group of fractions has torsion, so the algebra is not a domain.
    Torsion { torsion: Vec<u64> },
    /// The cone contains a line, so the monoid has nontrivial units.
    NotPointed,
    /// A generator maps to the identity of the group of fractions although
    /// it is not the identity of the presented monoid.
    TrivialGenerator { generator: usize },
    /// A point of `cone ∩ group` outside the monoid.
    Gap { point: Vector },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleNormality {
    pub normal: bool,
    pub rejection: Option<OracleRejection>,
    pub cone: Option<ConeData>,
}

/// Oracle verdict for a presentation, through its group of fractions. The
/// presentation need not be normalized. This speaks about the cancellative
/// quotient; pair it with [`congruence::cancellativity_witness`].
///
/// ```
/// use monpres::oracle::oracle_normality;
/// use monpres::presentation::parse_presentation;
///
/// let p = parse_presentation("u1 u2 u3 u4 | u1 u2 = u3^2 ; u1 u3 = u4^2").unwrap();
/// assert!(!oracle_normality(&p).unwrap().normal);
/// ```
pub fn oracle_normality(p: &Presentation) -> Result<OracleNormality, OracleError> {
    let g = group_of_fractions(p)?;
    if !g.torsion.is_empty() {
        return Ok(OracleNormality {
            normal: false,
            rejection: Some(OracleRejection::Torsion { torsion: g.torsion }),
            cone: None,
        });
    }
    let e = embed_via_fractions(p)?;
    if let Some(generator) = e.images.iter().position(|v| v.iter().all(|&x| x == 0)) {
        return Ok(OracleNormality {
            normal: false,
            rejection: Some(OracleRejection::TrivialGenerator { generator }),
            cone: None,
        });
    }
    let cert = hilbert_basis_normality(&e, p)?;
    let rejection = if !cert.cone.pointed {
        Some(OracleRejection::NotPointed)
    } else {
        cert.outside.clone().map(|point| OracleRejection::Gap { point })
    };
    Ok(OracleNormality {
        normal: cert.normal,
        rejection,
        cone: Some(cert.cone),
    })
}
