//! Normality and divisor class groups of commutative monoids given by
//! monomial presentations with at most two relations.

pub mod classgroup;
pub mod criteria;
pub mod divisors;
pub mod embedding;
pub mod linalg;
pub mod oracle;
pub mod presentation;
pub mod sweep;

pub use linalg::{AbelianGroupInvariants, IntMatrix, SmithForm};
pub use presentation::{normalize, parse_presentation, Normalized, Presentation, Relation, Trail, Word};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/presentations.md")]
    mod presentations {}
    #[doc = include_str!("../../../book/src/normality.md")]
    mod normality {}
    #[doc = include_str!("../../../book/src/class-groups.md")]
    mod class_groups {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
