//! Quiver-theoretical solutions of the braid equation over a finite vertex
//! set, together with the algebraic structures they generate: groupoids and
//! free words, braided groupoids and their 1-cocycle data, matched pairs,
//! rack bundles, and exact-rational linearizations (face models).
//!
//! Everything here is finite and deterministic: values are immutable after
//! construction, operations are pure, and every "list all X" operation emits
//! a canonical order so serialized output is byte-stable.

pub mod braided;
pub mod doc;
pub mod fixtures;
pub mod groupoid;
pub mod linear;
pub mod matched;
pub mod quiver;
pub mod rack;
pub mod search;
pub mod solution;
pub mod word;

use thiserror::Error;

/// Structured failure of a validation or construction step.
///
/// `rule` names the violated axiom or precondition; `witness` carries the
/// offending elements, rendered with their public identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule}: {witness}")]
pub struct Violation {
    pub rule: String,
    pub witness: String,
}

impl Violation {
    pub fn new(rule: impl Into<String>, witness: impl Into<String>) -> Self {
        Violation { rule: rule.into(), witness: witness.into() }
    }
}

pub type Check<T> = Result<T, Violation>;
