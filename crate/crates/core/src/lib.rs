//! Exact generalized inverses in unital rings.
//!
//! The crate computes inner and reflexive inverses, decides Green's
//! preorders and relations, and computes the inverse of `a` along an element
//! `d` (the unique `b` with `d·a·b = d = b·a·d` and `b ≤_H d`), including the
//! case `d = p·m·q` and closed forms for `2×2` block matrices. Every fast path
//! can be checked against brute-force oracles on enumerable finite rings; see
//! [`verify`].

pub mod block;
pub mod error;
pub mod green;
mod linalg;
pub mod literal;
pub mod mary;
pub mod regularity;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
pub use green::{GreenKind, GreenWitness};
pub use literal::{parse_element, parse_ring};
pub use regularity::{RegularityCertificate, Strategy};
pub use ring::{Cardinality, Element, Ring, RingKind};
