//! Exact arithmetic in the class-2 nilpotent quotient of a closed surface
//! group, its characteristic quotients `π/K` and `π/π^e K`, and the action
//! of Dehn twists on them.
//!
//! Words use `x7` / `X7` for a generator and its inverse, `w^k` for powers
//! (negative `k` allowed), `[u,v]` for `u⁻¹v⁻¹uv`, parentheses for grouping
//! and the keyword `relator` for `[x1,x2]...[x{2g-1},x{2g}]`.

pub mod collect;
pub mod elimination;
pub mod error;
mod json;
pub mod nil2;
pub mod quotient;
pub mod span;
pub mod twist;
pub mod verify;
pub mod word;

pub use elimination::{elimination_certificate, EliminationCertificate};
pub use error::{Error, Result};
pub use nil2::{Nil2Element, PairIndexSet};
pub use quotient::{intersection_pairing, Enumeration, ModKElement, QuotientElement, QuotientSpec};
pub use span::{general_power_span, gpower_span, PowerSpan};
pub use twist::{
    gamma_word, induced_quotient_permutation, is_well_defined, twist_table, CommutatorVector,
    InducedAction, QuotientAction, SimpleLoopCatalog, TwistName,
};
pub use word::{EndomorphismTable, Letter, SurfaceContext, Word};
