//! Decision procedures for distributivity of finite join-semilattices.
//!
//! The crate is organised bottom-up:
//!
//! - [`order`]: posets, bound sets, join-semilattices, sub-join-semilattices
//!   and canonical codes.
//! - [`distributivity`]: exhaustive checkers for the GS, K, ND (= H = LR),
//!   B and S(n) notions together with replayable failure witnesses.
//! - [`ideals`]: ideals, the families Id, Id plus the empty set, Id_fp, and the
//!   ideal-lattice characterizations.
//! - [`arrow`]: the arrow operation, its totality and subalgebra reports.
//! - [`atlas`]: exhaustive enumeration of small join-semilattices up to
//!   isomorphism, classification, chain verification and countermodel search.
//! - [`format`] and [`corpus`]: the line-oriented model format, built-in
//!   models and corpus runs with expectations.

pub mod arrow;
pub mod atlas;
pub mod corpus;
pub mod distributivity;
mod error;
pub mod format;
pub mod ideals;
pub mod order;
mod set;

pub use error::{Error, Result};
pub use order::{BoundOp, JoinSemilattice, Poset, DEFAULT_CAP};
pub use set::{ElemSet, ElementId, MAX_ELEMENTS};
