//! Verification toolkit for separating invariants of finite matrix groups.
//!
//! The crate computes with exact scalars only: prime fields, explicit
//! extensions GF(p^m), and the rationals. On top of that it builds finite
//! matrix groups by closure, classifies their elements by the codimension of
//! their fixed space, records the pairwise intersection dimensions of the
//! graph subspaces `{(u, σu)}`, and tests candidate invariants for point
//! separation against orbit ground truth over a ladder of field extensions.

pub mod catalog;
pub mod error;
pub mod expr;
pub mod field;
pub mod group;
pub mod io;
pub mod matrix;
pub mod points;
pub mod poly;
pub mod scheme;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use field::{AnyField, Field, FieldSpec, FiniteField, GaloisField, Gf, Rationals};
pub use group::FiniteMatrixGroup;
pub use matrix::Matrix;
pub use poly::MultiPoly;
pub use scheme::{build_scheme_graph, SchemeGraph};
pub use verify::{verify_separating, CandidateSet, SeparationVerdict, VerifyOptions};
