//! Exact computation in the ring of complex-valued, polynomial-growth
//! functions on the integer lattice `Z^d` (pointwise operations).
//!
//! The library provides a small symbolic expression language with exact
//! pointwise evaluation, growth certificates `|f(n)| <= M (1 + |n|_1)^m`
//! with structural inference and window audits, and the ring-theoretic
//! decision procedures built on them: divisibility with explicit cofactors,
//! invertibility, magnitude-max GCDs, ideal membership with cofactor
//! witnesses, principalization, fixed-maximal-ideal tests, a classifier for
//! principal prime ideals, zero-orders, and the dyadic mask family with its
//! associated ideal and multiplicative-set memberships.
//!
//! Everything decidable is decided in exact rational arithmetic; claims that
//! a finite scan cannot prove are reported with an explicit `window` scope
//! instead of being promoted to global statements.

pub mod config;
pub mod error;
pub mod expr;
pub mod growth;
pub mod ideals;
pub mod krull;
pub mod lattice;
pub mod number;
pub mod report;
pub mod ring;

pub use error::{Error, Result};
pub use expr::{eval, eval_approx, is_zero_at, zero_set, SeqExpr, ZeroSetInfo};
pub use lattice::{LatticePoint, Window};
pub use number::GaussianRational;
