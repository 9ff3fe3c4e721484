//! Exact-arithmetic toolkit for complete simplicial fans of smooth toric
//! varieties.
//!
//! Every predicate in this crate is decided over arbitrary-precision integers
//! and rationals; no floating point is involved anywhere. The crate covers:
//!
//! * [`lattice`] — primitive vectors, fraction-free determinants, Smith
//!   normal form;
//! * [`fan`] — fan validation, smoothness, completeness, walls with their
//!   integer relations, and an exact projectivity test with a re-verifiable
//!   support-function witness;
//! * [`divisor`] — torus-invariant divisors, the divisor class group in a
//!   fixed Smith basis, exact intersection numbers against curve classes;
//! * [`mori`] — curve classes of walls, generators and extremal rays of the
//!   Mori cone, lengths and contraction profiles of extremal rays;
//! * [`classify`] — fan isomorphism search with verifiable witnesses, and
//!   the decision procedure for which odd-dimensional fans carry a contact
//!   structure;
//! * [`builders`] — reference fans (projective spaces, products of lines,
//!   Hirzebruch surfaces, projectivized split bundles);
//! * [`cli`] — the fan-file format and the command-line entry points.

pub mod builders;
pub mod classify;
pub mod cli;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod lattice;
mod lp;
pub mod mori;

pub use error::{Error, Result};
