//! Exact lattice combinatorics for degree-1 del Pezzo surfaces.
//!
//! The Picard lattice of a degree-1 del Pezzo surface is `Z^{1,8}` with basis
//! `(L, E_1, ..., E_8)`. Its symmetries fixing the canonical class form `W(E8)`.
//! This crate provides:
//!
//! - [`lattice`]: the pairing, validated isometries, group closures and invariant ranks;
//! - [`curves`]: the 240 exceptional classes, their names and the Bertini involution;
//! - [`weyl`]: roots, reflections, element orders and the four order-3 classes;
//! - [`stars`]: star configurations (hexagons of curves with pairings 0, 2, 3), their
//!   pair types and invariant-star censuses;
//! - [`criteria`]: rationality and minimality tests that return replayable witnesses.
//!
//! All arithmetic is exact. Tables are built once and shared read-only.

pub mod criteria;
pub mod curves;
pub mod error;
pub mod lattice;
pub mod par;
pub mod stars;
pub mod weyl;

pub use error::{Error, Result};
pub use lattice::{pair, DivisorClass, GroupSpec, LatticeIsometry, Permutation};
