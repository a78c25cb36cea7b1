//! Closure-operator algebra on finite orders, and a modular logic-program
//! semantics built on top of it.
//!
//! The crate is layered. [`order`] holds the finite carriers (table posets
//! and lattices, a bit-mask powerset, signed-literal sets). [`ops`] wraps
//! endofunctions on those carriers and provides the combinators `plus`,
//! `inflate`, `star` and their order-dual counterparts, together with
//! checkers for the factorization, sandwich and common-fixedpoint laws.
//! [`lab`] enumerates function spaces and runs exhaustive censuses of those
//! laws. [`logic`] and [`semantics`] apply the machinery to rule programs:
//! grounding, least-model / three-valued / well-founded evaluation, modular
//! versus monolithic comparison, and residual programs. [`corpus`] generates
//! the deterministic program family the compare suites run on.
//!
//! Everything is deterministic: carriers enumerate in a fixed order, sets
//! are B-tree backed, and the corpus generator is a fixed-seed PRNG.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod corpus;
pub mod error;
pub mod lab;
pub mod logic;
pub mod ops;
pub mod order;
pub mod semantics;

pub use error::{Error, Result};
