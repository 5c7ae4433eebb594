//! A glass-box finite-domain constraint solver.
//!
//! The layers build on each other and each one is public:
//!
//! - [`ranges`]: immutable integer sets (closed interval lists, open
//!   interval lists with infinite bounds, bitsets).
//! - [`propagation`] and [`fdvar`]: variables, propagation chains, the
//!   `tell`/`prune` kernel and the undo trail.
//! - [`indexicals`]: a small rule language (`X in min(Y)..max(Y)`) compiled
//!   to propagators.
//! - [`constraints`]: the library of primitive constraints.
//! - [`search`]: labeling and branch-and-bound.
//! - [`model`]: model variables and linearization of arithmetic relations.
//! - [`cli`]: the `fdsolve` front end and the n-queens harness.

pub mod error;
pub mod fdvar;
pub mod propagation;
pub mod ranges;
pub mod indexicals;
pub mod constraints;
pub mod search;
pub mod model;
pub mod cli;
