//! Enforcement of commutative and anti-commutative function diagram
//! constraints over an in-memory relational store.
//!
//! A constraint states that two composition chains of functions agree on
//! every object of their common domain (`f₁ ∘ … ∘ fₙ = g₁ ∘ … ∘ gₘ`), or
//! that they never do. [`engine`] checks mutations incrementally through the
//! store's reverse link indexes, [`oracle`] re-checks everything by brute
//! force, and [`codegen`] emits the equivalent event-handler and trigger
//! code.

pub mod cli;
pub mod codegen;
pub mod dsl;
pub mod engine;
pub mod model;
pub mod oracle;
pub mod store;
