//! Sandwich equivalence of submonoids of `Self(ω)`: finite descriptors,
//! the type classifier for preorder monoids, explicit sandwich witnesses and
//! a finite-window verifier.

pub mod classifier;
pub mod cli;
pub mod descriptors;
pub mod maps;
pub mod suite;
pub mod verifier;
pub mod witnesses;
