//! Self-similar group actions on finite graphs.
//!
//! The crate covers the action and cocycle calculus on finite and infinite
//! paths, the inverse semigroup of triples `(α, g, β)`, and the groupoid of
//! germs together with its corona-valued lag cocycle.

pub mod graph;
pub mod group;
pub mod path;
pub mod verdict;
pub mod action;
pub mod build;
pub mod corona;
pub mod semigroup;
pub mod germ;
pub mod spec_file;
pub mod cli;
