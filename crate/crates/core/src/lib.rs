//! Exact similarity solutions of the one-phase Stefan problem with a latent
//! heat that depends on the position and velocity of the front,
//! `L = γ s^β ṡ^δ`.
//!
//! The front coefficient ξ solves a transcendental equation in Kummer's
//! function. Solutions can be mapped between boundary-condition regimes
//! and checked numerically.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod kummer;
pub mod model;
pub mod config;
pub mod solver;
pub mod solution;
pub mod equivalence;
pub mod verify;
pub mod tables;
pub mod cli;

pub use error::{Error, Result, Violation};
pub use model::{BcKind, BoundaryCondition, LatentHeatLaw, MaterialParams, ProblemSpec, RawSpec};
pub use solution::SimilaritySolution;
pub use solver::RootReport;
