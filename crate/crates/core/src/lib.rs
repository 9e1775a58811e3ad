//! Solvers for the (cyclic) d-distance b-matching problem.
//!
//! The crate is `no_std` (with `alloc`) and purely algorithmic: instance
//! representation and feasibility checking, a min-cost-flow engine, the
//! decomposition approximation algorithms, exact solvers (exhaustive search
//! and an exact rational simplex for the natural LP relaxation), algorithms
//! that choose an ordering of the left node class, and instance generators.
//! File formats and the command-line front end live in `distmatch-cli`.
//!
//! Node indices are 0-based throughout the library API.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod approx;
pub mod exact;
pub mod gen;
pub mod instance;
pub mod netflow;
pub mod permute;
pub mod rational;

pub use instance::{
    check_feasible, Bound, Edge, FeasibilityReport, Instance, InstanceError, Matching, Side,
    Violation, ViolationKind,
};
pub use rational::Rational;
