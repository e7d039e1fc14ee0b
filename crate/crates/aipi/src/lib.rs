//! Deterministic scoring engine for evidence-coded indicator datasets.
//!
//! The pipeline turns multi-coder indicator codes into per-subject and
//! per-provider score triples (evidence / known-only / optimistic) with
//! coverage intervals, inter-rater reliability statistics, rank-stability
//! analyses, and byte-reproducible versioned release directories.

pub mod canonical;
pub mod config;
pub mod error;
pub mod linkcheck;
pub mod merge;
pub mod model;
pub mod normalize;
pub mod parallel;
pub mod parse;
pub mod release;
pub mod reliability;
pub mod rng;
pub mod score;
pub mod sensitivity;
pub mod validate;

pub use error::Error;
