//! Connected-component knots of the graphical lasso path and the adaptive
//! `T_k` statistics built on them.
//!
//! The knots at which two previously disconnected groups of variables merge
//! are a pure function of the absolute sample correlations: sort the
//! off-diagonal `|S_ij|` in decreasing order and keep an entry only when `i`
//! and `j` are still in different components. No graphical lasso solver is
//! needed. On top of that sequence this crate computes
//! `T_k = n ρ̃_k (ρ̃_k − ρ̃_{k+1})` with exponential null p-values, the
//! single-linkage dendrogram whose merge heights coincide with the knots, the
//! closed-form null distribution of `√n |S_ij|`, and a seeded Monte Carlo
//! engine.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the parallel
//! simulation runner and the command-line interface live in the companion
//! `glasso-knots` crate.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod correlation;
pub mod error;
pub mod ingest;
pub mod knotpath;
pub mod montecarlo;
pub mod nulltheory;
pub mod quad;
pub mod rng;
pub mod slink;
pub mod special;
pub mod testing;
pub mod unionfind;

pub use correlation::{correlation_matrix, ordered_edges, CorrelationMatrix, Edge, OrderedEdges};
pub use error::{Error, Result};
pub use ingest::{augment_noise, standardize, subsample_rows, DataMatrix};
pub use knotpath::{components_at, knot_sequence, knot_sequence_bruteforce, Knot, KnotSequence};
pub use montecarlo::{
    generate, ks_distance, qq_points, replicate, run_sequential, summarize, KsResult, RepOutcome,
    Scenario, ScenarioKind, SimulationResult, StepSummary,
};
pub use nulltheory::{exp_survival, MillsBounds, NullMarginal};
pub use slink::{single_linkage, Dendrogram, Merge};
pub use testing::{p_values, sequential_stop, test_statistics, TestReport, TestStep};
