//! Deterministic engine over typed method-evolution graphs.
//!
//! The crate is `no_std` (with `alloc`) and carries no IO. It covers:
//!
//! * [`graph`]: the typed heterogeneous graph, its evidence records, the
//!   deterministic edge post-checker and the method-level projection.
//! * [`alias`]: surface-form normalization and longest-match resolution of
//!   method mentions.
//! * [`retrieval`]: BM25, reciprocal rank fusion, localized context retrieval
//!   and the three-stage duplicate-risk detector.
//! * [`lineage`]: SGT-MCTS lineage reconstruction plus beam and random-walk
//!   baselines.
//! * [`evaluator`]: five-dimension idea scoring, cross-dimensional
//!   aggregation, fallback and one-sided adjudication.
//! * [`generator`]: structural gap extraction, strategy selection and
//!   certificate-backed proposals.
//! * [`bench`]: lineage metrics and synthetic ground-truth instances.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod alias;
pub mod bench;
pub mod evaluator;
pub mod generator;
pub mod graph;
pub mod lineage;
pub mod retrieval;
pub mod rng;
pub mod text;

#[cfg(test)]
pub(crate) mod testutil;

pub use alias::{AliasRegistry, Mention};
pub use graph::{
    BottleneckDimension, Direction, Edge, EdgeKey, EdgeType, EvidenceRecord, Graph, GraphBuilder, GraphError, Node,
    NodeId,
};
