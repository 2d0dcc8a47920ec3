//! Richest-neighbour clustering dynamics on finite lattices.
//!
//! Every vertex holding resource passes all of it to a richest vertex of its
//! closed neighbourhood; amounts arriving at the same vertex add up. The
//! crate simulates this process exactly, builds random planar minimum
//! spanning trees and their factor-2 scalings, and checks that
//! descendant-count initial data on such a forest drains entirely through
//! the roots: every fixed window ends up empty while the total is conserved.
//!
//! Module map:
//!
//! - [`lattice`]: boxes and tori, neighbourhoods, windows
//! - [`forest`]: edge weights, spanning forests, orientation, scaling
//! - [`init`]: initial configurations
//! - [`dynamics`]: routing, stepping, traces
//! - [`closed_form`]: leaf peeling and parent forwarding
//! - [`analysis`]: equivalence, escape, fixation, divergence, light cone
//! - [`output`]: CSV traces, PGM snapshots, digests
//! - [`cli`]: the `escapeflow` driver

pub mod analysis;
pub mod cli;
pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod forest;
pub mod init;
pub mod lattice;
pub mod output;
pub mod quantity;
pub mod seeds;

pub use error::{Error, Result};
pub use field::ResourceField;
pub use forest::{Forest, UnrootedForest};
pub use lattice::{LatticeSpec, Topology, Vertex};
pub use quantity::Quantity;
