//! Executable machinery for graph products of groups.
//!
//! * [`graph_model`]: labelled graphs, links, joins, AP_n, cliques, full morphisms, isomorphism.
//! * [`reduction`]: positive and almost-positive reduction by collapsing join subgraphs.
//! * [`cores`]: weak and redundant vertices, minimal core, core, cyclic classes, extended core.
//! * [`extension_graph`]: finite approximations of the extension graph by star doubling.
//! * [`words`]: normal forms, cyclic reduction, factors, centralizers and tree actions.
//! * [`smallcancel`]: word constructors, capture families, formal-solution verification.
//! * [`droms`]: Droms graph recognition, decomposition and elementary-equivalence classes.
//! * [`cli`]: the `gp` command-line driver.

pub mod acceptance;
pub mod bitset;
pub mod catalog;
pub mod cli;
pub mod cores;
pub mod droms;
pub mod enumerate;
pub mod extension_graph;
pub mod error;
pub mod graph_model;
pub mod reduction;
pub mod smallcancel;
pub mod words;

pub use bitset::VSet;
pub use error::{GpError, Result};
pub use graph_model::{GroupLabel, LabelFlags, LabelKind, LabeledGraph, Morphism};
