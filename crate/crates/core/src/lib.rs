pub mod counterexamples;
pub mod diagram;
pub mod error;
pub mod formula;
pub mod generator;
pub mod graph;
pub mod realize;
pub mod solvers;
pub mod subgraphs;

pub use diagram::{ChordDiagram, LevelMap, LevelRule, SpineInstance};
pub use error::{Error, Result};
pub use formula::{Assignment, Formula};
pub use graph::{CircleGraph, Vertex};
