//! Files, drawings, parallel drivers and the command line for `kgraph-core`.

pub mod cli;
pub mod document;
pub mod matrix;
pub mod parallel;
pub mod render;
