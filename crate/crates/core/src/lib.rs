//! Exact enumeration of uniform Kirchhoff graphs and their tiling algebra.
//!
//! Everything here is pure computation on owned values and runs without `std`;
//! the `kgraph` crate adds file formats, parallel drivers and the command line.
#![no_std]

extern crate alloc;

pub mod enumerator;
pub mod exactalg;
pub mod tiling;
pub mod vgraph;
