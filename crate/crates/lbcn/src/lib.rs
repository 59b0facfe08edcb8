//! Simulator, transcript files, statistics and command-line front end for
//! the lattice randomness beacon in `lbcn-core`.

pub mod cli;
pub mod config;
pub mod sim;
pub mod stats;
pub mod transcript;
