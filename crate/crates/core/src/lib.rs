pub mod graph;
pub mod lp;
pub mod probing;
pub mod rng;
pub mod sampling;
pub mod benchmarks;
pub mod harness;
pub mod io;
