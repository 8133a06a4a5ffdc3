//! Bipartite entanglement of formation and the genuine-tripartite witness.

mod eof;
pub mod rng;
mod witness;

pub use eof::{entropy_of_squeezing, eof, eof_pair, log_negativity, EofResult};
pub use witness::{
    biseparable_bound, delta_e, tripartite_optimize, tripartite_witness, OptimizedWitness, TripartiteWitness,
    WeightVector, DEFAULT_SAMPLES,
};
