//! Exact measure theory and Lebesgue integration over rational interval
//! systems and finite universes.

pub mod cli;
pub mod integral;
pub mod intervals;
pub mod measure;
pub mod simplefn;
pub mod structures;
pub mod xreal;
