//! Temporal sequences of planar graphs: labeled graphs with strict and weak
//! edges, spherical embeddings, simultaneous-embedding analysis, the
//! village gadgets, and the reduction from 3-SAT built out of them.

pub mod combinators;
pub mod embedding;
pub mod export;
pub mod gadgets;
pub mod graph;
pub mod iso;
pub mod sat;
pub mod sequence;
pub mod verify;
pub mod village;
