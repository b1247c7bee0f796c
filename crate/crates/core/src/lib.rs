//! Random group presentations in the density model and the combinatorics of
//! their van Kampen diagrams.

pub mod bounds;
pub mod constructions;
pub mod dehn;
pub mod experiments;
pub mod diagram;
pub mod pieces;
pub mod presentation;
pub mod rounding;
pub mod words;
