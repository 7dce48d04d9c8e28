//! Edge-disjoint S-path packing in Eulerian networks with exact dual certificates.

pub mod cuts;
pub mod dual;
pub mod error;
pub mod expansion;
pub mod generate;
pub mod io;
pub mod lp;
pub mod matching;
pub mod multiflow;
pub mod network;
pub mod rational;
pub mod solvers;
pub mod theorems;

pub use error::{Error, Result};
pub use rational::Rational;
