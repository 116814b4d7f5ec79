//! Exact symbolic computation for commutative automorphic formal loops.

pub mod bruck;
pub mod calts;
pub mod verify;
pub mod engines;
pub mod env;
pub mod lie;
pub mod linear;
pub mod rational;
pub mod series;

pub use rational::Rational;
pub use series::{BiSeries, SeriesError};
