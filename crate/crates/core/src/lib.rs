#![allow(clippy::result_large_err, clippy::needless_range_loop)]

//! Exact intersection-lattice toolkit: cone chambers cut out by negative
//! curves, inflation moves, certificate replay and planning.

pub mod chambers;
pub mod document;
pub mod error;
pub mod lattice;
pub mod models;
pub mod moves;
pub mod perturb;
pub mod planner;
pub mod rational;

pub use error::{Error, Result};
pub use lattice::{ClassVector, IntersectionLattice, SquareMatrix};
pub use rational::Rational;
