//! Generalized Hukuhara nabla calculus for fuzzy-number-valued functions on
//! time scales.

pub mod cli;
pub mod dsl;
pub mod error;
pub mod fuzzy;
pub mod nabla;
pub mod rules;
pub mod timescale;

pub use error::{Error, Result};
pub use fuzzy::{FuzzyNumber, GhCase, GhDiffResult, Interval};
pub use timescale::{Piece, PointClass, Side, SideClass, TimeScale};
