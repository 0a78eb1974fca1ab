//! Search engine and verification toolkit for Halma-family board puzzles:
//! Chinese Checkers, Halma, Grasshopper and rotated-Checkers armies on
//! square-lattice boards.
//!
//! The crate finds shortest cooperative games and shortest army transfers,
//! proves optimality by pruned exhaustive search, and replays published
//! solutions in the standard cell-path notation.

#![warn(clippy::all)]

pub mod board;
pub mod bounds;
pub mod game;
pub mod transfer;
pub mod movegen;
pub mod metrics;
pub mod notation;

pub use board::{Board, Cell, CellSet, GamePos, Player, Preset, RuleSet, Transform};
