//! Exact-arithmetic workbench for rich lines on Cartesian grids `A × A`.
//!
//! The crate enumerates k-rich lines, implements the star composition
//! `f * g = f⁻¹ ∘ g` with its dyadic product `L * L`, detects and
//! decomposes parallel and star families, builds commutator graphs, and
//! provides the additive-combinatorics and counting-lemma tooling used to
//! check all of it against brute-force oracles.

pub mod additive;
pub mod error;
pub mod families;
pub mod gen;
pub mod grid;
pub mod lemmas;
pub mod line;
pub mod rational;
pub mod report;
pub mod star;
pub mod verify;

pub use error::{Error, Result};
pub use families::{FamilyDecomposition, LineSet};
pub use grid::{GroundSet, RichLineRecord};
pub use line::{FixedPoint, Line, PointR};
pub use rational::Rational;
