//! Exact truncated power series and Riordan arrays over the rationals.
//!
//! [`series::TruncSeries`] is the arithmetic layer. [`pair::RiordanPair`]
//! holds a pair (g, f) with its group operations. [`production`] recovers A-
//! and Z-sequences two independent ways. [`constructions`] builds stochastic
//! arrays, pseudo-involutions and the subgroup family attached to one f.

pub mod cli;
pub mod constructions;
pub mod expr;
pub mod fixtures;
pub mod pair;
pub mod production;
pub mod rational;
pub mod render;
pub mod series;

pub use pair::{RiordanError, RiordanPair, Subgroup, TriMatrix};
pub use rational::Rational;
pub use series::{SeriesError, TruncSeries};
