//! Unary MITL over finite timed words.
//!
//! - [`formula`]: syntax, fragments, normal form, sizes
//! - [`oracle`]: reference semantics and first/last occurrence maps
//! - [`automaton`]: po2DTA model, validator and run engine
//! - [`lbcompile`] / [`bcompile`]: formula → po2DTA for the lower-bound and
//!   bounded fragments
//! - [`extract`]: po2DTA → formula over the end-marked alphabet
//! - [`analysis`]: bounded witness search and sampled equivalence
//! - [`benchgen`]: tiling-based hardness families

pub mod analysis;
pub mod automaton;
pub mod bcompile;
pub mod benchgen;
pub mod extract;
pub mod fixtures;
pub mod formula;
pub mod gen;
pub mod interval;
pub mod lbcompile;
pub mod oracle;
pub mod word;

pub use formula::{Formula, Modality};
pub use interval::Interval;
pub use word::{Rational, Symbol, TimedWord};
