//! Integration of scalar and interval-valued functions with respect to
//! arbitrary non-additive set functions on finite ground spaces and on the
//! naturals, together with the set-function calculus (variation,
//! semivariation, atoms, property classification) and the inequality and
//! convergence harnesses built on top of the integrals.
//!
//! The ground spaces are kept decidable on purpose: finite spaces carry the
//! full power set as bitmasks, the countable space carries the algebra of
//! eventually-periodic subsets, and every function and set function is held
//! in a representation that can be evaluated in closed form. All operations
//! are pure and all values immutable, so everything here is safe to share
//! across threads.

pub mod analysis;
pub mod error;
pub mod func;
pub mod ground;
pub mod interval;
pub mod iv_integral;
pub mod partition;
pub mod rl_integral;
pub mod setfunc;

pub use error::{Error, Result};
pub use func::GroundFunction;
pub use ground::{EpSet, GroundSpace, MeasurableSet, SetCardinality};
pub use interval::Interval;
pub use iv_integral::{IvFunction, IvSetFunction};
pub use partition::{Partition, TaggedPartition};
pub use rl_integral::{IntegralReport, IntegralStatus};
pub use setfunc::SetFunction;
