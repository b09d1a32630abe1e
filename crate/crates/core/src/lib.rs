//! Exact cake cutting on `[0, 1]`.
//!
//! Valuations are piecewise linear densities with rational breakpoints and all
//! arithmetic is exact. The crate covers query-based mechanisms, revelation
//! mechanisms for piecewise uniform agents, equilibria of the Length Game, and
//! linear programs for optimal and fair allocations.

pub mod allocation;
pub mod equilibrium;
pub mod error;
pub mod generate;
pub mod interval;
pub mod lp;
pub mod mechanism;
pub mod rational;
pub mod report;
pub mod rw;
pub mod scenario;
pub mod uniform;
pub mod valuation;

pub use error::{CakeError, Result};
pub use rational::Rational;
