//! MCMC-based informed sampling for kinodynamic planning under
//! minimum-time double-integrator dynamics.

pub mod bench;
pub mod config;
pub mod error;
pub mod informed;
pub mod mtdi;
pub mod planner;
pub mod samplers;
pub mod state;

pub use error::{Error, Result};
pub use informed::{CostModel, InformedProblem};
pub use state::{JointLimits, JointState, KinodynamicLimits, RandomSource, State};
