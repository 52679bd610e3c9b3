//! Numerical thermodynamics of two-mode squeezing.
//!
//! A pair of bosonic modes `(k, -k)` driven by a Bogoliubov transformation
//! with real coefficients `alpha = cosh z`, `beta = sinh z` is treated as a
//! unitary work protocol. This crate computes
//!
//! * the squeeze operator on a truncated two-mode Fock space, both as a
//!   closed-form amplitude and through an independent matrix-exponential
//!   oracle ([`fock`]);
//! * squeezing parameters and asymptotic frequencies for an expanding
//!   conformally flat universe, a uniformly accelerated observer and an
//!   eternal black hole ([`spacetime`]);
//! * thermal initial states together with the mean, adiabatic and
//!   inner-friction work ([`thermo`]);
//! * two-point-measurement entropy statistics, the Crooks relation, the
//!   classical and quantum relative entropies ([`fluctuation`]).
//!
//! The crate is `no_std` and only needs an allocator.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod fluctuation;
pub mod fock;
pub mod linalg;
mod math;
pub mod spacetime;
pub mod thermo;
pub mod tolerances;

pub use error::{Error, Result};
pub use fock::{
    enumerate_basis, squeeze_amplitude, squeeze_generator, squeeze_operator_oracle,
    transition_kernel, BlockLayout, BlockOperator, JointFockIndex, SqueezeParameter,
    TransitionKernel, TruncationSpec,
};
pub use spacetime::{BlackHoleParams, CosmologyParams, Scenario, SqueezeChannel, UnruhParams};
pub use thermo::{ThermalDistribution, WorkReport};
