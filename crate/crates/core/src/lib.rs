//! Nonlocal advantage of quantum coherence (NAQC) for bipartite qudit states.
//!
//! The crate decides whether a `d × d` state lets Bob's conditional states,
//! steered by Alice's mutually-unbiased measurements, beat the single-party
//! coherence complementarity bound. Two frameworks are supported:
//!
//! - the averaged framework, where Bob measures coherence in every basis
//!   other than the one Alice used, normalized by `1/d`;
//! - the permutation framework, where each Alice setting is paired with one
//!   Bob basis through a bijection, maximized exactly as a linear
//!   assignment problem.
//!
//! Both criteria certify entanglement. The [`witness`] module compares them
//! with the tomographic, measurement and Fano estimates of the entropic
//! uncertainty relation.
//!
//! Supported dimensions are primes, for which the complete set of `d + 1`
//! mutually unbiased bases is built in [`mub`].

pub mod assignment;
pub mod coherence;
mod error;
pub mod io;
pub mod mub;
pub mod naqc;
pub mod qmath;
pub mod rng;
pub mod scan;
pub mod states;
pub mod witness;

pub use coherence::{bound_value, coherence, Bound, CoherenceMeasure};
pub use error::{Error, Result};
pub use mub::{generate_mubs, Basis, MubSet};
pub use naqc::{
    naqc_averaged, naqc_fixed_permutation, naqc_optimized, CostMatrix, Framework, NaqcReport,
    Permutation, PermutationDomain,
};
pub use qmath::{BipartiteState, ComplexMatrix, DensityMatrix, Subsystem};
pub use witness::{eur_witness, naqc_witness, WitnessReport};
