//! Coherence of quantum channels measured by the alpha-z Renyi relative
//! entropy.
//!
//! Matrices are dense and complex; channels are given by Kraus operators and
//! compared through their normalized Choi states. The crate is `no_std` with
//! `alloc`.

#![no_std]
// `!(x <= tol)` also rejects NaN, which is the point
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod coherence;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod optim;
pub mod quantum;
pub mod zoo;

pub use coherence::{
    check_additivity, coherence_channel, coherence_channel_z1, coherence_commutativity, coherence_state, coherence_state_z1, oracle_min_diag, oracle_sup_pure, AdditivityReport,
    Certificate, CoherenceResult, Method, OptimizerOptions,
};
pub use entropy::{d_alpha_z, d_alpha_z_channels, f_alpha_z, relative_entropy, Alpha, AlphaZ, DivergenceKernel, DivergenceValue, Regime};
pub use error::{Error, Result};
pub use linalg::{c64, ComplexMatrix};
pub use zoo::{make, reference_value, ChannelKind, Measure, NamedChannel};
pub use quantum::{choi_state, compose, dephase, dephasing_channel, ChoiState, DensityMatrix, KrausChannel, PureState};
