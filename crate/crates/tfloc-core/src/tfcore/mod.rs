//! Time-frequency shifts, STFT analysis/synthesis, ambiguity functions,
//! symplectic DFT, window gallery, and mixed norms on Z_N x Z_N.

mod grid;
mod signal;
mod stft;

pub use grid::{
    mixed_norm, symplectic_dft, zero_set, GridFunction, MixedNormSpec, ZeroSet, ZERO_SET_TAU,
};
pub(crate) use grid::roots_of_unity;
pub(crate) use signal::check_dim;
pub use signal::{symplectic_pairing, window_gallery, PhasePoint, Signal, WindowKind};
pub use stft::{cross_ambiguity, stft, stft_synthesis, tf_shift, translate_span_rank};
