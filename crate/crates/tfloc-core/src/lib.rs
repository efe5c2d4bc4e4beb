//! Finite-dimensional laboratory for time-frequency localization operators
//! on Z_N: STFT analysis and synthesis, localization operators, spreading
//! representations, the Berezin transform with its injectivity diagnostics,
//! and symbol recovery.

pub mod berezin;
pub mod error;
pub mod io;
pub mod oper;
pub mod quantize;
pub mod tfcore;

pub use error::{Result, TflocError};
