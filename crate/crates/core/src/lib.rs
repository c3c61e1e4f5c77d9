//! Chirplet transform (CT) and synchrosqueezed chirplet transform (SCT).
//!
//! The crate covers the whole analysis chain for multicomponent signals whose
//! instantaneous frequencies may cross:
//!
//! - [`window`], [`grid`], [`signal`]: analytic window banks, the discrete
//!   time-frequency-chirp-rate (TFC) grid and the input signal type.
//! - [`transform`]: the discrete CT, the STFT baseline and the TF projection.
//! - [`analytic`]: closed forms and quadrature used as oracles.
//! - [`reassign`], [`sst`]: reassignment operators, the squeezing step and the
//!   first/second order SST baselines.
//! - [`ridge`]: ridge extraction by spectral clustering of the squeezed volume.
//! - [`reconstruct`]: per-frame mixing-system mode reconstruction and SST band
//!   reconstruction.
//! - [`synth`], [`metrics`]: test-signal synthesis and evaluation metrics.
//! - [`experiment`]: the crossing-chirp and random-scene experiments.
//!
//! Frame-level loops run on rayon when the `parallel` feature is enabled (the
//! default) and fall back to plain iterators otherwise.

pub mod analytic;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod metrics;
pub mod par;
pub mod reassign;
pub mod reconstruct;
pub mod ridge;
pub mod signal;
pub mod sst;
pub mod synth;
pub mod transform;
pub mod window;

pub use error::{Error, Result};
pub use grid::TfcGrid;
pub use num_complex::Complex64;
pub use signal::Signal;
pub use window::{WindowBank, WindowFamily};
