//! Decentralized, scenario-adapted signaling for opportunistic spectrum
//! access.
//!
//! Opportunistic nodes sense which degrees of freedom (DoF) of an
//! N-dimensional observation space are occupied, then shape their
//! transmissions inside the orthogonal complement — the sensed noise
//! subspace. This crate implements the whole pipeline under sensing
//! uncertainty:
//!
//! - [`subspace`]: orthonormal bases, orthogonal projectors, SVD null
//!   spaces, rotations and chordal distances.
//! - [`scenario`]: ground-truth signal/noise partitions and the sensed,
//!   error-corrupted bases a node actually works with.
//! - [`signaling`]: the invariant shaping waveform (projector-column and
//!   total-least-squares routes), waveform books, PSD and z-plane
//!   diagnostics.
//! - [`end_to_end`]: pairwise transmitter/receiver mismatch geometry,
//!   matched-filter loss, SNR degradation and waveform-book detection.
//! - [`identification`]: receiver-side estimation of the effective noise
//!   subspace via Neyman–Pearson thresholding and ℓ₁ sparse recovery.
//! - [`concurrence`]: transmitter-side subspace agreement, noncooperative
//!   and cooperative (feedback-message) variants, plus consensus metrics.
//! - [`harness`]: seeded Monte Carlo experiments with CSV output.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run --example psd_nulls            # spectral nulls on occupied carriers
//! cargo run --example zero_map             # z-plane zeros of designed waveforms
//! cargo run --example tls_equivalence      # TLS route vs projector-column route
//! cargo run --example mismatch_loss_grid   # closed-form end-to-end energy loss
//! cargo run --example waveform_detection   # spectral-coherence book detection
//! cargo run --example receiver_roc         # Neyman–Pearson identification ROC
//! cargo run --example subspace_concurrence # noncoop vs cooperative agreement
//! cargo run --example consensus_chordal    # chordal-distance consensus
//! ```
//!
//! The `nullcast` binary drives the same experiments from a TOML config and
//! writes CSV; see the README for the schema.

pub mod concurrence;
pub mod end_to_end;
pub mod error;
pub mod harness;
pub mod identification;
pub mod scenario;
pub mod signaling;
pub mod stats;
pub mod subspace;

pub(crate) mod poly;

pub use error::{Error, Result};
