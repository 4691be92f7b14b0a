//! Audio-to-symbolic transcription toolkit.
//!
//! The pipeline: raw mono audio is converted to a log-mel spectrogram
//! ([`spectrogram`]), pushed through one of the onset/frame network variants
//! ([`models`], built from [`layers`] on top of the tape-based [`autodiff`]
//! engine), trained with the gradient recipe in [`trainer`], decoded to note
//! or phoneme events ([`decoder`]) and scored with note-level and
//! frame-level metrics or phoneme error rate ([`metrics`]).
//!
//! [`data`] holds the file formats (WAV, note TSV, phoneme labels), label
//! tensor construction and the additive synthesizer used to build small
//! corpora with exact ground truth. [`checkpoint`] is the flat named-array
//! container used for model snapshots and cached spectrograms.

pub mod audio;
pub mod autodiff;
pub mod checkpoint;
pub mod data;
pub mod decoder;
pub mod error;
pub mod layers;
pub mod metrics;
pub mod models;
pub mod spectrogram;
pub mod trainer;
pub mod verify;

pub use audio::AudioClip;
// pub use decoder::{NoteEvent, PhonemeSegment};
pub use error::{Error, Result};
pub use spectrogram::{Spectrogram, SpectrogramConfig};
