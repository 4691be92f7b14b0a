use crate::error::{Error, Result};

/// A mono audio clip: samples in [-1, 1] at a fixed sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    samples: Vec<f32>,
    sample_rate: u32,
}

impl AudioClip {
    /// Build a clip, validating the invariants: positive sample rate and
    /// every sample finite and within [-1, 1].
    pub fn new(samples: Vec<f32>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        for (i, &s) in samples.iter().enumerate() {
            if !s.is_finite() || !(-1.0..=1.0).contains(&s) {
                return Err(Error::InvalidInput(format!(
                    "sample {i} = {s} outside [-1, 1]"
                )));
            }
        }
        Ok(AudioClip {
            samples,
            sample_rate,
        })
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Duration in seconds.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// A sub-clip covering samples `[start, start + len)`.
    pub fn crop(&self, start: usize, len: usize) -> Result<Self> {
        let end = start
            .checked_add(len)
            .filter(|&e| e <= self.samples.len())
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "crop [{start}, {start}+{len}) out of bounds for {} samples",
                    self.samples.len()
                ))
            })?;
        Ok(AudioClip {
            samples: self.samples[start..end].to_vec(),
            sample_rate: self.sample_rate,
        })
    }
}
