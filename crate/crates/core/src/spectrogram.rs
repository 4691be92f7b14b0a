//! Log-mel spectrogram frontend.
//!
//! Frames are hop-aligned: frame `i` covers `[i*hop/sr, (i+1)*hop/sr)` and
//! the STFT uses centered reflect padding, so a 20 s clip at 16 kHz with
//! hop 512 yields exactly 625 frames.

use ndarray::Array2;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::audio::AudioClip;
use crate::error::{Error, Result};

/// Spectrogram geometry and filterbank parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrogramConfig {
    pub n_mels: usize,
    pub fmin: f64,
    pub fmax: f64,
    pub sample_rate: u32,
    pub window_len: usize,
    pub hop: usize,
    pub fft_len: usize,
    pub log_floor: f64,
}

impl Default for SpectrogramConfig {
    fn default() -> Self {
        SpectrogramConfig {
            n_mels: 229,
            fmin: 20.0,
            fmax: 8000.0,
            sample_rate: 16000,
            window_len: 2048,
            hop: 512,
            fft_len: 2048,
            log_floor: 1e-5,
        }
    }
}

impl SpectrogramConfig {
    /// Narrow-band preset for speech runs: 30-300 Hz with a long zero-padded
    /// DFT so the 229 mel triangles still each cover at least one bin.
    pub fn speech() -> Self {
        SpectrogramConfig {
            fmin: 30.0,
            fmax: 300.0,
            fft_len: 32768,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_mels < 1 {
            return Err(Error::InvalidConfig("n_mels must be >= 1".into()));
        }
        if !(self.fmin > 0.0 && self.fmin < self.fmax) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < fmin < fmax, got fmin={} fmax={}",
                self.fmin, self.fmax
            )));
        }
        if self.fmax > self.sample_rate as f64 / 2.0 {
            return Err(Error::InvalidConfig(format!(
                "fmax {} above Nyquist {}",
                self.fmax,
                self.sample_rate as f64 / 2.0
            )));
        }
        if !(self.hop <= self.window_len && self.window_len <= self.fft_len) {
            return Err(Error::InvalidConfig(format!(
                "need hop <= window_len <= fft_len, got {} / {} / {}",
                self.hop, self.window_len, self.fft_len
            )));
        }
        if self.hop == 0 {
            return Err(Error::InvalidConfig("hop must be positive".into()));
        }
        if !(self.log_floor > 0.0) {
            return Err(Error::InvalidConfig("log_floor must be positive".into()));
        }
        Ok(())
    }

    /// Number of STFT frames produced for a clip of `n_samples`.
    pub fn frame_count(&self, n_samples: usize) -> usize {
        n_samples.div_ceil(self.hop)
    }

    pub fn n_bins(&self) -> usize {
        self.fft_len / 2 + 1
    }
}

/// A log-mel spectrogram: frame-major `F x n_mels` values plus the timing
/// metadata needed to map frames back to seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub values: Array2<f32>,
    pub hop: usize,
    pub sample_rate: u32,
}

impl Spectrogram {
    pub fn n_frames(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_mels(&self) -> usize {
        self.values.ncols()
    }

    /// Seconds spanned by one hop.
    pub fn frame_period(&self) -> f64 {
        self.hop as f64 / self.sample_rate as f64
    }
}

/// Index into a signal with symmetric reflection at the borders, so any
/// amount of padding is defined even for very short signals.
fn reflect_index(i: isize, n: usize) -> usize {
    debug_assert!(n > 0);
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut j = i.rem_euclid(period);
    if j >= n as isize {
        j = period - j;
    }
    j as usize
}

/// Periodic Hann window of length `n`.
fn hann_window(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect()
}

/// Short-time Fourier transform magnitudes.
///
/// Returns an `F x (fft_len/2 + 1)` matrix with `F = ceil(len/hop)`;
/// frame `i` is the Hann-windowed slice centered on sample `i*hop`
/// (reflect-padded at the edges), zero-padded to `fft_len`.
pub fn stft(clip: &AudioClip, cfg: &SpectrogramConfig) -> Result<Array2<f64>> {
    cfg.validate()?;
    if clip.is_empty() {
        return Err(Error::InvalidInput("empty clip".into()));
    }
    let n = clip.len();
    let frames = cfg.frame_count(n);
    let bins = cfg.n_bins();
    let window = hann_window(cfg.window_len);
    let half = cfg.window_len as isize / 2;
    let samples = clip.samples();

    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(cfg.fft_len);
    let mut out = Array2::<f64>::zeros((frames, bins));
    let mut buf = vec![Complex::new(0.0, 0.0); cfg.fft_len];
    for f in 0..frames {
        let center = (f * cfg.hop) as isize;
        for (k, w) in window.iter().enumerate() {
            let src = reflect_index(center - half + k as isize, n);
            buf[k] = Complex::new(samples[src] as f64 * w, 0.0);
        }
        for slot in buf.iter_mut().skip(cfg.window_len) {
            *slot = Complex::new(0.0, 0.0);
        }
        fft.process(&mut buf);
        for (b, row) in out.row_mut(f).iter_mut().enumerate().take(bins) {
            *row = buf[b].norm();
        }
    }
    Ok(out)
}

/// Frequency in Hz -> HTK mel scale.
pub fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

/// HTK mel scale -> frequency in Hz.
pub fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Center frequencies (Hz) of the `n_mels` triangular filters: equally
/// spaced on the mel scale strictly between `fmin` and `fmax`.
pub fn filter_centers_hz(cfg: &SpectrogramConfig) -> Vec<f64> {
    let lo = hz_to_mel(cfg.fmin);
    let hi = hz_to_mel(cfg.fmax);
    (1..=cfg.n_mels)
        .map(|i| mel_to_hz(lo + (hi - lo) * i as f64 / (cfg.n_mels + 1) as f64))
        .collect()
}

/// Triangular mel filterbank, `n_mels x (fft_len/2 + 1)`, each row
/// peak-normalized to 1. Rows are ordered by ascending center frequency.
pub fn mel_filterbank(cfg: &SpectrogramConfig) -> Result<Array2<f64>> {
    cfg.validate()?;
    let bins = cfg.n_bins();
    let lo = hz_to_mel(cfg.fmin);
    let hi = hz_to_mel(cfg.fmax);
    let edges: Vec<f64> = (0..cfg.n_mels + 2)
        .map(|i| mel_to_hz(lo + (hi - lo) * i as f64 / (cfg.n_mels + 1) as f64))
        .collect();
    let bin_hz = cfg.sample_rate as f64 / cfg.fft_len as f64;

    let mut fb = Array2::<f64>::zeros((cfg.n_mels, bins));
    for m in 0..cfg.n_mels {
        let (left, center, right) = (edges[m], edges[m + 1], edges[m + 2]);
        let mut peak = 0.0f64;
        for b in 0..bins {
            let f = b as f64 * bin_hz;
            let w = if f > left && f < center {
                (f - left) / (center - left)
            } else if f >= center && f < right {
                (right - f) / (right - center)
            } else {
                0.0
            };
            fb[[m, b]] = w;
            peak = peak.max(w);
        }
        if peak <= 0.0 {
            return Err(Error::DegenerateFilterbank(format!(
                "filter {m} (center {center:.2} Hz) covers no FFT bin; \
                 increase fft_len or reduce n_mels"
            )));
        }
        fb.row_mut(m).mapv_inplace(|w| w / peak);
    }
    Ok(fb)
}

/// Full frontend: STFT magnitudes through the mel filterbank, then
/// `ln(. + log_floor)`. Deterministic for a fixed input.
pub fn log_mel(clip: &AudioClip, cfg: &SpectrogramConfig) -> Result<Spectrogram> {
    let mags = stft(clip, cfg)?;
    let fb = mel_filterbank(cfg)?;
    let mel = mags.dot(&fb.t());
    let values = mel.mapv(|v| (v + cfg.log_floor).ln() as f32);
    Ok(Spectrogram {
        values,
        hop: cfg.hop,
        sample_rate: cfg.sample_rate,
    })
}
