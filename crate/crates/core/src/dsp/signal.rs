use num_complex::Complex64;

use crate::error::{arg_err, Result};

/// Complex baseband samples together with the rate context they were
/// produced at: `fft_size` samples per useful symbol at `subcarrier_spacing` Hz.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSignal {
    samples: Vec<Complex64>,
    fft_size: usize,
    subcarrier_spacing: f64,
}

impl ComplexSignal {
    pub fn new(samples: Vec<Complex64>, fft_size: usize, subcarrier_spacing: f64) -> Result<Self> {
        if let Some(k) = samples.iter().position(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return arg_err(format!("sample {k} is not finite"));
        }
        Ok(Self {
            samples,
            fft_size,
            subcarrier_spacing,
        })
    }

    pub fn zeros(len: usize, fft_size: usize, subcarrier_spacing: f64) -> Self {
        Self {
            samples: vec![Complex64::new(0.0, 0.0); len],
            fft_size,
            subcarrier_spacing,
        }
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn subcarrier_spacing(&self) -> f64 {
        self.subcarrier_spacing
    }

    /// Sampling rate in Hz (`M * delta_f`).
    pub fn sample_rate(&self) -> f64 {
        self.fft_size as f64 * self.subcarrier_spacing
    }

    /// Sum of squared magnitudes.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    /// Mean power per sample over `range`.
    pub fn mean_power(&self, range: std::ops::Range<usize>) -> f64 {
        let n = range.len();
        if n == 0 {
            return 0.0;
        }
        self.samples[range].iter().map(|s| s.norm_sqr()).sum::<f64>() / n as f64
    }

    /// Adds `other * gain` starting at sample `offset`, growing `self` if needed.
    pub fn add_at(&mut self, other: &[Complex64], offset: usize, gain: f64) {
        let end = offset + other.len();
        if end > self.samples.len() {
            self.samples.resize(end, Complex64::new(0.0, 0.0));
        }
        for (dst, src) in self.samples[offset..end].iter_mut().zip(other) {
            *dst += src * gain;
        }
    }

    /// Scales every sample by `gain`.
    pub fn scale(&mut self, gain: f64) {
        for s in &mut self.samples {
            *s *= gain;
        }
    }
}

impl AsRef<[Complex64]> for ComplexSignal {
    fn as_ref(&self) -> &[Complex64] {
        &self.samples
    }
}
