use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveformKind {
    CpOfdm,
    Oqam,
}

impl std::fmt::Display for WaveformKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WaveformKind::CpOfdm => "CP-OFDM",
            WaveformKind::Oqam => "OFDM/OQAM",
        })
    }
}

/// Modulation parameters of one user.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveformConfig {
    pub kind: WaveformKind,
    /// Subcarriers per symbol, also the FFT size.
    pub fft_size: usize,
    /// Cyclic prefix length in samples (CP-OFDM only).
    pub cp_len: usize,
    /// Prototype overlapping factor K (OQAM only).
    pub overlap: usize,
    /// Active subcarrier indices, ascending.
    pub active: Vec<usize>,
    /// Variance of the complex-equivalent data symbols (linear).
    pub symbol_power: f64,
    /// Subcarrier spacing in Hz.
    pub subcarrier_spacing: f64,
}

impl WaveformConfig {
    pub fn cp_ofdm(fft_size: usize, cp_len: usize, active: Vec<usize>, symbol_power: f64) -> Self {
        Self {
            kind: WaveformKind::CpOfdm,
            fft_size,
            cp_len,
            overlap: 1,
            active,
            symbol_power,
            subcarrier_spacing: 15e3,
        }
    }

    pub fn oqam(fft_size: usize, overlap: usize, active: Vec<usize>, symbol_power: f64) -> Self {
        Self {
            kind: WaveformKind::Oqam,
            fft_size,
            cp_len: 0,
            overlap,
            active,
            symbol_power,
            subcarrier_spacing: 15e3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.fft_size;
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::Config(format!("fft_size must be a power of two >= 2, got {m}")));
        }
        if self.overlap == 0 {
            return Err(Error::Config("overlap factor must be >= 1".into()));
        }
        if self.kind == WaveformKind::CpOfdm && self.cp_len >= m {
            return Err(Error::Config(format!("cp_len {} must be below fft_size {m}", self.cp_len)));
        }
        if let Some(&bad) = self.active.iter().find(|&&i| i >= m) {
            return Err(Error::Config(format!("active subcarrier {bad} outside [0, {m})")));
        }
        if self.active.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("active subcarriers must be strictly ascending".into()));
        }
        if !(self.symbol_power >= 0.0) || !self.symbol_power.is_finite() {
            return Err(Error::Config(format!("symbol power {} is not a finite non-negative value", self.symbol_power)));
        }
        if !(self.subcarrier_spacing > 0.0) {
            return Err(Error::Config("subcarrier spacing must be positive".into()));
        }
        Ok(())
    }

    /// Samples between consecutive symbols: `M + N_CP` or `M / 2`.
    pub fn stride(&self) -> usize {
        match self.kind {
            WaveformKind::CpOfdm => self.fft_size + self.cp_len,
            WaveformKind::Oqam => self.fft_size / 2,
        }
    }

    /// Samples spanned by `n` symbols, including filter tails.
    pub fn burst_len(&self, n: usize) -> usize {
        match self.kind {
            WaveformKind::CpOfdm => n * self.stride(),
            WaveformKind::Oqam if n == 0 => 0,
            WaveformKind::Oqam => (n - 1) * self.stride() + self.overlap * self.fft_size,
        }
    }

    pub fn is_active(&self, m: usize) -> bool {
        self.active.binary_search(&m).is_ok()
    }

    pub fn with_power(&self, symbol_power: f64) -> Self {
        Self {
            symbol_power,
            ..self.clone()
        }
    }
}
