use std::ops::Range;

use num_complex::Complex64;

use super::{build_phydyas, Constellation, CpOfdm, Oqam, SymbolGrid, WaveformConfig, WaveformKind};
use crate::dsp::ComplexSignal;
use crate::error::Result;

/// Either chain behind one interface, as seen by the experiment code.
#[derive(Clone, Debug)]
pub enum Transceiver {
    CpOfdm(CpOfdm),
    Oqam(Oqam),
}

impl Transceiver {
    /// Builds the chain for `cfg`; OQAM uses the PHYDYAS prototype.
    pub fn new(cfg: &WaveformConfig) -> Result<Self> {
        Ok(match cfg.kind {
            WaveformKind::CpOfdm => Transceiver::CpOfdm(CpOfdm::new(cfg)?),
            WaveformKind::Oqam => {
                let proto = build_phydyas(cfg.fft_size, cfg.overlap)?;
                Transceiver::Oqam(Oqam::new(cfg, &proto)?)
            }
        })
    }

    pub fn config(&self) -> &WaveformConfig {
        match self {
            Transceiver::CpOfdm(c) => c.config(),
            Transceiver::Oqam(c) => c.config(),
        }
    }

    pub fn constellation(&self) -> Constellation {
        match self {
            Transceiver::CpOfdm(_) => Constellation::Qam64,
            Transceiver::Oqam(_) => Constellation::Pam8,
        }
    }

    /// Mean power of one constellation point: `sigma^2`, or `sigma^2 / 2` per PAM slot.
    pub fn slot_power(&self) -> f64 {
        self.config().symbol_power / self.slots_per_qam_symbol()
    }

    /// Converts per-slot error power to the complex-equivalent scale
    /// (two PAM slots rebuild one QAM symbol).
    pub fn slots_per_qam_symbol(&self) -> f64 {
        match self {
            Transceiver::CpOfdm(_) => 1.0,
            Transceiver::Oqam(_) => 2.0,
        }
    }

    pub fn modulate(&self, grid: &SymbolGrid) -> Result<ComplexSignal> {
        match self {
            Transceiver::CpOfdm(c) => c.modulate(grid),
            Transceiver::Oqam(c) => c.modulate(grid),
        }
    }

    /// Demodulator outputs on all subcarriers; OQAM outputs are real.
    pub fn demodulate_bins(&self, y: &[Complex64], symbols: Range<usize>) -> Result<Vec<Vec<Complex64>>> {
        match self {
            Transceiver::CpOfdm(c) => c.demodulate_bins(y, symbols),
            Transceiver::Oqam(c) => Ok(c
                .demodulate_bins(y, symbols)?
                .into_iter()
                .map(|row| row.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
                .collect()),
        }
    }

    pub fn demodulate(&self, y: &[Complex64], n_symbols: usize) -> Result<SymbolGrid> {
        match self {
            Transceiver::CpOfdm(c) => c.demodulate(y, n_symbols),
            Transceiver::Oqam(c) => c.demodulate(y, n_symbols),
        }
    }

    pub fn stride(&self) -> usize {
        self.config().stride()
    }

    /// Samples read by the receiver for `symbols`, relative to the frame origin.
    pub fn analysis_span(&self, symbols: Range<usize>) -> Range<usize> {
        let cfg = self.config();
        let s = cfg.stride();
        match cfg.kind {
            WaveformKind::CpOfdm => symbols.start * s + cfg.cp_len..symbols.end * s,
            WaveformKind::Oqam => {
                let pulse = cfg.overlap * cfg.fft_size;
                symbols.start * s..(symbols.end.max(1) - 1) * s + pulse
            }
        }
    }

    /// Offset from the frame origin after which every sample is a
    /// steady-state superposition of all overlapping symbols.
    pub fn ramp_up(&self) -> usize {
        let cfg = self.config();
        match cfg.kind {
            WaveformKind::CpOfdm => 0,
            WaveformKind::Oqam => cfg.overlap * cfg.fft_size - cfg.stride(),
        }
    }

    /// Symbols `n` whose analysis span lies inside `[lo, hi)` (frame-relative).
    pub fn symbols_within(&self, lo: usize, hi: usize) -> Range<usize> {
        let s = self.stride();
        let first_start = self.analysis_span(0..1).start;
        let span_len = self.analysis_span(0..1).len();
        let first = if lo <= first_start { 0 } else { (lo - first_start).div_ceil(s) };
        if hi < first_start + span_len {
            return first..first;
        }
        let last = (hi - first_start - span_len) / s + 1;
        first..last.max(first)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_and_windows() {
        let cp = Transceiver::new(&WaveformConfig::cp_ofdm(256, 18, vec![1], 1.0)).unwrap();
        assert_eq!(cp.analysis_span(0..1), 18..274);
        assert_eq!(cp.analysis_span(2..4), 566..1096);
        assert_eq!(cp.symbols_within(0, 274 * 3), 0..3);
        assert_eq!(cp.symbols_within(19, 274 * 3), 1..3);

        let oq = Transceiver::new(&WaveformConfig::oqam(256, 4, vec![1], 1.0)).unwrap();
        assert_eq!(oq.analysis_span(0..1), 0..1024);
        assert_eq!(oq.analysis_span(1..3), 128..1280);
        assert_eq!(oq.ramp_up(), 896);
        assert_eq!(oq.symbols_within(0, 1024), 0..1);
        assert_eq!(oq.symbols_within(1, 1280), 1..3);
        assert_eq!(oq.symbols_within(0, 1000), 0..0);
        for n in oq.symbols_within(300, 5000) {
            let s = oq.analysis_span(n..n + 1);
            assert!(s.start >= 300 && s.end <= 5000);
        }
    }

    #[test]
    fn slot_power() {
        let oq = Transceiver::new(&WaveformConfig::oqam(64, 4, vec![1], 2.0)).unwrap();
        assert_eq!(oq.slot_power(), 1.0);
        assert_eq!(oq.constellation(), Constellation::Pam8);
    }
}
