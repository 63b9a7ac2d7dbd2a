use std::ops::Range;

use num_complex::Complex64;

use super::{SymbolGrid, SymbolKind, WaveformConfig, WaveformKind};
use crate::dsp::{ComplexSignal, DftPlan};
use crate::error::{arg_err, Error, Result};

/// CP-OFDM modulator/demodulator for one configuration.
///
/// Symbol `n` occupies samples `[n S, (n+1) S)` with `S = M + N_CP`; the
/// first `N_CP` samples repeat the last `N_CP` of the body. The receiver
/// drops the prefix and applies an `M`-point DFT scaled by `1/M`.
#[derive(Clone, Debug)]
pub struct CpOfdm {
    cfg: WaveformConfig,
    plan: DftPlan,
}

impl CpOfdm {
    pub fn new(cfg: &WaveformConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.kind != WaveformKind::CpOfdm {
            return Err(Error::Config(format!("CP-OFDM chain given a {} configuration", cfg.kind)));
        }
        Ok(Self {
            cfg: cfg.clone(),
            plan: DftPlan::new(cfg.fft_size),
        })
    }

    pub fn config(&self) -> &WaveformConfig {
        &self.cfg
    }

    pub fn modulate(&self, grid: &SymbolGrid) -> Result<ComplexSignal> {
        let m = self.cfg.fft_size;
        let cp = self.cfg.cp_len;
        if grid.fft_size() != m {
            return arg_err(format!("grid has {} subcarriers, config has {m}", grid.fft_size()));
        }
        if grid.kind() != SymbolKind::Complex {
            return arg_err("CP-OFDM transmits complex (QAM) symbols");
        }
        let stride = self.cfg.stride();
        let mut out = vec![Complex64::new(0.0, 0.0); grid.n_symbols() * stride];
        let mut body = vec![Complex64::new(0.0, 0.0); m];
        for (n, chunk) in out.chunks_exact_mut(stride).enumerate() {
            body.copy_from_slice(grid.row(n));
            self.plan.inverse_unscaled(&mut body);
            chunk[..cp].copy_from_slice(&body[m - cp..]);
            chunk[cp..].copy_from_slice(&body);
        }
        ComplexSignal::new(out, m, self.cfg.subcarrier_spacing)
    }

    /// All `M` demodulator outputs for each symbol in `symbols`; `y[0]` is the
    /// first sample of symbol 0.
    pub fn demodulate_bins(&self, y: &[Complex64], symbols: Range<usize>) -> Result<Vec<Vec<Complex64>>> {
        let m = self.cfg.fft_size;
        let stride = self.cfg.stride();
        let needed = symbols.end * stride;
        if y.len() < needed {
            return arg_err(format!(
                "{} samples cannot hold {} CP-OFDM symbols ({needed} needed)",
                y.len(),
                symbols.end
            ));
        }
        let inv = 1.0 / m as f64;
        Ok(symbols
            .map(|n| {
                let start = n * stride + self.cfg.cp_len;
                let mut buf = y[start..start + m].to_vec();
                self.plan.forward(&mut buf);
                buf.iter_mut().for_each(|v| *v *= inv);
                buf
            })
            .collect())
    }

    /// Estimated grid; inactive subcarriers are set to zero.
    pub fn demodulate(&self, y: &[Complex64], n_symbols: usize) -> Result<SymbolGrid> {
        let bins = self.demodulate_bins(y, 0..n_symbols)?;
        let mut grid = SymbolGrid::zeros(n_symbols, self.cfg.fft_size, SymbolKind::Complex);
        for (n, row) in bins.iter().enumerate() {
            for &m in &self.cfg.active {
                grid.set(n, m, row[m]);
            }
        }
        Ok(grid)
    }
}

pub fn cpofdm_modulate(grid: &SymbolGrid, cfg: &WaveformConfig) -> Result<ComplexSignal> {
    CpOfdm::new(cfg)?.modulate(grid)
}

pub fn cpofdm_demodulate(y: &ComplexSignal, cfg: &WaveformConfig, n_symbols: usize) -> Result<SymbolGrid> {
    CpOfdm::new(cfg)?.demodulate(y.samples(), n_symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::RngStream;
    use crate::waveform::{map_grid, Constellation};
    use std::f64::consts::PI;

    fn random_grid(cfg: &WaveformConfig, n: usize, seed: u64) -> SymbolGrid {
        let mut rng = RngStream::new(seed, 0);
        let bits = rng.bits(n * cfg.active.len() * 6);
        map_grid(Constellation::Qam64, &bits, n, cfg.fft_size, &cfg.active, cfg.symbol_power).unwrap()
    }

    #[test]
    fn dc_subcarrier_gives_constant_signal() {
        let cfg = WaveformConfig::cp_ofdm(8, 2, vec![0], 1.0);
        let mut grid = SymbolGrid::zeros(1, 8, SymbolKind::Complex);
        grid.set(0, 0, Complex64::new(1.0, 0.0));
        let x = cpofdm_modulate(&grid, &cfg).unwrap();
        assert_eq!(x.len(), 10);
        assert!(x.samples().iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn prefix_repeats_tail() {
        let cfg = WaveformConfig::cp_ofdm(32, 6, (1..20).collect(), 1.0);
        let x = cpofdm_modulate(&random_grid(&cfg, 5, 3), &cfg).unwrap();
        let s = x.samples();
        for n in 0..5 {
            for k in 0..6 {
                assert_eq!(s[n * 38 + k], s[n * 38 + k + 32]);
            }
        }
    }

    #[test]
    fn matches_direct_synthesis() {
        let cfg = WaveformConfig::cp_ofdm(256, 18, (37..73).collect(), 1.0);
        let grid = random_grid(&cfg, 3, 11);
        let x = cpofdm_modulate(&grid, &cfg).unwrap();
        // x_n[k] = sum_m d_m[n] e^{j 2 pi m k / M}, k from -N_CP to M-1 relative to the body
        for n in 0..3 {
            for k in -18i64..256 {
                let direct: Complex64 = (0..256)
                    .map(|m| grid.get(n, m) * Complex64::from_polar(1.0, 2.0 * PI * (m as i64 * k) as f64 / 256.0))
                    .sum();
                let idx = (n * 274) as i64 + 18 + k;
                let got = x.samples()[idx as usize];
                assert!((got - direct).norm() < 1e-10 * 36f64.sqrt().max(direct.norm()), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn loopback_is_exact() {
        let cfg = WaveformConfig::cp_ofdm(256, 18, (37..73).collect(), 2.5);
        let grid = random_grid(&cfg, 20, 5);
        let chain = CpOfdm::new(&cfg).unwrap();
        let x = chain.modulate(&grid).unwrap();
        let est = chain.demodulate(x.samples(), 20).unwrap();
        for n in 0..20 {
            for m in 0..256 {
                assert!((est.get(n, m) - grid.get(n, m)).norm() <= 1e-9 * 2.5f64.sqrt());
            }
        }
    }

    #[test]
    fn all_ones_input_demodulates_to_dc() {
        let cfg = WaveformConfig::cp_ofdm(8, 2, (0..8).collect(), 1.0);
        let y = vec![Complex64::new(1.0, 0.0); 10];
        let chain = CpOfdm::new(&cfg).unwrap();
        let bins = chain.demodulate_bins(&y, 0..1).unwrap();
        assert!((bins[0][0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(bins[0][1..].iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn short_input_is_rejected() {
        let cfg = WaveformConfig::cp_ofdm(8, 2, vec![1], 1.0);
        let chain = CpOfdm::new(&cfg).unwrap();
        assert!(chain.demodulate(&[Complex64::new(0.0, 0.0); 19], 2).is_err());
    }

    #[test]
    fn real_grid_or_oqam_config_rejected() {
        let cfg = WaveformConfig::cp_ofdm(8, 2, vec![1], 1.0);
        let grid = SymbolGrid::zeros(1, 8, SymbolKind::Real);
        assert!(cpofdm_modulate(&grid, &cfg).is_err());
        let oq = WaveformConfig::oqam(8, 4, vec![1], 1.0);
        assert!(CpOfdm::new(&oq).is_err());
    }
}
