use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;

use super::{PrototypeFilter, SymbolGrid, SymbolKind, WaveformConfig, WaveformKind};
use crate::dsp::{ComplexSignal, DftPlan};
use crate::error::{arg_err, Error, Result};

/// Phase factor `theta_n[m] = j^(n+m)`.
///
/// Adjacent time-frequency slots differ by a quarter turn, which makes the
/// intrinsic interference purely imaginary at the receiver.
pub fn oqam_phase(n: usize, m: usize) -> Complex64 {
    match (n + m) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// OFDM/OQAM synthesis and analysis filter bank.
///
/// The pulse of symbol `n` starts at sample `n M / 2` and spans `K M`
/// samples; subcarrier `m` is modulated by `e^{j 2 pi m (k' - K M / 2) / M}`
/// where `k'` is the offset inside the pulse. Both directions use a
/// polyphase form: one `M`-point transform per symbol, then the prototype
/// applied to `K` periodic repetitions.
#[derive(Clone, Debug)]
pub struct Oqam {
    cfg: WaveformConfig,
    proto: PrototypeFilter,
    plan: DftPlan,
    // e^{-j 2 pi m c / M} for the pulse centre c
    center_phase: Vec<Complex64>,
}

impl Oqam {
    pub fn new(cfg: &WaveformConfig, proto: &PrototypeFilter) -> Result<Self> {
        cfg.validate()?;
        if cfg.kind != WaveformKind::Oqam {
            return Err(Error::Config(format!("OQAM chain given a {} configuration", cfg.kind)));
        }
        if proto.fft_size() != cfg.fft_size || proto.overlap() != cfg.overlap {
            return Err(Error::Config(format!(
                "prototype built for M={}, K={} but config has M={}, K={}",
                proto.fft_size(),
                proto.overlap(),
                cfg.fft_size,
                cfg.overlap
            )));
        }
        let m = cfg.fft_size;
        let c = proto.center();
        let center_phase = (0..m)
            .map(|i| Complex64::from_polar(1.0, -2.0 * PI * i as f64 * c / m as f64))
            .collect();
        Ok(Self {
            cfg: cfg.clone(),
            proto: proto.clone(),
            plan: DftPlan::new(m),
            center_phase,
        })
    }

    pub fn config(&self) -> &WaveformConfig {
        &self.cfg
    }

    pub fn prototype(&self) -> &PrototypeFilter {
        &self.proto
    }

    pub fn modulate(&self, grid: &SymbolGrid) -> Result<ComplexSignal> {
        let m = self.cfg.fft_size;
        if grid.fft_size() != m {
            return arg_err(format!("grid has {} subcarriers, config has {m}", grid.fft_size()));
        }
        if grid.kind() != SymbolKind::Real {
            return arg_err("OFDM/OQAM transmits real (PAM) symbols");
        }
        let g = self.proto.coefficients();
        let half = self.cfg.stride();
        let mut out = vec![Complex64::new(0.0, 0.0); self.cfg.burst_len(grid.n_symbols())];
        let mut periodic = vec![Complex64::new(0.0, 0.0); m];
        for n in 0..grid.n_symbols() {
            let row = grid.row(n);
            if row.iter().all(|v| v.re == 0.0) {
                continue;
            }
            for (i, slot) in periodic.iter_mut().enumerate() {
                *slot = oqam_phase(n, i) * self.center_phase[i] * row[i].re;
            }
            self.plan.inverse_unscaled(&mut periodic);
            let dst = &mut out[n * half..n * half + g.len()];
            for (k, (d, &gk)) in dst.iter_mut().zip(g).enumerate() {
                *d += periodic[k % m] * gk;
            }
        }
        ComplexSignal::new(out, m, self.cfg.subcarrier_spacing)
    }

    /// Real-valued estimates on all `M` subcarriers for each symbol in
    /// `symbols`; `y[0]` is the first sample of symbol 0's pulse.
    pub fn demodulate_bins(&self, y: &[Complex64], symbols: Range<usize>) -> Result<Vec<Vec<f64>>> {
        let m = self.cfg.fft_size;
        let g = self.proto.coefficients();
        let half = self.cfg.stride();
        if symbols.is_empty() {
            return Ok(Vec::new());
        }
        let needed = (symbols.end - 1) * half + g.len();
        if y.len() < needed {
            return arg_err(format!(
                "{} samples cannot cover the analysis window of OQAM symbol {} ({needed} needed)",
                y.len(),
                symbols.end - 1
            ));
        }
        let inv_energy = 1.0 / self.proto.energy();
        let mut folded = vec![Complex64::new(0.0, 0.0); m];
        Ok(symbols
            .map(|n| {
                folded.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
                let seg = &y[n * half..n * half + g.len()];
                for (k, (s, &gk)) in seg.iter().zip(g).enumerate() {
                    folded[k % m] += s * gk;
                }
                self.plan.forward(&mut folded);
                (0..m)
                    .map(|i| {
                        let v = folded[i] * self.center_phase[i].conj() * oqam_phase(n, i).conj();
                        v.re * inv_energy
                    })
                    .collect()
            })
            .collect())
    }

    /// Estimated real grid; inactive subcarriers are set to zero.
    pub fn demodulate(&self, y: &[Complex64], n_symbols: usize) -> Result<SymbolGrid> {
        let bins = self.demodulate_bins(y, 0..n_symbols)?;
        let mut grid = SymbolGrid::zeros(n_symbols, self.cfg.fft_size, SymbolKind::Real);
        for (n, row) in bins.iter().enumerate() {
            for &m in &self.cfg.active {
                grid.set(n, m, Complex64::new(row[m], 0.0));
            }
        }
        Ok(grid)
    }
}

pub fn oqam_modulate(grid: &SymbolGrid, cfg: &WaveformConfig, proto: &PrototypeFilter) -> Result<ComplexSignal> {
    Oqam::new(cfg, proto)?.modulate(grid)
}

pub fn oqam_demodulate(
    y: &ComplexSignal,
    cfg: &WaveformConfig,
    proto: &PrototypeFilter,
    n_symbols: usize,
) -> Result<SymbolGrid> {
    Oqam::new(cfg, proto)?.demodulate(y.samples(), n_symbols)
}
