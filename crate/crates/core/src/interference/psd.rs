use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{InterferenceTable, TableLabel};
use crate::dsp::integrate_with;
use crate::error::{arg_err, Result};
use crate::waveform::{PhydyasCoefficients, WaveformConfig, WaveformKind, PHYDYAS_K4};

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// PSD of one CP-OFDM subcarrier at `f` subcarrier spacings, for a
/// rectangular window of `window_ratio = (M + N_CP) / M` symbol lengths.
/// Unit integral over `f`.
pub fn psd_cpofdm(f: f64, window_ratio: f64) -> f64 {
    let s = sinc(window_ratio * f);
    window_ratio * s * s
}

/// Continuous frequency response of the prototype:
/// `G(f) = sum_{|k| < K} G_|k| sinc(K (f - k / K))`.
pub fn phydyas_response(f: f64, coeffs: &PhydyasCoefficients) -> f64 {
    let k_ov = coeffs.overlap() as i64;
    let kf = k_ov as f64;
    (-(k_ov - 1)..k_ov)
        .map(|k| coeffs.sample(k) * sinc(kf * f - k as f64))
        .sum()
}

/// `|G(f)|^2` of the K = 4 PHYDYAS prototype, scaled to unit integral.
pub fn psd_phydyas(f: f64) -> f64 {
    phydyas_psd_with(f, &PHYDYAS_K4)
}

fn phydyas_psd_with(f: f64, coeffs: &PhydyasCoefficients) -> f64 {
    let kf = coeffs.overlap() as f64;
    // the shifted sincs are orthogonal, each with integral 1/K
    let norm: f64 = (-(coeffs.overlap() as i64 - 1)..coeffs.overlap() as i64)
        .map(|k| coeffs.sample(k).powi(2))
        .sum::<f64>()
        / kf;
    phydyas_response(f, coeffs).powi(2) / norm
}

/// Spectrum model of an interfering user.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PsdModel {
    CpOfdm { window_ratio: f64 },
    Phydyas,
}

impl PsdModel {
    /// CP-inclusive window for CP-OFDM, PHYDYAS for OQAM.
    pub fn for_config(cfg: &WaveformConfig) -> Self {
        match cfg.kind {
            WaveformKind::CpOfdm => PsdModel::CpOfdm {
                window_ratio: (cfg.fft_size + cfg.cp_len) as f64 / cfg.fft_size as f64,
            },
            WaveformKind::Oqam => PsdModel::Phydyas,
        }
    }

    pub fn eval(&self, f: f64) -> f64 {
        match *self {
            PsdModel::CpOfdm { window_ratio } => psd_cpofdm(f, window_ratio),
            PsdModel::Phydyas => psd_phydyas(f),
        }
    }

    pub fn label(&self) -> TableLabel {
        match self {
            PsdModel::CpOfdm { .. } => TableLabel::PsdCpOfdm,
            PsdModel::Phydyas => TableLabel::PsdPhydyas,
        }
    }

    /// Points inside `[lo, hi]` where the integrand has nulls or kinks.
    fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let step = match *self {
            PsdModel::CpOfdm { window_ratio } => 1.0 / window_ratio,
            PsdModel::Phydyas => 1.0 / PHYDYAS_K4.overlap() as f64,
        };
        let mut pts = vec![lo];
        let mut k = (lo / step).floor() + 1.0;
        while k * step < hi {
            pts.push(k * step);
            k += 1.0;
        }
        pts.push(hi);
        pts
    }
}

/// `I(l) = int_{l-1/2}^{l+1/2} Phi(f) df` for `l` in `[-l_max, l_max]`.
pub fn psd_table(model: PsdModel, l_max: usize) -> Result<InterferenceTable> {
    if l_max < 1 {
        return arg_err("l_max must be at least 1");
    }
    let mut values = Vec::with_capacity(2 * l_max + 1);
    for l in -(l_max as i64)..=l_max as i64 {
        let lo = l as f64 - 0.5;
        let hi = l as f64 + 0.5;
        let pts = model.breakpoints(lo, hi);
        let mut v = 0.0;
        for w in pts.windows(2) {
            // absolute floor far below the -120 dB reporting floor
            v += integrate_with(|f| model.eval(f), w[0], w[1], 1e-10, 1e-18)?;
        }
        values.push(v);
    }
    InterferenceTable::new(model.label(), l_max, values, None)
}
