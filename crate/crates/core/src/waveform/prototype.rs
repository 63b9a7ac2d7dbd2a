use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Frequency-sampling coefficients `G_0 .. G_{K-1}` of a PHYDYAS prototype.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhydyasCoefficients {
    pub values: [f64; 4],
}

/// The published K = 4 set: `G_0 = 1, G_1 = 0.971960, G_2 = 1/sqrt(2), G_3 = 0.235147`.
pub const PHYDYAS_K4: PhydyasCoefficients = PhydyasCoefficients {
    values: [1.0, 0.971960, std::f64::consts::FRAC_1_SQRT_2, 0.235147],
};

impl PhydyasCoefficients {
    pub fn overlap(&self) -> usize {
        self.values.len()
    }

    /// `G_{|k|}`, zero outside `|k| <= K - 1`.
    pub fn sample(&self, k: i64) -> f64 {
        self.values.get(k.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }
}

/// Real, symmetric prototype filter of length `K * M`.
///
/// Coefficients are scaled to energy `M`: with PAM symbols of variance
/// `sigma^2 / 2` every `M/2` samples, each active subcarrier then carries
/// `sigma^2` per sample, the same as an unnormalized CP-OFDM synthesis. The
/// receiver divides by [`PrototypeFilter::energy`], so an isolated symbol is
/// recovered with unit gain.
#[derive(Clone, Debug, PartialEq)]
pub struct PrototypeFilter {
    coeffs: Vec<f64>,
    overlap: usize,
    fft_size: usize,
    energy: f64,
}

impl PrototypeFilter {
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `sum g[k]^2`; equals `M` by construction.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Sample index about which the filter is symmetric (`K M / 2`).
    pub fn center(&self) -> f64 {
        (self.coeffs.len() / 2) as f64
    }
}

/// PHYDYAS prototype with the published coefficients. Only `K = 4` is supported.
pub fn build_phydyas(fft_size: usize, overlap: usize) -> Result<PrototypeFilter> {
    if overlap != PHYDYAS_K4.overlap() {
        return Err(Error::Config(format!(
            "PHYDYAS coefficients are only defined for K = 4, got K = {overlap}"
        )));
    }
    build_phydyas_with(fft_size, &PHYDYAS_K4)
}

/// Frequency-sampling synthesis from an arbitrary coefficient set:
/// `g[k] = G_0 + 2 sum_{l>=1} (-1)^l G_l cos(2 pi l k / (K M))`, with
/// `g[0] = 0` so the `K M` taps are symmetric about `K M / 2`.
pub fn build_phydyas_with(fft_size: usize, coeffs: &PhydyasCoefficients) -> Result<PrototypeFilter> {
    if fft_size < 2 || !fft_size.is_power_of_two() {
        return Err(Error::Config(format!("fft_size must be a power of two, got {fft_size}")));
    }
    let overlap = coeffs.overlap();
    let len = overlap * fft_size;
    let mut g: Vec<f64> = (0..len)
        .map(|k| {
            let tail: f64 = (1..overlap)
                .map(|l| {
                    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                    2.0 * sign * coeffs.values[l] * (2.0 * PI * (l * k) as f64 / len as f64).cos()
                })
                .sum();
            coeffs.values[0] + tail
        })
        .collect();
    g[0] = 0.0;
    let raw_energy: f64 = g.iter().map(|v| v * v).sum();
    let scale = (fft_size as f64 / raw_energy).sqrt();
    g.iter_mut().for_each(|v| *v *= scale);
    let energy = g.iter().map(|v| v * v).sum();
    Ok(PrototypeFilter {
        coeffs: g,
        overlap,
        fft_size,
        energy,
    })
}
