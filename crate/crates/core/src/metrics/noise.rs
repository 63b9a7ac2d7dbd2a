use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::RunningStats;
use crate::dsp::Complex64;
use crate::error::{arg_err, Error, Result};

pub const MIN_NOISE_SAMPLES: usize = 10_000;

/// Largest `|rho(lag)|`, `lag >= 1`, still counted as white.
pub const WHITENESS_THRESHOLD: f64 = 0.05;

const MAX_BINS: usize = 4096;
/// 1 % point of the Kolmogorov distribution.
const KS_1PCT: f64 = 1.6276;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` increasing edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Freedman-Diaconis binning.
    pub fn freedman_diaconis(xs: &[f64]) -> Self {
        let mut sorted = xs.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let (lo, hi) = (sorted[0], sorted[n - 1]);
        let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
        let width = 2.0 * iqr / (n as f64).cbrt();
        let bins = if width > 0.0 && hi > lo {
            (((hi - lo) / width).ceil() as usize).clamp(1, MAX_BINS)
        } else {
            1
        };
        let step = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
        let edges: Vec<f64> = (0..=bins).map(|i| lo + step * i as f64).collect();
        let mut counts = vec![0u64; bins];
        for &x in &sorted {
            let i = (((x - lo) / step) as usize).min(bins - 1);
            counts[i] += 1;
        }
        Self { edges, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bin densities: `count / (n * width)`.
    pub fn density(&self) -> Vec<f64> {
        let n = self.total() as f64;
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, e)| c as f64 / (n * (e[1] - e[0])))
            .collect()
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}

/// One-sample Kolmogorov-Smirnov test against `N(0, variance)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub critical_1pct: f64,
    pub accepts: bool,
}

pub fn ks_gaussian(xs: &[f64], variance: f64) -> Result<KsResult> {
    if xs.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    if !(variance > 0.0 && variance.is_finite()) {
        return arg_err(format!("variance must be positive, got {variance}"));
    }
    let dist = Normal::new(0.0, variance.sqrt()).map_err(|e| Error::Argument(e.to_string()))?;
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let statistic = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = dist.cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let critical_1pct = KS_1PCT / n.sqrt();
    Ok(KsResult {
        statistic,
        critical_1pct,
        accepts: statistic <= critical_1pct,
    })
}

/// Distribution and second-order statistics of an interference sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseStats {
    pub samples: usize,
    /// `E|eta|^2`.
    pub variance: f64,
    pub variance_re: f64,
    pub variance_im: f64,
    pub histogram_re: Histogram,
    pub histogram_im: Histogram,
    /// KS test of the real part against the moment-matched Gaussian, on
    /// samples thinned by `ks_stride` so they are nearly independent.
    pub ks_re: KsResult,
    pub ks_stride: usize,
    /// KS statistic over all samples, ignoring their correlation.
    pub ks_re_all: f64,
    /// `(max_lag + 1)^2` matrix `C[i][j] = mean Re(eta[n+i] conj(eta[n+j]))`.
    pub covariance: Vec<Vec<f64>>,
    /// `|rho(lag)|` for `lag = 0..=max_lag`.
    pub autocorrelation: Vec<f64>,
    /// `max |rho(lag)|` over `lag >= 1`.
    pub whiteness: f64,
}

impl NoiseStats {
    pub fn is_white(&self) -> bool {
        self.whiteness < WHITENESS_THRESHOLD
    }
}

pub fn noise_statistics(eta: &[Complex64], max_lag: usize) -> Result<NoiseStats> {
    if eta.len() < MIN_NOISE_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_NOISE_SAMPLES,
            got: eta.len(),
        });
    }
    if max_lag == 0 || max_lag >= eta.len() / 2 {
        return arg_err(format!("max_lag must be in 1..{}", eta.len() / 2));
    }
    let re: Vec<f64> = eta.iter().map(|z| z.re).collect();
    let im: Vec<f64> = eta.iter().map(|z| z.im).collect();
    // zero-mean is imposed by the constellation symmetry
    let second = |xs: &[f64]| xs.iter().map(|x| x * x).collect::<RunningStats>().mean();
    let variance_re = second(&re);
    let variance_im = second(&im);
    let variance = variance_re + variance_im;

    let dim = max_lag + 1;
    let windows = eta.len() - max_lag;
    let mut covariance = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let c: f64 = (0..windows).map(|n| (eta[n + i] * eta[n + j].conj()).re).sum::<f64>() / windows as f64;
            covariance[i][j] = c;
            covariance[j][i] = c;
        }
    }

    let autocorrelation: Vec<f64> = (0..dim)
        .map(|lag| {
            let n = eta.len() - lag;
            let c: Complex64 = (0..n).map(|k| eta[k] * eta[k + lag].conj()).sum::<Complex64>() / n as f64;
            if variance > 0.0 {
                c.norm() / variance
            } else {
                0.0
            }
        })
        .collect();
    let whiteness = autocorrelation[1..].iter().copied().fold(0.0, f64::max);

    // first lag past which every |rho| stays below the whiteness threshold
    let ks_stride = autocorrelation
        .iter()
        .rposition(|&r| r >= WHITENESS_THRESHOLD)
        .map_or(1, |k| k + 1);
    let thinned: Vec<f64> = re.iter().step_by(ks_stride).copied().collect();
    let (ks_re, ks_re_all) = if variance_re > 0.0 {
        (ks_gaussian(&thinned, variance_re)?, ks_gaussian(&re, variance_re)?.statistic)
    } else {
        let rejected = KsResult {
            statistic: 1.0,
            critical_1pct: KS_1PCT / (thinned.len() as f64).sqrt(),
            accepts: false,
        };
        (rejected, 1.0)
    };

    Ok(NoiseStats {
        samples: eta.len(),
        variance,
        variance_re,
        variance_im,
        histogram_re: Histogram::freedman_diaconis(&re),
        histogram_im: Histogram::freedman_diaconis(&im),
        ks_re,
        ks_stride,
        ks_re_all,
        covariance,
        autocorrelation,
        whiteness,
    })
}
