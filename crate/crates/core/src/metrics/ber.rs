use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{arg_err, Result};

const Z_95: f64 = 1.959_963_984_540_054;

/// Bit error rate with a 95 % Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerResult {
    pub ber: f64,
    pub errors: u64,
    pub bits: u64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl BerResult {
    pub fn from_counts(errors: u64, bits: u64) -> Self {
        if bits == 0 {
            return Self {
                ber: 0.0,
                errors,
                bits,
                ci_low: 0.0,
                ci_high: 1.0,
            };
        }
        let n = bits as f64;
        let p = errors as f64 / n;
        let z2 = Z_95 * Z_95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z_95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        Self {
            ber: p,
            errors,
            bits,
            ci_low: (center - half).max(0.0).min(p),
            ci_high: (center + half).min(1.0).max(p),
        }
    }

    /// True when the two 95 % intervals intersect.
    pub fn overlaps(&self, other: &BerResult) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }
}

/// Bit error counts; mergeable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BerCounter {
    pub errors: u64,
    pub bits: u64,
}

impl BerCounter {
    pub fn add(&mut self, tx: &[u8], rx: &[u8]) -> Result<()> {
        if tx.len() != rx.len() {
            return arg_err(format!("bit streams differ in length: {} vs {}", tx.len(), rx.len()));
        }
        self.errors += tx.iter().zip(rx).filter(|(a, b)| a != b).count() as u64;
        self.bits += tx.len() as u64;
        Ok(())
    }

    pub fn merge(&mut self, other: &BerCounter) {
        self.errors += other.errors;
        self.bits += other.bits;
    }

    pub fn result(&self) -> BerResult {
        BerResult::from_counts(self.errors, self.bits)
    }
}

pub fn ber_empirical(tx_bits: &[u8], rx_bits: &[u8]) -> Result<BerResult> {
    let mut c = BerCounter::default();
    c.add(tx_bits, rx_bits)?;
    Ok(c.result())
}

/// Exact bit error probability of Gray-coded `levels`-PAM in real Gaussian
/// noise, `snr` = mean symbol energy over noise variance.
pub fn ber_awgn_pam(levels: usize, snr: f64) -> f64 {
    assert!(levels >= 2 && levels.is_power_of_two(), "levels must be a power of two");
    assert!(snr >= 0.0, "snr must be non-negative");
    let l = levels as f64;
    let bits = levels.trailing_zeros() as usize;
    let arg = (3.0 * snr / (2.0 * (l * l - 1.0))).sqrt();
    let mut total = 0.0;
    for k in 1..=bits {
        let w = 1usize << (k - 1);
        let count = levels - (levels >> k);
        let mut pk = 0.0;
        for i in 0..count {
            let a = i * w / levels;
            let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
            let weight = w as f64 - ((i * w) as f64 / l + 0.5).floor();
            pk += sign * weight * erfc((2 * i + 1) as f64 * arg);
        }
        total += pk / l;
    }
    (total / bits as f64).clamp(0.0, 0.5)
}

/// Gray 8-PAM bit error probability at `snr = E_s / sigma^2` (real).
pub fn ber_awgn_8pam(snr: f64) -> f64 {
    ber_awgn_pam(8, snr)
}

/// Gray 64-QAM bit error probability at `snr = E_s / N_0`; each rail is an
/// 8-PAM at the same ratio.
pub fn ber_awgn_64qam(snr: f64) -> f64 {
    ber_awgn_pam(8, snr)
}
