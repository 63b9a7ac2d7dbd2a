//! Gray-mapped 64-QAM and 8-PAM constellations.
//!
//! 64-QAM is two independent Gray 8-PAM rails (three bits each), so both
//! users carry six bits per complex-equivalent symbol.

use num_complex::Complex64;

use super::{SymbolGrid, SymbolKind};
use crate::error::{arg_err, Result};

const PAM_LEVELS: usize = 8;
const PAM_BITS: usize = 3;
// mean of (2i - 7)^2 over i = 0..8
const PAM_MEAN_SQ: f64 = 21.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constellation {
    Qam64,
    Pam8,
}

impl Constellation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Constellation::Qam64 => 2 * PAM_BITS,
            Constellation::Pam8 => PAM_BITS,
        }
    }

    pub fn symbol_kind(self) -> SymbolKind {
        match self {
            Constellation::Qam64 => SymbolKind::Complex,
            Constellation::Pam8 => SymbolKind::Real,
        }
    }

    /// Maps bits (MSB first) to symbols of mean power `power`.
    pub fn map(self, bits: &[u8], power: f64) -> Result<Vec<Complex64>> {
        let bps = self.bits_per_symbol();
        if bits.len() % bps != 0 {
            return arg_err(format!("{} bits is not a multiple of {bps}", bits.len()));
        }
        let amp = (power / self.unit_mean_sq()).sqrt();
        Ok(bits
            .chunks_exact(bps)
            .map(|c| match self {
                Constellation::Pam8 => Complex64::new(pam_level(c) * amp, 0.0),
                Constellation::Qam64 => Complex64::new(pam_level(&c[..3]) * amp, pam_level(&c[3..]) * amp),
            })
            .collect())
    }

    /// Nearest-neighbour hard decisions for symbols of mean power `power`.
    pub fn demap(self, symbols: &[Complex64], power: f64) -> Vec<u8> {
        let amp = (power / self.unit_mean_sq()).sqrt();
        let inv = if amp > 0.0 { 1.0 / amp } else { 0.0 };
        let mut out = Vec::with_capacity(symbols.len() * self.bits_per_symbol());
        for s in symbols {
            push_pam_bits(s.re * inv, &mut out);
            if self == Constellation::Qam64 {
                push_pam_bits(s.im * inv, &mut out);
            }
        }
        out
    }

    fn unit_mean_sq(self) -> f64 {
        match self {
            Constellation::Qam64 => 2.0 * PAM_MEAN_SQ,
            Constellation::Pam8 => PAM_MEAN_SQ,
        }
    }
}

pub fn gray_encode(i: usize) -> usize {
    i ^ (i >> 1)
}

pub fn gray_decode(mut g: usize) -> usize {
    let mut i = g;
    while g > 1 {
        g >>= 1;
        i ^= g;
    }
    i
}

fn pam_level(bits: &[u8]) -> f64 {
    let word = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
    let index = gray_decode(word);
    (2 * index) as f64 - (PAM_LEVELS - 1) as f64
}

fn push_pam_bits(x: f64, out: &mut Vec<u8>) {
    let index = ((x + (PAM_LEVELS - 1) as f64) / 2.0).round().clamp(0.0, (PAM_LEVELS - 1) as f64) as usize;
    let word = gray_encode(index);
    for b in (0..PAM_BITS).rev() {
        out.push(((word >> b) & 1) as u8);
    }
}

/// Maps `bits` onto `n_symbols` x `active` of a fresh grid.
pub fn map_grid(
    constellation: Constellation,
    bits: &[u8],
    n_symbols: usize,
    fft_size: usize,
    active: &[usize],
    power: f64,
) -> Result<SymbolGrid> {
    let needed = n_symbols * active.len() * constellation.bits_per_symbol();
    if bits.len() != needed {
        return arg_err(format!("grid needs {needed} bits, got {}", bits.len()));
    }
    let symbols = constellation.map(bits, power)?;
    SymbolGrid::from_active(n_symbols, fft_size, constellation.symbol_kind(), active, &symbols)
}

/// Hard decisions on the active subcarriers of `grid`, symbol by symbol.
pub fn demap_grid(constellation: Constellation, grid: &SymbolGrid, active: &[usize], power: f64) -> Vec<u8> {
    constellation.demap(&grid.active_values(active), power)
}
