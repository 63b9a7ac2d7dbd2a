//! Transmit and receive chains for CP-OFDM and OFDM/OQAM.

mod config;
mod cpofdm;
mod grid;
mod mapping;
mod oqam;
mod prototype;
mod transceiver;

pub use config::{WaveformConfig, WaveformKind};
pub use cpofdm::{cpofdm_demodulate, cpofdm_modulate, CpOfdm};
pub use grid::{SymbolGrid, SymbolKind};
pub use mapping::{demap_grid, gray_decode, gray_encode, map_grid, Constellation};
pub use oqam::{oqam_demodulate, oqam_modulate, oqam_phase, Oqam};
pub use transceiver::Transceiver;
pub use prototype::{build_phydyas, build_phydyas_with, PhydyasCoefficients, PrototypeFilter, PHYDYAS_K4};
