//! Link-level simulator for the mutual interference between an incumbent
//! CP-OFDM user and an asynchronous adjacent-band secondary user running
//! either CP-OFDM or OFDM/OQAM with the PHYDYAS prototype filter.
//!
//! Two interference estimates are provided side by side: the PSD-based
//! leakage model, which integrates the interferer's spectrum over the
//! victim's subcarrier band, and a Monte-Carlo estimator that pushes the
//! interfering signal through the victim's actual demodulator.

pub mod dsp;
pub mod error;
pub mod interference;
pub mod metrics;
pub mod report;
pub mod scenario;
pub mod waveform;

pub use error::{Error, Result};
