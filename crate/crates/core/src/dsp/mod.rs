//! Numerical foundation: complex signals, DFTs, adaptive quadrature,
//! reproducible random streams and compensated summation.

mod dft;
mod quadrature;
mod rng;
mod signal;
mod sum;

pub use dft::{dft, idft, DftPlan};
pub use quadrature::{integrate, integrate_default, integrate_with, DEFAULT_REL_TOL};
pub use rng::RngStream;
pub use signal::ComplexSignal;
pub use sum::NeumaierSum;

pub use num_complex::Complex64;

/// `10 log10(x)`, floored at -120 dB so that zero never becomes -inf.
pub fn to_db(x: f64) -> f64 {
    const FLOOR_DB: f64 = -120.0;
    if x.is_nan() || x <= 0.0 {
        return FLOOR_DB;
    }
    (10.0 * x.log10()).max(FLOOR_DB)
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
