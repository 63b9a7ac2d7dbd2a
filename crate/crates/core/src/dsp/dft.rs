use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{arg_err, Result};

/// Forward DFT, `X[m] = sum_k x[k] e^{-j 2 pi k m / size}`.
pub fn dft(x: &[Complex64], size: usize) -> Result<Vec<Complex64>> {
    check_len(x, size)?;
    let mut buf = x.to_vec();
    DftPlan::new(size).forward(&mut buf);
    Ok(buf)
}

/// Inverse DFT including the `1/size` factor, so `idft(dft(x)) == x`.
pub fn idft(x: &[Complex64], size: usize) -> Result<Vec<Complex64>> {
    check_len(x, size)?;
    let mut buf = x.to_vec();
    DftPlan::new(size).inverse_unscaled(&mut buf);
    let inv = 1.0 / size as f64;
    buf.iter_mut().for_each(|v| *v *= inv);
    Ok(buf)
}

fn check_len(x: &[Complex64], size: usize) -> Result<()> {
    if size == 0 {
        return arg_err("DFT size must be positive");
    }
    if x.len() != size {
        return arg_err(format!("DFT of size {size} given {} samples", x.len()));
    }
    Ok(())
}

/// Planned forward/inverse transforms of one size, shareable across threads.
#[derive(Clone)]
pub struct DftPlan {
    size: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for DftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DftPlan").field("size", &self.size).finish()
    }
}

impl DftPlan {
    pub fn new(size: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            size,
            fwd: planner.plan_fft_forward(size),
            inv: planner.plan_fft_inverse(size),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// In-place `sum_k x[k] e^{-j 2 pi k m / N}`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.size);
        self.fwd.process(buf);
    }

    /// In-place `sum_m X[m] e^{+j 2 pi k m / N}` without the `1/N`.
    pub fn inverse_unscaled(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.size);
        self.inv.process(buf);
    }
}
