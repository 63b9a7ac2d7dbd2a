use serde::{Deserialize, Serialize};

use crate::dsp::to_db;
use crate::error::{arg_err, Result};
use crate::waveform::SymbolGrid;

/// Normalized EVM as a power ratio `E|d_hat - d|^2 / E|d|^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvmResult {
    pub ratio: f64,
    pub db: f64,
    /// `(subcarrier, ratio)` for each active subcarrier.
    pub per_subcarrier: Vec<(usize, f64)>,
}

/// Error and reference power sums per subcarrier; mergeable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvmAccumulator {
    active: Vec<usize>,
    error: Vec<f64>,
    reference: Vec<f64>,
}

impl EvmAccumulator {
    pub fn new(active: &[usize]) -> Self {
        Self {
            active: active.to_vec(),
            error: vec![0.0; active.len()],
            reference: vec![0.0; active.len()],
        }
    }

    pub fn add(&mut self, estimated: &SymbolGrid, reference: &SymbolGrid) -> Result<()> {
        if estimated.n_symbols() != reference.n_symbols() || estimated.fft_size() != reference.fft_size() {
            return arg_err(format!(
                "grid shapes differ: {}x{} vs {}x{}",
                estimated.n_symbols(),
                estimated.fft_size(),
                reference.n_symbols(),
                reference.fft_size()
            ));
        }
        if let Some(&m) = self.active.iter().find(|&&m| m >= reference.fft_size()) {
            return arg_err(format!("active subcarrier {m} outside the grid"));
        }
        for n in 0..reference.n_symbols() {
            let (e_row, r_row) = (estimated.row(n), reference.row(n));
            for (i, &m) in self.active.iter().enumerate() {
                self.error[i] += (e_row[m] - r_row[m]).norm_sqr();
                self.reference[i] += r_row[m].norm_sqr();
            }
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &EvmAccumulator) -> Result<()> {
        if self.active != other.active {
            return arg_err("cannot merge EVM accumulators over different subcarrier sets");
        }
        for i in 0..self.active.len() {
            self.error[i] += other.error[i];
            self.reference[i] += other.reference[i];
        }
        Ok(())
    }

    pub fn result(&self) -> EvmResult {
        let err: f64 = self.error.iter().sum();
        let refp: f64 = self.reference.iter().sum();
        let ratio = if refp > 0.0 { err / refp } else { 0.0 };
        let per_subcarrier = self
            .active
            .iter()
            .zip(self.error.iter().zip(&self.reference))
            .map(|(&m, (&e, &r))| (m, if r > 0.0 { e / r } else { 0.0 }))
            .collect();
        EvmResult {
            ratio,
            db: to_db(ratio),
            per_subcarrier,
        }
    }
}

/// EVM of `estimated` against `reference` over `active` subcarriers.
pub fn evm(estimated: &SymbolGrid, reference: &SymbolGrid, active: &[usize]) -> Result<EvmResult> {
    let mut acc = EvmAccumulator::new(active);
    acc.add(estimated, reference)?;
    Ok(acc.result())
}
