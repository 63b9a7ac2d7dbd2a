use num_complex::Complex64;

use crate::error::{arg_err, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    /// QAM symbols (CP-OFDM).
    Complex,
    /// PAM symbols (OFDM/OQAM); imaginary parts are zero.
    Real,
}

/// Time x subcarrier matrix of symbols, stored row-major (one row per symbol).
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolGrid {
    n_symbols: usize,
    fft_size: usize,
    kind: SymbolKind,
    data: Vec<Complex64>,
}

impl SymbolGrid {
    pub fn zeros(n_symbols: usize, fft_size: usize, kind: SymbolKind) -> Self {
        Self {
            n_symbols,
            fft_size,
            kind,
            data: vec![Complex64::new(0.0, 0.0); n_symbols * fft_size],
        }
    }

    /// Builds a grid from the values on `active`, given symbol by symbol.
    pub fn from_active(
        n_symbols: usize,
        fft_size: usize,
        kind: SymbolKind,
        active: &[usize],
        values: &[Complex64],
    ) -> Result<Self> {
        if values.len() != n_symbols * active.len() {
            return arg_err(format!(
                "{} values cannot fill {n_symbols} symbols x {} active subcarriers",
                values.len(),
                active.len()
            ));
        }
        let mut grid = Self::zeros(n_symbols, fft_size, kind);
        for (n, row) in values.chunks(active.len().max(1)).enumerate().take(n_symbols) {
            for (&m, &v) in active.iter().zip(row) {
                grid.set(n, m, v);
            }
        }
        Ok(grid)
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.data[n * self.fft_size + m]
    }

    pub fn set(&mut self, n: usize, m: usize, v: Complex64) {
        self.data[n * self.fft_size + m] = v;
    }

    pub fn row(&self, n: usize) -> &[Complex64] {
        &self.data[n * self.fft_size..(n + 1) * self.fft_size]
    }

    pub fn row_mut(&mut self, n: usize) -> &mut [Complex64] {
        &mut self.data[n * self.fft_size..(n + 1) * self.fft_size]
    }

    /// Values on `active`, symbol by symbol.
    pub fn active_values(&self, active: &[usize]) -> Vec<Complex64> {
        (0..self.n_symbols)
            .flat_map(|n| active.iter().map(move |&m| self.get(n, m)))
            .collect()
    }

    /// Copy of symbols `range` as a new grid.
    pub fn slice_symbols(&self, range: std::ops::Range<usize>) -> Self {
        let n = range.len();
        Self {
            n_symbols: n,
            fft_size: self.fft_size,
            kind: self.kind,
            data: self.data[range.start * self.fft_size..range.end * self.fft_size].to_vec(),
        }
    }

    pub fn scale(&mut self, gain: f64) {
        self.data.iter_mut().for_each(|v| *v *= gain);
    }

    /// Checks that inactive subcarriers are zero, entries are finite and
    /// real grids have no imaginary part.
    pub fn validate(&self, active: &[usize]) -> Result<()> {
        let mut is_active = vec![false; self.fft_size];
        for &m in active {
            if m >= self.fft_size {
                return arg_err(format!("active subcarrier {m} outside the grid"));
            }
            is_active[m] = true;
        }
        for n in 0..self.n_symbols {
            for (m, v) in self.row(n).iter().enumerate() {
                if !v.re.is_finite() || !v.im.is_finite() {
                    return arg_err(format!("symbol ({n}, {m}) is not finite"));
                }
                if !is_active[m] && (v.re != 0.0 || v.im != 0.0) {
                    return arg_err(format!("inactive subcarrier {m} carries data in symbol {n}"));
                }
                if self.kind == SymbolKind::Real && v.im != 0.0 {
                    return arg_err(format!("real grid has imaginary part at ({n}, {m})"));
                }
            }
        }
        Ok(())
    }
}
