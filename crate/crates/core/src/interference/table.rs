use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dsp::to_db;
use crate::error::{arg_err, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableLabel {
    #[serde(rename = "PSD-CP-OFDM")]
    PsdCpOfdm,
    #[serde(rename = "PSD-PHYDYAS")]
    PsdPhydyas,
    #[serde(rename = "MC-Hom")]
    McHom,
    /// CP-OFDM incumbent onto the OQAM secondary.
    #[serde(rename = "MC-Het-1->2")]
    McHet12,
    /// OQAM secondary onto the CP-OFDM incumbent.
    #[serde(rename = "MC-Het-2->1")]
    McHet21,
}

impl std::fmt::Display for TableLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TableLabel::PsdCpOfdm => "PSD-CP-OFDM",
            TableLabel::PsdPhydyas => "PSD-PHYDYAS",
            TableLabel::McHom => "MC-Hom",
            TableLabel::McHet12 => "MC-Het-1->2",
            TableLabel::McHet21 => "MC-Het-2->1",
        })
    }
}

/// Mean interference power `I(l)` per spectral distance `l = q - m`
/// (interferer subcarrier minus victim subcarrier), for a unit-power
/// interferer, over `l` in `[-l_max, l_max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterferenceTable {
    label: TableLabel,
    l_max: usize,
    values: Vec<f64>,
    /// Standard error of each value (linear), for Monte-Carlo tables.
    stderr: Option<Vec<f64>>,
}

impl InterferenceTable {
    pub fn new(label: TableLabel, l_max: usize, values: Vec<f64>, stderr: Option<Vec<f64>>) -> Result<Self> {
        if values.len() != 2 * l_max + 1 {
            return arg_err(format!("table over l_max = {l_max} needs {} values", 2 * l_max + 1));
        }
        if stderr.as_ref().is_some_and(|s| s.len() != values.len()) {
            return arg_err("stderr length differs from values");
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return arg_err(format!("interference value {v} is not finite and non-negative"));
        }
        Ok(Self {
            label,
            l_max,
            values,
            stderr,
        })
    }

    pub fn label(&self) -> TableLabel {
        self.label
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn distances(&self) -> impl Iterator<Item = i64> {
        let l = self.l_max as i64;
        -l..=l
    }

    fn index(&self, l: i64) -> usize {
        let lm = self.l_max as i64;
        (l.clamp(-lm, lm) + lm) as usize
    }

    /// `I(l)`; beyond the table the value at `+-l_max` is used as a floor.
    pub fn get(&self, l: i64) -> f64 {
        self.values[self.index(l)]
    }

    pub fn get_db(&self, l: i64) -> f64 {
        to_db(self.get(l))
    }

    /// Standard error of `I(l)` in linear units, zero for analytical tables.
    pub fn stderr(&self, l: i64) -> f64 {
        self.stderr.as_ref().map_or(0.0, |s| s[self.index(l)])
    }

    /// Standard error expressed in dB (first-order), zero for analytical tables.
    pub fn stderr_db(&self, l: i64) -> f64 {
        let v = self.get(l);
        if v > 0.0 {
            10.0 / std::f64::consts::LN_10 * self.stderr(l) / v
        } else {
            0.0
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// CSV with columns `l, I_linear, I_dB, stderr_dB, label`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,I_linear,I_dB,stderr_dB,label\n");
        for l in self.distances() {
            let _ = writeln!(
                out,
                "{l},{:.6e},{:.4},{:.4},{}",
                self.get(l),
                self.get_db(l),
                self.stderr_db(l),
                self.label
            );
        }
        out
    }
}

fn check_disjoint(victim: &[usize], interferer: &[usize]) -> Result<()> {
    if let Some(m) = victim.iter().find(|m| interferer.contains(m)) {
        return arg_err(format!("subcarrier {m} is in both the victim and the interferer set"));
    }
    Ok(())
}

/// `sigma2 * sum_{m in victim} sum_{q in interferer} I(q - m)`.
pub fn total_injected(table: &InterferenceTable, victim: &[usize], interferer: &[usize], sigma2: f64) -> Result<f64> {
    check_disjoint(victim, interferer)?;
    let mut total = 0.0;
    for &m in victim {
        for &q in interferer {
            total += table.get(q as i64 - m as i64);
        }
    }
    Ok(sigma2 * total)
}

/// White Gaussian approximation of the interference on one victim subcarrier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianApprox {
    pub victim_subcarrier: usize,
    /// Variance for a unit-power interferer.
    pub variance: f64,
}

/// Variance `sum_{q in interferer} I(q - m)` for victim subcarrier `m`.
pub fn gaussian_approx(table: &InterferenceTable, victim_subcarrier: usize, interferer: &[usize]) -> GaussianApprox {
    let variance = interferer
        .iter()
        .filter(|&&q| q != victim_subcarrier)
        .map(|&q| table.get(q as i64 - victim_subcarrier as i64))
        .sum();
    GaussianApprox {
        victim_subcarrier,
        variance,
    }
}
