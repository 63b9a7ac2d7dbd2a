use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dsp::{from_db, to_db, Complex64, RngStream};
use crate::error::Result;
use crate::interference::{gaussian_approx, mc_interference_table, psd_table, InterferenceTable, PsdModel};
use crate::metrics::{ber_awgn_64qam, ber_awgn_8pam, noise_statistics, NoiseStats};
use crate::scenario::{collect_eta, sweep_power, sweep_tau, PowerPoint, Scenario, ScenarioConfig, TauPoint, User};
use crate::waveform::WaveformKind;

const TAG_TABLE_HET: u64 = 10;
const TAG_TABLE_HOM: u64 = 11;
const TAG_SWEEP: u64 = 20;
const TAG_TAU: u64 = 30;
const TAG_STATS: u64 = 40;
const TAG_CONTROL: u64 = 41;

fn base(cfg: &ScenarioConfig, tag: u64) -> RngStream {
    RngStream::new(cfg.seed, 0).family(tag, 0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterfTableResult {
    pub psd: InterferenceTable,
    pub het: InterferenceTable,
    pub hom: InterferenceTable,
}

impl InterfTableResult {
    /// `l, psd_dB, mc_het_dB, mc_het_stderr_dB, mc_hom_dB, mc_hom_stderr_dB`
    pub fn csv(&self) -> String {
        let mut out = String::from("l,psd_dB,mc_het_dB,mc_het_stderr_dB,mc_hom_dB,mc_hom_stderr_dB\n");
        for l in self.het.distances() {
            let _ = writeln!(
                out,
                "{l},{:.4},{:.4},{:.4},{:.4},{:.4}",
                self.psd.get_db(l),
                self.het.get_db(l),
                self.het.stderr_db(l),
                self.hom.get_db(l),
                self.hom.stderr_db(l)
            );
        }
        out
    }
}

/// PSD-model table for OQAM onto CP-OFDM next to the Monte-Carlo Het and Hom tables.
pub fn interftable(cfg: &ScenarioConfig) -> Result<InterfTableResult> {
    let u1 = cfg.user1();
    let het = cfg.with_scenario(Scenario::Het).user2();
    let hom = cfg.with_scenario(Scenario::Hom).user2();
    Ok(InterfTableResult {
        psd: psd_table(PsdModel::Phydyas, cfg.l_max)?,
        het: mc_interference_table(&u1, &het, cfg.table_symbols, &base(cfg, TAG_TABLE_HET), cfg.l_max)?,
        hom: mc_interference_table(&u1, &hom, cfg.table_symbols, &base(cfg, TAG_TABLE_HOM), cfg.l_max)?,
    })
}

/// Prediction of the PSD-based model with white Gaussian interference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub sigma2_db: f64,
    pub evm1_db: f64,
    pub evm2_db: f64,
    pub ber1: f64,
    pub ber2: f64,
}

/// Per-subcarrier Gaussian variances for a unit-power interferer.
fn model_variances(table: &InterferenceTable, victim: &[usize], interferer: &[usize]) -> Vec<f64> {
    victim.iter().map(|&m| gaussian_approx(table, m, interferer).variance).collect()
}

fn mean_ber(vars: &[f64], signal: f64, interferer: f64, ber: fn(f64) -> f64) -> f64 {
    vars.iter()
        .map(|&v| if v * interferer > 0.0 { ber(signal / (v * interferer)) } else { 0.0 })
        .sum::<f64>()
        / vars.len() as f64
}

/// PSD-model EVM and BER of both users in the Het scenario.
pub fn psd_model_curve(cfg: &ScenarioConfig, powers_db: &[f64]) -> Result<Vec<ModelPoint>> {
    let all = cfg.l1.iter().chain(&cfg.l2);
    let span = all.clone().max().unwrap() - all.min().unwrap();
    let het = cfg.with_scenario(Scenario::Het);
    debug_assert_eq!(het.user2().kind, WaveformKind::Oqam);
    let onto1 = psd_table(PsdModel::for_config(&het.user2()), span)?;
    let onto2 = psd_table(PsdModel::for_config(&het.user1()), span)?;
    let v1 = model_variances(&onto1, &cfg.l1, &cfg.l2);
    let v2 = model_variances(&onto2, &cfg.l2, &cfg.l1);
    let s1 = from_db(cfg.sigma1_db);
    Ok(powers_db
        .iter()
        .map(|&p| {
            let s2 = from_db(p);
            let evm1 = v1.iter().sum::<f64>() / v1.len() as f64 * s2 / s1;
            let evm2 = v2.iter().sum::<f64>() / v2.len() as f64 * s1 / s2;
            ModelPoint {
                sigma2_db: p,
                evm1_db: to_db(evm1),
                evm2_db: to_db(evm2),
                ber1: mean_ber(&v1, s1, s2, ber_awgn_64qam),
                ber2: mean_ber(&v2, s2, s1, ber_awgn_8pam),
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSweepResult {
    pub het: Vec<PowerPoint>,
    pub hom: Vec<PowerPoint>,
    pub model: Vec<ModelPoint>,
}

impl PowerSweepResult {
    /// `sigma2_dB, evm1_het_dB, evm2_het_dB, evm1_hom_dB, evm2_hom_dB, evm1_psdmodel_dB, evm2_psdmodel_dB`
    pub fn evm_csv(&self) -> String {
        let mut out =
            String::from("sigma2_dB,evm1_het_dB,evm2_het_dB,evm1_hom_dB,evm2_hom_dB,evm1_psdmodel_dB,evm2_psdmodel_dB\n");
        for ((h, o), m) in self.het.iter().zip(&self.hom).zip(&self.model) {
            let _ = writeln!(
                out,
                "{},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4}",
                h.sigma2_db, h.user1.evm.db, h.user2.evm.db, o.user1.evm.db, o.user2.evm.db, m.evm1_db, m.evm2_db
            );
        }
        out
    }

    /// `sigma2_dB, ber1_het, ber2_het, ber1_hom, ber2_hom, ber1_psdmodel, ber2_psdmodel`
    pub fn ber_csv(&self) -> String {
        let mut out = String::from("sigma2_dB,ber1_het,ber2_het,ber1_hom,ber2_hom,ber1_psdmodel,ber2_psdmodel\n");
        for ((h, o), m) in self.het.iter().zip(&self.hom).zip(&self.model) {
            let _ = writeln!(
                out,
                "{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}",
                h.sigma2_db, h.user1.ber.ber, h.user2.ber.ber, o.user1.ber.ber, o.user2.ber.ber, m.ber1, m.ber2
            );
        }
        out
    }

    pub fn powers(&self) -> Vec<f64> {
        self.het.iter().map(|p| p.sigma2_db).collect()
    }
}

/// Het and Hom power sweeps with common random numbers, plus the PSD model.
pub fn power_sweep(cfg: &ScenarioConfig) -> Result<PowerSweepResult> {
    let rng = base(cfg, TAG_SWEEP);
    Ok(PowerSweepResult {
        het: sweep_power(&cfg.with_scenario(Scenario::Het), &cfg.powers_db, &rng)?,
        hom: sweep_power(&cfg.with_scenario(Scenario::Hom), &cfg.powers_db, &rng)?,
        model: psd_model_curve(cfg, &cfg.powers_db)?,
    })
}

/// First `x` where `a - b` changes sign, linearly interpolated.
pub fn equal_crossing(x: &[f64], a: &[f64], b: &[f64]) -> Option<f64> {
    let d: Vec<f64> = a.iter().zip(b).map(|(p, q)| p - q).collect();
    for i in 0..d.len().saturating_sub(1) {
        if d[i] == 0.0 {
            return Some(x[i]);
        }
        if d[i] * d[i + 1] < 0.0 {
            return Some(x[i] + (x[i + 1] - x[i]) * d[i] / (d[i] - d[i + 1]));
        }
    }
    d.last().filter(|v| **v == 0.0).and(x.last().copied())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerVsTauResult {
    pub het: Vec<TauPoint>,
    pub hom: Vec<TauPoint>,
}

impl BerVsTauResult {
    /// `tau, ber1_het, ber1_het_lo, ber1_het_hi, ber1_hom, ber1_hom_lo, ber1_hom_hi`
    pub fn csv(&self) -> String {
        let mut out = String::from("tau,ber1_het,ber1_het_lo,ber1_het_hi,ber1_hom,ber1_hom_lo,ber1_hom_hi\n");
        for (h, o) in self.het.iter().zip(&self.hom) {
            let (a, b) = (&h.user1.ber, &o.user1.ber);
            let _ = writeln!(
                out,
                "{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}",
                h.tau, a.ber, a.ci_low, a.ci_high, b.ber, b.ci_low, b.ci_high
            );
        }
        out
    }
}

/// Incumbent BER at each fixed delay in `cfg.taus`, Het and Hom.
pub fn ber_vs_tau(cfg: &ScenarioConfig) -> Result<BerVsTauResult> {
    let rng = base(cfg, TAG_TAU);
    Ok(BerVsTauResult {
        het: sweep_tau(&cfg.with_scenario(Scenario::Het), &cfg.taus, &rng)?,
        hom: sweep_tau(&cfg.with_scenario(Scenario::Hom), &cfg.taus, &rng)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsResult {
    pub subcarrier: usize,
    pub stats: NoiseStats,
    /// Whiteness score of i.i.d. Gaussian samples of the same length.
    pub control_whiteness: f64,
}

impl StatsResult {
    /// `bin_lo, bin_hi, density_re, gaussian_pdf`
    pub fn histogram_csv(&self) -> String {
        let h = &self.stats.histogram_re;
        let var = self.stats.variance_re;
        let mut out = String::from("bin_lo,bin_hi,density_re,gaussian_pdf\n");
        for (e, d) in h.edges.windows(2).zip(h.density()) {
            let x = 0.5 * (e[0] + e[1]);
            let pdf = (-x * x / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt();
            let _ = writeln!(out, "{:.6e},{:.6e},{:.6e},{:.6e}", e[0], e[1], d, pdf);
        }
        out
    }

    /// Lag-covariance matrix, one row per line.
    pub fn covariance_csv(&self) -> String {
        let dim = self.stats.covariance.len();
        let mut out = (0..dim).map(|j| format!("c{j}")).collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &self.stats.covariance {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.6e}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let s = &self.stats;
        format!(
            "subcarrier,samples,variance,variance_re,ks_stride,ks_statistic,ks_critical_1pct,ks_accepts,ks_statistic_all,whiteness,control_whiteness\n\
             {},{},{:.6e},{:.6e},{},{:.6e},{:.6e},{},{:.6e},{:.6},{:.6}\n",
            self.subcarrier,
            s.samples,
            s.variance,
            s.variance_re,
            s.ks_stride,
            s.ks_re.statistic,
            s.ks_re.critical_1pct,
            s.ks_re.accepts,
            s.ks_re_all,
            s.whiteness,
            self.control_whiteness
        )
    }
}

/// Distribution and correlation of OQAM interference on one incumbent subcarrier.
pub fn interference_stats(cfg: &ScenarioConfig) -> Result<StatsResult> {
    let het = cfg.with_scenario(Scenario::Het);
    let eta = collect_eta(&het, User::Incumbent, cfg.victim_subcarrier, &base(cfg, TAG_STATS))?;
    let stats = noise_statistics(&eta, cfg.max_lag)?;
    let mut rng = base(cfg, TAG_CONTROL);
    let white: Vec<Complex64> = (0..eta.len()).map(|_| Complex64::new(rng.normal(), rng.normal())).collect();
    let control_whiteness = noise_statistics(&white, cfg.max_lag)?.whiteness;
    Ok(StatsResult {
        subcarrier: cfg.victim_subcarrier,
        stats,
        control_whiteness,
    })
}
