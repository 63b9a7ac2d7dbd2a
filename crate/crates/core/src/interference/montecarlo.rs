use rayon::prelude::*;

use super::{InterferenceTable, TableLabel};
use crate::dsp::{ComplexSignal, NeumaierSum, RngStream};
use crate::error::{arg_err, Result};
use crate::waveform::{map_grid, Transceiver, WaveformConfig, WaveformKind};

/// Default number of victim symbols for a table estimate.
pub const DEFAULT_TABLE_SYMBOLS: usize = 10_000;

const MIN_SYMBOLS: usize = 100;
const TAG_TABLE: u64 = 0x7461_626c_6500_0001;
const TAG_FULL: u64 = 0x7461_626c_6500_0002;

/// Sample layout of one victim burst and one interfering burst.
///
/// The interferer starts early enough, and runs long enough, that every
/// sample of the victim burst sees it in steady state for any delay up to
/// `tau_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Placement {
    pub victim_origin: usize,
    pub interferer_origin: usize,
    pub interferer_symbols: usize,
    pub len: usize,
}

impl Placement {
    /// Interferer frame delayed by `tau` samples relative to the victim frame.
    pub fn new(victim: &Transceiver, victim_symbols: usize, interferer: &Transceiver, tau: i64, tau_max: usize) -> Self {
        assert!(tau.unsigned_abs() as usize <= tau_max, "delay exceeds tau_max");
        let s_i = interferer.stride();
        let lead = interferer.ramp_up() + s_i;
        let victim_origin = lead + tau_max;
        let interferer_origin = (victim_origin as i64 + tau - lead as i64) as usize;
        let victim_end = victim_origin + victim.config().burst_len(victim_symbols);
        // sized for the earliest start so the count does not depend on tau
        let interferer_symbols = (victim_end - (victim_origin - tau_max - lead)).div_ceil(s_i) + 2;
        let interferer_end = interferer_origin + interferer.config().burst_len(interferer_symbols);
        Self {
            victim_origin,
            interferer_origin,
            interferer_symbols,
            len: victim_end.max(interferer_end),
        }
    }
}

/// Knobs of the table estimator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McTableOptions {
    /// Victim symbols analyzed per random delay draw.
    pub symbols_per_trial: usize,
}

impl Default for McTableOptions {
    fn default() -> Self {
        Self { symbols_per_trial: 20 }
    }
}

/// Delay span `S`: delays are drawn on `[-S/2, S/2)` samples, with `S` the
/// CP-OFDM symbol length of whichever user runs CP-OFDM.
pub(crate) fn tau_span(a: &WaveformConfig, b: &WaveformConfig) -> usize {
    [a, b]
        .iter()
        .filter(|c| c.kind == WaveformKind::CpOfdm)
        .map(|c| c.stride())
        .max()
        .unwrap_or(a.fft_size)
}

pub(crate) fn draw_tau(rng: &mut RngStream, span: usize) -> i64 {
    let s = span as i64;
    rng.uniform_int(-s / 2, (s + 1) / 2)
}

fn table_label(victim: WaveformKind, interferer: WaveformKind) -> Result<TableLabel> {
    match (victim, interferer) {
        (WaveformKind::CpOfdm, WaveformKind::CpOfdm) => Ok(TableLabel::McHom),
        (WaveformKind::Oqam, WaveformKind::CpOfdm) => Ok(TableLabel::McHet12),
        (WaveformKind::CpOfdm, WaveformKind::Oqam) => Ok(TableLabel::McHet21),
        (WaveformKind::Oqam, WaveformKind::Oqam) => arg_err("no table label for OQAM interfering with OQAM"),
    }
}

/// Per-bin mean of `|eta|^2` (complex-equivalent scale) at the victim
/// demodulator for one delay draw, interferer alone at unit power.
fn trial_bins(
    victim: &Transceiver,
    interferer: &Transceiver,
    n_victim: usize,
    span: usize,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    let tau_max = span.div_ceil(2);
    let tau = draw_tau(rng, span);
    let place = Placement::new(victim, n_victim, interferer, tau, tau_max);
    let icfg = interferer.config();
    let constellation = interferer.constellation();
    let bits = rng.bits(place.interferer_symbols * icfg.active.len() * constellation.bits_per_symbol());
    let grid = map_grid(
        constellation,
        &bits,
        place.interferer_symbols,
        icfg.fft_size,
        &icfg.active,
        interferer.slot_power(),
    )?;
    let tx = interferer.modulate(&grid)?;
    let vcfg = victim.config();
    let mut rx = ComplexSignal::zeros(place.len, vcfg.fft_size, vcfg.subcarrier_spacing);
    rx.add_at(tx.samples(), place.interferer_origin, 1.0);
    let bins = victim.demodulate_bins(&rx.samples()[place.victim_origin..], 0..n_victim)?;
    let scale = victim.slots_per_qam_symbol() / n_victim as f64;
    let mut acc = vec![0.0; vcfg.fft_size];
    for row in &bins {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v.norm_sqr();
        }
    }
    acc.iter_mut().for_each(|a| *a *= scale);
    Ok(acc)
}

/// Runs `trials` independent delay draws in parallel; output is in trial order.
fn run_trials(
    victim: &Transceiver,
    interferer: &Transceiver,
    trials: usize,
    per_trial: usize,
    rng: &RngStream,
    tag: u64,
) -> Result<Vec<Vec<f64>>> {
    let span = tau_span(victim.config(), interferer.config());
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng.family(tag, t as u64);
            trial_bins(victim, interferer, per_trial, span, &mut r)
        })
        .collect()
}

fn check_pair(victim: &WaveformConfig, interferer: &WaveformConfig, n_symbols: usize) -> Result<()> {
    victim.validate()?;
    interferer.validate()?;
    if n_symbols < MIN_SYMBOLS {
        return arg_err(format!("{n_symbols} symbols are too few for a Monte-Carlo estimate (need {MIN_SYMBOLS})"));
    }
    if victim.fft_size != interferer.fft_size || victim.subcarrier_spacing != interferer.subcarrier_spacing {
        return arg_err("victim and interferer must share M and the subcarrier spacing");
    }
    Ok(())
}

/// Monte-Carlo interference table with default options.
pub fn mc_interference_table(
    victim: &WaveformConfig,
    interferer: &WaveformConfig,
    n_symbols: usize,
    rng: &RngStream,
    l_max: usize,
) -> Result<InterferenceTable> {
    mc_interference_table_with(victim, interferer, n_symbols, rng, l_max, McTableOptions::default())
}

/// Mean `|eta|^2` at the victim demodulator per spectral distance, for one
/// unit-power interferer subcarrier at `q = M/2` and random delays.
///
/// Only the interferer's kind, sizes and prototype are used from
/// `interferer`; its active set and power are replaced.
pub fn mc_interference_table_with(
    victim: &WaveformConfig,
    interferer: &WaveformConfig,
    n_symbols: usize,
    rng: &RngStream,
    l_max: usize,
    opts: McTableOptions,
) -> Result<InterferenceTable> {
    check_pair(victim, interferer, n_symbols)?;
    let m = victim.fft_size;
    let q0 = m / 2;
    if l_max == 0 || l_max >= q0 {
        return arg_err(format!("l_max must be in 1..{q0}, got {l_max}"));
    }
    if opts.symbols_per_trial == 0 {
        return arg_err("symbols_per_trial must be positive");
    }
    let label = table_label(victim.kind, interferer.kind)?;
    let mut icfg = interferer.clone();
    icfg.active = vec![q0];
    icfg.symbol_power = 1.0;
    let vt = Transceiver::new(victim)?;
    let it = Transceiver::new(&icfg)?;

    let trials = n_symbols.div_ceil(opts.symbols_per_trial);
    let per_trial = run_trials(&vt, &it, trials, opts.symbols_per_trial, rng, TAG_TABLE)?;

    let mut values = Vec::with_capacity(2 * l_max + 1);
    let mut stderr = Vec::with_capacity(2 * l_max + 1);
    for l in -(l_max as i64)..=l_max as i64 {
        let bin = (q0 as i64 - l) as usize;
        let (mean, se) = mean_stderr(per_trial.iter().map(|row| row[bin]));
        values.push(mean);
        stderr.push(se);
    }
    InterferenceTable::new(label, l_max, values, Some(stderr))
}

/// Direct measurement with the interferer's full active set: mean
/// `|eta_m|^2` (complex-equivalent, per unit interferer power) on each of
/// the victim's active subcarriers, in the order of `victim.active`.
pub fn mc_injected_power(
    victim: &WaveformConfig,
    interferer: &WaveformConfig,
    n_symbols: usize,
    rng: &RngStream,
    symbols_per_trial: usize,
) -> Result<Vec<f64>> {
    check_pair(victim, interferer, n_symbols)?;
    if symbols_per_trial == 0 {
        return arg_err("symbols_per_trial must be positive");
    }
    let vt = Transceiver::new(victim)?;
    let it = Transceiver::new(&interferer.with_power(1.0))?;
    let trials = n_symbols.div_ceil(symbols_per_trial);
    let per_trial = run_trials(&vt, &it, trials, symbols_per_trial, rng, TAG_FULL)?;
    Ok(victim
        .active
        .iter()
        .map(|&m| mean_stderr(per_trial.iter().map(|row| row[m])).0)
        .collect())
}

fn mean_stderr(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().collect::<NeumaierSum>().value() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean) * (x - mean)).collect::<NeumaierSum>().value() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::to_db;

    const M: usize = 64;
    const CP: usize = 8;

    fn cp() -> WaveformConfig {
        WaveformConfig::cp_ofdm(M, CP, vec![1], 1.0)
    }

    fn oq() -> WaveformConfig {
        WaveformConfig::oqam(M, 4, vec![1], 1.0)
    }

    /// Exact Hom table for integer delays uniform on `[-S/2, S/2)`: a
    /// delay `tau` leaves `delta` samples of the next interfering symbol
    /// inside the victim FFT window.
    fn hom_closed_form(l: i64, m: usize, cp: usize) -> f64 {
        let s = (m + cp) as i64;
        let mf = m as f64;
        let taus: Vec<i64> = (-s / 2..(s + 1) / 2).collect();
        let sum: f64 = taus
            .iter()
            .map(|&tau| {
                let delta = if tau < 0 {
                    -tau
                } else if tau as usize <= cp {
                    0
                } else {
                    tau - cp as i64
                } as f64;
                if l == 0 {
                    ((mf - delta).powi(2) + delta * delta) / (mf * mf)
                } else {
                    let x = std::f64::consts::PI * l as f64 / mf;
                    2.0 / (mf * mf) * (x * delta).sin().powi(2) / x.sin().powi(2)
                }
            })
            .sum();
        sum / taus.len() as f64
    }

    #[test]
    fn placement_covers_victim() {
        for (v, i) in [(cp(), oq()), (oq(), cp()), (cp(), cp())] {
            let vt = Transceiver::new(&v).unwrap();
            let it = Transceiver::new(&i).unwrap();
            for tau in [-36, 0, 35] {
                let p = Placement::new(&vt, 10, &it, tau, 36);
                assert_eq!(p.victim_origin as i64 + tau, (p.interferer_origin + it.ramp_up() + it.stride()) as i64);
                let steady_end = p.interferer_origin + it.ramp_up() + p.interferer_symbols * it.stride();
                assert!(steady_end >= p.victim_origin + v.burst_len(10));
                assert!(p.len >= p.victim_origin + v.burst_len(10));
            }
        }
    }

    #[test]
    fn tau_draws_cover_span() {
        let mut rng = RngStream::new(3, 0);
        let draws: Vec<i64> = (0..20_000).map(|_| draw_tau(&mut rng, 72)).collect();
        assert_eq!(*draws.iter().min().unwrap(), -36);
        assert_eq!(*draws.iter().max().unwrap(), 35);
        assert_eq!(tau_span(&oq(), &oq()), M);
        assert_eq!(tau_span(&oq(), &cp()), M + CP);
    }

    #[test]
    fn hom_matches_closed_form() {
        let rng = RngStream::new(11, 0);
        let t = mc_interference_table(&cp(), &cp(), 40_000, &rng, 8).unwrap();
        assert_eq!(t.label(), TableLabel::McHom);
        for l in [-8i64, -3, -1, 0, 1, 2, 5, 8] {
            let exact = hom_closed_form(l, M, CP);
            let got = t.get(l);
            let tol = 4.0 * t.stderr(l) + 1e-3 * exact;
            assert!((got - exact).abs() < tol, "l = {l}: {got} vs {exact} (se {})", t.stderr(l));
        }
    }

    #[test]
    fn het_tables_decay_and_are_labelled() {
        let rng = RngStream::new(5, 0);
        let t21 = mc_interference_table(&cp(), &oq(), 4_000, &rng, 10).unwrap();
        let t12 = mc_interference_table(&oq(), &cp(), 4_000, &rng, 10).unwrap();
        assert_eq!(t21.label(), TableLabel::McHet21);
        assert_eq!(t12.label(), TableLabel::McHet12);
        for t in [&t21, &t12] {
            assert!(t.get_db(1) > t.get_db(3));
            assert!(t.get_db(3) > t.get_db(10));
            assert!(t.get_db(10) > -60.0);
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let rng = RngStream::new(42, 1);
        let a = mc_interference_table(&cp(), &oq(), 200, &rng, 4).unwrap();
        let b = mc_interference_table(&cp(), &oq(), 200, &rng, 4).unwrap();
        assert_eq!(a, b);
        let c = mc_interference_table(&cp(), &oq(), 200, &RngStream::new(43, 1), 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn full_band_matches_table_sum() {
        let rng = RngStream::new(8, 0);
        let victim = WaveformConfig::cp_ofdm(M, CP, (10..20).collect(), 1.0);
        let interferer = WaveformConfig::oqam(M, 4, (20..30).collect(), 1.0);
        let direct: f64 = mc_injected_power(&victim, &interferer, 4_000, &rng, 20).unwrap().iter().sum();
        let t = mc_interference_table(&victim, &interferer, 4_000, &rng, 20).unwrap();
        let predicted = super::super::total_injected(&t, &victim.active, &interferer.active, 1.0).unwrap();
        assert!((to_db(direct) - to_db(predicted)).abs() < 0.5, "{direct} vs {predicted}");
    }

    #[test]
    fn refuses_bad_inputs() {
        let rng = RngStream::new(1, 0);
        assert!(mc_interference_table(&cp(), &oq(), 99, &rng, 4).is_err());
        assert!(mc_interference_table(&cp(), &oq(), 100, &rng, M / 2).is_err());
        assert!(mc_interference_table(&oq(), &oq(), 100, &rng, 4).is_err());
        let other = WaveformConfig::oqam(128, 4, vec![1], 1.0);
        assert!(mc_interference_table(&cp(), &other, 100, &rng, 4).is_err());
    }
}
