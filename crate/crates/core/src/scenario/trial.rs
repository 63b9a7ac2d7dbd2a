use std::ops::Range;

use crate::dsp::{Complex64, ComplexSignal, RngStream};
use crate::error::Result;
use crate::interference::{draw_tau, tau_span, Placement};
use crate::metrics::{BerCounter, EvmAccumulator};
use crate::waveform::{demap_grid, map_grid, Constellation, SymbolGrid, Transceiver};

use super::{ScenarioConfig, TauMode};

const TAG_TAU: u64 = 1;
const TAG_U1: u64 = 2;
const TAG_U2: u64 = 3;

/// One user's view of a trial, restricted to its analyzed symbols.
#[derive(Clone, Debug, PartialEq)]
pub struct UserTrial {
    /// Analyzed symbol indices in the user's own frame.
    pub symbols: Range<usize>,
    pub reference: SymbolGrid,
    pub estimated: SymbolGrid,
    pub active: Vec<usize>,
    pub constellation: Constellation,
    /// Power of one constellation point (per PAM slot for OQAM).
    pub slot_power: f64,
}

impl UserTrial {
    /// `eta = d_hat - d` on subcarrier `m`, one entry per analyzed symbol.
    pub fn eta(&self, m: usize) -> Vec<Complex64> {
        (0..self.reference.n_symbols())
            .map(|n| self.estimated.get(n, m) - self.reference.get(n, m))
            .collect()
    }

    pub fn evm(&self) -> Result<EvmAccumulator> {
        let mut acc = EvmAccumulator::new(&self.active);
        acc.add(&self.estimated, &self.reference)?;
        Ok(acc)
    }

    pub fn bit_errors(&self) -> Result<BerCounter> {
        let tx = demap_grid(self.constellation, &self.reference, &self.active, self.slot_power);
        let rx = demap_grid(self.constellation, &self.estimated, &self.active, self.slot_power);
        let mut c = BerCounter::default();
        c.add(&tx, &rx)?;
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    /// Delay of the secondary burst relative to the incumbent frame.
    pub tau: i64,
    pub user1: UserTrial,
    pub user2: UserTrial,
}

/// Both chains of a scenario, built once and reused across trials.
#[derive(Clone, Debug)]
pub struct Harness {
    cfg: ScenarioConfig,
    u1: Transceiver,
    u2: Transceiver,
    span: usize,
}

impl Harness {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let (c1, c2) = (cfg.user1(), cfg.user2());
        Ok(Self {
            cfg: cfg.clone(),
            u1: Transceiver::new(&c1)?,
            u2: Transceiver::new(&c2)?,
            span: tau_span(&c1, &c2),
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    fn payload(&self, t: &Transceiver, n: usize, rng: &mut RngStream) -> Result<SymbolGrid> {
        let c = t.config();
        let constellation = t.constellation();
        let bits = rng.bits(n * c.active.len() * constellation.bits_per_symbol());
        map_grid(constellation, &bits, n, c.fft_size, &c.active, t.slot_power())
    }

    /// Superimposes both bursts, demodulates each user from the composite
    /// and keeps the symbols free of burst-edge effects.
    pub fn run(&self, rng: &RngStream) -> Result<TrialResult> {
        let k = self.cfg.overlap;
        let b = self.cfg.symbols_per_trial;
        let tau = match self.cfg.tau {
            TauMode::Random => draw_tau(&mut rng.family(TAG_TAU, 0), self.span),
            TauMode::Fixed(t) => t,
        };
        let tau_max = self.span.div_ceil(2).max(tau.unsigned_abs() as usize);
        let place = Placement::new(&self.u1, b, &self.u2, tau, tau_max);

        let d1 = self.payload(&self.u1, b, &mut rng.family(TAG_U1, 0))?;
        let d2 = self.payload(&self.u2, place.interferer_symbols, &mut rng.family(TAG_U2, 0))?;
        let x1 = self.u1.modulate(&d1)?;
        let x2 = self.u2.modulate(&d2)?;
        let c1 = self.u1.config();
        let mut rx = ComplexSignal::zeros(place.len, c1.fft_size, c1.subcarrier_spacing);
        rx.add_at(x1.samples(), place.victim_origin, 1.0);
        rx.add_at(x2.samples(), place.interferer_origin, 1.0);

        let s1 = k..b - k;
        let user1 = self.user_view(&self.u1, &rx.samples()[place.victim_origin..], &d1, s1)?;

        // secondary symbols lying inside the incumbent burst
        let lo = place.victim_origin as i64 - place.interferer_origin as i64;
        let hi = lo + c1.burst_len(b) as i64;
        let within = self.u2.symbols_within(lo.max(0) as usize, hi.max(0) as usize);
        let s2 = within.start.max(k)..within.end.min(place.interferer_symbols - k);
        let s2 = s2.start..s2.end.max(s2.start);
        let user2 = self.user_view(&self.u2, &rx.samples()[place.interferer_origin..], &d2, s2)?;
        Ok(TrialResult { tau, user1, user2 })
    }

    fn user_view(&self, t: &Transceiver, y: &[Complex64], d: &SymbolGrid, symbols: Range<usize>) -> Result<UserTrial> {
        let c = t.config();
        let bins = t.demodulate_bins(y, symbols.clone())?;
        let mut estimated = SymbolGrid::zeros(symbols.len(), c.fft_size, d.kind());
        for (row, out) in bins.iter().enumerate() {
            for &m in &c.active {
                estimated.set(row, m, out[m]);
            }
        }
        Ok(UserTrial {
            symbols: symbols.clone(),
            reference: d.slice_symbols(symbols),
            estimated,
            active: c.active.clone(),
            constellation: t.constellation(),
            slot_power: t.slot_power(),
        })
    }
}

/// One trial of `cfg` with randomness from `rng`.
pub fn run_trial(cfg: &ScenarioConfig, rng: &RngStream) -> Result<TrialResult> {
    Harness::new(cfg)?.run(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Scenario;
    use crate::waveform::Transceiver;

    fn small(scenario: Scenario) -> ScenarioConfig {
        ScenarioConfig {
            scenario,
            fft_size: 64,
            cp_len: 8,
            l1: (10..=17).collect(),
            l2: (18..=25).collect(),
            symbols_per_trial: 40,
            victim_subcarrier: 17,
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn silent_secondary_leaves_incumbent_clean() {
        for s in [Scenario::Hom, Scenario::Het] {
            let cfg = small(s).with_sigma2_db(-400.0);
            let t = run_trial(&cfg, &RngStream::new(1, 0)).unwrap();
            let max = t.user1.eta(12).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(max < 1e-12, "{max}");
            assert_eq!(t.user1.bit_errors().unwrap().errors, 0);
            assert_eq!(t.user1.symbols, 4..36);
        }
    }

    #[test]
    fn cp_absorbs_small_delays() {
        for tau in 0..=8 {
            let cfg = small(Scenario::Hom).with_tau(TauMode::Fixed(tau)).with_sigma2_db(20.0);
            let t = run_trial(&cfg, &RngStream::new(2, 0)).unwrap();
            let e: f64 = t.user1.evm().unwrap().result().ratio;
            assert!(e < 1e-20, "tau = {tau}: {e}");
            assert_eq!(t.user1.bit_errors().unwrap().errors, 0);
        }
        let cfg = small(Scenario::Hom).with_tau(TauMode::Fixed(30));
        let t = run_trial(&cfg, &RngStream::new(2, 0)).unwrap();
        assert!(t.user1.evm().unwrap().result().ratio > 1e-4);
    }

    #[test]
    fn superposition_matches_interferer_alone() {
        let cfg = small(Scenario::Het).with_tau(TauMode::Fixed(-13));
        let h = Harness::new(&cfg).unwrap();
        let rng = RngStream::new(3, 0);
        let t = h.run(&rng).unwrap();

        // rebuild the secondary burst alone and run the incumbent's receiver on it
        let u1 = Transceiver::new(&cfg.user1()).unwrap();
        let u2 = Transceiver::new(&cfg.user2()).unwrap();
        let span = tau_span(&cfg.user1(), &cfg.user2());
        let place = Placement::new(&u1, cfg.symbols_per_trial, &u2, -13, span.div_ceil(2));
        let d2 = h.payload(&u2, place.interferer_symbols, &mut rng.family(TAG_U2, 0)).unwrap();
        let x2 = u2.modulate(&d2).unwrap();
        let mut rx = vec![Complex64::new(0.0, 0.0); place.len];
        rx[place.interferer_origin..place.interferer_origin + x2.len()].copy_from_slice(x2.samples());
        let alone = u1.demodulate_bins(&rx[place.victim_origin..], t.user1.symbols.clone()).unwrap();
        for &m in &cfg.l1 {
            for (row, eta) in t.user1.eta(m).iter().enumerate() {
                assert!((eta - alone[row][m]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn secondary_window_inside_incumbent_burst() {
        for tau in [-36, 0, 35] {
            let cfg = small(Scenario::Het).with_tau(TauMode::Fixed(tau));
            let t = run_trial(&cfg, &RngStream::new(4, 0)).unwrap();
            // about (B - 2K) * S / (M / 2) real slots
            assert!(t.user2.symbols.len() > 60, "{:?}", t.user2.symbols);
            assert_eq!(t.tau, tau);
            assert_eq!(t.user2.reference.n_symbols(), t.user2.symbols.len());
        }
    }

    #[test]
    fn deterministic() {
        let cfg = small(Scenario::Het);
        let a = run_trial(&cfg, &RngStream::new(5, 9)).unwrap();
        let b = run_trial(&cfg, &RngStream::new(5, 9)).unwrap();
        assert_eq!(a, b);
    }
}
