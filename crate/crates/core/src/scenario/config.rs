use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dsp::from_db;
use crate::error::{Error, Result};
use crate::waveform::WaveformConfig;

/// Secondary user's waveform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Both users run CP-OFDM.
    Hom,
    /// The secondary runs OFDM/OQAM.
    Het,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Hom => "hom",
            Scenario::Het => "het",
        }
    }
}

/// Delay of the secondary burst relative to the incumbent frame, in samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauMode {
    /// Uniform integer on `[-(M+N_CP)/2, (M+N_CP)/2)`, redrawn per trial.
    Random,
    Fixed(i64),
}

/// Everything an experiment needs; parsed from `key = value` text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub fft_size: usize,
    pub cp_len: usize,
    pub overlap: usize,
    pub subcarrier_spacing: f64,
    pub l1: Vec<usize>,
    pub l2: Vec<usize>,
    pub sigma1_db: f64,
    pub sigma2_db: f64,
    pub tau: TauMode,
    /// Incumbent symbols per Monte-Carlo point.
    pub n_symbols: usize,
    pub symbols_per_trial: usize,
    pub seed: u64,
    pub powers_db: Vec<f64>,
    pub taus: Vec<i64>,
    pub l_max: usize,
    pub table_symbols: usize,
    pub victim_subcarrier: usize,
    pub max_lag: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::Het,
            fft_size: 256,
            cp_len: 18,
            overlap: 4,
            subcarrier_spacing: 15e3,
            l1: (37..=72).collect(),
            l2: (73..=108).collect(),
            sigma1_db: 0.0,
            sigma2_db: 0.0,
            tau: TauMode::Random,
            n_symbols: 10_000,
            symbols_per_trial: 200,
            seed: 1,
            powers_db: (-10..=10).map(|i| 2.0 * i as f64).collect(),
            taus: (0..274).step_by(6).collect(),
            l_max: 20,
            table_symbols: 10_000,
            victim_subcarrier: 72,
            max_lag: 8,
        }
    }
}

const KEYS: &[&str] = &[
    "scenario",
    "fft_size",
    "cp_len",
    "overlap",
    "subcarrier_spacing",
    "l1",
    "l2",
    "sigma1_db",
    "sigma2_db",
    "tau",
    "n_symbols",
    "symbols_per_trial",
    "seed",
    "powers_db",
    "taus",
    "l_max",
    "table_symbols",
    "victim_subcarrier",
    "max_lag",
];

fn cfg_err<T>(line: usize, msg: impl std::fmt::Display) -> Result<T> {
    Err(Error::Config(format!("line {line}: {msg}")))
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().or_else(|_| cfg_err(line, format!("bad value '{v}' for {key}")))
}

/// `"37-72"`, `"1,4,9-12"`.
fn parse_set(line: usize, key: &str, v: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (num(line, key, a.trim())?, num(line, key, b.trim())?);
                if a > b {
                    return cfg_err(line, format!("empty range {part} in {key}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(line, key, part)?),
        }
    }
    Ok(out)
}

/// `"start:step:stop"` items (stop inclusive) or single values, comma separated.
fn parse_grid(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(':').map(str::trim).collect();
        match fields.as_slice() {
            [x] => out.push(num(line, key, x)?),
            [a, s, b] => {
                let (a, s, b): (f64, f64, f64) = (num(line, key, a)?, num(line, key, s)?, num(line, key, b)?);
                if !(s > 0.0) || b < a {
                    return cfg_err(line, format!("bad grid {part} in {key}"));
                }
                let n = ((b - a) / s + 1e-9).floor() as usize;
                out.extend((0..=n).map(|i| a + s * i as f64));
            }
            _ => return cfg_err(line, format!("bad grid {part} in {key}")),
        }
    }
    Ok(out)
}

fn fmt_set(xs: &[usize]) -> String {
    let mut out = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[j] + 1 {
            j += 1;
        }
        out.push(if j > i { format!("{}-{}", xs[i], xs[j]) } else { xs[i].to_string() });
        i = j + 1;
    }
    out.join(",")
}

fn fmt_list<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return cfg_err(line, format!("expected 'key = value', got '{content}'"));
            };
            let (key, v) = (key.trim(), value.trim());
            match key {
                "scenario" => {
                    cfg.scenario = match v.to_ascii_lowercase().as_str() {
                        "hom" => Scenario::Hom,
                        "het" => Scenario::Het,
                        _ => return cfg_err(line, format!("scenario must be hom or het, got '{v}'")),
                    }
                }
                "fft_size" => cfg.fft_size = num(line, key, v)?,
                "cp_len" => cfg.cp_len = num(line, key, v)?,
                "overlap" => cfg.overlap = num(line, key, v)?,
                "subcarrier_spacing" => cfg.subcarrier_spacing = num(line, key, v)?,
                "l1" => cfg.l1 = parse_set(line, key, v)?,
                "l2" => cfg.l2 = parse_set(line, key, v)?,
                "sigma1_db" => cfg.sigma1_db = num(line, key, v)?,
                "sigma2_db" => cfg.sigma2_db = num(line, key, v)?,
                "tau" => {
                    cfg.tau = if v.eq_ignore_ascii_case("random") {
                        TauMode::Random
                    } else {
                        TauMode::Fixed(num(line, key, v)?)
                    }
                }
                "n_symbols" => cfg.n_symbols = num(line, key, v)?,
                "symbols_per_trial" => cfg.symbols_per_trial = num(line, key, v)?,
                "seed" => cfg.seed = num(line, key, v)?,
                "powers_db" => cfg.powers_db = parse_grid(line, key, v)?,
                "taus" => {
                    cfg.taus = parse_grid(line, key, v)?
                        .into_iter()
                        .map(|t| {
                            if t.fract() == 0.0 {
                                Ok(t as i64)
                            } else {
                                cfg_err(line, format!("taus must be integers, got {t}"))
                            }
                        })
                        .collect::<Result<_>>()?
                }
                "l_max" => cfg.l_max = num(line, key, v)?,
                "table_symbols" => cfg.table_symbols = num(line, key, v)?,
                "victim_subcarrier" => cfg.victim_subcarrier = num(line, key, v)?,
                "max_lag" => cfg.max_lag = num(line, key, v)?,
                _ => return cfg_err(line, format!("unknown key '{key}' (known: {})", KEYS.join(", "))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Canonical `key = value` text; parses back to the same config.
    pub fn to_text(&self) -> String {
        let tau = match self.tau {
            TauMode::Random => "random".to_string(),
            TauMode::Fixed(t) => t.to_string(),
        };
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("scenario", self.scenario.name().into());
        kv("fft_size", self.fft_size.to_string());
        kv("cp_len", self.cp_len.to_string());
        kv("overlap", self.overlap.to_string());
        kv("subcarrier_spacing", self.subcarrier_spacing.to_string());
        kv("l1", fmt_set(&self.l1));
        kv("l2", fmt_set(&self.l2));
        kv("sigma1_db", self.sigma1_db.to_string());
        kv("sigma2_db", self.sigma2_db.to_string());
        kv("tau", tau);
        kv("n_symbols", self.n_symbols.to_string());
        kv("symbols_per_trial", self.symbols_per_trial.to_string());
        kv("seed", self.seed.to_string());
        kv("powers_db", fmt_list(&self.powers_db));
        kv("taus", fmt_list(&self.taus));
        kv("l_max", self.l_max.to_string());
        kv("table_symbols", self.table_symbols.to_string());
        kv("victim_subcarrier", self.victim_subcarrier.to_string());
        kv("max_lag", self.max_lag.to_string());
        s
    }

    /// First 16 hex digits of the SHA-256 of [`ScenarioConfig::to_text`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.user1().validate()?;
        self.user2().validate()?;
        if self.l1.is_empty() || self.l2.is_empty() {
            return Err(Error::Config("l1 and l2 must be non-empty".into()));
        }
        if let Some(m) = self.l1.iter().find(|m| self.l2.contains(m)) {
            return Err(Error::Config(format!("subcarrier {m} is in both l1 and l2")));
        }
        if self.symbols_per_trial <= 2 * self.overlap {
            return Err(Error::Config(format!(
                "symbols_per_trial must exceed twice the overlap factor ({})",
                2 * self.overlap
            )));
        }
        if self.n_symbols == 0 {
            return Err(Error::Config("n_symbols must be positive".into()));
        }
        if !self.sigma1_db.is_finite() || !self.sigma2_db.is_finite() || self.powers_db.iter().any(|p| !p.is_finite()) {
            return Err(Error::Config("powers must be finite".into()));
        }
        if self.victim_subcarrier >= self.fft_size {
            return Err(Error::Config("victim_subcarrier outside the FFT".into()));
        }
        if self.l_max == 0 || self.l_max >= self.fft_size / 2 {
            return Err(Error::Config(format!("l_max must be in 1..{}", self.fft_size / 2)));
        }
        if self.max_lag == 0 {
            return Err(Error::Config("max_lag must be positive".into()));
        }
        Ok(())
    }

    /// Incumbent: CP-OFDM on `l1` at `sigma1_db`.
    pub fn user1(&self) -> WaveformConfig {
        let mut c = WaveformConfig::cp_ofdm(self.fft_size, self.cp_len, self.l1.clone(), from_db(self.sigma1_db));
        c.subcarrier_spacing = self.subcarrier_spacing;
        c
    }

    /// Secondary on `l2` at `sigma2_db`; waveform set by the scenario.
    pub fn user2(&self) -> WaveformConfig {
        let active = self.l2.clone();
        let power = from_db(self.sigma2_db);
        let mut c = match self.scenario {
            Scenario::Hom => WaveformConfig::cp_ofdm(self.fft_size, self.cp_len, active, power),
            Scenario::Het => WaveformConfig::oqam(self.fft_size, self.overlap, active, power),
        };
        c.subcarrier_spacing = self.subcarrier_spacing;
        c
    }

    pub fn with_scenario(&self, scenario: Scenario) -> Self {
        Self {
            scenario,
            ..self.clone()
        }
    }

    pub fn with_sigma2_db(&self, sigma2_db: f64) -> Self {
        Self {
            sigma2_db,
            ..self.clone()
        }
    }

    pub fn with_tau(&self, tau: TauMode) -> Self {
        Self { tau, ..self.clone() }
    }

    /// Trials needed for `n_symbols` analyzed incumbent symbols.
    pub fn trials(&self) -> usize {
        self.n_symbols.div_ceil(self.symbols_per_trial - 2 * self.overlap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_mirror_lte_setup() {
        let c = ScenarioConfig::default();
        assert_eq!((c.fft_size, c.cp_len, c.overlap), (256, 18, 4));
        assert_eq!(c.l1.first(), Some(&37));
        assert_eq!(c.l1.last(), Some(&72));
        assert_eq!(c.l2.len(), 36);
        assert_eq!(c.powers_db.first(), Some(&-20.0));
        assert_eq!(c.powers_db.last(), Some(&20.0));
        c.validate().unwrap();
    }

    #[test]
    fn parse_and_round_trip() {
        let text = "# comment\nscenario = hom\nl1 = 1-4, 9\ntau = 12   # fixed\npowers_db = -4:2:4\nseed = 77\n";
        let c = ScenarioConfig::parse(text).unwrap();
        assert_eq!(c.scenario, Scenario::Hom);
        assert_eq!(c.l1, vec![1, 2, 3, 4, 9]);
        assert_eq!(c.tau, TauMode::Fixed(12));
        assert_eq!(c.powers_db, vec![-4.0, -2.0, 0.0, 2.0, 4.0]);
        assert_eq!(c.seed, 77);
        let back = ScenarioConfig::parse(&c.to_text()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        assert_ne!(c.hash(), ScenarioConfig::default().hash());
    }

    #[test]
    fn unknown_key_rejected() {
        let e = ScenarioConfig::parse("fft_sise = 256\n").unwrap_err();
        assert!(e.to_string().contains("unknown key 'fft_sise'"), "{e}");
    }

    #[test]
    fn bad_values_rejected() {
        for text in [
            "fft_size = abc",
            "scenario = mixed",
            "l2 = 40-50",
            "cp_len = 300",
            "just a line",
            "taus = 1.5",
            "powers_db = 4:0:8",
            "symbols_per_trial = 8",
        ] {
            assert!(ScenarioConfig::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn users_follow_scenario() {
        let c = ScenarioConfig::default();
        assert_eq!(c.user2().kind, crate::waveform::WaveformKind::Oqam);
        assert_eq!(c.with_scenario(Scenario::Hom).user2().kind, crate::waveform::WaveformKind::CpOfdm);
        assert!((c.with_sigma2_db(10.0).user2().symbol_power - 10.0).abs() < 1e-12);
    }
}
