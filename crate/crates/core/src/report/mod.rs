//! Experiment recipes, run reports and CSV/JSON output.

mod experiments;
mod selftest;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scenario::ScenarioConfig;

pub use experiments::{
    ber_vs_tau, equal_crossing, interference_stats, interftable, power_sweep, psd_model_curve, BerVsTauResult,
    InterfTableResult, ModelPoint, PowerSweepResult, StatsResult,
};
pub use selftest::{selftest, Check};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Interftable,
    EvmSweep,
    BerSweep,
    BerVsTau,
    Stats,
}

impl Experiment {
    pub fn id(self) -> &'static str {
        match self {
            Experiment::Interftable => "interftable",
            Experiment::EvmSweep => "evm-sweep",
            Experiment::BerSweep => "ber-sweep",
            Experiment::BerVsTau => "ber-vs-tau",
            Experiment::Stats => "stats",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Interftable(InterfTableResult),
    PowerSweep(PowerSweepResult),
    BerVsTau(BerVsTauResult),
    Stats(StatsResult),
}

/// Metadata and results of one command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: Experiment,
    pub version: String,
    pub config: ScenarioConfig,
    pub config_hash: String,
    pub seed: u64,
    pub payload: Payload,
    /// Wall-clock seconds; the only field that differs between identical runs.
    pub duration_s: f64,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `# coexsim <version> config=<hash> seed=<seed>`
pub fn csv_header(cfg: &ScenarioConfig) -> String {
    format!("# coexsim {VERSION} config={} seed={}\n", cfg.hash(), cfg.seed)
}

/// Runs `experiment` and returns the report plus `(file name, contents)` of every CSV.
pub fn run_experiment(experiment: Experiment, cfg: &ScenarioConfig) -> Result<(RunReport, Vec<(String, String)>)> {
    let start = std::time::Instant::now();
    let header = csv_header(cfg);
    let (payload, files) = match experiment {
        Experiment::Interftable => {
            let r = interftable(cfg)?;
            let files = vec![("interftable.csv".to_string(), header + &r.csv())];
            (Payload::Interftable(r), files)
        }
        Experiment::EvmSweep | Experiment::BerSweep => {
            let r = power_sweep(cfg)?;
            let files = if experiment == Experiment::EvmSweep {
                vec![("evm_sweep.csv".to_string(), header + &r.evm_csv())]
            } else {
                vec![("ber_sweep.csv".to_string(), header + &r.ber_csv())]
            };
            (Payload::PowerSweep(r), files)
        }
        Experiment::BerVsTau => {
            let r = ber_vs_tau(cfg)?;
            let files = vec![("ber_vs_tau.csv".to_string(), header + &r.csv())];
            (Payload::BerVsTau(r), files)
        }
        Experiment::Stats => {
            let r = interference_stats(cfg)?;
            let files = vec![
                ("stats_histogram.csv".to_string(), header.clone() + &r.histogram_csv()),
                ("stats_covariance.csv".to_string(), header.clone() + &r.covariance_csv()),
                ("stats_summary.csv".to_string(), header + &r.summary_csv()),
            ];
            (Payload::Stats(r), files)
        }
    };
    let report = RunReport {
        experiment,
        version: VERSION.to_string(),
        config: cfg.clone(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        payload,
        duration_s: start.elapsed().as_secs_f64(),
    };
    Ok((report, files))
}

/// Writes the CSVs and `<experiment>.json` into `out_dir`, creating it if needed.
pub fn write_outputs(out_dir: &Path, report: &RunReport, files: &[(String, String)]) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    for (name, text) in files {
        fs::write(out_dir.join(name), text)?;
    }
    fs::write(out_dir.join(format!("{}.json", report.experiment.id())), report.to_json()?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ScenarioConfig {
        ScenarioConfig {
            fft_size: 64,
            cp_len: 8,
            l1: (10..=17).collect(),
            l2: (18..=25).collect(),
            symbols_per_trial: 40,
            n_symbols: 200,
            table_symbols: 200,
            powers_db: vec![-2.0, 0.0, 2.0],
            taus: vec![0, 20],
            l_max: 6,
            victim_subcarrier: 17,
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn header_line() {
        let cfg = tiny();
        let h = csv_header(&cfg);
        assert!(h.starts_with(&format!("# coexsim {VERSION} config=")));
        assert!(h.ends_with(" seed=1\n"));
        assert_eq!(h.lines().count(), 1);
    }

    #[test]
    fn report_round_trips() {
        let cfg = tiny();
        for e in [Experiment::Interftable, Experiment::EvmSweep, Experiment::BerVsTau] {
            let (report, files) = run_experiment(e, &cfg).unwrap();
            let back = RunReport::from_json(&report.to_json().unwrap()).unwrap();
            assert_eq!(back, report);
            for (_, text) in &files {
                assert!(text.starts_with("# coexsim "));
            }
        }
    }

    #[test]
    fn rerun_reproduces_payload() {
        let cfg = tiny();
        let (a, fa) = run_experiment(Experiment::BerSweep, &cfg).unwrap();
        let (b, fb) = run_experiment(Experiment::BerSweep, &a.config).unwrap();
        assert_eq!(a.payload, b.payload);
        assert_eq!(fa, fb);
    }

    #[test]
    fn outputs_written() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = tiny();
        let (report, files) = run_experiment(Experiment::Interftable, &cfg).unwrap();
        write_outputs(dir.path(), &report, &files).unwrap();
        assert!(dir.path().join("interftable.csv").exists());
        assert!(dir.path().join("interftable.json").exists());
    }
}
