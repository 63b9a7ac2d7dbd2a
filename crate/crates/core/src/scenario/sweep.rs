use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Harness, ScenarioConfig, TauMode, TrialResult};
use crate::dsp::{Complex64, RngStream};
use crate::error::{arg_err, Result};
use crate::metrics::{BerCounter, BerResult, EvmAccumulator, EvmResult};

const TAG_TRIALS: u64 = 0x7472_6961_6c00_0001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum User {
    Incumbent,
    Secondary,
}

/// Measured performance of one user at one operating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UserPoint {
    pub evm: EvmResult,
    pub ber: BerResult,
    /// `sum_m E|eta_m|^2` over the user's subcarriers (complex-equivalent).
    pub injected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub user1: UserPoint,
    pub user2: UserPoint,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerPoint {
    pub sigma2_db: f64,
    pub user1: UserPoint,
    pub user2: UserPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauPoint {
    pub tau: i64,
    pub user1: UserPoint,
}

struct Partial {
    evm1: EvmAccumulator,
    evm2: EvmAccumulator,
    ber1: BerCounter,
    ber2: BerCounter,
}

fn partial(t: &TrialResult) -> Result<Partial> {
    Ok(Partial {
        evm1: t.user1.evm()?,
        evm2: t.user2.evm()?,
        ber1: t.user1.bit_errors()?,
        ber2: t.user2.bit_errors()?,
    })
}

fn user_point(evm: &EvmAccumulator, ber: &BerCounter, power: f64) -> UserPoint {
    let evm = evm.result();
    let injected = evm.per_subcarrier.iter().map(|(_, r)| r * power).sum();
    UserPoint {
        evm,
        ber: ber.result(),
        injected,
    }
}

/// Trial `t` of every operating point draws from the same stream, so
/// curves over power or delay use common random numbers.
fn trial_rng(rng: &RngStream, t: usize) -> RngStream {
    rng.family(TAG_TRIALS, t as u64)
}

/// All trials of one operating point, reduced in trial order.
pub fn run_point(cfg: &ScenarioConfig, rng: &RngStream) -> Result<PointResult> {
    let h = Harness::new(cfg)?;
    let trials = cfg.trials();
    let parts: Vec<Partial> = (0..trials)
        .into_par_iter()
        .map(|t| partial(&h.run(&trial_rng(rng, t))?))
        .collect::<Result<_>>()?;
    let mut acc = Partial {
        evm1: EvmAccumulator::new(&cfg.l1),
        evm2: EvmAccumulator::new(&cfg.l2),
        ber1: BerCounter::default(),
        ber2: BerCounter::default(),
    };
    for p in &parts {
        acc.evm1.merge(&p.evm1)?;
        acc.evm2.merge(&p.evm2)?;
        acc.ber1.merge(&p.ber1);
        acc.ber2.merge(&p.ber2);
    }
    Ok(PointResult {
        user1: user_point(&acc.evm1, &acc.ber1, cfg.user1().symbol_power),
        user2: user_point(&acc.evm2, &acc.ber2, cfg.user2().symbol_power),
        trials,
    })
}

/// One Monte-Carlo point per secondary power, incumbent power fixed.
pub fn sweep_power(cfg: &ScenarioConfig, powers_db: &[f64], rng: &RngStream) -> Result<Vec<PowerPoint>> {
    if powers_db.is_empty() {
        return arg_err("power list is empty");
    }
    powers_db
        .iter()
        .map(|&p| {
            let r = run_point(&cfg.with_sigma2_db(p), rng)?;
            Ok(PowerPoint {
                sigma2_db: p,
                user1: r.user1,
                user2: r.user2,
            })
        })
        .collect()
}

/// Incumbent performance at each fixed delay.
pub fn sweep_tau(cfg: &ScenarioConfig, taus: &[i64], rng: &RngStream) -> Result<Vec<TauPoint>> {
    if taus.is_empty() {
        return arg_err("delay list is empty");
    }
    taus.iter()
        .map(|&tau| {
            let r = run_point(&cfg.with_tau(TauMode::Fixed(tau)), rng)?;
            Ok(TauPoint { tau, user1: r.user1 })
        })
        .collect()
}

/// Interference samples `eta` on one subcarrier of `user`, trials concatenated.
pub fn collect_eta(cfg: &ScenarioConfig, user: User, subcarrier: usize, rng: &RngStream) -> Result<Vec<Complex64>> {
    let set = match user {
        User::Incumbent => &cfg.l1,
        User::Secondary => &cfg.l2,
    };
    if !set.contains(&subcarrier) {
        return arg_err(format!("subcarrier {subcarrier} is not used by the {user:?} user"));
    }
    let h = Harness::new(cfg)?;
    let per_trial: Vec<Vec<Complex64>> = (0..cfg.trials())
        .into_par_iter()
        .map(|t| {
            let r = h.run(&trial_rng(rng, t))?;
            Ok(match user {
                User::Incumbent => r.user1.eta(subcarrier),
                User::Secondary => r.user2.eta(subcarrier),
            })
        })
        .collect::<Result<_>>()?;
    Ok(per_trial.concat())
}
