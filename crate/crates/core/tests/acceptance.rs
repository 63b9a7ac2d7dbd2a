//! Acceptance criteria 1-8, one PASS/FAIL line each on stderr.

use std::io::Write;
use std::time::Instant;

use coexsim::dsp::{to_db, RngStream};
use coexsim::interference::{psd_table, PsdModel};
use coexsim::metrics::BerResult;
use coexsim::report::{equal_crossing, interference_stats, interftable, power_sweep, selftest, PowerSweepResult};
use coexsim::scenario::{run_point, sweep_tau, Scenario, ScenarioConfig};
use coexsim::waveform::PHYDYAS_K4;

struct Outcome {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn report(o: &Outcome) {
    let tag = if o.passed { "PASS" } else { "FAIL" };
    // bypasses libtest output capture
    let _ = writeln!(std::io::stderr(), "criterion {} [{tag}] {}: {}", o.id, o.name, o.detail);
}

fn desk() -> ScenarioConfig {
    ScenarioConfig::default()
}

fn c1_c2(cfg: &ScenarioConfig) -> (Outcome, Outcome) {
    let t = interftable(cfg).expect("interference tables");
    let (h2, h20, p2) = (t.het.get_db(2), t.het.get_db(20), t.psd.get_db(2));
    let ok1 = (h2 + 18.5).abs() <= 1.5 && (h20 + 40.0).abs() <= 2.0 && p2 <= -60.0;
    let c1 = Outcome {
        id: 1,
        name: "interference table levels",
        passed: ok1,
        detail: format!(
            "MC-Het l=2 {h2:.2} dB (want -18.5 +- 1.5), l=20 {h20:.2} dB (want -40 +- 2), PSD l=2 {p2:.2} dB (want <= -60)"
        ),
    };

    // unfloored PSD values for the gap
    let psd = psd_table(PsdModel::Phydyas, 20).expect("psd table");
    let gap = |l: i64| t.het.get_db(l) - 10.0 * psd.get(l).log10();
    let min_all = (2..=20).map(gap).fold(f64::INFINITY, f64::min);
    let min_mid = (3..=10).map(gap).fold(f64::INFINITY, f64::min);
    let c2 = Outcome {
        id: 2,
        name: "PSD model vs Monte-Carlo gap",
        passed: min_all >= 20.0 && min_mid >= 45.0,
        detail: format!("min gap l in [2,20] {min_all:.1} dB (want >= 20), l in [3,10] {min_mid:.1} dB (want >= 45)"),
    };
    (c1, c2)
}

fn at_zero<'a>(points: &'a [coexsim::scenario::PowerPoint]) -> &'a coexsim::scenario::PowerPoint {
    points.iter().find(|p| p.sigma2_db == 0.0).expect("0 dB point in sweep")
}

fn c3_c4(s: &PowerSweepResult) -> (Outcome, Outcome) {
    let het = at_zero(&s.het);
    let hom = at_zero(&s.hom);
    let i21 = to_db(het.user1.injected);
    let i12 = to_db(het.user2.injected);
    let c3 = Outcome {
        id: 3,
        name: "Het symmetry at equal power",
        passed: (i21 - i12).abs() <= 0.5,
        detail: format!("I 2->1 {i21:.2} dB, I 1->2 {i12:.2} dB, difference {:.2} dB (want <= 0.5)", (i21 - i12).abs()),
    };
    let hom1 = to_db(hom.user1.injected);
    let gain = hom1 - i21;
    let c4 = Outcome {
        id: 4,
        name: "Hom to Het reduction onto the incumbent",
        passed: (gain - 5.0).abs() <= 1.5,
        detail: format!("Hom {hom1:.2} dB, Het {i21:.2} dB, reduction {gain:.2} dB (want 5 +- 1.5)"),
    };
    (c3, c4)
}

fn c5_c6(s: &PowerSweepResult) -> (Outcome, Outcome) {
    let x = s.powers();
    let e1: Vec<f64> = s.het.iter().map(|p| p.user1.evm.db).collect();
    let e2: Vec<f64> = s.het.iter().map(|p| p.user2.evm.db).collect();
    let m1: Vec<f64> = s.model.iter().map(|p| p.evm1_db).collect();
    let m2: Vec<f64> = s.model.iter().map(|p| p.evm2_db).collect();
    let measured = equal_crossing(&x, &e1, &e2);
    let model = equal_crossing(&x, &m1, &m2);
    let ok5 = measured.is_some_and(|c| c.abs() <= 0.5) && model.is_some_and(|c| (c - 3.0).abs() <= 0.5);
    let c5 = Outcome {
        id: 5,
        name: "EVM crossings",
        passed: ok5,
        detail: format!("measured Het crossing {measured:.2?} dB (want 0 +- 0.5), PSD-model crossing {model:.2?} dB (want 3 +- 0.5)"),
    };
    let het = at_zero(&s.het);
    let hom = at_zero(&s.hom);
    let r1 = het.user1.ber.ber / hom.user1.ber.ber;
    let r2 = het.user2.ber.ber / hom.user2.ber.ber;
    let inside = |r: f64| (0.35..=0.65).contains(&r);
    let c6 = Outcome {
        id: 6,
        name: "BER halving at equal power",
        passed: inside(r1) && inside(r2),
        detail: format!("Het/Hom BER ratio user 1 {r1:.3}, user 2 {r2:.3} (want in [0.35, 0.65])"),
    };
    (c5, c6)
}

fn c7(cfg: &ScenarioConfig) -> Outcome {
    let rng = RngStream::new(cfg.seed, 7);
    let cp = cfg.cp_len as i64;
    let s = (cfg.fft_size + cfg.cp_len) as i64;
    let absorbed: Vec<i64> = (0..=cp).collect();
    let hom = sweep_tau(&cfg.with_scenario(Scenario::Hom), &absorbed, &rng).expect("hom tau sweep");
    let hom_errors: u64 = hom.iter().map(|p| p.user1.ber.errors).sum();
    let min_bits = hom.iter().map(|p| p.user1.ber.bits).min().unwrap_or(0);

    // the absorbed range plus points spread over the rest of [0, M + N_CP)
    let mut grid = absorbed.clone();
    grid.extend((1..8).map(|k| k * s / 8));
    let het = sweep_tau(&cfg.with_scenario(Scenario::Het), &grid, &rng).expect("het tau sweep");
    let bers: Vec<BerResult> = het.iter().map(|p| p.user1.ber).collect();
    let flat = bers.iter().all(|a| bers.iter().all(|b| a.overlaps(b)));
    let lo = bers.iter().map(|b| b.ber).fold(f64::INFINITY, f64::min);
    let hi = bers.iter().map(|b| b.ber).fold(0.0, f64::max);
    let max_low = bers.iter().map(|b| b.ci_low).fold(0.0, f64::max);
    let min_high = bers.iter().map(|b| b.ci_high).fold(f64::INFINITY, f64::min);
    Outcome {
        id: 7,
        name: "CP absorption and Het delay insensitivity",
        passed: hom_errors == 0 && min_bits >= 1_000_000 && flat,
        detail: format!(
            "Hom errors over tau 0..={cp}: {hom_errors} (min {min_bits} bits per point); Het BER over {} delays in [{lo:.3e}, {hi:.3e}], \
             highest lower bound {max_low:.3e} vs lowest upper bound {min_high:.3e} (want all intervals intersecting)",
            grid.len()
        ),
    }
}

fn c8(cfg: &ScenarioConfig) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut notes = Vec::new();

    for c in selftest(&PHYDYAS_K4) {
        if !c.passed {
            failures.push(format!("{} ({})", c.name, c.detail));
        }
    }

    // E|eta|^2 against sigma_2^2 in log-log
    let rng = RngStream::new(cfg.seed, 8);
    let short = ScenarioConfig {
        n_symbols: 2_000,
        ..cfg.clone()
    };
    let powers = [-20.0, -10.0, 0.0, 10.0, 20.0];
    let ys: Vec<f64> = powers
        .iter()
        .map(|&p| to_db(run_point(&short.with_sigma2_db(p), &rng).expect("point").user1.injected))
        .collect();
    let mx = powers.iter().sum::<f64>() / powers.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let slope = powers.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / powers.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
    notes.push(format!("slope {slope:.4}"));
    if (slope - 1.0).abs() > 0.02 {
        failures.push(format!("linearity slope {slope:.4}"));
    }

    let st = interference_stats(cfg).expect("interference statistics");
    notes.push(format!(
        "KS D {:.4} vs {:.4}, whiteness {:.3}",
        st.stats.ks_re.statistic, st.stats.ks_re.critical_1pct, st.stats.whiteness
    ));
    if !st.stats.ks_re.accepts {
        failures.push("Gaussianity of Het eta".into());
    }
    if st.stats.whiteness <= 0.05 {
        failures.push("non-whiteness of Het eta".into());
    }

    let small = ScenarioConfig {
        n_symbols: 400,
        table_symbols: 400,
        ..cfg.clone()
    };
    let same = interftable(&small).expect("table") == interftable(&small).expect("table")
        && run_point(&small, &rng).expect("point") == run_point(&small, &rng).expect("point");
    if !same {
        failures.push("determinism".into());
    }

    let secs = start.elapsed().as_secs_f64();
    notes.push(format!("{secs:.1} s"));
    if secs > 60.0 {
        failures.push(format!("runtime {secs:.1} s"));
    }
    Outcome {
        id: 8,
        name: "property suite",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("all checks pass ({})", notes.join(", "))
        } else {
            format!("failed: {} ({})", failures.join("; "), notes.join(", "))
        },
    }
}

#[test]
fn acceptance_criteria() {
    let cfg = desk();
    let mut outcomes = Vec::new();
    let (a, b) = c1_c2(&cfg);
    outcomes.extend([a, b]);
    let sweep = power_sweep(&cfg).expect("power sweep");
    let (a, b) = c3_c4(&sweep);
    outcomes.extend([a, b]);
    let (a, b) = c5_c6(&sweep);
    outcomes.extend([a, b]);
    outcomes.push(c7(&cfg));
    outcomes.push(c8(&cfg));

    for o in &outcomes {
        report(o);
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| format!("{} ({})", o.id, o.name)).collect();
    assert!(failed.is_empty(), "failed criteria: {}", failed.join(", "));
}
