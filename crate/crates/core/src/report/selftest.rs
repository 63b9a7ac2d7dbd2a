use std::f64::consts::PI;

use crate::dsp::{dft, idft, Complex64, RngStream};
use crate::error::Result;
use crate::interference::{psd_table, PsdModel};
use crate::waveform::{
    build_phydyas_with, map_grid, Constellation, CpOfdm, Oqam, PhydyasCoefficients, WaveformConfig, PHYDYAS_K4,
};

/// Outcome of one self-test check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match run() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn random_complex(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = RngStream::new(seed, 0);
    (0..n).map(|_| Complex64::new(rng.normal(), rng.normal())).collect()
}

/// Fast oracle suite; `coeffs` builds the prototype under test.
pub fn selftest(coeffs: &PhydyasCoefficients) -> Vec<Check> {
    let mut out = Vec::new();

    out.push(check("dft-brute-force", || {
        let n = 64;
        let x = random_complex(n, 1);
        let fast = dft(&x, n)?;
        let mut worst: f64 = 0.0;
        for (k, v) in fast.iter().enumerate() {
            let slow: Complex64 = x
                .iter()
                .enumerate()
                .map(|(i, s)| s * Complex64::from_polar(1.0, -2.0 * PI * (i * k) as f64 / n as f64))
                .sum();
            worst = worst.max((v - slow).norm());
        }
        Ok((worst <= 1e-10, format!("max error {worst:.2e}")))
    }));

    out.push(check("parseval", || {
        let n = 1024;
        let x = random_complex(n, 2);
        let time: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let freq: f64 = dft(&x, n)?.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        let back = idft(&dft(&x, n)?, n)?;
        let rt = x.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let rel = (time - freq).abs() / time;
        Ok((rel <= 1e-9 && rt <= 1e-9, format!("relative energy error {rel:.2e}, round trip {rt:.2e}")))
    }));

    out.push(check("cp-ofdm-loopback", || {
        let cfg = WaveformConfig::cp_ofdm(256, 18, (37..=72).collect(), 1.0);
        let n = 20;
        let bits = RngStream::new(3, 0).bits(n * 36 * 6);
        let grid = map_grid(Constellation::Qam64, &bits, n, 256, &cfg.active, 1.0)?;
        let chain = CpOfdm::new(&cfg)?;
        let est = chain.demodulate(chain.modulate(&grid)?.samples(), n)?;
        let worst = (0..n)
            .flat_map(|s| cfg.active.iter().map(move |&m| (s, m)))
            .map(|(s, m)| (est.get(s, m) - grid.get(s, m)).norm())
            .fold(0.0, f64::max);
        Ok((worst <= 1e-9, format!("max error {worst:.2e}")))
    }));

    out.push(check("oqam-loopback", || {
        let m = 256;
        let cfg = WaveformConfig::oqam(m, coeffs.overlap(), (73..=108).collect(), 1.0);
        let proto = build_phydyas_with(m, coeffs)?;
        let n = 40;
        let bits = RngStream::new(4, 0).bits(n * 36 * 3);
        let grid = map_grid(Constellation::Pam8, &bits, n, m, &cfg.active, 0.5)?;
        let chain = Oqam::new(&cfg, &proto)?;
        let est = chain.demodulate(chain.modulate(&grid)?.samples(), n)?;
        let (mut err, mut pow) = (0.0, 0.0);
        let edge = 2 * coeffs.overlap();
        for s in edge..n - edge {
            for &i in &cfg.active {
                err += (est.get(s, i).re - grid.get(s, i).re).powi(2);
                pow += grid.get(s, i).re.powi(2);
            }
        }
        let db = 10.0 * (err / pow).log10();
        Ok((db <= -55.0, format!("residual {db:.1} dB")))
    }));

    out.push(check("prototype-frequency-samples", || {
        let proto = build_phydyas_with(256, coeffs)?;
        let x: Vec<Complex64> = proto.coefficients().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let spec = dft(&x, x.len())?;
        let peak = spec[0].norm();
        let worst = (0..8)
            .map(|k| (spec[k].norm() / peak - PHYDYAS_K4.sample(k as i64)).abs())
            .fold(0.0, f64::max);
        Ok((worst <= 1e-6, format!("max deviation from published samples {worst:.2e}")))
    }));

    out.push(check("psd-power-partition", || {
        let t = psd_table(PsdModel::Phydyas, 8)?;
        let dev = (t.sum() - 1.0).abs();
        Ok((dev <= 1e-4, format!("sum of leakage table {:.8}", t.sum())))
    }));

    out.push(check("gray-mapping-round-trip", || {
        let bits = RngStream::new(5, 0).bits(6 * 4096);
        let q = Constellation::Qam64;
        let ok_q = q.demap(&q.map(&bits, 1.0)?, 1.0) == bits;
        let p = Constellation::Pam8;
        let ok_p = p.demap(&p.map(&bits, 0.5)?, 0.5) == bits;
        Ok((ok_q && ok_p, format!("64-QAM {ok_q}, 8-PAM {ok_p}")))
    }));

    out
}
