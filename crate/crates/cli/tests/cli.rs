use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn coexsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coexsim")).args(args).output().expect("spawn coexsim")
}

fn run_in(dir: &Path, sub: &str, extra: &[&str]) -> Output {
    let out = dir.to_str().unwrap();
    let mut args = vec![sub, "--out", out];
    args.extend_from_slice(extra);
    coexsim(&args)
}

#[test]
fn selftest_passes() {
    let out = coexsim(&["selftest"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 7);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn missing_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), "interftable", &["--config", "/nonexistent/scenario.cfg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "scenario = het\nwobble = 3\n").unwrap();
    let out = run_in(dir.path(), "interftable", &["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wobble"));
}

#[test]
fn too_few_noise_samples_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), "stats", &["--symbols", "200"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn csv_header_and_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), "interftable", &["--symbols", "200", "--seed", "9"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("interftable.csv")).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# coexsim "), "{header}");
    assert!(header.contains(" config=") && header.ends_with(" seed=9"), "{header}");
    assert!(lines.next().unwrap().starts_with("l,"));
    assert!(dir.path().join("interftable.json").exists());
}

#[test]
fn same_seed_gives_identical_outputs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = a.path().join("short.cfg");
    fs::write(&cfg, "powers_db = -10:10:10\nsymbols_per_trial = 100\n").unwrap();
    let c = cfg.to_str().unwrap();
    for (dir, threads) in [(a.path(), "1"), (b.path(), "2")] {
        let out = run_in(dir, "ber-sweep", &["--config", c, "--symbols", "300", "--seed", "4", "--threads", threads]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let csv = |d: &Path| fs::read(d.join("ber_sweep.csv")).unwrap();
    assert_eq!(csv(a.path()), csv(b.path()));

    let json = |d: &Path| -> serde_json::Value {
        let mut v: serde_json::Value = serde_json::from_slice(&fs::read(d.join("ber-sweep.json")).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("duration_s");
        v
    };
    assert_eq!(json(a.path()), json(b.path()));
}
