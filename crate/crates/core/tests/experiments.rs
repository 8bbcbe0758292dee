use fraclab::experiments::*;
use std::path::Path;
use std::process::Command;

fn parse(name: &str, json: &str) -> ExperimentConfig {
    ExperimentConfig::parse(name, json).unwrap()
}

fn summary_bytes(dir: &Path) -> Vec<u8> {
    std::fs::read(dir.join(SUMMARY_FILE)).unwrap()
}

#[test]
fn rerun_from_emitted_config_is_bitwise_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = parse("eigenfunction", r#"{"s": 0.5, "n": 512}"#);
    let first = run(&cfg).unwrap();
    first.write(&tmp.path().join("a")).unwrap();
    let text = std::fs::read_to_string(tmp.path().join("a").join(CONFIG_FILE)).unwrap();
    let again = run(&parse("eigenfunction", &text)).unwrap();
    again.write(&tmp.path().join("b")).unwrap();
    assert_eq!(summary_bytes(&tmp.path().join("a")), summary_bytes(&tmp.path().join("b")));
    let points_a = std::fs::read(tmp.path().join("a").join(POINTS_FILE)).unwrap();
    let points_b = std::fs::read(tmp.path().join("b").join(POINTS_FILE)).unwrap();
    assert_eq!(points_a, points_b);
    assert!(tmp.path().join("a").join(TIMING_FILE).exists());
}

#[test]
fn reports_are_self_consistent() {
    for (name, json) in [
        ("translation", r#"{"s": 0.5, "n": 512}"#),
        ("domain", r#"{"s": 0.25, "n": 512}"#),
        ("spectral", r#"{"s": 0.75, "n": 256}"#),
        ("besov", r#"{"s": 0.5, "n": 512}"#),
    ] {
        let out = run(&parse(name, json)).unwrap();
        let r = &out.report;
        assert!(r.is_consistent());
        assert_eq!(r.experiment, name);
        for f in &r.fits {
            assert!(f.fit.params.windows(2).all(|w| w[0] > w[1]));
            assert!(f.fit.fit_residual.is_finite());
            assert_eq!(f.pass, f.fit.slope >= f.exponent - f.tolerance);
        }
    }
}

#[test]
fn disk_domain_perturbation_passes_with_widened_tolerance() {
    let cfg = parse(
        "domain",
        r#"{"s": 0.5, "n": 64,
            "domain": {"type": "ball", "center": [0.0, 0.0], "radius": 1.0},
            "eps": [0.04, 0.08, 0.12, 0.2],
            "cone": {"rho": 0.5, "theta": 1.2}}"#,
    );
    let out = run(&cfg).unwrap();
    let fit = out.report.fit("solution").unwrap();
    assert_eq!(fit.tolerance, 0.15);
    assert!(out.report.pass, "{:?}", out.report);
}

#[test]
fn spectral_sweep_covers_three_eigenvalues() {
    let out = run(&parse("spectral", r#"{"s": 0.5, "n": 1024, "count": 3}"#)).unwrap();
    assert_eq!(out.report.fits.len(), 3);
    assert!(out.report.fits.iter().all(|f| f.pass && f.fit.slope > 0.85));
    assert!(out.report.check("monotone_under_erosion").unwrap().pass);
}

#[test]
fn eigenfunctions_converge_along_the_sweep() {
    let out = run(&parse("eigenfunction", r#"{"s": 0.5, "n": 1024}"#)).unwrap();
    assert!(out.report.pass, "{:?}", out.report);
    let excess: Vec<f64> = out
        .points
        .iter()
        .filter(|p| p.series == "excess")
        .map(|p| p.measurement)
        .collect();
    assert!(excess.windows(2).all(|w| w[0] <= w[1]));
    assert!(excess.iter().all(|e| *e < 1.0));
    let delta = out.report.diagnostics["delta_discrete"];
    let lambda_1 = out.report.diagnostics["lambda_1_reference"];
    assert!(delta > 0.0 && delta < 0.5 / lambda_1);
}

#[test]
fn fit_is_reexported() {
    let f = fit_loglog(&[1.0, 2.0, 4.0, 8.0], &[3.0, 6.0, 12.0, 24.0]).unwrap();
    assert!((f.slope - 1.0).abs() < 1e-14);
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fraclab"))
}

#[test]
fn cli_exit_code_follows_the_pass_flag() {
    let tmp = tempfile::tempdir().unwrap();
    let good = tmp.path().join("good.json");
    std::fs::write(&good, r#"{"s": 0.5, "n": 512}"#).unwrap();
    let status = cli()
        .args(["rates", "--experiment", "besov", "--config"])
        .arg(&good)
        .arg("--out-dir")
        .arg(tmp.path().join("good"))
        .env("FRACLAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(status.status.success());
    for file in [CONFIG_FILE, SUMMARY_FILE, POINTS_FILE, TIMING_FILE] {
        assert!(tmp.path().join("good").join(file).exists());
    }

    // an impossible tolerance makes the slope test fail
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, r#"{"s": 0.5, "n": 512, "tolerance": -5.0}"#).unwrap();
    let status = cli()
        .args(["rates", "--experiment", "besov", "--config"])
        .arg(&bad)
        .arg("--out-dir")
        .arg(tmp.path().join("bad"))
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));

    let threaded = cli()
        .args(["rates", "--experiment", "besov", "--config"])
        .arg(&good)
        .arg("--out-dir")
        .arg(tmp.path().join("threaded"))
        .env("FRACLAB_THREADS", "3")
        .output()
        .unwrap();
    assert!(threaded.status.success());
    assert_eq!(summary_bytes(&tmp.path().join("good")), summary_bytes(&tmp.path().join("threaded")));
}

#[test]
fn cli_oracle_check_and_geometry() {
    let out = cli().args(["oracle-check", "--dim", "1", "--s", "0.5", "--n", "512"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["kappa"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["residual_l2"].as_f64().unwrap() < 0.03);

    let out = cli()
        .args([
            "geometry",
            "--a",
            r#"{"type":"interval","a":-1,"b":1}"#,
            "--b",
            r#"{"type":"interval","a":-0.5,"b":0.5}"#,
            "--n",
            "200",
        ])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["excess_ba"].as_f64().unwrap(), 0.0);
    assert!((v["dfront_ba"].as_f64().unwrap() - 0.5).abs() <= 0.01);

    let out = cli().args(["solve", "--s", "0.5", "--rhs", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
